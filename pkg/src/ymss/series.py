"""Power-series solutions of the self-similar ODE at its two singular points.

    y^2 (1 - y^2) u'' + ((d - 3) y - 2 y^3) u' + (d - 2) u (1 - u^2) = 0

At the light cone y = 1 the Taylor coefficients are polynomials in the
unknown boundary value c = u(1) and are computed exactly; at the centre
y = 0 and (numerically) at y = 1 they are computed in mpmath.

The same truncated-series routine drives every case: it only needs the
coefficient ring to support ``+``, ``-``, ``*`` and multiplication by ints,
so it runs on :class:`PolyQ` and on ``mpf`` alike.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from .poly import PolyQ, divide_exact, primitive_normalize

__all__ = ["CoeffTable", "ResidualData", "ZeroSeries", "DerivationError", "derive_system",
           "residual_condition", "extract_Pm", "zero_series", "light_cone_series",
           "ode_coefficients", "dimension_from", "case_Pm"]


class DerivationError(RuntimeError):
    pass


def dimension_from(d: int | None = None, m: int | None = None) -> int:
    """Canonical odd dimension from either ``d`` or ``m`` (d = 2m + 5)."""
    if d is None and m is None:
        raise ValueError("give d or m")
    if m is not None:
        if d is not None and d != 2 * m + 5:
            raise ValueError(f"d={d} and m={m} disagree (d = 2m + 5)")
        d = 2 * m + 5
    if d % 2 == 0:
        raise ValueError(
            f"d={d} is even: all boundary values are admissible for even d, so the "
            "shooting argument for odd d does not work there")
    return d


def ode_coefficients(d: int, center: int) -> tuple[list[int], list[int]]:
    """Integer coefficients of y^2(1-y^2) and (d-3)y - 2y^3 in powers of (y - center)."""
    y = PolyQ([center, 1])
    A = y * y * (1 - y * y)
    B = (d - 3) * y - 2 * y ** 3
    return [int(c) for c in A.coeffs], [int(c) for c in B.coeffs]


def _cube_coeff(C, k, zero):
    # k-th coefficient of u^3 from the truncated list C
    sq = []
    for i in range(k + 1):
        acc = zero
        for j in range(i + 1):
            acc = acc + C[j] * C[i - j]
        sq.append(acc)
    acc = zero
    for i in range(k + 1):
        acc = acc + sq[i] * C[k - i]
    return acc


def _order_k(C, k, A, B, d, zero):
    """Coefficient of t^k in the ODE residual for the series sum C[n] t^n."""
    acc = zero
    n = len(C)
    for j, a in enumerate(A):
        i = k - j  # t^i coefficient of u''
        if a and i >= 0 and i + 2 < n:
            acc = acc + (a * (i + 2) * (i + 1)) * C[i + 2]
    for j, b in enumerate(B):
        i = k - j
        if b and i >= 0 and i + 1 < n:
            acc = acc + (b * (i + 1)) * C[i + 1]
    return acc + (d - 2) * (C[k] - _cube_coeff(C, k, zero))


def _pivot(C, idx, k, A, B, d, zero):
    """Partial derivative of the order-k residual with respect to C[idx] (idx >= k)."""
    acc = zero
    for j, a in enumerate(A):
        if a and idx - 2 == k - j:
            acc = acc + a * idx * (idx - 1)
    for j, b in enumerate(B):
        if b and idx - 1 == k - j:
            acc = acc + b * idx
    if idx == k:
        # u^3 is cubic in C, so its k-th coefficient moves with C[k] at rate 3 C[0]^2
        acc = acc + (d - 2) * (1 - 3 * C[0] * C[0])
    return acc


def _solve_step(C, idx, k, A, B, d, zero):
    """Residual at order k with C[idx] set to 0, and the linear pivot on C[idx]."""
    C[idx] = zero
    return _order_k(C, k, A, B, d, zero), _pivot(C, idx, k, A, B, d, zero)


@dataclass
class CoeffTable:
    d: int
    m: int
    cn: list[PolyQ]  # cn[0] = c, cn[n] for n = 1..m
    pivots: list[Fraction] = field(default_factory=list)

    def coeff(self, n: int) -> PolyQ:
        return self.cn[n]

    def to_json(self) -> dict:
        return {"d": self.d, "m": self.m,
                "cn": {str(n): self.cn[n].to_json() for n in range(1, self.m + 1)},
                "pivots": [str(p) for p in self.pivots]}


@dataclass
class ResidualData:
    residual: PolyQ
    pivot_checked: bool


@lru_cache(maxsize=None)
def derive_system(d: int) -> CoeffTable:
    """Solve the triangular system for c_1..c_m as polynomials in c = u(1)."""
    d = dimension_from(d=d)
    if d < 7:
        raise ValueError("need d >= 7 (m >= 1)")
    m = (d - 5) // 2
    A, B = ode_coefficients(d, 1)
    zero = PolyQ()
    C = [PolyQ([0, 1])] + [zero] * (m + 2)
    pivots = []
    for k in range(m):
        r0, piv = _solve_step(C, k + 1, k, A, B, d, zero)
        if piv.degree() > 0:
            raise DerivationError(f"pivot at order {k + 1} depends on c: {piv}")
        mu = piv[0]
        if mu == 0:
            raise DerivationError(f"zero pivot at order {k + 1} <= m = {m}")
        pivots.append(mu)
        C[k + 1] = r0 * (-1 / mu)
    table = CoeffTable(d=d, m=m, cn=C[:m + 1], pivots=pivots)
    for n in range(1, m + 1):
        if not table.cn[n].is_odd():
            raise DerivationError(f"c_{n} is not odd in c")
    return table


def residual_condition(table: CoeffTable) -> ResidualData:
    """Equation m+1: its c_{m+1} pivot must vanish; return what is left."""
    A, B = ode_coefficients(table.d, 1)
    zero = PolyQ()
    C = list(table.cn) + [zero, zero]
    res, piv = _solve_step(C, table.m + 1, table.m, A, B, table.d, zero)
    if not piv.is_zero():
        raise DerivationError(f"c_{table.m + 1} pivot is {piv}, expected exactly 0")
    if not res.is_odd():
        raise DerivationError("residual is not odd in c")
    return ResidualData(residual=res, pivot_checked=True)


def extract_Pm(res: ResidualData, m: int | None = None) -> tuple[PolyQ, tuple[int, int]]:
    """Strip the trivial factors c and 1 - c^2; return (P_m(z), multiplicities)."""
    p = res.residual
    if p.is_zero():
        raise DerivationError("residual vanishes identically")
    c, one_minus_c2 = PolyQ([0, 1]), PolyQ([1, 0, -1])
    mult = [0, 0]
    for i, f in enumerate((c, one_minus_c2)):
        while True:
            q, r = divmod(p, f)
            if not r.is_zero():
                break
            p, mult[i] = q, mult[i] + 1
    if not p.is_even():
        raise DerivationError("reduced residual is not even in c")
    Pm = primitive_normalize(p.even_to_z())
    if m is not None and Pm.degree() != m:
        raise DerivationError(f"deg P_m = {Pm.degree()}, expected {m}")
    return Pm, (mult[0], mult[1])


@lru_cache(maxsize=None)
def case_Pm(d: int) -> tuple[PolyQ, tuple[int, int]]:
    table = derive_system(d)
    return extract_Pm(residual_condition(table), table.m)


@dataclass
class ZeroSeries:
    d: int
    a: object  # mpf
    order: int
    coeffs: list  # mpf, index = power of y

    def __call__(self, y):
        return mpmath.polyval(self.coeffs[::-1], y)

    def derivative(self, y):
        return mpmath.polyval([k * c for k, c in enumerate(self.coeffs)][:0:-1], y)

    def second_derivative(self, y):
        return mpmath.polyval([k * (k - 1) * c for k, c in enumerate(self.coeffs)][:1:-1], y)


def zero_series(d: int, a, order: int = 20, prec: int = 128) -> ZeroSeries:
    """Regular solution u = 1 - a y^2 + ... at y = 0, even powers up to ``order``."""
    if order < 4 or order % 2:
        raise ValueError("order must be even and >= 4")
    with mpmath.workprec(prec):
        a = mpmath.mpf(a)
        if a < 0:
            raise ValueError("a must be non-negative")
        A, B = ode_coefficients(d, 0)
        zero = mpmath.mpf(0)
        C = [mpmath.mpf(1), zero, -a] + [zero] * (order - 1)
        for n in range(3, order + 1):
            if n % 2:
                continue
            r0, piv = _solve_step(C, n, n, A, B, d, zero)
            C[n] = -r0 / piv
        return ZeroSeries(d=d, a=a, order=order, coeffs=C[:order + 1])


def _to_mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def light_cone_series(d: int, c, free, order: int = 60, prec: int = 128) -> list:
    """Numeric Taylor coefficients of u at y = 1 (powers of y - 1).

    ``c`` is an admissible boundary value and ``free`` the undetermined
    coefficient c_{m+1}. Returns mpf coefficients C[0..order].
    """
    m = (d - 5) // 2
    with mpmath.workprec(prec):
        A, B = ode_coefficients(d, 1)
        zero = mpmath.mpf(0)
        C = [_to_mpf(c)] + [zero] * (order + 1)
        for k in range(order):
            r0, piv = _solve_step(C, k + 1, k, A, B, d, zero)
            if k == m:
                C[k + 1] = _to_mpf(free)
            else:
                C[k + 1] = -r0 / piv
        return C[:order + 1]
