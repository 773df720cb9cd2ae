"""Dense univariate polynomials over Q, Sturm chains and exact root isolation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .exact import fmt_rat, parse_rat

__all__ = ["PolyQ", "RootInterval", "DivisionNotExact", "divide_exact", "primitive_normalize",
           "sturm_sequence", "sturm_count", "isolate_root", "isolate_all", "sign_pattern",
           "poly_gcd", "squarefree_part", "poly_arith"]


class DivisionNotExact(ArithmeticError):
    pass


class PolyQ:
    """Polynomial with Fraction coefficients in ascending degree order.

    The zero polynomial has no coefficients; otherwise the leading
    coefficient is nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def const(cls, c) -> PolyQ:
        return cls([c])

    @classmethod
    def x(cls) -> PolyQ:
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable) -> PolyQ:
        p = cls([1])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, PolyQ):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Rational)):
            return self.coeffs == PolyQ([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def _lift(self, other) -> PolyQ:
        if isinstance(other, PolyQ):
            return other
        if isinstance(other, (int, Rational)):
            return PolyQ([other])
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = max(len(self.coeffs), len(o.coeffs))
        return PolyQ(self[k] + o[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return PolyQ(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return PolyQ(c * other for c in self.coeffs)
        if not isinstance(other, PolyQ):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return PolyQ()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return PolyQ(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = PolyQ([1])
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other: PolyQ) -> tuple[PolyQ, PolyQ]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree()
        lc = other.lc()
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lc
            if c:
                quot[k - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * b
        return PolyQ(quot), PolyQ(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, (int, Rational)) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def derivative(self) -> PolyQ:
        return PolyQ(k * c for k, c in enumerate(self.coeffs) if k)

    def scale(self, k) -> PolyQ:
        return self * Fraction(k)

    def monic(self) -> PolyQ:
        return self * (1 / self.lc())

    def is_even(self) -> bool:
        return all(c == 0 for c in self.coeffs[1::2])

    def is_odd(self) -> bool:
        return all(c == 0 for c in self.coeffs[0::2])

    def even_to_z(self) -> PolyQ:
        """Rewrite an even polynomial in c as a polynomial in z = c^2."""
        if not self.is_even():
            raise ValueError("polynomial is not even")
        return PolyQ(self.coeffs[0::2])

    def to_json(self) -> list[str]:
        return [fmt_rat(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> PolyQ:
        return cls(parse_rat(s) for s in data)

    def pretty(self, var: str = "z") -> str:
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree(), -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mag = str(a) if (a != 1 or k == 0) else ""
            if k and a != 1 and a.denominator != 1:
                mag = f"({a})"
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            terms.append((sign, mag + mono))
        head_sign, head = terms[0]
        out = ("-" if head_sign == "-" else "") + head
        for s, t in terms[1:]:
            out += f" {s} {t}"
        return out

    def __repr__(self):
        return f"PolyQ({self.pretty()})"


def poly_arith(p: PolyQ, q: PolyQ, op: str) -> PolyQ:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


def divide_exact(p: PolyQ, q: PolyQ) -> PolyQ:
    quot, rem = divmod(p, q)
    if not rem.is_zero():
        raise DivisionNotExact(f"{p.pretty()} is not divisible by {q.pretty()}")
    return quot


def primitive_normalize(p: PolyQ) -> PolyQ:
    """Integer coefficients, content 1, positive leading coefficient."""
    if p.is_zero():
        raise ValueError("cannot normalize the zero polynomial")
    den = math.lcm(*(c.denominator for c in p.coeffs))
    ints = [int(c * den) for c in p.coeffs]
    g = math.gcd(*ints)
    if ints[-1] < 0:
        g = -g
    return PolyQ(Fraction(c, g) for c in ints)


def poly_gcd(p: PolyQ, q: PolyQ) -> PolyQ:
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
        if not b.is_zero():
            b = primitive_normalize(b)
    return primitive_normalize(a) if not a.is_zero() else a


def squarefree_part(p: PolyQ) -> PolyQ:
    if p.degree() < 1:
        return p
    g = poly_gcd(p, p.derivative())
    return primitive_normalize(divide_exact(p, g)) if g.degree() > 0 else primitive_normalize(p)


def sturm_sequence(p: PolyQ) -> list[PolyQ]:
    """Sturm chain p, p', -rem, ... with remainders rescaled by positive content."""
    seq = [p, p.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree() > 0:
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        # positive rescaling keeps sign variations intact
        den = math.lcm(*(c.denominator for c in r.coeffs))
        g = math.gcd(*(int(c * den) for c in r.coeffs))
        seq.append(r * Fraction(den, g))
    return seq


def _variations(seq: Sequence[PolyQ], x: Fraction) -> int:
    signs = [v for v in (s(x) for s in seq) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def sturm_count(p: PolyQ, lo, hi) -> int:
    """Number of distinct real roots of ``p`` in the open interval (lo, hi)."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo >= hi:
        raise ValueError("need lo < hi")
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    q = squarefree_part(p)
    # deflate exact rational roots sitting on the endpoints
    for e in (lo, hi):
        if q(e) == 0:
            q = divide_exact(q, PolyQ([-e, 1]))
    if q.degree() < 1:
        return 0
    seq = sturm_sequence(q)
    return _variations(seq, lo) - _variations(seq, hi)


@dataclass(frozen=True)
class RootInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if not self.lo < self.hi:
            raise ValueError("RootInterval needs lo < hi")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi


def _tight_around(q: PolyQ, r: Fraction, eps: Fraction) -> RootInterval:
    # q squarefree with q(r) == 0: shrink until r is the only root and the ends are not roots
    while sturm_count(q, r - eps, r + eps) != 1 or q(r - eps) == 0 or q(r + eps) == 0:
        eps /= 2
    return RootInterval(r - eps, r + eps)


def isolate_root(p: PolyQ, bracket: RootInterval, width) -> RootInterval:
    """Bisect ``bracket`` (holding exactly one root of ``p``) to ``width``."""
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    n = sturm_count(p, bracket.lo, bracket.hi)
    q = squarefree_part(p)
    lo, hi = bracket.lo, bracket.hi
    on_edge = [e for e in (lo, hi) if q(e) == 0]
    if n + len(on_edge) != 1:
        raise ValueError(f"bracket holds {n + len(on_edge)} roots, expected exactly one")
    if on_edge:
        return _tight_around(q, on_edge[0], width / 2)
    slo = q(lo) > 0
    while hi - lo > width:
        mid = (lo + hi) / 2
        v = q(mid)
        if v == 0:
            return _tight_around(q, mid, min(width, hi - lo) / 4)
        if (v > 0) == slo:
            lo = mid
        else:
            hi = mid
    return RootInterval(lo, hi)


def isolate_all(p: PolyQ, lo, hi, width) -> list[RootInterval]:
    """Isolate every root in (lo, hi) by recursive subdivision."""
    out: list[RootInterval] = []
    stack = [(Fraction(lo), Fraction(hi))]
    q = squarefree_part(p)
    while stack:
        a, b = stack.pop()
        n = sturm_count(q, a, b)
        if n == 0:
            continue
        if n == 1:
            out.append(isolate_root(q, RootInterval(a, b), width))
            continue
        mid = (a + b) / 2
        if q(mid) == 0:
            iv = _tight_around(q, mid, min(Fraction(width), (b - a) / 4))
            out.append(iv)
            stack.append((iv.hi, b))
            stack.append((a, iv.lo))
            continue
        stack.append((mid, b))
        stack.append((a, mid))
    return sorted(out, key=lambda r: r.lo)


def sign_pattern(p: PolyQ) -> list[str]:
    """Coefficient signs from the leading term down to the constant."""
    return ["+" if c > 0 else "-" if c < 0 else "0" for c in reversed(p.coeffs)]
