"""Shooting from the centre, the map a -> c(a), and continuation past the light cone."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import mpmath
import numpy as np
from scipy.interpolate import BPoly

from . import kernels
from .exact import QuadExt
from .series import derive_system, light_cone_series, zero_series

__all__ = ["Variable", "SolutionProfile", "MonotonicityReport", "EndpointData", "AutonomousProfile",
           "IntegrationError", "ShootingError", "LemmaViolation", "integrate_interior",
           "endpoint_data", "c_of_a", "find_astar", "match_free_coefficient", "extend_exterior",
           "verify_profile", "identity_convergence", "autonomous_limit", "DEFAULTS"]

DEFAULTS = dict(tol=1e-12, delta=1e-6, tol_c=1e-8, prec_bits=128, y0=1 / 16, zero_order=20,
                launch=0.2, cone_order=60, x_end=-0.999)


class IntegrationError(RuntimeError):
    def __init__(self, msg, last_point=None):
        super().__init__(msg)
        self.last_point = last_point


class ShootingError(RuntimeError):
    pass


class LemmaViolation(RuntimeError):
    pass


class Variable(str, enum.Enum):
    Y_INTERIOR = "Y_INTERIOR"
    X_EXTERIOR = "X_EXTERIOR"


@dataclass
class MonotonicityReport:
    degenerate: bool
    u_monotone_decreasing: bool | None
    H_nonincreasing: bool | None
    H_in_bounds: bool | None
    abs_u_below_one: bool | None
    gradient_bound_ok: bool | None
    max_H: float
    min_H: float
    residual_max: float
    identity_max: float

    @property
    def lemma1_ok(self) -> bool:
        return all(bool(x) for x in (self.u_monotone_decreasing, self.H_nonincreasing,
                                     self.H_in_bounds, self.abs_u_below_one,
                                     self.gradient_bound_ok))

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class SolutionProfile:
    d: int
    variable: Variable
    grid: np.ndarray
    u: np.ndarray
    du: np.ndarray
    ddu: np.ndarray
    a: float | None = None
    diagnostics: MonotonicityReport | None = None
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not np.all(np.diff(self.grid) > 0):
            raise ValueError("profile grid must be strictly increasing")

    def interpolant(self) -> BPoly:
        """Quintic Hermite dense output through (u, u', u'') at the nodes."""
        ys = np.stack([self.u, self.du, self.ddu], axis=1)
        return BPoly.from_derivatives(self.grid, ys)

    def H(self, u=None, du=None, grid=None) -> np.ndarray:
        u = self.u if u is None else u
        du = self.du if du is None else du
        s = self.grid if grid is None else grid
        one_minus_u2 = (1.0 - u) * (1.0 + u)
        if self.variable is Variable.Y_INTERIOR:
            return 0.5 * s * s * (1 - s) * (1 + s) * du ** 2 - 0.25 * (self.d - 2) * one_minus_u2 ** 2
        return 0.5 * (1 - s) * (1 + s) * du ** 2 + 0.25 * (self.d - 2) * one_minus_u2 ** 2

    def H_rate(self, du, grid) -> np.ndarray:
        """Exact derivative of H (or H~) along solutions: -(d-4) s u'^2."""
        return -(self.d - 4) * grid * du ** 2

    def residual(self, s, u, du, ddu) -> np.ndarray:
        f = (self.d - 2) * u * (1 - u) * (1 + u)
        if self.variable is Variable.Y_INTERIOR:
            return s * s * (1 - s) * (1 + s) * ddu + ((self.d - 3) * s - 2 * s ** 3) * du + f
        return (1 - s) * (1 + s) * ddu + (self.d - 5) * s * du - f

    def rows(self):
        H = self.H()
        res = self.residual(self.grid, self.u, self.du, self.ddu)
        for i in range(len(self.grid)):
            yield self.grid[i], self.u[i], self.du[i], H[i], res[i]


def _mp(x, prec):
    with mpmath.workprec(prec):
        if isinstance(x, QuadExt):
            return x.to_mpf(prec)
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpf(x)


def _launch(d, a, order, y0_max, prec, floor=1e-20):
    zs = zero_series(d, a, order=order, prec=prec)
    y0 = mpmath.mpf(y0_max)
    last = abs(zs.coeffs[-1])
    while last * y0 ** order > floor:
        y0 /= 2
    with mpmath.workprec(prec):
        return float(y0), float(zs(y0)), float(zs.derivative(y0))


def _run(kind, d, t0, t1, u0, v0, tol, cap=10.0, max_steps=200_000):
    n, ts, us, vs, status = kernels.dopri5(kind, float(d), float(t0), float(t1), float(u0),
                                           float(v0), tol, tol, 0.0, max_steps, cap)
    ts, us, vs = np.array(ts), np.array(us), np.array(vs)
    if status == kernels.STEP_UNDERFLOW:
        raise IntegrationError(f"step size underflow at t={ts[-1]!r}", (ts[-1], us[-1], vs[-1]))
    if status == kernels.MAX_STEPS:
        raise IntegrationError(f"step budget exhausted at t={ts[-1]!r}", (ts[-1], us[-1], vs[-1]))
    ddu = kernels.batch_second_derivative(kind, float(d), ts, us, vs)
    return ts, us, vs, np.asarray(ddu), status


def integrate_interior(d: int, a: float, y_end: float | None = None, tol: float = 1e-12, *,
                       order: int = 20, y0: float = 1 / 16, prec: int = 128) -> SolutionProfile:
    """Regular solution u(a, y) from the series launch point to ``y_end``."""
    if a < 0:
        raise ValueError("a must be non-negative")
    y_end = 1 - DEFAULTS["delta"] if y_end is None else y_end
    ys, u0, v0 = _launch(d, a, order, y0, prec)
    if not ys < y_end < 1:
        raise ValueError(f"need launch point {ys} < y_end < 1, got {y_end}")
    t, u, v, ddu, _ = _run(kernels.INTERIOR, d, ys, y_end, u0, v0, tol)
    if np.max(np.abs(u)) > 1 + 10 * tol:
        i = int(np.argmax(np.abs(u)))
        raise IntegrationError(f"|u| = {abs(u[i])} > 1 at y = {t[i]}: launch or tolerance problem",
                               (t[i], u[i], v[i]))
    return SolutionProfile(d, Variable.Y_INTERIOR, t, u, v, ddu, a=float(a),
                           meta={"y_launch": ys, "tol": tol})


def _cone_taylor_float(d: int) -> list[np.ndarray]:
    table = derive_system(d)
    return [np.array([float(x) for x in p.coeffs[::-1]]) if not p.is_zero() else np.zeros(1)
            for p in table.cn]


@dataclass
class EndpointData:
    """Boundary values at y = 1 extrapolated from y = 1 - delta."""
    c: float
    du1: float
    endpoint_residual: float
    converged: bool
    error_bar: float
    profile: SolutionProfile


def endpoint_data(d: int, a: float, delta: float = 1e-6, tol: float = 1e-12, **kw) -> EndpointData:
    if not 1e-8 <= delta <= 1e-3:
        raise ValueError("delta must lie in [1e-8, 1e-3]")
    prof = integrate_interior(d, a, 1 - delta, tol, **kw)
    u_end, du_end = prof.u[-1], prof.du[-1]
    polys = _cone_taylor_float(d)
    h = -delta

    def series(c):
        vals = [np.polyval(p, c) for p in polys]
        g = sum(v * h ** n for n, v in enumerate(vals))
        dg = sum(np.polyval(np.polyder(p), c) * h ** n for n, p in enumerate(polys) if len(p) > 1)
        return vals, g, dg

    c, converged, prev = u_end, False, math.inf
    for _ in range(30):
        _, g, dg = series(c)
        step = (g - u_end) / dg
        c -= step
        if abs(step) <= 1e-14 * max(1.0, abs(c)):
            converged = True
            break
        if abs(step) >= prev:
            # stalled: accept only at rounding level
            converged = abs(step) <= 1e-12
            break
        prev = abs(step)
    if not converged:
        c = u_end  # flagged fallback
    vals, _, _ = series(c)
    # u'(1) = u'(1-delta) minus the higher Taylor terms of u' at 1-delta
    du1 = du_end - sum(n * vals[n] * h ** (n - 1) for n in range(2, len(vals)))
    resid = (d - 5) * du1 + (d - 2) * c * (1 - c) * (1 + c)
    err = delta ** (len(polys)) if converged else abs(vals[1]) * delta
    return EndpointData(c=float(c), du1=float(du1), endpoint_residual=float(resid),
                        converged=converged, error_bar=float(err), profile=prof)


def c_of_a(d: int, a: float, delta: float = 1e-6, tol: float = 1e-12, **kw) -> float:
    """u(a, 1), the boundary value at the light cone."""
    return endpoint_data(d, a, delta, tol, **kw).c


def find_astar(d: int, c_target: float, tol_c: float = 1e-8, *, delta: float = 1e-6,
               tol: float = 1e-12, a_max: float = 1e12, max_iter: int = 200, **kw) -> float:
    """Shooting parameter a with c(a) = c_target, by bracketing and bisection.

    Relies on c(a) decreasing; any sample violating that raises LemmaViolation.
    """
    if not 0 < c_target < 1:
        raise ValueError("c_target must lie in (0, 1)")
    cache: dict[float, float] = {}

    def c(a):
        if a not in cache:
            cache[a] = c_of_a(d, a, delta, tol, **kw)
        return cache[a]

    def monotone_guard(a1, a2):
        if a1 < a2 and not c(a1) > c(a2):
            raise LemmaViolation(f"c(a) not decreasing: c({a1})={c(a1)}, c({a2})={c(a2)}")

    a = 1.0
    if abs(c(a) - c_target) < tol_c:
        return a
    if c(a) > c_target:
        lo, hi = a, 2 * a
        monotone_guard(lo, hi)
        while c(hi) > c_target:
            if hi > a_max:
                raise ShootingError(f"no bracket below a = {a_max}")
            lo, hi = hi, 2 * hi
            monotone_guard(lo, hi)
    else:
        lo, hi = a / 2, a
        monotone_guard(lo, hi)
        while c(lo) < c_target:
            if lo < 1e-12:
                raise ShootingError("no bracket above a = 1e-12")
            lo, hi = lo / 2, lo
            monotone_guard(lo, hi)
    for _ in range(max_iter):
        mid = math.sqrt(lo * hi) if hi / lo > 1.5 else 0.5 * (lo + hi)
        cm = c(mid)
        if not c(hi) <= cm <= c(lo):
            raise LemmaViolation(f"c({mid})={cm} outside [{c(hi)}, {c(lo)}]")
        if abs(cm - c_target) < tol_c:
            return mid
        if cm > c_target:
            lo = mid
        else:
            hi = mid
    raise ShootingError(f"bisection did not reach |c - c_target| < {tol_c}")


def _series_eval(C, t):
    """u, du/dt, d2u/dt2 of the Taylor series sum C[n] t^n."""
    u = mpmath.polyval(C[::-1], t)
    du = mpmath.polyval([n * c for n, c in enumerate(C)][:0:-1], t)
    ddu = mpmath.polyval([n * (n - 1) * c for n, c in enumerate(C)][:1:-1], t)
    return u, du, ddu


def _check_convergence(C, t, what, floor=1e-14):
    tail = max(abs(C[-1] * t ** (len(C) - 1)), abs(C[-2] * t ** (len(C) - 2)))
    if tail > floor:
        raise IntegrationError(f"{what}: light-cone series not converged at |t|={abs(t)} "
                               f"(tail {float(tail):.2e})")


def match_free_coefficient(d: int, c, profile: SolutionProfile, y_match: float = 0.8,
                           order: int = 60, prec: int = 128, max_iter: int = 50) -> tuple[float, float]:
    """Free Taylor coefficient c_{m+1} at y = 1 making the series agree with ``profile``.

    Returns (c_{m+1}, mismatch in u' at the matching point).
    """
    bp = profile.interpolant()
    target = float(bp(y_match))
    target_du = float(bp.derivative()(y_match))
    c = _mp(c, prec)
    with mpmath.workprec(prec):
        t = mpmath.mpf(y_match) - 1

        def g(F):
            C = light_cone_series(d, c, F, order, prec)
            return _series_eval(C, t)[0] - target, C

        f0, f1 = mpmath.mpf(0), mpmath.mpf(1)
        g0, _ = g(f0)
        g1, C = g(f1)
        for _ in range(max_iter):
            if g1 == g0:
                break
            f2 = f1 - g1 * (f1 - f0) / (g1 - g0)
            f0, g0 = f1, g1
            f1 = f2
            g1, C = g(f1)
            if abs(f1 - f0) <= 1e-13 * max(1, abs(f1)):
                break
        _check_convergence(C, t, "matching")
        du_mismatch = _series_eval(C, t)[1] - target_du
        return float(f1), float(du_mismatch)


def extend_exterior(d: int, c, free, x_end: float = -0.999, tol: float = 1e-12, *,
                    launch: float = 0.2, order: int = 60, prec: int = 128, cap: float = 10.0,
                    n_series: int = 41) -> SolutionProfile:
    """Continue a smooth solution with u(1) = c and c_{m+1} = ``free`` to x = 1/y < 1.

    The Taylor series at the light cone supplies u on [1 - launch, 1]; from
    there the x-equation is integrated down to ``x_end``.
    """
    if not -1 < x_end < 1 - launch:
        raise ValueError("need -1 < x_end < 1 - launch")
    with mpmath.workprec(prec):
        C = light_cone_series(d, _mp(c, prec), _mp(free, prec), order, prec)
        xs_series = np.linspace(1 - launch, 1.0, n_series)
        rows = []
        for x in xs_series:
            xm = mpmath.mpf(float(x))
            t = 1 / xm - 1
            s, ds, dds = _series_eval(C, t)
            rows.append((float(s), float(-ds / xm ** 2), float(dds / xm ** 4 + 2 * ds / xm ** 3)))
        _check_convergence(C, 1 / mpmath.mpf(1 - launch) - 1, "launch")
    x0 = xs_series[0]
    u0, v0, _ = rows[0]
    t, u, v, ddu, status = _run(kernels.EXTERIOR, d, x0, x_end, u0, v0, tol, cap=cap)
    if status == kernels.CAP_EXCEEDED:
        raise IntegrationError(f"|u| exceeded {cap} at x = {t[-1]}", (t[-1], u[-1], v[-1]))
    ser = np.array(rows[1:])
    grid = np.concatenate([t[::-1], xs_series[1:]])
    prof = SolutionProfile(d, Variable.X_EXTERIOR, grid,
                           np.concatenate([u[::-1], ser[:, 0]]),
                           np.concatenate([v[::-1], ser[:, 1]]),
                           np.concatenate([ddu[::-1], ser[:, 2]]),
                           meta={"c": float(_mp(c, 64)), "free": float(_mp(free, 64)),
                                 "x_launch": float(x0), "tol": tol})
    prof.meta["max_abs_u"] = float(np.max(np.abs(prof.u)))
    return prof


def verify_profile(p: SolutionProfile) -> MonotonicityReport:
    """Pointwise monotonicity and bound checks, ODE residual and the H-identity on the stored grid."""
    if len(p.grid) < 3:
        raise ValueError("profile needs at least 3 points")
    s, u, du = p.grid, p.u, p.du
    H = p.H()
    bp = p.interpolant()
    mids = 0.5 * (s[1:] + s[:-1])
    um, dum, ddum = bp(mids), bp.derivative(1)(mids), bp.derivative(2)(mids)
    residual_max = float(np.max(np.abs(p.residual(mids, um, dum, ddum))))
    # second-order finite-difference check of dH/ds = -(d-4) s u'^2
    fd = np.diff(H) / np.diff(s)
    exact = p.H_rate(dum, mids)
    scale = np.max(np.abs(exact))
    identity_max = float(np.max(np.abs(fd - exact)) / scale) if scale > 0 else 0.0
    degenerate = bool(np.all(u == 1.0) and np.all(du == 0.0))
    if p.variable is Variable.Y_INTERIOR:
        bound = math.sqrt(p.d - 2) / 2
        rep = MonotonicityReport(
            degenerate=degenerate,
            u_monotone_decreasing=degenerate or bool(np.all(np.diff(u) < 0)),
            H_nonincreasing=bool(np.all(np.diff(H) <= 0)),
            H_in_bounds=degenerate or bool(np.all((H < 0) & (H > -(p.d - 2) / 4))),
            abs_u_below_one=degenerate or bool(np.all(np.abs(u[1:]) < 1)),
            gradient_bound_ok=bool(np.all(s * np.sqrt((1 - s) * (1 + s)) * np.abs(du) < bound)),
            max_H=float(H.max()), min_H=float(H.min()),
            residual_max=residual_max, identity_max=identity_max)
    else:
        rep = MonotonicityReport(degenerate=degenerate, u_monotone_decreasing=None,
                                 H_nonincreasing=None, H_in_bounds=None, abs_u_below_one=None,
                                 gradient_bound_ok=None, max_H=float(H.max()), min_H=float(H.min()),
                                 residual_max=residual_max, identity_max=identity_max)
    p.diagnostics = rep
    return rep


def identity_convergence(p: SolutionProfile, lo: float | None = None, hi: float | None = None,
                         n0: int = 50, levels: int = 3) -> tuple[list[float], list[float]]:
    """Max error of the finite-difference H-identity on uniform grids n0, 2 n0, 4 n0, ...

    Returns (errors, observed orders log2(e_k / e_{k+1})).
    """
    lo = p.grid[0] if lo is None else lo
    hi = p.grid[-1] if hi is None else hi
    bp = p.interpolant()
    dbp = bp.derivative()
    errs = []
    for k in range(levels):
        s = np.linspace(lo, hi, n0 * 2 ** k + 1)
        H = p.H(bp(s), dbp(s), s)
        mids = 0.5 * (s[1:] + s[:-1])
        fd = np.diff(H) / np.diff(s)
        errs.append(float(np.max(np.abs(fd - p.H_rate(dbp(mids), mids)))))
    orders = [math.log2(errs[k] / errs[k + 1]) for k in range(levels - 1)]
    return errs, orders


@dataclass
class AutonomousProfile:
    d: int
    tau: np.ndarray
    U: np.ndarray
    dU: np.ndarray
    monotone: bool
    crosses_zero: bool
    kappa: float


def autonomous_limit(d: int, tau_span: float = 60.0, eps: float = 1e-8, tol: float = 1e-12,
                     floor: float = 1e-10) -> AutonomousProfile:
    """Orbit of U'' + (d-4)U' + f(U) = 0 leaving (1, 0) along its unstable direction."""
    # U = 1 - eps e^{kappa tau}: kappa^2 + (d-4) kappa + f'(1) = 0 with f'(1) = -2(d-2)
    kappa = 0.5 * (-(d - 4) + math.sqrt((d - 4) ** 2 + 8 * (d - 2)))
    t, U, dU, _, _ = _run(kernels.AUTONOMOUS, d, 0.0, tau_span, 1 - eps, -kappa * eps, tol)
    live = np.abs(U) > floor
    crosses = bool(np.any(U < -floor))
    monotone = (not crosses) and bool(np.all(dU[live][1:] < 0))
    if d >= 10 and not monotone:
        raise LemmaViolation(f"d={d}: U(tau) is not monotone on its way to 0")
    return AutonomousProfile(d, t, U, dU, monotone, crosses, kappa)
