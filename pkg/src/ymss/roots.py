"""Closed-form roots z+-, the split P_m = (z - z-)(z - z+) S_m and root counting."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exact import QuadExt, fmt_rat, trace_norm
from .poly import (DivisionNotExact, PolyQ, RootInterval, divide_exact, isolate_root,
                   primitive_normalize, sign_pattern, sturm_count)
from .series import case_Pm, dimension_from

__all__ = ["ClosedFormRoots", "Ordering", "CaseReport", "AppendixChecks", "closed_form_roots",
           "split_Sm", "appendix_checks", "count_N", "ordering", "compare_with_roots",
           "analyze_case", "ZSTAR_WIDTH"]

ZSTAR_WIDTH = Fraction(1, 10 ** 30)


class Ordering(str, enum.Enum):
    MINUS_STAR_PLUS = "MINUS_STAR_PLUS"
    STAR_MINUS_PLUS = "STAR_MINUS_PLUS"
    OTHER = "OTHER"


@dataclass(frozen=True)
class ClosedFormRoots:
    d: int
    alpha_plus: QuadExt
    alpha_minus: QuadExt
    beta_plus: QuadExt
    beta_minus: QuadExt
    z_plus: QuadExt
    z_minus: QuadExt
    quad_factor: PolyQ

    @property
    def a_plus(self) -> QuadExt:
        """Shooting parameter of u+ (minus the y^2 coefficient)."""
        return self.alpha_plus / self.beta_plus

    @property
    def a_minus(self) -> QuadExt:
        return self.alpha_minus / self.beta_minus

    @property
    def c_plus(self) -> QuadExt:
        return 1 - self.alpha_plus / (self.beta_plus + 1)

    @property
    def c_minus(self) -> QuadExt:
        return 1 - self.alpha_minus / (self.beta_minus + 1)

    def to_json(self) -> dict:
        return {"d": self.d, "alpha_plus": str(self.alpha_plus), "alpha_minus": str(self.alpha_minus),
                "beta_plus": str(self.beta_plus), "beta_minus": str(self.beta_minus),
                "z_plus": str(self.z_plus), "z_minus": str(self.z_minus),
                "quad_factor": self.quad_factor.to_json()}


def closed_form_roots(d: int) -> ClosedFormRoots:
    d = dimension_from(d=d)
    if d < 11:
        raise ValueError("the explicit solution u- is regular only for d >= 11")
    D = 3 * (d - 2) * (d - 4)
    s = QuadExt.sqrt(D)
    # built branch by branch: for square D conj() is the identity
    alpha_p = 2 + Fraction(2, 3 * (d - 2)) * s
    alpha_m = 2 - Fraction(2, 3 * (d - 2)) * s
    beta_p = Fraction(2 * (d - 4), 3) + Fraction(1, 3) * s
    beta_m = Fraction(2 * (d - 4), 3) - Fraction(1, 3) * s
    z_p = (1 - alpha_p / (beta_p + 1)) ** 2
    z_m = (1 - alpha_m / (beta_m + 1)) ** 2
    if z_p.is_rational():
        tr, nm = z_p.rational + z_m.rational, z_p.rational * z_m.rational
    else:
        tr, nm = trace_norm(z_p)
    return ClosedFormRoots(d, alpha_p, alpha_m, beta_p, beta_m, z_p, z_m, PolyQ([nm, -tr, 1]))


def split_Sm(Pm: PolyQ, roots: ClosedFormRoots) -> PolyQ:
    """S_m, primitive with positive leading coefficient. Raises DivisionNotExact."""
    return primitive_normalize(divide_exact(Pm, roots.quad_factor))


@dataclass
class AppendixChecks:
    sign_ok: bool
    s0_negative: bool
    s1_positive: bool
    roots_in_unit: int
    unique_zero: bool
    zstar: RootInterval | None

    @property
    def ok(self) -> bool:
        return self.sign_ok and self.s0_negative and self.s1_positive and self.unique_zero


def appendix_checks(Sm: PolyQ, width=ZSTAR_WIDTH) -> AppendixChecks:
    if Sm.degree() < 1:
        raise ValueError("S_m must have degree >= 1")
    pattern = sign_pattern(Sm)
    sign_ok = pattern[0] == "+" and all(s == "-" for s in pattern[1:])
    n = sturm_count(Sm, 0, 1)
    zstar = isolate_root(Sm, RootInterval(0, 1), width) if n == 1 else None
    return AppendixChecks(sign_ok=sign_ok, s0_negative=Sm(Fraction(0)) < 0,
                          s1_positive=Sm(Fraction(1)) > 0, roots_in_unit=n,
                          unique_zero=n == 1, zstar=zstar)


def count_N(d: int) -> int:
    """Number of zeros of P_m in 0 < z < 1."""
    return sturm_count(case_Pm(dimension_from(d=d))[0], 0, 1)


def compare_with_roots(q: Fraction, roots: ClosedFormRoots) -> int:
    """Position of rational q: -1 below z-, 0 between, +1 above z+.

    Uses only the sign of the quad factor at q and the side of q relative
    to the midpoint tr/2.
    """
    v = roots.quad_factor(Fraction(q))
    if v == 0:
        raise ArithmeticError("q coincides with a closed-form root")
    if v < 0:
        return 0
    half_tr = -roots.quad_factor[1] / 2
    return -1 if q < half_tr else 1


def ordering(d: int, zstar: RootInterval, roots: ClosedFormRoots | None = None,
             Sm: PolyQ | None = None, max_bisections: int = 10 ** 6) -> Ordering:
    roots = roots or closed_form_roots(d)
    lo, hi = zstar.lo, zstar.hi
    for _ in range(max_bisections):
        plo, phi = compare_with_roots(lo, roots), compare_with_roots(hi, roots)
        if plo == phi:
            break
        if Sm is None:
            Sm = split_Sm(case_Pm(d)[0], roots)
        mid = (lo + hi) / 2
        v = Sm(mid)
        if v == 0:
            lo = hi = mid
            continue
        if (v > 0) == (Sm(lo) > 0):
            lo = mid
        else:
            hi = mid
    else:
        raise ArithmeticError("z_* bracket could not be separated from z+-")
    return {0: Ordering.MINUS_STAR_PLUS, -1: Ordering.STAR_MINUS_PLUS}.get(plo, Ordering.OTHER)


@dataclass
class CaseReport:
    d: int
    m: int
    Pm: PolyQ
    N: int
    factor_multiplicities: tuple[int, int]
    Sm: PolyQ | None = None
    division_exact: bool | None = None
    sign_ok: bool | None = None
    s0_negative: bool | None = None
    s1_positive: bool | None = None
    unique_zero: bool | None = None
    N_consistent: bool | None = None
    zpm_in_unit: bool | None = None
    zstar: RootInterval | None = None
    ordering: Ordering | None = None
    roots: ClosedFormRoots | None = None
    astar: float | None = None
    shoot_resid: float | None = None
    shooting_diag: dict[str, Any] = field(default_factory=dict)

    def flags(self) -> dict[str, bool]:
        names = ["division_exact", "sign_ok", "s0_negative", "s1_positive", "unique_zero",
                 "N_consistent", "zpm_in_unit"]
        out = {k: getattr(self, k) for k in names if getattr(self, k) is not None}
        out.update({k: v for k, v in self.shooting_diag.items() if isinstance(v, bool)})
        return out

    @property
    def ok(self) -> bool:
        return all(self.flags().values())

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "d": self.d, "m": self.m, "Pm": self.Pm.to_json(), "Pm_text": self.Pm.pretty(),
            "N": self.N, "factor_multiplicities": {"c": self.factor_multiplicities[0],
                                                   "1-c^2": self.factor_multiplicities[1]},
        }
        if self.Sm is not None:
            out["Sm"] = self.Sm.to_json()
            out["Sm_text"] = self.Sm.pretty()
            out["Sm_sign_pattern"] = sign_pattern(self.Sm)
        if self.roots is not None:
            out["closed_form"] = self.roots.to_json()
        if self.zstar is not None:
            out["zstar"] = {"lo": fmt_rat(self.zstar.lo), "hi": fmt_rat(self.zstar.hi),
                            "approx": float(self.zstar.mid)}
        if self.ordering is not None:
            out["ordering"] = self.ordering.value
        out["flags"] = self.flags()
        if self.astar is not None:
            out["astar"] = self.astar
        if self.shoot_resid is not None:
            out["shoot_resid"] = self.shoot_resid
        if self.shooting_diag:
            out["shooting"] = self.shooting_diag
        out["ok"] = self.ok
        return out


def analyze_case(d: int) -> CaseReport:
    """Exact part of the pipeline for one odd dimension."""
    d = dimension_from(d=d)
    m = (d - 5) // 2
    Pm, mult = case_Pm(d)
    N = sturm_count(Pm, 0, 1)
    rep = CaseReport(d=d, m=m, Pm=Pm, N=N, factor_multiplicities=mult)
    if d < 11:
        return rep
    roots = closed_form_roots(d)
    rep.roots = roots
    rep.zpm_in_unit = (0 < roots.z_minus < roots.z_plus < 1)
    try:
        Sm = split_Sm(Pm, roots)
    except DivisionNotExact:
        rep.division_exact = False
        return rep
    rep.division_exact = True
    rep.Sm = Sm
    chk = appendix_checks(Sm)
    rep.sign_ok, rep.s0_negative, rep.s1_positive = chk.sign_ok, chk.s0_negative, chk.s1_positive
    rep.unique_zero = chk.unique_zero
    rep.N_consistent = N == 2 + chk.roots_in_unit if rep.zpm_in_unit else N == chk.roots_in_unit
    if chk.zstar is not None:
        rep.zstar = chk.zstar
        rep.ordering = ordering(d, chk.zstar, roots, Sm)
    return rep
