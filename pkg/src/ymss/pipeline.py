"""Per-dimension verification pipeline shared by the CLI sweep commands."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import mpmath

from .roots import CaseReport, analyze_case, closed_form_roots
from .shooter import c_of_a, endpoint_data, find_astar, verify_profile

CSV_COLUMNS = ["m", "d", "N", "sign_ok", "unique_zero", "zstar_lo", "zstar_hi", "ordering",
               "division_exact", "astar", "shoot_resid"]

ENDPOINT_RESID_MAX = 1e-5
ORACLE_TOL = 1e-8


@dataclass(frozen=True)
class Tolerances:
    tol: float = 1e-12
    delta: float = 1e-6
    tol_c: float = 1e-8
    prec_bits: int = 128

    def shoot_kw(self) -> dict:
        return {"delta": self.delta, "tol": self.tol, "prec": self.prec_bits}


def fmt_float(x) -> str:
    return "" if x is None else format(float(x), ".17g")


def zstar_c_target(rep: CaseReport, prec: int = 128) -> float:
    """sqrt of the midpoint of the exact z_* bracket."""
    with mpmath.workprec(prec):
        mid = rep.zstar.mid
        return float(mpmath.sqrt(mpmath.mpf(mid.numerator) / mid.denominator))


def shoot_case(rep: CaseReport, tols: Tolerances) -> CaseReport:
    """Construct u_* by shooting and attach its diagnostics to ``rep``."""
    if rep.zstar is None:
        rep.shooting_diag["astar_found"] = False
        return rep
    c_t = zstar_c_target(rep, tols.prec_bits)
    a = find_astar(rep.d, c_t, tols.tol_c, **tols.shoot_kw())
    ep = endpoint_data(rep.d, a, **tols.shoot_kw())
    chk = verify_profile(ep.profile)
    rep.astar = a
    rep.shoot_resid = ep.endpoint_residual
    rep.shooting_diag.update({
        "astar_found": True, "c_target": c_t, "c": ep.c,
        "c_error": abs(ep.c - c_t), "c_within_tol": abs(ep.c - c_t) < 2 * tols.tol_c,
        "endpoint_ok": abs(ep.endpoint_residual) < ENDPOINT_RESID_MAX,
        "lemma1_ok": chk.lemma1_ok, "extrapolation_converged": ep.converged,
        "residual_max": chk.residual_max, "n_points": int(len(ep.profile.grid)),
    })
    return rep


def oracle_case(rep: CaseReport, tols: Tolerances) -> CaseReport:
    """Compare c(a) against the explicit solutions u+ and u-."""
    roots = rep.roots or closed_form_roots(rep.d)
    for tag, a, c in (("plus", roots.a_plus, roots.c_plus), ("minus", roots.a_minus, roots.c_minus)):
        err = abs(c_of_a(rep.d, float(a), **tols.shoot_kw()) - float(c))
        rep.shooting_diag[f"oracle_{tag}_error"] = err
        rep.shooting_diag[f"oracle_{tag}_ok"] = err < ORACLE_TOL
    return rep


def run_case(d: int, shoot: bool = False, oracle: bool = False,
             tols: Tolerances = Tolerances()) -> CaseReport:
    rep = analyze_case(d)
    if d >= 11 and shoot:
        shoot_case(rep, tols)
    if d >= 11 and oracle:
        oracle_case(rep, tols)
    return rep


def _run_case_star(args):
    return run_case(*args)


def sweep(ms, shoot=False, oracle=False, tols: Tolerances = Tolerances(), jobs: int = 1):
    """One CaseReport per m, in order of m."""
    tasks = [(2 * m + 5, shoot, oracle, tols) for m in ms]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_run_case_star, tasks))
    return [_run_case_star(t) for t in tasks]


def csv_row(rep: CaseReport) -> list[str]:
    b = lambda x: "" if x is None else str(bool(x)).lower()  # noqa: E731
    return [str(rep.m), str(rep.d), str(rep.N), b(rep.sign_ok), b(rep.unique_zero),
            fmt_float(rep.zstar.lo) if rep.zstar else "", fmt_float(rep.zstar.hi) if rep.zstar else "",
            rep.ordering.value if rep.ordering else "", b(rep.division_exact),
            fmt_float(rep.astar), fmt_float(rep.shoot_resid)]


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow(csv_row(r))
    return buf.getvalue()


def reports_to_json(reports) -> str:
    return json.dumps({"cases": [r.to_json() for r in reports],
                       "ok": all(r.ok for r in reports)}, indent=2) + "\n"


def report_text(rep: CaseReport) -> str:
    lines = [f"d = {rep.d} (m = {rep.m})",
             f"  P_m(z) = {rep.Pm.pretty()}",
             f"  N = {rep.N} zeros in (0, 1)",
             f"  trivial factors: c^{rep.factor_multiplicities[0]}, "
             f"(1-c^2)^{rep.factor_multiplicities[1]}"]
    if rep.roots is not None:
        lines.append(f"  z+ = {rep.roots.z_plus}  (~{fmt_float(float(rep.roots.z_plus))})")
        lines.append(f"  z- = {rep.roots.z_minus}  (~{fmt_float(float(rep.roots.z_minus))})")
    if rep.Sm is not None:
        lines.append(f"  S_m(z) = {rep.Sm.pretty()}")
    if rep.zstar is not None:
        lines.append(f"  z_* in [{fmt_float(rep.zstar.lo)}, {fmt_float(rep.zstar.hi)}]")
        lines.append(f"  ordering: {rep.ordering.value}")
    if rep.astar is not None:
        lines.append(f"  a_* = {fmt_float(rep.astar)}, endpoint residual {fmt_float(rep.shoot_resid)}")
    for k, v in rep.shooting_diag.items():
        if not isinstance(v, bool) and k.startswith("oracle"):
            lines.append(f"  {k} = {fmt_float(v)}")
    for k, v in rep.flags().items():
        lines.append(f"  [{'PASS' if v else 'FAIL'}] {k}")
    return "\n".join(lines) + "\n"


def summary_table(reports) -> str:
    head = f"{'m':>3} {'d':>3} {'N':>2} {'sign_ok':>7} {'unique':>6} {'z_*':>22} {'ordering':>16} {'a_*':>22}"
    rows = [head]
    for r in reports:
        z = fmt_float(r.zstar.mid) if r.zstar else "-"
        rows.append(f"{r.m:>3} {r.d:>3} {r.N:>2} {str(r.sign_ok):>7} {str(r.unique_zero):>6} "
                    f"{z:>22} {(r.ordering.value if r.ordering else '-'):>16} "
                    f"{(fmt_float(r.astar) if r.astar is not None else '-'):>22}")
    return "\n".join(rows) + "\n"


def is_finite(x) -> bool:
    return x is not None and math.isfinite(x)
