"""Command-line front end: ``ymss <command> [--d D | --m M] ...``.

Exit status is 0 exactly when every check in the run passes.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field

from . import __version__
from .pipeline import (Tolerances, fmt_float, oracle_case, report_text, reports_to_csv,
                       reports_to_json, run_case, shoot_case, summary_table, sweep,
                       zstar_c_target)
from .roots import analyze_case, closed_form_roots
from .series import case_Pm, derive_system, dimension_from
from .shooter import (IntegrationError, LemmaViolation, ShootingError, autonomous_limit,
                      endpoint_data, extend_exterior, find_astar, identity_convergence,
                      integrate_interior, match_free_coefficient, verify_profile)

COMMANDS = ("derive", "count", "analyze", "shoot", "extend", "limit", "sweep", "verify-all")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    d: int | None = None
    m_range: tuple[int, int] | None = None
    tols: Tolerances = field(default_factory=Tolerances)
    fmt: str = "text"
    output: str | None = None
    extra: dict = field(default_factory=dict)


def parse_m(text: str) -> tuple[int, int]:
    """``"7"`` or ``"3..15"``."""
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad m selector {text!r}; use M or LO..HI")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ymss", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, single=True):
        g = sp.add_argument_group("dimension")
        g.add_argument("--d", type=int, help="odd spatial dimension")
        g.add_argument("--m", type=parse_m, help="m = (d-5)/2, or a range LO..HI")
        sp.add_argument("--format", choices=("json", "csv", "text"), default="text", dest="fmt")
        sp.add_argument("--output", "-o", help="write the report here instead of stdout")
        sp.add_argument("--tol", type=float, default=1e-12, help="integrator rel/abs tolerance")
        sp.add_argument("--delta", type=float, default=1e-6, help="stop at y = 1 - delta")
        sp.add_argument("--tolc", type=float, default=1e-8, help="shooting tolerance on c")
        sp.add_argument("--prec-bits", type=int, default=128, help="mpmath precision of series")

    sp = sub.add_parser("derive", help="derive P_m from the light-cone Taylor system")
    common(sp)
    sp.add_argument("--coeffs", action="store_true", help="also emit c_1..c_m as polynomials in c")
    common(sub.add_parser("count", help="count zeros N of P_m in (0, 1)"))
    sp = sub.add_parser("analyze", help="full exact analysis of one dimension")
    common(sp)
    sp.add_argument("--shoot", action="store_true", help="also construct u_* numerically")
    sp = sub.add_parser("shoot", help="shoot for u_*, u+ or u-")
    common(sp)
    sp.add_argument("--target", choices=("star", "plus", "minus"), default="star")
    sp.add_argument("--a", type=float, help="integrate this a instead of solving for it")
    sp.add_argument("--profile", help="dump y,u,du,H,residual CSV here")
    sp = sub.add_parser("extend", help="continue a solution beyond the past light cone")
    common(sp)
    sp.add_argument("--target", choices=("star", "plus", "minus"), default="star")
    sp.add_argument("--x-end", type=float, default=-0.999)
    sp.add_argument("--profile", help="dump x,u,du,H~,residual CSV here")
    sp = sub.add_parser("limit", help="autonomous large-a limit U'' + (d-4)U' + f(U) = 0")
    common(sp)
    sp.add_argument("--tau-span", type=float, default=60.0)
    for name, hlp in (("sweep", "exact pipeline over a range of m"),
                      ("verify-all", "sweep plus shooting and explicit-solution oracles")):
        sp = sub.add_parser(name, help=hlp)
        common(sp)
        sp.add_argument("--jobs", type=int, default=1)
        if name == "sweep":
            sp.add_argument("--shoot", action="store_true")
    return p


def config_from_args(args) -> RunConfig:
    tols = Tolerances(tol=args.tol, delta=args.delta, tol_c=args.tolc, prec_bits=args.prec_bits)
    cfg = RunConfig(command=args.command, tols=tols, fmt=args.fmt, output=args.output)
    for k in ("coeffs", "shoot", "target", "a", "profile", "x_end", "tau_span", "jobs"):
        if hasattr(args, k):
            cfg.extra[k] = getattr(args, k)
    if args.command in ("sweep", "verify-all"):
        if args.d is not None:
            dd = dimension_from(d=args.d)
            cfg.m_range = ((dd - 5) // 2,) * 2
        else:
            cfg.m_range = args.m or (3, 15)
        return cfg
    if args.command == "limit":
        if args.d is None and args.m is None:
            raise UsageError("limit needs --d")
        cfg.d = args.d if args.d is not None else 2 * args.m[0] + 5
        return cfg
    if args.m is not None and args.m[0] != args.m[1]:
        raise UsageError(f"{args.command} takes a single m, not a range")
    if args.d is None and args.m is None:
        raise UsageError("give --d or --m")
    cfg.d = dimension_from(d=args.d, m=None if args.m is None else args.m[0])
    return cfg


def _emit(cfg: RunConfig, text: str):
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _profile_csv(prof, path, var):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([var, "u", "du", "H", "residual"])
        for row in prof.rows():
            w.writerow([fmt_float(x) for x in row])


def _target_c_a(d, target, tols):
    if target == "star":
        rep = analyze_case(d)
        if rep.zstar is None:
            raise ShootingError("S_m has no unique zero in (0, 1)")
        c = zstar_c_target(rep, tols.prec_bits)
        return c, find_astar(d, c, tols.tol_c, **tols.shoot_kw())
    roots = closed_form_roots(d)
    if target == "plus":
        return roots.c_plus, float(roots.a_plus)
    return roots.c_minus, float(roots.a_minus)


def cmd_derive(cfg):
    table = derive_system(cfg.d)
    Pm, mult = case_Pm(cfg.d)
    if cfg.fmt == "json":
        out = {"d": cfg.d, "m": table.m, "Pm": Pm.to_json(), "Pm_text": Pm.pretty(),
               "factor_multiplicities": {"c": mult[0], "1-c^2": mult[1]}}
        if cfg.extra.get("coeffs"):
            out["coeff_table"] = table.to_json()
        return json.dumps(out, indent=2) + "\n", True
    text = f"P_{table.m}(z) = {Pm.pretty()}\n"
    if cfg.extra.get("coeffs"):
        for n in range(1, table.m + 1):
            text += f"c_{n}(c) = {table.cn[n].pretty('c')}\n"
    return text, True


def cmd_count(cfg):
    rep = analyze_case(cfg.d)
    ok = rep.ok
    if cfg.fmt == "json":
        return json.dumps({"d": rep.d, "m": rep.m, "N": rep.N}) + "\n", ok
    if cfg.fmt == "csv":
        return reports_to_csv([rep]), ok
    return f"d={rep.d} m={rep.m} N={rep.N}\n", ok


def cmd_analyze(cfg):
    rep = run_case(cfg.d, shoot=bool(cfg.extra.get("shoot")), tols=cfg.tols)
    return _format_reports(cfg, [rep]), rep.ok


def _format_reports(cfg, reps):
    if cfg.fmt == "json":
        return reports_to_json(reps)
    if cfg.fmt == "csv":
        return reports_to_csv(reps)
    return "".join(report_text(r) for r in reps)


def cmd_shoot(cfg):
    d, tols = cfg.d, cfg.tols
    if cfg.extra.get("a") is not None:
        a, c_t = cfg.extra["a"], None
    else:
        c_t, a = _target_c_a(d, cfg.extra.get("target", "star"), tols)
    ep = endpoint_data(d, a, **tols.shoot_kw())
    rep = verify_profile(ep.profile)
    if cfg.extra.get("profile"):
        _profile_csv(ep.profile, cfg.extra["profile"], "y")
    ok = rep.lemma1_ok and abs(ep.endpoint_residual) < 1e-5
    if c_t is not None:
        ok = ok and abs(ep.c - float(c_t)) < 2 * tols.tol_c
    out = {"d": d, "a": a, "c": ep.c, "c_target": None if c_t is None else float(c_t),
           "du1": ep.du1, "endpoint_residual": ep.endpoint_residual,
           "extrapolation_converged": ep.converged, "diagnostics": rep.to_json(), "ok": ok}
    if cfg.fmt == "json":
        return json.dumps(out, indent=2) + "\n", ok
    lines = [f"{k} = {fmt_float(v) if isinstance(v, float) else v}" for k, v in out.items()
             if k != "diagnostics"]
    lines += [f"  {k} = {fmt_float(v) if isinstance(v, float) else v}" for k, v in rep.to_json().items()]
    return "\n".join(lines) + "\n", ok


def cmd_extend(cfg):
    d, tols = cfg.d, cfg.tols
    c, a = _target_c_a(d, cfg.extra.get("target", "star"), tols)
    interior = integrate_interior(d, a, 1 - tols.delta, tols.tol, prec=tols.prec_bits)
    free, du_mismatch = match_free_coefficient(d, c, interior, prec=tols.prec_bits)
    x_end = cfg.extra.get("x_end", -0.999)
    prof = extend_exterior(d, c, free, x_end, tols.tol, prec=tols.prec_bits)
    rep = verify_profile(prof)
    errs, orders = identity_convergence(prof, x_end, 0.999)
    if cfg.extra.get("profile"):
        _profile_csv(prof, cfg.extra["profile"], "x")
    ok = all(o > 1.8 for o in orders) and math.isfinite(prof.meta["max_abs_u"])
    out = {"d": d, "a": a, "c": float(c), "free_coefficient": free, "du_mismatch": du_mismatch,
           "x_end": x_end, "max_abs_u": prof.meta["max_abs_u"], "identity_errors": errs,
           "identity_orders": orders, "residual_max": rep.residual_max, "ok": ok}
    if cfg.fmt == "json":
        return json.dumps(out, indent=2) + "\n", ok
    return "".join(f"{k} = {v}\n" for k, v in out.items()), ok


def cmd_limit(cfg):
    try:
        prof = autonomous_limit(cfg.d, cfg.extra.get("tau_span", 60.0), tol=cfg.tols.tol)
        ok, msg = True, "monotone" if prof.monotone else "oscillates"
    except LemmaViolation as ex:
        return f"FAIL: {ex}\n", False
    out = {"d": cfg.d, "kappa": prof.kappa, "monotone": prof.monotone,
           "crosses_zero": prof.crosses_zero, "U_end": float(prof.U[-1]), "behaviour": msg}
    if cfg.fmt == "json":
        return json.dumps(out, indent=2) + "\n", ok
    return "".join(f"{k} = {v}\n" for k, v in out.items()), ok


def cmd_sweep(cfg, oracle=False):
    lo, hi = cfg.m_range
    shoot = oracle or bool(cfg.extra.get("shoot"))
    reps = sweep(range(lo, hi + 1), shoot=shoot, oracle=oracle, tols=cfg.tols,
                 jobs=cfg.extra.get("jobs", 1))
    ok = all(r.ok for r in reps)
    if cfg.fmt == "text":
        body = summary_table(reps)
        bad = [f"m={r.m}: " + ", ".join(k for k, v in r.flags().items() if not v)
               for r in reps if not r.ok]
        body += ("all checks passed\n" if ok else "failed checks:\n  " + "\n  ".join(bad) + "\n")
        return body, ok
    return _format_reports(cfg, reps), ok


HANDLERS = {"derive": cmd_derive, "count": cmd_count, "analyze": cmd_analyze,
            "shoot": cmd_shoot, "extend": cmd_extend, "limit": cmd_limit,
            "sweep": cmd_sweep, "verify-all": lambda cfg: cmd_sweep(cfg, oracle=True)}


def run(cfg: RunConfig) -> int:
    try:
        text, ok = HANDLERS[cfg.command](cfg)
    except (IntegrationError, ShootingError, LemmaViolation) as ex:
        sys.stderr.write(f"error: {type(ex).__name__}: {ex}\n")
        return 1
    except ValueError as ex:
        sys.stderr.write(f"usage error: {ex}\n")
        return 2
    _emit(cfg, text)
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (UsageError, ValueError) as ex:
        parser.error(str(ex))
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
