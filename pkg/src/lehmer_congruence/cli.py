"""Command-line front end.

Exit codes: 0 success, 2 bad input or configuration, 3 a hypothesis fails
(roots of unity, bad reduction, torsion), 4 precision exhausted, 5 a
measured height fell below a proven bound.
"""
from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bounds import bdm_reference, bound_report
from .delta import delta, threshold_holds
from .elliptic import (
    RationalEllipticCurve,
    RationalPoint,
    calibrate_c_e,
    canonical_height,
    corollary6_filter,
    elliptic_delta,
    elliptic_delta_monotonicity_check,
    height_breakdown,
    thm5_optimize,
)
from .errors import BoundViolation, CyclotomicCollision, InputError, LehmerError
from .fejer import bound_chain, export_sweep_csv, verify_fejer_bound, verify_gttheta
from .intpoly import divides_mod, has_cyclotomic_root, parse_poly, phi, strip_cyclotomic
from .resultant import check_resultant_divisibility, resultant
from .roots import mahler
from .search import MODES, SearchConfig, run_search

FEJER_TOL = 1e-9


def _emit(data: dict, fmt: str, out: str | None = None) -> None:
    if fmt == "json":
        text = json.dumps(data, indent=2, default=str) + "\n"
    else:
        text = "".join(f"{k}: {v}\n" for k, v in data.items())
    if out:
        Path(out).write_text(text)
    sys.stdout.write(text)


def cmd_check(args) -> int:
    f = parse_poly(args.poly)
    m, n = args.modulus, args.n
    if not f.is_monic() or f.degree < 1:
        raise InputError("the polynomial must be monic and nonconstant")
    if m < 2 or n < 2:
        raise InputError("need --modulus >= 2 and --n >= 2")
    report: dict = {"poly": str(f), "D": f.degree, "m": m, "n": n}
    report["divisible_by_phi"] = divides_mod(phi(n - 1), f, m)
    cyclo = has_cyclotomic_root(f)
    report["cyclotomic"] = cyclo
    if cyclo:
        _, facs = strip_cyclotomic(f)
        report["cyclotomic_factors"] = [f"cyclotomic({k})^{e}" if e > 1 else f"cyclotomic({k})" for k, e in facs]
        report["bounds"] = "suppressed: f has a root of unity as a root"
        _emit(report, args.format, args.out)
        return CyclotomicCollision.exit_code
    report["resultant_phi"] = str(resultant(f, phi(n - 1)).value)
    report["resultant_divisible"] = check_resultant_divisibility(f, m, n)
    d = delta(f, m, n)
    report["delta"] = str(d.value) if d.value is not None else d.numeric_value
    report["delta_numeric"] = d.numeric_value
    report["delta_threshold"] = threshold_holds(d)
    mv = mahler(f, args.tol)
    report["log_mahler"] = mv.log_measure
    report["log_mahler_error"] = mv.abs_error_bound
    rep = bound_report(
        f.degree, m, n, d.numeric_value, f.degree, args.eps, args.j_max, 10, mv.log_measure,
        None, report["divisible_by_phi"],
    )
    report["thm3_J"], report["thm3"] = rep.thm3_best
    report["lemma"] = rep.lemma_bound
    report["lemma_branch"] = rep.lemma_branch
    report["corollary"] = rep.corollary_bound
    report["bdm_reference"] = rep.bdm_reference
    report["slack"] = rep.slack
    report["vacuous"] = ",".join(rep.vacuous)
    _emit(report, args.format, args.out)
    for name, b in rep.applicable().items():
        if mv.log_measure + mv.abs_error_bound + args.tol < b:
            raise BoundViolation(f"log M(f) = {mv.log_measure} is below the {name} bound {b}")
    return 0


def cmd_search(args) -> int:
    cfg = SearchConfig(
        degree=args.degree,
        modulus=args.modulus,
        n=args.n,
        coeff_bound=args.coeff_bound,
        count=args.count,
        exhaustive=args.exhaustive,
        seed=args.seed,
        tol=args.tol,
        eps=args.eps,
        mode=args.mode,
        u=args.u,
        out=args.out,
        workers=args.workers,
        j_max=args.j_max,
    )
    record = run_search(cfg)
    if args.format == "csv" and not args.out:
        sys.stdout.write(record.csv_text())
    else:
        sys.stdout.write(json.dumps(record.summary(), indent=2) + "\n")
    return 0


def cmd_fejer(args) -> int:
    rows = []
    worst = math.inf
    for J in range(1, args.j_max + 1):
        grid = args.grid if args.grid else max(64 * J, 1024)
        s = verify_fejer_bound(J, grid, args.depth)
        chain = bound_chain(J)
        rows.append({**s.to_dict(), "chain_holds": chain.holds()})
        worst = min(worst, s.margin)
    t_grid = [k / 100 for k in range(0, 501, 25)]
    theta_grid = [2 * math.pi * (k + 0.5) / 400 for k in range(400)]
    gt_ok = verify_gttheta(t_grid, theta_grid)
    if args.out:
        export_sweep_csv(args.out, args.j_max, max(args.grid or 0, 64 * args.j_max, 1024))
    if args.format == "json":
        sys.stdout.write(json.dumps({"sweeps": rows, "min_margin": worst, "gap_lemma": gt_ok}, indent=2) + "\n")
    else:
        sys.stdout.write("J,grid,numeric_sup,bound,margin,chain_holds\n")
        for r in rows:
            sys.stdout.write(
                f"{r['J']},{r['grid_size']},{r['numeric_sup']!r},{r['bound']!r},{r['margin']!r},{r['chain_holds']}\n"
            )
        sys.stdout.write(f"# min margin {worst!r}; gap lemma grid check {'ok' if gt_ok else 'FAILED'}\n")
    if worst < -FEJER_TOL or not gt_ok or not all(r["chain_holds"] for r in rows):
        raise BoundViolation("Fejer estimate violated")
    return 0


def cmd_elliptic(args) -> int:
    E = RationalEllipticCurve.parse(args.curve)
    P = E.check(RationalPoint.parse(args.point))
    m, n = args.modulus, args.n
    report: dict = {"curve": str(E), "point": str(P), "m": m, "n": n}
    Em, _ = E.minimal_model()
    report["minimal_model"] = str(Em)
    report["discriminant"] = Em.discriminant
    rep = elliptic_delta(E, [P], m, n)
    report["delta"] = str(rep.exact) if rep.exact is not None else rep.value
    report["delta_numeric"] = rep.value
    report["delta_per_prime"] = [t.to_dict() for t in rep.per_prime]
    report["canonical_height"] = canonical_height(E, P, args.precision)
    report["canonical_height_full"] = canonical_height(E, P, args.precision, normalization="full")
    report["local_heights"] = height_breakdown(E, P, args.precision)["places"]
    report["monotone_up_to_j"] = args.j_max_mono
    report["monotonicity"] = elliptic_delta_monotonicity_check(E, [P], m, n, args.j_max_mono)
    if args.c_e is None:
        cal = calibrate_c_e(E, [E.multiply(k, P) for k in range(1, n + 1)], args.calibrate_j)
        C_E = cal.C_E
        report["c_e_source"] = f"calibrated on multiples 1..{n} of P for J <= {args.calibrate_j}"
    else:
        C_E = args.c_e
        report["c_e_source"] = "given"
    report["C_E"] = C_E
    # a calibrated constant is only known to be adequate for J <= calibrate_j
    j_cap = args.j_max if args.c_e is not None else min(args.j_max, args.calibrate_j)
    J, b = thm5_optimize(rep.value, m, n, 1, C_E, j_cap)
    report["thm5_J"], report["thm5"] = J, b
    delta_min = Fraction(args.delta_min) if args.delta_min is not None else rep.exact or rep.value
    report["corollary_filter"] = corollary6_filter(E, P, m, n, args.eps, delta_min)
    _emit(report, args.format, args.out)
    if report["canonical_height"] + args.precision < b:
        raise BoundViolation(f"canonical height {report['canonical_height']} is below the bound {b}")
    return 0


def cmd_bounds_table(args) -> int:
    cols = ["poly", "D", "m", "n", "delta", "thm3_J", "thm3", "lemma", "corollary", "bdm", "mahler", "slack"]
    rows = []
    if args.poly:
        for text in args.poly:
            f = parse_poly(text)
            if has_cyclotomic_root(f):
                raise CyclotomicCollision(f"{f} has a root of unity as a root")
            d = delta(f, args.modulus[0], args.n)
            mv = mahler(f, args.tol)
            rep = bound_report(f.degree, args.modulus[0], args.n, d.numeric_value, f.degree, args.eps,
                               args.j_max, 1, mv.log_measure, None, divides_mod(phi(args.n - 1), f, args.modulus[0]))
            rows.append([str(f), f.degree, args.modulus[0], args.n, d.numeric_value, *rep.thm3_best,
                         rep.lemma_bound, rep.corollary_bound, rep.bdm_reference, mv.log_measure, rep.slack])
    else:
        # no polynomial: the guaranteed Delta = (n-1)/n of the divisibility hypothesis
        for D in args.degree:
            n = args.n or D + 1
            for m in args.modulus:
                dv = (n - 1) / n
                rep = bound_report(D, m, n, dv, D, args.eps, args.j_max, 1)
                rows.append(["", D, m, n, dv, *rep.thm3_best, rep.lemma_bound, rep.corollary_bound,
                             bdm_reference(D, m), None, None])
    if args.format == "json":
        text = json.dumps([dict(zip(cols, r)) for r in rows], indent=2) + "\n"
    else:
        lines = [",".join(cols)]
        for r in rows:
            lines.append(",".join("" if v is None else repr(v) if isinstance(v, float) else str(v) for v in r))
        text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    return 0


def _int_list(text: str) -> list[int]:
    try:
        return [int(s) for s in str(text).split(",") if s.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lehmer-congruence", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="key=value file supplying defaults for any flag")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_choices=("text", "json")):
        p.add_argument("--format", choices=fmt_choices, default=fmt_choices[0])
        p.add_argument("--out", help="also write the output here")
        p.add_argument("--tol", type=float, default=1e-9, help="Mahler measure tolerance")
        p.add_argument("--eps", type=float, default=1.0)

    p = sub.add_parser("check", help="hypotheses, Delta, Mahler measure and bounds for one polynomial")
    p.add_argument("--poly", required=True)
    p.add_argument("--modulus", "-m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j-max", type=int, default=10_000)
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("search", help="sample a congruence family and check every bound")
    p.add_argument("--degree", "-D", type=int, required=True)
    p.add_argument("--modulus", "-m", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--coeff-bound", "-B", type=int, default=4)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--count", type=int, default=100)
    g.add_argument("--exhaustive", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=MODES, default="congruent-to-phi")
    p.add_argument("--u", default="0", help="polynomial u for --mode samuels")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--j-max", type=int, default=10_000)
    common(p, ("json", "csv"))
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("fejer", help="numeric check of the Fejer-sum supremum estimate")
    p.add_argument("--j-max", type=int, default=50)
    p.add_argument("--grid", type=int, default=0, help="grid size (default max(64J, 1024))")
    p.add_argument("--depth", type=int, default=60, help="golden-section rounds")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="write (theta, value) samples for J = j-max here")
    p.set_defaults(func=cmd_fejer)

    p = sub.add_parser("elliptic", help="elliptic Delta, heights and the height bound for one point")
    p.add_argument("--curve", required=True, help="a1,a2,a3,a4,a6")
    p.add_argument("--point", required=True, help="x,y as rationals")
    p.add_argument("--modulus", "-m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j-max", type=int, default=10_000, help="J scan cap for the bound")
    p.add_argument("--j-max-mono", type=int, default=6, help="largest j in the monotonicity check")
    p.add_argument("--c-e", type=float, help="curve constant; calibrated from multiples of P if omitted")
    p.add_argument("--calibrate-j", type=int, default=10)
    p.add_argument("--delta-min", help="threshold for the point filter (rational)")
    p.add_argument("--precision", type=float, default=1e-12)
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_elliptic)

    p = sub.add_parser("bounds-table", help="table of all bounds")
    p.add_argument("--poly", action="append", help="repeatable; Delta and log M are then measured")
    p.add_argument("--degree", "-D", type=_int_list, default=[10])
    p.add_argument("--modulus", "-m", type=_int_list, default=[2, 3, 5])
    p.add_argument("--n", type=int)
    p.add_argument("--j-max", type=int, default=10_000)
    common(p, ("csv", "json"))
    p.set_defaults(func=cmd_bounds_table)
    return parser


def _read_config(path: str) -> dict[str, str]:
    cp = configparser.ConfigParser()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read config file {path}: {exc}") from exc
    try:
        cp.read_string("[config]\n" + text)
    except configparser.Error as exc:
        raise InputError(f"malformed config file {path}: {exc}") from exc
    return {k.replace("-", "_"): v for k, v in cp["config"].items()}


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    """Config values become subcommand defaults, so explicit flags still win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    if not known.config:
        return parser.parse_args(rest)
    values = _read_config(known.config)
    commands = parser._subparsers._group_actions[0].choices
    command = next((a for a in rest if a in commands), None)
    if command is None:
        return parser.parse_args(rest)
    subparser = commands[command]
    actions = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, raw in values.items():
        if key not in actions or key == "help":
            raise InputError(f"unknown config key {key!r} for command {command}")
        action = actions[key]
        if isinstance(action, argparse._StoreTrueAction):
            defaults[key] = raw.strip().lower() in ("1", "true", "yes", "on")
        elif isinstance(action, argparse._AppendAction):
            defaults[key] = [s.strip() for s in raw.split(";") if s.strip()]
        else:
            try:
                defaults[key] = action.type(raw) if action.type else raw
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise InputError(f"bad value for config key {key!r}: {raw!r}") from exc
        action.required = False
    subparser.set_defaults(**defaults)
    return parser.parse_args(rest)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _apply_config(parser, argv)
        return args.func(args)
    except LehmerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
