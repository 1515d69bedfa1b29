"""Command-line entry point: ``twistfield <subcommand> ...``.

Exit codes: 0 ok, 1 a verification failed or came up short, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .characters import OrderLCharacter
from .constant import search_deg2_matches, vanishing_check
from .covers import generate_vanishing_family
from .elliptic import constant_curve_with_trace
from .suites import SUITES, run_suites
from .sweep import CACHE_ENV, SweepError, SweepJob, rows_to_csv, run_sweep

LONG_DEGREE = 6


def _write(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_sweep(args) -> int:
    if args.cond_deg >= LONG_DEGREE and not args.long:
        print(f"conductor degree {args.cond_deg} needs --long (runs of days are possible)", file=sys.stderr)
        return 2
    job = SweepJob(args.curve, args.ell, args.p, args.cond_deg, jobs=args.jobs, out=args.out,
                   fmt=args.format, cache_dir=args.cache_dir)
    hist, rows = run_sweep(job)
    counts = ", ".join(str(c) for c in hist.as_tuple())
    print(f"{args.curve} ell={args.ell} p={args.p} d={args.cond_deg}: ({counts}) total={hist.total}",
          file=sys.stderr if args.out is None else sys.stdout)
    if args.out is None:
        if args.format == "json":
            from .sweep import sweep_json

            sys.stdout.write(json.dumps(sweep_json(job, hist, rows), indent=1) + "\n")
        else:
            sys.stdout.write(rows_to_csv(rows))
    return 0


def cmd_search_constant(args) -> int:
    res = search_deg2_matches(args.ell, args.p, mode=args.mode, stop_early=args.stop_early)
    if args.format == "json":
        _write(args.out, res.to_json() + "\n")
    else:
        lines = [f"ell={res.ell} p={res.p} mode={res.mode} checked={res.checked}"
                 + (" (stopped early)" if res.stopped_early else ""),
                 "traces: {" + ", ".join(map(str, sorted(res.traces))) + "}"]
        for rec in res.witness_records():
            lines.append(f"  a={rec['a']}: conductor {rec['conductor']} exponents {rec['exponents']}")
        _write(args.out, "\n".join(lines) + "\n")
    return 0


def _default_seed(ell: int, p: int, trace: int) -> OrderLCharacter | None:
    E0 = constant_curve_with_trace(p, trace)
    res = search_deg2_matches(ell, p)
    for a in sorted(res.witnesses):
        chi = res.witnesses[a]
        if vanishing_check(E0, chi):
            return chi
    return None


def cmd_gen_vanishing(args) -> int:
    E0 = constant_curve_with_trace(args.p, args.trace)
    if args.seed:
        seed = OrderLCharacter.parse(args.seed)
        if (seed.ell, seed.p) != (args.ell, args.p):
            print("seed character does not match --ell/--p", file=sys.stderr)
            return 2
    else:
        seed = _default_seed(args.ell, args.p, args.trace)
        if seed is None:
            print(f"no degree-2 seed vanishes for the trace-{args.trace} curve", file=sys.stderr)
            return 1
    try:
        report = generate_vanishing_family(seed, E0, args.count, args.max_degree)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    payload = {
        "ell": args.ell,
        "p": args.p,
        "curve": {"A": E0.A, "B": E0.B, "trace": E0.trace},
        "members": [m.to_json() for m in report.members],
        "tried": report.tried,
        "rejected": report.rejected,
        "acceptance_rate": report.acceptance_rate,
        "shortfall": report.shortfall,
    }
    if args.format == "json":
        _write(args.out, json.dumps(payload, indent=1) + "\n")
    else:
        lines = [f"{len(report.members)} vanishing twists of y^2 = x^3 + {E0.A}x + {E0.B} over F_{args.p}"]
        for m in report.members:
            how = "seed" if m.substitution is None else m.substitution.describe()
            lines.append(f"  deg {m.character.conductor_degree:2d} rank {m.rank}  {m.character}  [{how}]")
        lines.append(f"substitutions tried {report.tried}, rejected {report.rejected}, shortfall {report.shortfall}")
        _write(args.out, "\n".join(lines) + "\n")
    return 1 if report.shortfall else 0


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    failed = False
    for rep in run_suites(names, fault=args.negative_control):
        print(rep.summary())
        for what in rep.failures[:20]:
            print(f"  failed: {what}")
        failed |= not rep.ok
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twistfield", description="Ranks of order-ell twists of elliptic curves over F_p(t).")
    sub = ap.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="rank histogram over all twists of one conductor degree")
    sw.add_argument("--curve", default="legendre", help="legendre | e2 | constant:<a> | custom:<a>/<b>/<c>")
    sw.add_argument("--ell", type=int, required=True)
    sw.add_argument("--p", type=int, required=True)
    sw.add_argument("--cond-deg", type=int, required=True)
    sw.add_argument("--jobs", type=int, default=1)
    sw.add_argument("--out")
    sw.add_argument("--format", choices=("csv", "json"), default="csv")
    sw.add_argument("--cache-dir", help=f"a_f cache directory (default ${CACHE_ENV})")
    sw.add_argument("--long", action="store_true", help=f"allow conductor degree >= {LONG_DEGREE}")
    sw.set_defaults(func=cmd_sweep)

    sc = sub.add_parser("search-constant", help="characters with L(chi, u) = 1 + a u + p u^2")
    sc.add_argument("--ell", type=int, required=True)
    sc.add_argument("--p", type=int, required=True)
    sc.add_argument("--mode", choices=("full", "thin"), default="full")
    sc.add_argument("--stop-early", action="store_true")
    sc.add_argument("--out")
    sc.add_argument("--format", choices=("text", "json"), default="text")
    sc.set_defaults(func=cmd_search_constant)

    gv = sub.add_parser("gen-vanishing", help="vanishing twists of a constant curve from one seed")
    gv.add_argument("--ell", type=int, default=3)
    gv.add_argument("--p", type=int, default=5)
    gv.add_argument("--trace", type=int, default=0, help="trace of the constant curve")
    gv.add_argument("--seed", help="serialized seed character (default: found by search-constant)")
    gv.add_argument("--count", type=int, default=5)
    gv.add_argument("--max-degree", type=int, default=12)
    gv.add_argument("--out")
    gv.add_argument("--format", choices=("text", "json"), default="text")
    gv.set_defaults(func=cmd_gen_vanishing)

    vf = sub.add_parser("verify", help="consistency suites")
    vf.add_argument("--suite", choices=("fe", "thm31", "covers", "all"), default="all")
    vf.add_argument("--negative-control", action="store_true", help="perturb one polynomial; the run must fail")
    vf.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SweepError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
