"""
Command-line front end.

    python secinv.py secondary --group A3 --json
    python secinv.py hilbert --group S4
    python secinv.py points --group-file mygroup.json --text
    python secinv.py canonical-monomials --group C5
    python secinv.py verify --group D4
    python secinv.py bench --list groups.txt --max-t 120 --store
    python secinv.py serve --port 8000

Exit codes: 0 success, 1 verification failure, 2 input error, 3 resource cap,
4 internal consistency error.
"""
import argparse
import logging
import math
import sys
from typing import List, Optional

from app.schemas.invariants import (
    CanonicalOut,
    HilbertOut,
    PointsOut,
    SecondaryResultOut,
    VerifyOut,
)
from app.services.bench import rows_to_csv, run_bench
from app.services.config import configure_logging, get_settings
from app.services.cyclo import cyclotomic_field
from app.services.engine import EngineOptions, SecondaryResult, secondary_invariants, verify
from app.services.errors import SecInvError
from app.services.evalpoints import build_point_set
from app.services.groups import GroupSpec, catalog_specs, parse_group_file, parse_group_list, parse_group_spec
from app.services.series import hilbert_series, secondary_spec

logger = logging.getLogger(__name__)


def _add_group_args(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--group", metavar="SPEC",
                        help="S<n>, A<n>, C<n>, D<n>, trivial<n>, JSON, or '<n>: (1 2 3), (1 2)'")
    source.add_argument("--group-file", metavar="PATH", help="file holding one group description")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json",
                     help="JSON output (default)")
    fmt.add_argument("--text", dest="format", action="store_const", const="text",
                     help="human-readable output")
    parser.set_defaults(format="json")


def _add_cap_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-n-cap", type=int, metavar="INT",
                        help="largest n whose n! evaluation words may be enumerated")


def _add_engine_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--exclude-partitions", action="store_true",
                        help="skip nonzero partition monomials (falls back to them if a degree falls short)")
    parser.add_argument("--parallel", type=int, default=1, metavar="INT",
                        help="worker processes for orbit-sum evaluation")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secinv",
        description="Secondary invariants of permutation groups by evaluation at roots of unity",
    )
    parser.add_argument("--log-level", metavar="LEVEL", help="DEBUG, INFO, WARNING, ERROR")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("secondary", help="secondary and irreducible secondary invariants")
    _add_group_args(p)
    _add_cap_arg(p)
    _add_engine_args(p)
    p.add_argument("--verify", action="store_true", help="run verification after computing")

    p = sub.add_parser("hilbert", help="Hilbert series prefix and secondary-degree numerator")
    _add_group_args(p)
    p.add_argument("--degree", type=int, metavar="INT", help="length of the series prefix (default binom(n,2))")

    p = sub.add_parser("points", help="evaluation point representatives")
    _add_group_args(p)
    _add_cap_arg(p)

    p = sub.add_parser("canonical-monomials", help="counts of canonical staircase monomials")
    _add_group_args(p)

    p = sub.add_parser("verify", help="compute, then check the result")
    _add_group_args(p)
    _add_cap_arg(p)
    _add_engine_args(p)

    p = sub.add_parser("bench", help="CSV timings over a list of groups")
    p.add_argument("--list", metavar="PATH", help="newline-separated group descriptions (default: catalog)")
    p.add_argument("--max-n", type=int, default=5, metavar="INT",
                   help="largest n of the built-in catalog when --list is absent")
    p.add_argument("--max-t", type=int, metavar="INT", help="skip groups with more secondary invariants")
    p.add_argument("--store", action="store_true", help="persist rows to DATABASE_URL")
    _add_engine_args(p)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _group_spec(args) -> GroupSpec:
    if args.group_file:
        return parse_group_file(args.group_file)
    return parse_group_spec(args.group)


def _point_cap(args) -> int:
    return get_settings().with_overrides(max_points_n=getattr(args, "max_n_cap", None)).max_points_n


def _engine_options(args) -> EngineOptions:
    return EngineOptions(
        exclude_partitions=args.exclude_partitions,
        workers=args.parallel,
        max_points_n=_point_cap(args),
    )


def _render_secondary(result: SecondaryResult) -> str:
    spec = result.spec
    lines = [
        f"n = {spec.n}, |G| = {spec.group_order}, t = {spec.t}, epsilon = {spec.epsilon}",
        f"Hilbert series = {spec.rational_form()}",
        f"irreducible degrees: {[i.degree for i in result.irreducibles]}",
    ]
    for irr in result.irreducibles:
        lines.append(f"  I{irr.id}: orbit sum of x^{irr.monomial} (degree {irr.degree})")
    for d, level in enumerate(result.S):
        for s in level:
            factors = "*".join(f"I{f}" for f in s.factors) or "1"
            lines.append(f"  degree {d}: {factors}")
    return "\n".join(lines)


def _render_report(report) -> str:
    lines = ["verification " + ("passed" if report.ok else "FAILED")]
    for c in report.clauses:
        mark = "skip" if c.skipped else "ok" if c.passed else "FAIL"
        lines.append(f"  ({c.clause}) {mark}: {c.detail}")
    return "\n".join(lines)


def cmd_secondary(args) -> int:
    G = _group_spec(args).build()
    result = secondary_invariants(G, _engine_options(args))
    if args.format == "json":
        print(SecondaryResultOut.from_result(result).model_dump_json(indent=2))
    else:
        print(_render_secondary(result))
    if args.verify:
        report = verify(result, G)
        print(_render_report(report), file=sys.stderr)
        if not report.ok:
            return 1
    return 0


def cmd_hilbert(args) -> int:
    G = _group_spec(args).build()
    spec = secondary_spec(G)
    up_to = math.comb(G.degree, 2) if args.degree is None else args.degree
    prefix = hilbert_series(G, up_to).to_ints()
    if args.format == "json":
        print(HilbertOut.from_spec(spec, prefix).model_dump_json(indent=2))
    else:
        print(f"n = {spec.n}, |G| = {spec.group_order}, t = {spec.t}")
        print(f"Hilbert series = {spec.rational_form()}")
        print(f"prefix: {prefix}")
    return 0


def cmd_points(args) -> int:
    G = _group_spec(args).build()
    P = build_point_set(G, cyclotomic_field(G.degree), _point_cap(args))
    if args.format == "json":
        print(PointsOut.from_points(G, P).model_dump_json(indent=2))
    else:
        for p in P.points:
            print(" ".join(str(e) for e in p.exponents))
    return 0


def cmd_canonical(args) -> int:
    summary = CanonicalOut.from_group(_group_spec(args).build())
    if args.format == "json":
        print(summary.model_dump_json(indent=2))
    else:
        for d, c in enumerate(summary.counts_by_degree):
            print(f"degree {d}: {c}")
        print(f"C = {summary.C}, C' = {summary.C_prime}, C/t = {summary.per_secondary:.3f}")
    return 0


def cmd_verify(args) -> int:
    G = _group_spec(args).build()
    report = verify(secondary_invariants(G, _engine_options(args)), G)
    if args.format == "json":
        print(VerifyOut.from_report(report).model_dump_json(indent=2))
    else:
        print(_render_report(report))
    return 0 if report.ok else 1


def cmd_bench(args) -> int:
    specs = parse_group_list(args.list) if args.list else catalog_specs(args.max_n)
    rows = run_bench(specs, _engine_options(args), max_t=args.max_t, store=args.store)
    sys.stdout.write(rows_to_csv(rows))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("app.main:app", host=args.host, port=args.port)
    return 0


COMMANDS = {
    "secondary": cmd_secondary,
    "hilbert": cmd_hilbert,
    "points": cmd_points,
    "canonical-monomials": cmd_canonical,
    "verify": cmd_verify,
    "bench": cmd_bench,
    "serve": cmd_serve,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        configure_logging(args.log_level or get_settings().log_level)
        return COMMANDS[args.command](args)
    except SecInvError as e:
        logger.error("❌ %s", e)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
