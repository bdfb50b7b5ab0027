"""Command-line entry point: verify, optimize, upperbound, construct.

Exit codes: 0 success, 1 I/O or parse error, 2 invalid certificate or bracket,
3 empty search space, 4 shift search fell back to a flagged shift,
5 enumeration budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

import jsonschema

from . import certificate, lattice_lab, optimizer, upperbound
from .cmfield import RealQuadElement, real_subfield_m

log = logging.getLogger("unitdist")

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_EMPTY, EXIT_SHIFT, EXIT_BUDGET = range(6)


def _emit(doc) -> None:
    json.dump(doc, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


def cmd_verify(args) -> int:
    try:
        cert = certificate.load_certificate(args.path)
    except (OSError, json.JSONDecodeError, jsonschema.ValidationError, ValueError) as exc:
        log.error("cannot load certificate %s: %s", args.path, exc)
        return EXIT_IO
    report = certificate.validate(cert)
    doc = {"certificate": cert.to_dict(), "validation": report.to_dict(), "delta": None}
    if report.valid:
        doc["delta"] = certificate.delta(cert).to_dict()
    else:
        log.error("certificate invalid; failed checks: %s", ", ".join(report.failed()))
    _emit(doc)
    return EXIT_OK if report.valid else EXIT_INVALID


def cmd_optimize(args) -> int:
    try:
        doc = json.loads(Path(args.config).read_text()) if args.config else {}
        config = optimizer.SearchConfig.from_dict(doc)
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        log.error("cannot load config: %s", exc)
        return EXIT_IO
    try:
        result = optimizer.optimize(config)
    except optimizer.EmptySearchError as exc:
        log.error("%s", exc)
        return EXIT_EMPTY
    out = result.to_dict()
    if args.out:
        Path(args.out).write_text(json.dumps(out, indent=2) + "\n")
    _emit(out)
    return EXIT_OK


def cmd_upperbound(args) -> int:
    try:
        if args.search:
            lo, hi = args.search
            report = upperbound.exponent_upper_bound(lo, hi, tol=args.tol)
        else:
            report = upperbound.report_at(args.c)
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_INVALID
    _emit(report.to_dict())
    return EXIT_OK


def parse_alpha(text: str, n: int) -> RealQuadElement:
    """'x' or 'x,y' with each part an integer or num/den."""
    parts = [Fraction(s.strip()) for s in text.split(",")]
    m = real_subfield_m(n)
    if m == 1:
        if len(parts) != 1 and not (len(parts) == 2 and parts[1] == 0):
            raise ValueError("n=4 takes a rational alpha without a sqrt part")
        return RealQuadElement(1, parts[0])
    if len(parts) == 1:
        parts.append(Fraction(0))
    if len(parts) != 2:
        raise ValueError(f"alpha must be 'x,y', got {text!r}")
    return RealQuadElement(m, parts[0], parts[1])


def cmd_construct(args) -> int:
    try:
        alpha = parse_alpha(args.alpha, args.n)
        lat = lattice_lab.ScaledLattice(args.n, alpha)
        if not args.R > 1:
            raise ValueError(f"R must exceed 1, got {args.R}")
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_IO
    try:
        shift = lattice_lab.choose_shift(lat, args.R, args.trials, args.seed, args.budget)
        ps = lattice_lab.build_point_set(lat, args.R, shift.w, args.budget)
    except lattice_lab.BudgetExceeded as exc:
        log.error("%s", exc)
        return EXIT_BUDGET
    count = lattice_lab.count_unit_distances(ps, lat)
    side = lattice_lab.sidecar(lat, ps, shift, count)
    if args.out:
        lattice_lab.write_csv(ps, f"{args.out}.csv")
        lattice_lab.write_sidecar(side, f"{args.out}.json")
    _emit(count.to_dict())
    return EXIT_SHIFT if shift.warning else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unitdist", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a certificate and evaluate delta")
    p.add_argument("path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("optimize", help="search for certificates with large delta")
    p.add_argument("config", nargs="?", help="JSON search config; defaults apply if omitted")
    p.add_argument("--out", help="also write the result JSON here")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("upperbound", help="evaluate the exponent ceiling of the method")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--c", type=float)
    group.add_argument("--search", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--tol", type=float, default=upperbound.DEFAULT_TOL)
    p.set_defaults(func=cmd_upperbound)

    p = sub.add_parser("construct", help="build a point set with many unit distances")
    p.add_argument("--n", type=int, required=True, choices=(4, 8, 12))
    p.add_argument("--alpha", required=True, help="x or x,y meaning x + y sqrt(m)")
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--budget", type=int, default=lattice_lab.DEFAULT_BUDGET)
    p.add_argument("--out", help="output prefix for <out>.csv and <out>.json")
    p.set_defaults(func=cmd_construct)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_IO if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s: %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
