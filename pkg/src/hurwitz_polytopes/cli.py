"""Command-line entry point.

Coefficients are ascending, constant term first, leading 1 omitted:
``--coeffs 6,12,11,5`` means s^4 + 5 s^3 + 11 s^2 + 12 s + 6.

Exit codes: 0 success / stable, 1 verification failure or no witness,
2 invalid input, 3 boundary, 4 unstable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InconsistencyError, InvalidInputError
from .poly_core import convex_combination, from_coeffs, to_fraction
from .polytope import DEFAULT_EPSILON, DEFAULT_GRID, PolytopeSpec, build_polytope
from .stability import StabilityClass, classify
from .verify import DEFAULT_INTERIOR, DEFAULT_TRIALS, SCHEMA_VERSION, nonconvexity_search, verify_polytope

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_BOUNDARY = 3
EXIT_UNSTABLE = 4

_CLASS_EXIT = {
    StabilityClass.STABLE: EXIT_OK,
    StabilityClass.BOUNDARY: EXIT_BOUNDARY,
    StabilityClass.UNSTABLE: EXIT_UNSTABLE,
}


def parse_rationals(text: str) -> list[Fraction]:
    """Comma-separated "p/q" or decimal strings, converted exactly."""
    items = [t.strip() for t in text.split(",")]
    if not text.strip() or any(not t for t in items):
        raise InvalidInputError(f"malformed rational list: {text!r}")
    return [to_fraction(t) for t in items]


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _spec_from_args(args) -> PolytopeSpec:
    if args.n is None or args.alphas is None:
        raise InvalidInputError("--n and --alphas are required")
    return PolytopeSpec(args.n, tuple(parse_rationals(args.alphas)))


def _check_workers(args) -> None:
    if args.workers < 1:
        raise InvalidInputError(f"--workers must be >= 1, got {args.workers}")


def cmd_build(args) -> int:
    poly = build_polytope(_spec_from_args(args))
    verdicts = [classify(v) for v in poly.vertices]
    if args.format == "csv":
        rows = [["index", "vertex_class", "verdict", "coeffs"]]
        for i, (v, kind, verdict) in enumerate(zip(poly.vertices, poly.vertex_class, verdicts)):
            rows.append([i, kind.value, verdict.kind.value, " ".join(v.to_json())])
        _emit(_csv(rows), args.out)
    else:
        payload = {"schema": SCHEMA_VERSION, **poly.to_json()}
        payload["vertex_verdicts"] = [v.kind.value for v in verdicts]
        _emit(_dump_json(payload), args.out)
    for i, verdict in enumerate(verdicts):
        print(f"vertex {i}: {verdict.kind.value}", file=sys.stderr)
    return EXIT_OK


def cmd_classify(args) -> int:
    if args.coeffs is None:
        raise InvalidInputError("--coeffs is required")
    p = from_coeffs(parse_rationals(args.coeffs))
    verdict = classify(p)
    if args.format == "csv":
        _emit(_csv([["class", "margin", "coeffs"], [verdict.kind.value, repr(verdict.margin), " ".join(p.to_json())]]), args.out)
    else:
        _emit(_dump_json({"schema": SCHEMA_VERSION, "coeffs": p.to_json(), **verdict.to_json()}), args.out)
    return _CLASS_EXIT[verdict.kind]


def cmd_verify(args) -> int:
    _check_workers(args)
    poly = build_polytope(_spec_from_args(args))
    report = verify_polytope(
        poly,
        grid_size=args.grid,
        interior_count=args.interior,
        epsilon=to_fraction(args.epsilon),
        seed=args.seed,
        workers=args.workers,
    )
    if args.format == "csv":
        _emit(report.edge_csv(), args.out)
    else:
        _emit(_dump_json(report.to_json()), args.out)
    print(
        f"{'ok' if report.ok else 'FAILED'}: {len(report.edges)} edges, "
        f"{report.edge_violation_count} edge violations, "
        f"{len(report.interior_violations)} interior violations, "
        f"affine rank {report.affine_rank}/{poly.n}, {report.wall_time:.2f}s",
        file=sys.stderr,
    )
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_counterexample(args) -> int:
    _check_workers(args)
    if args.n is None:
        raise InvalidInputError("--n is required")
    found = nonconvexity_search(args.n, args.trials, args.seed, workers=args.workers)
    if found is None:
        print(f"no witness within {args.trials} trials", file=sys.stderr)
        return EXIT_FAILED
    p, q = found
    mid = convex_combination(p, q, Fraction(1, 2))
    triple = [("p", p), ("q", q), ("midpoint", mid)]
    verdicts = {name: classify(poly) for name, poly in triple}
    if args.format == "csv":
        rows = [["name", "class", "margin", "coeffs"]]
        rows += [[name, verdicts[name].kind.value, repr(verdicts[name].margin), " ".join(poly.to_json())] for name, poly in triple]
        _emit(_csv(rows), args.out)
    else:
        payload = {"schema": SCHEMA_VERSION, "n": args.n, "seed": args.seed, "trials": args.trials}
        for name, poly in triple:
            payload[name] = {"coeffs": poly.to_json(), "class": verdicts[name].kind.value, "margin": verdicts[name].margin}
        _emit(_dump_json(payload), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hurwitz-polytopes",
        description="Stable polytopes of monic Hurwitz polynomials: build, classify, verify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("build", help="construct the vertex set for n and alphas")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alphas", required=True, help="comma-separated rationals > 1, e.g. 3/2,2,4")
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("classify", help="classify one monic polynomial")
    p.add_argument("--coeffs", required=True, help="ascending a_1,...,a_n (constant term first)")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="sweep edges and sample the interior of one polytope")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alphas", required=True)
    p.add_argument("--grid", type=int, default=DEFAULT_GRID)
    p.add_argument("--interior", type=int, default=DEFAULT_INTERIOR)
    p.add_argument("--epsilon", default=str(DEFAULT_EPSILON))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("counterexample", help="search for two stable polynomials with an unstable midpoint")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_counterexample)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_FAILED
