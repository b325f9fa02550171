"""Verification harness: edge sweeps, interior Monte Carlo, closed-form edge
certificates, and a search for a non-convexity witness in the stable set.

Sweeps and sampling run on integer-scaled coefficient rows so that every
test point is exact.  Work can be spread over processes; results are merged
in index order, so reports do not depend on the worker count.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import InconsistencyError, InvalidInputError
from .poly_core import (
    MonicPolynomial,
    Rational,
    convex_combination,
    deflate_origin,
    multiply,
    product,
    to_fraction,
)
from .polytope import (
    DEFAULT_EPSILON,
    DEFAULT_GRID,
    WEIGHT_RESOLUTION,
    EdgeClass,
    PolytopeSpec,
    QuadraticFactor,
    StablePolytope,
    affine_independence_rank,
    build_polytope,
    predict_edges,
    weight_numerators,
)
from .stability import (
    StabilityClass,
    classify,
    classify_scaled_batch,
    exact_outcome,
    low_order_value,
)

SCHEMA_VERSION = "1"
DEFAULT_INTERIOR = 10_000
DEFAULT_TRIALS = 100_000


# -- closed-form certificates ---------------------------------------------------


def _check_ab(alpha: Fraction, beta: Fraction) -> None:
    if not (alpha > 1 and beta > 1):
        raise InvalidInputError(f"alpha and beta must be > 1, got {alpha}, {beta}")


def certificate_b1b3(alpha: Rational, beta: Rational, lam: Rational) -> Fraction:
    """lam (1 - lam) alpha beta (beta - alpha)^2, the quartic criterion on lam b1 + (1 - lam) b3."""
    alpha, beta, lam = to_fraction(alpha), to_fraction(beta), to_fraction(lam)
    _check_ab(alpha, beta)
    if alpha == beta:
        raise InvalidInputError("alpha and beta must differ")
    if not 0 < lam < 1:
        raise InvalidInputError(f"lambda must lie in (0, 1), got {lam}")
    return lam * (1 - lam) * alpha * beta * (beta - alpha) ** 2


def certificate_b2b4_cubic(alpha: Rational, beta: Rational, lam: Rational) -> Fraction:
    """[(1 - lam) alpha + lam beta](alpha + beta) + alpha beta (alpha + beta - 1).

    The cubic criterion on lam b2 + (1 - lam) b4 after removing the root at 0.
    """
    alpha, beta, lam = to_fraction(alpha), to_fraction(beta), to_fraction(lam)
    _check_ab(alpha, beta)
    if not 0 <= lam <= 1:
        raise InvalidInputError(f"lambda must lie in [0, 1], got {lam}")
    return ((1 - lam) * alpha + lam * beta) * (alpha + beta) + alpha * beta * (alpha + beta - 1)


def certificate_c1c3(alpha: Rational, beta: Rational, lam: Rational) -> Fraction:
    """(1 - lam) alpha^2, the cubic criterion on lam c1 + (1 - lam) c3."""
    alpha, beta, lam = to_fraction(alpha), to_fraction(beta), to_fraction(lam)
    _check_ab(alpha, beta)
    if not 0 < lam <= 1:
        raise InvalidInputError(f"lambda must lie in (0, 1], got {lam}")
    return (1 - lam) * alpha**2


def _linear(c: Fraction) -> MonicPolynomial:
    return MonicPolynomial((c,))


def b_polynomials(alpha: Rational, beta: Rational) -> tuple[MonicPolynomial, ...]:
    """The four quartic vertices b1..b4 built from s^2 + alpha s + alpha and s^2 + beta s + beta."""
    qa, qb = QuadraticFactor(to_fraction(alpha)), QuadraticFactor(to_fraction(beta))
    return (
        multiply(qa.without_linear(), qb.full()),
        multiply(qa.without_constant(), qb.full()),
        multiply(qa.full(), qb.without_linear()),
        multiply(qa.full(), qb.without_constant()),
    )


def c_polynomials(alpha: Rational, beta: Rational) -> tuple[MonicPolynomial, ...]:
    """The cubic vertices c1..c3: (s^2 + alpha)(s + beta), (s^2 + alpha s)(s + beta), (s^2 + alpha s + alpha) s."""
    qa = QuadraticFactor(to_fraction(alpha))
    lin = _linear(to_fraction(beta))
    return (
        multiply(qa.without_linear(), lin),
        multiply(qa.without_constant(), lin),
        multiply(qa.full(), _linear(Fraction(0))),
    )


def direct_b1b3(alpha: Rational, beta: Rational, lam: Rational) -> Fraction:
    b1, _, b3, _ = b_polynomials(alpha, beta)
    return low_order_value(convex_combination(b1, b3, lam))


def direct_b2b4_cubic(alpha: Rational, beta: Rational, lam: Rational) -> Fraction:
    _, b2, _, b4 = b_polynomials(alpha, beta)
    return low_order_value(deflate_origin(convex_combination(b2, b4, lam)))


def direct_c1c3(alpha: Rational, beta: Rational, lam: Rational) -> Fraction:
    c1, _, c3 = c_polynomials(alpha, beta)
    return low_order_value(convex_combination(c1, c3, lam))


CERTIFICATES: dict[str, tuple[Callable, Callable]] = {
    "b1b3": (certificate_b1b3, direct_b1b3),
    "b2b4_cubic": (certificate_b2b4_cubic, direct_b2b4_cubic),
    "c1c3": (certificate_c1c3, direct_c1c3),
}


@dataclass(frozen=True)
class CertificateCheck:
    name: str
    alpha: Fraction
    beta: Fraction
    lam: Fraction
    symbolic: Fraction
    direct: Fraction

    @property
    def match(self) -> bool:
        return self.symbolic == self.direct

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "lambda": str(self.lam),
            "symbolic": str(self.symbolic),
            "numeric": float(self.direct),
            "direct": str(self.direct),
            "match": self.match,
            "positive": self.direct > 0,
        }


def check_certificate(name: str, alpha: Rational, beta: Rational, lam: Rational) -> CertificateCheck:
    closed, direct = CERTIFICATES[name]
    a, b, l = to_fraction(alpha), to_fraction(beta), to_fraction(lam)
    return CertificateCheck(name, a, b, l, closed(a, b, l), direct(a, b, l))


_CERT_LAMBDAS = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


def spec_certificates(poly: StablePolytope) -> list[CertificateCheck]:
    """Certificate checks for every factor pair the polytope's edges reduce to."""
    spec = poly.spec
    checks = []
    for a, b in itertools.combinations(spec.quadratic_alphas, 2):
        for lam in _CERT_LAMBDAS:
            checks.append(check_certificate("b1b3", a, b, lam))
            checks.append(check_certificate("b2b4_cubic", a, b, lam))
    if spec.linear_alpha is not None:
        for a in spec.quadratic_alphas:
            for lam in _CERT_LAMBDAS + (Fraction(1),):
                checks.append(check_certificate("c1c3", a, spec.linear_alpha, lam))
    return checks


# -- scaled rows and guarded classification ---------------------------------------


def _scaled_vertices(poly: StablePolytope) -> tuple[list[list[int]], int]:
    """Vertex rows over one common denominator: vertex_i == rows[i] / lead."""
    lead = math.lcm(*(c.denominator for v in poly.vertices for c in v.coeffs))
    rows = [[c.numerator * (lead // c.denominator) for c in v.coeffs] for v in poly.vertices]
    return rows, lead


def _classify_rows(rows: list[list[int]], leads: list[int]) -> list[tuple[Optional[StabilityClass], float, Optional[str]]]:
    """(class, margin, error); an exact/numeric inconsistency becomes an error entry, not an exception."""
    try:
        return [(k, m, None) for k, m in classify_scaled_batch(rows, leads)]
    except InconsistencyError:
        out = []
        for row, lead in zip(rows, leads):
            try:
                (k, m), = classify_scaled_batch([row], [lead])
                out.append((k, m, None))
            except InconsistencyError as exc:
                out.append((None, math.nan, str(exc)))
        return out


def _poly_from_row(row: Sequence[int], lead: int) -> MonicPolynomial:
    return MonicPolynomial(tuple(Fraction(x, lead) for x in row))


def _run(fn, tasks: list, workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def _chunks(count: int, pieces: int) -> list[tuple[int, int]]:
    pieces = max(1, min(pieces, count))
    step = -(-count // pieces)
    return [(lo, min(lo + step, count)) for lo in range(0, count, step)]


# -- edges ------------------------------------------------------------------------


@dataclass
class EdgeReport:
    endpoints: tuple[int, int]
    predicted: EdgeClass
    samples: int
    violations: list[dict] = field(default_factory=list)
    # most positive root real part over the points predicted stable
    # (interior grid points, or the deflated quotients on boundary edges)
    worst_margin: float = -math.inf

    def to_json(self) -> dict:
        return {
            "endpoints": list(self.endpoints),
            "predicted": self.predicted.value,
            "samples": self.samples,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
        }


def _sweep_one(task) -> EdgeReport:
    (i, j), predicted, vi, vj, lead, grid_size = task
    steps = grid_size - 1
    rows = [[t * x + (steps - t) * y for x, y in zip(vi, vj)] for t in range(grid_size)]
    leads = [steps * lead] * grid_size
    verdicts = _classify_rows(rows, leads)
    report = EdgeReport((i, j), predicted, grid_size)
    if predicted == EdgeClass.ON_BOUNDARY:
        quotients = _classify_rows([r[1:] for r in rows], leads)
    for t, (row, (kind, margin, err)) in enumerate(zip(rows, verdicts)):
        lam = Fraction(t, steps)
        problem = err
        if predicted == EdgeClass.OPEN_SEGMENT_STABLE:
            interior = 0 < t < steps
            if interior and err is None:
                report.worst_margin = max(report.worst_margin, margin)
            allowed = (StabilityClass.STABLE,) if interior else (StabilityClass.STABLE, StabilityClass.BOUNDARY)
            if problem is None and kind not in allowed:
                problem = f"expected {'stable' if interior else 'stable or boundary'}"
            quotient = None
        else:
            qkind, qmargin, qerr = quotients[t]
            quotient = None if qkind is None else qkind.value
            if qerr is None:
                report.worst_margin = max(report.worst_margin, qmargin)
            if problem is None and row[0] != 0:
                problem = "constant term is not zero"
            elif problem is None and kind != StabilityClass.BOUNDARY:
                problem = "expected boundary"
            elif problem is None and qerr is not None:
                problem = qerr
            elif problem is None and qkind != StabilityClass.STABLE:
                problem = "deflated quotient is not stable"
        if problem is not None:
            report.violations.append({
                "lambda": str(lam),
                "coeffs": _poly_from_row(row, steps * lead).to_json(),
                "class": None if kind is None else kind.value,
                "margin": margin,
                "quotient_class": quotient,
                "problem": problem,
            })
    return report


def sweep_edges(poly: StablePolytope, grid_size: int = DEFAULT_GRID, workers: int = 1) -> list[EdgeReport]:
    """Classify every edge on the exact grid lam = t/(grid_size - 1) and compare to its prediction."""
    if grid_size < 3:
        raise InvalidInputError(f"grid size must be >= 3, got {grid_size}")
    rows, lead = _scaled_vertices(poly)
    tasks = [
        (e.endpoints, e.predicted, rows[e.endpoints[0]], rows[e.endpoints[1]], lead, grid_size)
        for e in predict_edges(poly)
    ]
    return _run(_sweep_one, tasks, workers)


# -- interior -----------------------------------------------------------------------


@dataclass(frozen=True)
class _InteriorChunk:
    """Picklable chunk worker that classifies rows over a fixed lead."""

    lead: int

    def __call__(self, task):
        vertex_rows, weights = task
        n = len(vertex_rows[0])
        rows = [
            [sum(w * v[k] for w, v in zip(ws, vertex_rows)) for k in range(n)]
            for ws in weights
        ]
        return rows, _classify_rows(rows, [self.lead] * len(rows))


def check_interior(
    poly: StablePolytope,
    count: int = DEFAULT_INTERIOR,
    epsilon: Rational = DEFAULT_EPSILON,
    seed: int = 0,
    centroid: bool = False,
    workers: int = 1,
) -> tuple[list[dict], float]:
    """Classify `count` seeded interior samples; return (non-stable samples, worst margin).

    With centroid=True every sample is the centroid.
    """
    eps = to_fraction(epsilon)
    size = poly.n + 1
    if not 0 < eps < Fraction(1, size):
        raise InvalidInputError(f"epsilon must lie in (0, 1/{size}), got {eps}")
    if count < 1:
        raise InvalidInputError(f"count must be >= 1, got {count}")
    if centroid:
        scale = size
        weights = [(1,) * size] * count
    else:
        scale = WEIGHT_RESOLUTION
        weights = weight_numerators(size, count, eps, seed)
    rows, lead = _scaled_vertices(poly)
    total_lead = scale * lead
    # the same lead for every row; fold it into the chunk's row scale
    tasks = [(rows, weights[lo:hi]) for lo, hi in _chunks(count, max(workers, 1))]
    violations: list[dict] = []
    worst = -math.inf
    index = 0
    for point_rows, results in _run(_InteriorChunk(total_lead), tasks, workers):
        for row, (kind, margin, err) in zip(point_rows, results):
            if err is None:
                worst = max(worst, margin)
            if kind != StabilityClass.STABLE:
                violations.append({
                    "index": index,
                    "weights": [str(Fraction(w, scale)) for w in weights[index]],
                    "coeffs": _poly_from_row(row, total_lead).to_json(),
                    "class": None if kind is None else kind.value,
                    "margin": margin,
                    "problem": err or "expected stable",
                })
            index += 1
    return violations, worst


# -- whole-polytope report ---------------------------------------------------------


@dataclass
class VerificationReport:
    poly: StablePolytope
    grid_size: int
    interior_count: int
    epsilon: Fraction
    seed: int
    affine_rank: int
    edges: list[EdgeReport]
    interior_violations: list[dict]
    interior_worst_margin: float
    certificates: list[CertificateCheck]
    wall_time: float = 0.0

    @property
    def edge_violation_count(self) -> int:
        return sum(len(e.violations) for e in self.edges)

    @property
    def ok(self) -> bool:
        return (
            self.edge_violation_count == 0
            and not self.interior_violations
            and all(c.match for c in self.certificates)
        )

    def to_json(self, include_timing: bool = False) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "spec": self.poly.spec.to_json(),
            "parameters": {
                "grid_size": self.grid_size,
                "interior_count": self.interior_count,
                "epsilon": str(self.epsilon),
                "seed": self.seed,
            },
            "vertices": [v.to_json() for v in self.poly.vertices],
            "affine_rank": self.affine_rank,
            "edges": [e.to_json() for e in self.edges],
            "interior": {
                "count": self.interior_count,
                "violations": self.interior_violations,
                "worst_margin": self.interior_worst_margin,
            },
            "certificates": [c.to_json() for c in self.certificates],
            "ok": self.ok,
        }
        if include_timing:
            out["wall_time"] = self.wall_time
        return out

    def edge_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["i", "j", "predicted", "samples", "violations", "worst_margin"])
        for e in self.edges:
            writer.writerow([*e.endpoints, e.predicted.value, e.samples, len(e.violations), repr(e.worst_margin)])
        return buf.getvalue()


def verify_polytope(
    poly: StablePolytope,
    grid_size: int = DEFAULT_GRID,
    interior_count: int = DEFAULT_INTERIOR,
    epsilon: Rational = DEFAULT_EPSILON,
    seed: int = 0,
    workers: int = 1,
) -> VerificationReport:
    """Run edge sweeps, interior sampling and certificate checks on one polytope."""
    start = time.perf_counter()
    eps = to_fraction(epsilon)
    edges = sweep_edges(poly, grid_size, workers)
    violations, worst = check_interior(poly, interior_count, eps, seed, workers=workers)
    return VerificationReport(
        poly=poly,
        grid_size=grid_size,
        interior_count=interior_count,
        epsilon=eps,
        seed=seed,
        affine_rank=affine_independence_rank(poly),
        edges=edges,
        interior_violations=violations,
        interior_worst_margin=worst,
        certificates=spec_certificates(poly),
        wall_time=time.perf_counter() - start,
    )


def random_alphas(count: int, rng: random.Random, denominator: int = 100) -> tuple[Fraction, ...]:
    """`count` pairwise-distinct rationals drawn uniformly from the grid on (1, 10]."""
    picks = rng.sample(range(1, 9 * denominator + 1), count)
    return tuple(1 + Fraction(k, denominator) for k in picks)


# -- non-convexity ------------------------------------------------------------------


def _witness_candidate(n: int, rng: random.Random) -> tuple[MonicPolynomial, MonicPolynomial]:
    # p: n slow real roots clustered near -a
    a = Fraction(rng.randint(5, 20), 10)
    p = product(_linear(a + Fraction(rng.randint(0, 5), 100)) for _ in range(n))
    # q: one fast real root, a lightly damped complex pair, slow roots to fill the degree
    fast = Fraction(rng.randint(10, 100))
    omega = Fraction(rng.randint(1, 20), 2)
    zeta = Fraction(rng.randint(1, 20), 100)
    pair = MonicPolynomial((omega * omega, 2 * zeta * omega))
    q = product([_linear(fast), pair] + [_linear(a)] * (n - 3))
    return p, q


def _search_block(task) -> Optional[int]:
    n, seed, lo, hi = task
    for t in range(lo, hi):
        p, q = _witness_candidate(n, random.Random(f"{seed}:{t}"))
        if exact_outcome(p) != "stable" or exact_outcome(q) != "stable":
            continue
        if exact_outcome(convex_combination(p, q, Fraction(1, 2))) == "unstable":
            return t
    return None


def nonconvexity_search(
    n: int, trials: int = DEFAULT_TRIALS, seed: int = 0, workers: int = 1
) -> Optional[tuple[MonicPolynomial, MonicPolynomial]]:
    """Two stable polynomials whose coefficient midpoint is unstable, or None.

    Trial t draws from its own generator seeded by (seed, t); the witness is the
    lowest successful trial index, so the result does not depend on `workers`.
    """
    if n < 3:
        raise InvalidInputError(f"the stable set is convex for n < 3; need n >= 3, got {n}")
    if trials < 1:
        raise InvalidInputError(f"trials must be >= 1, got {trials}")
    block = 64
    per_round = block * max(workers, 1)
    for start in range(0, trials, per_round):
        tasks = [
            (n, seed, lo, min(lo + block, trials))
            for lo in range(start, min(start + per_round, trials), block)
        ]
        hits = [t for t in _run(_search_block, tasks, workers) if t is not None]
        if hits:
            p, q = _witness_candidate(n, random.Random(f"{seed}:{min(hits)}"))
            mid = convex_combination(p, q, Fraction(1, 2))
            # re-verify with the full classifier, both routes
            if (
                classify(p).kind == StabilityClass.STABLE
                and classify(q).kind == StabilityClass.STABLE
                and classify(mid).kind == StabilityClass.UNSTABLE
            ):
                return p, q
            raise InconsistencyError("witness failed full re-verification")
    return None


def verify_spec(n: int, alphas: Sequence[Rational], **kwargs) -> VerificationReport:
    return verify_polytope(build_polytope(PolytopeSpec(n, tuple(alphas))), **kwargs)
