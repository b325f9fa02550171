"""Vertex sets of the (n+1)-vertex stable polytopes and their edges.

Even n = 2m, distinct alphas a_1..a_m > 1:

    vertex 0    = prod_k (s^2 + a_k s + a_k)
    vertex 2k-1 = vertex 0 with factor k replaced by s^2 + a_k
    vertex 2k   = vertex 0 with factor k replaced by s^2 + a_k s

Odd n = 2m + 1 appends a linear factor (s + a_{m+1}); vertex n replaces
it by s.  Vertex 0 is stable, every other vertex sits on the stability
boundary (an imaginary pair or a root at the origin).
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidInputError
from .poly_core import (
    MonicPolynomial,
    Rational,
    barycentric_point,
    convex_combination,
    product,
    to_fraction,
)

DEFAULT_EPSILON = Fraction(1, 1000)
DEFAULT_GRID = 101
# common denominator of the sampled barycentric weights
WEIGHT_RESOLUTION = 2**24


@dataclass(frozen=True)
class QuadraticFactor:
    """s^2 + alpha s + alpha and its two degraded forms."""

    alpha: Fraction

    def __post_init__(self) -> None:
        if not self.alpha > 1:
            raise InvalidInputError(f"alpha must be > 1, got {self.alpha}")

    def full(self) -> MonicPolynomial:
        return MonicPolynomial((self.alpha, self.alpha))

    def without_linear(self) -> MonicPolynomial:
        return MonicPolynomial((self.alpha, Fraction(0)))

    def without_constant(self) -> MonicPolynomial:
        return MonicPolynomial((Fraction(0), self.alpha))


class VertexKind(str, enum.Enum):
    INTERIOR_STABLE = "interior_stable"
    BOUNDARY_IMAGINARY_PAIR = "boundary_imaginary_pair"
    BOUNDARY_ORIGIN_ROOT = "boundary_origin_root"


class EdgeClass(str, enum.Enum):
    OPEN_SEGMENT_STABLE = "open_segment_stable"
    ON_BOUNDARY = "on_boundary"


@dataclass(frozen=True)
class PolytopeSpec:
    n: int
    alphas: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphas", tuple(to_fraction(a) for a in self.alphas))
        if not isinstance(self.n, int) or self.n < 2:
            raise InvalidInputError(f"n must be an integer >= 2, got {self.n!r}")
        expected = (self.n + 1) // 2
        if len(self.alphas) != expected:
            rule = "n/2" if self.n % 2 == 0 else "(n+1)/2"
            raise InvalidInputError(
                f"n={self.n} needs {rule} = {expected} alphas, got {len(self.alphas)}"
            )
        for a in self.alphas:
            if not a > 1:
                raise InvalidInputError(f"every alpha must be > 1, got {a}")
        if len(set(self.alphas)) != len(self.alphas):
            raise InvalidInputError("alphas must be pairwise distinct")

    @property
    def m(self) -> int:
        """Number of quadratic factors."""
        return self.n // 2

    @property
    def quadratic_alphas(self) -> tuple[Fraction, ...]:
        return self.alphas[: self.m]

    @property
    def linear_alpha(self) -> Optional[Fraction]:
        return self.alphas[self.m] if self.n % 2 else None

    def to_json(self) -> dict:
        return {"n": self.n, "alphas": [str(a) for a in self.alphas]}


@dataclass(frozen=True)
class StablePolytope:
    spec: PolytopeSpec
    vertices: tuple[MonicPolynomial, ...]
    vertex_class: tuple[VertexKind, ...]

    @property
    def n(self) -> int:
        return self.spec.n

    def to_json(self) -> dict:
        out = self.spec.to_json()
        out["vertices"] = [v.to_json() for v in self.vertices]
        out["vertex_class"] = [k.value for k in self.vertex_class]
        return out


@dataclass(frozen=True)
class EdgePrediction:
    endpoints: tuple[int, int]
    predicted: EdgeClass
    # (name, value at lambda = 1/2) when the edge is one of the closed-form cases
    certificate: Optional[tuple[str, Fraction]] = None

    def to_json(self) -> dict:
        cert = None
        if self.certificate is not None:
            cert = {"name": self.certificate[0], "value": str(self.certificate[1])}
        return {"endpoints": list(self.endpoints), "predicted": self.predicted.value, "certificate": cert}


def vertex_factors(spec: PolytopeSpec) -> list[list[MonicPolynomial]]:
    """The defining factor list of each vertex, index 0..n."""
    quads = [QuadraticFactor(a) for a in spec.quadratic_alphas]
    base = [q.full() for q in quads]
    if spec.linear_alpha is not None:
        base.append(MonicPolynomial((spec.linear_alpha,)))
    rows = [list(base)]
    for k, q in enumerate(quads):
        for degraded in (q.without_linear(), q.without_constant()):
            factors = list(base)
            factors[k] = degraded
            rows.append(factors)
    if spec.linear_alpha is not None:
        factors = list(base)
        factors[-1] = MonicPolynomial((Fraction(0),))
        rows.append(factors)
    return rows


def _kind(index: int, n: int, odd: bool) -> VertexKind:
    if index == 0:
        return VertexKind.INTERIOR_STABLE
    if index % 2 == 0 or (odd and index == n):
        return VertexKind.BOUNDARY_ORIGIN_ROOT
    return VertexKind.BOUNDARY_IMAGINARY_PAIR


def _build(spec: PolytopeSpec) -> StablePolytope:
    vertices = tuple(product(f) for f in vertex_factors(spec))
    odd = spec.n % 2 == 1
    kinds = tuple(_kind(i, spec.n, odd) for i in range(spec.n + 1))
    return StablePolytope(spec, vertices, kinds)


def build_vertices_even(spec: PolytopeSpec) -> StablePolytope:
    if spec.n % 2:
        raise InvalidInputError(f"build_vertices_even needs even n, got {spec.n}")
    return _build(spec)


def build_vertices_odd(spec: PolytopeSpec) -> StablePolytope:
    if spec.n % 2 == 0:
        raise InvalidInputError(f"build_vertices_odd needs odd n, got {spec.n}")
    return _build(spec)


def build_polytope(spec: PolytopeSpec) -> StablePolytope:
    """Dispatch on the parity of n."""
    return _build(spec)


# -- edges ----------------------------------------------------------------------


def _edge_certificate(poly: StablePolytope, i: int, j: int) -> Optional[tuple[str, Fraction]]:
    from . import verify  # certificates live with the verification harness

    spec = poly.spec
    if spec.n > 4 or i == 0:
        return None
    half = Fraction(1, 2)
    quads = spec.quadratic_alphas
    odd = spec.n % 2 == 1
    if odd and i == 1 and j == spec.n:
        return ("c1c3", verify.certificate_c1c3(quads[0], spec.linear_alpha, half))
    if not odd and spec.n == 4:
        alpha, beta = quads
        if (i, j) == (1, 3):
            return ("b1b3", verify.certificate_b1b3(alpha, beta, half))
        if (i, j) == (2, 4):
            return ("b2b4_cubic", verify.certificate_b2b4_cubic(alpha, beta, half))
    return None


def predict_edges(poly: StablePolytope) -> list[EdgePrediction]:
    """Every edge (i, j), i < j, with its predicted behaviour.

    An edge lies on the boundary iff both endpoints have a zero constant term;
    every other open edge is predicted stable.
    """
    out = []
    for i, j in itertools.combinations(range(poly.n + 1), 2):
        both_origin = poly.vertices[i].coeffs[0] == 0 and poly.vertices[j].coeffs[0] == 0
        predicted = EdgeClass.ON_BOUNDARY if both_origin else EdgeClass.OPEN_SEGMENT_STABLE
        out.append(EdgePrediction((i, j), predicted, _edge_certificate(poly, i, j)))
    return out


def _check_indices(poly: StablePolytope, i: int, j: int) -> None:
    if not (0 <= i < j <= poly.n):
        raise InvalidInputError(f"need 0 <= i < j <= {poly.n}, got ({i}, {j})")


def edge_point(poly: StablePolytope, i: int, j: int, lam: Rational) -> MonicPolynomial:
    """lam * vertex_i + (1 - lam) * vertex_j."""
    _check_indices(poly, i, j)
    return convex_combination(poly.vertices[i], poly.vertices[j], lam)


def lambda_grid(grid_size: int = DEFAULT_GRID) -> list[Fraction]:
    if grid_size < 2:
        raise InvalidInputError(f"grid size must be >= 2, got {grid_size}")
    return [Fraction(t, grid_size - 1) for t in range(grid_size)]


# -- interior sampling ------------------------------------------------------------


def _check_epsilon(poly: StablePolytope, epsilon: Fraction) -> None:
    if not 0 < epsilon < Fraction(1, poly.n + 1):
        raise InvalidInputError(f"epsilon must lie in (0, 1/{poly.n + 1}), got {epsilon}")


def weight_numerators(
    n_vertices: int, count: int, epsilon: Rational, seed: int
) -> list[tuple[int, ...]]:
    """Integer weight vectors k with sum(k) == WEIGHT_RESOLUTION and k_i / WEIGHT_RESOLUTION >= epsilon.

    Uniform simplex draws by normalised exponentials, quantised to the common
    denominator (the rounding remainder goes to the largest weight), and
    rejected until the floor holds exactly.
    """
    if count < 1:
        raise InvalidInputError(f"count must be >= 1, got {count}")
    eps = to_fraction(epsilon)
    floor = math.ceil(eps * WEIGHT_RESOLUTION)
    rng = np.random.default_rng(seed)
    out: list[tuple[int, ...]] = []
    while len(out) < count:
        block = max(count - len(out), 16)
        g = rng.exponential(1.0, size=(block, n_vertices))
        q = np.floor(g / g.sum(axis=1, keepdims=True) * WEIGHT_RESOLUTION).astype(np.int64)
        for row in q:
            k = [int(x) for x in row]
            k[int(np.argmax(row))] += WEIGHT_RESOLUTION - sum(k)
            if min(k) >= floor:
                out.append(tuple(k))
                if len(out) == count:
                    break
    return out


def sample_weights(
    poly: StablePolytope, count: int, epsilon: Rational, seed: int, centroid: bool = False
) -> list[tuple[Fraction, ...]]:
    eps = to_fraction(epsilon)
    _check_epsilon(poly, eps)
    size = poly.n + 1
    if centroid:
        if count < 1:
            raise InvalidInputError(f"count must be >= 1, got {count}")
        return [tuple(Fraction(1, size) for _ in range(size))] * count
    return [
        tuple(Fraction(x, WEIGHT_RESOLUTION) for x in k)
        for k in weight_numerators(size, count, eps, seed)
    ]


def sample_interior(
    poly: StablePolytope,
    count: int,
    epsilon: Rational = DEFAULT_EPSILON,
    seed: int = 0,
    centroid: bool = False,
) -> list[MonicPolynomial]:
    """`count` seeded points of the polytope with every barycentric weight >= epsilon.

    With centroid=True the weights are all 1/(n+1) (the epsilon -> 1/(n+1) limit).
    """
    return [
        barycentric_point(poly.vertices, w)
        for w in sample_weights(poly, count, epsilon, seed, centroid)
    ]


def centroid(poly: StablePolytope) -> MonicPolynomial:
    size = poly.n + 1
    return barycentric_point(poly.vertices, [Fraction(1, size)] * size)


# -- dimension --------------------------------------------------------------------


def exact_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank by Gaussian elimination over the rationals."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    cols = len(m[0])
    rank = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(rank + 1, len(m)):
            if m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def affine_independence_rank(poly: StablePolytope) -> int:
    """Rank of the differences vertex_i - vertex_0, i = 1..n (n means full-dimensional)."""
    return affine_rank(poly.vertices)


def affine_rank(vertices: Sequence[MonicPolynomial]) -> int:
    v0 = vertices[0].coeffs
    return exact_rank([[x - y for x, y in zip(v.coeffs, v0)] for v in vertices[1:]])
