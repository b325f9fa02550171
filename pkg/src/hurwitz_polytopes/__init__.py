"""Stable polytopes in the coefficient space of monic Hurwitz polynomials."""

from .errors import InconsistencyError, InvalidInputError
from .poly_core import (
    MonicPolynomial,
    barycentric_point,
    convex_combination,
    evaluate,
    from_coeffs,
    multiply,
)
from .polytope import (
    PolytopeSpec,
    StablePolytope,
    affine_independence_rank,
    build_polytope,
    build_vertices_even,
    build_vertices_odd,
    edge_point,
    predict_edges,
    sample_interior,
)
from .stability import (
    BOUNDARY_BAND,
    StabilityClass,
    StabilityVerdict,
    classify,
    hurwitz_minors,
    low_order_test,
    positivity_check,
    roots,
)
from .verify import (
    certificate_b1b3,
    certificate_b2b4_cubic,
    certificate_c1c3,
    check_interior,
    nonconvexity_search,
    sweep_edges,
    verify_polytope,
)

__version__ = "0.1.0"

__all__ = [
    "BOUNDARY_BAND",
    "InconsistencyError",
    "InvalidInputError",
    "MonicPolynomial",
    "PolytopeSpec",
    "StabilityClass",
    "StabilityVerdict",
    "StablePolytope",
    "affine_independence_rank",
    "barycentric_point",
    "build_polytope",
    "build_vertices_even",
    "build_vertices_odd",
    "certificate_b1b3",
    "certificate_b2b4_cubic",
    "certificate_c1c3",
    "check_interior",
    "classify",
    "convex_combination",
    "edge_point",
    "evaluate",
    "from_coeffs",
    "hurwitz_minors",
    "low_order_test",
    "multiply",
    "nonconvexity_search",
    "positivity_check",
    "predict_edges",
    "roots",
    "sample_interior",
    "sweep_edges",
    "verify_polytope",
]
