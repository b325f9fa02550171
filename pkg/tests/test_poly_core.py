from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hurwitz_polytopes.errors import InvalidInputError
from hurwitz_polytopes.poly_core import (
    MonicPolynomial,
    barycentric_point,
    convex_combination,
    deflate_origin,
    evaluate,
    from_coeffs,
    multiply,
)

from .conftest import monic_polys, rationals

F = Fraction
COUNTEREXAMPLE = (F(1, 2), F(1, 6), F(2, 3))


def sympy_product(p: MonicPolynomial, q: MonicPolynomial) -> tuple:
    # independent oracle: symbolic expansion
    s = sympy.Symbol("s")
    ps = sum(sympy.Rational(c.numerator, c.denominator) * s**k for k, c in enumerate(p.full_coeffs()))
    qs = sum(sympy.Rational(c.numerator, c.denominator) * s**k for k, c in enumerate(q.full_coeffs()))
    coeffs = sympy.Poly(sympy.expand(ps * qs), s).all_coeffs()[::-1]
    return tuple(F(int(c.p), int(c.q)) for c in coeffs[:-1])


def test_from_coeffs_counterexample():
    p = from_coeffs(["1/2", "1/6", "2/3"])
    assert p.degree == 3
    assert p.coeffs == COUNTEREXAMPLE
    assert str(p) == "s^3 + 2/3*s^2 + 1/6*s + 1/2"


def test_from_coeffs_degree_one():
    p = from_coeffs([1])
    assert p.degree == 1 and p.full_coeffs() == (1, 1)


def test_from_coeffs_convolution_example():
    p = from_coeffs([6, 12, 11, 5])
    assert p == multiply(from_coeffs([2, 2]), from_coeffs([3, 3]))


@pytest.mark.parametrize("bad", [[], (), ["x"], ["1/0"]])
def test_from_coeffs_rejects(bad):
    with pytest.raises(InvalidInputError):
        from_coeffs(bad)


def test_canonical_storage():
    p = MonicPolynomial((2, "4/6"))
    assert p.coeffs == (F(2), F(2, 3))
    assert all(type(c) is Fraction for c in p.coeffs)


@pytest.mark.parametrize(
    "p, q, expected",
    [
        ((1,), (1,), (1, 2)),
        ((2, 2), (3, 3), (6, 12, 11, 5)),
        ((0, 2), (3, 3), (0, 6, 9, 5)),
    ],
)
def test_multiply_examples(p, q, expected):
    assert multiply(from_coeffs(p), from_coeffs(q)).coeffs == tuple(map(F, expected))


@pytest.mark.parametrize(
    "p, q, lam, expected",
    [
        ((6, 6, 5, 3), (6, 6, 5, 2), F(1, 2), (6, 6, 5, F(5, 2))),
        ((6, 12, 11, 5), (0, 6, 9, 5), F(1, 2), (3, 9, 10, 5)),
    ],
)
def test_convex_combination_examples(p, q, lam, expected):
    assert convex_combination(from_coeffs(p), from_coeffs(q), lam).coeffs == tuple(map(F, expected))


def test_convex_combination_endpoint():
    p, q = from_coeffs([6, 6, 5, 3]), from_coeffs([0, 6, 9, 5])
    assert convex_combination(p, q, 1) == p
    assert convex_combination(p, q, 0) == q


@pytest.mark.parametrize("lam", [F(-1, 10), F(11, 10)])
def test_convex_combination_lambda_range(lam):
    p = from_coeffs([1, 2])
    with pytest.raises(InvalidInputError):
        convex_combination(p, p, lam)


def test_convex_combination_degree_mismatch():
    with pytest.raises(InvalidInputError):
        convex_combination(from_coeffs([1]), from_coeffs([1, 2]), F(1, 2))


def test_evaluate_examples():
    ce = MonicPolynomial(COUNTEREXAMPLE)
    assert evaluate(ce, -1) == 0
    assert evaluate(from_coeffs([1]), 0) == 1
    assert abs(evaluate(from_coeffs([6, 12, 11, 5]), complex(-1, -1))) < 1e-12


def test_barycentric_examples():
    verts = [from_coeffs(c) for c in [(6, 12, 11, 5), (6, 6, 5, 3), (0, 6, 9, 5), (6, 6, 5, 2), (0, 6, 8, 5)]]
    assert barycentric_point(verts, [1, 0, 0, 0, 0]) == verts[0]
    # oracle: column sums of the five vertex vectors are (18, 36, 38, 20)
    sums = tuple(sum(v.coeffs[k] for v in verts) for k in range(4))
    assert sums == (18, 36, 38, 20)
    assert barycentric_point(verts, [F(1, 5)] * 5).coeffs == (F(18, 5), F(36, 5), F(38, 5), F(4))
    assert barycentric_point(verts[:2], [F(1, 2)] * 2) == convex_combination(verts[0], verts[1], F(1, 2))


@pytest.mark.parametrize("weights", [[F(1, 2), F(1, 3)], [F(3, 2), F(-1, 2)]])
def test_barycentric_rejects(weights):
    verts = [from_coeffs([1, 2]), from_coeffs([3, 4])]
    with pytest.raises(InvalidInputError):
        barycentric_point(verts, weights)


def test_deflate_origin():
    assert deflate_origin(from_coeffs([0, 6, 9, 5])) == from_coeffs([6, 9, 5])
    with pytest.raises(InvalidInputError):
        deflate_origin(from_coeffs([1, 2]))
    with pytest.raises(InvalidInputError):
        deflate_origin(from_coeffs([0]))


def test_json_format():
    p = from_coeffs([6, 12, 11, F(5, 2)])
    assert p.to_json() == ["6", "12", "11", "5/2"]
    assert MonicPolynomial.from_json(p.to_json()) == p


def test_scaled_integer_coeffs():
    c, lead = MonicPolynomial(COUNTEREXAMPLE).scaled_integer_coeffs()
    assert (c, lead) == ([3, 1, 4], 6)


# -- properties -------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(monic_polys(max_degree=4), monic_polys(max_degree=4))
def test_multiply_matches_symbolic_expansion(p, q):
    assert multiply(p, q).coeffs == sympy_product(p, q)


@given(monic_polys(), monic_polys(), monic_polys(max_degree=3))
def test_multiply_commutative_associative(p, q, r):
    assert multiply(p, q) == multiply(q, p)
    assert multiply(multiply(p, q), r) == multiply(p, multiply(q, r))


@given(monic_polys(), monic_polys())
def test_degree_additive(p, q):
    assert multiply(p, q).degree == p.degree + q.degree


@given(monic_polys(), monic_polys(), rationals())
def test_evaluate_is_multiplicative(p, q, s):
    assert evaluate(multiply(p, q), s) == evaluate(p, s) * evaluate(q, s)


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.lists(rationals(), min_size=n, max_size=n),
    st.lists(rationals(), min_size=n, max_size=n),
    rationals(0, 1),
)))
def test_convex_equals_barycentric(args):
    a, b, lam = args
    p, q = MonicPolynomial(tuple(a)), MonicPolynomial(tuple(b))
    assert convex_combination(p, q, lam) == barycentric_point([p, q], [lam, 1 - lam])


@given(monic_polys())
def test_round_trip(p):
    assert from_coeffs(p.coeffs) == p
    assert from_coeffs(p.to_json()) == p
