import math
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hurwitz_polytopes import stability
from hurwitz_polytopes.errors import InconsistencyError, InvalidInputError
from hurwitz_polytopes.poly_core import MonicPolynomial, from_coeffs, multiply, product
from hurwitz_polytopes.stability import (
    BOUNDARY_BAND,
    LowOrderResult,
    StabilityClass,
    classify,
    classify_scaled_batch,
    exact_outcome,
    hurwitz_matrix,
    hurwitz_minors,
    low_order_test,
    low_order_value,
    positivity_check,
    roots,
)

from .conftest import monic_polys, rationals

F = Fraction
COUNTEREXAMPLE = from_coeffs(["1/2", "1/6", "2/3"])


def sympy_minors(p: MonicPolynomial) -> list[Fraction]:
    # oracle: Hurwitz matrix from the descending convention d_0 = 1, d_1, ..., d_n,
    # entry (i, j) = d_{2j - i} (1-based), determinants by sympy
    n = p.degree
    desc = [F(1)] + list(reversed(p.coeffs))

    def d(k):
        return desc[k] if 0 <= k <= n else F(0)

    h = sympy.Matrix(n, n, lambda i, j: sympy.Rational(str(d(2 * (j + 1) - (i + 1)))))
    out = []
    for k in range(1, n + 1):
        det = h[:k, :k].det()
        out.append(F(int(det.p), int(det.q)))
    return out


def test_positivity_examples():
    assert positivity_check(COUNTEREXAMPLE)
    assert not positivity_check(from_coeffs([0, 6, 9, 5]))
    assert positivity_check(from_coeffs([6, 12, 11, 5]))


def test_hurwitz_matrix_layout():
    assert hurwitz_matrix(from_coeffs([6, 8, 5])) == [[5, 6, 0], [1, 8, 0], [0, 5, 6]]


@pytest.mark.parametrize(
    "coeffs, expected",
    [
        ((6, 8, 5), (5, 34, 204)),
        ((1, 2), (2, 2)),
        (("1/2", "1/6", "2/3"), (F(2, 3), F(-7, 18), F(-7, 36))),
    ],
)
def test_minors_examples(coeffs, expected):
    assert hurwitz_minors(from_coeffs(coeffs)) == tuple(map(F, expected))


@settings(max_examples=80, deadline=None)
@given(monic_polys(max_degree=6))
def test_minors_match_sympy_determinants(p):
    assert list(hurwitz_minors(p)) == sympy_minors(p)


def test_minors_with_zero_pivot_fall_back():
    # Delta_1 = a_4 = 0 stops the Bareiss sweep early
    p = from_coeffs([1, 2, 3, 0])
    assert list(hurwitz_minors(p)) == sympy_minors(p)


@pytest.mark.parametrize(
    "coeffs, expected, value",
    [
        ((6, 12, 11, 5), LowOrderResult.STABLE, F(366)),
        (("1/2", "1/6", "2/3"), LowOrderResult.NOT_STABLE, F(-7, 18)),
        ((6, 6, 5, "5/2"), LowOrderResult.STABLE, F(3, 2)),
    ],
)
def test_low_order_examples(coeffs, expected, value):
    p = from_coeffs(coeffs)
    assert low_order_test(p) == expected
    assert low_order_value(p) == value


def test_low_order_midpoint_matches_certificate_formula():
    alpha, beta, lam = F(2), F(3), F(1, 2)
    assert low_order_value(from_coeffs([6, 6, 5, F(5, 2)])) == lam * (1 - lam) * alpha * beta * (beta - alpha) ** 2


@pytest.mark.parametrize("coeffs", [(1,), (1, 2, 3, 4, 5), (0, 6, 9, 5), (1, -1)])
def test_low_order_preconditions(coeffs):
    with pytest.raises(InvalidInputError):
        low_order_test(from_coeffs(coeffs))


def test_low_order_degree_two():
    assert low_order_test(from_coeffs([2, 2])) == LowOrderResult.STABLE


@settings(max_examples=200, deadline=None)
@given(monic_polys(min_degree=2, max_degree=4, coeffs=rationals(F(1, 50), 10)))
def test_low_order_equals_all_minors_positive(p):
    expected = LowOrderResult.STABLE if all(d > 0 for d in hurwitz_minors(p)) else LowOrderResult.NOT_STABLE
    assert low_order_test(p) == expected


def test_roots_counterexample():
    got = roots(COUNTEREXAMPLE)
    want = [complex(-1, 0), complex(1 / 6, -math.sqrt(17) / 6), complex(1 / 6, math.sqrt(17) / 6)]
    assert len(got) == 3
    for g, w in zip(got, want):
        assert abs(g - w) < 1e-9


def test_roots_double():
    got = roots(from_coeffs([1, 2]))
    assert all(abs(r + 1) < 1e-7 for r in got)


def test_roots_with_origin():
    got = roots(from_coeffs([0, 6, 9, 5]))
    assert 0j in got
    rest = [r for r in got if r != 0]
    assert len(rest) == 3 and all(r.real < 0 for r in rest)


@settings(max_examples=100, deadline=None)
@given(monic_polys(max_degree=8, coeffs=rationals(-10, 10, 20)))
def test_roots_count_and_vieta(p):
    got = roots(p)
    assert len(got) == p.degree
    assert abs(sum(got) + float(p.coeffs[-1])) < 1e-8


@pytest.mark.parametrize(
    "coeffs, expected",
    [
        ((6, 12, 11, 5), StabilityClass.STABLE),
        ((0, 6, 9, 5), StabilityClass.BOUNDARY),
        ((6, 6, 5, 3), StabilityClass.BOUNDARY),
        (("1/2", "1/6", "2/3"), StabilityClass.UNSTABLE),
        ((1,), StabilityClass.STABLE),
        ((0,), StabilityClass.BOUNDARY),
        ((-1,), StabilityClass.UNSTABLE),
        ((1, 0), StabilityClass.BOUNDARY),
        ((0, 0, 1), StabilityClass.BOUNDARY),
        ((1, 0, 1), StabilityClass.UNSTABLE),
        ((1, -2, 3), StabilityClass.UNSTABLE),
    ],
)
def test_classify_examples(coeffs, expected):
    verdict = classify(from_coeffs(coeffs))
    assert verdict.kind == expected
    if expected == StabilityClass.BOUNDARY:
        assert abs(verdict.margin) <= BOUNDARY_BAND


def test_classify_imaginary_pair_evidence():
    verdict = classify(from_coeffs([6, 6, 5, 3]))
    assert verdict.evidence.exact == "indeterminate"
    pair = [r for r in verdict.evidence.roots if abs(r.real) < 1e-9]
    assert len(pair) == 2 and all(abs(abs(r.imag) - math.sqrt(2)) < 1e-9 for r in pair)


def test_classify_repeated_imaginary_pair_is_boundary():
    p = multiply(from_coeffs([1, 0]), from_coeffs([1, 0]))
    assert classify(multiply(p, from_coeffs([1]))).kind == StabilityClass.BOUNDARY


def test_classify_json():
    payload = classify(from_coeffs([0, 6, 9, 5])).to_json()
    assert payload["class"] == "boundary"
    assert payload["minors"] == ["5", "39", "234", "0"]
    assert len(payload["roots"]) == 4 and [0.0, 0.0] in payload["roots"]


def test_classify_is_pure():
    p = from_coeffs([F(13, 7), 3, F(9, 2), 2, 1])
    a, b = classify(p), classify(p)
    assert a == b and a.to_json() == b.to_json()


@pytest.mark.parametrize(
    "exact, margin",
    [("stable", 1e-3), ("unstable", -1e-3), ("boundary", 1e-3), ("indeterminate", -1e-3)],
)
def test_fuse_raises_on_disagreement(exact, margin):
    with pytest.raises(InconsistencyError):
        stability._fuse(exact, margin)


def test_fuse_inside_band_keeps_exact_result():
    kind, agrees = stability._fuse("stable", -1e-9)
    assert kind == StabilityClass.STABLE and not agrees


def _stable_factor(rng: random.Random) -> MonicPolynomial:
    if rng.random() < 0.5:
        return MonicPolynomial((F(rng.randint(1, 100), rng.randint(1, 20)),))
    return MonicPolynomial((F(rng.randint(1, 100), rng.randint(1, 20)), F(rng.randint(1, 100), rng.randint(1, 20))))


def test_products_of_stable_factors_are_stable():
    rng = random.Random(3)
    for _ in range(300):
        p = product(_stable_factor(rng) for _ in range(rng.randint(1, 5)))
        assert classify(p).kind == StabilityClass.STABLE


def test_exact_and_numeric_agree_on_random_polynomials():
    rng = random.Random(11)
    for _ in range(2000):
        n = rng.randint(1, 8)
        p = MonicPolynomial(tuple(F(rng.randint(1, 10_000), 1000) for _ in range(n)))
        verdict = classify(p)
        if abs(verdict.margin) > 10 * BOUNDARY_BAND:
            numeric = StabilityClass.STABLE if verdict.margin < 0 else StabilityClass.UNSTABLE
            assert exact_outcome(p) == numeric.value


@settings(max_examples=60, deadline=None)
@given(st.lists(monic_polys(min_degree=3, max_degree=3, coeffs=rationals(0, 5, 6)), min_size=1, max_size=8))
def test_batch_path_matches_classify(polys):
    rows, leads = zip(*(p.scaled_integer_coeffs() for p in polys))
    for p, (kind, margin) in zip(polys, classify_scaled_batch(list(rows), list(leads))):
        verdict = classify(p)
        assert kind == verdict.kind
        assert margin == verdict.margin


def test_batch_eigvals_do_not_depend_on_stack():
    rng = np.random.default_rng(0)
    rows = rng.uniform(0.1, 10, size=(20, 6))
    whole = stability._eig_roots(rows)
    for k in range(20):
        assert np.array_equal(whole[k], stability._eig_roots(rows[k : k + 1])[0])
