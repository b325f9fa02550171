"""Coefficient-vector algebra for monic real polynomials.

A monic polynomial of degree n

    a(s) = a_1 + a_2 s + ... + a_n s^(n-1) + s^n

is stored as the vector (a_1, ..., a_n) of exact rationals in ascending
order.  The leading 1 is implicit, so every stored value is monic by
construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import InvalidInputError

Rational = Union[Fraction, int, str]


def to_fraction(value: Rational) -> Fraction:
    """Exact conversion of an int, Fraction, float or "p/q"/decimal string."""
    if isinstance(value, Fraction):
        return value
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"not a rational number: {value!r}") from exc


@dataclass(frozen=True)
class MonicPolynomial:
    """Monic polynomial identified with its coefficient vector (a_1, ..., a_n)."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) == 0:
            raise InvalidInputError("a monic polynomial needs degree >= 1")
        if not all(type(c) is Fraction for c in self.coeffs):
            object.__setattr__(self, "coeffs", tuple(to_fraction(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def full_coeffs(self) -> tuple[Fraction, ...]:
        """Ascending coefficients including the leading 1."""
        return self.coeffs + (Fraction(1),)

    def float_coeffs(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    def scaled_integer_coeffs(self) -> tuple[list[int], int]:
        """Return (c_0..c_{n-1}, lead) with all integers and c_k / lead == a_{k+1}."""
        lead = math.lcm(*(c.denominator for c in self.coeffs))
        return [c.numerator * (lead // c.denominator) for c in self.coeffs], lead

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "MonicPolynomial":
        return from_coeffs(data)

    def __str__(self) -> str:
        terms = [f"s^{self.degree}"]
        for power in range(self.degree - 1, -1, -1):
            c = self.coeffs[power]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if power == 0:
                terms.append(f"{sign} {mag}")
            elif power == 1:
                terms.append(f"{sign} {mag}*s")
            else:
                terms.append(f"{sign} {mag}*s^{power}")
        return " ".join(terms)


def from_coeffs(coeffs: Iterable[Rational]) -> MonicPolynomial:
    """Build a monic polynomial from ascending coefficients (a_1, ..., a_n).

    >>> from_coeffs([1])
    MonicPolynomial(coeffs=(Fraction(1, 1),))
    """
    values = tuple(to_fraction(c) for c in coeffs)
    if not values:
        raise InvalidInputError("coefficient sequence must be non-empty")
    return MonicPolynomial(values)


def multiply(p: MonicPolynomial, q: MonicPolynomial) -> MonicPolynomial:
    """Exact product by convolution of the full coefficient sequences."""
    a = p.full_coeffs()
    b = q.full_coeffs()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    # the top entry is the leading 1
    return MonicPolynomial(tuple(out[:-1]))


def product(factors: Iterable[MonicPolynomial]) -> MonicPolynomial:
    factors = list(factors)
    if not factors:
        raise InvalidInputError("product of an empty factor list")
    result = factors[0]
    for f in factors[1:]:
        result = multiply(result, f)
    return result


def _check_lambda(lam: Fraction) -> None:
    if not 0 <= lam <= 1:
        raise InvalidInputError(f"lambda must lie in [0, 1], got {lam}")


def convex_combination(p: MonicPolynomial, q: MonicPolynomial, lam: Rational) -> MonicPolynomial:
    """Coefficientwise lam*p + (1 - lam)*q for two monic polynomials of equal degree."""
    lam = to_fraction(lam)
    _check_lambda(lam)
    if p.degree != q.degree:
        raise InvalidInputError(f"degree mismatch: {p.degree} vs {q.degree}")
    mu = 1 - lam
    return MonicPolynomial(tuple(lam * x + mu * y for x, y in zip(p.coeffs, q.coeffs)))


def evaluate(p: MonicPolynomial, s):
    """Horner evaluation of a(s), leading s^n term included.

    Works for any numeric type that supports + and * with Fraction
    (Fraction, int, complex, float).  Exact when s is rational.
    """
    if isinstance(s, complex):
        acc = complex(1)
        for c in reversed(p.coeffs):
            acc = acc * s + float(c)
        return acc
    acc = 1
    for c in reversed(p.coeffs):
        acc = acc * s + c
    return acc


def barycentric_point(vertices: Sequence[MonicPolynomial], weights: Sequence[Rational]) -> MonicPolynomial:
    """Weighted sum of vertex coefficient vectors; weights must be >= 0 and sum to exactly 1."""
    if len(vertices) == 0 or len(vertices) != len(weights):
        raise InvalidInputError("need one weight per vertex and at least one vertex")
    w = [to_fraction(x) for x in weights]
    if any(x < 0 for x in w):
        raise InvalidInputError("weights must be nonnegative")
    if sum(w) != 1:
        raise InvalidInputError(f"weights must sum to 1, got {sum(w)}")
    n = vertices[0].degree
    if any(v.degree != n for v in vertices):
        raise InvalidInputError("all vertices must share one degree")
    coeffs = [Fraction(0)] * n
    for v, x in zip(vertices, w):
        if x == 0:
            continue
        for k, c in enumerate(v.coeffs):
            coeffs[k] += x * c
    return MonicPolynomial(tuple(coeffs))


def deflate_origin(p: MonicPolynomial) -> MonicPolynomial:
    """Divide out one root at s = 0; requires a zero constant term and degree >= 2."""
    if p.coeffs[0] != 0:
        raise InvalidInputError("constant term is nonzero, no root at the origin")
    if p.degree < 2:
        raise InvalidInputError("cannot deflate a degree-1 polynomial")
    return MonicPolynomial(p.coeffs[1:])
