"""Hurwitz stability of monic real polynomials.

Three independent routes are provided:

* leading principal minors of the Hurwitz matrix, computed exactly with
  fraction-free (Bareiss) elimination on an integer-scaled copy;
* closed-form criteria for degrees 2, 3 and 4;
* a numeric root oracle (eigenvalues of the companion matrix).

`classify` fuses the exact minors with the root oracle.  The exact path
decides Stable and Unstable; the roots only settle the cases where a
minor vanishes, i.e. where roots may sit on the imaginary axis.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import InconsistencyError, InvalidInputError
from .poly_core import MonicPolynomial

BOUNDARY_BAND = 1e-7


class StabilityClass(str, enum.Enum):
    STABLE = "stable"
    BOUNDARY = "boundary"
    UNSTABLE = "unstable"


class LowOrderResult(str, enum.Enum):
    STABLE = "stable"
    NOT_STABLE = "not_stable"


# exact-path outcome; INDETERMINATE means a Hurwitz minor vanished
_STABLE = "stable"
_BOUNDARY = "boundary"
_UNSTABLE = "unstable"
_INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Evidence:
    exact: str
    reason: str
    minors: tuple[Fraction, ...]
    roots: tuple[complex, ...]
    positive: bool
    low_order_value: Optional[Fraction] = None
    numeric_agrees: bool = True


@dataclass(frozen=True)
class StabilityVerdict:
    kind: StabilityClass
    margin: float
    evidence: Evidence = field(repr=False)

    def to_json(self) -> dict:
        ev = self.evidence
        return {
            "class": self.kind.value,
            "margin": self.margin,
            "minors": [str(m) for m in ev.minors],
            "roots": [[r.real, r.imag] for r in ev.roots],
            "evidence": {
                "exact": ev.exact,
                "reason": ev.reason,
                "positive": ev.positive,
                "low_order_value": None if ev.low_order_value is None else str(ev.low_order_value),
                "numeric_agrees": ev.numeric_agrees,
            },
        }


def positivity_check(p: MonicPolynomial) -> bool:
    """True iff every coefficient a_i is strictly positive (necessary for stability)."""
    return all(c > 0 for c in p.coeffs)


# -- Hurwitz matrix and minors ----------------------------------------------


@functools.lru_cache(maxsize=None)
def _layout_pattern(n: int) -> tuple[tuple[int, ...], ...]:
    # entry (i, j) holds c_{n-1-2j+i}; index n+1 points at an appended zero
    return tuple(
        tuple(k if 0 <= k <= n else n + 1 for k in (n - 1 - 2 * j + i for j in range(n)))
        for i in range(n)
    )


def _hurwitz_layout(full: Sequence, n: int) -> list[list]:
    """Hurwitz matrix from ascending coefficients full = (c_0, ..., c_n)."""
    padded = list(full) + [full[0] * 0]
    return [[padded[k] for k in row] for row in _layout_pattern(n)]


def hurwitz_matrix(p: MonicPolynomial) -> list[list[Fraction]]:
    """n x n Hurwitz matrix; first row (a_n, a_{n-2}, ...), second row (1, a_{n-1}, ...)."""
    return _hurwitz_layout(p.full_coeffs(), p.degree)


def _det_int(m: list[list[int]]) -> int:
    """Bareiss determinant with row pivoting."""
    m = [row[:] for row in m]
    size = len(m)
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            for r in range(k + 1, size):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = m[k][k]
        for i in range(k + 1, size):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, size):
                row_i[j] = (row_i[j] * piv - mik * row_k[j]) // prev
        prev = piv
    return sign * m[size - 1][size - 1]


def _leading_minors_int(m: list[list[int]]) -> list[int]:
    """All leading principal minors of an integer matrix.

    Without pivoting, the k-th Bareiss pivot is the k x k leading minor.  A
    zero pivot stops the sweep; the remaining minors are then taken one by one.
    """
    size = len(m)
    work = [row[:] for row in m]
    minors: list[int] = []
    prev = 1
    for k in range(size):
        piv = work[k][k]
        minors.append(piv)
        if piv == 0:
            break
        row_k = work[k]
        for i in range(k + 1, size):
            mik = work[i][k]
            row_i = work[i]
            if mik == 0:
                for j in range(k + 1, size):
                    row_i[j] = row_i[j] * piv // prev
            else:
                for j in range(k + 1, size):
                    row_i[j] = (row_i[j] * piv - mik * row_k[j]) // prev
        prev = piv
    for k in range(len(minors) + 1, size + 1):
        minors.append(_det_int([row[:k] for row in m[:k]]))
    return minors


def _scaled_minors(c: Sequence[int], lead: int) -> list[int]:
    n = len(c)
    return _leading_minors_int(_hurwitz_layout(list(c) + [lead], n))


def hurwitz_minors(p: MonicPolynomial) -> tuple[Fraction, ...]:
    """Exact leading principal minors (Delta_1, ..., Delta_n) of the Hurwitz matrix."""
    c, lead = p.scaled_integer_coeffs()
    scaled = _scaled_minors(c, lead)
    # scaling every coefficient by lead scales the k x k minor by lead**k
    return tuple(Fraction(d, lead ** (k + 1)) for k, d in enumerate(scaled))


# -- closed forms -------------------------------------------------------------


def low_order_value(p: MonicPolynomial) -> Fraction:
    """The determining expression of the degree-3 or degree-4 criterion.

    degree 3:  a_2 a_3 - a_1
    degree 4:  a_2 a_3 a_4 - a_1 a_4^2 - a_2^2

    No sign requirement on the coefficients here; `low_order_test` adds it.
    """
    a = p.coeffs
    if p.degree == 3:
        return a[1] * a[2] - a[0]
    if p.degree == 4:
        return a[1] * a[2] * a[3] - a[0] * a[3] ** 2 - a[1] ** 2
    raise InvalidInputError(f"closed-form value defined for degree 3 or 4, got {p.degree}")


def low_order_test(p: MonicPolynomial) -> LowOrderResult:
    """Closed-form stability test for degree 2, 3 or 4 with positive coefficients."""
    if not 2 <= p.degree <= 4:
        raise InvalidInputError(f"closed-form test covers degree 2..4, got {p.degree}")
    if not positivity_check(p):
        raise InvalidInputError("closed-form test requires positive coefficients")
    if p.degree == 2:
        ok = p.coeffs[1] > 0 and p.coeffs[0] > 0
    else:
        ok = low_order_value(p) > 0
    return LowOrderResult.STABLE if ok else LowOrderResult.NOT_STABLE


# -- numeric root oracle --------------------------------------------------------


def _eig_roots(rows: np.ndarray) -> np.ndarray:
    """Roots of a stack of monic polynomials given as ascending float rows (B, n)."""
    batch, n = rows.shape
    comp = np.zeros((batch, n, n))
    comp[:, 0, :] = -rows[:, ::-1]
    if n > 1:
        idx = np.arange(1, n)
        comp[:, idx, idx - 1] = 1.0
    return np.linalg.eigvals(comp)


def _origin_multiplicity(c: Sequence) -> int:
    k = 0
    while k < len(c) and c[k] == 0:
        k += 1
    return k


def _sorted_roots(values) -> tuple[complex, ...]:
    return tuple(sorted((complex(v) for v in values), key=lambda z: (z.real, z.imag)))


def _roots_from_floats(exact_coeffs: Sequence, floats: Sequence[float]) -> tuple[complex, ...]:
    # exact zero constant terms are stripped so origin roots come out exactly 0
    k = _origin_multiplicity(exact_coeffs)
    found: list[complex] = [0j] * k
    rest = list(floats[k:])
    if rest:
        found.extend(_eig_roots(np.array([rest], dtype=float))[0])
    return _sorted_roots(found)


def roots(p: MonicPolynomial) -> tuple[complex, ...]:
    """All n roots (with multiplicity) as companion-matrix eigenvalues, sorted by (re, im)."""
    return _roots_from_floats(p.coeffs, p.float_coeffs())


def _margin(rts: Sequence[complex]) -> float:
    return max(r.real for r in rts)


# -- classification -------------------------------------------------------------


def _exact_outcome(c: Sequence[int], lead: int) -> tuple[str, str]:
    """Exact decision on integer-scaled coefficients (c_0..c_{n-1}, lead > 0)."""
    if any(x < 0 for x in c):
        return _UNSTABLE, "negative coefficient"
    if c[0] == 0:
        if len(c) == 1:
            return _BOUNDARY, "root at the origin"
        sub, why = _exact_outcome(c[1:], lead)
        if sub == _STABLE:
            return _BOUNDARY, "simple root at the origin, deflated quotient stable"
        if sub == _BOUNDARY:
            return _BOUNDARY, "root at the origin, deflated quotient on the boundary"
        if sub == _UNSTABLE:
            return _UNSTABLE, f"deflated quotient unstable ({why})"
        return _INDETERMINATE, f"deflated quotient indeterminate ({why})"
    if len(c) == 1:
        return _STABLE, "a_1 > 0"
    minors = _scaled_minors(c, lead)
    if all(d > 0 for d in minors):
        return _STABLE, "all Hurwitz minors positive"
    # closed left half-plane polynomials are limits of Hurwitz ones, so their
    # minors are >= 0; a negative minor therefore certifies a right half-plane root
    if any(d < 0 for d in minors):
        return _UNSTABLE, "negative Hurwitz minor"
    return _INDETERMINATE, "vanishing Hurwitz minor"


def _fuse(exact: str, margin: float) -> tuple[StabilityClass, bool]:
    """Combine the exact outcome with the root margin; returns (class, numeric_agrees)."""
    band = BOUNDARY_BAND
    if exact == _STABLE:
        if margin > band:
            raise InconsistencyError(f"exact path says stable but root margin is {margin:.3e}")
        return StabilityClass.STABLE, margin < -band
    if exact == _UNSTABLE:
        if margin < -band:
            raise InconsistencyError(f"exact path says unstable but root margin is {margin:.3e}")
        return StabilityClass.UNSTABLE, margin > band
    if exact == _BOUNDARY:
        if abs(margin) > band:
            raise InconsistencyError(f"exact path says boundary but root margin is {margin:.3e}")
        return StabilityClass.BOUNDARY, True
    if margin < -band:
        raise InconsistencyError(f"a Hurwitz minor vanishes but root margin is {margin:.3e}")
    if margin > band:
        return StabilityClass.UNSTABLE, True
    return StabilityClass.BOUNDARY, True


def classify(p: MonicPolynomial) -> StabilityVerdict:
    """Stable / Boundary / Unstable verdict with the root margin and supporting evidence.

    Raises InconsistencyError when the exact and numeric routes disagree by
    more than BOUNDARY_BAND.
    """
    c, lead = p.scaled_integer_coeffs()
    exact, reason = _exact_outcome(c, lead)
    rts = roots(p)
    margin = _margin(rts)
    kind, agrees = _fuse(exact, margin)
    minors = tuple(Fraction(d, lead ** (k + 1)) for k, d in enumerate(_scaled_minors(c, lead)))
    low = low_order_value(p) if p.degree in (3, 4) else None
    evidence = Evidence(
        exact=exact,
        reason=reason,
        minors=minors,
        roots=rts,
        positive=positivity_check(p),
        low_order_value=low,
        numeric_agrees=agrees,
    )
    return StabilityVerdict(kind, margin, evidence)


def exact_outcome(p: MonicPolynomial) -> str:
    """Exact-path outcome alone: 'stable', 'unstable', 'boundary' or 'indeterminate'."""
    c, lead = p.scaled_integer_coeffs()
    return _exact_outcome(c, lead)[0]


def classify_scaled_batch(rows: Sequence[Sequence[int]], leads: Sequence[int]) -> list[tuple[StabilityClass, float]]:
    """Fast path for many same-degree polynomials given as integer rows.

    Row r stands for the monic polynomial with coefficients rows[r][k] / leads[r].
    Gives the same (class, margin) as `classify` on that polynomial, without
    building the evidence record.  Roots are computed in one stacked call.
    """
    if not rows:
        return []
    outcomes = [_exact_outcome(c, lead)[0] for c, lead in zip(rows, leads)]
    results: list[Optional[tuple[StabilityClass, float]]] = [None] * len(rows)
    plain = [r for r, c in enumerate(rows) if c[0] != 0]
    if plain:
        floats = np.array([[x / leads[r] for x in rows[r]] for r in plain], dtype=float)
        margins = _eig_roots(floats).real.max(axis=1)
        for r, m in zip(plain, margins):
            results[r] = (_fuse(outcomes[r], float(m))[0], float(m))
    for r, c in enumerate(rows):
        if results[r] is None:
            rts = _roots_from_floats(c, [x / leads[r] for x in c])
            m = _margin(rts)
            results[r] = (_fuse(outcomes[r], m)[0], m)
    return results
