"""Finite asymmetric distance tables and tail diagnostics for point sequences.

A *pseudometric* here is any nonnegative n-by-n table with a zero diagonal
that satisfies the triangle inequality; an *almost metric* additionally
vanishes only on the diagonal.  Symmetry is never assumed: the validators
scan ordered pairs and triples, so ``values[x][y] != values[y][x]`` is
perfectly legal and the test corpus leans on that.

Sequence notions (vanishing consecutive-distance series, the Cauchy
property, limit sets) are tail properties.  On a finite prefix they are
decided only when the tail is declared eventually constant; an open prefix
yields an "undetermined" verdict together with the finite evidence
collected so far, rather than a guess.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MalformedInputError, SufficiencyError, UndeterminedError
from .reporting import ValidationReport, Violation

TAU_AXIOM = 1e-9


def _as_square_table(raw) -> np.ndarray:
    """Normalize to a read-only float64 square table; reject structural junk."""
    if hasattr(raw, "values") and isinstance(getattr(raw, "values"), np.ndarray):
        raw = raw.values
    arr = np.array(raw, dtype=np.float64, copy=True)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise MalformedInputError(f"expected a square table, got shape {arr.shape}")
    if arr.size == 0:
        raise MalformedInputError("empty table")
    if np.isnan(arr).any():
        raise MalformedInputError("NaN entry in distance table")
    if np.isinf(arr).any():
        raise MalformedInputError("non-finite entry in distance table")
    if (arr < 0).any():
        raise MalformedInputError("negative entry in distance table")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PseudometricTable:
    """Nonnegative square table, intended to be triangular and reflexive.

    Construction is structural only (shape, sign, finiteness); use
    :func:`validate_pseudometric` / :meth:`checked` when the axioms must be
    certified rather than assumed.
    """

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_square_table(self.values))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @classmethod
    def checked(cls, raw, tol: float = TAU_AXIOM) -> "PseudometricTable":
        from .errors import PreconditionError

        report = validate_pseudometric(raw, tol)
        if not report.passed:
            raise PreconditionError(f"not a valid pseudometric: {report.summary()}")
        return cls(raw)


@dataclass(frozen=True, eq=False)
class AlmostMetricTable(PseudometricTable):
    """Pseudometric that in addition vanishes only on the diagonal."""

    @classmethod
    def checked(cls, raw, tol: float = TAU_AXIOM) -> "AlmostMetricTable":
        from .errors import PreconditionError

        report = validate_almost_metric(raw, tol)
        if not report.passed:
            raise PreconditionError(f"not a valid almost metric: {report.summary()}")
        return cls(raw)


def triangle_slacks(values: np.ndarray) -> np.ndarray:
    """slack[x, y, z] = values[x,y] + values[y,z] - values[x,z]; >= 0 means the
    triple (x, via y, to z) satisfies the triangle inequality."""
    return values[:, :, None] + values[None, :, :] - values[:, None, :]


def validate_pseudometric(table, tol: float = TAU_AXIOM) -> ValidationReport:
    """Check the zero diagonal (exactly) and all n^3 triangle inequalities
    (with slack allowed down to -tol)."""
    v = _as_square_table(table)
    violations = []
    for x in range(v.shape[0]):
        if v[x, x] != 0.0:
            violations.append(Violation("reflexive", (x, x), abs(float(v[x, x]))))
    slack = triangle_slacks(v)
    for x, y, z in np.argwhere(slack < -tol):
        violations.append(
            Violation("triangular", (int(x), int(y), int(z)), float(-slack[x, y, z]))
        )
    return ValidationReport.from_violations(violations)


def validate_almost_metric(table, tol: float = TAU_AXIOM) -> ValidationReport:
    """Pseudometric axioms plus sufficiency: an exact zero off the diagonal
    is a violation (two distinct points at distance zero)."""
    v = _as_square_table(table)
    report = validate_pseudometric(v, tol)
    violations = list(report.violations)
    off = np.argwhere(v == 0.0)
    for x, y in off:
        if x != y:
            violations.append(Violation("sufficiency", (int(x), int(y)), 0.0))
    return ValidationReport.from_violations(violations)


def metric_closure(raw) -> AlmostMetricTable:
    """Min-plus (all-pairs shortest path) closure of a positive-off-diagonal
    table.  The result is triangular by construction, keeps the zero diagonal,
    and keeps every off-diagonal entry positive, so sufficiency holds.

    Feeding it already-triangular input returns the same table (the closure
    is idempotent), which is what makes it a safe normalizer for generated
    instances.
    """
    v = np.array(_as_square_table(raw), copy=True)
    n = v.shape[0]
    diag = np.diagonal(v)
    if (diag != 0.0).any():
        raise MalformedInputError("closure input must have an exactly zero diagonal")
    off = v[~np.eye(n, dtype=bool)]
    if off.size and (off == 0.0).any():
        raise SufficiencyError("zero off-diagonal entry: sufficiency unachievable")
    for k in range(n):
        np.minimum(v, v[:, [k]] + v[[k], :], out=v)
    return AlmostMetricTable(v)


@dataclass(frozen=True)
class FinitePrefixSequence:
    """Finite evidence about an infinite sequence of points.

    With an eventually-constant tail, diagnostics treat the last listed point
    as repeated forever and can decide tail properties; an open prefix only
    supports "undetermined" verdicts.
    """

    points: tuple[int, ...]
    eventually_constant: bool = True

    def __post_init__(self):
        pts = tuple(int(p) for p in self.points)
        if not pts:
            raise MalformedInputError("sequence prefix must be nonempty")
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class StrasyResult:
    """Verdict on the consecutive-distance series; None means undetermined."""

    verdict: bool | None
    partial_sum: float


@dataclass(frozen=True)
class CauchyResult:
    """Verdict on the Cauchy property; max_gap is the largest ordered-pair
    distance observed inside the prefix."""

    verdict: bool | None
    max_gap: float


def _prefix_points(seq: FinitePrefixSequence, e: PseudometricTable) -> tuple[int, ...]:
    for p in seq.points:
        if not 0 <= p < e.n:
            raise MalformedInputError(f"point {p} outside space of size {e.n}")
    return seq.points


def is_strasy(seq: FinitePrefixSequence, e: PseudometricTable) -> StrasyResult:
    """Strong asymptotic check: does the series of consecutive distances
    converge?  An eventually-constant tail contributes only zero terms, so
    the prefix sum is the series value and the verdict is True.
    """
    pts = _prefix_points(seq, e)
    total = float(sum(e.values[pts[i], pts[i + 1]] for i in range(len(pts) - 1)))
    return StrasyResult(True if seq.eventually_constant else None, total)


def is_cauchy(seq: FinitePrefixSequence, e: PseudometricTable) -> CauchyResult:
    """Cauchy check for the asymmetric distance: pairs are ordered (p <= q).

    Eventually-constant tails decide exactly (all late pairs sit at distance
    zero), so the verdict is True; open prefixes report the largest observed
    gap and stay undetermined.
    """
    pts = _prefix_points(seq, e)
    gap = 0.0
    for i in range(len(pts)):
        for j in range(i, len(pts)):
            gap = max(gap, float(e.values[pts[i], pts[j]]))
    return CauchyResult(True if seq.eventually_constant else None, gap)


def e_limits(seq: FinitePrefixSequence, e: PseudometricTable) -> set[int]:
    """All points the sequence converges to: with tail value c these are the
    x with e(c, x) = 0.  Under sufficiency that is {c} alone, but a degenerate
    pseudometric may admit more.  Only decided for eventually-constant tails.
    """
    if not seq.eventually_constant:
        raise UndeterminedError("open prefix: limit set is undetermined")
    pts = _prefix_points(seq, e)
    c = pts[-1]
    return {x for x in range(e.n) if e.values[c, x] == 0.0}
