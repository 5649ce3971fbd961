"""Nonexpansive weights and the weighted rescale of an almost metric.

Given a base almost metric d, a per-point weight w that never drops faster
than d (w(x) - w(y) + d(x, y) >= 0 for all ordered pairs), and a normal
rate profile b with running integral B, the derived table

    e(x, y) = B(w(x) + d(x, y)) - B(w(x))

is again an almost metric: reflexivity and sufficiency come from B being a
strictly increasing bijection, and the triangle inequality survives the
rescale because B's increments shrink as the base point grows and the
weight condition keeps w(y) <= w(x) + d(x, y).  That triangularity is a
theorem about the construction, not an assumption: :func:`build_zhong`
does not re-validate its output, the test suite does.

The rescale is invertible,

    d(x, y) = B_inv(B(w(x)) + e(x, y)) - w(x),

and sandwiched by the profile:

    b(w(x) + d(x, y)) d(x, y)  <=  e(x, y)  <=  b(w(x)) d(x, y),
    e(x, y) <= B(d(x, y)).

The sandwich is what transfers Cauchy-ness back from e to d with an
explicit modulus: if every ordered gap in a prefix is at most mu, then all
weighted arguments stay below nu = B_inv(B(w(x0)) + 2 mu), so every e-gap
dominates b(nu) times the d-gap.  :func:`compatibility_certificate` checks
that chain on concrete prefixes and reports the modulus factor 1/b(nu).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .almost_metric import (
    TAU_AXIOM,
    AlmostMetricTable,
    FinitePrefixSequence,
    validate_almost_metric,
)
from .errors import MalformedInputError, PreconditionError
from .normal_fn import NormalFunction
from .reporting import Inequality, ValidationReport, Violation

TAU_ROUNDTRIP = 1e-7


@dataclass(frozen=True, eq=False)
class Weight:
    """Per-point nonnegative weights, meant to satisfy the nonexpansiveness
    condition w(x) - w(y) + d(x, y) >= 0 (see :func:`validate_weight`)."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, copy=True)
        if arr.ndim != 1 or arr.size == 0:
            raise MalformedInputError("weight must be a nonempty vector")
        if np.isnan(arr).any() or np.isinf(arr).any() or (arr < 0).any():
            raise MalformedInputError("weight entries must be finite and nonnegative")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def weight_from_anchor(d: AlmostMetricTable, a: int) -> Weight:
    """w(x) = d(a, x).  Nonexpansive by the triangle inequality of d."""
    if not 0 <= a < d.n:
        raise MalformedInputError(f"anchor {a} outside space of size {d.n}")
    return Weight(d.values[a])


def weight_infimal(d: AlmostMetricTable, g) -> Weight:
    """w(x) = min_a (g(a) + d(a, x)) for any nonnegative seed g.

    This is the general-purpose generator of nonexpansive weights: whatever
    g is, the infimal convolution with d is nonexpansive, and a seed that is
    zero at one point and huge elsewhere degenerates to the anchor weight.
    """
    g = np.asarray(g, dtype=np.float64)
    if g.shape != (d.n,):
        raise MalformedInputError(f"seed must have shape ({d.n},), got {g.shape}")
    if np.isnan(g).any() or (g < 0).any():
        raise MalformedInputError("seed entries must be nonnegative")
    return Weight((g[:, None] + d.values).min(axis=0))


def validate_weight(w: Weight, d: AlmostMetricTable, tol: float = TAU_AXIOM) -> ValidationReport:
    """Check w(x) - w(y) + d(x, y) >= -tol on every ordered pair."""
    if w.n != d.n:
        raise MalformedInputError(f"weight size {w.n} != space size {d.n}")
    slack = w.values[:, None] - w.values[None, :] + d.values
    violations = [
        Violation("nonexpansive", (int(x), int(y)), float(-slack[x, y]))
        for x, y in np.argwhere(slack < -tol)
    ]
    return ValidationReport.from_violations(violations)


@dataclass(frozen=True, eq=False)
class ZhongMetric:
    """The weighted rescale e of a base almost metric d, together with the
    ingredients (weight, rate profile) that produced it."""

    base: AlmostMetricTable
    weight: Weight
    fn: NormalFunction
    table: AlmostMetricTable


def build_zhong(d, w: Weight, fn: NormalFunction, tol: float = TAU_AXIOM) -> ZhongMetric:
    """Materialize e(x, y) = B(w(x) + d(x, y)) - B(w(x)) as a full table.

    The inputs are validated here (invalid d or w is a precondition error);
    the output's almost-metric axioms are the construction's theorem and are
    certified by tests, not asserted at build time.
    """
    if not isinstance(d, AlmostMetricTable):
        d = AlmostMetricTable(d)
    report = validate_almost_metric(d.values, tol)
    if not report.passed:
        raise PreconditionError(f"base table is not an almost metric: {report.summary()}")
    wreport = validate_weight(w, d, tol)
    if not wreport.passed:
        raise PreconditionError(f"weight is not nonexpansive: {wreport.summary()}")
    n = d.n
    e = np.zeros((n, n))
    for x in range(n):
        wx = float(w.values[x])
        Bwx = fn.B(wx)
        for y in range(n):
            e[x, y] = fn.B(wx + float(d.values[x, y])) - Bwx
    return ZhongMetric(base=d, weight=w, fn=fn, table=AlmostMetricTable(e))


def recover_d(z: ZhongMetric) -> np.ndarray:
    """Invert the rescale entrywise: B_inv(B(w(x)) + e(x, y)) - w(x).

    Matches the base table up to TAU_ROUNDTRIP (exactly for the identity
    profile)."""
    n = z.base.n
    rec = np.zeros((n, n))
    for x in range(n):
        wx = float(z.weight.values[x])
        Bwx = z.fn.B(wx)
        for y in range(n):
            rec[x, y] = z.fn.B_inv(Bwx + float(z.table.values[x, y])) - wx
    return rec


def sandwich_bounds(z: ZhongMetric, tol: float = TAU_AXIOM) -> ValidationReport:
    """Entrywise bounds tying e back to d:

    - damped lower bound:   b(w(x) + d(x, y)) d(x, y) <= e(x, y)
    - undamped upper bound: e(x, y) <= b(w(x)) d(x, y)
    - unweighted cap:       e(x, y) <= B(d(x, y))

    The cap is also the monotone coupling: base distances shrinking to zero
    force rescaled distances to zero.
    """
    d, e, w, fn = z.base.values, z.table.values, z.weight.values, z.fn
    violations = []
    for x in range(z.base.n):
        for y in range(z.base.n):
            dxy, exy = float(d[x, y]), float(e[x, y])
            lower = fn.b(float(w[x]) + dxy) * dxy
            upper = fn.b(float(w[x])) * dxy
            cap = fn.B(dxy)
            if exy < lower - tol:
                violations.append(Violation("damped_lower", (x, y), lower - exy))
            if exy > upper + tol:
                violations.append(Violation("undamped_upper", (x, y), exy - upper))
            if exy > cap + tol:
                violations.append(Violation("unweighted_cap", (x, y), exy - cap))
    return ValidationReport.from_violations(violations)


@dataclass(frozen=True)
class CompatibilityCertificate:
    """Finite-prefix evidence that rescaled gaps control base gaps.

    nu bounds every weighted argument w(x_i) + d(x_i, x_j) met along the
    prefix, so b(nu) is a uniform damping floor and gaps transfer with the
    explicit modulus factor 1/b(nu): e-gaps below delta force d-gaps below
    delta/b(nu).  Only the prefix is certified; the infinite statement is
    not claimed.
    """

    points: tuple[int, ...]
    mu: float
    nu: float
    b_nu: float
    modulus_factor: float
    inequalities: tuple[Inequality, ...]

    def passed(self, tol: float = TAU_AXIOM) -> bool:
        return all(q.satisfied(tol) for q in self.inequalities)

    def to_dict(self) -> dict:
        return {
            "points": list(self.points),
            "mu": self.mu,
            "nu": self.nu,
            "b_nu": self.b_nu,
            "modulus_factor": self.modulus_factor,
            "inequalities": [q.to_dict() for q in self.inequalities],
        }


def compatibility_certificate(z: ZhongMetric, seq, mu: float) -> CompatibilityCertificate:
    """Certify the gap-transfer chain on a concrete prefix.

    Premise (checked): e(x_i, x_j) <= mu for every ordered pair i <= j of the
    prefix.  Conclusions certified entrywise:

        w(x_i) + d(x_i, x_j) <= nu = B_inv(B(w(x_0)) + 2 mu)
        e(x_i, x_j) >= b(nu) d(x_i, x_j)
    """
    pts = seq.points if isinstance(seq, FinitePrefixSequence) else tuple(int(p) for p in seq)
    if not pts:
        raise MalformedInputError("prefix must be nonempty")
    for p in pts:
        if not 0 <= p < z.base.n:
            raise MalformedInputError(f"point {p} outside space of size {z.base.n}")
    mu = float(mu)
    d, e, w, fn = z.base.values, z.table.values, z.weight.values, z.fn
    for i in range(len(pts)):
        for j in range(i, len(pts)):
            if e[pts[i], pts[j]] > mu:
                raise PreconditionError(
                    f"gap bound violated: e({pts[i]},{pts[j]}) = "
                    f"{e[pts[i], pts[j]]} > mu = {mu}"
                )
    nu = fn.B_inv(fn.B(float(w[pts[0]])) + 2.0 * mu)
    b_nu = fn.b(nu)
    ineqs = []
    for i in range(len(pts)):
        for j in range(i, len(pts)):
            pi, pj = pts[i], pts[j]
            ineqs.append(Inequality(
                f"weight_gap_cap[{i},{j}]",
                float(w[pi]) + float(d[pi, pj]), nu,
            ))
            ineqs.append(Inequality(
                f"damped_gap[{i},{j}]",
                b_nu * float(d[pi, pj]), float(e[pi, pj]),
            ))
    return CompatibilityCertificate(
        points=pts, mu=mu, nu=nu, b_nu=b_nu,
        modulus_factor=1.0 / b_nu, inequalities=tuple(ineqs),
    )
