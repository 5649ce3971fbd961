"""Bifunctions, their marginals, and equilibrium points.

A bifunction F assigns an extended-real value to every ordered pair; here
it is always *reflexive* (zero on the diagonal) and *triangular*
(F(x, z) <= F(x, y) + F(y, z) whenever the right side exists; a sum of
opposite infinities is nonexistent and exempts the triple).  A point v is
an equilibrium of G when G(v, x) >= 0 for every x.

Equilibria reduce to ordered descent: freeze the start row as a potential
h = F(u, .), which is finite at u and bounded below by -mu(u) where

    mu(x) = sup_y (-F(x, y)),

and hand (e, h) to the descent solver.  The two descent conclusions map to
equilibrium conclusions through triangularity of F:

    e(u, v) <= -F(u, v) <= mu(u)
    e(v, x) >  -F(v, x)   for x != v,

so v is an equilibrium of F + e.  The weighted variant re-derives e from a
base metric, a weight and a rate profile, and additionally certifies the
damped sandwich and an equilibrium for F(x, y) + b(w(x)) d(x, y).  The
real-valued variant works directly over the base metric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .almost_metric import TAU_AXIOM, AlmostMetricTable, validate_almost_metric
from .errors import DomainError, MalformedInputError, PreconditionError, PremiseError
from .normal_fn import NormalFunction
from .reporting import Certificate, Inequality, ValidationReport, Violation
from .solver import Potential, evp_point
from .zhong import Weight, build_zhong


@dataclass(frozen=True, eq=False)
class Bifunction:
    """Extended-real table F(x, y); +inf and -inf entries are legal, NaN is
    not.  Construction is structural; :func:`validate_bifunction` certifies
    reflexivity and triangularity."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.size == 0:
            raise MalformedInputError(f"expected a square table, got shape {arr.shape}")
        if np.isnan(arr).any():
            raise MalformedInputError("NaN entry in bifunction table")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def validate_bifunction(F, tol: float = TAU_AXIOM) -> ValidationReport:
    """Reflexivity (exact zeros on the diagonal) and triangularity.

    The triangular check F(x,z) <= F(x,y) + F(y,z) is skipped where the
    right side is a nonexistent sum (+inf plus -inf); with IEEE arithmetic
    those sums come out NaN, which conveniently also exempts the
    always-satisfied inf <= inf comparisons.
    """
    if not isinstance(F, Bifunction):
        F = Bifunction(F)
    v = F.values
    violations = []
    for x in range(F.n):
        if v[x, x] != 0.0:
            violations.append(Violation("reflexive", (x, x), abs(float(v[x, x]))))
    with np.errstate(invalid="ignore"):
        rhs = v[:, :, None] + v[None, :, :]      # [x,y,z] = F(x,y) + F(y,z)
        excess = v[:, None, :] - rhs             # [x,y,z] = F(x,z) - rhs
        bad = excess > tol                       # NaN compares false: skipped
    for x, y, z in np.argwhere(bad):
        violations.append(
            Violation("triangular", (int(x), int(y), int(z)), float(excess[x, y, z]))
        )
    return ValidationReport.from_violations(violations)


def potential_to_bifunction(phi: Potential) -> Bifunction:
    """The telescoping bifunction F(x, y) = phi(y) - phi(x), with the
    convention inf - inf = 0 on pairs of infinite values.  Always reflexive
    and triangular, and its marginal is the height above the infimum."""
    vals = phi.values
    with np.errstate(invalid="ignore"):
        F = vals[None, :] - vals[:, None]
    F[np.isnan(F)] = 0.0
    return Bifunction(F)


@dataclass(frozen=True, eq=False)
class Marginal:
    """mu(x) = sup_y (-F(x, y)); nonnegative, +inf where the row is
    unbounded below.  Points with finite mu form the usable domain."""

    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def dom(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(np.isfinite(self.values)))

    @property
    def proper(self) -> bool:
        return bool(np.isfinite(self.values).any())

    def finite_at(self, x: int) -> bool:
        return bool(np.isfinite(self.values[x]))


def marginal(F: Bifunction) -> Marginal:
    if not isinstance(F, Bifunction):
        F = Bifunction(F)
    return Marginal((-F.values).max(axis=1))


def _as_almost_metric(table, what: str, tol: float) -> AlmostMetricTable:
    if not isinstance(table, AlmostMetricTable):
        table = AlmostMetricTable(table)
    report = validate_almost_metric(table.values, tol)
    if not report.passed:
        raise PreconditionError(f"{what} is not an almost metric: {report.summary()}")
    return table


def _check_bifunction(F, tol: float) -> Bifunction:
    if not isinstance(F, Bifunction):
        F = Bifunction(F)
    report = validate_bifunction(F, tol)
    if not report.passed:
        raise PreconditionError(f"bifunction invalid: {report.summary()}")
    return F


def _start_row_potential(F: Bifunction, u: int) -> Potential:
    # finite at u (diagonal zero), bounded below by -mu(u): a legal potential
    return Potential(F.values[u])


def equilibrium_via_e(u: int, F, d, e, tol: float = TAU_AXIOM) -> Certificate:
    """Find an equilibrium of F + e by descending on e under the start-row
    potential F(u, .).  On finite instances compatibility of e with d is a
    structural matter (both must be valid almost metrics of matching size);
    the sequence-level transfer is certified separately by the rescale
    module.
    """
    F = _check_bifunction(F, tol)
    d = _as_almost_metric(d, "base table", tol)
    e = _as_almost_metric(e, "derived table", tol)
    if not (F.n == d.n == e.n):
        raise MalformedInputError(
            f"size mismatch: bifunction {F.n}, base {d.n}, derived {e.n}")
    if not 0 <= u < F.n:
        raise MalformedInputError(f"start point {u} outside space of size {F.n}")
    mu = marginal(F)
    if not mu.finite_at(u):
        raise DomainError(f"start point {u} has infinite marginal")
    cert = evp_point(u, e, _start_row_potential(F, u))
    v = cert.v
    Fv = F.values[v]
    ineqs = [
        Inequality("descent_bound", float(e.values[u, v]), -float(F.values[u, v])),
        Inequality("marginal_cap", -float(F.values[u, v]), float(mu.values[u])),
    ]
    for x in range(F.n):
        if x == v:
            continue
        ineqs.append(Inequality(f"maximality[{x}]", -float(Fv[x]),
                                float(e.values[v, x]), strict=True))
    for x in range(F.n):
        ineqs.append(Inequality(f"equilibrium[{x}]", 0.0,
                                float(Fv[x]) + float(e.values[v, x])))
    return Certificate(u=u, v=v, chain=cert.chain, inequalities=tuple(ineqs),
                       notes=("semi descending completeness: holds (finite instance)",))


def equilibrium_zhong(u: int, F, d, fn: NormalFunction, w: Weight,
                      rho: float | None = None, tol: float = TAU_AXIOM) -> Certificate:
    """Weighted equilibrium: rescale d by (w, fn), find an equilibrium of
    F + e, and certify on top the damped sandwich and the equilibrium of

        G(x, y) = F(x, y) + b(w(x)) d(x, y).

    With a radius rho supplied, the premise mu(u) <= B(w(u)+rho) - B(w(u))
    is checked and the radius conclusions are certified as well.
    """
    d = _as_almost_metric(d, "base table", tol)
    z = build_zhong(d, w, fn, tol)
    base = equilibrium_via_e(u, F, d, z.table, tol)
    F = Bifunction(F) if not isinstance(F, Bifunction) else F
    v = base.v
    dv, ev, wv = d.values, z.table.values, w.values
    duv = float(dv[u, v])
    keep = [q for q in base.inequalities if not q.name.startswith("equilibrium[")]
    keep.append(Inequality("weighted_lower",
                           fn.b(float(wv[u]) + duv) * duv, float(ev[u, v])))
    for x in range(F.n):
        if x != v:
            keep.append(Inequality(f"weighted_cap[{x}]", float(ev[v, x]),
                                   fn.b(float(wv[v])) * float(dv[v, x])))
    b_wv = fn.b(float(wv[v]))
    for x in range(F.n):
        keep.append(Inequality(f"equilibrium[{x}]", 0.0,
                               float(F.values[v, x]) + b_wv * float(dv[v, x])))
    premise = None
    if rho is not None:
        rho = float(rho)
        if rho < 0:
            raise PremiseError(f"radius must be nonnegative, got {rho}")
        mu_u = float(marginal(F).values[u])
        wu = float(wv[u])
        bound = fn.B(wu + rho) - fn.B(wu)
        if mu_u > bound:
            raise PremiseError(
                f"marginal premise fails: mu(u) = {mu_u} > "
                f"B(w(u)+rho) - B(w(u)) = {bound}"
            )
        keep.extend([
            Inequality("base_radius", duv, rho),
            Inequality("weight_growth", float(wv[v]), wu + rho),
            Inequality("damped_drop", fn.b(wu + rho) * duv, -float(F.values[u, v])),
            Inequality("nonpositive_start", float(F.values[u, v]), 0.0),
        ])
        premise = {"rho": rho, "mu_u": mu_u, "bound": bound}
    notes = base.notes + ("rescale lower semicontinuity: holds vacuously (finite)",)
    return Certificate(u=u, v=v, chain=base.chain,
                       inequalities=tuple(keep), premise=premise, notes=notes)


def bkp_point(u: int, f, d, tol: float = TAU_AXIOM) -> Certificate:
    """Real-valued equilibrium over the base metric itself.

    f must be a real-valued (no infinities) reflexive triangular table; row
    boundedness is automatic on finite tables.  Descending under the frozen
    start row h = f(u, .) gives v with

        d(u, v) <= -f(u, v),    d(v, x) > -f(v, x)  for x != v,

    so v is an equilibrium of f + d.
    """
    if not isinstance(f, Bifunction):
        f = Bifunction(f)
    if np.isinf(f.values).any():
        raise DomainError("real-valued variant requires finite entries")
    f = _check_bifunction(f, tol)
    d = _as_almost_metric(d, "base table", tol)
    if f.n != d.n:
        raise MalformedInputError(f"size mismatch: bifunction {f.n}, base {d.n}")
    if not 0 <= u < f.n:
        raise MalformedInputError(f"start point {u} outside space of size {f.n}")
    cert = evp_point(u, d, _start_row_potential(f, u))
    v = cert.v
    fv = f.values[v]
    ineqs = [Inequality("descent_bound", float(d.values[u, v]), -float(f.values[u, v]))]
    for x in range(f.n):
        if x == v:
            continue
        ineqs.append(Inequality(f"maximality[{x}]", -float(fv[x]),
                                float(d.values[v, x]), strict=True))
    for x in range(f.n):
        ineqs.append(Inequality(f"equilibrium[{x}]", 0.0,
                                float(fv[x]) + float(d.values[v, x])))
    return Certificate(u=u, v=v, chain=cert.chain, inequalities=tuple(ineqs),
                       notes=("semi descending completeness: holds (finite instance)",))
