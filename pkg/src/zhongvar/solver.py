"""Ordered descent to maximal points, with full inequality certificates.

A potential phi (extended reals, +inf allowed, finite somewhere) and an
almost metric e induce the quasi-order

    x <= y   iff   e(x, y) + phi(y) <= phi(x),

so a step is admissible exactly when the potential pays for the distance
travelled.  Maximal points of this order are the variational points: from
any start u in the finite domain of phi, iteratively moving to a minimizer
of phi over the strict successors (lowest index on ties) must terminate,
because sufficiency of e makes every admissible move strictly decrease
phi.  The final point v satisfies

    e(u, v) <= phi(u) - phi(v)              (the moves were paid for)
    e(v, x) >  phi(v) - phi(x)  for x != v  (no admissible move remains)

and both families are emitted as certificate inequalities, the second
strictly.  The weighted variants rebuild e from a base metric, a weight
and a rate profile first, then certify the sandwich and radius bounds that
the rescale adds on top.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .almost_metric import TAU_AXIOM, AlmostMetricTable, PseudometricTable
from .errors import DomainError, MalformedInputError, PreconditionError, PremiseError
from .normal_fn import NormalFunction
from .reporting import Certificate, Inequality, ValidationReport, Violation
from .zhong import Weight, ZhongMetric, build_zhong


@dataclass(frozen=True, eq=False)
class Potential:
    """Extended-real point function: finite somewhere, +inf allowed, never
    -inf, so the infimum is finite and descent has a floor."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, copy=True)
        if arr.ndim != 1 or arr.size == 0:
            raise MalformedInputError("potential must be a nonempty vector")
        if np.isnan(arr).any():
            raise MalformedInputError("potential entries must not be NaN")
        if (arr == -math.inf).any():
            raise MalformedInputError("potential must never take -inf")
        if not np.isfinite(arr).any():
            raise DomainError("potential has empty finite domain")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def phi_star(self) -> float:
        """Finite infimum of the potential."""
        return float(self.values.min())

    @property
    def dom(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(np.isfinite(self.values)))

    def finite_at(self, x: int) -> bool:
        return bool(np.isfinite(self.values[x]))

    def psi(self, x: int) -> float:
        """Height above the infimum, phi(x) - phi_star."""
        return float(self.values[x] - self.phi_star)


def leq(x: int, y: int, e: PseudometricTable, phi: Potential) -> bool:
    """The quasi-order test: e(x, y) + phi(y) <= phi(x).

    Extended-real reading: an infinite phi(x) is dominated by everything,
    while an infinite phi(y) can only be reached from an infinite phi(x).
    Descent restricts itself to the finite domain, so the infinite cases
    matter only for callers probing the raw order.
    """
    px, py = float(phi.values[x]), float(phi.values[y])
    if math.isinf(px):
        return True
    if math.isinf(py):
        return False
    return float(e.values[x, y]) <= px - py


def successor_set(x: int, e: PseudometricTable, phi: Potential) -> list[int]:
    """All y admissible from x (always contains x).  x must have finite
    potential."""
    if not phi.finite_at(x):
        raise DomainError(f"point {x} has infinite potential")
    return [y for y in range(e.n) if leq(x, y, e, phi)]


def maximal_elements(e: PseudometricTable, phi: Potential) -> list[int]:
    """Finite-potential points with no admissible move away from them.
    Nonempty on finite instances: a minimizer of phi is always maximal."""
    out = []
    for v in phi.dom:
        if successor_set(v, e, phi) == [v]:
            out.append(v)
    return out


def _descend(u: int, e: PseudometricTable, phi: Potential,
             eps_schedule: bool = False) -> list[int]:
    """Iterated near-minimizer selection along the quasi-order.

    Each accepted move strictly decreases phi (sufficiency of e), so the
    chain visits pairwise distinct points and terminates.  With
    eps_schedule, step n accepts the lowest-index candidate within 2^-n of
    the minimum instead of the exact minimizer; handy when an exact argmin
    would be expensive, identical termination argument.
    """
    vals = phi.values
    chain = [u]
    c = u
    step = 0
    while True:
        step += 1
        candidates = [y for y in successor_set(c, e, phi) if y != c]
        if not candidates:
            return chain
        best = min(float(vals[y]) for y in candidates)
        if eps_schedule:
            cutoff = best + 2.0 ** (-step)
            nxt = next(y for y in candidates if float(vals[y]) <= cutoff)
        else:
            nxt = next(y for y in candidates if float(vals[y]) == best)
        if float(vals[nxt]) >= float(vals[c]):
            # admissible distinct moves must strictly pay; a stall means the
            # table vanished off the diagonal (not reflexive sufficient)
            raise PreconditionError("descent stalled: table is not an almost metric")
        chain.append(nxt)
        c = nxt


def evp_point(u: int, e: AlmostMetricTable, phi: Potential,
              eps_schedule: bool = False) -> Certificate:
    """Descend from u to a maximal point v and certify both conclusions:
    the paid-for move to v (weak) and maximality at v (strict, per point)."""
    if e.n != phi.n:
        raise MalformedInputError(f"space size {e.n} != potential size {phi.n}")
    if not 0 <= u < e.n:
        raise MalformedInputError(f"start point {u} outside space of size {e.n}")
    if not phi.finite_at(u):
        raise DomainError(f"start point {u} has infinite potential")
    chain = _descend(u, e, phi, eps_schedule)
    v = chain[-1]
    vals = phi.values
    ineqs = [Inequality("descent_bound", float(e.values[u, v]),
                        float(vals[u]) - float(vals[v]))]
    for x in range(e.n):
        if x == v:
            continue
        drop = -math.inf if math.isinf(vals[x]) else float(vals[v]) - float(vals[x])
        ineqs.append(Inequality(f"maximality[{x}]", drop, float(e.values[v, x]),
                                strict=True))
    return Certificate(u=u, v=v, chain=tuple(chain), inequalities=tuple(ineqs),
                       notes=("descending completeness: holds (finite instance)",))


def evp_local(u: int, rho: float, e: AlmostMetricTable, phi: Potential) -> Certificate:
    """Local variant: under the premise phi(u) - phi_star <= rho, the final
    point additionally sits within rho of the start and no higher."""
    rho = float(rho)
    if rho < 0:
        raise PremiseError(f"radius must be nonnegative, got {rho}")
    if not 0 <= u < phi.n:
        raise MalformedInputError(f"start point {u} outside space of size {phi.n}")
    if not phi.finite_at(u):
        raise DomainError(f"start point {u} has infinite potential")
    psi_u = phi.psi(u)
    if psi_u > rho:
        raise PremiseError(
            f"height premise fails: phi(u) - phi_star = {psi_u} > rho = {rho}"
        )
    cert = evp_point(u, e, phi)
    extra = (
        Inequality("radius_bound", float(e.values[u, cert.v]), rho),
        Inequality("monotone_value", float(phi.values[cert.v]), float(phi.values[u])),
    )
    return Certificate(u=cert.u, v=cert.v, chain=cert.chain,
                       inequalities=cert.inequalities + extra,
                       premise={"rho": rho, "psi_u": psi_u}, notes=cert.notes)


def variational_point_report(v: int, e: PseudometricTable, phi: Potential,
                             tol: float = TAU_AXIOM) -> ValidationReport:
    """Verify the variational-point conclusions for a *claimed* point v over
    a general pseudometric e (sufficiency not required):

    - tie collapse: any x with e(v, x) <= phi(v) - phi(x) must actually tie,
      phi(x) = phi(v) and e(v, x) = 0;
    - weak maximality: e(v, x) >= phi(v) - phi(x) for every x;
    - strict maximality wherever e(v, x) > 0.

    Degenerate witnesses (a distinct x at distance zero with equal value)
    are legal for pseudometrics and get noted rather than flagged.
    """
    if not phi.finite_at(v):
        raise DomainError(f"claimed point {v} has infinite potential")
    vals = phi.values
    violations = []
    notes = []
    for x in range(e.n):
        evx = float(e.values[v, x])
        drop = -math.inf if math.isinf(vals[x]) else float(vals[v]) - float(vals[x])
        if evx <= drop:
            if abs(drop) > tol or evx > tol:
                violations.append(Violation("tie_collapse", (v, x), max(abs(drop), evx)))
            elif x != v:
                notes.append(f"non-sufficient witness: e({v},{x}) = 0 with equal value")
        if evx < drop - tol:
            violations.append(Violation("weak_maximality", (v, x), drop - evx))
        if evx > 0 and evx <= drop:
            violations.append(Violation("strict_maximality", (v, x), drop - evx))
    return ValidationReport.from_violations(violations, notes)


def _weighted_extras(cert: Certificate, z: ZhongMetric) -> tuple[Inequality, ...]:
    """The sandwich inequalities the rescale adds to a descent certificate."""
    d, e, w, fn = z.base.values, z.table.values, z.weight.values, z.fn
    u, v = cert.u, cert.v
    duv = float(d[u, v])
    extras = [Inequality("weighted_lower",
                         fn.b(float(w[u]) + duv) * duv, float(e[u, v]))]
    for x in range(z.base.n):
        if x == v:
            continue
        extras.append(Inequality(f"weighted_cap[{x}]",
                                 float(e[v, x]), fn.b(float(w[v])) * float(d[v, x])))
    return tuple(extras)


def zvp_point(u: int, d, phi: Potential, fn: NormalFunction, w: Weight) -> Certificate:
    """Weighted variant: rebuild e from (d, w, fn), descend on e, and certify
    the damped lower bound at the start and the damped cap at the end on top
    of the plain descent conclusions.

    With the identity profile (b = 1) the rescale is the identity and the
    certificate coincides with the plain one.
    """
    if not isinstance(d, AlmostMetricTable):
        d = AlmostMetricTable(d)
    if not 0 <= u < phi.n:
        raise MalformedInputError(f"start point {u} outside space of size {phi.n}")
    if not phi.finite_at(u):
        raise DomainError(f"start point {u} has infinite potential")
    z = build_zhong(d, w, fn)
    cert = evp_point(u, z.table, phi)
    notes = cert.notes + ("rescale lower semicontinuity: holds vacuously (finite)",)
    return Certificate(u=cert.u, v=cert.v, chain=cert.chain,
                       inequalities=cert.inequalities + _weighted_extras(cert, z),
                       notes=notes)


def zvp_local(u: int, rho: float, d, phi: Potential, fn: NormalFunction,
              w: Weight) -> Certificate:
    """Local weighted variant.

    Premise (checked): phi(u) - phi_star <= B(w(u) + rho) - B(w(u)).  The
    certificate then also records the radius chain

        d(u, v) <= B_inv(B(w(u)) + psi(u)) - w(u) <= rho,

    the weight growth w(v) <= w(u) + rho, and the damped drop
    b(w(u) + rho) d(u, v) <= phi(u) - phi(v).
    """
    rho = float(rho)
    if rho < 0:
        raise PremiseError(f"radius must be nonnegative, got {rho}")
    if not isinstance(d, AlmostMetricTable):
        d = AlmostMetricTable(d)
    if not 0 <= u < phi.n:
        raise MalformedInputError(f"start point {u} outside space of size {phi.n}")
    if not phi.finite_at(u):
        raise DomainError(f"start point {u} has infinite potential")
    z = build_zhong(d, w, fn)
    wu = float(w.values[u])
    psi_u = phi.psi(u)
    bound = fn.B(wu + rho) - fn.B(wu)
    if psi_u > bound:
        raise PremiseError(
            f"height premise fails: phi(u) - phi_star = {psi_u} > "
            f"B(w(u)+rho) - B(w(u)) = {bound}"
        )
    cert = evp_point(u, z.table, phi)
    v = cert.v
    duv = float(d.values[u, v])
    radius_via_inverse = z.fn.B_inv(z.fn.B(wu) + psi_u) - wu
    extras = (
        Inequality("derived_radius", duv, radius_via_inverse),
        Inequality("derived_radius_cap", radius_via_inverse, rho),
        Inequality("base_radius", duv, rho),
        Inequality("weight_growth", float(w.values[v]), wu + rho),
        Inequality("damped_drop", fn.b(wu + rho) * duv,
                   float(phi.values[u]) - float(phi.values[v])),
    )
    return Certificate(
        u=cert.u, v=cert.v, chain=cert.chain,
        inequalities=cert.inequalities + _weighted_extras(cert, z) + extras,
        premise={"rho": rho, "psi_u": psi_u, "bound": bound,
                 "radius_via_inverse": radius_via_inverse},
        notes=cert.notes + ("rescale lower semicontinuity: holds vacuously (finite)",),
    )
