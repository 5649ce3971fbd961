"""Decreasing positive rate profiles b, their running integrals B, inverses,
and the calculus facts the rescaled metrics rely on.

A profile is *normal* when b is positive and (weakly) decreasing on the
nonnegative axis and its running integral B(t) grows without bound.  B is
then a continuous order isomorphism of the nonnegative axis: B(0) = 0, B is
strictly increasing, and B has a well-defined inverse.

Four closed forms ship with exact B and exact inverse; they anchor the
quadrature and bisection code paths used for tabulated profiles:

    kind="one"        b(t) = 1           B(t) = t                inverse s
    kind="const"      b(t) = c           B(t) = c t              inverse s/c
    kind="inv1p"      b(t) = 1/(1+t)     B(t) = log(1+t)         inverse e^s - 1
    kind="invsqrt1p"  b(t) = 1/sqrt(1+t) B(t) = 2(sqrt(1+t)-1)   inverse s + s^2/4

Tabulated profiles (kind="table") interpolate b piecewise linearly between
samples, extend it by constants beyond the sampled range, integrate it by
the composite trapezoid rule (exact for the interpolant), and invert B by
bracket doubling followed by bisection.  Certification of normality for a
tabulated profile is necessarily finite evidence: positivity and decrease
on the grid, and growth of B past a requested bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import integrate

from .errors import DivergenceError, DomainError, MalformedInputError
from .reporting import ValidationReport, Violation

TAU_QUAD = 1e-10
TAU_INV = 1e-8

CLOSED_KINDS = ("one", "const", "inv1p", "invsqrt1p")
KINDS = CLOSED_KINDS + ("table",)


@dataclass(frozen=True, eq=False)
class NormalFunction:
    """A rate profile b together with its running integral B and inverse.

    Use :func:`normal_function` to build one; it validates the parameters.
    """

    kind: str
    c: float = 1.0
    samples: np.ndarray | None = None  # rows (t, b(t)), kind="table" only

    @property
    def closed_form(self) -> bool:
        return self.kind != "table"

    @cached_property
    def _grid(self):
        # (ts, bs, cumulative trapezoid of b at ts); ts always starts at 0
        ts = self.samples[:, 0]
        bs = self.samples[:, 1]
        cum = np.concatenate(
            [[0.0], np.cumsum(0.5 * (bs[:-1] + bs[1:]) * np.diff(ts))]
        )
        return ts, bs, cum

    def _check_t(self, t: float) -> float:
        t = float(t)
        if not math.isfinite(t) or t < 0:
            raise DomainError(f"abscissa must be finite and nonnegative, got {t}")
        return t

    def b(self, t: float) -> float:
        """Profile value at t >= 0; tabulated profiles interpolate linearly."""
        t = self._check_t(t)
        if self.kind == "one":
            return 1.0
        if self.kind == "const":
            return self.c
        if self.kind == "inv1p":
            return 1.0 / (1.0 + t)
        if self.kind == "invsqrt1p":
            return 1.0 / math.sqrt(1.0 + t)
        ts, bs, _ = self._grid
        return float(np.interp(t, ts, bs))

    def B(self, t: float) -> float:
        """Running integral of b from 0 to t; exact closed form when one is
        shipped, exact trapezoid of the interpolant otherwise."""
        t = self._check_t(t)
        if self.kind == "one":
            return t
        if self.kind == "const":
            return self.c * t
        if self.kind == "inv1p":
            return math.log1p(t)
        if self.kind == "invsqrt1p":
            return 2.0 * (math.sqrt(1.0 + t) - 1.0)
        ts, bs, cum = self._grid
        if t >= ts[-1]:
            return float(cum[-1] + bs[-1] * (t - ts[-1]))
        i = int(np.searchsorted(ts, t, side="right")) - 1
        bt = bs[i] + (bs[i + 1] - bs[i]) * (t - ts[i]) / (ts[i + 1] - ts[i])
        return float(cum[i] + 0.5 * (bs[i] + bt) * (t - ts[i]))

    def B_inv(self, s: float) -> float:
        """Inverse of B: the t >= 0 with B(t) = s (within TAU_INV for
        tabulated profiles)."""
        s = float(s)
        if not math.isfinite(s) or s < 0:
            raise DomainError(f"integral value must be finite and nonnegative, got {s}")
        if self.kind == "one":
            return s
        if self.kind == "const":
            return s / self.c
        if self.kind == "inv1p":
            return math.expm1(s)
        if self.kind == "invsqrt1p":
            return s + 0.25 * s * s
        return self._bisect_inverse(s)

    def _bisect_inverse(self, s: float, max_doublings: int = 200) -> float:
        if s == 0.0:
            return 0.0
        hi = 1.0
        for _ in range(max_doublings):
            if self.B(hi) >= s:
                break
            hi *= 2.0
        else:
            raise DivergenceError(
                f"running integral never reached {s}: profile is not normal"
            )
        lo = 0.0
        # B is strictly increasing, so plain bisection converges; iterate well
        # past TAU_INV so the returned t is also tight in the t variable.
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.B(mid) < s:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-13 * max(1.0, hi):
                break
        t = 0.5 * (lo + hi)
        if abs(self.B(t) - s) > TAU_INV:
            raise DivergenceError("bisection failed to meet the inversion tolerance")
        return t


def normal_function(kind: str, c: float = 1.0, samples=None) -> NormalFunction:
    """Validated constructor for rate profiles.

    For kind="table", samples are rows (t, b(t)); they must be sorted by t
    with t >= 0, strictly positive b, and weakly decreasing b.  A sample at
    t=0 is prepended if missing (constant extension to the left).
    """
    if kind not in KINDS:
        raise MalformedInputError(f"unknown profile kind {kind!r}; expected one of {KINDS}")
    if kind == "table":
        arr = np.array(samples, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 1:
            raise MalformedInputError("table samples must be rows (t, b)")
        if np.isnan(arr).any() or np.isinf(arr).any():
            raise MalformedInputError("table samples must be finite")
        order = np.argsort(arr[:, 0], kind="stable")
        arr = arr[order]
        ts, bs = arr[:, 0], arr[:, 1]
        if ts[0] < 0:
            raise MalformedInputError("sample abscissae must be nonnegative")
        if (np.diff(ts) <= 0).any():
            raise MalformedInputError("sample abscissae must be strictly increasing")
        if (bs <= 0).any():
            raise MalformedInputError("profile values must be strictly positive")
        if (np.diff(bs) > 0).any():
            raise MalformedInputError("profile values must be weakly decreasing")
        if ts[0] > 0:
            arr = np.vstack([[0.0, bs[0]], arr])
        arr.setflags(write=False)
        return NormalFunction(kind="table", samples=arr)
    if samples is not None:
        raise MalformedInputError(f"kind {kind!r} takes no samples")
    c = float(c)
    if kind == "const":
        if not math.isfinite(c) or c <= 0:
            raise MalformedInputError("constant profile needs c > 0")
        return NormalFunction(kind="const", c=c)
    return NormalFunction(kind=kind)


def integrate_b(f: NormalFunction, p: float, q: float, tol: float = TAU_QUAD) -> float:
    """Integral of b over [p, q] by adaptive quadrature.

    This is the numerical route, deliberately independent of the closed
    forms baked into :meth:`NormalFunction.B`, so the two can be played
    against each other in checks.
    """
    p, q = float(p), float(q)
    if p < 0 or q < p:
        raise DomainError(f"need 0 <= p <= q, got p={p}, q={q}")
    if p == q:
        return 0.0
    points = None
    if f.kind == "table":
        ts = f._grid[0]
        interior = ts[(ts > p) & (ts < q)]
        if interior.size:
            points = interior.tolist()
    val, _err = integrate.quad(f.b, p, q, epsabs=tol, limit=200, points=points)
    return float(val)


def quadrature_B(f: NormalFunction, t: float, tol: float = TAU_QUAD) -> float:
    """B(t) computed by quadrature alone (see :func:`integrate_b`)."""
    return integrate_b(f, 0.0, t, tol)


def reparametrization_gap(f: NormalFunction, p: float, q: float, tol: float = TAU_QUAD) -> float:
    """|int_p^q b  -  (q-p) int_0^1 b(p + tau (q-p)) dtau|, both sides by
    quadrature.  Zero in exact arithmetic for any integrable b."""
    p, q = float(p), float(q)
    if not 0 <= p < q:
        raise DomainError(f"need 0 <= p < q, got p={p}, q={q}")
    lhs = integrate_b(f, p, q, tol)
    rhs, _err = integrate.quad(lambda tau: f.b(p + tau * (q - p)), 0.0, 1.0,
                               epsabs=tol, limit=200)
    return abs(lhs - (q - p) * rhs)


def check_normality(f: NormalFunction, grid, growth_bound: float | None = None,
                    max_doublings: int = 60) -> ValidationReport:
    """Certify normality on finite evidence: positivity and weak decrease of
    b on the grid, and (on request) growth of B past growth_bound.

    The verdict is only as strong as the grid; that limitation is inherent
    and the report's notes say so.
    """
    grid = [float(t) for t in grid]
    if any(t < 0 for t in grid):
        raise DomainError("grid points must be nonnegative")
    if sorted(grid) != grid:
        raise MalformedInputError("grid must be sorted ascending")
    violations = []
    vals = [f.b(t) for t in grid]
    for t, v in zip(grid, vals):
        if v <= 0:
            violations.append(Violation("positivity", (t,), -v))
    for (t0, v0), (t1, v1) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
        if v1 > v0:
            violations.append(Violation("decreasing", (t0, t1), v1 - v0))
    notes = ["normality certified on the supplied grid only"]
    if growth_bound is not None:
        hi = max(grid[-1] if grid else 1.0, 1.0)
        for _ in range(max_doublings):
            if f.B(hi) >= growth_bound:
                break
            hi *= 2.0
        else:
            violations.append(
                Violation("divergence", (growth_bound,), growth_bound - f.B(hi))
            )
        notes.append(f"growth certified up to B >= {growth_bound:g} only")
    return ValidationReport.from_violations(violations, notes)


def sample_property_triples(rng: np.random.Generator, count: int, t_max: float = 10.0) -> np.ndarray:
    """Random rows (t, s, lam) with 0 <= t < s <= t_max and lam in [0, 1],
    the raw material for :func:`check_integral_properties`."""
    t = rng.uniform(0.0, t_max, count)
    s = t + rng.uniform(1e-6, t_max, count)
    lam = rng.uniform(0.0, 1.0, count)
    return np.column_stack([t, s, lam])


def check_integral_properties(f: NormalFunction, triples, tol: float = 1e-6) -> ValidationReport:
    """The calculus facts a decreasing positive profile guarantees for B,
    checked numerically on sampled rows (t, s, lam) with t < s:

    - mean value sandwich:  b(s) <= (B(s)-B(t))/(s-t) <= b(t)
    - shifted-increment decrease:  B(t+h)-B(t) >= B(s+h)-B(s)  (h >= 0)
    - concavity:  B(t + lam (s-t)) >= B(t) + lam (B(s)-B(t))
    - sub-additivity of B and super-additivity of its inverse.

    Violations beyond tol are reported per family.
    """
    arr = np.asarray(triples, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise MalformedInputError("expected rows (t, s, lam)")
    violations = []
    for t, s, lam in arr:
        if not (0 <= t < s) or not (0 <= lam <= 1):
            raise DomainError(f"need 0 <= t < s and lam in [0,1], got {(t, s, lam)}")
        Bt, Bs = f.B(t), f.B(s)
        q = (Bs - Bt) / (s - t)
        if q < f.b(s) - tol:
            violations.append(Violation("mean_value_lower", (t, s), f.b(s) - q))
        if q > f.b(t) + tol:
            violations.append(Violation("mean_value_upper", (t, s), q - f.b(t)))
        h = lam * (1.0 + t)
        drop = (f.B(t + h) - Bt) - (f.B(s + h) - Bs)
        if drop < -tol:
            violations.append(Violation("shifted_increment", (t, s, h), -drop))
        m = t + lam * (s - t)
        gap = f.B(m) - (Bt + lam * (Bs - Bt))
        if gap < -tol:
            violations.append(Violation("concave", (t, s, lam), -gap))
        sub = (Bt + Bs) - f.B(t + s)
        if sub < -tol:
            violations.append(Violation("subadditive", (t, s), -sub))
        sup = f.B_inv(t + s) - (f.B_inv(t) + f.B_inv(s))
        if sup < -tol:
            violations.append(Violation("superadditive_inverse", (t, s), -sup))
    return ValidationReport.from_violations(violations)
