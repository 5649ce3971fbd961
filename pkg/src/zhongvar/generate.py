"""Seeded random instances: spaces, potentials, weights, bifunctions.

Everything is drawn on a dyadic grid (multiples of 2^-20) before any
arithmetic happens, so sums, differences and min-plus closures of generated
quantities are exact in float64 at desk scale.  That exactness is what lets
the reduction identities (identity profile, telescoping bifunctions) agree
bit for bit instead of merely closely.

Spaces are drawn as uniform positive off-diagonal tables and then closed
under min-plus, which guarantees triangularity without rejection sampling
and keeps the off-diagonal positive, hence sufficiency.  Asymmetry is the
default: entries (x, y) and (y, x) are drawn independently.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .almost_metric import AlmostMetricTable, metric_closure
from .equilibrium import Bifunction, marginal, potential_to_bifunction
from .normal_fn import NormalFunction, normal_function
from .solver import Potential
from .zhong import Weight, weight_from_anchor, weight_infimal

GRID = 2.0 ** -20

_NORMAL_ROTATION = (
    {"kind": "one"},
    {"kind": "inv1p"},
    {"kind": "invsqrt1p"},
    {"kind": "const", "c": 0.5},
    {"kind": "inv1p"},
    {"kind": "const", "c": 2.0},
    {"kind": "table"},  # samples drawn per instance
)


def snap(x):
    """Round to the dyadic grid; arithmetic on snapped values is exact."""
    return np.round(np.asarray(x, dtype=np.float64) * 2.0 ** 20) * GRID


def random_space(rng: np.random.Generator, n: int, low: float = 0.25,
                 high: float = 3.0) -> AlmostMetricTable:
    """Uniform positive off-diagonal entries on the grid, then min-plus
    closure.  Valid almost metric by construction, asymmetric in general."""
    raw = np.maximum(snap(rng.uniform(low, high, (n, n))), GRID)
    np.fill_diagonal(raw, 0.0)
    return metric_closure(raw)


def random_potential(rng: np.random.Generator, n: int, p_inf: float = 0.15,
                     high: float = 4.0) -> Potential:
    """Grid-valued potential, occasionally +inf, never everywhere-infinite."""
    vals = snap(rng.uniform(0.0, high, n))
    mask = rng.random(n) < p_inf
    vals[mask] = np.inf
    if not np.isfinite(vals).any():
        vals[int(rng.integers(n))] = snap(rng.uniform(0.0, high))
    return Potential(vals)


def random_weight_spec(rng: np.random.Generator, n: int) -> dict:
    """Either an anchor row or an infimal convolution seed, both valid."""
    if rng.random() < 0.5:
        return {"kind": "anchor", "a": int(rng.integers(n))}
    return {"kind": "infimal", "g": snap(rng.uniform(0.0, 2.0, n)).tolist()}


def resolve_weight(spec: dict, d: AlmostMetricTable) -> Weight:
    kind = spec.get("kind")
    if kind == "anchor":
        return weight_from_anchor(d, int(spec["a"]))
    if kind == "infimal":
        return weight_infimal(d, np.asarray(spec["g"], dtype=np.float64))
    if kind == "explicit":
        return Weight(np.asarray(spec["values"], dtype=np.float64))
    raise ValueError(f"unknown weight kind {kind!r}")


def random_normal_spec(rng: np.random.Generator, index: int) -> dict:
    """Rotate through the shipped profiles, with an occasional tabulated one
    (decreasing positive samples, so quadrature and bisection get exercised
    inside the corpus too)."""
    spec = dict(_NORMAL_ROTATION[index % len(_NORMAL_ROTATION)])
    if spec["kind"] == "table":
        m = int(rng.integers(4, 9))
        ts = np.sort(snap(rng.uniform(0.0, 8.0, m)))
        ts = np.unique(np.concatenate([[0.0], ts]))
        start = 1.0 + float(rng.uniform(0.0, 1.0))
        floor = 0.5 + float(rng.uniform(0.0, 0.25))
        drops = rng.uniform(0.0, 1.0, ts.size)
        drops = (start - floor) * drops / max(drops.sum(), 1e-9)
        bs = start - np.cumsum(drops)
        spec["samples"] = [[float(t), float(b)] for t, b in zip(ts, bs)]
    return spec


def resolve_normal(spec: dict) -> NormalFunction:
    kind = spec.get("kind")
    if kind == "table":
        return normal_function("table", samples=spec["samples"])
    return normal_function(kind, c=float(spec.get("c", 1.0)))


def random_bifunction(rng: np.random.Generator, phi: Potential) -> Bifunction:
    """Telescoping part plus a nonnegative triangular perturbation.

    The perturbation is itself min-plus closed (with a zero diagonal), so
    reflexivity and triangularity of the sum hold by construction; the
    validator re-checks every generated table anyway.
    """
    n = phi.n
    tele = potential_to_bifunction(phi).values
    if n == 1:
        return Bifunction(tele)
    raw = np.maximum(snap(rng.uniform(0.0, 1.5, (n, n))), GRID)
    np.fill_diagonal(raw, 0.0)
    eta = metric_closure(raw).values
    return Bifunction(tele + eta)


def pick_start(rng: np.random.Generator, phi: Potential) -> int:
    dom = phi.dom
    return int(dom[int(rng.integers(len(dom)))])


def admissible_radius(u: int, phi: Potential, F: Bifunction, fn: NormalFunction,
                      w: Weight) -> float:
    """A radius that satisfies both local premises (height above the infimum
    for potentials, marginal for bifunctions) with a comfortable margin."""
    need = max(phi.psi(u), float(marginal(F).values[u]))
    wu = float(w.values[u])
    base = fn.B_inv(fn.B(wu) + need) - wu
    return 1.25 * base + 0.015625


def make_scenario(rng: np.random.Generator, n: int, index: int,
                  theorem: str = "zvp", name: str | None = None) -> dict:
    """One fully-populated scenario: space, potential, bifunction, profile,
    weight, start point and radius.  Any selector can run against it."""
    d = random_space(rng, n)
    phi = random_potential(rng, n)
    F = random_bifunction(rng, phi)
    normal_spec = random_normal_spec(rng, index)
    fn = resolve_normal(normal_spec)
    weight_spec = random_weight_spec(rng, n)
    w = resolve_weight(weight_spec, d)
    u = pick_start(rng, phi)
    rho = admissible_radius(u, phi, F, fn, w)
    return {
        "name": name or f"instance-{index:04d}",
        "theorem": theorem,
        "space": {"n": n, "d": d.values.tolist()},
        "potential": {"phi": [x if np.isfinite(x) else "inf"
                              for x in phi.values.tolist()]},
        "bifunction": {"F": [[x if np.isfinite(x) else ("inf" if x > 0 else "-inf")
                              for x in row] for row in F.values.tolist()]},
        "normal": normal_spec,
        "weight": weight_spec,
        "u": u,
        "rho": rho,
    }


def write_corpus(out_dir, seed: int, n: int, count: int,
                 theorem: str = "zvp") -> list[Path]:
    """Deterministic corpus: a fixed seed yields byte-identical files."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    paths = []
    for i in range(count):
        scenario = make_scenario(rng, n, i, theorem,
                                 name=f"seed{seed}-n{n}-{i:04d}")
        path = out_dir / f"{scenario['name']}.json"
        path.write_text(json.dumps(scenario, indent=2, sort_keys=True) + "\n")
        paths.append(path)
    return paths
