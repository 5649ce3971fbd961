"""Scenario files: the JSON surface consumed by the CLI.

A scenario bundles a space (explicit table or generator seed/size), a
potential and/or bifunction, a rate-profile spec, a weight spec, a start
point, an optional radius, and a theorem selector.  Number fields accept
the strings "inf" / "-inf" for infinities.

    {
      "name": "two-point",
      "theorem": "zvp",
      "space": {"n": 2, "d": [[0, 1], [2, 0]]},
      "potential": {"phi": [2, 0]},
      "bifunction": {"F": [[0, -2], [2, 0]]},
      "normal": {"kind": "inv1p"},
      "weight": {"kind": "anchor", "a": 0},
      "u": 0,
      "rho": 7.0
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .almost_metric import AlmostMetricTable
from .equilibrium import Bifunction
from .errors import ScenarioError
from .generate import random_space, resolve_normal, resolve_weight
from .normal_fn import NormalFunction
from .reporting import decode_number
from .solver import Potential
from .zhong import Weight

SELECTORS = ("evp", "evp-local", "zvp", "zvp-local", "eq", "eq-zhong", "bkp",
             "validate", "properties")


@dataclass(frozen=True, eq=False)
class Scenario:
    raw: dict
    name: str
    theorem: str
    space: AlmostMetricTable | None
    potential: Potential | None
    bifunction: Bifunction | None
    normal: NormalFunction | None
    weight_spec: dict | None
    u: int | None
    rho: float | None
    samples: int
    seed: int

    def weight(self) -> Weight:
        if self.weight_spec is None or self.space is None:
            raise ScenarioError("scenario has no weight/space for this selector")
        try:
            return resolve_weight(self.weight_spec, self.space)
        except (ValueError, KeyError) as exc:
            raise ScenarioError(f"bad weight spec: {exc}") from exc


def _parse_table(rows, what: str) -> np.ndarray:
    try:
        return np.array([[decode_number(x) for x in row] for row in rows],
                        dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"bad {what} table: {exc}") from exc


def _parse_space(spec) -> AlmostMetricTable:
    if not isinstance(spec, dict):
        raise ScenarioError("space must be an object")
    if "d" in spec:
        table = _parse_table(spec["d"], "space")
        n = spec.get("n", table.shape[0])
        if table.shape != (n, n):
            raise ScenarioError(f"space table shape {table.shape} != n={n}")
        try:
            return AlmostMetricTable(table)
        except ValueError as exc:
            raise ScenarioError(f"bad space table: {exc}") from exc
    if "seed" in spec and "n" in spec:
        rng = np.random.default_rng(int(spec["seed"]))
        return random_space(rng, int(spec["n"]))
    raise ScenarioError("space needs either a table 'd' or generator 'seed'+'n'")


def parse_scenario(raw: dict, path_name: str = "scenario") -> Scenario:
    if not isinstance(raw, dict):
        raise ScenarioError(f"{path_name}: top level must be an object")
    theorem = raw.get("theorem", "validate")
    if theorem not in SELECTORS:
        raise ScenarioError(f"unknown theorem selector {theorem!r}; "
                            f"expected one of {SELECTORS}")
    space = potential = bifunction = normal = None
    if "space" in raw:
        space = _parse_space(raw["space"])
    if "potential" in raw:
        spec = raw["potential"]
        if not isinstance(spec, dict) or "phi" not in spec:
            raise ScenarioError("potential must be an object with a 'phi' list")
        try:
            potential = Potential(np.array([decode_number(x) for x in spec["phi"]]))
        except ValueError as exc:
            raise ScenarioError(f"bad potential: {exc}") from exc
    if "bifunction" in raw:
        spec = raw["bifunction"]
        if not isinstance(spec, dict) or "F" not in spec:
            raise ScenarioError("bifunction must be an object with an 'F' table")
        try:
            bifunction = Bifunction(_parse_table(spec["F"], "bifunction"))
        except ValueError as exc:
            raise ScenarioError(f"bad bifunction: {exc}") from exc
    if "normal" in raw:
        try:
            normal = resolve_normal(raw["normal"])
        except (ValueError, KeyError, TypeError) as exc:
            raise ScenarioError(f"bad rate-profile spec: {exc}") from exc
    u = raw.get("u")
    rho = raw.get("rho")
    return Scenario(
        raw=raw,
        name=str(raw.get("name", path_name)),
        theorem=theorem,
        space=space,
        potential=potential,
        bifunction=bifunction,
        normal=normal,
        weight_spec=raw.get("weight"),
        u=None if u is None else int(u),
        rho=None if rho is None else float(decode_number(rho)),
        samples=int(raw.get("samples", 10000)),
        seed=int(raw.get("seed", 0)),
    )


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    return parse_scenario(raw, path.name)
