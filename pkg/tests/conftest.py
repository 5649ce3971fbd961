"""Shared fixtures: the seeded desk-scale corpus used across the suite."""

from dataclasses import dataclass

import numpy as np
import pytest

from zhongvar import (
    AlmostMetricTable,
    Bifunction,
    NormalFunction,
    Potential,
    Weight,
    ZhongMetric,
    build_zhong,
)
from zhongvar.generate import (
    make_scenario,
    random_bifunction,
    random_normal_spec,
    random_potential,
    random_space,
    random_weight_spec,
    resolve_normal,
    resolve_weight,
)

CORPUS_SEED = 20260809
CORPUS_COUNT = 520
SIZE_CYCLE = (1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6, 8, 8, 10, 12)


@dataclass(frozen=True)
class Instance:
    name: str
    d: AlmostMetricTable
    phi: Potential
    F: Bifunction
    fn: NormalFunction
    w: Weight
    u: int
    rho: float
    z: ZhongMetric

    @property
    def e(self) -> AlmostMetricTable:
        return self.z.table


def build_instance(rng: np.random.Generator, n: int, index: int) -> Instance:
    d = random_space(rng, n)
    phi = random_potential(rng, n)
    F = random_bifunction(rng, phi)
    fn = resolve_normal(random_normal_spec(rng, index))
    w = resolve_weight(random_weight_spec(rng, n), d)
    dom = phi.dom
    u = int(dom[int(rng.integers(len(dom)))])
    from zhongvar.generate import admissible_radius

    rho = admissible_radius(u, phi, F, fn, w)
    return Instance(
        name=f"corpus-{index:04d}", d=d, phi=phi, F=F, fn=fn, w=w, u=u, rho=rho,
        z=build_zhong(d, w, fn),
    )


def build_corpus(seed: int = CORPUS_SEED, count: int = CORPUS_COUNT) -> list[Instance]:
    rng = np.random.default_rng(seed)
    return [
        build_instance(rng, SIZE_CYCLE[i % len(SIZE_CYCLE)], i)
        for i in range(count)
    ]


@pytest.fixture(scope="session")
def corpus() -> list[Instance]:
    return build_corpus()


@pytest.fixture(scope="session")
def small_corpus(corpus) -> list[Instance]:
    return corpus[:120]
