"""Seeded instance generators for benchmarking."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .core import Instance, InstanceError, fig1_instance, load_instance

KINDS = ("uniform-int", "zero-one", "metric", "fig1", "file")
DEFAULT_BOUND = 100


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int = 6
    weight_bound: int = DEFAULT_BOUND
    seed: int = 0
    path: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InstanceError(f"unknown generator kind {self.kind!r}")
        if self.kind == "file" and not self.path:
            raise InstanceError("generator kind 'file' needs a path")
        if self.weight_bound < 1:
            raise InstanceError("weight bound must be positive")


def _symmetric(n, draw):
    w = [[0] * n for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            w[u][v] = w[v][u] = draw(u, v)
    return w


def uniform_int(n: int, rng: random.Random, bound: int = DEFAULT_BOUND) -> Instance:
    return Instance(n, _symmetric(n, lambda u, v: rng.randint(0, bound)))


def zero_one(n: int, rng: random.Random) -> Instance:
    return Instance(n, _symmetric(n, lambda u, v: rng.randint(0, 1)))


def is_metric(instance: Instance) -> bool:
    W, n = instance.weights, instance.n
    return all(W[u][v] <= W[u][x] + W[x][v]
               for u in range(n) for v in range(u + 1, n) for x in range(n) if x not in (u, v))


def metric(n: int, rng: random.Random, bound: int = DEFAULT_BOUND) -> Instance:
    """Integer grid points; weights are ceilings of Euclidean distances.

    Ceiling is subadditive, so the triangle inequality survives rounding; it is
    still verified before returning.
    """
    pts = [(rng.randint(0, bound), rng.randint(0, bound)) for _ in range(n)]

    def dist(u, v):
        d2 = (pts[u][0] - pts[v][0]) ** 2 + (pts[u][1] - pts[v][1]) ** 2
        r = math.isqrt(d2)
        return r if r * r == d2 else r + 1

    inst = Instance(n, _symmetric(n, dist))
    if not is_metric(inst):
        raise AssertionError("metric generator broke the triangle inequality")
    return inst


def generate(spec: GeneratorSpec, index: int = 0) -> Instance:
    """Instance number ``index`` of the stream; seeded by ``spec.seed + index``."""
    rng = random.Random(spec.seed + index)
    if spec.kind == "uniform-int":
        return uniform_int(spec.n, rng, spec.weight_bound)
    if spec.kind == "zero-one":
        return zero_one(spec.n, rng)
    if spec.kind == "metric":
        return metric(spec.n, rng, spec.weight_bound)
    if spec.kind == "fig1":
        return fig1_instance()
    return load_instance(spec.path)
