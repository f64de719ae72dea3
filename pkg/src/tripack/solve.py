"""Dispatch to the three algorithms and pick the heaviest packing."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .alg1 import run_alg1
from .alg2 import run_alg2
from .alg3 import BACKENDS, run_alg3
from .core import Instance, InvalidSolution, ThreePathPacking, validate_packing, weight_of

ALGORITHMS = ("1", "2", "3", "best")


@dataclass
class SolveResult:
    algorithm: str
    packing: ThreePathPacking
    weight: Fraction
    weights: dict


def run_algorithm(instance: Instance, alg: str, star_backend: str = "auto") -> ThreePathPacking:
    if alg == "1":
        return run_alg1(instance)
    if alg == "2":
        return run_alg2(instance)
    if alg == "3":
        return run_alg3(instance, star_backend)
    raise ValueError(f"unknown algorithm {alg!r}; expected one of 1, 2, 3")


def solve(instance: Instance, alg: str = "best", star_backend: str = "auto") -> SolveResult:
    """Run one algorithm or all three; ``best`` keeps the earliest on equal weight.

    The returned packing is validated before it is handed back.
    """
    if alg not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {alg!r}; expected one of {', '.join(ALGORITHMS)}")
    if star_backend not in BACKENDS:
        raise ValueError(f"unknown star backend {star_backend!r}")
    names = ("1", "2", "3") if alg == "best" else (alg,)
    packings, weights = {}, {}
    for name in names:
        p = run_algorithm(instance, name, star_backend)
        problems = validate_packing(instance, p)
        if problems:
            raise InvalidSolution(f"algorithm {name} produced an invalid packing: {problems}")
        packings[name] = p
        weights[name] = weight_of(instance, p)
    chosen = names[0]
    for name in names[1:]:
        if weights[name] > weights[chosen]:
            chosen = name
    return SolveResult(chosen, packings[chosen], weights[chosen], weights)
