"""Approximation algorithms for maximum-weight perfect 3-path packing, with exact checkers."""

from .core import (ArcSet, Instance, InstanceError, InvalidSolution, Matching, StarPacking,
                   ThreePathPacking, fig1_instance, load_instance, parse_instance,
                   validate_packing, weight_of)
from .solve import SolveResult, solve

__all__ = [
    "ArcSet", "Instance", "InstanceError", "InvalidSolution", "Matching", "StarPacking",
    "ThreePathPacking", "fig1_instance", "load_instance", "parse_instance",
    "validate_packing", "weight_of", "SolveResult", "solve", "ThreePathPacker",
]


def __getattr__(name):
    # keep scikit-learn off the import path unless the estimator is used
    if name == "ThreePathPacker":
        from .estimator import ThreePathPacker
        return ThreePathPacker
    raise AttributeError(name)
