"""scikit-learn style wrapper around the packing algorithms."""

from __future__ import annotations

from fractions import Fraction

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .alg3 import BACKENDS
from .core import Instance, InstanceError, to_rational
from .solve import ALGORITHMS, solve


def _exact(x) -> Fraction:
    # numpy integer scalars expose __index__; floats are refused outright
    if not isinstance(x, (bool, int, Fraction, str)) and hasattr(x, "__index__"):
        x = x.__index__()
    return to_rational(x)


def as_instance(W) -> Instance:
    """Accept an :class:`Instance` or any square nested sequence of exact weights."""
    if isinstance(W, Instance):
        return W
    if hasattr(W, "tolist"):
        W = W.tolist()
    try:
        rows = [[_exact(x) for x in row] for row in W]
    except TypeError as exc:
        raise InstanceError("weights must be a square matrix") from exc
    return Instance(len(rows), rows)


class ThreePathPacker(BaseEstimator):
    """Perfect 3-path packing of a complete weighted graph.

    ``fit`` takes a symmetric weight matrix with a zero diagonal and stores the
    packing as ``packing_``, its weight as ``weight_`` and, per vertex, the
    index of the path covering it as ``labels_``.
    """

    def __init__(self, algorithm: str = "best", star_backend: str = "auto"):
        self.algorithm = algorithm
        self.star_backend = star_backend

    def fit(self, W, y=None):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.star_backend not in BACKENDS:
            raise ValueError(f"star_backend must be one of {BACKENDS}, got {self.star_backend!r}")
        inst = as_instance(W)
        res = solve(inst, self.algorithm, self.star_backend)
        self.n_vertices_ = inst.n
        self.packing_ = res.packing
        self.weight_ = res.weight
        self.weights_ = dict(res.weights)
        self.algorithm_ = res.algorithm
        self.labels_ = res.packing.labels(inst.n)
        return self

    def fit_predict(self, W, y=None) -> list:
        return self.fit(W).labels_

    @property
    def paths_(self) -> tuple:
        if not hasattr(self, "packing_"):
            raise NotFittedError("ThreePathPacker is not fitted yet")
        return self.packing_.paths
