"""Packing from a maximum-weight matching of size n/2.

Pipeline for even ``n``: take a maximum-weight perfect matching, contract its
edges into super nodes, take a maximum-cost matching of size n/6 in the
contracted graph, and expand.  Odd ``n`` is handled by trying every 3-path as
one path of the answer and running the even pipeline on the rest.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .core import Instance, InvalidSolution, Matching, ThreePathPacking, edge
from .matching import WeightedGraph, max_weight_matching_exact_size


@dataclass(frozen=True)
class SuperNode:
    edge: tuple


@dataclass(frozen=True)
class SingleNode:
    vertex: int


@dataclass
class ContractedGraph:
    """Nodes of a contracted graph with costs and the original edge behind each pair.

    ``back_map[(i, j)]`` (``i < j``) is ``(a, b)`` with ``a`` in node ``i`` and
    ``b`` in node ``j``.
    """

    base: Instance
    nodes: list
    costs: WeightedGraph
    back_map: dict

    def original(self, i: int, j: int) -> tuple:
        """Original edge for node pair ``(i, j)``, oriented ``(vertex of i, vertex of j)``."""
        if i < j:
            return self.back_map[(i, j)]
        a, b = self.back_map[(j, i)]
        return (b, a)


def super_pair_cost(instance: Instance, e1: tuple, e2: tuple):
    """Best of the four parallel edges between two super nodes.

    Cost of ``ab`` is ``w(ab) - min(w(e1), w(e2))``.  Returns ``(cost, (a, b))``
    with ``a`` in ``e1``; ties keep the first candidate in the order
    ``(u, y), (u, z), (x, y), (x, z)``.
    """
    W = instance.weights
    discount = min(W[e1[0]][e1[1]], W[e2[0]][e2[1]])
    best = None
    for a in e1:
        for b in e2:
            if best is None or W[a][b] > W[best[0]][best[1]]:
                best = (a, b)
    return W[best[0]][best[1]] - discount, best


def contract_full(instance: Instance, m: Matching) -> ContractedGraph:
    n = instance.n
    if n % 2:
        raise InvalidSolution(f"full contraction needs even n, got {n}")
    if len(m) != n // 2:
        raise InvalidSolution(f"matching of size {len(m)} is not perfect on {n} vertices")
    sup = sorted(m.edges)
    cost, back = {}, {}
    for i, j in itertools.combinations(range(len(sup)), 2):
        c, ab = super_pair_cost(instance, sup[i], sup[j])
        cost[(i, j)] = c
        back[(i, j)] = ab
    return ContractedGraph(instance, [SuperNode(e) for e in sup], WeightedGraph(len(sup), cost), back)


def _other(e: tuple, v: int) -> int:
    return e[1] if e[0] == v else e[0]


def expand_super_pair(instance: Instance, cg: ContractedGraph, i: int, j: int):
    """3-path for a matched super-super pair plus the residual vertex it leaves.

    The path uses the contracted edge and the heavier of the two matched edges
    (ties go to the lower node index).
    """
    if i > j:
        i, j = j, i
    a, b = cg.original(i, j)
    ei, ej = cg.nodes[i].edge, cg.nodes[j].edge
    W = instance.weights
    if W[ei[0]][ei[1]] >= W[ej[0]][ej[1]]:
        return (_other(ei, a), a, b), _other(ej, b)
    return (a, b, _other(ej, b)), _other(ei, a)


def attach_residual(instance: Instance, e: tuple, r: int) -> tuple:
    """3-path made of edge ``e`` plus residual ``r`` hung on the better endpoint."""
    u, x = e
    W = instance.weights
    if W[x][r] > W[u][r]:
        return (u, x, r)
    return (r, u, x)


def expand_alg1(instance: Instance, m_star: Matching, m_contracted: Matching,
                cg: ContractedGraph) -> ThreePathPacking:
    n = instance.n
    if len(m_contracted) != n // 6:
        raise InvalidSolution(f"contracted matching has size {len(m_contracted)}, expected {n // 6}")
    paths, residuals = [], []
    matched = set()
    for i, j in sorted(m_contracted.edges):
        path, r = expand_super_pair(instance, cg, i, j)
        paths.append(path)
        residuals.append(r)
        matched.update((i, j))
    residuals.sort()
    unmatched = [k for k in range(len(cg.nodes)) if k not in matched]
    if len(unmatched) != len(residuals):
        raise InvalidSolution("residual count does not match unmatched super nodes")
    for k, r in zip(unmatched, residuals):
        paths.append(attach_residual(instance, cg.nodes[k].edge, r))
    return ThreePathPacking(paths)


@dataclass
class Alg1Trace:
    """Intermediate objects of one even-n run."""

    m_star: Matching
    contracted: ContractedGraph
    m_contracted: Matching
    contracted_cost: Fraction
    packing: ThreePathPacking


def alg1_even(instance: Instance) -> Alg1Trace:
    n = instance.n
    if n % 2:
        raise InvalidSolution(f"alg1_even needs even n, got {n}")
    m_star = max_weight_matching_exact_size(WeightedGraph.complete(instance.weights), n // 2).matching
    cg = contract_full(instance, m_star)
    res = max_weight_matching_exact_size(cg.costs, n // 6)
    packing = expand_alg1(instance, m_star, res.matching, cg)
    return Alg1Trace(m_star, cg, res.matching, res.total_cost, packing)


def _triple_candidates(a, b, c):
    return ((b, a, c), (a, b, c), (a, c, b))


def run_alg1(instance: Instance) -> ThreePathPacking:
    """Packing from the n/2-matching pipeline; odd n enumerates one fixed 3-path."""
    n = instance.n
    if n % 2 == 0:
        return alg1_even(instance).packing
    W = instance.weights
    best_w, best = None, None
    for trip in itertools.combinations(range(n), 3):
        rest = [v for v in range(n) if v not in trip]
        if rest:
            sub = alg1_even(instance.induced(rest)).packing
            tail = [tuple(rest[v] for v in p) for p in sub.paths]
            tail_w = sum((W[x][y] + W[y][z] for x, y, z in tail), Fraction(0))
        else:
            tail, tail_w = [], Fraction(0)
        for x, y, z in _triple_candidates(*trip):
            total = W[x][y] + W[y][z] + tail_w
            if best_w is None or total > best_w:
                best_w, best = total, [(x, y, z)] + tail
    return ThreePathPacking(best)


def lift_packing(packing: ThreePathPacking, vertices) -> ThreePathPacking:
    """Map a packing of ``instance.induced(vertices)`` back to original labels."""
    return ThreePathPacking(tuple(vertices[v] for v in p) for p in packing.paths)


__all__ = [
    "SuperNode", "SingleNode", "ContractedGraph", "super_pair_cost", "contract_full",
    "expand_alg1", "expand_super_pair", "attach_residual", "Alg1Trace", "alg1_even",
    "run_alg1", "lift_packing", "edge",
]
