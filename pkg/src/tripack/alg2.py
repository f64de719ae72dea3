"""Packing from a maximum-weight matching of size n/3 plus the n/3 unmatched vertices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .alg1 import ContractedGraph, SingleNode, SuperNode, expand_super_pair, super_pair_cost
from .core import Instance, InvalidSolution, Matching, ThreePathPacking, edge, group_residuals
from .matching import WeightedGraph, max_weight_matching_exact_size, max_weight_matching_free


def contract_partial(instance: Instance, m: Matching) -> ContractedGraph:
    """Contract the n/3 matched edges; keep the remaining vertices as singles.

    Node order is the supers (sorted edges) followed by the singles (ascending).
    Super-super costs follow :func:`super_pair_cost`, super-single costs are the
    plain weight of the best attaching edge, and single-single pairs get no edge.
    """
    n = instance.n
    if len(m) != n // 3:
        raise InvalidSolution(f"matching of size {len(m)}, expected {n // 3}")
    sup = sorted(m.edges)
    covered = m.vertices()
    singles = [v for v in range(n) if v not in covered]
    nodes = [SuperNode(e) for e in sup] + [SingleNode(v) for v in singles]
    W = instance.weights
    cost, back = {}, {}
    k = len(sup)
    for i, j in itertools.combinations(range(k), 2):
        cost[(i, j)], back[(i, j)] = super_pair_cost(instance, sup[i], sup[j])
    for i, e in enumerate(sup):
        for t, z in enumerate(singles):
            a = e[1] if W[e[1]][z] > W[e[0]][z] else e[0]
            cost[(i, k + t)] = W[a][z]
            back[(i, k + t)] = (a, z)
    return ContractedGraph(instance, nodes, WeightedGraph(len(nodes), cost), back)


def saturate(m_contracted: Matching, g: ContractedGraph) -> Matching:
    """Match every super node, pairing leftovers with their best free single."""
    mate = m_contracted.mate()
    free_singles = [i for i, nd in enumerate(g.nodes) if isinstance(nd, SingleNode) and i not in mate]
    edges = set(m_contracted.edges)
    for i, nd in enumerate(g.nodes):
        if not isinstance(nd, SuperNode) or i in mate:
            continue
        if not free_singles:
            raise InvalidSolution("no free single node left to saturate with")
        best = max(free_singles, key=lambda s: (g.costs.c(i, s), -s))
        free_singles.remove(best)
        edges.add(edge(i, best))
    return Matching(edges)


@dataclass
class Alg2Trace:
    """Intermediate objects of one run."""

    m_star: Matching
    contracted: ContractedGraph
    m_free: Matching
    free_cost: Fraction
    m_saturated: Matching
    saturated_cost: Fraction
    residuals: list
    packing: ThreePathPacking


def expand_alg2(instance: Instance, g: ContractedGraph, m_sat: Matching):
    """Expand a saturated contracted matching; returns ``(packing, residuals)``."""
    paths, residuals = [], []
    matched = set()
    for i, j in sorted(m_sat.edges):
        ni, nj = g.nodes[i], g.nodes[j]
        if isinstance(ni, SuperNode) and isinstance(nj, SuperNode):
            path, r = expand_super_pair(instance, g, i, j)
            residuals.append(r)
        elif isinstance(ni, SuperNode) and isinstance(nj, SingleNode):
            a, z = g.original(i, j)
            path = (ni.edge[1] if ni.edge[0] == a else ni.edge[0], a, z)
        else:
            raise InvalidSolution(f"unexpected contracted pair {ni}, {nj}")
        paths.append(path)
        matched.update((i, j))
    for k, nd in enumerate(g.nodes):
        if k in matched:
            continue
        if isinstance(nd, SuperNode):
            raise InvalidSolution("matching is not saturated")
        residuals.append(nd.vertex)
    residuals.sort()
    paths += group_residuals(instance, residuals)
    return ThreePathPacking(paths), residuals


def alg2_trace(instance: Instance) -> Alg2Trace:
    n = instance.n
    m_star = max_weight_matching_exact_size(WeightedGraph.complete(instance.weights), n // 3).matching
    g = contract_partial(instance, m_star)
    free = max_weight_matching_free(g.costs)
    m_sat = saturate(free.matching, g)
    packing, residuals = expand_alg2(instance, g, m_sat)
    return Alg2Trace(m_star, g, free.matching, free.total_cost, m_sat,
                     g.costs.matching_cost(m_sat), residuals, packing)


def run_alg2(instance: Instance) -> ThreePathPacking:
    return alg2_trace(instance).packing
