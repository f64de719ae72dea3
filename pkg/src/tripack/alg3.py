"""Packing from a 2-star packing of the vertices covered by a maximum-weight n/3-matching.

The star packing comes from one of two backends:

* ``exact``: subset dynamic programming, the true optimum (small vertex sets);
* ``arcset``: the best star sub-packing inside each component of a maximum
  2-feasible arc set, greedily grown by pairing leftover vertices.  Its result
  must weigh at least 4/9 of the arc set; when it does not, the exact backend
  is used if the vertex set is small enough.

Star packings here may leave vertices uncovered.  Forcing coverage can cost
weight (a lone vertex next to 3-vertex stars forces one of them apart), and the
expansion into a perfect 3-path packing absorbs uncovered vertices anyway.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import ArcSet, Instance, InvalidSolution, Matching, StarPacking, ThreePathPacking, group_residuals
from .matching import WeightedGraph, max_weight_bipartite_b_matching, max_weight_matching_exact_size

BACKENDS = ("auto", "exact", "arcset")
EXACT_LIMIT = 14
ARCSET_RATIO = Fraction(4, 9)


class StarBackendError(ValueError):
    pass


def max_weight_2feasible_arc_set(instance: Instance, vertices) -> tuple:
    """Maximum-weight arc set on ``vertices`` with in-degree <= 1 and out-degree <= 2.

    Returns ``(ArcSet, weight)``.
    """
    vs = sorted(vertices)
    k = len(vs)
    W = instance.weights
    cost = [[None if i == j else W[vs[i]][vs[j]] for j in range(k)] for i in range(k)]
    pairs, total = max_weight_bipartite_b_matching([2] * k, [1] * k, cost)
    return ArcSet((vs[i], vs[j]) for i, j in pairs), total


def star_weight(instance: Instance, star) -> Fraction:
    c, leaves = star
    return sum((instance.weights[c][l] for l in leaves), Fraction(0))


def packing_weight(instance: Instance, stars) -> Fraction:
    return sum((star_weight(instance, s) for s in stars), Fraction(0))


def exact_star_packing(instance: Instance, vertices, covering: bool = False) -> StarPacking:
    """Maximum-weight 2-star packing by subset DP over the lowest undecided vertex.

    With ``covering`` every vertex must lie in a star.
    """
    vs = tuple(sorted(vertices))
    k = len(vs)
    W = instance.weights

    @lru_cache(maxsize=None)
    def solve(mask):
        if mask == 0:
            return Fraction(0), ()
        i = (mask & -mask).bit_length() - 1
        rest = [j for j in range(i + 1, k) if mask >> j & 1]
        best = None
        vi = vs[i]
        if not covering:
            sub = solve(mask & ~(1 << i))
            if sub[0] is not None:
                best = sub
        for j in rest:
            sub = solve(mask & ~(1 << i | 1 << j))
            if sub[0] is None:
                continue
            cand = (W[vi][vs[j]] + sub[0], ((vi, (vs[j],)),) + sub[1])
            if best is None or cand[0] > best[0]:
                best = cand
        for a, b in itertools.combinations(rest, 2):
            sub = solve(mask & ~(1 << i | 1 << a | 1 << b))
            if sub[0] is None:
                continue
            va, vb = vs[a], vs[b]
            for star in ((vi, (va, vb)), (va, (vi, vb)), (vb, (vi, va))):
                cand = (star_weight(instance, star) + sub[0], (star,) + sub[1])
                if best is None or cand[0] > best[0]:
                    best = cand
        return best if best is not None else (None, ())

    value, stars = solve((1 << k) - 1)
    if value is None:
        raise StarBackendError(f"no covering 2-star packing on {k} vertices")
    return StarPacking(stars)


# ---- arc-set backend ----------------------------------------------------------

def _components(adj: dict) -> list:
    seen, comps = set(), []
    for s in sorted(adj):
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def _tree_stars(instance: Instance, adj: dict, vertices) -> tuple:
    """Best vertex-disjoint star sub-packing of a forest; returns ``(weight, stars)``.

    Per rooted vertex ``v`` four states are kept:
    ``free`` (unused), ``pair`` (joined to one child that has nothing else; a
    parent edge would make ``v`` a centre), ``centre`` (two child leaves),
    ``leaf`` (leaf of a child-centred 3-vertex star).
    """
    W = instance.weights
    vset = set(vertices)
    total, stars = Fraction(0), []
    seen = set()
    for root in sorted(vset):
        if root in seen:
            continue
        order, parent = [], {root: None}
        stack = [root]
        seen.add(root)
        while stack:
            v = stack.pop()
            order.append(v)
            for u in sorted(adj[v]):
                if u in vset and u not in seen:
                    seen.add(u)
                    parent[u] = v
                    stack.append(u)
        st = {}
        for v in reversed(order):
            kids = [u for u in sorted(adj[v]) if u in vset and parent.get(u) == v]
            closed = {u: max(st[u].values(), key=lambda x: x[0]) for u in kids}
            base_w = sum((closed[u][0] for u in kids), Fraction(0))
            base_s = [s for u in kids for s in closed[u][1]]

            def swap(used, w_add, extra):
                w = base_w - sum((closed[u][0] for u in used), Fraction(0)) + w_add
                s = [x for u in kids if u not in used for x in closed[u][1]] + extra
                return w, s

            cur = {"free": (base_w, base_s)}
            for u in kids:
                fw, fs = st[u]["free"]
                cand = swap([u], fw + W[v][u], fs + [(v, (u,))])
                if "pair" not in cur or cand[0] > cur["pair"][0]:
                    cur["pair"] = cand
                pw, ps = st[u]["pair"] if "pair" in st[u] else (None, None)
                if pw is not None:
                    (_, (l,)) = ps[-1]
                    cand = swap([u], pw + W[v][u], ps[:-1] + [(u, tuple(sorted((l, v))))])
                    if "leaf" not in cur or cand[0] > cur["leaf"][0]:
                        cur["leaf"] = cand
            for a, b in itertools.combinations(kids, 2):
                aw, as_ = st[a]["free"]
                bw, bs = st[b]["free"]
                cand = swap([a, b], aw + bw + W[v][a] + W[v][b], as_ + bs + [(v, (a, b))])
                if "centre" not in cur or cand[0] > cur["centre"][0]:
                    cur["centre"] = cand
            st[v] = cur
        w, s = max(st[root].values(), key=lambda x: x[0])
        total += w
        stars += s
    return total, stars


def _component_stars(instance: Instance, adj: dict, comp: list) -> tuple:
    edges = {(u, v) for u in comp for v in adj[u] if u < v}
    if len(edges) < len(comp):
        return _tree_stars(instance, adj, comp)
    # unicyclic: find a cycle edge by union-find
    parent = {v: v for v in comp}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cyc = None
    for u, v in sorted(edges):
        ru, rv = find(u), find(v)
        if ru == rv:
            cyc = (u, v)
            break
        parent[ru] = rv
    u, v = cyc
    cut = {x: set(ys) for x, ys in adj.items()}
    cut[u].discard(v)
    cut[v].discard(u)
    best = _tree_stars(instance, cut, comp)
    options = [(u, (v,))]
    options += [(u, tuple(sorted((v, x)))) for x in sorted(adj[u]) if x != v]
    options += [(v, tuple(sorted((u, x)))) for x in sorted(adj[v]) if x != u]
    for star in options:
        used = {star[0], *star[1]}
        rest = [x for x in comp if x not in used]
        w, s = _tree_stars(instance, cut, rest)
        w += star_weight(instance, star)
        if w > best[0]:
            best = (w, s + [star])
    return best


def _grow(instance: Instance, vertices, stars: list) -> list:
    """Absorb uncovered vertices into new pairs or existing pairs, greedily by weight."""
    W = instance.weights
    stars = list(stars)
    covered = {x for c, ls in stars for x in (c, *ls)}
    uncovered = [v for v in sorted(vertices) if v not in covered]
    while uncovered:
        u = uncovered.pop(0)
        best = None
        for v in uncovered:
            if best is None or W[u][v] > best[0]:
                best = (W[u][v], "pair", v)
        for idx, (c, ls) in enumerate(stars):
            if len(ls) != 1:
                continue
            l = ls[0]
            for centre, leaf in ((c, l), (l, c)):
                if best is None or W[centre][u] > best[0]:
                    best = (W[centre][u], "grow", idx, centre, leaf)
        if best is None:
            continue
        if best[1] == "pair":
            uncovered.remove(best[2])
            stars.append((u, (best[2],)))
        else:
            _, _, idx, centre, leaf = best
            stars[idx] = (centre, tuple(sorted((leaf, u))))
    return stars


def arcset_star_packing(instance: Instance, vertices, arcs: ArcSet | None = None) -> StarPacking:
    """Star packing read off a maximum 2-feasible arc set, without the ratio guard."""
    if arcs is None:
        arcs, _ = max_weight_2feasible_arc_set(instance, vertices)
    adj = {v: set() for v in vertices}
    for a, b in arcs:
        adj[a].add(b)
        adj[b].add(a)
    stars = []
    for comp in _components(adj):
        stars += _component_stars(instance, adj, comp)[1]
    return StarPacking(_grow(instance, vertices, stars))


def two_star_packing(instance: Instance, vertices, backend: str = "auto",
                     exact_limit: int = EXACT_LIMIT) -> StarPacking:
    """2-star packing of ``G[vertices]``.

    ``auto`` picks ``exact`` up to ``exact_limit`` vertices and ``arcset`` above.
    """
    vs = sorted(vertices)
    if len(vs) < 2:
        raise StarBackendError("a 2-star packing host needs at least two vertices")
    if backend not in BACKENDS:
        raise StarBackendError(f"unknown star backend {backend!r}")
    if backend == "auto":
        backend = "exact" if len(vs) <= exact_limit else "arcset"
    if backend == "exact":
        if len(vs) > exact_limit:
            raise StarBackendError(f"{len(vs)} vertices exceed the exact backend limit {exact_limit}")
        return exact_star_packing(instance, vs)
    arcs, a_weight = max_weight_2feasible_arc_set(instance, vs)
    s = arcset_star_packing(instance, vs, arcs)
    if packing_weight(instance, s) >= ARCSET_RATIO * a_weight:
        return s
    if len(vs) <= exact_limit:
        return exact_star_packing(instance, vs)
    raise StarBackendError("arc-set backend fell below 4/9 of the arc set weight")


def attach_to_pair(instance: Instance, centre: int, leaf: int, r: int) -> tuple:
    """3-path from a 1-star plus residual ``r`` on whichever end gains more."""
    W = instance.weights
    if W[leaf][r] > W[centre][r]:
        return (centre, leaf, r)
    return (r, centre, leaf)


@dataclass
class Alg3Trace:
    """Intermediate objects of one run."""

    m_star: Matching
    lg: list
    arcs: ArcSet
    arcs_weight: Fraction
    stars: StarPacking
    stars_weight: Fraction
    packing: ThreePathPacking


def alg3_trace(instance: Instance, backend: str = "auto", exact_limit: int = EXACT_LIMIT) -> Alg3Trace:
    n = instance.n
    m_star = max_weight_matching_exact_size(WeightedGraph.complete(instance.weights), n // 3).matching
    lg = sorted(m_star.vertices())
    arcs, a_weight = max_weight_2feasible_arc_set(instance, lg)
    stars = two_star_packing(instance, lg, backend, exact_limit)
    residuals = [v for v in range(n) if v not in m_star.vertices()]
    leftover = [v for v in lg if v not in stars.vertices()]
    paths = []
    for c, leaves in sorted(stars):
        if len(leaves) == 2:
            paths.append((leaves[0], c, leaves[1]))
        else:
            if not residuals:
                raise InvalidSolution("more 1-stars than residual vertices")
            paths.append(attach_to_pair(instance, c, leaves[0], residuals.pop(0)))
    paths += group_residuals(instance, sorted(residuals + leftover))
    packing = ThreePathPacking(paths)
    return Alg3Trace(m_star, lg, arcs, a_weight, stars, packing_weight(instance, stars), packing)


def run_alg3(instance: Instance, backend: str = "auto", exact_limit: int = EXACT_LIMIT) -> ThreePathPacking:
    return alg3_trace(instance, backend, exact_limit).packing
