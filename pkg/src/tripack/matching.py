"""Exact maximum-weight matching engines.

The general-graph engine is a primal-dual blossom algorithm run in
maximum-cardinality mode.  Every stage augments along one augmenting path and
the matching after stage ``k`` is a maximum-cost matching of size ``k``:
exposed vertices always carry the same (minimal) dual value, so the duals at
the end of the stage certify optimality among all size-``k`` matchings.  One
sweep therefore serves both the exact-size and the free-size variants, and
negative costs need no special treatment.

Costs are Fractions.  They are scaled to integers by the common denominator
before the sweep, so the dual updates stay exact; reported totals are
recomputed from the original Fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .core import Matching, edge


class InfeasibleMatching(ValueError):
    """No matching of the requested size exists among the defined edges."""


@dataclass
class WeightedGraph:
    """Node count plus a partial symmetric cost function on node pairs.

    ``cost`` maps canonical pairs ``(u, v)`` with ``u < v`` to Fractions; a
    missing pair is a forbidden edge.
    """

    m: int
    cost: dict = field(default_factory=dict)

    def __post_init__(self):
        canon = {}
        for (u, v), c in self.cost.items():
            if u == v:
                raise ValueError(f"self loop at node {u}")
            if not (0 <= u < self.m and 0 <= v < self.m):
                raise ValueError(f"edge ({u},{v}) outside node range")
            key = edge(u, v)
            c = Fraction(c)
            if key in canon and canon[key] != c:
                raise ValueError(f"conflicting costs for pair {key}")
            canon[key] = c
        self.cost = canon

    @classmethod
    def complete(cls, weights) -> "WeightedGraph":
        """Complete graph from a square matrix (e.g. ``Instance.weights``)."""
        m = len(weights)
        return cls(m, {(u, v): weights[u][v] for u in range(m) for v in range(u + 1, m)})

    def c(self, u: int, v: int) -> Fraction:
        return self.cost[edge(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return edge(u, v) in self.cost

    def matching_cost(self, matching) -> Fraction:
        return sum((self.cost[edge(u, v)] for u, v in matching), Fraction(0))


@dataclass(frozen=True)
class SizedMatchingResult:
    matching: Matching
    total_cost: Fraction


def _scaled_edges(g: WeightedGraph):
    items = sorted(g.cost.items())
    scale = 1
    for _, c in items:
        scale = math.lcm(scale, c.denominator)
    return [(u, v, int(c * scale)) for (u, v), c in items]


def _blossom_sweep(nvertex: int, edges: list) -> list:
    """Mate arrays after every augmentation; index ``k`` holds a size-``k`` optimum.

    ``edges`` is a list of ``(i, j, w)`` with integer ``w``.  Vertex duals are
    kept doubled so that every slack is an integer.
    """
    snapshots = [[-1] * nvertex]
    nedge = len(edges)
    if nedge == 0:
        return snapshots

    maxweight = max(0, max(w for _, _, w in edges))
    endpoint = [edges[p >> 1][p & 1] for p in range(2 * nedge)]
    neighbend = [[] for _ in range(nvertex)]
    for k, (i, j, _w) in enumerate(edges):
        neighbend[i].append(2 * k + 1)
        neighbend[j].append(2 * k)

    nb = 2 * nvertex
    mate = [-1] * nvertex
    label = [0] * nb
    labelend = [-1] * nb
    inblossom = list(range(nvertex))
    blossomparent = [-1] * nb
    blossomchilds = [None] * nb
    blossombase = list(range(nvertex)) + [-1] * nvertex
    blossomendps = [None] * nb
    bestedge = [-1] * nb
    blossombestedges = [None] * nb
    unusedblossoms = list(range(nvertex, nb))
    dualvar = [maxweight] * nvertex + [0] * nvertex
    allowedge = [False] * nedge
    queue = []

    def slack(k):
        i, j, w = edges[k]
        return dualvar[i] + dualvar[j] - 2 * w

    def leaves(b):
        if b < nvertex:
            yield b
        else:
            for t in blossomchilds[b]:
                if t < nvertex:
                    yield t
                else:
                    yield from leaves(t)

    def assign_label(w, t, p):
        b = inblossom[w]
        label[w] = label[b] = t
        labelend[w] = labelend[b] = p
        bestedge[w] = bestedge[b] = -1
        if t == 1:
            queue.extend(leaves(b))
        else:
            base = blossombase[b]
            assign_label(endpoint[mate[base]], 1, mate[base] ^ 1)

    def scan_blossom(v, w):
        # Trace back from v and w to find a common base (new blossom) or two roots.
        path = []
        base = -1
        while v != -1 or w != -1:
            b = inblossom[v]
            if label[b] & 4:
                base = blossombase[b]
                break
            path.append(b)
            label[b] = 5
            if labelend[b] == -1:
                v = -1
            else:
                v = endpoint[labelend[b]]
                b = inblossom[v]
                v = endpoint[labelend[b]]
            if w != -1:
                v, w = w, v
        for b in path:
            label[b] = 1
        return base

    def add_blossom(base, k):
        v, w, _ = edges[k]
        bb = inblossom[base]
        bv = inblossom[v]
        bw = inblossom[w]
        b = unusedblossoms.pop()
        blossombase[b] = base
        blossomparent[b] = -1
        blossomparent[bb] = b
        blossomchilds[b] = path = []
        blossomendps[b] = endps = []
        while bv != bb:
            blossomparent[bv] = b
            path.append(bv)
            endps.append(labelend[bv])
            v = endpoint[labelend[bv]]
            bv = inblossom[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            blossomparent[bw] = b
            path.append(bw)
            endps.append(labelend[bw] ^ 1)
            w = endpoint[labelend[bw]]
            bw = inblossom[w]
        label[b] = 1
        labelend[b] = labelend[bb]
        dualvar[b] = 0
        for v in leaves(b):
            if label[inblossom[v]] == 2:
                queue.append(v)
            inblossom[v] = b
        bestedgeto = [-1] * nb
        for bv in path:
            if blossombestedges[bv] is None:
                nblists = [[p // 2 for p in neighbend[v]] for v in leaves(bv)]
            else:
                nblists = [blossombestedges[bv]]
            for nblist in nblists:
                for kk in nblist:
                    i, j, _ = edges[kk]
                    if inblossom[j] == b:
                        i, j = j, i
                    bj = inblossom[j]
                    if (bj != b and label[bj] == 1
                            and (bestedgeto[bj] == -1 or slack(kk) < slack(bestedgeto[bj]))):
                        bestedgeto[bj] = kk
            blossombestedges[bv] = None
            bestedge[bv] = -1
        blossombestedges[b] = [kk for kk in bestedgeto if kk != -1]
        bestedge[b] = -1
        for kk in blossombestedges[b]:
            if bestedge[b] == -1 or slack(kk) < slack(bestedge[b]):
                bestedge[b] = kk

    def expand_blossom(b, endstage):
        for s in blossomchilds[b]:
            blossomparent[s] = -1
            if s < nvertex:
                inblossom[s] = s
            elif endstage and dualvar[s] == 0:
                expand_blossom(s, endstage)
            else:
                for v in leaves(s):
                    inblossom[v] = s
        if not endstage and label[b] == 2:
            # Relabel the sub-blossoms along the even path to the entry child.
            entrychild = inblossom[endpoint[labelend[b] ^ 1]]
            j = blossomchilds[b].index(entrychild)
            if j & 1:
                j -= len(blossomchilds[b])
                jstep, endptrick = 1, 0
            else:
                jstep, endptrick = -1, 1
            p = labelend[b]
            while j != 0:
                label[endpoint[p ^ 1]] = 0
                label[endpoint[blossomendps[b][j - endptrick] ^ endptrick ^ 1]] = 0
                assign_label(endpoint[p ^ 1], 2, p)
                allowedge[blossomendps[b][j - endptrick] // 2] = True
                j += jstep
                p = blossomendps[b][j - endptrick] ^ endptrick
                allowedge[p // 2] = True
                j += jstep
            bv = blossomchilds[b][j]
            label[endpoint[p ^ 1]] = label[bv] = 2
            labelend[endpoint[p ^ 1]] = labelend[bv] = p
            bestedge[bv] = -1
            j += jstep
            while blossomchilds[b][j] != entrychild:
                bv = blossomchilds[b][j]
                if label[bv] == 1:
                    j += jstep
                    continue
                v = -1
                for v in leaves(bv):
                    if label[v] != 0:
                        break
                if label[v] != 0:
                    label[v] = 0
                    label[endpoint[mate[blossombase[bv]]]] = 0
                    assign_label(v, 2, labelend[v])
                j += jstep
        label[b] = labelend[b] = -1
        blossomchilds[b] = blossomendps[b] = None
        blossombase[b] = -1
        blossombestedges[b] = None
        bestedge[b] = -1
        unusedblossoms.append(b)

    def augment_blossom(b, v):
        t = v
        while blossomparent[t] != b:
            t = blossomparent[t]
        if t >= nvertex:
            augment_blossom(t, v)
        i = j = blossomchilds[b].index(t)
        if i & 1:
            j -= len(blossomchilds[b])
            jstep, endptrick = 1, 0
        else:
            jstep, endptrick = -1, 1
        while j != 0:
            j += jstep
            t = blossomchilds[b][j]
            p = blossomendps[b][j - endptrick] ^ endptrick
            if t >= nvertex:
                augment_blossom(t, endpoint[p])
            j += jstep
            t = blossomchilds[b][j]
            if t >= nvertex:
                augment_blossom(t, endpoint[p ^ 1])
            mate[endpoint[p]] = p ^ 1
            mate[endpoint[p ^ 1]] = p
        blossomchilds[b] = blossomchilds[b][i:] + blossomchilds[b][:i]
        blossomendps[b] = blossomendps[b][i:] + blossomendps[b][:i]
        blossombase[b] = blossombase[blossomchilds[b][0]]

    def augment_matching(k):
        v, w, _ = edges[k]
        for s, p in ((v, 2 * k + 1), (w, 2 * k)):
            while True:
                bs = inblossom[s]
                if bs >= nvertex:
                    augment_blossom(bs, s)
                mate[s] = p
                if labelend[bs] == -1:
                    break
                t = endpoint[labelend[bs]]
                bt = inblossom[t]
                s = endpoint[labelend[bt]]
                j = endpoint[labelend[bt] ^ 1]
                if bt >= nvertex:
                    augment_blossom(bt, j)
                mate[j] = labelend[bt]
                p = labelend[bt] ^ 1

    for _stage in range(nvertex):
        label[:] = [0] * nb
        bestedge[:] = [-1] * nb
        blossombestedges[nvertex:] = [None] * nvertex
        allowedge[:] = [False] * nedge
        queue[:] = []
        for v in range(nvertex):
            if mate[v] == -1 and label[inblossom[v]] == 0:
                assign_label(v, 1, -1)

        augmented = False
        while True:
            while queue and not augmented:
                v = queue.pop()
                for p in neighbend[v]:
                    k = p // 2
                    w = endpoint[p]
                    if inblossom[v] == inblossom[w]:
                        continue
                    if not allowedge[k]:
                        kslack = slack(k)
                        if kslack <= 0:
                            allowedge[k] = True
                    if allowedge[k]:
                        if label[inblossom[w]] == 0:
                            assign_label(w, 2, p ^ 1)
                        elif label[inblossom[w]] == 1:
                            base = scan_blossom(v, w)
                            if base >= 0:
                                add_blossom(base, k)
                            else:
                                augment_matching(k)
                                augmented = True
                                break
                        elif label[w] == 0:
                            label[w] = 2
                            labelend[w] = p ^ 1
                    elif label[inblossom[w]] == 1:
                        b = inblossom[v]
                        if bestedge[b] == -1 or kslack < slack(bestedge[b]):
                            bestedge[b] = k
                    elif label[w] == 0:
                        if bestedge[w] == -1 or kslack < slack(bestedge[w]):
                            bestedge[w] = k
            if augmented:
                break

            # No tight augmenting structure left: move the duals.  Vertex-dual
            # exhaustion is never a stopping reason (maximum-cardinality mode).
            deltatype = -1
            delta = deltaedge = deltablossom = None
            for v in range(nvertex):
                if label[inblossom[v]] == 0 and bestedge[v] != -1:
                    d = slack(bestedge[v])
                    if deltatype == -1 or d < delta:
                        delta, deltatype, deltaedge = d, 2, bestedge[v]
            for b in range(nb):
                if blossomparent[b] == -1 and label[b] == 1 and bestedge[b] != -1:
                    kslack = slack(bestedge[b])
                    if kslack % 2:
                        raise AssertionError("odd slack between S-blossoms")
                    d = kslack // 2
                    if deltatype == -1 or d < delta:
                        delta, deltatype, deltaedge = d, 3, bestedge[b]
            for b in range(nvertex, nb):
                if (blossombase[b] >= 0 and blossomparent[b] == -1 and label[b] == 2
                        and (deltatype == -1 or dualvar[b] < delta)):
                    delta, deltatype, deltablossom = dualvar[b], 4, b
            if deltatype == -1:
                break

            for v in range(nvertex):
                lb = label[inblossom[v]]
                if lb == 1:
                    dualvar[v] -= delta
                elif lb == 2:
                    dualvar[v] += delta
            for b in range(nvertex, nb):
                if blossombase[b] >= 0 and blossomparent[b] == -1:
                    if label[b] == 1:
                        dualvar[b] += delta
                    elif label[b] == 2:
                        dualvar[b] -= delta

            if deltatype == 2:
                allowedge[deltaedge] = True
                i, j, _ = edges[deltaedge]
                if label[inblossom[i]] == 0:
                    i, j = j, i
                queue.append(i)
            elif deltatype == 3:
                allowedge[deltaedge] = True
                i, j, _ = edges[deltaedge]
                queue.append(i)
            else:
                expand_blossom(deltablossom, False)

        if not augmented:
            break
        snapshots.append([endpoint[p] if p >= 0 else -1 for p in mate])
        for b in range(nvertex, nb):
            if (blossomparent[b] == -1 and blossombase[b] >= 0
                    and label[b] == 1 and dualvar[b] == 0):
                expand_blossom(b, True)

    return snapshots


def _mate_to_matching(mate: list) -> Matching:
    return Matching((v, u) for v, u in enumerate(mate) if u > v)


def matching_profile(g: WeightedGraph) -> list:
    """Maximum-cost matching of every feasible size ``0..K`` (``K`` = max cardinality)."""
    out = []
    for mate in _blossom_sweep(g.m, _scaled_edges(g)):
        mm = _mate_to_matching(mate)
        out.append(SizedMatchingResult(mm, g.matching_cost(mm)))
    return out


def max_weight_matching_exact_size(g: WeightedGraph, p: int) -> SizedMatchingResult:
    """Maximum-cost matching with exactly ``p`` edges."""
    if p < 0:
        raise InfeasibleMatching(f"negative size {p}")
    profile = matching_profile(g)
    if p >= len(profile):
        raise InfeasibleMatching(f"no matching of size {p}; maximum cardinality is {len(profile) - 1}")
    return profile[p]


def max_weight_matching_free(g: WeightedGraph) -> SizedMatchingResult:
    """Maximum-cost matching of any size; the empty matching is always allowed.

    Among equal-cost optima the one with fewest edges is returned.
    """
    best = None
    for res in matching_profile(g):
        if best is None or res.total_cost > best.total_cost:
            best = res
    return best


# --- subset dynamic program -------------------------------------------------

SUBSET_DP_LIMIT = 20


def subset_dp_profile(g: WeightedGraph) -> list:
    """Best cost per matching size by dynamic programming over node subsets.

    Entry ``k`` is ``(cost, Matching)`` or ``None`` when no size-``k`` matching
    exists.  Exponential; meant for ``m <= SUBSET_DP_LIMIT``.
    """
    m = g.m
    if m > SUBSET_DP_LIMIT:
        raise ValueError(f"subset DP limited to {SUBSET_DP_LIMIT} nodes, got {m}")
    adj = [[None] * m for _ in range(m)]
    for (u, v), c in g.cost.items():
        adj[u][v] = adj[v][u] = c

    @lru_cache(maxsize=None)
    def solve(mask: int) -> dict:
        # size -> (cost, edges) over matchings inside ``mask``
        if mask == 0:
            return {0: (Fraction(0), ())}
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        table = dict(solve(rest))
        row = adj[i]
        r = rest
        while r:
            j = (r & -r).bit_length() - 1
            r &= r - 1
            c = row[j]
            if c is None:
                continue
            for k, (val, es) in solve(rest & ~(1 << j)).items():
                cand = val + c
                cur = table.get(k + 1)
                if cur is None or cand > cur[0]:
                    table[k + 1] = (cand, es + ((i, j),))
        return table

    table = solve((1 << m) - 1)
    solve.cache_clear()
    top = max(table)
    return [(table[k][0], Matching(table[k][1])) if k in table else None for k in range(top + 1)]


# --- bipartite degree-capacitated selection ----------------------------------

def max_weight_bipartite_b_matching(left_caps, right_caps, cost) -> tuple:
    """Select ``(i, j)`` pairs maximizing total cost under degree capacities.

    ``cost[i][j]`` is a non-negative Fraction, or ``None`` for a forbidden pair.
    Left node ``i`` is used at most ``left_caps[i]`` times and right node ``j``
    at most ``right_caps[j]`` times; each pair at most once.  Solved as a
    min-cost flow by successive shortest paths (Bellman-Ford on the residual
    graph), stopping once no path has positive gain.

    Returns ``(sorted list of pairs, total cost)``.
    """
    nl, nr = len(left_caps), len(right_caps)
    src, snk = nl + nr, nl + nr + 1
    nn = nl + nr + 2
    # residual arcs: [to, cap, cost, rev_index]
    graph = [[] for _ in range(nn)]

    def add(u, v, cap, c):
        graph[u].append([v, cap, c, len(graph[v])])
        graph[v].append([u, 0, -c, len(graph[u]) - 1])

    for i, cap in enumerate(left_caps):
        if cap < 0:
            raise ValueError("capacities must be non-negative")
        if cap:
            add(src, i, cap, Fraction(0))
    for j, cap in enumerate(right_caps):
        if cap < 0:
            raise ValueError("capacities must be non-negative")
        if cap:
            add(nl + j, snk, cap, Fraction(0))
    pair_arc = {}
    for i in range(nl):
        for j in range(nr):
            c = cost[i][j]
            if c is None:
                continue
            c = Fraction(c)
            if c < 0:
                raise ValueError("costs must be non-negative")
            pair_arc[(i, j)] = len(graph[i])
            add(i, nl + j, 1, -c)

    while True:
        dist = [None] * nn
        prev = [None] * nn
        dist[src] = Fraction(0)
        for _ in range(nn):
            changed = False
            for u in range(nn):
                du = dist[u]
                if du is None:
                    continue
                for idx, (v, cap, c, _r) in enumerate(graph[u]):
                    if cap > 0 and (dist[v] is None or du + c < dist[v]):
                        dist[v] = du + c
                        prev[v] = (u, idx)
                        changed = True
            if not changed:
                break
        if dist[snk] is None or dist[snk] >= 0:
            break
        v = snk
        while v != src:
            u, idx = prev[v]
            arc = graph[u][idx]
            arc[1] -= 1
            graph[v][arc[3]][1] += 1
            v = u

    chosen = sorted(p for p, idx in pair_arc.items() if graph[p[0]][idx][1] == 0)
    total = sum((Fraction(cost[i][j]) for i, j in chosen), Fraction(0))
    return chosen, total
