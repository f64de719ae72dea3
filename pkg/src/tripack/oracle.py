"""Brute-force reference solvers.

These are deliberately naive and share no code with the algorithms they
check.  ``opt_3pp`` memoizes on the set of uncovered vertices (otherwise the
n = 12 corpus would take hours); ``enumerate_packings`` is the plain generator
it is tested against.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction

from .core import Instance, StarPacking, ThreePathPacking
from .matching import WeightedGraph, subset_dp_profile


class OracleLimitExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OracleLimits:
    max_n_packing: int = 12
    max_m_matching: int = 12
    max_lg_star: int = 10

    @classmethod
    def from_env(cls, env=None) -> "OracleLimits":
        """Read ``TRIPACK_ORACLE_LIMIT``.

        A bare integer sets the packing limit; otherwise a comma list such as
        ``packing=15,matching=14,star=12``.
        """
        raw = (os.environ if env is None else env).get("TRIPACK_ORACLE_LIMIT", "").strip()
        if not raw:
            return cls()
        if raw.isdigit():
            return cls(max_n_packing=int(raw))
        keys = {"packing": "max_n_packing", "matching": "max_m_matching", "star": "max_lg_star"}
        kw = {}
        for part in raw.split(","):
            name, _, val = part.partition("=")
            name = name.strip()
            if name not in keys or not val.strip().isdigit():
                raise ValueError(f"bad TRIPACK_ORACLE_LIMIT entry {part!r}")
            kw[keys[name]] = int(val)
        return cls(**kw)


def _canonical_triple(x, y, z):
    return (x, y, z) if x < z else (z, y, x)


def opt_3pp(instance: Instance, limits: OracleLimits | None = None):
    """Maximum-weight perfect 3-path packing and its weight.

    Ties go to the lexicographically smallest encoding: paths listed by their
    lowest vertex, each written ``(x, center, z)`` with ``x < z``.
    """
    limits = limits or OracleLimits.from_env()
    n = instance.n
    if n > limits.max_n_packing:
        raise OracleLimitExceeded(f"n={n} exceeds oracle packing limit {limits.max_n_packing}")
    W = instance.weights
    memo = {0: (Fraction(0), ())}

    def best(mask):
        hit = memo.get(mask)
        if hit is not None:
            return hit
        i = (mask & -mask).bit_length() - 1
        rest = [v for v in range(i + 1, n) if mask >> v & 1]
        top = None
        for a, b in itertools.combinations(rest, 2):
            sub_w, sub_enc = best(mask & ~(1 << i | 1 << a | 1 << b))
            for x, y, z in ((a, i, b), (i, a, b), (i, b, a)):
                cand_w = W[x][y] + W[y][z] + sub_w
                cand_enc = (_canonical_triple(x, y, z),) + sub_enc
                if top is None or cand_w > top[0] or (cand_w == top[0] and cand_enc < top[1]):
                    top = (cand_w, cand_enc)
        memo[mask] = top
        return top

    value, enc = best((1 << n) - 1)
    return ThreePathPacking(enc), value


def enumerate_packings(n: int):
    """Every perfect 3-path packing of ``range(n)``, as tuples of ``(x, y, z)``."""

    def rec(remaining):
        if not remaining:
            yield ()
            return
        i, others = remaining[0], remaining[1:]
        for a, b in itertools.combinations(others, 2):
            left = [v for v in others if v != a and v != b]
            for tail in rec(left):
                for trip in ((a, i, b), (i, a, b), (i, b, a)):
                    yield (trip,) + tail

    yield from rec(list(range(n)))


def opt_matching_size_p(g: WeightedGraph, p: int, limits: OracleLimits | None = None) -> Fraction:
    limits = limits or OracleLimits.from_env()
    if g.m > limits.max_m_matching:
        raise OracleLimitExceeded(f"m={g.m} exceeds oracle matching limit {limits.max_m_matching}")
    if p == 0:
        return Fraction(0)
    prof = subset_dp_profile(g)
    if p >= len(prof) or prof[p] is None:
        raise ValueError(f"no matching of size {p}")
    return prof[p][0]


def opt_2star_packing(instance: Instance, vertices, limits: OracleLimits | None = None,
                      covering: bool = False):
    """Maximum weight over all 2-star packings of ``G[vertices]``.

    Vertices may stay outside every star unless ``covering`` is set.  Returns
    ``(weight, StarPacking)``; the packing is ``None`` when no covering packing
    exists.
    """
    limits = limits or OracleLimits.from_env()
    vs = sorted(vertices)
    if len(vs) > limits.max_lg_star:
        raise OracleLimitExceeded(f"{len(vs)} vertices exceed star oracle limit {limits.max_lg_star}")
    W = instance.weights
    best = [None, None]

    def rec(remaining, acc_w, acc):
        if not remaining:
            if best[0] is None or acc_w > best[0]:
                best[0], best[1] = acc_w, list(acc)
            return
        i, others = remaining[0], remaining[1:]
        if not covering:
            rec(others, acc_w, acc)
        for a in others:
            left = [v for v in others if v != a]
            acc.append((i, (a,)))
            rec(left, acc_w + W[i][a], acc)
            acc.pop()
        for a, b in itertools.combinations(others, 2):
            left = [v for v in others if v != a and v != b]
            for c, l1, l2 in ((i, a, b), (a, i, b), (b, i, a)):
                acc.append((c, (l1, l2)))
                rec(left, acc_w + W[c][l1] + W[c][l2], acc)
                acc.pop()

    rec(vs, Fraction(0), [])
    if best[0] is None:
        return Fraction(0), None
    return best[0], StarPacking(best[1])


def opt_2feasible_arc_set(instance: Instance, vertices, max_vertices: int = 7):
    """Maximum weight 2-feasible arc set on ``G[vertices]`` by exhaustion.

    Every vertex picks its single in-neighbour (or none); choices breaking the
    out-degree bound of 2 are discarded.  Returns ``(weight, arcs)``.
    """
    vs = sorted(vertices)
    k = len(vs)
    if k > max_vertices:
        raise OracleLimitExceeded(f"{k} vertices exceed arc-set oracle limit {max_vertices}")
    W = instance.weights
    options = [[None] + [u for u in vs if u != v] for v in vs]
    best_w, best_arcs = Fraction(0), ()
    for parents in itertools.product(*options):
        out = {}
        ok = True
        total = Fraction(0)
        for v, u in zip(vs, parents):
            if u is None:
                continue
            c = out.get(u, 0) + 1
            if c > 2:
                ok = False
                break
            out[u] = c
            total += W[u][v]
        if ok and total > best_w:
            best_w = total
            best_arcs = tuple((u, v) for v, u in zip(vs, parents) if u is not None)
    return best_w, best_arcs
