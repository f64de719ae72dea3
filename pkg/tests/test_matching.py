import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tripack.core import Matching, fig1_instance
from tripack.matching import (InfeasibleMatching, WeightedGraph, matching_profile,
                              max_weight_bipartite_b_matching, max_weight_matching_exact_size,
                              max_weight_matching_free, subset_dp_profile)


def brute_profile(g):
    """Best cost per size by enumerating every edge subset; tiny graphs only."""
    edges = sorted(g.cost)
    best = {}
    for r in range(len(edges) + 1):
        for sub in itertools.combinations(edges, r):
            vs = [v for e in sub for v in e]
            if len(vs) != len(set(vs)):
                continue
            c = sum((g.cost[e] for e in sub), Fraction(0))
            if r not in best or c > best[r]:
                best[r] = c
    return best


def fig1_graph():
    return WeightedGraph.complete(fig1_instance().weights)


def test_fig1_exact_sizes():
    g = fig1_graph()
    r3 = max_weight_matching_exact_size(g, 3)
    assert r3.total_cost == 3
    assert r3.matching == Matching([(0, 1), (2, 3), (4, 5)])
    assert max_weight_matching_exact_size(g, 2).total_cost == 2


def test_negative_k4():
    cost = {(u, v): Fraction(-2) for u, v in itertools.combinations(range(4), 2)}
    cost[(0, 1)] = Fraction(-1)
    r = max_weight_matching_exact_size(WeightedGraph(4, cost), 2)
    assert r.total_cost == -3
    assert r.matching == Matching([(0, 1), (2, 3)])


def test_size_too_large():
    with pytest.raises(InfeasibleMatching):
        max_weight_matching_exact_size(WeightedGraph(3, {(0, 1): Fraction(1)}), 2)


def test_free_matching_cases():
    neg = WeightedGraph(4, {e: Fraction(-1) for e in itertools.combinations(range(4), 2)})
    r = max_weight_matching_free(neg)
    assert r.total_cost == 0 and len(r.matching) == 0
    assert max_weight_matching_free(fig1_graph()).total_cost == 3
    one = max_weight_matching_free(WeightedGraph(2, {(0, 1): Fraction(5)}))
    assert one.total_cost == 5 and one.matching == Matching([(0, 1)])


def test_profile_entries_have_claimed_size():
    g = WeightedGraph.complete([[0, 3, 1, 2], [3, 0, 2, 2], [1, 2, 0, 4], [2, 2, 4, 0]])
    for p, res in enumerate(matching_profile(g)):
        assert len(res.matching) == p
        assert g.matching_cost(res.matching.edges) == res.total_cost


@st.composite
def small_graphs(draw):
    m = draw(st.integers(2, 6))
    cost = {}
    for e in itertools.combinations(range(m), 2):
        if draw(st.booleans()) or m <= 3:
            cost[e] = Fraction(draw(st.integers(-6, 6)), draw(st.sampled_from([1, 2, 3])))
    return WeightedGraph(m, cost)


@given(small_graphs())
def test_engine_and_subset_dp_agree_with_edge_enumeration(g):
    ref = brute_profile(g)
    dp = subset_dp_profile(g)
    eng = matching_profile(g)
    for p, c in ref.items():
        assert dp[p][0] == c
        assert eng[p].total_cost == c
    assert len(eng) == max(ref) + 1


def test_engine_matches_subset_dp_on_random_graphs_up_to_12():
    rng = random.Random(3)
    for _ in range(40):
        m = rng.randint(2, 12)
        cost = {e: Fraction(rng.randint(-20, 20)) for e in itertools.combinations(range(m), 2)
                if rng.random() < 0.7}
        g = WeightedGraph(m, cost)
        dp = subset_dp_profile(g)
        eng = matching_profile(g)
        assert [r.total_cost for r in eng] == [d[0] for d in dp if d is not None]


def test_b_matching_examples():
    pairs, total = max_weight_bipartite_b_matching([2, 1], [1, 1], [[0, 0], [0, 0]])
    assert total == 0
    pairs, total = max_weight_bipartite_b_matching([2], [1, 1, 1], [[3, 2, 1]])
    assert total == 5 and pairs == [(0, 0), (0, 1)]


def test_b_matching_rejects_negative_cost():
    with pytest.raises(ValueError):
        max_weight_bipartite_b_matching([1], [1], [[-1]])


def test_b_matching_against_enumeration():
    rng = random.Random(11)
    for _ in range(30):
        left, right = rng.randint(1, 3), rng.randint(1, 4)
        lc = [rng.randint(0, 2) for _ in range(left)]
        rc = [rng.randint(1, 2) for _ in range(right)]
        cost = [[Fraction(rng.randint(0, 9)) if rng.random() < 0.8 else None for _ in range(right)]
                for _ in range(left)]
        pairs, total = max_weight_bipartite_b_matching(lc, rc, cost)
        assert all(sum(1 for a, _ in pairs if a == i) <= lc[i] for i in range(left))
        assert all(sum(1 for _, b in pairs if b == j) <= rc[j] for j in range(right))
        keys = [(i, j) for i in range(left) for j in range(right) if cost[i][j] is not None]
        best = Fraction(0)
        for r in range(len(keys) + 1):
            for sub in itertools.combinations(keys, r):
                if all(sum(1 for a, _ in sub if a == i) <= lc[i] for i in range(left)) and \
                        all(sum(1 for _, b in sub if b == j) <= rc[j] for j in range(right)):
                    best = max(best, sum((cost[i][j] for i, j in sub), Fraction(0)))
        assert total == best
