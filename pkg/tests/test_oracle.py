import itertools

import pytest

from tripack.core import Instance, ThreePathPacking, weight_of
from tripack.matching import WeightedGraph
from tripack.oracle import (OracleLimitExceeded, OracleLimits, enumerate_packings, opt_2feasible_arc_set,
                            opt_2star_packing, opt_3pp, opt_matching_size_p)

from conftest import ab_bc_instance, random_instance


def test_fig1_opt(fig1):
    packing, opt = opt_3pp(fig1)
    assert opt == 2 and weight_of(fig1, packing) == 2


def test_zero_opt(zero6):
    assert opt_3pp(zero6)[1] == 0


def test_ab_bc_opt():
    assert opt_3pp(ab_bc_instance())[1] == 15


def test_enumeration_counts():
    # n!/((3!)^k k!) * 3^k perfect packings
    assert sum(1 for _ in enumerate_packings(6)) == 10 * 9
    assert sum(1 for _ in enumerate_packings(9)) == 280 * 27


def test_memo_dp_matches_plain_enumeration():
    for seed in range(15):
        inst = random_instance(9 if seed % 3 else 6, seed, bound=9)
        best = max(weight_of(inst, ThreePathPacking(p)) for p in enumerate_packings(inst.n))
        assert opt_3pp(inst)[1] == best


def test_limits(monkeypatch):
    with pytest.raises(OracleLimitExceeded):
        opt_3pp(random_instance(15, 0), OracleLimits(max_n_packing=12))
    assert OracleLimits.from_env({"TRIPACK_ORACLE_LIMIT": "15"}).max_n_packing == 15
    lim = OracleLimits.from_env({"TRIPACK_ORACLE_LIMIT": "packing=9,star=8"})
    assert (lim.max_n_packing, lim.max_lg_star) == (9, 8)
    with pytest.raises(ValueError):
        OracleLimits.from_env({"TRIPACK_ORACLE_LIMIT": "bogus=1"})


def test_matching_oracle(fig1):
    g = WeightedGraph.complete(fig1.weights)
    assert opt_matching_size_p(g, 3) == 3
    assert opt_matching_size_p(g, 0) == 0
    k4 = {e: -2 for e in itertools.combinations(range(4), 2)}
    k4[(0, 1)] = -1
    assert opt_matching_size_p(WeightedGraph(4, k4), 2) == -3


def test_star_oracle(fig1):
    assert opt_2star_packing(fig1, [0, 1, 2, 3])[0] == 2
    zero = Instance(3, [[0] * 3 for _ in range(3)])
    assert opt_2star_packing(zero, [0, 1, 2])[0] == 0
    path = Instance.from_edges(3, {(0, 1): 5, (1, 2): 4})
    w, s = opt_2star_packing(path, [0, 1, 2])
    assert w == 9 and s.stars == ((1, (0, 2)),)


def test_star_oracle_covering_can_be_lower():
    # path x-y-z-u with weights 2, 4, 3: the covering optimum must split it
    inst = Instance.from_edges(6, {(0, 1): 2, (1, 2): 4, (2, 3): 3})
    assert opt_2star_packing(inst, [0, 1, 2, 3], covering=True)[0] == 5
    assert opt_2star_packing(inst, [0, 1, 2, 3])[0] == 7


def test_arc_set_oracle(fig1):
    w, arcs = opt_2feasible_arc_set(fig1, [0, 1, 2, 3])
    assert w == 4 and sorted(arcs) == [(0, 1), (1, 0), (2, 3), (3, 2)]
    two = Instance.from_edges(3, {(0, 1): 3})
    assert opt_2feasible_arc_set(two, [0, 1])[0] == 6
