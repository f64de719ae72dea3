import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tripack.alg3 import (ARCSET_RATIO, StarBackendError, alg3_trace, arcset_star_packing,
                          exact_star_packing, max_weight_2feasible_arc_set, packing_weight,
                          run_alg3, two_star_packing)
from tripack.core import Instance, validate_packing, weight_of
from tripack.oracle import opt_2feasible_arc_set, opt_2star_packing

from conftest import random_instance


def test_fig1_arc_set(fig1):
    arcs, w = max_weight_2feasible_arc_set(fig1, [0, 1, 2, 3])
    assert w == 4 and arcs.is_two_feasible()
    assert sorted(arcs.arcs) == [(0, 1), (1, 0), (2, 3), (3, 2)]


def test_zero_and_two_vertex_arc_sets(zero6):
    assert max_weight_2feasible_arc_set(zero6, [0, 1, 2, 3])[1] == 0
    two = Instance.from_edges(3, {(0, 1): 3})
    arcs, w = max_weight_2feasible_arc_set(two, [0, 1])
    assert w == 6 and sorted(arcs.arcs) == [(0, 1), (1, 0)]


def test_fig1_stars(fig1):
    for backend in ("exact", "arcset"):
        s = two_star_packing(fig1, [0, 1, 2, 3], backend)
        assert sorted(s.stars) == [(0, (1,)), (2, (3,))]
        assert packing_weight(fig1, s) == 2 >= ARCSET_RATIO * 4


def test_path_host_takes_two_leaf_star():
    inst = Instance.from_edges(3, {(0, 1): 5, (1, 2): 4})
    for backend in ("exact", "arcset"):
        s = two_star_packing(inst, [0, 1, 2], backend)
        assert packing_weight(inst, s) == 9
        assert s.stars == ((1, (0, 2)),)


def test_bad_backend(fig1):
    with pytest.raises(StarBackendError):
        two_star_packing(fig1, [0, 1, 2, 3], "simplex")
    with pytest.raises(StarBackendError):
        two_star_packing(fig1, list(range(6)), "exact", exact_limit=4)


def test_fig1_and_zero(fig1, zero6):
    assert weight_of(fig1, run_alg3(fig1, "exact")) == 2
    p = run_alg3(zero6)
    assert validate_packing(zero6, p) == [] and weight_of(zero6, p) == 0


def test_arc_set_matches_exhaustion():
    rng = random.Random(5)
    for _ in range(30):
        inst = random_instance(6, rng.randrange(10**6), bound=12)
        k = rng.randint(2, 6)
        vs = sorted(rng.sample(range(6), k))
        arcs, w = max_weight_2feasible_arc_set(inst, vs)
        assert arcs.is_two_feasible() and weight_of(inst, arcs) == w
        assert w == opt_2feasible_arc_set(inst, vs)[0]


@given(st.integers(0, 10**6), st.integers(2, 9))
def test_exact_backend_is_optimal(seed, k):
    inst = random_instance(9, seed, bound=15)
    vs = list(range(k))
    s = exact_star_packing(inst, vs)
    assert packing_weight(inst, s) == opt_2star_packing(inst, vs)[0]


@given(st.integers(0, 10**6), st.integers(2, 12))
def test_unguarded_arcset_meets_four_ninths(seed, k):
    inst = random_instance(12, seed, bound=rng_bound(seed))
    vs = list(range(k))
    _, a = max_weight_2feasible_arc_set(inst, vs)
    s = arcset_star_packing(inst, vs)
    assert packing_weight(inst, s) >= Fraction(4, 9) * a


def rng_bound(seed):
    return (1, 3, 100)[seed % 3]


@given(st.integers(0, 10**6), st.sampled_from([3, 6, 9, 12]), st.sampled_from(["auto", "arcset"]))
def test_output_is_valid_and_covers_stars(seed, n, backend):
    inst = random_instance(n, seed, bound=25)
    t = alg3_trace(inst, backend)
    assert validate_packing(inst, t.packing) == []
    assert weight_of(inst, t.packing) >= t.stars_weight >= ARCSET_RATIO * t.arcs_weight
