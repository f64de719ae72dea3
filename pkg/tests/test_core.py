import json
from fractions import Fraction

import pytest

from tripack.core import (ArcSet, Instance, InstanceError, InvalidSolution, Matching, StarPacking,
                          ThreePathPacking, best_orientation, group_residuals, instance_to_json,
                          load_instance, parse_instance, save_instance, to_rational,
                          validate_packing, weight_of)


def test_fig1_has_three_unit_edges(fig1):
    unit = [(u, v) for u in range(6) for v in range(u + 1, 6) if fig1.w(u, v) == 1]
    assert unit == [(0, 1), (2, 3), (4, 5)]
    assert fig1.total_weight() == 3


def test_zero_n3_is_valid():
    assert Instance(3, [[0] * 3 for _ in range(3)]).n == 3


@pytest.mark.parametrize("n", [0, 4, 5, 7])
def test_n_not_multiple_of_three_rejected(n):
    with pytest.raises(InstanceError):
        Instance(n, [[0] * n for _ in range(n)])


def test_rejects_asymmetric_negative_and_diagonal():
    with pytest.raises(InstanceError, match="asymmetric"):
        Instance(3, [[0, 1, 0], [2, 0, 0], [0, 0, 0]])
    with pytest.raises(InstanceError, match="negative"):
        Instance(3, [[0, -1, 0], [-1, 0, 0], [0, 0, 0]])
    with pytest.raises(InstanceError, match="diagonal"):
        Instance(3, [[1, 0, 0], [0, 0, 0], [0, 0, 0]])


def test_floats_are_refused():
    with pytest.raises(InstanceError):
        to_rational(0.5)
    assert to_rational("3/4") == Fraction(3, 4)


def test_weight_of_fig1_packing(fig1):
    # (e,a,b), (c,d,f)
    assert weight_of(fig1, ThreePathPacking([(4, 0, 1), (2, 3, 5)])) == 2


def test_weight_of_empty_matching(fig1):
    assert weight_of(fig1, Matching(())) == 0


def test_weight_of_single_path():
    inst = Instance.from_edges(3, {(0, 1): 5, (0, 2): 2, (1, 2): 4})
    assert weight_of(inst, ThreePathPacking([(0, 1, 2)])) == 9


def test_weight_of_stars_and_arcs(fig1):
    assert weight_of(fig1, StarPacking([(0, (1,)), (2, (3,))])) == 2
    assert weight_of(fig1, ArcSet([(0, 1), (1, 0)])) == 2


def test_weight_of_rejects_overlap(fig1):
    with pytest.raises(InvalidSolution):
        weight_of(fig1, ThreePathPacking([(0, 1, 2), (2, 3, 4)]))


def test_validate_packing(fig1):
    assert validate_packing(fig1, ThreePathPacking([(0, 1, 2), (3, 4, 5)])) == []
    bad = validate_packing(fig1, ThreePathPacking([(0, 1, 2), (2, 4, 5)]))
    assert any("vertex reused" in m for m in bad)
    short = validate_packing(fig1, ThreePathPacking([(0, 1, 2)]))
    assert any("not perfect" in m for m in short)


def test_arc_set_feasibility():
    assert ArcSet([(0, 1), (0, 2), (1, 0)]).is_two_feasible()
    assert not ArcSet([(0, 1), (2, 1)]).is_two_feasible()
    assert not ArcSet([(0, 1), (0, 2), (0, 3)]).is_two_feasible()


def test_json_and_text_round_trip(tmp_path, fig1):
    p = tmp_path / "f.json"
    save_instance(fig1, p)
    assert load_instance(p) == fig1
    q = tmp_path / "f.txt"
    save_instance(fig1, q, compact=True)
    assert load_instance(q) == fig1
    frac = Instance.from_edges(3, {(0, 1): Fraction(1, 3)})
    assert parse_instance(json.dumps(instance_to_json(frac))) == frac


@pytest.mark.parametrize("text", ["", "{bad json", '{"n": 3}', "3\n1 2", "x 1 2 3"])
def test_parse_errors(text):
    with pytest.raises(InstanceError):
        parse_instance(text)


def test_best_orientation_keeps_centre_on_ties(fig1):
    assert best_orientation(fig1, 0, 2, 4) == (0, 2, 4)
    assert best_orientation(fig1, 2, 0, 1) == (2, 0, 1)
    assert best_orientation(fig1, 0, 4, 5) == (0, 4, 5)


def test_group_residuals(fig1):
    paths = group_residuals(fig1, [5, 4, 3])
    assert len(paths) == 1 and fig1.path_weight(paths[0]) == 1
    with pytest.raises(InvalidSolution):
        group_residuals(fig1, [1, 2])


def test_labels():
    assert ThreePathPacking([(3, 4, 5), (0, 1, 2)]).labels(6) == [1, 1, 1, 0, 0, 0]
