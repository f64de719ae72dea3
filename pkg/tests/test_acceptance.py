"""Acceptance criteria 1-7, one PASS/FAIL line each.

Run with pytest, or directly: ``python tests/test_acceptance.py``.
"""

import functools
import io
import itertools
import random
import sys
import time
from contextlib import redirect_stdout
from fractions import Fraction

import pytest

from tripack import lpcert
from tripack.alg1 import run_alg1
from tripack.alg3 import (ARCSET_RATIO, alg3_trace, arcset_star_packing, exact_star_packing,
                          max_weight_2feasible_arc_set, packing_weight)
from tripack.analysis import RATIO, check_lemma_suite, refuted_bound
from tripack.cli import main as cli_main
from tripack.core import fig1_instance, weight_of
from tripack.generate import GeneratorSpec, generate
from tripack.matching import (WeightedGraph, matching_profile, max_weight_matching_exact_size,
                              subset_dp_profile)
from tripack.oracle import opt_2feasible_arc_set, opt_2star_packing, opt_3pp

F = Fraction
UNIFORM_PER_N = 500
ZERO_ONE = 200
LEMMA_BUDGET_S = 600


# ---- corpus shared by criteria 4, 5 and 7 ----------------------------------------------

def _corpus_specs():
    for n in (6, 9, 12):
        spec = GeneratorSpec("uniform-int", n, 100, seed=1000 * n)
        for i in range(UNIFORM_PER_N):
            yield f"uniform-n{n}-{i}", spec, i
    spec = GeneratorSpec("zero-one", 6, seed=7)
    for i in range(ZERO_ONE // 2):
        yield f"zero-one-n6-{i}", spec, i
    spec = GeneratorSpec("zero-one", 9, seed=70)
    for i in range(ZERO_ONE // 2):
        yield f"zero-one-n9-{i}", spec, i


@functools.lru_cache(maxsize=None)
def corpus_results():
    rows = []
    t0 = time.perf_counter()
    lemma_seconds = 0.0
    for name, spec, i in _corpus_specs():
        inst = generate(spec, i)
        s0 = time.perf_counter()
        rep = check_lemma_suite(inst, name)
        lemma_seconds += time.perf_counter() - s0
        t3 = alg3_trace(inst)
        lg = t3.lg
        unguarded = arcset_star_packing(inst, lg)
        s_star = opt_2star_packing(inst, lg)[0]
        rows.append({
            "name": name,
            "failures": rep.failures,
            "failed": [c.name for c in rep.checks if not c.ok] + rep.lp_violations,
            "best": max(rep.weights.values()),
            "opt": rep.opt,
            "stars": t3.stars_weight,
            "unguarded": packing_weight(inst, unguarded),
            "arcs": t3.arcs_weight,
            "exact": packing_weight(inst, exact_star_packing(inst, lg)),
            "s_star": s_star,
        })
    return rows, lemma_seconds, time.perf_counter() - t0


# ---- criteria -------------------------------------------------------------------------

def criterion_1():
    buf = io.StringIO()
    t0 = time.perf_counter()
    with redirect_stdout(buf):
        code = cli_main(["verify-cert"])
    elapsed = time.perf_counter() - t0
    out = buf.getvalue()
    rows = sum(1 for line in out.splitlines() if line.endswith("pass"))
    dual = lpcert.verify_dual()
    ok = (code == 0 and rows == 43 and "objective: 10/17" in out and dual.feasible
          and dual.objective == F(10, 17) and not lpcert.transcription_mismatches() and elapsed < 1)
    return ok, f"exit={code} dual rows passed={rows}/43 objective={dual.objective} time={elapsed:.3f}s"


def criterion_2():
    r = lpcert.verify_worst_case_point()
    ok = r.feasible and r.c1 == r.c2 == r.c3 == F(10, 17)
    return ok, f"feasible={r.feasible} c1={r.c1} c2={r.c2} c3={r.c3}"


def criterion_3():
    t0 = time.perf_counter()
    inst = fig1_instance()
    m2 = max_weight_matching_exact_size(WeightedGraph.complete(inst.weights), 3).total_cost
    opt = opt_3pp(inst)[1]
    w1 = weight_of(inst, run_alg1(inst))
    bound, _ = refuted_bound(inst)
    elapsed = time.perf_counter() - t0
    ok = m2 == 3 and opt == 2 and w1 == 2 and bound == F(5, 2) and bound > opt and elapsed < 1
    return ok, f"w(M*_n/2)={m2} OPT={opt} alg1={w1} refuted bound={bound} time={elapsed:.3f}s"


def criterion_4():
    rows, lemma_s, _ = corpus_results()
    bad = [r for r in rows if r["failures"]]
    n_uniform = sum(r["name"].startswith("uniform") for r in rows)
    n01 = len(rows) - n_uniform
    ok = not bad and n_uniform >= 3 * 500 and n01 >= 200 and lemma_s <= LEMMA_BUDGET_S
    detail = f"instances={len(rows)} (uniform {n_uniform}, zero-one {n01}) failures={len(bad)} time={lemma_s:.1f}s"
    if bad:
        detail += f" first={bad[0]['name']}:{bad[0]['failed']}"
    return ok, detail


def criterion_5():
    rows, _, _ = corpus_results()
    below = [r for r in rows if r["best"] < RATIO * r["opt"]]
    ratios = [r["best"] / r["opt"] for r in rows if r["opt"]]
    return not below, f"instances={len(rows)} below floor={len(below)} min ratio={min(ratios)}"


def _random_cost_graph(rng, m, negative):
    lo = -30 if negative else 0
    dense = rng.random() < 0.5
    cost = {e: F(rng.randint(lo, 30), rng.choice((1, 2, 3)))
            for e in itertools.combinations(range(m), 2) if dense or rng.random() < 0.6}
    return WeightedGraph(m, cost)


def criterion_6():
    rng = random.Random(2024)
    graphs = mismatches = negatives = 0
    for k in range(240):
        m = rng.randint(2, 12)
        neg = k % 2 == 0
        g = _random_cost_graph(rng, m, neg)
        graphs += 1
        negatives += any(c < 0 for c in g.cost.values())
        eng = [r.total_cost for r in matching_profile(g)]
        dp = [entry[0] for entry in subset_dp_profile(g) if entry is not None]
        mismatches += eng != dp
    arc_graphs = arc_bad = 0
    for k in range(120):
        n = 6
        inst = generate(GeneratorSpec("uniform-int", n, (1, 5, 100)[k % 3], seed=31), k)
        vs = sorted(rng.sample(range(n), rng.randint(2, 6)))
        arcs, w = max_weight_2feasible_arc_set(inst, vs)
        arc_graphs += 1
        arc_bad += (w != opt_2feasible_arc_set(inst, vs)[0] or not arcs.is_two_feasible()
                    or weight_of(inst, arcs) != w)
    ok = graphs >= 200 and negatives > 0 and not mismatches and arc_graphs >= 100 and not arc_bad
    return ok, (f"matching graphs={graphs} (with negative costs {negatives}) mismatches={mismatches}; "
                f"arc-set graphs={arc_graphs} mismatches={arc_bad}")


def criterion_7():
    rows, _, _ = corpus_results()
    below = [r["name"] for r in rows
             if r["stars"] < ARCSET_RATIO * r["arcs"] or r["unguarded"] < ARCSET_RATIO * r["arcs"]]
    exact_bad = [r["name"] for r in rows if r["exact"] != r["s_star"]]
    checked = len(rows)
    rng = random.Random(77)
    for k in range(20):
        inst = generate(GeneratorSpec("uniform-int", 15, (3, 100)[k % 2], seed=500), k)
        vs = sorted(rng.sample(range(15), 10))
        a = max_weight_2feasible_arc_set(inst, vs)[1]
        ex = packing_weight(inst, exact_star_packing(inst, vs))
        un = packing_weight(inst, arcset_star_packing(inst, vs))
        if ex < ARCSET_RATIO * a or un < ARCSET_RATIO * a:
            below.append(f"host10-{k}")
        if ex != opt_2star_packing(inst, vs)[0]:
            exact_bad.append(f"host10-{k}")
        checked += 1
    ok = not below and not exact_bad
    return ok, f"hosts={checked} below 4/9={len(below)} exact != brute force={len(exact_bad)}"


CRITERIA = {
    1: ("dual certificate", criterion_1),
    2: ("worst-case point", criterion_2),
    3: ("counterexample regression", criterion_3),
    4: ("lemma suite", criterion_4),
    5: ("ratio floor", criterion_5),
    6: ("oracle equivalence", criterion_6),
    7: ("star-packing contract", criterion_7),
}


def _line(num, ok, detail):
    return f"criterion {num} ({CRITERIA[num][0]}): {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.fixture
def emit(capsys):
    def _emit(text):
        with capsys.disabled():
            print("\n" + text)
    return _emit


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num, emit):
    ok, detail = CRITERIA[num][1]()
    emit(_line(num, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for num, (_, fn) in CRITERIA.items():
        ok, detail = fn()
        results.append(ok)
        print(_line(num, ok, detail), flush=True)
    sys.exit(0 if all(results) else 1)
