"""Per-instance verification of the approximation analysis.

Given an optimal packing and the maximum-weight matchings, this module builds
the path classes, the edge splits and the matching splits used by the bounds,
evaluates every bound exactly, and maps the instance to a point of the
trade-off LP.  Contracted costs are recomputed here from their definition
rather than read from the algorithms' internals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .alg1 import alg1_even, run_alg1
from .alg2 import alg2_trace
from .alg3 import alg3_trace
from .core import Instance, Matching, ThreePathPacking, edge, format_rational, weight_of
from .matching import SUBSET_DP_LIMIT, WeightedGraph, max_weight_matching_exact_size, subset_dp_profile
from .oracle import OracleLimits, opt_3pp

RATIO = Fraction(10, 17)


class AnalysisError(RuntimeError):
    """An internal invariant of the decomposition broke."""


def path_edges(path) -> tuple:
    x, y, z = path
    return edge(x, y), edge(y, z)


def _w(instance: Instance, edges) -> Fraction:
    return sum((instance.weights[u][v] for u, v in edges), Fraction(0))


def sum_of_max(instance: Instance, paths) -> Fraction:
    W = instance.weights
    return sum((max(W[x][y], W[y][z]) for x, y, z in paths), Fraction(0))


def normalize_pstar(instance: Instance, pstar: ThreePathPacking, m: Matching) -> ThreePathPacking:
    """Rewrite ``x-y-z`` as ``x-z-y`` whenever ``y`` is unmatched and ``xz`` is a matching edge."""
    covered, medges = m.vertices(), m.edges
    out = []
    for x, y, z in pstar.paths:
        if y not in covered and x in covered and z in covered and edge(x, z) in medges:
            out.append((x, z, y))
        else:
            out.append((x, y, z))
    result = ThreePathPacking(out)
    if weight_of(instance, result) != weight_of(instance, pstar):
        raise AnalysisError("rewriting the optimum changed its weight; the matching is not optimal")
    return result


@dataclass
class Decomposition:
    """Path classes 1..8 and the edge and matching splits derived from them."""

    class_of_path: dict
    paths: dict
    X: dict
    Y: dict
    middle: dict
    M: dict
    M1: dict
    E: dict


def classify(path, covered: frozenset, medges: frozenset) -> int:
    x, y, z = path
    k = sum(v in covered for v in path)
    in_m = sum(e in medges for e in path_edges(path))
    if k == 0:
        return 1
    if k == 1:
        return 3 if y in covered else 2
    if k == 2:
        if y not in covered:
            return 4
        return 5 if in_m == 1 else 6
    return 7 if in_m == 1 else 8


def _split_path(instance: Instance, path, cls: int, covered, medges) -> tuple:
    x, y, z = path
    xy, yz = path_edges(path)
    W = instance.weights
    if cls in (1, 3, 4, 8):
        first = xy if W[x][y] >= W[y][z] else yz
    elif cls == 2:
        first = xy if x in covered else yz
    elif cls in (5, 7):
        first = yz if xy in medges else xy
    else:
        first = yz if x in covered else xy
    return first, (yz if first == xy else xy)


def decompose(instance: Instance, pstar: ThreePathPacking, m: Matching) -> Decomposition:
    covered, medges = m.vertices(), m.edges
    cls_of = {}
    paths = {i: [] for i in range(1, 9)}
    X = {i: [] for i in range(1, 9)}
    Y = {i: [] for i in range(1, 9)}
    middle = {i: [] for i in range(1, 9)}
    for p in pstar.paths:
        c = classify(p, covered, medges)
        cls_of[tuple(p)] = c
        paths[c].append(tuple(p))
        a, b = _split_path(instance, p, c, covered, medges)
        X[c].append(a)
        Y[c].append(b)
        for e in path_edges(p):
            if (e[0] in covered) != (e[1] in covered):
                middle[c].append(e)
    if middle[1] or middle[7] or middle[8]:
        raise AnalysisError("middle edge in a class that cannot hold one")

    mate_edge = {v: e for e in medges for v in e}
    touching = {e: {i: 0 for i in range(1, 9)} for e in medges}
    for c, es in middle.items():
        for u, v in es:
            inner = u if u in covered else v
            touching[mate_edge[inner]][c] += 1
    in_p5 = {e for p in paths[5] for e in path_edges(p) if e in medges}
    in_p7 = {e for p in paths[7] for e in path_edges(p) if e in medges}
    M = {i: [] for i in range(1, 6)}
    M1 = {1: [], 2: [], 3: []}
    for e in sorted(medges):
        t = touching[e]
        side = t[2] + t[3] + t[4]
        if t[6]:
            M[1].append(e)
            if t[6] == 1 and side == 0:
                M1[1].append(e)
            elif t[6] == 2 and side == 0:
                M1[2].append(e)
            elif t[6] == 1 and side >= 1:
                M1[3].append(e)
            else:
                raise AnalysisError(f"matching edge {e} touches {t[6]} class-6 and {side} other middle edges")
        elif e in in_p7:
            M[3].append(e)
        elif e in in_p5:
            M[4].append(e)
        elif side:
            M[2].append(e)
        else:
            M[5].append(e)

    E = {
        1: [e for p in paths[6] + paths[8] for e in path_edges(p)],
        2: X[2] + X[3] + X[4] + X[7],
        3: list(X[5]),
    }
    d = Decomposition(cls_of, paths, X, Y, middle, M, M1, E)
    _check_partitions(pstar, m, d)
    return d


def _check_partitions(pstar, m, d: Decomposition):
    if sum(len(v) for v in d.paths.values()) != len(pstar):
        raise AnalysisError("classes do not partition the optimum")
    for i in range(1, 9):
        own = {e for p in d.paths[i] for e in path_edges(p)}
        if set(d.X[i]) | set(d.Y[i]) != own or set(d.X[i]) & set(d.Y[i]):
            raise AnalysisError(f"X/Y split of class {i} is not a partition")
    allm = [e for part in d.M.values() for e in part]
    if sorted(allm) != sorted(m.edges):
        raise AnalysisError("matching parts do not partition the matching")
    if sorted(e for part in d.M1.values() for e in part) != sorted(d.M[1]):
        raise AnalysisError("M1 sub-parts do not partition M1")
    e_all = d.E[1] + d.E[2] + d.E[3]
    if len(set(e_all)) != len(e_all) or set(e_all) & set(m.edges):
        raise AnalysisError("E1, E2, E3 overlap or contain matching edges")


def contracted_cost(instance: Instance, m: Matching, u: int, v: int) -> Fraction:
    """Cost of original edge ``uv`` after contracting the edges of ``m``.

    Both ends matched: weight minus the lighter of the two matching edges.
    One end matched: plain weight.  Neither end matched: undefined.
    """
    W = instance.weights
    mate = m.mate()
    if u in mate and v in mate:
        if mate[u] == v:
            raise AnalysisError(f"edge {(u, v)} is itself contracted")
        return W[u][v] - min(W[u][mate[u]], W[v][mate[v]])
    if u in mate or v in mate:
        return W[u][v]
    raise AnalysisError(f"edge {(u, v)} joins two unmatched vertices")


def _c(instance, m, edges) -> Fraction:
    return sum((contracted_cost(instance, m, u, v) for u, v in edges), Fraction(0))


def _node_cost_graph(instance: Instance, m: Matching) -> WeightedGraph:
    """Contracted graph rebuilt from scratch: one node per matching edge, then per unmatched vertex."""
    sup = sorted(m.edges)
    covered = m.vertices()
    singles = [v for v in range(instance.n) if v not in covered]
    groups = [list(e) for e in sup] + [[v] for v in singles]
    cost = {}
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            if len(groups[i]) == 1 and len(groups[j]) == 1:
                continue
            cost[(i, j)] = max(contracted_cost(instance, m, a, b) for a in groups[i] for b in groups[j])
    return WeightedGraph(len(groups), cost)


@dataclass
class LPPoint:
    xi: dict
    alpha: dict
    beta: dict
    gamma: dict
    delta: Fraction
    pi: Fraction
    tau: dict
    phi: dict

    def as_dict(self) -> dict:
        out = {}
        for name in ("xi", "alpha", "beta", "gamma", "tau", "phi"):
            for k, v in getattr(self, name).items():
                out[f"{name}{k}"] = v
        out["delta"], out["pi"] = self.delta, self.pi
        return out


def lp_point(instance: Instance, d: Decomposition, m_n3: Matching, m_n2: Matching, opt: Fraction) -> LPPoint:
    if opt == 0:
        raise ValueError("the LP point is undefined when the optimum is 0")
    r = lambda q: q / opt  # noqa: E731
    return LPPoint(
        xi={i: r(sum((instance.path_weight(p) for p in d.paths[i]), Fraction(0))) for i in range(1, 9)},
        alpha={i: r(_w(instance, d.X[i])) for i in range(1, 9)},
        beta={i: r(_w(instance, d.Y[i])) for i in range(1, 9)},
        gamma={i: r(sum_of_max(instance, d.paths[i])) for i in range(1, 9)},
        delta=r(weight_of(instance, m_n2)),
        pi=r(weight_of(instance, m_n3)),
        tau={i: r(_w(instance, d.M[i])) for i in range(1, 6)},
        phi={i: r(_w(instance, d.M1[i])) for i in range(1, 4)},
    )


# ---- check report ---------------------------------------------------------------

@dataclass
class Part:
    name: str
    lhs: Fraction
    rhs: Fraction
    equal: bool = False

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs if self.equal else self.lhs >= self.rhs

    def to_json(self) -> dict:
        return {"name": self.name, "lhs": str(self.lhs), "rhs": str(self.rhs),
                "relation": "==" if self.equal else ">=", "pass": self.ok}


@dataclass
class Check:
    name: str
    parts: list
    skipped: bool = False

    @property
    def ok(self) -> bool:
        return self.skipped or all(p.ok for p in self.parts)

    def headline(self) -> Optional[Part]:
        """First failing part, or else the part with the least slack."""
        if not self.parts:
            return None
        bad = [p for p in self.parts if not p.ok]
        if bad:
            return bad[0]
        return min(self.parts, key=lambda p: p.lhs - p.rhs)

    def to_json(self) -> dict:
        h = self.headline()
        out = {"name": self.name, "lhs": str(h.lhs) if h else None,
               "rhs": str(h.rhs) if h else None, "pass": self.ok}
        if self.skipped:
            out["skipped"] = True
        if len(self.parts) > 1:
            out["parts"] = [p.to_json() for p in self.parts]
        return out


CHECK_NAMES = (
    "a_matching_chain",
    "b_alg1_matching_plus_cost",
    "c_alg1_cost_of_optimum",
    "d_alg1_contracted_matching",
    "e_alg1_middle_bound",
    "f_alg2_matching_plus_cost",
    "g_class_edge_relations",
    "h_matching_superset_bounds",
    "i_alg2_cost_of_e2_e3",
    "j_alg2_charging_bound",
    "k_alg2_contracted_matching",
    "l_alg2_full_bound",
    "m_alg3_star_bound",
    "n_gamma_relations",
    "o_best_of_three",
)


@dataclass
class LemmaReport:
    instance_id: object
    checks: list
    opt: Optional[Fraction] = None
    weights: dict = field(default_factory=dict)
    lp_violations: list = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(not c.ok for c in self.checks) + (1 if self.lp_violations else 0)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        out = {"instance_id": self.instance_id, "checks": [c.to_json() for c in self.checks]}
        if self.opt is not None:
            out["opt"] = format_rational(self.opt)
        if self.lp_violations:
            out["lp_violations"] = self.lp_violations
        return out


def _alg1_checks(instance: Instance, pstar: ThreePathPacking, w_p1: Fraction, opt: Fraction) -> list:
    """Checks (b)-(e) on an even instance, or on G minus one optimal path when n is odd."""
    extra = []
    if instance.n % 2:
        t = pstar.paths[0]
        rest = [v for v in range(instance.n) if v not in t]
        w_t = instance.path_weight(t)
        if not rest:
            return [Part("single_path_is_optimal", w_p1, opt)], None
        sub = instance.induced(rest)
        pos = {v: i for i, v in enumerate(rest)}
        sub_pstar = ThreePathPacking(tuple(pos[v] for v in p) for p in pstar.paths[1:])
        trace = alg1_even(sub)
        w_sub = weight_of(sub, trace.packing)
        extra.append(Part("wrapper_vs_fixed_path", w_p1, w_t + w_sub))
        instance, pstar, w_p1, opt = sub, sub_pstar, w_sub, opt - w_t
    else:
        trace = alg1_even(instance)
    return extra, (instance, pstar, w_p1, opt, trace)


def check_lemma_suite(instance: Instance, instance_id=None, star_backend: str = "auto",
                      limits: OracleLimits | None = None) -> LemmaReport:
    """Evaluate every bound of the analysis on one instance, exactly."""
    limits = limits or OracleLimits.from_env()
    n = instance.n
    raw_pstar, opt = opt_3pp(instance, limits)
    p1 = run_alg1(instance)
    t2 = alg2_trace(instance)
    t3 = alg3_trace(instance, star_backend)
    w1, w2, w3 = (weight_of(instance, p) for p in (p1, t2.packing, t3.packing))
    report = LemmaReport(instance_id, [], opt, {"p1": w1, "p2": w2, "p3": w3})
    if opt == 0:
        report.checks = [Check(name, [], skipped=True) for name in CHECK_NAMES]
        return report

    W = instance.weights
    m3 = t2.m_star
    complete = WeightedGraph.complete(W)
    m2 = max_weight_matching_exact_size(complete, n // 2).matching
    w_m2, w_m3 = weight_of(instance, m2), weight_of(instance, m3)
    pstar = normalize_pstar(instance, raw_pstar, m3)
    d = decompose(instance, pstar, m3)
    smax = sum_of_max(instance, pstar.paths)
    checks = []
    F = Fraction

    checks.append(Check(CHECK_NAMES[0], [
        Part("n2_over_n3", w_m2, w_m3),
        Part("n3_over_sum_max", w_m3, smax),
        Part("sum_max_over_half_opt", smax, opt / 2),
    ]))

    # checks (b)-(e), on G itself or on G minus one optimal path
    head, ctx = _alg1_checks(instance, raw_pstar, w1, opt)
    if ctx is None:
        for name in CHECK_NAMES[1:5]:
            checks.append(Check(name, list(head)))
    else:
        g, gp, gw1, gopt, tr = ctx
        mm = tr.m_star
        w_mm = weight_of(g, mm)
        e_m = mm.edges
        p_one = [p for p in gp.paths if not set(path_edges(p)) & e_m]
        p_two = [p for p in gp.paths if set(path_edges(p)) & e_m]
        e1 = [e for p in p_one for e in path_edges(p)]
        e2 = [e for p in p_two for e in path_edges(p) if e not in e_m]
        c_e1, c_e2 = _c(g, mm, e1), _c(g, mm, e2)
        c_star = tr.contracted_cost
        parts_d = [Part("contracted_matching", c_star, F(1, 4) * c_e1 + F(1, 2) * c_e2)]
        cg = _node_cost_graph(g, mm)
        if cg.m <= SUBSET_DP_LIMIT:
            prof = subset_dp_profile(cg)
            parts_d.append(Part("engine_matches_subset_dp", c_star, prof[g.n // 6][0], equal=True))
        checks.append(Check(CHECK_NAMES[1], head + [Part("alg1_weight", gw1, w_mm + c_star)]))
        checks.append(Check(CHECK_NAMES[2], [Part("cost_of_optimum", c_e1 + c_e2, gopt - F(4, 3) * w_mm)]))
        checks.append(Check(CHECK_NAMES[3], parts_d))
        checks.append(Check(CHECK_NAMES[4], [Part(
            "middle_bound", gw1, F(2, 3) * w_mm + gopt / 2 - sum_of_max(g, gp.paths) / 2)]))

    checks.append(Check(CHECK_NAMES[5], [
        Part("alg2_weight", w2, w_m3 + t2.saturated_cost),
        Part("saturation_keeps_cost", t2.saturated_cost, t2.free_cost),
        Part("free_cost_nonnegative", t2.free_cost, F(0)),
    ]))

    wX = {i: _w(instance, d.X[i]) for i in range(1, 9)}
    wY = {i: _w(instance, d.Y[i]) for i in range(1, 9)}
    wM = {i: _w(instance, d.M[i]) for i in range(1, 6)}
    wM1 = {i: _w(instance, d.M1[i]) for i in range(1, 4)}
    wP = {i: sum((instance.path_weight(p) for p in d.paths[i]), F(0)) for i in range(1, 9)}
    gmax = {i: sum_of_max(instance, d.paths[i]) for i in range(1, 9)}

    checks.append(Check(CHECK_NAMES[6], [
        *(Part(f"x{i}_over_y{i}", wX[i], wY[i]) for i in (1, 3, 4, 8)),
        Part("m3_equals_y7", wM[3], wY[7], equal=True),
        Part("m4_equals_y5", wM[4], wY[5], equal=True),
        Part("y5_over_x5", wY[5], wX[5]),
    ]))

    checks.append(Check(CHECK_NAMES[7], [
        Part("plain", w_m2, w_m3 + wX[1] + wY[2]),
        Part("without_m1_m2", w_m2, w_m3 - wM[1] - wM[2] + wX[1] + gmax[2] + wX[3] + wX[4] + wX[6]),
        Part("without_m1", w_m2, w_m3 - wM[1] + wX[1] + wY[2] + wX[6]),
        Part("without_m1c_m2", w_m2, w_m3 - wM1[3] - wM[2] + wX[1] + gmax[2] + wX[3] + wX[4]),
    ]))

    c1, c2, c3 = (_c(instance, m3, d.E[k]) for k in (1, 2, 3))
    checks.append(Check(CHECK_NAMES[8], [
        Part("e2", c2, wX[2] + wX[3] + wX[4] + wX[7] - wY[7]),
        Part("e3", c3, wX[5], equal=True),
    ]))

    charging_rhs = (wP[6] + wP[8] + wX[2] + wX[3] + wX[4] + wX[5] + wX[7] - F(4, 3) * w_m3
                    + F(1, 3) * wM1[1] + F(2, 3) * wM1[2] + wM1[3] + F(2, 3) * wM[2] + wM[3]
                    + F(4, 3) * wM[4])
    checks.append(Check(CHECK_NAMES[9], [Part("charging", c1 + c2 + c3, charging_rhs)]))

    parts_k = [Part("contracted_matching", t2.free_cost, F(1, 4) * c1 + F(1, 2) * c2 + c3)]
    cg2 = _node_cost_graph(instance, m3)
    if cg2.m <= SUBSET_DP_LIMIT:
        best_free = max(entry[0] for entry in subset_dp_profile(cg2) if entry is not None)
        parts_k.append(Part("engine_matches_subset_dp", t2.free_cost, best_free, equal=True))
    checks.append(Check(CHECK_NAMES[10], parts_k))

    full_rhs = (F(2, 3) * w_m3 + F(1, 12) * wM1[1] + F(1, 6) * wM1[2] + F(1, 4) * wM1[3]
                + F(1, 6) * wM[2] + F(1, 4) * wM[3] + F(1, 3) * wM[4]
                + F(1, 2) * (wX[2] + wX[3] + wX[4]) + wX[5] + F(1, 2) * wX[7] - F(1, 4) * wY[7]
                + F(1, 4) * wP[6] + F(1, 4) * wP[8])
    checks.append(Check(CHECK_NAMES[11], [Part("full_bound", w2, full_rhs)]))

    star_rhs = F(4, 9) * (2 * wY[5] + 2 * wY[6] + wP[7] + wP[8] + gmax[7] + gmax[8])
    checks.append(Check(CHECK_NAMES[12], [
        Part("alg3_weight", w3, star_rhs),
        Part("stars_vs_arc_set", t3.stars_weight, F(4, 9) * t3.arcs_weight),
        Part("alg3_over_stars", w3, t3.stars_weight),
    ]))

    checks.append(Check(CHECK_NAMES[13], [
        Part("n3_over_gamma_sum", w_m3, sum(gmax.values(), F(0))),
        *(Part(f"gamma{i}_over_alpha{i}", gmax[i], wX[i]) for i in range(1, 9)),
        *(Part(f"gamma{i}_over_beta{i}", gmax[i], wY[i]) for i in range(1, 9)),
    ]))

    checks.append(Check(CHECK_NAMES[14], [Part("best_over_ratio_opt", max(w1, w2, w3), RATIO * opt)]))
    report.checks = checks

    from .lpcert import check_point_feasible
    point = lp_point(instance, d, m3, m2, opt)
    report.lp_violations = [f"{tag}: slack {s}" for tag, s in check_point_feasible(point.as_dict())]
    return report


def refuted_bound(instance: Instance, limits: OracleLimits | None = None) -> tuple:
    """``(2/3) w(M*_{n/2}) + OPT/4`` and OPT; on the counterexample the former exceeds the latter."""
    _, opt = opt_3pp(instance, limits)
    m2 = max_weight_matching_exact_size(WeightedGraph.complete(instance.weights), instance.n // 2)
    return Fraction(2, 3) * m2.total_cost + opt / 4, opt
