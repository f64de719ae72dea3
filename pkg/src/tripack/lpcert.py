"""Exact verification of the ratio LP: primal constraints, dual certificate, tight point.

The primal is ``min y`` subject to 55 rows ``a . x >= b`` over 43 non-negative
variables.  A dual vector ``lam >= 0`` is feasible when ``A^T lam <= e_y``; its
objective ``b . lam`` then lower-bounds the primal optimum.  A primal point
reaching the same value closes the gap.

The dual rows are held in three forms that must agree: generated from the
primal matrix, written out per primal variable, and written out with integer
coefficients for a certificate scaled by 153.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .core import to_rational

F = Fraction
TARGET = F(10, 17)
SCALE = 153

VARIABLES = (
    ["y"]
    + [f"xi{i}" for i in range(1, 9)]
    + [f"alpha{i}" for i in range(1, 9)]
    + [f"beta{i}" for i in range(1, 9)]
    + [f"gamma{i}" for i in range(1, 9)]
    + ["delta", "pi"]
    + [f"tau{i}" for i in range(1, 6)]
    + [f"phi{i}" for i in range(1, 4)]
)
R8 = range(1, 9)


@dataclass(frozen=True)
class Constraint:
    tag: str
    coef: dict
    rhs: Fraction

    def value(self, x: dict) -> Fraction:
        return sum((c * x.get(v, 0) for v, c in self.coef.items()), F(0))

    def slack(self, x: dict) -> Fraction:
        return self.value(x) - self.rhs


def _neg(d: dict) -> dict:
    return {k: -v for k, v in d.items()}


def _add(*parts) -> dict:
    out = {}
    for p in parts:
        for k, v in p.items():
            out[k] = out.get(k, 0) + v
    return {k: F(v) for k, v in out.items() if v != 0}


def _sum(prefix, idx, c=1) -> dict:
    return {f"{prefix}{i}": F(c) for i in idx}


def build_primal() -> list:
    """The 55 primal rows in order C1..C55."""
    rows = []

    def add(coef, rhs=0):
        rows.append(Constraint(f"C{len(rows) + 1}", _add(coef), F(rhs)))

    add(_add({"y": 1, "delta": F(-2, 3)}, _sum("gamma", R8, F(1, 2))), F(1, 2))
    add(_add({"y": 1}, _neg({
        "pi": F(2, 3), "phi1": F(1, 12), "phi2": F(1, 6), "phi3": F(1, 4), "tau2": F(1, 6),
        "tau3": F(1, 4), "tau4": F(1, 3), "alpha2": F(1, 2), "alpha3": F(1, 2), "alpha4": F(1, 2),
        "alpha5": 1, "alpha7": F(1, 2), "beta7": F(-1, 4), "xi6": F(1, 4), "xi8": F(1, 4)})))
    add(_add({"y": 1}, _neg({k: F(4, 9) * v for k, v in {
        "beta5": 2, "beta6": 2, "xi7": 1, "xi8": 1, "gamma7": 1, "gamma8": 1}.items()})))
    add(_sum("xi", R8), 1)
    add(_sum("xi", R8, -1), -1)
    for i in R8:
        add({f"xi{i}": 1, f"alpha{i}": -1, f"beta{i}": -1})
    for i in R8:
        add({f"xi{i}": -1, f"alpha{i}": 1, f"beta{i}": 1})
    add(_add({"pi": 1}, _sum("tau", range(1, 6), -1)))
    add(_add({"pi": -1}, _sum("tau", range(1, 6))))
    add(_add({"tau1": 1}, _sum("phi", range(1, 4), -1)))
    add(_add({"tau1": -1}, _sum("phi", range(1, 4))))
    for i in (1, 3, 4, 8):
        add({f"alpha{i}": 1, f"beta{i}": -1})
    add({"tau3": 1, "beta7": -1})
    add({"tau3": -1, "beta7": 1})
    add({"tau4": 1, "beta5": -1})
    add({"tau4": -1, "beta5": 1})
    add({"beta5": 1, "alpha5": -1})
    add({"delta": 1, "pi": -1, "alpha1": -1, "beta2": -1})
    add({"delta": 1, "pi": -1, "tau1": 1, "tau2": 1, "alpha1": -1, "gamma2": -1,
         "alpha3": -1, "alpha4": -1, "alpha6": -1})
    add({"delta": 1, "pi": -1, "tau1": 1, "alpha1": -1, "beta2": -1, "alpha6": -1})
    add({"delta": 1, "pi": -1, "phi3": 1, "tau2": 1, "alpha1": -1, "gamma2": -1,
         "alpha3": -1, "alpha4": -1})
    add(_add({"pi": 1}, _sum("gamma", R8, -1)))
    for i in R8:
        add({f"gamma{i}": 1, f"alpha{i}": -1})
    for i in R8:
        add({f"gamma{i}": 1, f"beta{i}": -1})
    assert len(rows) == 55
    return rows


def format_constraint(c: Constraint) -> str:
    terms = []
    for v in VARIABLES:
        q = c.coef.get(v)
        if not q:
            continue
        sign = "-" if q < 0 else "+"
        mag = abs(q)
        body = v if mag == 1 else f"{mag} {v}"
        terms.append(f"{sign} {body}")
    lhs = " ".join(terms) if terms else "0"
    if lhs.startswith(("+ ", "- ")):
        lhs = lhs[2:] if lhs[0] == "+" else "-" + lhs[2:]
    return f"{c.tag}: {lhs} >= {c.rhs}"


def emit_lp(rows: list | None = None) -> str:
    """Plain-text primal: objective, the 55 rows, and the sign constraints."""
    rows = rows or build_primal()
    lines = ["minimize y", "subject to"]
    lines += [format_constraint(c) for c in rows]
    lines.append("bounds: all variables >= 0")
    return "\n".join(lines) + "\n"


# ---- dual rows ---------------------------------------------------------------

def dual_rows_from_primal(rows: list | None = None) -> dict:
    """``{variable: {lambda index: coefficient}}`` by transposing the primal."""
    rows = rows or build_primal()
    out = {v: {} for v in VARIABLES}
    for j, c in enumerate(rows, start=1):
        for v, q in c.coef.items():
            out[v][j] = q
    return out


def _row(*terms) -> dict:
    """``_row((coef, index), ...)`` with integer or Fraction coefficients."""
    out = {}
    for q, j in terms:
        out[j] = out.get(j, 0) + F(q)
    return {j: q for j, q in out.items() if q != 0}


def dual_rows_printed() -> dict:
    """Dual rows written out per primal variable."""
    h, t, q, s, tw = F(1, 2), F(1, 3), F(1, 4), F(1, 6), F(1, 12)
    nine4, nine8 = F(4, 9), F(8, 9)
    r = {"y": _row((1, 1), (1, 2), (1, 3))}
    for i in range(1, 9):
        terms = [(1, 4), (-1, 5), (1, 5 + i), (-1, 13 + i)]
        if i in (6, 8):
            terms.append((-q, 2))
        if i in (7, 8):
            terms.append((-nine4, 3))
        r[f"xi{i}"] = _row(*terms)
    r["alpha1"] = _row((-1, 6), (1, 14), (1, 26), (-1, 35), (-1, 36), (-1, 37), (-1, 38), (-1, 40))
    r["alpha2"] = _row((-h, 2), (-1, 7), (1, 15), (-1, 41))
    r["alpha3"] = _row((-h, 2), (-1, 8), (1, 16), (1, 27), (-1, 36), (-1, 38), (-1, 42))
    r["alpha4"] = _row((-h, 2), (-1, 9), (1, 17), (1, 28), (-1, 36), (-1, 38), (-1, 43))
    r["alpha5"] = _row((-1, 2), (-1, 10), (1, 18), (-1, 34), (-1, 44))
    r["alpha6"] = _row((-1, 11), (1, 19), (-1, 36), (-1, 37), (-1, 45))
    r["alpha7"] = _row((-h, 2), (-1, 12), (1, 20), (-1, 46))
    r["alpha8"] = _row((-1, 13), (1, 21), (1, 29), (-1, 47))
    r["beta1"] = _row((-1, 6), (1, 14), (-1, 26), (-1, 48))
    r["beta2"] = _row((-1, 7), (1, 15), (-1, 35), (-1, 37), (-1, 49))
    r["beta3"] = _row((-1, 8), (1, 16), (-1, 27), (-1, 50))
    r["beta4"] = _row((-1, 9), (1, 17), (-1, 28), (-1, 51))
    r["beta5"] = _row((-nine8, 3), (-1, 10), (1, 18), (-1, 32), (1, 33), (1, 34), (-1, 52))
    r["beta6"] = _row((-nine8, 3), (-1, 11), (1, 19), (-1, 53))
    r["beta7"] = _row((q, 2), (-1, 12), (1, 20), (-1, 30), (1, 31), (-1, 54))
    r["beta8"] = _row((-1, 13), (1, 21), (-1, 29), (-1, 55))
    for i in range(1, 9):
        terms = [(h, 1), (-1, 39), (1, 39 + i), (1, 47 + i)]
        if i == 2:
            terms += [(-1, 36), (-1, 38)]
        if i in (7, 8):
            terms.append((-nine4, 3))
        r[f"gamma{i}"] = _row(*terms)
    r["delta"] = _row((-2 * t, 1), (1, 35), (1, 36), (1, 37), (1, 38))
    r["pi"] = _row((-2 * t, 2), (1, 22), (-1, 23), (-1, 35), (-1, 36), (-1, 37), (-1, 38), (1, 39))
    r["tau1"] = _row((-1, 22), (1, 23), (1, 24), (-1, 25), (1, 36), (1, 37))
    r["tau2"] = _row((-s, 2), (-1, 22), (1, 23), (1, 36), (1, 38))
    r["tau3"] = _row((-q, 2), (-1, 22), (1, 23), (1, 30), (-1, 31))
    r["tau4"] = _row((-t, 2), (-1, 22), (1, 23), (1, 32), (-1, 33))
    r["tau5"] = _row((-1, 22), (1, 23))
    r["phi1"] = _row((-tw, 2), (-1, 24), (1, 25))
    r["phi2"] = _row((-s, 2), (-1, 24), (1, 25))
    r["phi3"] = _row((-q, 2), (-1, 24), (1, 25), (1, 38))
    return r


def dual_rows_integer_scaled() -> dict:
    """Dual rows with integer coefficients, for use with a certificate scaled by 153.

    Each value is ``(coefficients, bound)``; rows may carry a positive factor
    relative to :func:`dual_rows_printed`.
    """
    def rw(bound, *terms):
        return _row(*terms), F(bound)

    r = {"y": rw(SCALE, (1, 1), (1, 2), (1, 3))}
    for i in range(1, 6):
        r[f"xi{i}"] = rw(0, (1, 4), (-1, 5), (1, 5 + i), (-1, 13 + i))
    r["xi6"] = rw(0, (-1, 2), (4, 4), (-4, 5), (4, 11), (-4, 19))
    r["xi7"] = rw(0, (-4, 3), (9, 4), (-9, 5), (9, 12), (-9, 20))
    r["xi8"] = rw(0, (-9, 2), (-16, 3), (36, 4), (-36, 5), (36, 13), (-36, 21))
    r["alpha1"] = rw(0, (-1, 6), (1, 14), (1, 26), (-1, 35), (-1, 36), (-1, 37), (-1, 38), (-1, 40))
    r["alpha2"] = rw(0, (-1, 2), (-2, 7), (2, 15), (-2, 41))
    r["alpha3"] = rw(0, (-1, 2), (-2, 8), (2, 16), (2, 27), (-2, 36), (-2, 38), (-2, 42))
    r["alpha4"] = rw(0, (-1, 2), (-2, 9), (2, 17), (2, 28), (-2, 36), (-2, 38), (-2, 43))
    r["alpha5"] = rw(0, (-1, 2), (-1, 10), (1, 18), (-1, 34), (-1, 44))
    r["alpha6"] = rw(0, (-1, 11), (1, 19), (-1, 36), (-1, 37), (-1, 45))
    r["alpha7"] = rw(0, (-1, 2), (-2, 12), (2, 20), (-2, 46))
    r["alpha8"] = rw(0, (-1, 13), (1, 21), (1, 29), (-1, 47))
    r["beta1"] = rw(0, (-1, 6), (1, 14), (-1, 26), (-1, 48))
    r["beta2"] = rw(0, (-1, 7), (1, 15), (-1, 35), (-1, 37), (-1, 49))
    r["beta3"] = rw(0, (-1, 8), (1, 16), (-1, 27), (-1, 50))
    r["beta4"] = rw(0, (-1, 9), (1, 17), (-1, 28), (-1, 51))
    r["beta5"] = rw(0, (-8, 3), (-9, 10), (9, 18), (-9, 32), (9, 33), (9, 34), (-9, 52))
    r["beta6"] = rw(0, (-8, 3), (-9, 11), (9, 19), (-9, 53))
    r["beta7"] = rw(0, (1, 2), (-4, 12), (4, 20), (-4, 30), (4, 31), (-4, 54))
    r["beta8"] = rw(0, (-1, 13), (1, 21), (-1, 29), (-1, 55))
    for i in range(1, 7):
        extra = [(-2, 36), (-2, 38)] if i == 2 else []
        r[f"gamma{i}"] = rw(0, (1, 1), *extra, (-2, 39), (2, 39 + i), (2, 47 + i))
    r["gamma7"] = rw(0, (9, 1), (-8, 3), (-18, 39), (18, 46), (18, 54))
    r["gamma8"] = rw(0, (9, 1), (-8, 3), (-18, 39), (18, 47), (18, 55))
    r["delta"] = rw(0, (-2, 1), (3, 35), (3, 36), (3, 37), (3, 38))
    r["pi"] = rw(0, (-2, 2), (3, 22), (-3, 23), (-3, 35), (-3, 36), (-3, 37), (-3, 38), (3, 39))
    r["tau1"] = rw(0, (-1, 22), (1, 23), (1, 24), (-1, 25), (1, 36), (1, 37))
    r["tau2"] = rw(0, (-1, 2), (-6, 22), (6, 23), (6, 36), (6, 38))
    r["tau3"] = rw(0, (-1, 2), (-4, 22), (4, 23), (4, 30), (-4, 31))
    r["tau4"] = rw(0, (-1, 2), (-3, 22), (3, 23), (3, 32), (-3, 33))
    r["tau5"] = rw(0, (-1, 22), (1, 23))
    r["phi1"] = rw(0, (-1, 2), (-12, 24), (12, 25))
    r["phi2"] = rw(0, (-1, 2), (-6, 24), (6, 25))
    r["phi3"] = rw(0, (-1, 2), (-4, 24), (4, 25), (4, 38))
    return r


def transcription_mismatches() -> list:
    """Variables whose dual row differs between the three transcriptions (empty when all agree)."""
    mech = dual_rows_from_primal()
    printed = dual_rows_printed()
    scaled = dual_rows_integer_scaled()
    bad = []
    for v in VARIABLES:
        if mech[v] != printed[v]:
            bad.append(f"{v}: transposed primal differs from the per-variable rows")
        coefs, bound = scaled[v]
        # scaled row must be a positive multiple of the printed row
        factor = None
        for j, q in printed[v].items():
            if j in coefs:
                factor = coefs[j] / q
                break
        if factor is None or factor <= 0 or set(coefs) != set(printed[v]) or any(
                coefs[j] != factor * q for j, q in printed[v].items()):
            bad.append(f"{v}: integer-scaled row is not a positive multiple")
            continue
        rhs = F(1) if v == "y" else F(0)
        if bound != factor * rhs * SCALE:
            bad.append(f"{v}: integer-scaled bound {bound} does not match")
    return bad


# ---- certificate ---------------------------------------------------------------

SCALED_CERTIFICATE = (
    72, 72, 9, 54, 0, 0, 0, 0, 0, 0, 0, 0, 0, 54, 54, 54, 54, 54, 36, 50,
    32, 0, 0, 0, 6, 54, 54, 54, 0, 18, 0, 24, 0, 0, 30, 0, 6, 12, 96, 60,
    18, 60, 60, 0, 30, 14, 32, 0, 18, 0, 0, 22, 28, 50, 32,
)


@dataclass(frozen=True)
class DualCertificate:
    lam: tuple

    def __post_init__(self):
        if len(self.lam) != 55:
            raise ValueError(f"a certificate has 55 entries, got {len(self.lam)}")

    @classmethod
    def default(cls) -> "DualCertificate":
        return cls(tuple(F(v, SCALE) for v in SCALED_CERTIFICATE))

    @classmethod
    def from_json(cls, text: str) -> "DualCertificate":
        """A JSON list of 55 values, or ``{"scale": k, "lambdas": [...]}``."""
        data = json.loads(text)
        scale = 1
        if isinstance(data, dict):
            scale = int(data.get("scale", 1))
            data = data["lambdas"]
        if not isinstance(data, list):
            raise ValueError("certificate must be a list of 55 values")
        return cls(tuple(to_rational(v) / scale for v in data))

    def __getitem__(self, j: int) -> Fraction:
        return self.lam[j - 1]


@dataclass
class DualReport:
    feasible: bool
    objective: Fraction
    violated: list
    rows: list

    @property
    def certifies_target(self) -> bool:
        return self.feasible and self.objective == TARGET


def verify_dual(cert: DualCertificate | None = None) -> DualReport:
    """Check every dual row and non-negativity; objective is ``lam1/2 + lam4 - lam5``."""
    cert = cert or DualCertificate.default()
    rows, violated = [], []
    for j in range(1, 56):
        if cert[j] < 0:
            violated.append(f"lambda{j} < 0")
    for v, coefs in dual_rows_printed().items():
        lhs = sum((q * cert[j] for j, q in coefs.items()), F(0))
        bound = F(1) if v == "y" else F(0)
        ok = lhs <= bound
        rows.append((v, lhs, bound, ok))
        if not ok:
            violated.append(f"({v}): {lhs} > {bound}")
    objective = cert[1] / 2 + cert[4] - cert[5]
    return DualReport(not violated, objective, violated, rows)


# ---- primal points ---------------------------------------------------------------

def worst_case_point() -> dict:
    xi = {1: F(1, 68), 3: F(7, 68), 8: F(15, 17)}
    pt = {v: F(0) for v in VARIABLES if v != "y"}
    for i, val in xi.items():
        pt[f"xi{i}"] = val
        for name in ("alpha", "beta", "gamma"):
            pt[f"{name}{i}"] = val / 2
    pt.update(delta=F(69, 136), pi=F(1, 2), tau2=F(7, 136), tau5=F(61, 136))
    return pt


def check_point_feasible(pt: dict) -> list:
    """Violated rows among C4..C55 and sign constraints, as ``(tag, slack)`` pairs."""
    out = []
    for v in VARIABLES[1:]:
        if pt.get(v, 0) < 0:
            out.append((f"{v}>=0", F(pt[v])))
    for c in build_primal()[3:]:
        s = c.slack(pt)
        if s < 0:
            out.append((c.tag, s))
    return out


def ratio_bounds(pt: dict) -> tuple:
    """Lower bounds on ``y`` from C1, C2, C3 at the point."""
    rows = build_primal()[:3]
    out = []
    for c in rows:
        rest = {k: v for k, v in c.coef.items() if k != "y"}
        out.append(c.rhs - sum((q * pt.get(k, 0) for k, q in rest.items()), F(0)))
    return tuple(out)


@dataclass
class PointReport:
    feasible: bool
    c1: Fraction
    c2: Fraction
    c3: Fraction
    violated: list

    @property
    def value(self) -> Fraction:
        return max(self.c1, self.c2, self.c3)

    @property
    def tight(self) -> bool:
        return self.value == TARGET


def verify_worst_case_point(pt: dict | None = None) -> PointReport:
    pt = worst_case_point() if pt is None else pt
    violated = check_point_feasible(pt)
    c1, c2, c3 = ratio_bounds(pt)
    return PointReport(not violated, c1, c2, c3, violated)
