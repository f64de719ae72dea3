"""Instance model, solution shapes, weight evaluation and instance file I/O.

All weights are :class:`fractions.Fraction`; nothing in this package touches
floating point.  Vertices are dense 0-based indices.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction


class InstanceError(ValueError):
    """Raised when an instance file cannot be parsed or fails validation."""


class InvalidSolution(ValueError):
    """Raised when a solution does not fit the instance it is evaluated on."""


def to_rational(value) -> Fraction:
    """Parse an int, a Fraction or a ``"p/q"`` string into a Fraction.

    Floats are rejected: a float weight is already rounded and the checks in
    this package are exact.
    """
    if isinstance(value, bool):
        raise InstanceError(f"boolean is not a weight: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InstanceError(f"bad rational literal {value!r}") from exc
    raise InstanceError(f"unsupported weight type {type(value).__name__}: {value!r}")


def format_rational(q: Fraction) -> Union[int, str]:
    """JSON form of a rational: a plain int when integral, else ``"p/q"``."""
    q = Fraction(q)
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Instance:
    """Complete graph on ``n`` vertices with symmetric non-negative weights."""

    n: int
    weights: tuple

    def __post_init__(self):
        n = self.n
        if not isinstance(n, int) or n < 3 or n % 3:
            raise InstanceError(f"n must be a positive multiple of 3, got {n!r}")
        rows = tuple(tuple(to_rational(x) for x in row) for row in self.weights)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise InstanceError(f"weight matrix must be {n}x{n}")
        for u in range(n):
            if rows[u][u] != 0:
                raise InstanceError(f"diagonal entry ({u},{u}) must be 0")
            for v in range(u + 1, n):
                if rows[u][v] != rows[v][u]:
                    raise InstanceError(f"asymmetric weights at ({u},{v})")
                if rows[u][v] < 0:
                    raise InstanceError(f"negative weight at ({u},{v})")
        object.__setattr__(self, "weights", rows)

    @classmethod
    def from_edges(cls, n: int, edges: dict) -> "Instance":
        """Build an instance from ``{(u, v): weight}``; omitted pairs weigh 0."""
        w = [[Fraction(0)] * n for _ in range(n)]
        for (u, v), x in edges.items():
            if u == v:
                raise InstanceError("self loops are not edges")
            w[u][v] = w[v][u] = to_rational(x)
        return cls(n, w)

    def w(self, u: int, v: int) -> Fraction:
        return self.weights[u][v]

    def path_weight(self, path: Sequence[int]) -> Fraction:
        x, y, z = path
        return self.weights[x][y] + self.weights[y][z]

    def total_weight(self) -> Fraction:
        return sum((self.weights[u][v] for u in range(self.n) for v in range(u + 1, self.n)),
                   Fraction(0))

    def induced(self, vertices: Sequence[int]) -> "Instance":
        """Sub-instance on ``vertices``; vertex ``i`` of the result is ``vertices[i]``."""
        return Instance(len(vertices), [[self.weights[a][b] for b in vertices] for a in vertices])


def edge(u: int, v: int) -> tuple:
    """Canonical unordered pair."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Matching:
    edges: frozenset

    def __init__(self, edges: Iterable = ()):
        canon = frozenset(edge(u, v) for u, v in edges)
        seen = set()
        for u, v in canon:
            if u == v or u in seen or v in seen:
                raise InvalidSolution(f"matching edges are not vertex-disjoint at ({u},{v})")
            seen.update((u, v))
        object.__setattr__(self, "edges", canon)

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(sorted(self.edges))

    def vertices(self) -> frozenset:
        return frozenset(x for e in self.edges for x in e)

    def mate(self) -> dict:
        out = {}
        for u, v in self.edges:
            out[u] = v
            out[v] = u
        return out


@dataclass(frozen=True)
class ThreePathPacking:
    """Triples ``(x, y, z)`` with ``y`` the center.  Order is kept as given."""

    paths: tuple

    def __init__(self, paths: Iterable = ()):
        object.__setattr__(self, "paths", tuple(tuple(p) for p in paths))

    def __len__(self):
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    def edges(self) -> list:
        return [e for x, y, z in self.paths for e in (edge(x, y), edge(y, z))]

    def labels(self, n: int) -> list:
        """Path index per vertex (-1 for uncovered vertices)."""
        out = [-1] * n
        for i, p in enumerate(self.paths):
            for v in p:
                out[v] = i
        return out


@dataclass(frozen=True)
class StarPacking:
    """Stars ``(center, leaves)`` with one or two leaves each."""

    stars: tuple

    def __init__(self, stars: Iterable = ()):
        object.__setattr__(self, "stars", tuple((c, tuple(ls)) for c, ls in stars))

    def __len__(self):
        return len(self.stars)

    def __iter__(self):
        return iter(self.stars)

    def vertices(self) -> set:
        return {v for c, ls in self.stars for v in (c, *ls)}


@dataclass(frozen=True)
class ArcSet:
    arcs: frozenset

    def __init__(self, arcs: Iterable = ()):
        object.__setattr__(self, "arcs", frozenset(tuple(a) for a in arcs))

    def __len__(self):
        return len(self.arcs)

    def __iter__(self):
        return iter(sorted(self.arcs))

    def is_two_feasible(self) -> bool:
        indeg, outdeg = {}, {}
        for u, v in self.arcs:
            if u == v:
                return False
            outdeg[u] = outdeg.get(u, 0) + 1
            indeg[v] = indeg.get(v, 0) + 1
        return all(d <= 1 for d in indeg.values()) and all(d <= 2 for d in outdeg.values())


Solution = Union[Matching, ThreePathPacking, StarPacking, ArcSet]


def _check_range(n: int, vs: Iterable[int]):
    for v in vs:
        if not (0 <= v < n):
            raise InvalidSolution(f"vertex {v} out of range [0, {n})")


def weight_of(instance: Instance, solution: Solution) -> Fraction:
    """Exact total weight of ``solution`` on ``instance``.

    A packing contributes ``w(xy) + w(yz)`` per triple, a star packing the sum
    of its center-leaf edges, and a matching or arc set the sum of its members.
    """
    n, W = instance.n, instance.weights
    total = Fraction(0)
    if isinstance(solution, Matching):
        _check_range(n, solution.vertices())
        for u, v in solution.edges:
            total += W[u][v]
        return total
    if isinstance(solution, ThreePathPacking):
        seen = set()
        for p in solution.paths:
            _check_range(n, p)
            if len(p) != 3 or len(set(p)) != 3 or seen.intersection(p):
                raise InvalidSolution(f"vertex reused in path {p}")
            seen.update(p)
            total += W[p[0]][p[1]] + W[p[1]][p[2]]
        return total
    if isinstance(solution, StarPacking):
        seen = set()
        for c, leaves in solution.stars:
            vs = (c, *leaves)
            _check_range(n, vs)
            if not 1 <= len(leaves) <= 2 or len(set(vs)) != len(vs) or seen.intersection(vs):
                raise InvalidSolution(f"bad or overlapping star {(c, leaves)}")
            seen.update(vs)
            total += sum((W[c][l] for l in leaves), Fraction(0))
        return total
    if isinstance(solution, ArcSet):
        for u, v in solution.arcs:
            _check_range(n, (u, v))
            if u == v:
                raise InvalidSolution(f"loop arc ({u},{v})")
            total += W[u][v]
        return total
    raise TypeError(f"not a solution: {type(solution).__name__}")


def validate_packing(instance: Instance, packing: ThreePathPacking) -> list:
    """Every violated packing invariant as a message; empty list means valid."""
    n = instance.n
    problems = []
    seen = set()
    for p in packing.paths:
        if len(p) != 3:
            problems.append(f"path {p} does not have three vertices")
            continue
        if len(set(p)) != 3:
            problems.append(f"path {p} repeats a vertex")
        for v in p:
            if not (isinstance(v, int) and 0 <= v < n):
                problems.append(f"vertex {v} out of range")
            elif v in seen:
                problems.append(f"vertex reused: {v}")
            seen.add(v)
    if len(packing.paths) != n // 3:
        problems.append(f"not perfect: {len(packing.paths)} paths, expected {n // 3}")
    missing = sorted(set(range(n)) - seen)
    if missing:
        problems.append(f"uncovered vertices: {missing}")
    return problems


# --- file I/O -------------------------------------------------------------

def _parse_text(text: str) -> Instance:
    tokens = text.split()
    if not tokens:
        raise InstanceError("empty instance file")
    try:
        n = int(tokens[0])
    except ValueError as exc:
        raise InstanceError(f"first token must be n, got {tokens[0]!r}") from exc
    want = n * (n - 1) // 2
    if len(tokens) - 1 != want:
        raise InstanceError(f"expected {want} upper-triangle entries, got {len(tokens) - 1}")
    w = [[Fraction(0)] * n for _ in range(n)]
    it = iter(tokens[1:])
    for u in range(n):
        for v in range(u + 1, n):
            w[u][v] = w[v][u] = to_rational(next(it))
    return Instance(n, w)


def parse_instance(text: str) -> Instance:
    """Parse either the JSON matrix form or the upper-triangle text form."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"malformed JSON: {exc}") from exc
        if not isinstance(data, dict) or "n" not in data or "weights" not in data:
            raise InstanceError('JSON instance needs "n" and "weights"')
        rows = data["weights"]
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise InstanceError('"weights" must be a list of rows')
        return Instance(data["n"], [[to_rational(x) for x in r] for r in rows])
    return _parse_text(text)


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def instance_to_json(instance: Instance) -> dict:
    return {"n": instance.n,
            "weights": [[format_rational(x) for x in row] for row in instance.weights]}


def save_instance(instance: Instance, path, compact: bool = False) -> None:
    if compact:
        n = instance.n
        entries = [str(format_rational(instance.weights[u][v]))
                   for u in range(n) for v in range(u + 1, n)]
        text = f"{n}\n" + " ".join(entries) + "\n"
    else:
        text = json.dumps(instance_to_json(instance)) + "\n"
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def fig1_instance() -> Instance:
    """The six-vertex counterexample: unit edges ab, cd, ef; everything else 0.

    Vertices a..f are 0..5.
    """
    return Instance.from_edges(6, {(0, 1): 1, (2, 3): 1, (4, 5): 1})


def best_orientation(instance: Instance, a: int, b: int, c: int) -> tuple:
    """Heaviest 3-path on ``{a, b, c}``; ties keep ``b`` as the center."""
    W = instance.weights
    best = (a, b, c)
    best_w = W[a][b] + W[b][c]
    for path in ((b, a, c), (a, c, b)):
        pw = W[path[0]][path[1]] + W[path[1]][path[2]]
        if pw > best_w:
            best, best_w = path, pw
    return best


def group_residuals(instance: Instance, residuals: Sequence[int]) -> list:
    """Consecutive ascending triples of ``residuals``, each in its heaviest orientation."""
    rs = sorted(residuals)
    if len(rs) % 3:
        raise InvalidSolution(f"{len(rs)} residual vertices cannot form 3-paths")
    return [best_orientation(instance, *rs[i:i + 3]) for i in range(0, len(rs), 3)]
