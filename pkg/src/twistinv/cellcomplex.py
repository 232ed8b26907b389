"""The Boolean cell complex built from the labelled graph on twisted
involutions: its face poset, structural checks, shellings and the f-, h- and
descent polynomials.

A cell is the connected component of a vertex in the subgraph keeping only
edges with labels in J; it is keyed by (J, unique weak-order-minimal vertex).
Cells are stored abstractly as a face poset, never as vertex-set simplices,
since two cells can share a vertex set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .errors import InternalConsistencyError
from .poset import FinitePoset, linear_extension
from .twisted import GThetaGraph, TwistedTable, weak_poset_twisted


@dataclass(frozen=True)
class Cell:
    J: frozenset
    min_elem: int
    vertex_set: frozenset = field(repr=False)
    edges: frozenset = field(repr=False)  # (u, v, label), u < v
    rank: int = field(repr=False)  # |S|

    @property
    def key(self) -> tuple[tuple[int, ...], int]:
        return tuple(sorted(self.J)), self.min_elem

    @property
    def dimension(self) -> int:
        return self.rank - len(self.J) - 1

    def contains_subgraph(self, other: "Cell") -> bool:
        """True when ``other`` is a labelled subgraph of this cell."""
        return other.vertex_set <= self.vertex_set and other.edges <= self.edges


def _greedy_min(t: TwistedTable, w: int, J: Sequence[int], rng: random.Random | None = None) -> int:
    cur = w
    while True:
        down = [s for s in J if t.twisted_descent_flag[cur][s]]
        if not down:
            return cur
        s = rng.choice(down) if rng is not None else down[0]
        cur = t.act[cur][s]


def component_cell(
    t: TwistedTable, graph: GThetaGraph, w: int, J, rng: random.Random | None = None
) -> Cell:
    J = frozenset(J)
    adj = graph.adjacency()
    seen = {w}
    stack = [w]
    edges = set()
    while stack:
        x = stack.pop()
        for y, s in adj[x]:
            if s in J:
                edges.add((min(x, y), max(x, y), s))
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    js = sorted(J)
    m = _greedy_min(t, w, js, rng)
    minimal = [v for v in seen if not any(t.twisted_descent_flag[v][s] for s in js)]
    if minimal != [m]:
        raise InternalConsistencyError(f"component of {t.label(w)} under {js} has weak-minimal set {minimal}")
    return Cell(J, m, frozenset(seen), frozenset(edges), t.rank)


def _subsets(n: int) -> list[frozenset]:
    return [frozenset(c) for k in range(n + 1) for c in combinations(range(n), k)]


@dataclass(frozen=True, eq=False)
class FacePoset:
    twisted: TwistedTable = field(repr=False)
    graph: GThetaGraph = field(repr=False)
    cells: tuple[Cell, ...] = field(repr=False)
    index: dict = field(repr=False)  # cell key -> position
    comp: dict = field(repr=False)  # J -> tuple(member -> cell position)
    facets: tuple[int, ...] = field(repr=False)  # cell position per member
    bottom: int = 0

    @property
    def rank(self) -> int:
        return self.twisted.rank

    @property
    def dimension(self) -> int:
        return self.rank - 1

    def leq(self, a: int, b: int) -> bool:
        """Cell a <= cell b (b is a labelled subgraph of a)."""
        ca, cb = self.cells[a], self.cells[b]
        return cb.J <= ca.J and self.comp[ca.J][cb.min_elem] == a

    def census(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.cells:
            out[c.dimension] = out.get(c.dimension, 0) + 1
        return dict(sorted(out.items()))

    def cell_label(self, a: int) -> str:
        c = self.cells[a]
        gens = self.twisted.group.cm.generators
        J = ",".join(gens[s] for s in sorted(c.J))
        return f"{{{J}}}@{self.twisted.label(c.min_elem)}"

    def as_poset(self) -> FinitePoset:
        n = len(self.cells)
        leq = np.zeros((n, n), dtype=bool)
        for b in range(n):
            cb = self.cells[b]
            for J, table in self.comp.items():
                if cb.J <= J:
                    leq[table[cb.min_elem], b] = True
        return FinitePoset.from_leq(
            leq,
            labels=[self.cell_label(a) for a in range(n)],
            rank=[c.dimension + 1 for c in self.cells],
            keys=[c.key for c in self.cells],
            check=False,
        )


def build_face_poset(t: TwistedTable, graph: GThetaGraph) -> FacePoset:
    n = t.rank
    adj = graph.adjacency()
    found: list[Cell] = []
    comp_raw: dict[frozenset, list[Cell]] = {}
    for J in _subsets(n):
        js = sorted(J)
        owner: list[Cell | None] = [None] * t.size
        for w in range(t.size):
            if owner[w] is not None:
                continue
            seen = {w}
            stack = [w]
            edges = set()
            while stack:
                x = stack.pop()
                for y, s in adj[x]:
                    if s in J:
                        edges.add((min(x, y), max(x, y), s))
                        if y not in seen:
                            seen.add(y)
                            stack.append(y)
            m = _greedy_min(t, w, js)
            minimal = [v for v in seen if not any(t.twisted_descent_flag[v][s] for s in js)]
            if minimal != [m]:
                raise InternalConsistencyError(f"component under {js} has weak-minimal set {minimal}")
            cell = Cell(J, m, frozenset(seen), frozenset(edges), n)
            found.append(cell)
            for v in seen:
                owner[v] = cell
        comp_raw[J] = owner  # type: ignore[assignment]

    cells = tuple(sorted(found, key=lambda c: (c.dimension, c.key)))
    index = {c.key: i for i, c in enumerate(cells)}
    if len(index) != len(cells):
        raise InternalConsistencyError("two components share a (J, min) key")
    comp = {J: tuple(index[c.key] for c in owner) for J, owner in comp_raw.items()}
    facets = comp[frozenset()]
    if any(cells[f].dimension != n - 1 for f in facets) or len(set(facets)) != t.size:
        raise InternalConsistencyError("facets are not one (|S|-1)-cell per twisted involution")
    bottoms = {c for c in comp[frozenset(range(n))]}
    if len(bottoms) != 1:
        raise InternalConsistencyError("labelled graph is not connected")
    return FacePoset(t, graph, cells, index, comp, tuple(facets), bottoms.pop())


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    witness: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_boolean_intervals(P: FacePoset) -> CheckResult:
    """Every interval [c, c'] is isomorphic to the Boolean lattice on J(c) minus J(c')."""
    cells = P.cells
    n = P.rank
    memo: dict[tuple[int, int], bool] = {}

    def below(a: int, b: int) -> bool:
        hit = memo.get((a, b))
        if hit is None:
            hit = memo[(a, b)] = cells[a].J >= cells[b].J and cells[a].contains_subgraph(cells[b])
        return hit

    full = frozenset(range(n))
    for top in range(len(cells)):
        ct = cells[top]
        spare = sorted(full - ct.J)
        for k in range(len(spare) + 1):
            for extra in combinations(spare, k):
                J = ct.J | frozenset(extra)
                low = P.comp[J][ct.min_elem]
                if not below(low, top):
                    return CheckResult(False, f"{P.cell_label(low)} does not contain {P.cell_label(top)}")
                members = {}
                for r in range(k + 1):
                    for sub in combinations(extra, r):
                        x = P.comp[ct.J | frozenset(sub)][ct.min_elem]
                        if below(low, x) and below(x, top):
                            members[frozenset(sub)] = x
                if len(members) != 2**k or len(set(members.values())) != 2**k:
                    return CheckResult(
                        False, f"[{P.cell_label(low)}, {P.cell_label(top)}] has {len(set(members.values()))} cells"
                    )
                for A, x in members.items():
                    for B, y in members.items():
                        if below(x, y) != (B <= A):
                            return CheckResult(
                                False, f"order mismatch in [{P.cell_label(low)}, {P.cell_label(top)}]"
                            )
    return CheckResult(True)


def check_thin(P: FacePoset) -> CheckResult:
    facet_vertices = {P.cells[f].min_elem for f in P.facets}
    for a, c in enumerate(P.cells):
        if len(c.J) != 1:
            continue
        over = [v for v in c.vertex_set if v in facet_vertices]
        if len(over) != 2:
            return CheckResult(False, f"{P.cell_label(a)} lies in {len(over)} facets")
    return CheckResult(True)


@dataclass(frozen=True)
class ShellingReport:
    order: tuple[int, ...]
    ok: bool
    restriction_dims: tuple[int, ...]
    violation: tuple[int, str] | None = None  # (step, description)


def extends_weak_order(t: TwistedTable, order: Sequence[int]) -> bool:
    pos = {m: i for i, m in enumerate(order)}
    return all(
        pos[m] < pos[t.act[m][s]] for m in range(t.size) for s in range(t.rank) if t.rho[t.act[m][s]] > t.rho[m]
    )


def verify_shelling(P: FacePoset, order: Sequence[int]) -> ShellingReport:
    """Check the facet order ``order`` (member indices) is a shelling.

    At each step the cells of the new facet split into those already present
    (the intersection with earlier facets) and new ones. The intersection
    must be pure of codimension one and the new cells must have a unique
    minimal element, whose dimension is recorded.
    """
    t = P.twisted
    order = tuple(order)
    if sorted(order) != list(range(t.size)):
        raise ValueError("order is not a permutation of the facets")
    n = P.rank
    full = frozenset(range(n))
    subsets = _subsets(n)
    pos = {m: i for i, m in enumerate(order)}
    first = [min(pos[v] for v in c.vertex_set) for c in P.cells]
    check_ascents = extends_weak_order(t, order)
    dims = []
    for i, w in enumerate(order):
        new = [J for J in subsets if first[P.comp[J][w]] == i]
        old = [J for J in subsets if first[P.comp[J][w]] < i]
        if i > 0:
            for J in old:
                if not any(frozenset([s]) in old for s in J):
                    return ShellingReport(
                        order, False, tuple(dims), (i, f"intersection cell J={sorted(J)} not in a codim-1 cell")
                    )
        top = frozenset().union(*new)
        if top not in new:
            return ShellingReport(order, False, tuple(dims), (i, "no unique minimal new cell"))
        if check_ascents:
            ascents = full - t.descents(w)
            if top != ascents:
                raise InternalConsistencyError(
                    f"minimal new cell at step {i} has J={sorted(top)}, ascent set is {sorted(ascents)}"
                )
        dims.append(n - len(top) - 1)
    return ShellingReport(order, True, tuple(dims))


def sample_weak_extensions(t: TwistedTable, count: int, seed: int = 0, weak: FinitePoset | None = None):
    weak = weak if weak is not None else weak_poset_twisted(t)
    for k in range(count):
        yield [weak.keys[x] for x in linear_extension(weak, seed + k)]


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Sequence[int]):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def padded(self, length: int) -> list[int]:
        return list(self.coeffs) + [0] * (length - len(self.coeffs))

    def is_symmetric(self) -> bool:
        return self.coeffs == self.coeffs[::-1]

    def __str__(self) -> str:
        return " ".join(str(c) for c in self.coeffs) if self.coeffs else "0"


def f_polynomial(P: FacePoset) -> Polynomial:
    coeffs = [0] * (P.rank + 1)
    for c in P.cells:
        coeffs[c.dimension + 1] += 1
    return Polynomial(coeffs)


def h_polynomial(P: FacePoset) -> Polynomial:
    """(1-x)^(d+1) f(x/(1-x)), by binomial convolution."""
    f = f_polynomial(P).padded(P.rank + 1)
    top = P.rank
    h = [0] * (top + 1)
    for i, fi in enumerate(f):
        k = top - i
        for j in range(k + 1):
            h[i + j] += fi * comb(k, j) * (-1) ** j
    return Polynomial(h)


def descent_polynomial(t: TwistedTable) -> Polynomial:
    coeffs = [0] * (t.rank + 1)
    for m in range(t.size):
        coeffs[len(t.descents(m))] += 1
    return Polynomial(coeffs)


def h_from_shelling(report: ShellingReport, rank: int) -> Polynomial:
    h = [0] * (rank + 1)
    for r in report.restriction_dims:
        h[r + 1] += 1
    return Polynomial(h)


@dataclass(frozen=True)
class HReport:
    f: Polynomial
    h: Polynomial
    des: Polynomial
    h_shelling: Polynomial | None
    h_equals_des: bool
    shelling_matches: bool
    dehn_sommerville: bool
    euler_sphere: bool

    @property
    def ok(self) -> bool:
        return self.h_equals_des and self.shelling_matches and self.dehn_sommerville and self.euler_sphere


def check_h_identities(P: FacePoset, t: TwistedTable, seed: int = 0) -> HReport:
    f, h, des = f_polynomial(P), h_polynomial(P), descent_polynomial(t)
    order = next(sample_weak_extensions(t, 1, seed))
    report = verify_shelling(P, order)
    hs = h_from_shelling(report, P.rank) if report.ok else None
    d = P.dimension
    hv = h.padded(d + 2)
    fv = f.padded(d + 2)  # fv[i] = number of (i-1)-cells
    euler = sum((-1) ** (i - 1) * fv[i] for i in range(d + 2))
    return HReport(
        f=f,
        h=h,
        des=des,
        h_shelling=hs,
        h_equals_des=h == des,
        shelling_matches=hs == h,
        dehn_sommerville=all(hv[i] == hv[d + 1 - i] for i in range(d + 2)),
        euler_sphere=euler == (-1) ** d,
    )
