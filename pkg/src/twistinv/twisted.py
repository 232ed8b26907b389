"""Twisted involutions: the underline action, the orbit of the identity with
its rank function, and the Bruhat order, weak order and labelled graph on it.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .coxeter import (
    CoxeterMatrix,
    GroupTable,
    _load_document,
    _matrix_from_document,
    bruhat_leq,
)
from .errors import InternalConsistencyError, SystemSpecError
from .poset import FinitePoset


@dataclass(frozen=True)
class DiagramAutomorphism:
    perm: tuple[int, ...]

    def __call__(self, s: int) -> int:
        return self.perm[s]

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.perm))

    @classmethod
    def identity(cls, rank: int) -> "DiagramAutomorphism":
        return cls(tuple(range(rank)))


def validate_automorphism(cm: CoxeterMatrix, perm: Sequence[int]) -> DiagramAutomorphism:
    n = cm.rank
    perm = tuple(perm)
    if sorted(perm) != list(range(n)):
        raise SystemSpecError(f"automorphism {perm} is not a permutation of the generators")
    for i in range(n):
        if perm[perm[i]] != i:
            raise SystemSpecError(
                f"automorphism is not an involution: {cm.generators[i]} -> {cm.generators[perm[i]]}"
                f" -> {cm.generators[perm[perm[i]]]}"
            )
    for i in range(n):
        for j in range(n):
            if cm.m[perm[i]][perm[j]] != cm.m[i][j]:
                raise SystemSpecError(
                    f"automorphism does not preserve the Coxeter matrix: "
                    f"m[{cm.generators[perm[i]]}][{cm.generators[perm[j]]}] = {cm.m[perm[i]][perm[j]]}"
                    f" != m[{cm.generators[i]}][{cm.generators[j]}] = {cm.m[i][j]}"
                )
    return DiagramAutomorphism(perm)


def automorphism_from_names(cm: CoxeterMatrix, mapping: Mapping[str, str] | None) -> DiagramAutomorphism:
    """Build theta from a name map; generators not mentioned are fixed."""
    if not mapping:
        return DiagramAutomorphism.identity(cm.rank)
    if not isinstance(mapping, Mapping) or not all(isinstance(v, str) for v in mapping.values()):
        raise SystemSpecError("'automorphism' must map generator names to generator names")
    perm = list(range(cm.rank))
    for src, dst in mapping.items():
        perm[cm.index(src)] = cm.index(dst)
    return validate_automorphism(cm, perm)


def read_system(text: str) -> tuple[CoxeterMatrix, DiagramAutomorphism]:
    """Parse a system-spec document into the matrix and theta (identity if absent)."""
    doc = _load_document(text)
    cm = _matrix_from_document(doc)
    return cm, automorphism_from_names(cm, doc.get("automorphism"))


def system_document(cm: CoxeterMatrix, theta: DiagramAutomorphism | None = None) -> str:
    doc: dict = {"generators": list(cm.generators), "matrix": [list(r) for r in cm.m]}
    if theta is not None and not theta.is_identity:
        doc["automorphism"] = {cm.generators[i]: cm.generators[j] for i, j in enumerate(theta.perm) if i != j}
    return json.dumps(doc)


def theta_image(g: GroupTable, theta: DiagramAutomorphism, w: int) -> int:
    """theta(w), by applying theta letterwise to the stored reduced word."""
    return g.evaluate([theta(s) for s in g.reduced_word[w]])


def is_twisted_involution(g: GroupTable, theta: DiagramAutomorphism, w: int) -> bool:
    return theta_image(g, theta, w) == g.inverse[w]


def underline_act(g: GroupTable, theta: DiagramAutomorphism, w: int, s: int, strict: bool = True) -> int:
    """w * s-underline: ws if l(theta(s) w s) = l(w), else theta(s) w s.

    The length criterion is only equivalent to the defining case split on
    twisted involutions; ``strict`` rejects other inputs.
    """
    if strict and not is_twisted_involution(g, theta, w):
        raise ValueError(f"{g.label(w)} is not a twisted involution")
    ws = g.right_mult[w][s]
    conj = g.left_mult[ws][theta(s)]
    return ws if g.length[conj] == g.length[w] else conj


@dataclass(frozen=True, eq=False)
class TwistedTable:
    group: GroupTable = field(repr=False)
    theta: DiagramAutomorphism
    members: tuple[int, ...] = field(repr=False)
    rho: tuple[int, ...] = field(repr=False)
    act: tuple[tuple[int, ...], ...] = field(repr=False)
    sbar_word: tuple[tuple[int, ...], ...] = field(repr=False)
    twisted_descent_flag: tuple[tuple[bool, ...], ...] = field(repr=False)
    index: dict = field(repr=False)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def rank(self) -> int:
        return self.group.rank

    def label(self, m: int) -> str:
        return self.group.label(self.members[m])

    def member(self, label: str) -> int:
        w = self.group.element(label)
        if w not in self.index:
            raise KeyError(f"{label} is not a twisted involution")
        return self.index[w]

    def descents(self, m: int) -> frozenset:
        return self.group.right_descents[self.members[m]]

    def evaluate(self, word: Sequence[int], start: int = 0) -> int:
        m = start
        for s in word:
            m = self.act[m][s]
        return m

    @property
    def top(self) -> int:
        return self.index[self.group.longest]


def enumerate_twisted(g: GroupTable, theta: DiagramAutomorphism) -> TwistedTable:
    """BFS orbit of e under the underline moves; rho is the BFS depth."""
    n = g.rank
    members = [g.identity]
    index = {g.identity: 0}
    rho = [0]
    words: list[tuple[int, ...]] = [()]
    act: list[list[int]] = []
    queue = deque([0])
    while queue:
        m = queue.popleft()
        row = []
        for s in range(n):
            u = underline_act(g, theta, members[m], s, strict=False)
            j = index.get(u)
            if j is None:
                j = len(members)
                index[u] = j
                members.append(u)
                rho.append(rho[m] + 1)
                words.append(words[m] + (s,))
                queue.append(j)
            row.append(j)
        act.append(row)
    flags = tuple(tuple(rho[act[m][s]] < rho[m] for s in range(n)) for m in range(len(members)))
    return TwistedTable(
        group=g,
        theta=theta,
        members=tuple(members),
        rho=tuple(rho),
        act=tuple(tuple(r) for r in act),
        sbar_word=tuple(words),
        twisted_descent_flag=flags,
        index=index,
    )


def brute_force_twisted(g: GroupTable, theta: DiagramAutomorphism) -> set[int]:
    return {w for w in range(g.order) if is_twisted_involution(g, theta, w)}


def _check_reduced(t: TwistedTable, word: Sequence[int]) -> int:
    m = 0
    for k, s in enumerate(word):
        m = t.act[m][s]
        if t.rho[m] != k + 1:
            raise ValueError(f"underline word {list(word)} is not reduced")
    return m


def twisted_exchange_check(t: TwistedTable, word: Sequence[int], s: int) -> tuple[bool, int | None]:
    """If appending s lowers rho, return (True, i) with letter i (1-based)
    of ``word`` removable to give the same value; else (False, None)."""
    w = _check_reduced(t, word)
    v = t.act[w][s]
    if t.rho[v] > t.rho[w]:
        return False, None
    for i in range(len(word), 0, -1):
        if t.evaluate(list(word[: i - 1]) + list(word[i:])) == v:
            return True, i
    raise InternalConsistencyError(f"no exchange witness for {list(word)} * {s}")


def bruhat_poset_twisted(g: GroupTable, t: TwistedTable) -> FinitePoset:
    """Bruhat order restricted to the twisted involutions, graded by rho."""
    n = t.size
    leq = np.zeros((n, n), dtype=bool)
    for a in range(n):
        va = t.members[a]
        for b in range(n):
            leq[a, b] = bruhat_leq(g, va, t.members[b])
    # from_leq asserts every cover raises rho by exactly one
    return FinitePoset.from_leq(leq, labels=[t.label(m) for m in range(n)], rank=t.rho, keys=range(n), check=False)


def weak_poset_twisted(t: TwistedTable) -> FinitePoset:
    edges = []
    for m in range(t.size):
        for s in range(t.rank):
            u = t.act[m][s]
            if t.rho[u] > t.rho[m]:
                if not bruhat_leq(t.group, t.members[m], t.members[u]):
                    raise InternalConsistencyError(f"weak cover {t.label(m)} < {t.label(u)} not a Bruhat relation")
                edges.append((m, u))
    return FinitePoset.from_relations(
        t.size, edges, labels=[t.label(m) for m in range(t.size)], rank=t.rho, keys=range(t.size)
    )


@dataclass(frozen=True)
class GThetaGraph:
    vertices: int
    edges: tuple[tuple[int, int, int], ...]  # (u, v, label) with u < v

    def adjacency(self) -> list[list[tuple[int, int]]]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.vertices)]
        for u, v, s in self.edges:
            adj[u].append((v, s))
            adj[v].append((u, s))
        return adj

    def multiplicity(self, u: int, v: int) -> int:
        a, b = min(u, v), max(u, v)
        return sum(1 for x, y, _ in self.edges if (x, y) == (a, b))


def g_theta_graph(t: TwistedTable) -> GThetaGraph:
    edges = []
    for m in range(t.size):
        for s in range(t.rank):
            u = t.act[m][s]
            if m < u:
                edges.append((m, u, s))
    return GThetaGraph(t.size, tuple(edges))


def swap_square(cm: CoxeterMatrix) -> tuple[CoxeterMatrix, DiagramAutomorphism]:
    """W x W with the factor-swapping involution."""
    n = cm.rank
    names = tuple(f"{x}_1" for x in cm.generators) + tuple(f"{x}_2" for x in cm.generators)
    m = [[2] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            m[i][j] = m[n + i][n + j] = cm.m[i][j]
    square = CoxeterMatrix(names, tuple(tuple(r) for r in m))
    return square, validate_automorphism(square, [(i + n) % (2 * n) for i in range(2 * n)])


def paired_element(square: GroupTable, base: GroupTable, w: int) -> int:
    """The element (w, w^-1) of W x W, for w in the base group W."""
    n = base.rank
    word = base.reduced_word[w]
    return square.evaluate(list(word) + [n + s for s in reversed(word)])
