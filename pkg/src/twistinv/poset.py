"""Finite posets: covers, intervals, Moebius function, Eulerian and
special-matching certification, order complexes and linear extensions.

Posets are small (desk scale), so the order relation is stored as a dense
boolean matrix.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import InternalConsistencyError

EXHAUSTIVE_TRANSITIVITY_LIMIT = 500
SAMPLED_TRIPLES = 100_000


class PosetError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FinitePoset:
    leq: np.ndarray = field(repr=False)
    labels: tuple[str, ...]
    keys: tuple[Hashable, ...] = field(repr=False)
    rank: tuple[int, ...] | None = field(repr=False)
    up: tuple[tuple[int, ...], ...] = field(repr=False)
    down: tuple[tuple[int, ...], ...] = field(repr=False)
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def lt(self, x: int, y: int) -> bool:
        return x != y and bool(self.leq[x, y])

    def index_of(self, key: Hashable) -> int:
        lookup = self._memo.get("key_index")
        if lookup is None:
            lookup = self._memo["key_index"] = {k: i for i, k in enumerate(self.keys)}
        return lookup[key]

    def cover_pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.size) for y in self.up[x]]

    def minimal(self) -> list[int]:
        return [x for x in range(self.size) if not self.down[x]]

    def maximal(self) -> list[int]:
        return [x for x in range(self.size) if not self.up[x]]

    def linear_order(self) -> list[int]:
        """A fixed linear extension (by number of elements below, then index)."""
        below = self.leq.sum(axis=0)
        return sorted(range(self.size), key=lambda x: (int(below[x]), x))

    @classmethod
    def from_leq(
        cls,
        leq,
        labels: Sequence[str] | None = None,
        rank: Sequence[int] | None = None,
        keys: Sequence[Hashable] | None = None,
        check: bool = True,
    ) -> "FinitePoset":
        leq = np.array(leq, dtype=bool)
        n = leq.shape[0]
        if leq.shape != (n, n):
            raise PosetError("order relation must be a square matrix")
        if check:
            _check_partial_order(leq)
        up, down = covers_of_matrix(leq)
        labels = tuple(str(x) for x in (labels if labels is not None else range(n)))
        keys = tuple(keys) if keys is not None else tuple(range(n))
        if len(labels) != n or len(keys) != n:
            raise PosetError("labels/keys length mismatch")
        if rank is not None:
            rank = tuple(int(r) for r in rank)
            _check_rank(rank, up, down)
        return cls(leq, labels, keys, rank, up, down)

    @classmethod
    def from_relations(
        cls,
        n: int,
        relations: Iterable[tuple[int, int]],
        labels: Sequence[str] | None = None,
        rank: Sequence[int] | None = None,
        keys: Sequence[Hashable] | None = None,
    ) -> "FinitePoset":
        """Poset generated by the pairs ``x < y`` (reflexive-transitive closure)."""
        succ: list[set[int]] = [set() for _ in range(n)]
        indeg = [0] * n
        for x, y in relations:
            if x == y:
                continue
            if y not in succ[x]:
                succ[x].add(y)
                indeg[y] += 1
        order = []
        ready = [x for x in range(n) if indeg[x] == 0]
        while ready:
            x = ready.pop()
            order.append(x)
            for y in succ[x]:
                indeg[y] -= 1
                if indeg[y] == 0:
                    ready.append(y)
        if len(order) != n:
            raise PosetError("relations contain a cycle")
        reach = [0] * n
        for x in reversed(order):
            bits = 1 << x
            for y in succ[x]:
                bits |= reach[y]
            reach[x] = bits
        leq = np.zeros((n, n), dtype=bool)
        for x in range(n):
            bits = reach[x]
            leq[x] = [(bits >> y) & 1 for y in range(n)]
        return cls.from_leq(leq, labels=labels, rank=rank, keys=keys, check=False)

    def subposet(self, elements: Sequence[int]) -> "FinitePoset":
        idx = list(elements)
        sub = self.leq[np.ix_(idx, idx)]
        rank = [self.rank[i] for i in idx] if self.rank is not None else None
        return FinitePoset.from_leq(
            sub,
            labels=[self.labels[i] for i in idx],
            rank=rank,
            keys=[self.keys[i] for i in idx],
            check=False,
        )

    def dual(self) -> "FinitePoset":
        rank = None if self.rank is None else [-r for r in self.rank]
        return FinitePoset.from_leq(self.leq.T, labels=self.labels, rank=rank, keys=self.keys, check=False)


def _check_partial_order(leq: np.ndarray) -> None:
    n = leq.shape[0]
    if not np.all(np.diag(leq)):
        raise PosetError("relation is not reflexive")
    both = leq & leq.T
    np.fill_diagonal(both, False)
    if both.any():
        x, y = map(int, np.argwhere(both)[0])
        raise PosetError(f"relation is not antisymmetric: {x} <= {y} <= {x} (cycle)")
    if n <= EXHAUSTIVE_TRANSITIVITY_LIMIT:
        m = leq.astype(np.int32)
        closed = (m @ m) > 0
        if (closed & ~leq).any():
            x, y = map(int, np.argwhere(closed & ~leq)[0])
            raise PosetError(f"relation is not transitive at ({x}, {y})")
    else:
        rng = np.random.default_rng(0)
        a, b, c = rng.integers(0, n, size=(3, SAMPLED_TRIPLES))
        bad = leq[a, b] & leq[b, c] & ~leq[a, c]
        if bad.any():
            k = int(np.argmax(bad))
            raise PosetError(f"relation is not transitive at ({a[k]}, {b[k]}, {c[k]})")


def _check_rank(rank, up, down) -> None:
    for x, ys in enumerate(up):
        for y in ys:
            if rank[y] != rank[x] + 1:
                raise InternalConsistencyError(f"cover {x} < {y} changes rank by {rank[y] - rank[x]}")
    mins = {rank[x] for x in range(len(rank)) if not down[x]}
    if len(mins) > 1:
        raise InternalConsistencyError(f"minimal elements have different ranks {sorted(mins)}")


def covers_of_matrix(leq: np.ndarray) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    n = leq.shape[0]
    lt = leq.copy()
    np.fill_diagonal(lt, False)
    m = lt.astype(np.int32)
    cov = lt & ~((m @ m) > 0)
    up = tuple(tuple(int(y) for y in np.flatnonzero(cov[x])) for x in range(n))
    down = tuple(tuple(int(x) for x in np.flatnonzero(cov[:, y])) for y in range(n))
    return up, down


def covers_of(p: FinitePoset) -> list[tuple[int, int]]:
    """Transitive reduction of the order, as (lower, upper) pairs."""
    _check_partial_order(p.leq)
    up, _ = covers_of_matrix(p.leq)
    return [(x, y) for x in range(p.size) for y in up[x]]


def interval(p: FinitePoset, u: int, v: int) -> FinitePoset:
    if not p.leq[u, v]:
        raise PosetError(f"{p.labels[u]} is not <= {p.labels[v]}")
    return p.subposet(np.flatnonzero(p.leq[u] & p.leq[:, v]))


def open_interval(p: FinitePoset, u: int, v: int) -> FinitePoset:
    if not p.leq[u, v]:
        raise PosetError(f"{p.labels[u]} is not <= {p.labels[v]}")
    mask = p.leq[u] & p.leq[:, v]
    mask[u] = mask[v] = False
    return p.subposet(np.flatnonzero(mask))


def mobius(p: FinitePoset, u: int, v: int) -> int:
    if not p.leq[u, v]:
        raise PosetError(f"{p.labels[u]} is not <= {p.labels[v]}")
    memo = p._memo.setdefault("mobius", {})
    if (u, v) in memo:
        return memo[(u, v)]
    inside = [z for z in p.linear_order() if p.leq[u, z] and p.leq[z, v]]
    values: dict[int, int] = {}
    for z in inside:
        if z == u:
            values[z] = 1
        else:
            values[z] = -sum(val for y, val in values.items() if p.leq[y, z])
        memo[(u, z)] = values[z]
    return memo[(u, v)]


def mobius_matrix(p: FinitePoset) -> np.ndarray:
    """mu[u, v] for all pairs (zero when u is not <= v)."""
    n = p.size
    lt = p.leq.copy()
    np.fill_diagonal(lt, False)
    lt = lt.astype(np.int64)
    mu = np.zeros((n, n), dtype=np.int64)
    for v in p.linear_order():
        col = -(mu @ lt[:, v])
        col[v] = 1
        mu[:, v] = np.where(p.leq[:, v], col, 0)
    return mu


@dataclass(frozen=True)
class EulerianReport:
    ok: bool
    reason: str = ""
    counterexample: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def graded_rank(p: FinitePoset) -> tuple[int, ...] | None:
    """The rank function if every maximal chain in every interval has equal length."""
    if p.rank is not None:
        return p.rank
    rank = [0] * p.size
    for x in p.linear_order():
        if p.down[x]:
            below = {rank[y] + 1 for y in p.down[x]}
            if len(below) != 1:
                return None
            rank[x] = below.pop()
    if len({rank[x] for x in p.minimal()}) > 1:
        return None
    return tuple(rank)


def is_eulerian(p: FinitePoset) -> EulerianReport:
    if p.size == 0 or len(p.minimal()) != 1 or len(p.maximal()) != 1:
        return EulerianReport(False, "unbounded")
    rank = graded_rank(p)
    if rank is None:
        return EulerianReport(False, "ungraded")
    return eulerian_intervals(p, rank)


def eulerian_intervals(p: FinitePoset, rank: Sequence[int] | None = None) -> EulerianReport:
    """Check mu(u, v) = (-1)^(rank v - rank u) on every comparable pair."""
    rank = rank if rank is not None else graded_rank(p)
    if rank is None:
        return EulerianReport(False, "ungraded")
    mu = mobius_matrix(p)
    r = np.asarray(rank)
    sign = np.where((r[None, :] - r[:, None]) % 2 == 0, 1, -1)
    bad = p.leq & (mu != sign)
    if bad.any():
        u, v = map(int, np.argwhere(bad)[0])
        return EulerianReport(False, f"mu({p.labels[u]}, {p.labels[v]}) = {mu[u, v]}", (u, v))
    return EulerianReport(True)


@dataclass(frozen=True)
class MatchingMap:
    map: tuple[int, ...]

    def __getitem__(self, x: int) -> int:
        return self.map[x]

    def __len__(self) -> int:
        return len(self.map)


@dataclass(frozen=True)
class MatchingViolation:
    kind: str  # "not-total" | "not-involution" | "not-cover" | "order"
    elements: tuple[int, ...]


def verify_special_matching(p: FinitePoset, m: MatchingMap) -> tuple[bool, MatchingViolation | None]:
    n = p.size
    if len(m) != n or any(not 0 <= y < n for y in m.map):
        return False, MatchingViolation("not-total", ())
    for x in range(n):
        if m[m[x]] != x:
            return False, MatchingViolation("not-involution", (x,))
    for x in range(n):
        if m[x] not in p.up[x] and m[x] not in p.down[x]:
            return False, MatchingViolation("not-cover", (x, m[x]))
    for x in range(n):
        for y in p.up[x]:
            if m[x] != y and not p.lt(m[x], m[y]):
                return False, MatchingViolation("order", (x, y))
    return True, None


def matching_from_generator(t, w: int, s: int, bruhat: FinitePoset | None = None) -> tuple[FinitePoset, MatchingMap]:
    """The map v -> v*s on the lower Bruhat interval [e, w] of twisted involutions.

    ``w`` is a member index of ``t``; ``bruhat`` (keyed by member index) is
    sliced when given, otherwise the interval is built from the group table.
    Returns the interval poset and the matching on its element indices.
    """
    g = t.group
    if s not in g.right_descents[t.members[w]]:
        raise ValueError(f"generator {g.cm.generators[s]} is not a right descent of {t.label(w)}")
    if bruhat is None:
        from .twisted import bruhat_poset_twisted

        bruhat = bruhat_poset_twisted(g, t)
    top = bruhat.index_of(w)
    bottom = bruhat.index_of(0)
    iv = interval(bruhat, bottom, top)
    pos = {k: i for i, k in enumerate(iv.keys)}
    image = []
    for k in iv.keys:
        j = pos.get(t.act[k][s])
        if j is None:
            raise InternalConsistencyError(f"{t.label(k)} * {g.cm.generators[s]} leaves [e, {t.label(w)}]")
        image.append(j)
    return iv, MatchingMap(tuple(image))


@dataclass(frozen=True)
class SimplicialComplexData:
    vertices: tuple[int, ...]
    faces: tuple[tuple[tuple[int, ...], ...], ...]  # faces[k] = k-dimensional faces, sorted vertex tuples
    facets: tuple[tuple[int, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.faces) - 1

    def f_vector(self) -> list[int]:
        return [len(fs) for fs in self.faces]

    @classmethod
    def from_facets(cls, facets: Iterable[Sequence[int]]) -> "SimplicialComplexData":
        faces: set[tuple[int, ...]] = set()
        for f in facets:
            f = tuple(sorted(f))
            for k in range(1, len(f) + 1):
                faces.update(combinations(f, k))
        return cls._from_faces(faces)

    @classmethod
    def _from_faces(cls, faces: set[tuple[int, ...]]) -> "SimplicialComplexData":
        top = max((len(f) for f in faces), default=0)
        by_dim = tuple(tuple(sorted(f for f in faces if len(f) == k + 1)) for k in range(top))
        facets = []
        for f in sorted(faces):
            fs = set(f)
            if not any(len(g) > len(f) and fs <= set(g) for g in faces):
                facets.append(f)
        vertices = tuple(sorted({v for f in faces for v in f}))
        return cls(vertices, by_dim, tuple(facets))

    def is_closed(self) -> bool:
        present = {f for fs in self.faces for f in fs}
        return all(sub in present for f in present if len(f) > 1 for sub in combinations(f, len(f) - 1))


def order_complex(p: FinitePoset) -> SimplicialComplexData:
    """Chains of ``p`` as simplices; vertices are element indices."""
    chains: list[tuple[int, ...]] = []
    above = [[y for y in range(p.size) if p.lt(x, y)] for x in range(p.size)]

    def extend(chain: tuple[int, ...]) -> None:
        chains.append(chain)
        for y in above[chain[-1]]:
            extend(chain + (y,))

    for x in range(p.size):
        extend((x,))
    faces = {tuple(sorted(c)) for c in chains}
    top = max((len(f) for f in faces), default=0)
    by_dim = tuple(tuple(sorted(f for f in faces if len(f) == k + 1)) for k in range(top))
    maximal = tuple(
        sorted(
            tuple(sorted(c))
            for c in chains
            if not above[c[-1]] and not p.down[c[0]] and all(b in p.up[a] for a, b in zip(c, c[1:]))
        )
    )
    return SimplicialComplexData(tuple(range(p.size)), by_dim, maximal)


def linear_extension(p: FinitePoset, seed: int = 0) -> list[int]:
    """A seeded pseudo-random topological order of ``p``."""
    rng = random.Random(seed)
    indeg = [len(d) for d in p.down]
    ready = sorted(x for x in range(p.size) if indeg[x] == 0)
    out = []
    while ready:
        x = ready.pop(rng.randrange(len(ready)))
        out.append(x)
        for y in p.up[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                ready.append(y)
        ready.sort()
    return out


def is_linear_extension(p: FinitePoset, order: Sequence[int]) -> bool:
    if sorted(order) != list(range(p.size)):
        return False
    pos = {x: i for i, x in enumerate(order)}
    return all(pos[x] < pos[y] for x, y in p.cover_pairs())


def to_dot(p: FinitePoset, name: str = "poset", header: str | None = None) -> str:
    lines = []
    if header:
        lines.append(f"// {header}")
    lines.append(f'digraph "{name}" {{')
    lines.append("  rankdir=BT;")
    for x in range(p.size):
        lines.append(f'  n{x} [label="{p.labels[x]}"];')
    if p.rank is not None:
        for r in sorted(set(p.rank)):
            members = " ".join(f"n{x};" for x in range(p.size) if p.rank[x] == r)
            lines.append(f"  {{ rank=same; {members} }}")
    for x, y in p.cover_pairs():
        lines.append(f"  n{x} -> n{y};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_text(p: FinitePoset, header: str | None = None) -> str:
    """One line per element: index, label, rank, upper covers."""
    lines = []
    if header:
        lines.append(f"# {header}")
    lines.append("# index\tlabel\trank\tcovers")
    for x in range(p.size):
        r = "-" if p.rank is None else str(p.rank[x])
        lines.append(f"{x}\t{p.labels[x]}\t{r}\t{','.join(str(y) for y in p.up[x])}")
    return "\n".join(lines) + "\n"


def to_json(p: FinitePoset) -> dict:
    return {
        "elements": [
            {"index": x, "label": p.labels[x], "rank": None if p.rank is None else p.rank[x], "covers": list(p.up[x])}
            for x in range(p.size)
        ]
    }
