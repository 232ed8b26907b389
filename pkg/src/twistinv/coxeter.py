"""Finite Coxeter groups as exact permutation tables on signed roots.

The positive roots are bootstrapped numerically in the geometric
representation, each generator is then frozen as a permutation of the
signed roots, and everything downstream (lengths, descents, multiplication,
Bruhat order) is integer table arithmetic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CapExceededError, InternalConsistencyError, SystemSpecError
from .poset import FinitePoset

ROOT_TOL = 1e-9
DEFAULT_ELEMENT_CAP = 100_000
DEFAULT_ROOT_CAP = 1_000

SYSTEM_FIELDS = {"generators", "matrix", "automorphism"}
RESERVED_NAMES = {"e", "w0"}


@dataclass(frozen=True)
class CoxeterMatrix:
    generators: tuple[str, ...]
    m: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.generators)
        if n == 0:
            raise SystemSpecError("a Coxeter system needs at least one generator")
        if len(set(self.generators)) != n:
            raise SystemSpecError(f"duplicate generator names: {list(self.generators)}")
        for name in self.generators:
            if not isinstance(name, str) or not name:
                raise SystemSpecError(f"generator names must be nonempty strings, got {name!r}")
            if name in RESERVED_NAMES or any(c in name for c in ".: \t\n"):
                raise SystemSpecError(f"generator name {name!r} is reserved or contains '.', ':' or whitespace")
        if len(self.m) != n or any(len(row) != n for row in self.m):
            raise SystemSpecError(f"matrix must be {n}x{n}")
        for i in range(n):
            for j in range(n):
                x = self.m[i][j]
                if isinstance(x, bool) or not isinstance(x, int):
                    raise SystemSpecError(f"infinite or non-integer label m[{i}][{j}] = {x!r}")
                if x < 1:
                    raise SystemSpecError(f"entry m[{i}][{j}] = {x} < 1")
                if i == j and x != 1:
                    raise SystemSpecError(f"diagonal entry m[{i}][{i}] = {x} != 1")
                if i != j and x < 2:
                    raise SystemSpecError(f"off-diagonal entry m[{i}][{j}] = {x} < 2")
                if self.m[j][i] != x:
                    raise SystemSpecError(f"matrix not symmetric at ({i}, {j})")

    @property
    def rank(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise SystemSpecError(f"unknown generator {name!r}") from None


def _load_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemSpecError(f"malformed system document: {exc}") from None
    if not isinstance(doc, dict):
        raise SystemSpecError("system document must be a single object")
    unknown = set(doc) - SYSTEM_FIELDS
    if unknown:
        raise SystemSpecError(f"unknown fields: {sorted(unknown)}")
    for key in ("generators", "matrix"):
        if key not in doc:
            raise SystemSpecError(f"missing field {key!r}")
    return doc


def _matrix_from_document(doc: dict) -> CoxeterMatrix:
    gens = doc["generators"]
    mat = doc["matrix"]
    if not isinstance(gens, list):
        raise SystemSpecError("'generators' must be a list of strings")
    if not isinstance(mat, list) or not all(isinstance(row, list) for row in mat):
        raise SystemSpecError("'matrix' must be a list of rows")
    return CoxeterMatrix(tuple(gens), tuple(tuple(row) for row in mat))


def parse_system(text: str) -> CoxeterMatrix:
    """Parse a JSON system-spec document into a validated matrix.

    The optional "automorphism" field is only checked for shape here; see
    :func:`twistinv.twisted.read_system` for the full (matrix, theta) pair.
    """
    doc = _load_document(text)
    cm = _matrix_from_document(doc)
    auto = doc.get("automorphism")
    if auto is not None and not isinstance(auto, dict):
        raise SystemSpecError("'automorphism' must be a map generator -> generator")
    return cm


@dataclass(frozen=True, eq=False)
class GroupTable:
    cm: CoxeterMatrix
    order: int
    root_count: int
    roots: np.ndarray = field(repr=False)  # positive roots, simple-root coordinates (bootstrap only)
    perms: np.ndarray = field(repr=False)  # order x 2N signed-root images; index k+N is -root k
    length: tuple[int, ...] = field(repr=False)
    reduced_word: tuple[tuple[int, ...], ...] = field(repr=False)
    right_mult: tuple[tuple[int, ...], ...] = field(repr=False)
    left_mult: tuple[tuple[int, ...], ...] = field(repr=False)
    right_descents: tuple[frozenset, ...] = field(repr=False)
    left_descents: tuple[frozenset, ...] = field(repr=False)
    inverse: tuple[int, ...] = field(repr=False)
    longest: int
    bruhat_memo: dict = field(default_factory=dict, repr=False)

    identity = 0

    @property
    def rank(self) -> int:
        return self.cm.rank

    def label(self, w: int) -> str:
        word = self.reduced_word[w]
        if not word:
            return "e"
        return ".".join(self.cm.generators[i] for i in word)

    def element(self, label: str) -> int:
        """Inverse of :meth:`label`; also accepts ``w0``."""
        if label == "e":
            return self.identity
        if label == "w0":
            return self.longest
        return reduce_word(self, [self.cm.index(x) for x in label.split(".")])[0]

    def evaluate(self, word: Sequence[int], start: int = 0) -> int:
        w = start
        for s in word:
            w = self.right_mult[w][s]
        return w


def _bilinear_form(cm: CoxeterMatrix) -> np.ndarray:
    n = cm.rank
    B = np.eye(n)
    for i in range(n):
        for j in range(n):
            if i != j and cm.m[i][j] != 2:
                B[i, j] = -math.cos(math.pi / cm.m[i][j])
    return B


def _bootstrap_roots(cm: CoxeterMatrix, root_cap: int) -> tuple[np.ndarray, np.ndarray]:
    """Positive roots and the generator permutations of the signed roots."""
    n = cm.rank
    B = _bilinear_form(cm)
    roots: list[np.ndarray] = [np.eye(n)[i] for i in range(n)]
    # image[i][k] = signed index of s_i(root k); filled as roots appear
    image: list[list[int]] = [[] for _ in range(n)]

    def find(v: np.ndarray) -> int:
        arr = np.asarray(roots)
        d = np.max(np.abs(arr - v), axis=1)
        k = int(np.argmin(d))
        return k if d[k] < ROOT_TOL else -1

    k = 0
    while k < len(roots):
        beta = roots[k]
        for i in range(n):
            if k == i:
                image[i].append(-1)  # s_i(alpha_i) = -alpha_i, patched below
                continue
            gamma = beta - 2.0 * float(B[i] @ beta) * roots[i]
            if not np.all(gamma >= -ROOT_TOL):
                raise CapExceededError(
                    f"root bootstrap produced a non-positive image of a positive root under {cm.generators[i]}"
                )
            j = find(gamma)
            if j < 0:
                if len(roots) >= root_cap:
                    raise CapExceededError(f"more than {root_cap} positive roots: infinite or too large")
                gamma[np.abs(gamma) < ROOT_TOL] = 0.0
                roots.append(gamma)
                j = len(roots) - 1
            image[i].append(j)
        k += 1

    N = len(roots)
    perms = np.empty((n, 2 * N), dtype=np.int32)
    for i in range(n):
        for k, j in enumerate(image[i]):
            j = N + i if k == i else j
            perms[i, k] = j
            perms[i, k + N] = (j + N) % (2 * N)
    return np.asarray(roots), perms


def _perm_order(p: np.ndarray, limit: int) -> int:
    ident = np.arange(len(p))
    q = p.copy()
    for k in range(1, limit + 1):
        if np.array_equal(q, ident):
            return k
        q = p[q]
    return -1


def _certify(cm: CoxeterMatrix, perms: np.ndarray) -> None:
    n = cm.rank
    ident = np.arange(perms.shape[1])
    for i in range(n):
        if not np.array_equal(perms[i][perms[i]], ident):
            raise InternalConsistencyError(f"generator {cm.generators[i]} is not an involution on roots")
        for j in range(i + 1, n):
            comp = perms[i][perms[j]]
            order = _perm_order(comp, cm.m[i][j] + 1)
            if order != cm.m[i][j]:
                raise InternalConsistencyError(
                    f"(s{i} s{j}) has order {order} on roots, expected {cm.m[i][j]}"
                )


def build_group(cm: CoxeterMatrix, cap: int = DEFAULT_ELEMENT_CAP, root_cap: int = DEFAULT_ROOT_CAP) -> GroupTable:
    if cap < 1:
        raise ValueError("cap must be >= 1")
    n = cm.rank
    roots, gens = _bootstrap_roots(cm, root_cap)
    _certify(cm, gens)
    N = roots.shape[0]

    ident = np.arange(2 * N, dtype=np.int32)
    perms = [ident]
    index = {tuple(ident[:n]): 0}
    length = [0]
    words: list[tuple[int, ...]] = [()]
    right: list[list[int]] = []

    k = 0
    while k < len(perms):
        p = perms[k]
        row = []
        for i in range(n):
            q = p[gens[i]]
            key = tuple(q[:n])
            j = index.get(key)
            if j is None:
                if len(perms) >= cap:
                    raise CapExceededError(f"group has more than {cap} elements")
                j = len(perms)
                index[key] = j
                perms.append(q)
                length.append(length[k] + 1)
                words.append(words[k] + (i,))
            row.append(j)
        right.append(row)
        k += 1

    P = np.stack(perms)
    order = len(perms)
    negatives = (P[:, :N] >= N).sum(axis=1)
    if not np.array_equal(negatives, np.asarray(length)):
        raise InternalConsistencyError("BFS length disagrees with inversion count on roots")

    left = []
    for p in perms:
        left.append([index[tuple(gens[i][p[:n]])] for i in range(n)])
    inverse = [index[tuple(np.argsort(p)[:n])] for p in perms]

    rdes = [frozenset(i for i in range(n) if p[i] >= N) for p in perms]
    ldes = [rdes[inverse[w]] for w in range(order)]

    top = max(length)
    longest = [w for w in range(order) if length[w] == top]
    if len(longest) != 1 or top != N:
        raise InternalConsistencyError("longest element is not unique or has length != root count")

    return GroupTable(
        cm=cm,
        order=order,
        root_count=N,
        roots=roots,
        perms=P,
        length=tuple(length),
        reduced_word=tuple(words),
        right_mult=tuple(tuple(r) for r in right),
        left_mult=tuple(tuple(r) for r in left),
        right_descents=tuple(rdes),
        left_descents=tuple(ldes),
        inverse=tuple(inverse),
        longest=longest[0],
    )


def _check_index(g: GroupTable, w: int) -> None:
    if not 0 <= w < g.order:
        raise IndexError(f"element index {w} out of range for group of order {g.order}")


def mult_gen(g: GroupTable, w: int, s: int, side: str = "right") -> int:
    _check_index(g, w)
    if not 0 <= s < g.rank:
        raise IndexError(f"generator index {s} out of range")
    if side == "right":
        return g.right_mult[w][s]
    if side == "left":
        return g.left_mult[w][s]
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def descents(g: GroupTable, w: int, side: str = "right") -> frozenset:
    _check_index(g, w)
    if side == "right":
        return g.right_descents[w]
    if side == "left":
        return g.left_descents[w]
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def reduce_word(g: GroupTable, word: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    for s in word:
        if not 0 <= s < g.rank:
            raise IndexError(f"generator index {s} out of range")
    w = g.evaluate(word)
    return w, g.reduced_word[w]


def bruhat_leq(g: GroupTable, v: int, w: int) -> bool:
    """v <= w in Bruhat order, by the lifting recursion.

    Descends along the smallest right descent of w. Only one branch is ever
    taken, so the recursion is a loop; results are memoized per group.
    """
    memo = g.bruhat_memo
    key = (v, w)
    hit = memo.get(key)
    if hit is not None:
        return hit
    a, b = v, w
    length, rdes, rm = g.length, g.right_descents, g.right_mult
    while True:
        if length[a] > length[b]:
            res = False
            break
        if a == 0:
            res = True
            break
        s = min(rdes[b])
        if s in rdes[a]:
            a = rm[a][s]
        b = rm[b][s]
    memo[key] = res
    return res


def bruhat_poset(g: GroupTable) -> FinitePoset:
    n = g.order
    leq = np.zeros((n, n), dtype=bool)
    for v in range(n):
        for w in range(n):
            leq[v, w] = bruhat_leq(g, v, w)
    return FinitePoset.from_leq(leq, labels=[g.label(w) for w in range(n)], rank=g.length)


def two_sided_weak_poset(g: GroupTable) -> FinitePoset:
    """Transitive closure of the union of the left and right weak orders."""
    edges = []
    for w in range(g.order):
        for s in range(g.rank):
            for u in (g.right_mult[w][s], g.left_mult[w][s]):
                if g.length[u] > g.length[w]:
                    edges.append((w, u))
    return FinitePoset.from_relations(
        g.order, edges, labels=[g.label(w) for w in range(g.order)], rank=g.length
    )

