"""Integral reduced homology of simplicial complexes via Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InternalConsistencyError
from .poset import FinitePoset, PosetError, SimplicialComplexData, graded_rank, open_interval, order_complex


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in r) for r in rows)
        ncols = cols if cols is not None else (len(data[0]) if data else 0)
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix")
        return cls(len(data), ncols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = [
            [sum(self.data[i][k] * other.data[k][j] for k in range(self.cols)) for j in range(other.cols)]
            for i in range(self.rows)
        ]
        return IntMatrix.from_rows(out, other.cols)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)


@dataclass(frozen=True)
class SNFResult:
    factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.factors)


def _dense_factors(A: list[list[int]]) -> list[int]:
    """Invariant factors of a dense integer matrix (modified in place)."""
    factors = []
    while A and A[0]:
        nz = [(abs(x), i, j) for i, r in enumerate(A) for j, x in enumerate(r) if x]
        if not nz:
            break
        while True:
            _, pi, pj = min(nz)
            A[0], A[pi] = A[pi], A[0]
            for r in A:
                r[0], r[pj] = r[pj], r[0]
            p = A[0][0]
            for i in range(1, len(A)):
                if A[i][0]:
                    q = A[i][0] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[0])]
            for j in range(1, len(A[0])):
                if A[0][j]:
                    q = A[0][j] // p
                    for r in A:
                        r[j] -= q * r[0]
            rest = [(abs(A[i][0]), i, 0) for i in range(1, len(A)) if A[i][0]]
            rest += [(abs(A[0][j]), 0, j) for j in range(1, len(A[0])) if A[0][j]]
            if rest:
                nz = rest
                continue
            bad = next(((i, j) for i in range(1, len(A)) for j in range(1, len(A[0])) if A[i][j] % p), None)
            if bad is None:
                break
            A[0] = [a + b for a, b in zip(A[0], A[bad[0]])]
            nz = [(abs(A[0][j]), 0, j) for j in range(len(A[0])) if A[0][j]]
        factors.append(abs(p))
        A = [r[1:] for r in A[1:]]
    return factors


def smith_normal_form(m: IntMatrix) -> SNFResult:
    """Invariant factors d1 | d2 | ... of an integer matrix.

    Unit pivots are eliminated first on a sparse row representation (chain
    complexes of order complexes are mostly unimodular); the remainder goes
    through dense gcd pivoting. All arithmetic is on Python ints.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for i, r in enumerate(m.data):
        entries = {j: x for j, x in enumerate(r) if x}
        if entries:
            rows[i] = entries
            for j in entries:
                cols.setdefault(j, set()).add(i)

    units = 0
    progress = True
    while progress:
        progress = False
        for i in list(rows):
            if i not in rows:
                continue
            row = rows[i]
            c = next((j for j, x in row.items() if x in (1, -1)), None)
            if c is None:
                continue
            v = row[c]
            for i2 in list(cols[c]):
                if i2 == i:
                    continue
                r2 = rows[i2]
                f = r2[c] * v
                for j, x in row.items():
                    y = r2.get(j, 0) - f * x
                    if y:
                        if j not in r2:
                            cols.setdefault(j, set()).add(i2)
                        r2[j] = y
                    elif j in r2:
                        del r2[j]
                        cols[j].discard(i2)
                if not r2:
                    del rows[i2]
            for j in row:
                cols[j].discard(i)
            del cols[c]
            del rows[i]
            units += 1
            progress = True

    live_cols = sorted(j for j, s in cols.items() if s)
    pos = {j: k for k, j in enumerate(live_cols)}
    dense = []
    for r in rows.values():
        line = [0] * len(live_cols)
        for j, x in r.items():
            line[pos[j]] = x
        dense.append(line)
    factors = [1] * units + _dense_factors(dense)
    for a, b in zip(factors, factors[1:]):
        if b % a:
            raise InternalConsistencyError(f"invariant factors {factors} do not form a divisibility chain")
    return SNFResult(tuple(factors))


def _as_array(m: IntMatrix) -> np.ndarray:
    return np.asarray(m.data, dtype=np.int64).reshape(m.rows, m.cols)


def boundary_matrices(c: SimplicialComplexData) -> list[IntMatrix]:
    """[d_1, ..., d_dim]; d_k has rows indexed by (k-1)-faces and columns by k-faces."""
    if not c.is_closed():
        raise ValueError("complex is not closed under taking faces")
    mats = []
    for k in range(1, len(c.faces)):
        lower = {f: i for i, f in enumerate(c.faces[k - 1])}
        data = [[0] * len(c.faces[k]) for _ in c.faces[k - 1]]
        for j, face in enumerate(c.faces[k]):
            for i in range(len(face)):
                data[lower[face[:i] + face[i + 1 :]]][j] = (-1) ** i
        mats.append(IntMatrix.from_rows(data, len(c.faces[k])))
    for a, b in zip(mats, mats[1:]):
        if np.any(_as_array(a) @ _as_array(b)):
            raise InternalConsistencyError("boundary of boundary is not zero")
    return mats


@dataclass(frozen=True)
class HomologyProfile:
    groups: tuple[tuple[int, int, tuple[int, ...]], ...]  # (dimension, betti, torsion)

    def betti(self, k: int) -> int:
        return next((b for d, b, _ in self.groups if d == k), 0)

    def is_sphere(self, d: int) -> bool:
        return all(b == (1 if k == d else 0) and not tor for k, b, tor in self.groups) and self.betti(d) == 1

    def to_text(self) -> str:
        lines = ["# dim\tbetti\ttorsion"]
        for d, b, tor in self.groups:
            lines.append(f"{d}\t{b}\t{','.join(map(str, tor)) or '-'}")
        return "\n".join(lines) + "\n"


def reduced_homology(c: SimplicialComplexData) -> HomologyProfile:
    sizes = [1] + [len(fs) for fs in c.faces]  # sizes[k + 1] = number of k-faces
    if len(sizes) == 1:
        return HomologyProfile(((-1, 1, ()),))
    snfs = [smith_normal_form(IntMatrix.from_rows([[1] * sizes[1]]))]
    snfs += [smith_normal_form(m) for m in boundary_matrices(c)]
    # snfs[k] describes d_k : C_k -> C_(k-1), for k = 0 .. dim
    groups = []
    top = len(sizes) - 2
    for k in range(-1, top + 1):
        out_rank = snfs[k].rank if k >= 0 else 0
        incoming = snfs[k + 1] if k + 1 < len(snfs) else SNFResult(())
        betti = sizes[k + 1] - out_rank - incoming.rank
        torsion = tuple(d for d in incoming.factors if d > 1)
        groups.append((k, betti, torsion))
    return HomologyProfile(tuple(groups))


def verify_sphere_interval(p: FinitePoset, u: int, v: int) -> tuple[bool, HomologyProfile]:
    """Does the open interval (u, v) have the homology of a sphere of dimension rank(v) - rank(u) - 2?"""
    if not p.lt(u, v):
        raise PosetError(f"{p.labels[u]} is not < {p.labels[v]}")
    rank = graded_rank(p)
    if rank is None:
        raise PosetError("poset is not graded")
    profile = reduced_homology(order_complex(open_interval(p, u, v)))
    return profile.is_sphere(rank[v] - rank[u] - 2), profile
