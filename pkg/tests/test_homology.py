from collections import Counter
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from twistinv.homology import (
    IntMatrix,
    boundary_matrices,
    reduced_homology,
    smith_normal_form,
    verify_sphere_interval,
)
from twistinv.poset import FinitePoset, SimplicialComplexData

matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def sympy_factors(rows):
    D = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    return tuple(sorted(abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0))


def minors_gcd(rows, k):
    from math import gcd

    g = 0
    for rs in combinations(range(len(rows)), k):
        for cs in combinations(range(len(rows[0])), k):
            g = gcd(g, int(sympy.Matrix([[rows[r][c] for c in cs] for r in rs]).det()))
    return g


class TestSmithNormalForm:
    def test_examples(self):
        assert smith_normal_form(IntMatrix.from_rows([[1, 0], [0, 1]])).factors == (1, 1)
        assert smith_normal_form(IntMatrix.from_rows([[1, 2], [3, 4]])).factors == (1, 2)
        assert smith_normal_form(IntMatrix.zeros(3, 2)).rank == 0
        m = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        assert smith_normal_form(m).factors == (2, 6, 12)

    @settings(max_examples=150, deadline=None)
    @given(matrices)
    def test_matches_sympy(self, rows):
        assert smith_normal_form(IntMatrix.from_rows(rows)).factors == sympy_factors(rows)

    @settings(max_examples=60, deadline=None)
    @given(matrices)
    def test_determinantal_divisors(self, rows):
        f = smith_normal_form(IntMatrix.from_rows(rows)).factors
        prod = 1
        for k in range(1, min(len(rows), len(rows[0])) + 1):
            if k <= len(f):
                prod *= f[k - 1]
                assert minors_gcd(rows, k) == prod
            else:
                assert minors_gcd(rows, k) == 0

    @settings(max_examples=60, deadline=None)
    @given(matrices, st.integers(0, 10_000))
    def test_unimodular_invariance(self, rows, seed):
        import random

        rng = random.Random(seed)
        r, c = len(rows), len(rows[0])
        A = [list(x) for x in rows]
        for _ in range(6):
            i, j = rng.sample(range(r), 2) if r > 1 else (0, 0)
            if i != j:
                q = rng.randint(-3, 3)
                A[i] = [a + q * b for a, b in zip(A[i], A[j])]
            i, j = rng.sample(range(c), 2) if c > 1 else (0, 0)
            if i != j:
                q = rng.randint(-3, 3)
                for row in A:
                    row[i] += q * row[j]
        before = smith_normal_form(IntMatrix.from_rows(rows)).factors
        assert smith_normal_form(IntMatrix.from_rows(A)).factors == before


def cycle(n):
    return SimplicialComplexData.from_facets([(i, (i + 1) % n) for i in range(n)])


# six-vertex projective plane: every edge lies in exactly two triangles
RP2 = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6), (2, 3, 5), (3, 4, 6), (2, 4, 5), (3, 5, 6), (2, 4, 6)]


class TestHomology:
    def test_boundaries(self):
        (d1,) = boundary_matrices(SimplicialComplexData.from_facets([(0, 1)]))
        assert d1.data in (((-1,), (1,)), ((1,), (-1,)))
        (d1,) = boundary_matrices(cycle(4))
        assert (d1.rows, d1.cols) == (4, 4) and smith_normal_form(d1).rank == 3
        assert boundary_matrices(SimplicialComplexData.from_facets([(0,)])) == []

    def test_profiles(self):
        assert reduced_homology(SimplicialComplexData.from_facets([(0,), (1,)])).is_sphere(0)
        assert reduced_homology(cycle(4)).is_sphere(1)
        tetra = SimplicialComplexData.from_facets(combinations(range(4), 3))
        assert reduced_homology(tetra).is_sphere(2)

    def test_torsion(self):
        edges = Counter(e for f in RP2 for e in combinations(f, 2))
        assert len(edges) == 15 and set(edges.values()) == {2}
        prof = reduced_homology(SimplicialComplexData.from_facets(RP2))
        assert prof.groups == ((-1, 0, ()), (0, 0, ()), (1, 0, (2,)), (2, 0, ()))
        assert "\t2" in prof.to_text()

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.lists(st.integers(0, 6), min_size=1, max_size=4, unique=True), min_size=1, max_size=8))
    def test_cones_are_acyclic(self, facets):
        apex = 99
        cone = SimplicialComplexData.from_facets([tuple(f) + (apex,) for f in facets])
        prof = reduced_homology(cone)
        assert all(b == 0 and not tor for _, b, tor in prof.groups)

    def test_sphere_intervals(self):
        d = FinitePoset.from_relations(4, [(0, 1), (0, 2), (1, 3), (2, 3)], rank=[0, 1, 1, 2])
        ok, prof = verify_sphere_interval(d, 0, 3)
        assert ok and prof.groups == ((-1, 0, ()), (0, 1, ()))
        assert verify_sphere_interval(d, 0, 1)[0]
