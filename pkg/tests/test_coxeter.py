import json
from itertools import permutations
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistinv.coxeter import (
    CoxeterMatrix,
    build_group,
    bruhat_leq,
    bruhat_poset,
    descents,
    mult_gen,
    parse_system,
    reduce_word,
    two_sided_weak_poset,
)
from twistinv.errors import CapExceededError, SystemSpecError


def type_a(n):
    m = [[1 if i == j else (3 if abs(i - j) == 1 else 2) for j in range(n)] for i in range(n)]
    return CoxeterMatrix(tuple(f"s{i + 1}" for i in range(n)), tuple(map(tuple, m)))


def dihedral(m):
    return CoxeterMatrix(("a", "b"), ((1, m), (m, 1)))


def one_line(word, n):
    """One-line notation of the product of adjacent transpositions in S_(n+1)."""
    p = list(range(n + 1))
    for s in word:
        p[s], p[s + 1] = p[s + 1], p[s]
    return tuple(p)


def inversions(p):
    return sum(p[i] > p[j] for i in range(len(p)) for j in range(i + 1, len(p)))


def tableau_leq(v, w):
    n = len(v)
    for i in range(1, n + 1):
        for k in range(n):
            if sum(x >= k for x in v[:i]) > sum(x >= k for x in w[:i]):
                return False
    return True


@pytest.fixture(scope="module")
def a2():
    return build_group(type_a(2))


@pytest.fixture(scope="module")
def a3():
    return build_group(type_a(3))


class TestParse:
    def test_rank_one(self):
        cm = parse_system(json.dumps({"generators": ["a"], "matrix": [[1]]}))
        assert cm.rank == 1

    def test_a2(self):
        cm = parse_system(json.dumps({"generators": ["a", "b"], "matrix": [[1, 3], [3, 1]]}))
        assert cm.m == ((1, 3), (3, 1))

    @pytest.mark.parametrize(
        "doc",
        [
            {"generators": ["a", "b"], "matrix": [[1, 3], [2, 1]]},
            {"generators": ["a", "b"], "matrix": [[1, 1], [1, 1]]},
            {"generators": ["a", "b"], "matrix": [[2, 3], [3, 1]]},
            {"generators": ["a", "b"], "matrix": [[1, 3.5], [3.5, 1]]},
            {"generators": ["a", "b"], "matrix": [[1, None], [None, 1]]},
            {"generators": ["a", "a"], "matrix": [[1, 3], [3, 1]]},
            {"generators": ["e"], "matrix": [[1]]},
            {"generators": ["a.b"], "matrix": [[1]]},
            {"generators": ["a", "b"], "matrix": [[1, 3]]},
            {"generators": ["a"]},
            {"generators": ["a"], "matrix": [[1]], "colour": "red"},
        ],
    )
    def test_rejects(self, doc):
        with pytest.raises(SystemSpecError):
            parse_system(json.dumps(doc))

    def test_rejects_malformed_json(self):
        with pytest.raises(SystemSpecError):
            parse_system("{generators:")


class TestOrders:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_type_a(self, n):
        g = build_group(type_a(n))
        assert g.order == factorial(n + 1)
        assert g.root_count == n * (n + 1) // 2
        assert g.length[g.longest] == g.root_count

    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 7, 8, 12])
    def test_dihedral(self, m):
        g = build_group(dihedral(m))
        assert (g.order, g.root_count) == (2 * m, m)

    @pytest.mark.parametrize(
        "matrix, order, roots",
        [
            (((1, 4, 2), (4, 1, 3), (2, 3, 1)), 48, 9),
            (((1, 5, 2), (5, 1, 3), (2, 3, 1)), 120, 15),
            (((1, 3, 2, 2), (3, 1, 3, 3), (2, 3, 1, 2), (2, 3, 2, 1)), 192, 12),
            (((1, 3, 2, 2), (3, 1, 4, 2), (2, 4, 1, 3), (2, 2, 3, 1)), 1152, 24),
        ],
    )
    def test_other_types(self, matrix, order, roots):
        cm = CoxeterMatrix(tuple(f"s{i + 1}" for i in range(len(matrix))), matrix)
        g = build_group(cm)
        assert (g.order, g.root_count) == (order, roots)

    def test_affine_type_is_rejected(self):
        cm = CoxeterMatrix(("a", "b", "c"), ((1, 3, 3), (3, 1, 3), (3, 3, 1)))
        with pytest.raises(CapExceededError):
            build_group(cm)

    def test_element_cap(self):
        with pytest.raises(CapExceededError):
            build_group(type_a(4), cap=100)


class TestPermutationOracle:
    """Compare against S_(n+1) acting on one-line notation."""

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_bijection_length_and_descents(self, n):
        g = build_group(type_a(n))
        images = {}
        for w in range(g.order):
            p = one_line(g.reduced_word[w], n)
            images[p] = w
            assert g.length[w] == inversions(p)
            assert g.right_descents[w] == frozenset(i for i in range(n) if p[i] > p[i + 1])
            inv = tuple(sorted(range(n + 1), key=p.__getitem__))
            assert one_line(g.reduced_word[g.inverse[w]], n) == inv
        assert set(images) == set(permutations(range(n + 1)))

    def test_a3_right_descents_of_4231(self, a3):
        w = next(w for w in range(a3.order) if one_line(a3.reduced_word[w], 3) == (3, 1, 2, 0))
        assert descents(a3, w) == frozenset({0, 2})

    @pytest.mark.parametrize("n", [2, 3])
    def test_bruhat_against_tableau_criterion(self, n):
        g = build_group(type_a(n))
        lines = [one_line(g.reduced_word[w], n) for w in range(g.order)]
        for v in range(g.order):
            for w in range(g.order):
                assert bruhat_leq(g, v, w) == tableau_leq(lines[v], lines[w])


class TestMultiplication:
    def test_examples(self, a2):
        s1, s2 = a2.element("s1"), a2.element("s2")
        assert mult_gen(a2, 0, 0) == s1
        assert mult_gen(a2, s1, 0) == 0
        s1s2 = mult_gen(a2, s1, 1)
        assert a2.length[s1s2] == 2 and a2.label(s1s2) == "s1.s2"
        assert mult_gen(a2, s2, 0, side="left") == s1s2

    def test_descents(self, a2):
        assert descents(a2, 0) == frozenset()
        assert descents(a2, a2.longest) == frozenset({0, 1})

    def test_bad_side(self, a2):
        with pytest.raises(ValueError):
            mult_gen(a2, 0, 0, side="up")

    def test_reduce_word(self, a2):
        assert reduce_word(a2, []) == (0, ())
        assert reduce_word(a2, [0, 0]) == (0, ())
        w, word = reduce_word(a2, [0, 1, 0, 1])
        assert w == a2.element("s2.s1") and len(word) == 2

    def test_labels_round_trip(self, a3):
        for w in range(a3.order):
            assert a3.element(a3.label(w)) == w
        assert a3.element("w0") == a3.longest

    def test_reduced_words_are_lexicographically_least(self, a3):
        from itertools import product

        for w in range(a3.order):
            k = a3.length[w]
            best = min(word for word in product(range(3), repeat=k) if a3.evaluate(word) == w)
            assert a3.reduced_word[w] == best

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.integers(0, 2), max_size=20))
    def test_word_evaluation_matches_permutations(self, word):
        g = build_group(type_a(3))
        assert one_line(g.reduced_word[g.evaluate(word)], 3) == one_line(word, 3)


class TestBruhat:
    def test_examples(self, a2):
        s1, s2 = a2.element("s1"), a2.element("s2")
        assert bruhat_leq(a2, 0, a2.longest)
        assert not bruhat_leq(a2, s1, s2)
        assert bruhat_leq(a2, s1, a2.element("s1.s2"))

    def test_posets(self, a2):
        assert bruhat_poset(build_group(type_a(1))).cover_pairs() == [(0, 1)]
        B = bruhat_poset(a2)
        assert B.size == 6 and B.minimal() == [0] and B.maximal() == [a2.longest]
        W = two_sided_weak_poset(a2)
        assert (W.leq <= B.leq).all()

    def test_two_sided_weak_is_coarser_in_a3(self, a3):
        B, W = bruhat_poset(a3), two_sided_weak_poset(a3)
        assert (W.leq <= B.leq).all() and (W.leq != B.leq).any()
