import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistinv.catalog import load_instance
from twistinv.errors import InternalConsistencyError
from twistinv.poset import (
    FinitePoset,
    MatchingMap,
    PosetError,
    SimplicialComplexData,
    covers_of,
    interval,
    is_eulerian,
    is_linear_extension,
    linear_extension,
    matching_from_generator,
    mobius,
    mobius_matrix,
    open_interval,
    order_complex,
    to_dot,
    to_json,
    to_text,
    verify_special_matching,
)


def chain(n):
    return FinitePoset.from_relations(n, [(i, i + 1) for i in range(n - 1)], rank=range(n))


def diamond():
    return FinitePoset.from_relations(
        4, [(0, 1), (0, 2), (1, 3), (2, 3)], labels=["e", "s1", "s2", "w0"], rank=[0, 1, 1, 2]
    )


def antichain(n):
    return FinitePoset.from_leq(np.eye(n, dtype=bool))


def boolean_lattice(n):
    rel = [(a, a | 1 << i) for a in range(1 << n) for i in range(n) if not a >> i & 1]
    return FinitePoset.from_relations(1 << n, rel, rank=[bin(a).count("1") for a in range(1 << n)])


class TestConstruction:
    def test_covers(self):
        assert covers_of(chain(2)) == [(0, 1)]
        assert len(covers_of(diamond())) == 4
        assert covers_of(antichain(3)) == []

    def test_rejects_cycles(self):
        with pytest.raises(PosetError):
            FinitePoset.from_relations(2, [(0, 1), (1, 0)])

    def test_rejects_non_transitive_relation(self):
        leq = np.eye(3, dtype=bool)
        leq[0, 1] = leq[1, 2] = True
        with pytest.raises(PosetError):
            FinitePoset.from_leq(leq)

    def test_rank_must_match_covers(self):
        with pytest.raises(InternalConsistencyError):
            FinitePoset.from_relations(3, [(0, 1), (1, 2)], rank=[0, 1, 3])

    def test_intervals(self):
        d = diamond()
        assert interval(d, 0, 3).size == 4
        o = open_interval(d, 0, 3)
        assert o.labels == ("s1", "s2") and covers_of(o) == []
        assert open_interval(d, 1, 1).size == 0


class TestMobius:
    def test_values(self):
        d = diamond()
        assert mobius(d, 2, 2) == 1
        assert mobius(d, 0, 3) == 1
        assert mobius(chain(3), 0, 2) == 0

    def test_eulerian(self):
        assert is_eulerian(chain(2)).ok
        assert is_eulerian(diamond()).ok
        rep = is_eulerian(chain(3))
        assert not rep.ok and rep.counterexample == (0, 2)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_boolean_lattice(self, n):
        B = boolean_lattice(n)
        mu = mobius_matrix(B)
        for a in range(1 << n):
            for b in range(1 << n):
                if a & ~b == 0:
                    assert mu[a, b] == (-1) ** bin(b ^ a).count("1") == mobius(B, a, b)
                else:
                    assert mu[a, b] == 0

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 7), st.data())
    def test_matrix_inverts_zeta(self, n, data):
        pairs = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=12))
        P = FinitePoset.from_relations(n, [(a, b) for a, b in pairs if a < b])
        zeta = P.leq.astype(np.int64)
        assert (mobius_matrix(P) @ zeta == np.eye(n, dtype=np.int64)).all()


class TestMatchings:
    def test_diamond(self):
        assert verify_special_matching(diamond(), MatchingMap((1, 0, 3, 2))) == (True, None)
        ok, bad = verify_special_matching(antichain(4), MatchingMap((1, 0, 3, 2)))
        assert not ok and bad.kind == "not-cover"
        assert verify_special_matching(chain(2), MatchingMap((1, 0)))[0]

    def test_not_involution(self):
        ok, bad = verify_special_matching(diamond(), MatchingMap((1, 3, 0, 2)))
        assert not ok and bad.kind == "not-involution"

    def test_order_violation(self):
        # 0 < 1 < 3 and 0 < 2; the cover 0 < 1 maps to 2, 3 which are incomparable
        P = FinitePoset.from_relations(4, [(0, 1), (1, 3), (0, 2)])
        ok, bad = verify_special_matching(P, MatchingMap((2, 3, 0, 1)))
        assert not ok and bad.kind == "order" and bad.elements == (0, 1)

    def test_from_generator(self):
        t = load_instance("A2").twisted
        iv, M = matching_from_generator(t, t.top, 0)
        pairs = {frozenset((iv.labels[x], iv.labels[M[x]])) for x in range(iv.size)}
        assert pairs == {frozenset(("e", "s1")), frozenset(("s2", "s1.s2.s1"))}
        iv, M = matching_from_generator(t, t.member("s1"), 0)
        assert iv.size == 2 and M.map == (1, 0)
        with pytest.raises(ValueError):
            matching_from_generator(t, t.member("s1"), 1)

    def test_a3_top_matching_covers_everything(self):
        t = load_instance("A3").twisted
        iv, M = matching_from_generator(t, t.top, 0)
        assert iv.size == 10 and verify_special_matching(iv, M)[0]


class TestOrderComplex:
    def test_small(self):
        assert order_complex(antichain(2)).faces == (((0,), (1,)),)
        c = order_complex(chain(2))
        assert c.facets == ((0, 1),) and c.f_vector() == [2, 1]

    def test_a3_open_top_interval(self):
        i = load_instance("A3")
        c = order_complex(open_interval(i.bruhat, 0, i.twisted.top))
        assert len(c.vertices) == 8 and c.dimension == 2
        assert all(len(f) == 3 for f in c.facets)

    def test_from_facets_is_closed(self):
        c = SimplicialComplexData.from_facets([(0, 1, 2), (2, 3)])
        assert c.is_closed() and c.f_vector() == [4, 4, 1]


class TestLinearExtensions:
    def test_chain(self):
        assert linear_extension(chain(2), seed=5) == [0, 1]

    def test_diamond_reaches_both_extensions(self):
        seen = {tuple(linear_extension(diamond(), seed)) for seed in range(20)}
        assert seen == {(0, 1, 2, 3), (0, 2, 1, 3)}

    def test_seeded(self):
        B = boolean_lattice(4)
        assert linear_extension(B, 3) == linear_extension(B, 3)
        assert is_linear_extension(B, linear_extension(B, 11))
        assert not is_linear_extension(diamond(), [3, 0, 1, 2])


class TestExport:
    def test_formats(self):
        d = diamond()
        dot = to_dot(d, header="seed=0")
        assert dot.count("->") == 4 and dot.startswith("// seed=0")
        text = to_text(d)
        assert text.splitlines()[1] == "0\te\t0\t1,2"
        assert to_json(d)["elements"][3] == {"index": 3, "label": "w0", "rank": 2, "covers": []}
        assert to_text(d) == to_text(diamond())
