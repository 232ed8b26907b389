import random

import pytest

from twistinv.catalog import load_instance
from twistinv.cellcomplex import (
    Polynomial,
    check_boolean_intervals,
    check_thin,
    component_cell,
    descent_polynomial,
    extends_weak_order,
    f_polynomial,
    h_polynomial,
    verify_shelling,
)


@pytest.fixture(scope="module")
def a2():
    return load_instance("A2")


class TestCells:
    def test_component_examples(self, a2):
        t, G = a2.twisted, a2.graph
        c = component_cell(t, G, t.top, frozenset({0}))
        assert c.vertex_set == frozenset({t.top, t.member("s2")}) and c.min_elem == t.member("s2")
        c = component_cell(t, G, t.member("s1"), frozenset())
        assert c.vertex_set == frozenset({t.member("s1")}) and c.min_elem == t.member("s1")
        c = component_cell(t, G, t.member("s1"), frozenset({0, 1}))
        assert c.vertex_set == frozenset(range(4)) and c.min_elem == 0

    def test_random_greedy_paths_agree(self):
        i = load_instance("B3")
        t, G = i.twisted, i.graph
        rng = random.Random(4)
        for w in range(t.size):
            J = frozenset(s for s in range(t.rank) if rng.random() < 0.6)
            base = component_cell(t, G, w, J)
            for _ in range(5):
                assert component_cell(t, G, w, J, rng=rng) == base


class TestCensus:
    def test_a1(self):
        P = load_instance("A1").faces
        assert P.census() == {-1: 1, 0: 2}
        assert str(f_polynomial(P)) == "1 2" and str(h_polynomial(P)) == "1 1"

    @pytest.mark.parametrize("name", ["A2", "A2-flip"])
    def test_a2(self, name):
        P = load_instance(name).faces
        assert P.census() == {-1: 1, 0: 4, 1: 4}
        assert str(f_polynomial(P)) == "1 4 4" and str(h_polynomial(P)) == "1 2 1"

    def test_a3_descent_polynomial(self):
        assert descent_polynomial(load_instance("A3").twisted).coeffs == (1, 4, 4, 1)

    def test_polynomial(self):
        assert Polynomial([1, 2, 0, 0]).coeffs == (1, 2)
        assert Polynomial([1, 2, 1]).is_symmetric()
        assert str(Polynomial([])) == "0"


class TestStructure:
    @pytest.mark.parametrize("name", ["A1", "A2", "A3", "I2-5", "A1xA1-swap"])
    def test_thin_and_boolean(self, name):
        P = load_instance(name).faces
        assert check_thin(P)
        assert check_boolean_intervals(P)

    def test_face_poset_is_ranked_by_dimension(self, a2):
        Q = a2.faces.as_poset()
        assert Q.size == 9 and Q.minimal() == [a2.faces.bottom]
        assert len(Q.maximal()) == 4


class TestShelling:
    def test_orders(self, a2):
        t, P = a2.twisted, a2.faces
        s1, s2 = t.member("s1"), t.member("s2")
        for order in ([0, s1, s2, t.top], [0, s1, t.top, s2]):
            rep = verify_shelling(P, order)
            assert rep.ok and rep.restriction_dims == (-1, 0, 0, 1)

    def test_negative_control(self, a2):
        t = a2.twisted
        order = [t.top, 0, t.member("s1"), t.member("s2")]
        assert not extends_weak_order(t, order)
        rep = verify_shelling(a2.faces, order)
        assert not rep.ok and rep.violation[0] == 1

    def test_rejects_non_permutations(self, a2):
        with pytest.raises(ValueError):
            verify_shelling(a2.faces, [0, 0, 1, 2])
