from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittlift import corpus
from wittlift.errors import BudgetExceeded, NotAGroup, NotAPermutation, NotASubgroup
from wittlift.groups import FiniteGroup, GSet, orbits


def test_closure_examples():
    S3 = FiniteGroup.from_permutations(3, [[1, 2, 0], [1, 0, 2]])
    assert S3.order == 6 and not S3.is_abelian()
    V4 = FiniteGroup.from_permutations(4, [[1, 0, 3, 2], [2, 3, 0, 1]])
    assert V4.order == 4 and set(V4.element_orders) == {1, 2}


def test_bad_inputs():
    with pytest.raises(NotAPermutation):
        FiniteGroup.from_permutations(3, [[0, 0, 1]])
    with pytest.raises(NotAGroup):
        FiniteGroup([[0, 1], [1, 1]])
    with pytest.raises(BudgetExceeded):
        FiniteGroup.from_permutations(6, [[1, 2, 3, 4, 5, 0], [1, 0, 2, 3, 4, 5]], budget=100)


@pytest.mark.parametrize("name,count", [("trivial", 1), ("C2", 2), ("C3", 2), ("C4", 3),
                                        ("C2xC2", 5), ("S3", 6), ("D4", 10), ("Q8", 6),
                                        ("A4", 10), ("S4", 30)])
def test_subgroup_counts(name, count):
    G = corpus.group(name)
    subs = G.subgroups()
    assert len(subs) == count
    assert len({s.elements for s in subs}) == count
    for H in subs:
        assert set(G.closure(H.elements)) == set(H.elements)
        assert G.order % H.order == 0


@pytest.mark.parametrize("name", sorted(corpus.GROUP_SPECS))
def test_sylow(name):
    G = corpus.group(name)
    for p in (2, 3):
        P = G.sylow(p)
        k = G.order
        while k % p == 0:
            k //= p
        assert P.order * k == G.order and P.index % p != 0


def test_sylow_s3():
    assert corpus.group("S3").sylow(3).order == 3


def test_subgroup_checks():
    G = corpus.group("S3")
    a, b = G.generators
    with pytest.raises(NotASubgroup):
        G.subgroup([0, a, b])
    assert G.subgroup(G.closure([a])).order in (2, 3)


@pytest.mark.parametrize("name", sorted(corpus.GROUP_SPECS))
def test_table_axioms(name):
    G = corpus.group(name)
    T = G.table
    for a, b, c in itertools.islice(itertools.product(range(G.order), repeat=3), 2000):
        assert T[T[a, b], c] == T[a, T[b, c]]
    for a in range(G.order):
        assert G.mul(a, G.inverse(a)) == 0


def test_abelianization():
    assert corpus.group("S3").abelianization.order == 2
    assert corpus.group("Q8").abelianization.order == 4
    assert corpus.group("A4").abelianization.order == 3
    assert sorted(corpus.group("C2xC2").abelianization.invariants) == [2, 2]


def test_orbits_product():
    C2 = FiniteGroup.cyclic(2)
    X = GSet.regular(C2).product(GSet.regular(C2))
    orbs = orbits(C2, X)
    assert len(orbs) == 2
    assert all(o.stabilizer.order == 1 for o in orbs)


@pytest.mark.parametrize("name", ["S3", "D4", "A4"])
def test_orbit_stabilizer(name):
    G = corpus.group(name)
    for H in G.subgroups():
        X = GSet.cosets(G, H)
        for o in orbits(G, X):
            assert len(o.points) * o.stabilizer.order == G.order
            for pt, s in o.transversal.items():
                assert X.action[s, o.base] == pt


@given(st.integers(1, 12))
def test_cyclic(n):
    G = FiniteGroup.cyclic(n)
    assert G.order == n and G.is_abelian()
    g = G.cyclic_generator()
    assert sorted(G.power(g, k) for k in range(n)) == list(range(n))


def test_json_roundtrip():
    for name in corpus.GROUP_SPECS:
        G = corpus.group(name)
        H = FiniteGroup.from_json(G.to_json())
        assert np.array_equal(H.table, G.table)
