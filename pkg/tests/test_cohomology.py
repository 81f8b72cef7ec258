from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittlift import cohomology as co
from wittlift import corpus
from wittlift import gmodules as gm
from wittlift.errors import NotACocycle, NotCyclic
from wittlift.groups import FiniteGroup, GSet
from wittlift.witt import FieldDesc, WittRing

F2, F3 = FieldDesc(2), FieldDesc(3)
C2, C3, C4 = (FiniteGroup.cyclic(n) for n in (2, 3, 4))


def sign_z4():
    return gm.GModule.from_ints(WittRing(F2, 2), C2, [[[3]]])


def test_examples():
    assert co.cohomology_group(None, gm.GModule.trivial(WittRing(F2, 1), C2), 1).orders == [2]
    assert co.cohomology_group(None, sign_z4(), 1).orders == [2]
    assert co.cohomology_group(None, gm.GModule.trivial(WittRing(F3, 1), C3), 2).orders == [3]


def test_oracle_examples():
    assert co.cyclic_oracle(C2, gm.GModule.trivial(WittRing(F2, 1), C2), 1)[0] == [2]
    assert co.cyclic_oracle(C4, gm.GModule.trivial(WittRing(F2, 1), C4), 2)[0] == [2]
    assert co.cyclic_oracle(C2, gm.GModule.trivial(WittRing(F2, 2), C2), 1)[0] == [2]
    with pytest.raises(NotCyclic):
        S3 = corpus.group("S3")
        co.cyclic_oracle(S3, gm.GModule.trivial(WittRing(F2, 1), S3), 1)


def test_degree_zero_is_fixed_points():
    P = gm.GModule.permutation(WittRing(F3, 2), GSet.natural(corpus.group("S3")))
    H0 = co.cohomology_group(None, P, 0)
    assert H0.orders == [9]


@pytest.mark.parametrize("p,d", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_bar_matches_naive_s3(p, d):
    P = gm.GModule.permutation(WittRing(FieldDesc(p), d), GSet.natural(corpus.group("S3")))
    for n in (0, 1, 2):
        H = co.cohomology_group(None, P, n)
        assert sorted(H.orders) == sorted(co.naive_cohomology(P, n)[0])
        for r in H.representatives:
            assert H.is_cocycle(r)


@given(st.integers(0, 2), st.integers(0, 10 ** 6))
def test_dd_is_zero(n, seed):
    rng = np.random.default_rng(seed)
    P = gm.GModule.permutation(WittRing(F3, 2), GSet.natural(corpus.group("S3")))
    c = rng.integers(0, 9, size=(6,) * n + (3,))
    assert not co.differential(P, n + 1, co.differential(P, n, c)).any()


@given(st.integers(0, 10 ** 6))
def test_class_roundtrip_and_coboundaries(seed):
    rng = np.random.default_rng(seed)
    M = corpus.rep("c4_unipotent")
    H = co.cohomology_group(None, M, 1)
    coords = [int(rng.integers(0, o)) for o in H.orders]
    z = H.cocycle(coords)
    assert H.class_of(z).tolist() == coords
    b = rng.integers(0, M.ring.modulus, size=(M.dim,))
    shifted = z + co.differential(M, 0, M.reduce_rows(b))
    assert H.class_of(shifted).tolist() == coords
    if not any(coords):
        assert H.cobounding(z) is not None


def test_not_a_cocycle():
    H = co.cohomology_group(None, gm.GModule.trivial(WittRing(F2, 1), C2), 1)
    with pytest.raises(NotACocycle):
        H.class_of(np.array([[1], [0]]))


@pytest.mark.parametrize("label,M", corpus.cyclic_family(6), ids=lambda x: x if isinstance(x, str) else "")
def test_cyclic_oracle_small(label, M):
    for n in (0, 1, 2):
        assert co.oracle_agrees(M, n)


def test_surjectivity_examples():
    A = sign_z4()
    B = gm.truncate(A, 1)
    F = np.eye(1, dtype=np.int64)
    im = co.induced_map(F, 1, None, A, B)
    assert im.matrix.shape == (1, 1) and im.is_surjective()
    assert co.is_n_surjective(F, 1, None, A, B).surjective

    A = gm.GModule.trivial(WittRing(F3, 2), C3)
    rep = co.is_n_surjective(F, 1, None, A, gm.truncate(A, 1))
    assert not rep.surjective
    assert rep.witness.subgroup.order == 3 and rep.witness.witness is not None


def test_restriction_to_trivial():
    G = C2
    M = gm.GModule.permutation(WittRing(F2, 1), GSet.regular(G))
    r = co.restriction_map(M, 1, G.whole(), G.trivial_subgroup())
    assert r.target.orders == []


@pytest.mark.parametrize("gname,kind", [("C2", "regular"), ("S3", "natural"), ("D4", "natural"),
                                        ("S3", "cosets")])
def test_shapiro(gname, kind):
    G = corpus.group(gname)
    if kind == "regular":
        X = GSet.regular(G)
    elif kind == "natural":
        X = GSet.natural(G)
    else:
        X = GSet.cosets(G, G.sylow(2))
    for p in (2, 3):
        sh = co.shapiro(G, X, WittRing(FieldDesc(p), 1))
        assert sh.verify()
        total = 1
        for Hi in sh.stabilizer_groups():
            total *= Hi.size
        assert co.cohomology_group(None, sh.module, 1).size == total


def test_free_orbit_shapiro():
    sh = co.shapiro(C2, GSet.regular(C2), WittRing(F2, 1))
    assert co.cohomology_group(None, sh.module, 1).orders == []
    assert co.naive_cohomology(sh.module, 1)[0] == []
