from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittlift import corpus
from wittlift import gmodules as gm
from wittlift.errors import (IndexDivisibleByP, InputError, NonFreeDual, NotAHomomorphism,
                             NotEquivariant)
from wittlift.groups import FiniteGroup, GSet
from wittlift.witt import FieldDesc, WittRing

F2, F3 = FieldDesc(2), FieldDesc(3)
F4 = FieldDesc(2, 2, (1, 1, 1))
C2, C3 = FiniteGroup.cyclic(2), FiniteGroup.cyclic(3)


def test_validation_examples():
    with pytest.raises(NotAHomomorphism):
        gm.GModule.from_ints(WittRing(F2, 2), C2, [[[1, 1], [0, 1]]])
    with pytest.raises(InputError):
        gm.GModule.from_ints(WittRing(F3, 2), C3, [[[2]]])
    M = gm.GModule.from_ints(WittRing(F2, 2), C2, [[[1, 1], [0, 3]]])
    assert M.is_free() and M.rank == 2


def test_profile_checked():
    # entry (0,1) maps a W_1 summand into W_2 and must be divisible by p
    R = WittRing(F2, 2)
    with pytest.raises(InputError):
        gm.GModule.from_ints(R, C2, [[[1, 1], [0, 1]]], profile=(2, 1))
    gm.GModule.from_ints(R, C2, [[[1, 2], [0, 1]]], profile=(2, 1))


def test_fixed_points_regular():
    P = gm.GModule.permutation(WittRing(F2, 1), GSet.regular(C2))
    fp = gm.fixed_points(P)
    assert fp.exps == [1] and fp.basis[..., 0].ravel().tolist() == [1, 1]


def test_hom_tensor_dual_ranks():
    S3 = corpus.group("S3")
    P = gm.GModule.permutation(WittRing(F3, 2), GSet.natural(S3))
    assert gm.hom(P, P).rank == 9 and gm.tensor(P, P).rank == 9
    assert gm.dual(P).rank == 3
    # Hom(P, P)^G = End_G(P) has rank 2 for the natural S3 action
    assert gm.fixed_points(gm.hom(P, P)).exps == [2, 2]
    with pytest.raises(NonFreeDual):
        gm.dual(gm.truncate(P, 1))


def test_hom_vec_roundtrip(rng):
    f = rng.integers(0, 9, (3, 2, 1))
    v = gm.hom_vec(f)
    assert np.array_equal(gm.hom_unvec(v, 3, 2), f)
    # column-major: the first column of f comes first
    assert np.array_equal(v[:3], f[:, 0])


def test_frobenius_twist_f4():
    R = WittRing(F4, 2)
    chi = gm.characters(C3, R)[1]
    M = chi.module()
    T = gm.frobenius_twist(M)
    assert not T.same_action(M)
    assert gm.frobenius_twist(M, 2).same_action(M)
    assert gm.frobenius_twist(T).same_action(M)


def test_character_counts():
    R2 = WittRing(F2, 2)
    assert len(gm.characters(corpus.group("C2xC2"), R2)) == 4
    assert len(gm.characters(corpus.group("S3"), WittRing(F3, 2))) == 2
    assert len(gm.characters(C3, WittRing(F4, 2))) == 3
    chars = gm.characters(corpus.group("C4"), R2)
    assert chars[0].is_trivial() and len(chars) == 2


@pytest.mark.parametrize("name", ["C2", "C4", "C2xC2"])
def test_character_values_are_homomorphisms(name):
    G = corpus.group(name)
    R = WittRing(F2, 3)
    for chi in gm.characters(G, R):
        M = chi.module()
        assert M.rank == 1
        assert chi.power(2).module().rank == 1
        for a in range(G.order):
            for b in range(G.order):
                lhs = chi.value(G.mul(a, b))
                assert lhs == chi.value(a) * chi.value(b)


def test_norm_splitting_c2_p3():
    V = gm.GModule.trivial(WittRing(F3, 1), C2, 1)
    ns = gm.norm_splitting(V, C2.trivial_subgroup())
    assert ns.induced.rank == 2 and ns.W.rank == 1
    assert gm.is_equivariant(gm.direct_sum(V, ns.W), ns.induced, ns.phi)
    I = ns.induced
    assert np.array_equal(I.reduce_rows(ns.idempotent @ ns.idempotent), ns.idempotent)


@pytest.mark.parametrize("rep", ["s3_natural_f2", "s3_sign_f3"])
def test_norm_splitting_s3(rep):
    V = corpus.rep(rep)
    G = V.group
    p = V.p
    for H in G.subgroups():
        if H.index % p:
            ns = gm.norm_splitting(V, H)
            e = ns.idempotent
            assert np.array_equal(ns.induced.reduce_rows(e @ e), e)
            assert gm.is_equivariant(gm.direct_sum(V, ns.W), ns.induced, ns.phi)
        else:
            with pytest.raises(IndexDivisibleByP):
                gm.norm_splitting(V, H)


def test_restrict_induce_contains_summand():
    V = corpus.rep("s3_natural_f2")
    H = V.group.sylow(2)
    ind = gm.induce(gm.restrict(V, H), H)
    assert ind.rank == 3 * V.rank


def test_submodule_quotient():
    P = gm.GModule.permutation(WittRing(F2, 2), GSet.natural(corpus.group("S3")))
    ones = np.ones((3, 1, 1), dtype=np.int64)
    sub = gm.submodule(P, ones)
    assert sub.module.profile == (2,)
    Q = gm.quotient(P, ones)
    assert Q.module.profile == (2, 2)
    with pytest.raises(NotEquivariant):
        gm.submodule(P, np.array([[[1]], [[0]], [[0]]]))


def test_extend_scalars():
    P = gm.GModule.permutation(WittRing(F2, 2), GSet.natural(corpus.group("S3")))
    E = gm.extend_scalars(P, F4)
    assert E.ring.field == F4 and E.rank == 3


@pytest.mark.parametrize("name", sorted(corpus.REP_SPECS))
def test_corpus_rep_json_roundtrip(name):
    M = corpus.rep(name)
    back = gm.GModule.from_json(M.to_json(include_group=True))
    assert np.array_equal(back.real, M.real) and back.profile == M.profile


@given(st.integers(0, 3), st.integers(0, 3))
def test_twist_by_characters_composes(i, j):
    R = WittRing(F2, 2)
    chi = gm.Character.from_generator_values(R, C2, [[3]])
    M = gm.GModule.from_ints(R, C2, [[[1, 1], [0, 3]]])
    a = gm.twist(gm.twist(M, chi, i), chi, j)
    assert a.same_action(gm.twist(M, chi, i + j))


def test_reduce_module():
    M = gm.GModule.from_ints(WittRing(F2, 2), C2, [[[1, 1], [0, 3]]])
    r = gm.reduce_module(M, 1)
    assert r.D == 1 and r.matrix(1)[..., 0].tolist() == [[1, 1], [0, 1]]
