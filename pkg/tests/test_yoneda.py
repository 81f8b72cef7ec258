from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittlift import cohomology as co
from wittlift import corpus
from wittlift import gmodules as gm
from wittlift import yoneda as yo
from wittlift.errors import MixedRings, NotExact
from wittlift.groups import FiniteGroup
from wittlift.linalg import Scalars, winverse, wis_invertible
from wittlift.witt import FieldDesc, WittRing

F2 = FieldDesc(2)
C2 = corpus.group("C2")


def relabel(ext, rng):
    """The same extension in a random basis of the middle term."""
    E = ext.middle
    R = Scalars.of_ring(E.ring)
    while True:
        P = rng.integers(0, E.ring.modulus, (E.dim, E.dim))
        if wis_invertible(P[..., None], R):
            break
    Pinv = R.realify(winverse(P[..., None], R))
    E2 = gm.conjugate(E, P, Pinv)
    return yo.Extension1(ext.sub, E2, ext.quot, E2.reduce_rows(Pinv @ ext.incl % E.ring.modulus),
                         ext.quot.reduce_rows(ext.proj @ P % E.ring.modulus))


def test_regular_rep_is_the_nonzero_class():
    ext = corpus.extensions()["c2_regular"]
    c = yo.class_of_extension(ext)
    assert c.coords.tolist() == [1] and c.H1.orders == [2]
    assert yo.class_of_extension(ext, yo.section(ext, 1)) == c
    sp = corpus.extensions()["c2_split"]
    assert yo.class_of_extension(sp).is_zero()
    assert not yo.linked_brute(ext, sp) and yo.linked_brute(ext, ext)


def test_extension_of_class_gives_regular_action():
    T = gm.GModule.trivial(WittRing(F2, 1), C2, 1)
    H1 = co.cohomology_group(None, gm.hom(T, T), 1)
    e = yo.extension_of_class(H1.cocycle([1]), T, T)
    assert e.middle.matrix(1)[..., 0].tolist() == [[1, 1], [0, 1]]
    assert yo.linked_brute(e, corpus.extensions()["c2_regular"])


def test_baer_sum():
    ext = corpus.extensions()["c2_regular"]
    bs = yo.baer_sum(ext, ext)
    assert yo.class_of_extension(bs).is_zero()
    assert yo.class_of_extension(yo.baer_sum(ext, corpus.extensions()["c2_split"])).coords.tolist() == [1]


def test_sign_extensions_over_z4():
    R2 = WittRing(F2, 2)
    S = gm.GModule.from_ints(R2, C2, [[[3]]])
    T = gm.GModule.trivial(R2, C2, 1)
    H1 = co.cohomology_group(None, gm.hom(T, S), 1)
    assert H1.orders == [2]
    e = yo.extension_of_class(H1.representatives[0], T, S)
    two = np.array([[2]])
    pf = yo.pushforward(e, two, S)
    assert yo.class_of_extension(pf).coords.tolist() == \
        H1.class_of(yo.push_cocycle(T, S, S, two, yo.extension_cocycle(e))).tolist()
    three = np.array([[3]])
    pb = yo.pullback(e, three, T)
    assert yo.class_of_extension(pb).coords.tolist() == \
        H1.class_of(yo.pull_cocycle(T, T, S, three, yo.extension_cocycle(e))).tolist()


def test_push_pull_commute():
    R2 = WittRing(F2, 2)
    S = gm.GModule.from_ints(R2, C2, [[[3]]])
    T = gm.GModule.trivial(R2, C2, 1)
    H1 = co.cohomology_group(None, gm.hom(T, S), 1)
    e = yo.extension_of_class(H1.representatives[0], T, S)
    f, g = np.array([[3]]), np.array([[3]])
    a = yo.pushforward(yo.pullback(e, g, T), f, S)
    b = yo.pullback(yo.pushforward(e, f, S), g, T)
    assert yo.class_of_extension(a) == yo.class_of_extension(b)
    assert yo.linked_brute(a, b)


def test_not_exact_rejected():
    T = gm.GModule.trivial(WittRing(F2, 1), C2, 1)
    E = gm.direct_sum(T, T)
    with pytest.raises(NotExact):
        yo.Extension1(T, E, T, np.array([[1], [0]]), np.array([[1, 0]]))


def test_linkage_needs_one_group():
    other = FiniteGroup.cyclic(2)
    T = gm.GModule.trivial(WittRing(F2, 1), other, 1)
    with pytest.raises(MixedRings):
        yo.linked_brute(yo.split_extension(T, T), corpus.extensions()["c2_split"])


PAIRS = [x for x in corpus.yoneda_pairs() if x[1].group.order <= 4][:40]


@pytest.mark.parametrize("label,A,B", PAIRS, ids=[x[0] for x in PAIRS])
def test_roundtrip_and_linkage(label, A, B):
    rng = np.random.default_rng(len(label))
    H1 = co.cohomology_group(None, gm.hom(A, B), 1)

    exts = []
    for c in itertools.product(*[range(o) for o in H1.orders]):
        e = yo.extension_of_class(H1.cocycle(list(c)), A, B)
        assert yo.class_of_extension(e).coords.tolist() == list(c)
        r = relabel(e, rng)
        assert yo.class_of_extension(r) == yo.class_of_extension(e)
        assert yo.linked_brute(e, r)
        exts.append(e)
    for i, e1 in enumerate(exts):
        for j, e2 in enumerate(exts):
            assert yo.linked_brute(e1, e2) == (i == j)


@given(st.integers(0, 10 ** 6))
def test_section_independence(seed):
    rng = np.random.default_rng(seed)
    ext = relabel(corpus.extensions()["c2_regular"], rng)
    S0 = yo.section(ext)
    # any section differs from S0 by incl o phi
    phi = rng.integers(0, 2, (1, 1))
    S1 = ext.middle.reduce_rows(S0 + ext.incl @ phi)
    assert yo.class_of_extension(ext, S0) == yo.class_of_extension(ext, S1)


def test_json_roundtrip():
    ext = corpus.extensions()["c2_regular"]
    back = yo.Extension1.from_json(ext.to_json(), ext.group)
    assert yo.class_of_extension(back) == yo.class_of_extension(ext)
