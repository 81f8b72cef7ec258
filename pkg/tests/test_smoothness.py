from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittlift import corpus
from wittlift import gmodules as gm
from wittlift import smoothness as sm
from wittlift.errors import CertificateRequired, MixedRings, NotSurjective
from wittlift.witt import FieldDesc, WittRing

F2, F3 = FieldDesc(2), FieldDesc(3)
R2 = WittRing(F2, 2)


def sign_c2():
    return gm.Character.from_generator_values(R2, corpus.group("C2"), [[3]])


def test_c2_sign_passes():
    cert = sm.check_cyclotomic(corpus.group("C2"), sign_c2(), 1, 1)
    assert cert.passed and cert.witness is None
    assert all(e.surjective for e in cert.report.entries)


def test_c3_trivial_fails_at_c3():
    G = corpus.group("C3")
    cert = sm.check_cyclotomic(G, gm.Character.trivial(WittRing(F3, 2), G), 1, 1)
    assert not cert.passed
    assert cert.witness.subgroup.order == 3
    assert cert.verdict_for(G.trivial_subgroup()) is True


def test_ring_depth_checked():
    G = corpus.group("C2")
    with pytest.raises(MixedRings):
        sm.check_cyclotomic(G, gm.Character.trivial(WittRing(F2, 3), G), 1, 1)


def test_searches():
    r = sm.smooth_search(corpus.group("C2"), 1, 1, F2)
    assert r.found and r.witness.character.values[:, 0].tolist() == [1, 3]
    assert len(r.tried) == 2
    assert not sm.smooth_search(corpus.group("C3"), 1, 1, F3).found
    v4 = sm.smooth_search(corpus.group("C2xC2"), 1, 1, F2)
    assert not v4.found and len(v4.tried) == 4
    assert not sm.smooth_search(corpus.group("C4"), 1, 1, F2).found


def test_cd1():
    assert sm.cd1_check(corpus.group("trivial"), 2).passed
    r = sm.cd1_check(corpus.group("C2"), 2)
    assert not r.passed and r.witness[1] == [2]
    r = sm.cd1_check(corpus.group("S3"), 3)
    assert not r.passed and r.witness[0].order == 3
    # order prime to p: every rank-1 module is cyclotomic
    r = sm.cd1_check(corpus.group("C3"), 2)
    assert r.passed and all(c.passed for c in r.certificates)


def test_tofp_examples():
    cert = sm.check_cyclotomic(corpus.group("C2"), sign_c2(), 1, 1)
    G = cert.group
    M = gm.direct_sum(gm.GModule.trivial(R2, G, 1), gm.GModule.trivial(R2, G, 1, (1,)))
    N = gm.GModule.trivial(R2, G, 1, (1,))
    assert sm.tofp_property(cert, M, N, np.array([[1, 1]])).surjective
    T = gm.GModule.trivial(R2, G, 1)
    assert sm.tofp_property(cert, T, N, np.array([[1]])).surjective
    with pytest.raises(NotSurjective):
        sm.tofp_property(cert, N, T, np.array([[2]]))


def test_tofp_needs_passing_certificate():
    G = corpus.group("C3")
    cert = sm.check_cyclotomic(G, gm.Character.trivial(WittRing(F3, 2), G), 1, 1)
    T = gm.GModule.trivial(cert.character.ring, G, 1)
    with pytest.raises(CertificateRequired):
        sm.tofp_property(cert, T, T, np.eye(1, dtype=np.int64))


@given(st.integers(0, 10 ** 6))
def test_tofp_random_surjections(seed):
    rng = np.random.default_rng(seed)
    cert = sm.check_cyclotomic(corpus.group("C2"), sign_c2(), 1, 1)
    M, N, pi = corpus.random_trivial_surjection(cert.character.ring, cert.group, rng)
    assert sm.tofp_property(cert, M, N, pi).surjective


def test_certificate_json():
    cert = sm.check_cyclotomic(corpus.group("C2"), sign_c2(), 1, 1)
    js = cert.to_json()
    assert js["passed"] and js["character"]["generators"] == [[[1], [1]]]
