from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittlift.errors import (BadLength, InputError, MixedRings, NotAUnit, NotIrreducible,
                             UnsupportedField)
from wittlift.witt import (FieldDesc, FqElem, WittRing, frobenius, from_zpd, ghost_batch,
                           ghost_compare, ghost_oracle, reduce, teichmuller, verschiebung,
                           witt_polynomials, zpd_batch, zpd_iso)

F2, F3, F5 = FieldDesc(2), FieldDesc(3), FieldDesc(5)
F4 = FieldDesc(2, 2, (1, 1, 1))


def W(field, d, *codes):
    return WittRing(field, d).element(list(codes))


# -- polynomials ---------------------------------------------------------------

def test_sum_polynomial_p2_d2():
    P = witt_polynomials(2, 2)
    assert P.sum[1] == {(0, 1, 0, 0): 1, (0, 0, 0, 1): 1, (1, 0, 1, 0): -1}


def test_sum_polynomial_p3_d2():
    P = witt_polynomials(3, 2)
    assert P.sum[1] == {(0, 1, 0, 0): 1, (0, 0, 0, 1): 1, (2, 0, 1, 0): -1, (1, 0, 2, 0): -1}


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_d1_polynomials(p):
    P = witt_polynomials(p, 1)
    assert P.sum[0] == {(1, 0): 1, (0, 1): 1}
    assert P.product[0] == {(1, 1): 1}


@pytest.mark.parametrize("p,d", [(2, 4), (3, 3), (5, 2)])
def test_reduced_polynomials_match_exact(p, d):
    a, b = witt_polynomials(p, d, True), witt_polynomials(p, d, False)
    for fam in ("sum", "product", "negation"):
        for n in range(d):
            exact = {k: c % p for k, c in getattr(a, fam)[n].items() if c % p}
            assert exact == getattr(b, fam)[n]


def test_polynomial_budget():
    with pytest.raises(BadLength):
        witt_polynomials(2, 6)
    with pytest.raises(InputError):
        witt_polynomials(4, 2)


# -- field descriptors -----------------------------------------------------------

def test_field_checks():
    with pytest.raises(InputError):
        FieldDesc(6)
    with pytest.raises(NotIrreducible):
        FieldDesc(2, 2, (1, 0, 1))
    assert FieldDesc.first_irreducible(2, 2).modulus == (1, 1, 1)
    assert FieldDesc.from_json({"p": 2, "m": 1, "modulus": [1]}) == F2


def test_fq_arithmetic_f4():
    w = FqElem.from_coords(F4, [0, 1])
    assert (w * w).coords == (1, 1)
    assert (w * w * w).coords == (1, 0)
    assert w.frobenius().coords == (w * w).coords


# -- ring operations -------------------------------------------------------------

def test_spec_sums():
    assert (W(F2, 2, 1, 0) + W(F2, 2, 1, 0)).codes == (0, 1)
    assert (W(F3, 2, 1, 0) + W(F3, 2, 1, 0)).codes == (2, 1)
    assert (W(F2, 2, 0, 1) * W(F2, 2, 0, 1)).codes == (0, 0)


def test_mixed_rings_rejected():
    with pytest.raises(MixedRings):
        W(F2, 2, 1, 0) + W(F2, 3, 1, 0, 0)


def test_inverse():
    R = WittRing(F3, 3)
    a = R.from_int(5)
    assert a * a.inverse() == R.one()
    with pytest.raises(NotAUnit):
        R.from_int(3).inverse()


def test_rings_are_cached():
    assert WittRing(F2, 3) is WittRing(FieldDesc(2), 3)


def _rand(q, d):
    return st.lists(st.integers(0, q - 1), min_size=d, max_size=d)


RINGS = [(F2, 3), (F3, 2), (F5, 2), (F4, 2), (FieldDesc.first_irreducible(3, 2), 2)]


@pytest.mark.parametrize("field,d", RINGS)
@given(data=st.data())
def test_ring_axioms(field, d, data):
    R = WittRing(field, d)
    a, b, c = (R.element(data.draw(_rand(field.q, d))) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a and a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + R.zero() == a and a * R.one() == a
    assert a + (-a) == R.zero()
    if a.is_unit():
        assert a * a.inverse() == R.one()


@pytest.mark.parametrize("p,d", [(2, 4), (3, 3), (5, 2), (7, 2)])
@given(data=st.data())
def test_ghost_agreement(p, d, data):
    R = WittRing(FieldDesc(p), d)
    a, b = (R.element(data.draw(_rand(p, d))) for _ in range(2))
    for op in ("add", "mul", "sub"):
        assert ghost_compare(op, a, b)
    assert ghost_compare("neg", a)


def test_batch_ops_match_scalar(rng):
    for field, d in RINGS:
        R = WittRing(field, d)
        a = rng.integers(0, field.q, (50, d))
        b = rng.integers(0, field.q, (50, d))
        s, m = R.add_codes(a, b), R.mul_codes(a, b)
        assert np.array_equal(s, R.add_codes_direct(a, b))
        for i in range(50):
            x, y = R.element(a[i].tolist()), R.element(b[i].tolist())
            assert (x + y).codes == tuple(s[i]) and (x * y).codes == tuple(m[i])


# -- Frobenius, Verschiebung, Teichmüller -------------------------------------------

def test_verschiebung_shift():
    assert verschiebung(W(F2, 2, 1, 0)).codes == (0, 1)
    assert verschiebung(W(F5, 3, 2, 3, 4)).codes == (0, 2, 3)
    assert verschiebung(W(F3, 1, 2)).codes == (0,)


def test_frobenius_examples():
    a = W(F3, 3, 1, 2, 0)
    assert frobenius(a) == a
    w = WittRing(F4, 1).element([[0, 1]])
    assert frobenius(w).to_json() == [[1, 1]]
    assert frobenius(w, 2) == w


@pytest.mark.parametrize("field,d", RINGS)
@given(data=st.data())
def test_frobenius_verschiebung_is_p(field, d, data):
    R = WittRing(field, d)
    a = R.element(data.draw(_rand(field.q, d)))
    pa = R.from_int(field.p) * a
    assert frobenius(verschiebung(a)) == pa
    assert verschiebung(frobenius(a)) == pa


def test_teichmuller():
    R = WittRing(F2, 2)
    assert R.teichmuller(1) == R.one() and R.teichmuller(0) == R.zero()
    assert (R.teichmuller(1) + R.teichmuller(1)).codes == (0, 1)
    R9 = WittRing(FieldDesc.first_irreducible(3, 2), 3)
    for x, y in itertools.product(range(9), repeat=2):
        assert R9.teichmuller(R9.fa.mul(x, y)) == R9.teichmuller(x) * R9.teichmuller(y)
    assert teichmuller(FqElem(F4, 2), 2).codes == (2, 0)


# -- ghost oracle, reduction, Z/p^d ------------------------------------------------

def test_ghost_examples():
    assert ghost_oracle(W(F2, 2, 1, 0)).values == (1, 1)
    assert ghost_oracle(W(F2, 2, 0, 1)).values == (0, 2)
    assert ghost_compare("add", W(F2, 2, 1, 0), W(F2, 2, 1, 0))
    with pytest.raises(UnsupportedField):
        ghost_oracle(WittRing(F4, 1).one())


def test_ghost_batch_matches_scalar(rng):
    for p, d in [(2, 4), (3, 3), (5, 2)]:
        codes = rng.integers(0, p, (40, d))
        gb = ghost_batch(p, d, codes)
        R = WittRing(FieldDesc(p), d)
        for row, g in zip(codes, gb):
            vals = ghost_oracle(R.element(row.tolist())).values
            assert [v % p ** (n + 1) for n, v in enumerate(vals)] == g.tolist()


def test_zpd_examples():
    assert zpd_iso(W(F2, 2, 0, 1)) == 2
    assert from_zpd(2, 2, 2).codes == (0, 1)
    assert zpd_iso(W(F3, 2, 1, 0)) == 1
    assert reduce(W(F3, 2, 2, 1), 1).codes == (2,)
    with pytest.raises(BadLength):
        reduce(W(F3, 2, 2, 1), 3)


@pytest.mark.parametrize("p,d", [(2, 4), (3, 3), (5, 2)])
def test_zpd_iso_exhaustive(p, d):
    q = p ** d
    R = WittRing(FieldDesc(p), d)
    tab = np.array([from_zpd(n, p, d).codes for n in range(q)])
    assert np.array_equal(zpd_batch(p, d, tab), np.arange(q))
    I, J = (x.ravel() for x in np.meshgrid(np.arange(q), np.arange(q), indexing="ij"))
    assert np.array_equal(R.add_codes(tab[I], tab[J]), tab[(I + J) % q])
    assert np.array_equal(R.mul_codes(tab[I], tab[J]), tab[(I * J) % q])


@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_reduce_is_homomorphism(n, d):
    a, b = from_zpd(n, 3, 4), from_zpd(n * 7 + 1, 3, 4)
    assert reduce(a * b, d) == reduce(a, d) * reduce(b, d)
    assert reduce(a + b, d) == reduce(a, d) + reduce(b, d)
    assert reduce(a, 4) == a


def test_json_roundtrip():
    R = WittRing(F4, 2)
    a = R.element([[0, 1], [1, 1]])
    assert R.element(a.to_json()) == a
    assert WittRing(F2, 2).from_int(2).to_json() == [[0], [1]]
