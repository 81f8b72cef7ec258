from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittlift import linalg as la
from wittlift.errors import NotInvertible
from wittlift.witt import FieldDesc, WittRing


def _brute_kernel(A, p, D):
    q = p ** D
    c = A.shape[1]
    pts = np.array(list(itertools.product(range(q), repeat=c)), dtype=np.int64)
    return pts[((A @ pts.T) % q == 0).all(axis=0)]


def _brute_image(A, p, D):
    q = p ** D
    c = A.shape[1]
    pts = np.array(list(itertools.product(range(q), repeat=c)), dtype=np.int64)
    return {tuple(r) for r in ((A @ pts.T) % q).T}


def test_valuation():
    assert la.valuation([0, 1, 2, 4, 6, 8, 9], 2, 3).tolist() == [3, 0, 1, 2, 1, 3, 0]


def test_worked_example_z4():
    A = np.array([[2, 1], [0, 2]])
    nf = la.normal_form(A, 2, 2)
    assert list(nf.vals) == [0]
    assert len(_brute_kernel(A, 2, 2)) == 4 and len(_brute_image(A, 2, 2)) == 4
    _, exps = la.wkernel(A[..., None], la.zp(2, 2))
    assert sum(exps) == 2


matrices = st.tuples(st.sampled_from([(2, 2), (3, 1), (3, 2), (2, 3)]),
                     st.integers(1, 3), st.integers(1, 3), st.data())


@given(matrices)
def test_normal_form_identity(args):
    (p, D), r, c, data = args
    q = p ** D
    A = np.array(data.draw(st.lists(st.integers(0, q - 1), min_size=r * c, max_size=r * c)),
                 dtype=np.int64).reshape(r, c)
    nf = la.normal_form(A, p, D)
    U, V = nf.U[..., 0], nf.V[..., 0]
    assert np.array_equal((U @ A @ V) % q, nf.diagonal()[..., 0] % q)
    assert np.array_equal((nf.Uinv[..., 0] @ U) % q, np.eye(r, dtype=np.int64))
    assert np.array_equal((nf.Vinv[..., 0] @ V) % q, np.eye(c, dtype=np.int64))
    assert list(nf.vals) == sorted(nf.vals)


@given(matrices)
def test_kernel_and_image_match_brute_force(args):
    (p, D), r, c, data = args
    q = p ** D
    A = np.array(data.draw(st.lists(st.integers(0, q - 1), min_size=r * c, max_size=r * c)),
                 dtype=np.int64).reshape(r, c)
    R = la.zp(p, D)
    gens, exps = la.wkernel(A[..., None], R)
    assert ((A @ gens[..., 0]) % q == 0).all()
    assert len(_brute_kernel(A, p, D)) == p ** sum(exps)
    img = _brute_image(A, p, D)
    assert p ** sum(la.cokernel_exps(A, p, D)) == q ** r // len(img)
    b = np.array(sorted(img)[len(img) // 2])
    x = la.solve(A, b, p, D)
    assert x is not None and np.array_equal((A @ x) % q, b)


def test_solve_unsolvable():
    assert la.solve([[2]], [1], 2, 2) is None


def test_inverse():
    A = np.array([[1, 2], [3, 1]])
    Ai = la.inverse(A, 3, 2)
    assert np.array_equal((A @ Ai) % 9, np.eye(2))
    with pytest.raises(NotInvertible):
        la.inverse([[3]], 3, 2)


def test_row_exponents():
    # second row only needs to vanish mod 2
    gens = la.kernel([[0, 0], [1, 0]], 2, 2, row_exps=[2, 1])
    S = la.span_module(gens, 2, 2)
    assert S.size == 8


def test_subquotient_coords():
    Z = np.eye(2, dtype=np.int64)
    B = np.array([[2], [0]])
    sq = la.subquotient(Z, B, 2, 2)
    assert sorted(sq.exps) == [1, 2] and sq.size == 8
    z = np.array([[3], [1]])
    assert sq.contains(z)
    assert sq.is_zero(np.array([[2], [0]]))


def test_galois_ring_scalars():
    ring = WittRing(FieldDesc.first_irreducible(2, 2), 2)
    R = la.Scalars.of_ring(ring)
    import itertools as it
    for c in it.product(range(4), repeat=2):
        x = np.array(c)
        if any(v % 2 for v in c):
            assert np.array_equal(R.mul(x, R.inv_unit(x)), R.one())
    A = np.array([[[1, 1], [2, 0]], [[0, 1], [1, 0]]])
    nf = la.wnormal_form(A, R)
    assert nf.rank == 2
