"""Exact linear algebra over W_D(F_q), in particular over Z/p^D.

Elements of W_D(F_q) are handled in linear coordinates (see
:meth:`wittlift.witt.WittRing.lin`): arrays whose last axis has length m.  A
matrix over W_D(F_q) is an int64 array of shape (rows, cols, m).  With m = 1
this is plain linear algebra over Z/p^D, which is what the cohomology layer
uses after flattening.

W_D(F_q) is a local principal ideal ring whose elements are p^v * unit, with
v the minimum valuation of the linear coordinates.  One diagonalisation
routine (:func:`wnormal_form`) therefore gives kernels, images, solutions and
quotients for everything above this layer.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InputError, NotInvertible


@lru_cache(maxsize=None)
def _val_table(p: int, D: int) -> np.ndarray:
    N = p ** D
    t = np.full(N, D, dtype=np.int64)
    y = np.arange(1, N)
    v = np.zeros(N - 1, dtype=np.int64)
    while True:
        mask = (y % p == 0)
        if not mask.any():
            break
        v[mask] += 1
        y[mask] //= p
    t[1:] = v
    return t


def valuation(x, p: int, D: int):
    """p-adic valuation of integers mod p^D (D for zero); works on arrays."""
    x = np.asarray(x, dtype=np.int64) % (p ** D)
    return _val_table(p, D)[x]


class Scalars:
    """Arithmetic of W_D(F_q) on linear-coordinate arrays (last axis m)."""

    def __init__(self, p: int, D: int, structure=None, ring=None):
        self.p, self.D = int(p), int(D)
        self.mod = self.p ** self.D
        if structure is None:
            structure = np.ones((1, 1, 1), dtype=np.int64)
        self.S = np.asarray(structure, dtype=np.int64)
        self.m = self.S.shape[0]
        self.ring = ring
        self.vt = _val_table(self.p, self.D)

    @classmethod
    def of_ring(cls, ring) -> "Scalars":
        return _ring_scalars(ring)

    def one(self):
        e = np.zeros(self.m, dtype=np.int64)
        e[0] = 1
        return e

    def zeros(self, *shape):
        return np.zeros(shape + (self.m,), dtype=np.int64)

    def eye(self, n):
        out = self.zeros(n, n)
        out[np.arange(n), np.arange(n), 0] = 1
        return out

    def from_int(self, n: int):
        e = self.zeros()
        e[0] = n % self.mod
        return e

    def mul(self, x, y):
        if self.m == 1:
            return (x * y) % self.mod
        return np.einsum("...a,...b,abc->...c", x, y, self.S) % self.mod

    def matmul(self, X, Y):
        """(a, b, m) x (b, c, m) -> (a, c, m)."""
        if self.m == 1:
            return ((X[..., 0] @ Y[..., 0]) % self.mod)[..., None]
        T = np.einsum("ika,abc->ikbc", X, self.S) % self.mod
        return np.einsum("ikbc,kjb->ijc", T, Y) % self.mod

    def matvec(self, X, y):
        return self.matmul(X, y[:, None, :])[:, 0, :]

    def outer(self, t, row):
        """(a, m), (b, m) -> (a, b, m) with entries t_i * row_j."""
        return self.mul(t[:, None, :], row[None, :, :])

    def val(self, x):
        """Valuation of each element (minimum over the coordinate axis)."""
        if self.m == 1:
            return self.vt[np.asarray(x)[..., 0]]
        return self.vt[np.asarray(x)].min(axis=-1)

    def div_pow(self, x, v):
        """x / p^v for x divisible by p^v (one representative)."""
        return np.asarray(x) // self.p ** v

    def inv_unit(self, u):
        u = np.asarray(u, dtype=np.int64) % self.mod
        if self.m == 1:
            return np.array([pow(int(u[0]), -1, self.mod)], dtype=np.int64)
        if self.ring is None:
            raise InputError("unit inverse needs the Witt ring")
        R = self.ring
        return np.array(R.lin(R.delin(u).inverse()), dtype=np.int64)

    def realify(self, X):
        """(a, b, m) -> integer (a*m, b*m) matrix of the Z/p^D-linear map."""
        a, b, m = X.shape
        if m == 1:
            return X[..., 0] % self.mod
        # multiplication by x sends t_b to sum_a x_a S[a, b, :]
        blocks = np.einsum("ija,abc->icjb", X, self.S) % self.mod
        return blocks.reshape(a * m, b * m)

    def unrealify(self, Rm):
        a, b = Rm.shape[0] // self.m, Rm.shape[1] // self.m
        return Rm.reshape(a, self.m, b, self.m)[:, :, :, 0].transpose(0, 2, 1) % self.mod


@lru_cache(maxsize=None)
def _ring_scalars(ring):
    return Scalars(ring.p, ring.d, ring.structure, ring)


@lru_cache(maxsize=None)
def zp(p: int, D: int) -> Scalars:
    """Scalars for Z/p^D."""
    return Scalars(p, D)


class NormalForm:
    """U @ A @ V = diag(p**vals) (padded with zeros), U and V invertible.

    ``vals`` is ascending with one entry per nonzero diagonal element.  V and
    its inverse are stored densely.  The row transform U is a log of
    elementary operations replayed by :meth:`apply_U` / :meth:`apply_Uinv`,
    since row counts are often much larger than ranks; dense U and Uinv are
    built on request.
    """

    def __init__(self, R: Scalars, shape, vals, ops, V, Vinv):
        self.R = R
        self.shape = shape
        self.vals = vals
        self._ops = ops
        self.V, self.Vinv = V, Vinv

    @property
    def rank(self) -> int:
        return len(self.vals)

    def _prep(self, X):
        X = np.array(X, dtype=np.int64) % self.R.mod
        vec = X.ndim == 2
        if vec:
            X = X[:, None, :]
        return X, vec

    def apply_U(self, X):
        """U @ X for X of shape (rows, k, m) or (rows, m)."""
        R = self.R
        X, vec = self._prep(X)
        for k, i, ui, u, t in self._ops:
            if i != k:
                X[[k, i]] = X[[i, k]]
            if ui is not None:
                X[k] = R.mul(X[k], ui[None, :])
            if t is not None:
                X[k + 1:] = (X[k + 1:] - R.outer(t, X[k])) % R.mod
        return X[:, 0, :] if vec else X

    def apply_Uinv(self, X):
        R = self.R
        X, vec = self._prep(X)
        for k, i, ui, u, t in reversed(self._ops):
            if t is not None:
                X[k + 1:] = (X[k + 1:] + R.outer(t, X[k])) % R.mod
            if ui is not None:
                X[k] = R.mul(X[k], u[None, :])
            if i != k:
                X[[k, i]] = X[[i, k]]
        return X[:, 0, :] if vec else X

    @property
    def U(self):
        return self.apply_U(self.R.eye(self.shape[0]))

    @property
    def Uinv(self):
        return self.apply_Uinv(self.R.eye(self.shape[0]))

    def diagonal(self):
        r, c = self.shape
        out = self.R.zeros(r, c)
        for i, v in enumerate(self.vals):
            out[i, i, 0] = self.R.p ** v
        return out


def wnormal_form(A, R: Scalars, transforms: bool = True) -> NormalForm:
    """Diagonalise a matrix A of shape (r, c, m) over W_D(F_q).

    The pivot is the first entry of minimal valuation in row-major order of
    the remaining block.  It is scaled to exactly p^v, then its column and
    row are cleared.
    """
    mod = R.mod
    A = np.array(A, dtype=np.int64) % mod
    if A.ndim != 3 or A.shape[2] != R.m:
        raise InputError(f"expected a matrix of shape (r, c, {R.m})")
    r, c, _ = A.shape
    ops = []
    V = Vinv = None
    if transforms:
        V = R.eye(c)
        Vinv = R.eye(c)
    vals = []
    for k in range(min(r, c)):
        vs = R.val(A[k:, k:])
        flat = int(np.argmin(vs))
        v = int(vs.flat[flat])
        if v >= R.D:
            break
        i, j = divmod(flat, vs.shape[1])
        i += k
        j += k
        if i != k:
            A[[k, i]] = A[[i, k]]
        if j != k:
            A[:, [k, j]] = A[:, [j, k]]
            if transforms:
                V[:, [k, j]] = V[:, [j, k]]
                Vinv[[k, j]] = Vinv[[j, k]]
        u = R.div_pow(A[k, k], v)
        ui = None
        if not (u[0] == 1 and not u[1:].any()):
            ui = R.inv_unit(u)
            A[k] = R.mul(A[k], ui[None, :])
        t = R.div_pow(A[k + 1:, k], v)
        nz = np.nonzero(t.any(axis=-1))[0]
        if nz.size:
            rows = nz + k + 1
            A[rows] = (A[rows] - R.outer(t[nz], A[k])) % mod
        else:
            t = None
        ops.append((k, i, ui, u, t))
        s = R.div_pow(A[k, k + 1:], v)
        if s.any():
            A[k, k + 1:] = 0
            if transforms:
                V[:, k + 1:] = (V[:, k + 1:] - R.outer(V[:, k], s)) % mod
                Vinv[k] = (Vinv[k] + R.matmul(s[None], Vinv[k + 1:])[0]) % mod
        vals.append(v)
    return NormalForm(R, (r, c), vals, ops, V, Vinv)


def _scale_rows(A, R: Scalars, row_exps):
    if row_exps is None:
        return A % R.mod
    s = np.array([R.p ** (R.D - int(f)) for f in row_exps], dtype=np.int64)
    return (A * s.reshape((-1,) + (1,) * (A.ndim - 1))) % R.mod


def wkernel(A, R: Scalars, row_exps=None):
    """Kernel of A (r, c, m) as (generators (c, k, m), exponents).

    Generator i spans a copy of W_{exps[i]}.  ``row_exps[i] = f`` means row i
    only has to vanish mod p^f.
    """
    A = np.array(A, dtype=np.int64)
    r, c = A.shape[:2]
    if r == 0:
        return R.eye(c), [R.D] * c
    A = _scale_rows(A, R, row_exps)
    if r > 2 * c + 32:
        # tall systems: kernel of a random row compression, accepted only
        # after checking it against every original row
        rng = np.random.default_rng(_COMPRESS_SEED)
        for _ in range(3):
            C = np.zeros((c + 16,) + A.shape[1:], dtype=np.int64)
            for _rep in range(3):
                bucket = rng.integers(0, c + 16, size=r)
                coef = rng.integers(1, R.mod, size=r, dtype=np.int64)
                np.add.at(C, bucket, (coef[:, None, None] * A) % R.mod)
                C %= R.mod
            gens, exps = _kernel_of(C, R)
            if not R.matmul(A, gens).any():
                return gens, exps
    return _kernel_of(A, R)


_COMPRESS_SEED = 20240601


def _kernel_of(A, R: Scalars):
    c = A.shape[1]
    nf = wnormal_form(A, R)
    cols, exps = [], []
    for i in range(c):
        if i < nf.rank:
            v = nf.vals[i]
            if v == 0:
                continue
            cols.append(nf.V[:, i] * R.p ** (R.D - v) % R.mod)
            exps.append(v)
        else:
            cols.append(nf.V[:, i])
            exps.append(R.D)
    if not cols:
        return R.zeros(c, 0), []
    return np.stack(cols, axis=1), exps


def wsolve(A, b, R: Scalars, row_exps=None):
    """Some x with A x = b (row i mod p^row_exps[i]), or None."""
    A = np.array(A, dtype=np.int64)
    b = np.array(b, dtype=np.int64).reshape(A.shape[0], R.m)
    A = _scale_rows(A, R, row_exps)
    b = _scale_rows(b, R, row_exps)
    nf = wnormal_form(A, R)
    y = nf.apply_U(b)
    x = R.zeros(A.shape[1])
    for i, v in enumerate(nf.vals):
        if (y[i] % R.p ** v).any():
            return None
        x[i] = y[i] // R.p ** v
    if y[nf.rank:].any():
        return None
    return R.matvec(nf.V, x)


def wsolve_many(A, B, R: Scalars, row_exps=None):
    """Solve A X = B column by column (B of shape (r, k, m)); None if any column fails."""
    A = np.array(A, dtype=np.int64)
    B = np.array(B, dtype=np.int64).reshape(A.shape[0], -1, R.m)
    A = _scale_rows(A, R, row_exps)
    B = _scale_rows(B, R, row_exps)
    nf = wnormal_form(A, R)
    Y = nf.apply_U(B)
    X = R.zeros(A.shape[1], B.shape[1])
    for i, v in enumerate(nf.vals):
        if (Y[i] % R.p ** v).any():
            return None
        X[i] = Y[i] // R.p ** v
    if Y[nf.rank:].any():
        return None
    return R.matmul(nf.V, X)


def winverse(A, R: Scalars):
    A = np.array(A, dtype=np.int64)
    n = A.shape[0]
    if A.shape[:2] != (n, n):
        raise NotInvertible("non-square matrix")
    if n == 0:
        return A.copy()
    nf = wnormal_form(A, R)
    if nf.rank < n or any(nf.vals):
        raise NotInvertible("matrix is not invertible mod p")
    return R.matmul(nf.V, nf.U)


def wis_invertible(A, R: Scalars) -> bool:
    A = np.array(A, dtype=np.int64)
    if A.shape[0] != A.shape[1]:
        return False
    nf = wnormal_form(A, R, transforms=False)
    return nf.rank == A.shape[0] and not any(nf.vals)


@dataclass
class Subquotient:
    """span(Z) / span(B) inside W_D^N with a cyclic decomposition.

    ``gens[:, j]`` generates a copy of W_{exps[j]}; :meth:`coords` expresses
    an element of span(Z) in these generators, each coordinate reduced
    mod p^exps[j].
    """

    R: Scalars
    exps: list
    gens: np.ndarray
    _znf: NormalForm
    _U2: np.ndarray
    _keep: list

    @property
    def p(self):
        return self.R.p

    @property
    def orders(self):
        return [self.R.p ** e for e in self.exps]

    @property
    def size(self) -> int:
        out = 1
        for o in self.orders:
            out *= o ** self.R.m
        return out

    def _zcoords(self, z):
        R = self.R
        y = self._znf.apply_U(np.asarray(z, dtype=np.int64).reshape(-1, R.m))
        r = self._znf.rank
        if y[r:].any():
            return None
        out = R.zeros(r)
        for i, v in enumerate(self._znf.vals):
            if (y[i] % R.p ** v).any():
                return None
            out[i] = y[i] // R.p ** v
        return out

    def contains(self, z) -> bool:
        return self._zcoords(z) is not None

    def coords(self, z) -> np.ndarray:
        """Coordinates (k, m) of z in the cyclic generators."""
        y = self._zcoords(z)
        if y is None:
            raise InputError("element does not lie in the cycle module")
        c = self.R.matvec(self._U2, y) if len(y) else y
        out = self.R.zeros(len(self.exps))
        for n, (j, e) in enumerate(zip(self._keep, self.exps)):
            out[n] = c[j] % self.R.p ** e
        return out

    def is_zero(self, z) -> bool:
        return not self.coords(z).any()

    def element(self, coords):
        """Ambient vector for given coordinates in the generators."""
        coords = np.asarray(coords, dtype=np.int64).reshape(len(self.exps), self.R.m)
        if not len(self.exps):
            return self.R.zeros(self.gens.shape[0])
        return self.R.matvec(self.gens, coords)


def _as_columns(X, N, m):
    X = np.array(X, dtype=np.int64)
    if X.size == 0:
        return np.zeros((N, 0, m), dtype=np.int64)
    if X.ndim == 2:
        X = X[:, None, :]
    return X


def wsubquotient(Z, B, R: Scalars) -> Subquotient:
    """span(Z)/span(B) for column sets Z (N, a, m), B (N, b, m); span B in span Z."""
    mod = R.mod
    Z = np.array(Z, dtype=np.int64) % mod
    N = Z.shape[0]
    Z = _as_columns(Z, N, R.m)
    B = _as_columns(B, N, R.m) % mod
    nf = wnormal_form(Z, R)
    r = nf.rank
    zv = list(nf.vals)
    # s_i = (Z V)[:, i] = Uinv[:, i] p^v_i spans a copy of W_{D - v_i}
    svecs = R.matmul(Z, nf.V[:, :r]) if r else R.zeros(N, 0)
    yB = nf.apply_U(B) if B.shape[1] else R.zeros(N, 0)
    Bc = R.zeros(r, B.shape[1])
    for i, v in enumerate(zv):
        if (yB[i] % R.p ** v).any():
            raise InputError("B is not contained in span Z")
        Bc[i] = yB[i] // R.p ** v
    if yB[r:].any():
        raise InputError("B is not contained in span Z")
    rel = R.zeros(r, r)
    for i, v in enumerate(zv):
        rel[i, i, 0] = R.p ** (R.D - v) % mod
    K = np.concatenate([Bc, rel], axis=1)
    nf2 = wnormal_form(K, R)
    w = list(nf2.vals) + [R.D] * (r - nf2.rank)
    keep = [j for j in range(r) if w[j] > 0]
    gens = R.matmul(svecs, nf2.Uinv[:, keep]) if keep else R.zeros(N, 0)
    return Subquotient(R, [w[j] for j in keep], gens, nf, nf2.U, keep)


def wspan(Z, R: Scalars) -> Subquotient:
    Z = np.array(Z, dtype=np.int64)
    return wsubquotient(Z, R.zeros(Z.shape[0], 0), R)


def wcokernel_exps(A, R: Scalars):
    """Exponents of the nontrivial cyclic factors of W_D^rows / col span(A)."""
    A = np.array(A, dtype=np.int64)
    nf = wnormal_form(A, R, transforms=False)
    w = list(nf.vals) + [R.D] * (A.shape[0] - nf.rank)
    return [e for e in w if e > 0]


# ---------------------------------------------------------------------------
# Plain Z/p^D wrappers on 2-d integer matrices

def normal_form(A, p: int, D: int, transforms: bool = True) -> NormalForm:
    """Diagonalise an integer matrix over Z/p^D.  See :func:`wnormal_form`."""
    return wnormal_form(np.asarray(A, dtype=np.int64)[..., None], zp(int(p), int(D)),
                        transforms)


def kernel(A, p: int, D: int, row_exps=None) -> np.ndarray:
    """Generators (columns) of {x : A x = 0 mod p^D}."""
    gens, _ = wkernel(np.asarray(A, dtype=np.int64)[..., None], zp(int(p), int(D)), row_exps)
    return gens[..., 0]


def solve(A, b, p: int, D: int, row_exps=None):
    x = wsolve(np.asarray(A, dtype=np.int64)[..., None],
               np.asarray(b, dtype=np.int64).reshape(-1, 1), zp(int(p), int(D)), row_exps)
    return None if x is None else x[:, 0]


def inverse(A, p: int, D: int) -> np.ndarray:
    return winverse(np.asarray(A, dtype=np.int64)[..., None], zp(int(p), int(D)))[..., 0]


def subquotient(Z, B, p: int, D: int) -> Subquotient:
    Z = np.asarray(Z, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    B = B.reshape(Z.shape[0], -1) if B.size else np.zeros((Z.shape[0], 0), dtype=np.int64)
    return wsubquotient(Z[..., None], B[..., None], zp(int(p), int(D)))


def span_module(Z, p: int, D: int) -> Subquotient:
    Z = np.asarray(Z, dtype=np.int64)
    return wspan(Z[..., None], zp(int(p), int(D)))


def cokernel_exps(A, p: int, D: int):
    return wcokernel_exps(np.asarray(A, dtype=np.int64)[..., None], zp(int(p), int(D)))
