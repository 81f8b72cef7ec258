"""(W_D(F_q), G)-modules.

A module is ⊕_i W_{e_i}(F_q) for a profile (e_1, ..., e_n) with e_i <= D,
together with one action matrix per group element.  Internally every matrix
is stored realified: an integer (n*m, n*m) matrix over Z/p^D acting on
linear coordinates (see :mod:`wittlift.linalg`), row block i reduced
mod p^{e_i}.  Entry a_ij of a valid matrix is divisible by p^{max(0, e_i - e_j)}.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (BadLength, IndexDivisibleByP, InputError, MixedRings, NoEmbedding,
                     NonFreeDual, NotAHomomorphism, NotASubgroup, NotEquivariant,
                     NotInvertible, ShapeMismatch)
from .groups import FiniteGroup, GSet, Subgroup
from .linalg import Scalars, wkernel, winverse, wis_invertible, wsolve, wspan, wsubquotient
from .witt import FieldDesc, WittRing, WittVec, field_arith


# ---------------------------------------------------------------------------
# conversions between Witt-coordinate matrices and linear coordinates

def lin_matrix(ring: WittRing, mat) -> np.ndarray:
    """Nested rows of WittVec / Witt-coordinate lists / ints -> (r, c, m) array."""
    rows = []
    for row in mat:
        out = []
        for x in row:
            if isinstance(x, WittVec):
                if x.ring is not ring:
                    raise MixedRings("matrix entry from a different ring")
                out.append(ring.lin(x))
            elif isinstance(x, (int, np.integer)):
                out.append(ring.lin(ring.from_int(int(x))))
            else:
                out.append(ring.lin(ring.element(x)))
        rows.append(out)
    arr = np.array(rows, dtype=np.int64)
    if arr.ndim != 3:
        if arr.size == 0:
            return np.zeros((len(rows), 0, ring.m), dtype=np.int64)
        raise ShapeMismatch("matrix rows have different lengths")
    return arr


def witt_matrix(ring: WittRing, lin) -> list:
    lin = np.asarray(lin)
    return [[ring.delin(lin[i, j]) for j in range(lin.shape[1])] for i in range(lin.shape[0])]


def witt_matrix_json(ring: WittRing, lin) -> list:
    return [[x.to_json() for x in row] for row in witt_matrix(ring, lin)]


def int_matrix(ring: WittRing, mat) -> np.ndarray:
    """For m = 1: integer matrix mod p^D -> (r, c, 1) array."""
    return (np.array(mat, dtype=np.int64) % ring.modulus)[..., None]


# ---------------------------------------------------------------------------

class GModule:
    """A finitely generated (W_D(F_q), G)-module with explicit action."""

    def __init__(self, ring: WittRing, group: FiniteGroup, profile, real, check: bool = True):
        self.ring = ring
        self.group = group
        self.profile = tuple(int(e) for e in profile)
        self.R = Scalars.of_ring(ring)
        n, m = len(self.profile), ring.m
        if any(not 1 <= e <= ring.d for e in self.profile):
            raise BadLength(f"profile entries must lie in 1..{ring.d}")
        real = np.array(real, dtype=np.int64).reshape(group.order, n * m, n * m)
        self.real = real % self.row_mods[None, :, None]
        if check:
            self._validate()

    # -- basic data ----------------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.profile)

    @property
    def dim(self) -> int:
        """Length of the flattened coordinate vector (rank * m)."""
        return len(self.profile) * self.ring.m

    @property
    def p(self):
        return self.ring.p

    @property
    def D(self):
        return self.ring.d

    @property
    def m(self):
        return self.ring.m

    @cached_property
    def flat_exps(self):
        return np.repeat(np.array(self.profile, dtype=np.int64), self.ring.m)

    @cached_property
    def row_mods(self):
        return self.p ** np.repeat(np.array(self.profile, dtype=np.int64), self.ring.m)

    def is_free(self) -> bool:
        return all(e == self.D for e in self.profile)

    def matrix(self, g: int) -> np.ndarray:
        """Action of g as a (rank, rank, m) array in linear coordinates."""
        return self.R.unrealify(self.real[g])

    def witt_matrix(self, g: int):
        return witt_matrix(self.ring, self.matrix(g))

    @cached_property
    def lin_action(self):
        return np.stack([self.matrix(g) for g in range(self.group.order)])

    def reduce_rows(self, X):
        """Reduce a flattened vector / matrix with rows indexed by this module."""
        X = np.asarray(X, dtype=np.int64)
        mods = self.row_mods.reshape((-1,) + (1,) * (X.ndim - 1))
        return X % mods

    def act(self, g: int, x):
        return self.reduce_rows(self.real[g] @ np.asarray(x, dtype=np.int64))

    def __repr__(self):
        return (f"GModule(p={self.p}, m={self.m}, D={self.D}, group={self.group!r}, "
                f"profile={list(self.profile)})")

    def same_action(self, other: "GModule") -> bool:
        return (self.ring is other.ring and self.group is other.group
                and self.profile == other.profile and np.array_equal(self.real, other.real))

    # -- validation ---------------------------------------------------------
    def _validate(self):
        G = self.group
        n, m, p = self.rank, self.m, self.p
        lin = self.lin_action
        e = np.array(self.profile)
        need = np.maximum(0, e[:, None] - e[None, :])
        for g in range(G.order):
            vals = self.R.val(lin[g])
            if (vals < need).any():
                i, j = np.argwhere(vals < need)[0]
                raise InputError(f"entry ({i},{j}) of the matrix for element {g} does not "
                                 f"respect the profile")
        ident = self.reduce_rows(np.eye(self.dim, dtype=np.int64))
        if not np.array_equal(self.real[0], ident):
            raise NotAHomomorphism("identity does not act as the identity", relation=("1",))
        T = G.table
        for s in (G.generators or ()):
            prod = np.einsum("ij,gjk->gik", self.real[s], self.real) % self.row_mods[None, :, None]
            bad = np.nonzero((prod != self.real[T[s]]).any(axis=(1, 2)))[0]
            if bad.size:
                h = int(bad[0])
                raise NotAHomomorphism(
                    f"rho({s})*rho({h}) != rho({int(T[s, h])})", relation=(s, h))
        for s in (G.generators or ()):
            mod_p = self.real[s] % p
            R1 = Scalars(p, 1)
            if not wis_invertible(mod_p[..., None], R1):
                raise NotInvertible(f"matrix of generator {s} is not invertible")

    # -- constructors ---------------------------------------------------------
    @classmethod
    def from_generators(cls, ring: WittRing, group: FiniteGroup, gen_mats, profile=None):
        """Extend matrices on ``group.generators`` along the Cayley graph and validate."""
        mats = [np.asarray(a, dtype=np.int64) for a in gen_mats]
        if len(mats) != len(group.generators):
            raise ShapeMismatch(f"expected {len(group.generators)} generator matrices, "
                                f"got {len(mats)}")
        n = mats[0].shape[0] if mats else (len(profile) if profile is not None else 0)
        if profile is None:
            profile = (ring.d,) * n
        profile = tuple(profile)
        if len(profile) != n:
            raise ShapeMismatch("profile length differs from matrix size")
        R = Scalars.of_ring(ring)
        for a in mats:
            if a.shape != (n, n, ring.m):
                raise ShapeMismatch(f"generator matrix has shape {a.shape}, "
                                    f"expected {(n, n, ring.m)}")
        rows = ring.p ** np.repeat(np.array(profile, dtype=np.int64), ring.m)
        gen_real = {s: R.realify(a % ring.modulus) % rows[:, None]
                    for s, a in zip(group.generators, mats)}
        N = n * ring.m
        real = np.zeros((group.order, N, N), dtype=np.int64)
        real[0] = np.eye(N, dtype=np.int64) % rows[:, None]
        for g, s, h in group.cayley_tree():
            real[g] = (gen_real[s] @ real[h]) % rows[:, None]
        for s, a in gen_real.items():
            if not np.array_equal(real[s], a):
                raise NotAHomomorphism(f"generator {s} conflicts with the group law",
                                       relation=(s,))
        return cls(ring, group, profile, real, check=True)

    @classmethod
    def trivial(cls, ring: WittRing, group: FiniteGroup, n: int = 1, profile=None):
        profile = tuple(profile) if profile is not None else (ring.d,) * n
        N = len(profile) * ring.m
        real = np.broadcast_to(np.eye(N, dtype=np.int64), (group.order, N, N))
        return cls(ring, group, profile, real, check=False)

    @classmethod
    def permutation(cls, ring: WittRing, gset: GSet, profile_exp: int | None = None):
        """Permutation module on the points of a G-set (basis e_x, g e_x = e_{g.x})."""
        G = gset.group
        n = gset.size
        e = ring.d if profile_exp is None else profile_exp
        m = ring.m
        real = np.zeros((G.order, n * m, n * m), dtype=np.int64)
        for g in range(G.order):
            for x in range(n):
                y = int(gset.action[g, x])
                for a in range(m):
                    real[g, y * m + a, x * m + a] = 1
        M = cls(ring, G, (e,) * n, real, check=False)
        M.gset = gset
        return M

    @classmethod
    def from_ints(cls, ring: WittRing, group: FiniteGroup, gen_mats, profile=None):
        """Convenience for m = 1: integer generator matrices mod p^D."""
        return cls.from_generators(ring, group, [int_matrix(ring, a) for a in gen_mats],
                                   profile)

    @classmethod
    def from_witt(cls, ring: WittRing, group: FiniteGroup, gen_mats, profile=None):
        return cls.from_generators(ring, group, [lin_matrix(ring, a) for a in gen_mats],
                                   profile)

    def generator_matrices(self):
        return [self.matrix(s) for s in self.group.generators]

    # -- JSON ---------------------------------------------------------------
    def to_json(self, include_group: bool = False):
        f = self.ring.field
        ring = {"p": f.p, "m": f.m, "d": self.ring.d}
        if f.m > 1:
            ring["modulus"] = list(f.modulus)
        out = {"ring": ring, "profile": list(self.profile),
               "generators": [witt_matrix_json(self.ring, a) for a in self.generator_matrices()]}
        if include_group:
            out["group"] = self.group.to_json()
        return out

    @classmethod
    def from_json(cls, obj, group: FiniteGroup | None = None):
        try:
            r = obj["ring"]
            field_ = FieldDesc.from_json({k: r[k] for k in r if k != "d"})
            ring = WittRing(field_, int(r["d"]))
            gens = obj["generators"]
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad representation JSON: missing {exc}") from exc
        if group is None:
            if "group" not in obj:
                raise InputError("representation JSON needs a group")
            group = FiniteGroup.from_json(obj["group"])
        mats = [lin_matrix(ring, a) for a in gens]
        profile = obj.get("profile")
        n = mats[0].shape[0] if mats else len(profile or [])
        if not mats and profile is None:
            raise InputError("cannot infer rank of a representation without generators")
        if not group.generators:
            mats = []
        return cls.from_generators(ring, group, mats, profile if profile is not None
                                   else (ring.d,) * n)


# ---------------------------------------------------------------------------
# morphisms

def morphism_real(A: GModule, B: GModule, f) -> np.ndarray:
    """A morphism A -> B given as a (rank B, rank A, m) lin array -> realified matrix."""
    f = np.asarray(f, dtype=np.int64)
    if f.ndim == 2 and A.m == 1 and f.shape == (B.rank, A.rank):
        f = f[..., None]
    if f.shape != (B.rank, A.rank, A.m):
        raise ShapeMismatch(f"morphism has shape {f.shape}, expected {(B.rank, A.rank, A.m)}")
    return B.reduce_rows(A.R.realify(f % A.ring.modulus))


def check_morphism(A: GModule, B: GModule, F: np.ndarray, equivariant: bool = True):
    """Validate a realified morphism (well defined on the profiles, equivariant)."""
    if A.ring is not B.ring or A.group is not B.group:
        raise MixedRings("morphism between modules over different rings or groups")
    if F.shape != (B.dim, A.dim):
        raise ShapeMismatch("morphism matrix has the wrong shape")
    lin = A.R.unrealify(F)
    need = np.maximum(0, np.array(B.profile)[:, None] - np.array(A.profile)[None, :])
    if (A.R.val(lin) < need).any():
        raise InputError("morphism is not well defined on the source profile")
    if equivariant:
        for g in A.group.generators:
            lhs = B.reduce_rows(B.real[g] @ F)
            rhs = B.reduce_rows(F @ A.real[g])
            if not np.array_equal(lhs, rhs):
                raise NotEquivariant(f"morphism does not commute with generator {g}")


def is_equivariant(A: GModule, B: GModule, F) -> bool:
    try:
        check_morphism(A, B, np.asarray(F, dtype=np.int64))
        return True
    except (NotEquivariant, InputError):
        return False


# ---------------------------------------------------------------------------
# constructions

def _same_base(*Ms):
    r, g = Ms[0].ring, Ms[0].group
    for M in Ms[1:]:
        if M.ring is not r or M.group is not g:
            raise MixedRings("modules over different rings or groups")


def direct_sum(*Ms: GModule) -> GModule:
    _same_base(*Ms)
    M0 = Ms[0]
    N = sum(M.dim for M in Ms)
    real = np.zeros((M0.group.order, N, N), dtype=np.int64)
    off = 0
    for M in Ms:
        real[:, off:off + M.dim, off:off + M.dim] = M.real
        off += M.dim
    profile = tuple(e for M in Ms for e in M.profile)
    return GModule(M0.ring, M0.group, profile, real, check=False)


def _lin_inverse_action(M: GModule):
    G = M.group
    return np.stack([M.lin_action[G.inverse(g)] for g in range(G.order)])


def _kron_lin(R: Scalars, X, Y):
    """Kronecker product of W-matrices: index (i*|Y| + k, j*|Y| + l)."""
    a, b, _ = X.shape
    c, d, _ = Y.shape
    P = R.mul(X[:, None, :, None, :], Y[None, :, None, :, :])
    return P.reshape(a * c, b * d, R.m)


def _from_lin_action(ring, group, profile, lin_action) -> GModule:
    R = Scalars.of_ring(ring)
    real = np.stack([R.realify(a) for a in lin_action])
    return GModule(ring, group, profile, real, check=False)


def tensor(A: GModule, B: GModule) -> GModule:
    """A ⊗ B with basis index a * rank(B) + b; profile min(e_a, f_b)."""
    _same_base(A, B)
    R = A.R
    acts = [_kron_lin(R, A.lin_action[g], B.lin_action[g]) for g in range(A.group.order)]
    profile = tuple(min(e, f) for e in A.profile for f in B.profile)
    M = _from_lin_action(A.ring, A.group, profile, acts)
    return M


def tensor_power(A: GModule, n: int) -> GModule:
    if n < 0:
        raise InputError("negative tensor power")
    out = GModule.trivial(A.ring, A.group, 1)
    for _ in range(n):
        out = tensor(out, A)
    return out


def hom(A: GModule, B: GModule) -> GModule:
    """Hom(A, B) for free A; f is vectorised column-major (index j*rank(B) + i).

    The action f -> rho_B(g) f rho_A(g)^-1 becomes kron(rho_A(g)^-T, rho_B(g)),
    which is literally the action matrix of dual(A) ⊗ B.
    """
    _same_base(A, B)
    if not A.is_free():
        raise NonFreeDual("hom is only implemented out of free modules")
    R = A.R
    invA = _lin_inverse_action(A)
    acts = [_kron_lin(R, invA[g].transpose(1, 0, 2), B.lin_action[g])
            for g in range(A.group.order)]
    return _from_lin_action(A.ring, A.group, B.profile * A.rank, acts)


def hom_vec(f_lin) -> np.ndarray:
    """(rank B, rank A, m) morphism -> lin vector of Hom(A, B) (column-major)."""
    f = np.asarray(f_lin)
    return f.transpose(1, 0, 2).reshape(-1, f.shape[2])


def hom_unvec(v, rank_b: int, rank_a: int) -> np.ndarray:
    v = np.asarray(v)
    return v.reshape(rank_a, rank_b, -1).transpose(1, 0, 2)


def dual(A: GModule) -> GModule:
    if not A.is_free():
        raise NonFreeDual("dual of a non-free module")
    return hom(A, GModule.trivial(A.ring, A.group, 1))


@dataclass
class Character:
    """A homomorphism G -> W_D(F_q)^x; ``values[g]`` in linear coordinates."""

    ring: WittRing
    group: FiniteGroup
    values: np.ndarray

    def value(self, g: int) -> WittVec:
        return self.ring.delin(self.values[g])

    def reduce(self, r: int) -> "Character":
        return Character(WittRing(self.ring.field, r), self.group, self.values % self.ring.p ** r)

    def power(self, n: int) -> "Character":
        R = Scalars.of_ring(self.ring)
        if n < 0:
            inv = [R.inv_unit(self.values[g]) for g in range(self.group.order)]
            base = np.array(inv, dtype=np.int64)
            n = -n
        else:
            base = self.values
        out = np.tile(R.one(), (self.group.order, 1))
        for _ in range(n):
            out = R.mul(out, base)
        return Character(self.ring, self.group, out)

    def is_trivial(self) -> bool:
        one = Scalars.of_ring(self.ring).one()
        return bool((self.values == one[None, :]).all())

    def kernel(self) -> Subgroup:
        one = Scalars.of_ring(self.ring).one()
        els = tuple(g for g in range(self.group.order) if (self.values[g] == one).all())
        return Subgroup(self.group, els)

    def module(self) -> GModule:
        """The free rank-1 module on which g acts by chi(g)."""
        acts = self.values[:, None, None, :]
        return _from_lin_action(self.ring, self.group, (self.ring.d,), acts)

    def restrict(self, H: Subgroup) -> "Character":
        return Character(self.ring, H.as_group, self.values[list(H.elements)])

    def to_json(self):
        f = self.ring.field
        ring = {"p": f.p, "m": f.m, "d": self.ring.d}
        if f.m > 1:
            ring["modulus"] = list(f.modulus)
        return {"ring": ring,
                "generators": [self.value(s).to_json() for s in self.group.generators]}

    @classmethod
    def from_json(cls, obj, group: FiniteGroup) -> "Character":
        M = GModule.from_json({"ring": obj["ring"], "profile": [obj["ring"]["d"]],
                               "generators": [[[v]] for v in obj["generators"]]}, group)
        return cls(M.ring, group, M.lin_action[:, 0, 0, :].copy())

    @classmethod
    def from_generator_values(cls, ring: WittRing, group: FiniteGroup, vals) -> "Character":
        M = GModule.from_generators(ring, group, [np.asarray(v).reshape(1, 1, ring.m)
                                                  for v in vals])
        return cls(ring, group, M.lin_action[:, 0, 0, :].copy())

    @classmethod
    def trivial(cls, ring: WittRing, group: FiniteGroup) -> "Character":
        one = Scalars.of_ring(ring).one()
        return cls(ring, group, np.tile(one, (group.order, 1)))


def unit_group(ring: WittRing):
    """All units of W_D(F_q) as lin tuples, sorted, with 1 first."""
    p, D, m = ring.p, ring.d, ring.m
    one = tuple([1] + [0] * (m - 1))
    units = [c for c in itertools.product(range(p ** D), repeat=m) if any(x % p for x in c)
             and _is_unit_lin(ring, c)]
    units.sort(key=lambda c: (c != one, c))
    return units


def _is_unit_lin(ring, c):
    return ring.delin(c).is_unit()


def characters(group: FiniteGroup, ring: WittRing, budget: int = 10_000):
    """All characters G -> W_D(F_q)^x, in a deterministic order (trivial first)."""
    from .errors import BudgetExceeded
    ab = group.abelianization
    R = Scalars.of_ring(ring)
    units = [np.array(u, dtype=np.int64) for u in unit_group(ring)]

    def upow(u, k):
        out = R.one()
        for _ in range(k):
            out = R.mul(out, u)
        return out

    cands = []
    for n in ab.invariants:
        cands.append([u for u in units if (upow(u, n) == R.one()).all()])
    total = 1
    for c in cands:
        total *= len(c)
    if total > budget:
        raise BudgetExceeded(f"{total} characters exceed the budget {budget}")
    out = []
    for combo in itertools.product(*cands):
        vals = np.zeros((group.order, ring.m), dtype=np.int64)
        for g in range(group.order):
            v = R.one()
            for u, k in zip(combo, ab.coords[g]):
                v = R.mul(v, upow(u, k))
            vals[g] = v
        out.append(Character(ring, group, vals))
    return out


def twist(M: GModule, chi: Character, i: int = 1) -> GModule:
    """M(i): action chi(g)^i * rho(g)."""
    if chi.ring is not M.ring or chi.group is not M.group:
        raise MixedRings("character and module over different rings or groups")
    c = chi.power(i).values
    R = M.R
    acts = [R.mul(M.lin_action[g], c[g][None, None, :]) for g in range(M.group.order)]
    return _from_lin_action(M.ring, M.group, M.profile, acts)


def frobenius_twist(M: GModule, i: int = 1) -> GModule:
    """Apply the Witt Frobenius^i to every matrix entry."""
    i %= M.m
    if i == 0:
        return M
    F = np.linalg.matrix_power(M.ring.frobenius_matrix.astype(object), i)
    F = np.array(F, dtype=np.int64) % M.ring.modulus
    acts = np.einsum("cb,gijb->gijc", F, M.lin_action) % M.ring.modulus
    return _from_lin_action(M.ring, M.group, M.profile, acts)


def restrict(M: GModule, H: Subgroup) -> GModule:
    if H.parent is not M.group:
        raise NotASubgroup("subgroup of a different group")
    return GModule(M.ring, H.as_group, M.profile, M.real[list(H.elements)], check=False)


def coset_data(G: FiniteGroup, H: Subgroup):
    """Left coset representatives (minimal elements) and, for each g, j:
    the pair (j', h) with g t_j = t_j' h, h given as an index into H.elements."""
    reps, label = G.left_cosets(H)
    pos = {h: i for i, h in enumerate(H.elements)}
    k = len(reps)
    tgt = np.zeros((G.order, k), dtype=np.int64)
    hh = np.zeros((G.order, k), dtype=np.int64)
    for g in range(G.order):
        for j, t in enumerate(reps):
            x = G.mul(g, t)
            jp = int(label[x])
            h = G.mul(G.inverse(reps[jp]), x)
            tgt[g, j] = jp
            hh[g, j] = pos[h]
    return reps, tgt, hh


def induce(M: GModule, H: Subgroup) -> GModule:
    """Ind_H^G M for M a module over ``H.as_group``; basis (coset j, basis i)."""
    G = H.parent
    if M.group is not H.as_group:
        raise NotASubgroup("module is not over the given subgroup")
    reps, tgt, hh = coset_data(G, H)
    k, N = len(reps), M.dim
    real = np.zeros((G.order, k * N, k * N), dtype=np.int64)
    for g in range(G.order):
        for j in range(k):
            jp = tgt[g, j]
            real[g, jp * N:(jp + 1) * N, j * N:(j + 1) * N] = M.real[hh[g, j]]
    return GModule(M.ring, G, M.profile * k, real, check=False)


def reduce_module(M: GModule, r: int) -> GModule:
    """M ⊗ W_r as a module over W_r."""
    if not 1 <= r <= M.D:
        raise BadLength(f"cannot reduce depth {M.D} to {r}")
    if r == M.D:
        return M
    ring = WittRing(M.ring.field, r)
    acts = M.lin_action % (M.p ** r)
    return _from_lin_action(ring, M.group, tuple(min(e, r) for e in M.profile), acts)


def truncate(M: GModule, r: int) -> GModule:
    """M{r} = M / p^r M, kept over the same ring W_D."""
    return GModule(M.ring, M.group, tuple(min(e, r) for e in M.profile), M.real, check=False)


def field_embedding(small: FieldDesc, big: FieldDesc, root: int | None = None):
    """Codes table F_small -> F_big sending x to a root of small.modulus."""
    if big.p != small.p or big.m % small.m:
        raise NoEmbedding(f"F_{small.q} does not embed in F_{big.q}")
    fb = field_arith(big)
    mod = small.modulus

    def poly_at(coeffs, x):
        acc = 0
        for c in reversed(coeffs):
            acc = int(fb.add(int(fb.mul(acc, x)), c % big.p))
        return acc

    roots = [x for x in range(big.q) if poly_at(mod, x) == 0] if small.m > 1 else [big.p]
    if root is None:
        if not roots:
            raise NoEmbedding("modulus has no root in the target field")
        root = roots[0]
    elif small.m > 1 and root not in roots:
        raise NoEmbedding(f"{root} is not a root of the modulus")
    fs = field_arith(small)
    table = []
    for code in range(small.q):
        cs = fs.coords[code]
        table.append(poly_at(list(cs), root) if small.m > 1 else int(cs[0]))
    return table


def extend_scalars(M: GModule, big: FieldDesc, root: int | None = None) -> GModule:
    table = field_embedding(M.ring.field, big, root)
    ring = WittRing(big, M.D)
    acts = []
    for g in range(M.group.order):
        lin = M.lin_action[g]
        out = np.zeros(lin.shape[:2] + (big.m,), dtype=np.int64)
        for i in range(lin.shape[0]):
            for j in range(lin.shape[1]):
                w = M.ring.delin(lin[i, j])
                out[i, j] = ring.lin(WittVec(ring, tuple(table[c] for c in w.codes)))
        acts.append(out)
    return _from_lin_action(ring, M.group, M.profile, acts)


# ---------------------------------------------------------------------------
# submodules, quotients, fixed points

def _relations(M: GModule) -> np.ndarray:
    """Columns p^{e_i} e_i of the ambient W_D^n (zero in M)."""
    R = M.R
    rel = R.zeros(M.rank, M.rank)
    for i, e in enumerate(M.profile):
        rel[i, i, 0] = M.p ** e % M.ring.modulus
    return rel


def _flat_to_lin(M, X):
    """Flattened (dim, k) -> (rank, k, m)."""
    X = np.asarray(X, dtype=np.int64)
    k = X.shape[1]
    return X.reshape(M.rank, M.m, k).transpose(0, 2, 1)


def _lin_to_flat(rank, X):
    X = np.asarray(X, dtype=np.int64)
    r, k, m = X.shape
    return X.transpose(0, 2, 1).reshape(r * m, k)


@dataclass
class SubquotientModule:
    """A G-stable subquotient of an ambient module with explicit maps.

    ``module`` is the subquotient as a GModule, ``lift`` (ambient.dim,
    module.dim) maps its flattened coordinates to ambient representatives and
    :meth:`coords` maps ambient elements (of the Z part) to module coordinates.
    """

    ambient: GModule
    module: GModule
    lift: np.ndarray
    _sq: object = field(repr=False)

    def coords(self, x) -> np.ndarray:
        M = self.ambient
        lin = np.asarray(x, dtype=np.int64).reshape(M.rank, M.m)
        c = self._sq.coords(lin)
        return c.reshape(-1)


def subquotient_module(M: GModule, Zgens, Bgens) -> SubquotientModule:
    """(Z + rel) / (B + rel) for G-stable spans Z ⊇ B given as lin column arrays."""
    R = M.R
    rel = _relations(M)
    Z = np.concatenate([np.asarray(Zgens, dtype=np.int64).reshape(M.rank, -1, M.m), rel], axis=1)
    B = np.concatenate([np.asarray(Bgens, dtype=np.int64).reshape(M.rank, -1, M.m), rel], axis=1)
    sq = wsubquotient(Z, B, R)
    k = len(sq.exps)
    gens = sq.gens  # (rank, k, m)
    acts = np.zeros((M.group.order, k, k, M.m), dtype=np.int64)
    for g in range(M.group.order):
        img = R.matmul(M.lin_action[g], gens)
        for j in range(k):
            acts[g, :, j] = sq.coords(img[:, j])
    Q = _from_lin_action(M.ring, M.group, tuple(sq.exps), acts)
    lift = (R.realify(gens) % M.ring.modulus) if k else np.zeros((M.dim, 0), dtype=np.int64)
    lift = M.reduce_rows(lift)
    return SubquotientModule(M, Q, lift, sq)


def submodule(M: GModule, gens) -> SubquotientModule:
    """The G-submodule generated, as a W-module, by the given lin columns.

    The span must be G-stable; this is checked.
    """
    gens = np.asarray(gens, dtype=np.int64).reshape(M.rank, -1, M.m)
    span = wspan(np.concatenate([gens, _relations(M)], axis=1), M.R)
    for g in M.group.generators:
        img = M.R.matmul(M.lin_action[g], gens)
        for j in range(gens.shape[1]):
            if not span.contains(img[:, j]):
                raise NotEquivariant("span is not G-stable")
    return subquotient_module(M, gens, np.zeros((M.rank, 0, M.m), dtype=np.int64))


def quotient(M: GModule, gens) -> SubquotientModule:
    gens = np.asarray(gens, dtype=np.int64).reshape(M.rank, -1, M.m)
    return subquotient_module(M, M.R.eye(M.rank), gens)


def kernel_of(A: GModule, B: GModule, F) -> SubquotientModule:
    """ker(F: A -> B) as a submodule of A (F realified)."""
    R = A.R
    lin = R.unrealify(np.asarray(F, dtype=np.int64))
    gens, _ = wkernel(lin, R, row_exps=B.profile)
    return subquotient_module(A, gens, np.zeros((A.rank, 0, A.m), dtype=np.int64))


def image_of(A: GModule, B: GModule, F) -> SubquotientModule:
    R = A.R
    lin = R.unrealify(np.asarray(F, dtype=np.int64))
    return subquotient_module(B, lin, np.zeros((B.rank, 0, B.m), dtype=np.int64))


@dataclass
class FixedPoints:
    basis: np.ndarray      # (rank, k, m) lin columns
    exps: list             # generator j spans a copy of W_{exps[j]}

    @property
    def rank(self):
        return len(self.exps)


def fixed_points(M: GModule, H: Subgroup | None = None) -> FixedPoints:
    """M^H with a cyclic W-basis."""
    G = M.group
    if H is None:
        H = G.whole()
    gens = H.generators()
    R = M.R
    blocks = []
    for h in gens:
        blocks.append(M.lin_action[h] - R.eye(M.rank))
    if not blocks:
        blocks = [R.zeros(0, M.rank)]
    A = np.concatenate(blocks, axis=0) % M.ring.modulus
    row_exps = list(M.profile) * len(gens)
    Zg, _ = wkernel(A, R, row_exps=row_exps if gens else None)
    sq = wsubquotient(np.concatenate([Zg, _relations(M)], axis=1), _relations(M), R)
    return FixedPoints(sq.gens % M.ring.modulus, list(sq.exps))


# ---------------------------------------------------------------------------
# norm splitting

@dataclass
class NormSplitting:
    """Data for V ⊕ W ≅ Ind_{G_0}^G Res V when [G : G_0] is prime to p.

    Matrices are realified.  ``diag``: V -> Ind, ``norm``: Ind -> V,
    ``idempotent = diag * index^-1 * norm``, ``W`` = ker(norm) with inclusion
    ``incl_W``, and ``phi = [diag | incl_W]`` is an isomorphism V ⊕ W -> Ind.
    """

    V: GModule
    G0: Subgroup
    induced: GModule
    diag: np.ndarray
    norm: np.ndarray
    idempotent: np.ndarray
    W: GModule
    incl_W: np.ndarray
    phi: np.ndarray
    phi_inv: np.ndarray


def norm_splitting(V: GModule, G0: Subgroup) -> NormSplitting:
    G = V.group
    p = V.p
    k = G.order // G0.order
    if k % p == 0:
        raise IndexDivisibleByP(f"index {k} is divisible by p = {p}")
    res = restrict(V, G0)
    Ind = induce(res, G0)
    reps, _, _ = coset_data(G, G0)
    N = V.dim
    mod = V.ring.modulus
    diag = np.zeros((k * N, N), dtype=np.int64)
    norm = np.zeros((N, k * N), dtype=np.int64)
    for j, t in enumerate(reps):
        diag[j * N:(j + 1) * N] = V.real[G.inverse(t)]
        norm[:, j * N:(j + 1) * N] = V.real[t]
    diag, norm = Ind.reduce_rows(diag), V.reduce_rows(norm)
    kinv = pow(k, -1, mod)
    e = Ind.reduce_rows(diag @ (kinv * norm % mod) % mod)
    if not np.array_equal(Ind.reduce_rows(e @ e), e):  # pragma: no cover
        raise AssertionError("norm splitting idempotent failed")
    ker = kernel_of(Ind, V, norm)
    # the kernel module and its inclusion
    W = ker.module
    incl = ker.lift
    phi = np.concatenate([diag, incl], axis=1) % mod
    VW = direct_sum(V, W)
    phi_inv = _module_iso_inverse(VW, Ind, phi)
    return NormSplitting(V, G0, Ind, diag, norm, e, W, incl, phi, phi_inv)


def _module_iso_inverse(A: GModule, B: GModule, F) -> np.ndarray:
    """Inverse of an isomorphism of free modules (realified)."""
    R = A.R
    if not (A.is_free() and B.is_free()):
        # general case: solve column by column in B's coordinates
        inv = np.zeros((A.dim, B.dim), dtype=np.int64)
        lin = R.unrealify(F)
        for j in range(B.rank):
            b = R.zeros(B.rank)
            b[j] = R.one()
            x = wsolve(lin, b, R, row_exps=B.profile)
            if x is None:
                raise NotInvertible("map is not surjective")
            inv[:, j * A.m:(j + 1) * A.m] = R.realify(x[:, None, :])
        return A.reduce_rows(inv)
    return R.realify(winverse(R.unrealify(F), R))


def conjugate(M: GModule, P, Pinv=None) -> GModule:
    """The module with action P^-1 rho(g) P (P realified, invertible, free M)."""
    if Pinv is None:
        Pinv = M.R.realify(winverse(M.R.unrealify(P), M.R))
    real = np.einsum("ij,gjk,kl->gil", Pinv, M.real, P) % M.ring.modulus
    return GModule(M.ring, M.group, M.profile, real, check=False)
