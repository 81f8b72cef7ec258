"""Group cohomology H^n(G, M), n <= 2, from inhomogeneous (bar) cochains.

Coefficients are flattened to Z/p^D through the linear coordinates of M, so
everything below is linear algebra over Z/p^D with per-coordinate relations
p^{e_i} coming from the profile.

An n-cocycle (n = 1, 2) is determined by its values with first argument a
generator, plus, for n = 2, the constant c(1, -).  The spanning tree of the
Cayley graph propagates these parameters to a full table, and it suffices
to impose the cocycle identity for first argument a generator.  This keeps
the linear systems of size O(|S| * |G|^n) instead of O(|G|^{n+1}).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, InputError, NotACocycle, NotCyclic, ShapeMismatch
from .gmodules import GModule, check_morphism, restrict
from .groups import FiniteGroup, GSet, Subgroup, orbits
from .linalg import (NormalForm, Subquotient, kernel, normal_form, solve, subquotient,
                     wcokernel_exps, zp)

MAX_ORDER = {0: 10 ** 6, 1: 128, 2: 24, 3: 12}

__all__ = ["normal_form", "CohomologyGroup", "cohomology_group", "cyclic_oracle",
           "differential", "naive_cohomology", "InducedMap", "induced_map",
           "restriction_map", "is_n_surjective", "shapiro"]


def _budget(G: FiniteGroup, n: int, budget=None):
    limit = MAX_ORDER.get(n, 0) if budget is None else budget
    if G.order > limit:
        raise BudgetExceeded(f"|G| = {G.order} exceeds the degree-{n} budget {limit}")


# ---------------------------------------------------------------------------
# bar differentials on full tables

def differential(M: GModule, n: int, table) -> np.ndarray:
    """d: C^n -> C^{n+1}.  ``table`` has shape (|G|,)*n + (dim,) [+ (batch,)]."""
    G = M.group
    o = G.order
    c = np.asarray(table, dtype=np.int64)
    batch = c.ndim == n + 2
    if not batch:
        c = c[..., None]
    if c.shape[:n] != (o,) * n or c.shape[n] != M.dim:
        raise ShapeMismatch(f"cochain table has shape {c.shape}")
    g = list(np.indices((o,) * (n + 1)))
    # g_1 . c(g_2, ..., g_{n+1})
    first = c[tuple(g[1:])] if n else np.broadcast_to(c, (o,) + c.shape)
    out = np.einsum("...ij,...jb->...ib", M.real[g[0]], first)
    T = G.table
    for i in range(n):
        args = g[:i] + [T[g[i], g[i + 1]]] + g[i + 2:]
        out = out + (-1) ** (i + 1) * c[tuple(args)]
    out = out + (-1) ** (n + 1) * c[tuple(g[:n])]
    out = M.reduce_rows(np.moveaxis(out, -2, 0))
    out = np.moveaxis(out, 0, -2)
    return out if batch else out[..., 0]


def _flat_rows(M: GModule, count: int):
    return list(np.tile(M.flat_exps, count))


def _relations(exps, p, D):
    r = np.zeros((len(exps), len(exps)), dtype=np.int64)
    for i, e in enumerate(exps):
        r[i, i] = p ** int(e) % p ** D
    return r


# ---------------------------------------------------------------------------
# parametrised cocycles

@dataclass
class _Param:
    """Linear parametrisation of cochains satisfying the tree relations."""

    T: np.ndarray            # (|G|,)*n + (dim, P)
    exps: list               # profile exponent of every parameter coordinate
    constraints: np.ndarray  # rows vanish exactly on cocycles
    row_exps: list
    coboundary: np.ndarray   # (P, dim * |G|^(n-1)) image of d on C^{n-1}
    params_of: object        # table -> parameter vector


def _generators(G: FiniteGroup):
    out = []
    for s in G.generators:
        if s != 0 and s not in out:
            out.append(s)
    return out


def _param0(M: GModule) -> _Param:
    G, N = M.group, M.dim
    S = _generators(G)
    T = np.eye(N, dtype=np.int64)
    A = np.concatenate([M.real[s] - np.eye(N, dtype=np.int64) for s in S], axis=0) \
        if S else np.zeros((0, N), dtype=np.int64)
    return _Param(T, list(M.flat_exps), A % M.ring.modulus, _flat_rows(M, len(S)),
                  np.zeros((N, 0), dtype=np.int64), lambda t: np.asarray(t).reshape(N))


def _param1(M: GModule) -> _Param:
    G, N, o = M.group, M.dim, M.group.order
    S = _generators(G)
    P = len(S) * N
    T = np.zeros((o, N, P), dtype=np.int64)
    for a, s in enumerate(S):
        T[s, :, a * N:(a + 1) * N] = np.eye(N, dtype=np.int64)
    for g, s, h in G.cayley_tree(S):
        if h == 0:
            continue
        T[g] = T[s] + M.real[s] @ T[h]
    T = M.reduce_rows(np.moveaxis(T, 1, 0))
    T = np.moveaxis(T, 0, 1)
    rows = []
    for a, s in enumerate(S):
        # s c(h) - c(sh) + c(s)
        d = np.einsum("ij,hjp->hip", M.real[s], T) - T[G.table[s]] + T[s][None]
        rows.append(d.reshape(o * N, P))
    A = np.concatenate(rows, axis=0) if rows else np.zeros((0, P), dtype=np.int64)
    Bc = np.concatenate([M.real[s] - np.eye(N, dtype=np.int64) for s in S], axis=0) \
        if S else np.zeros((0, N), dtype=np.int64)

    def params_of(table):
        table = np.asarray(table)
        return np.concatenate([table[s] for s in S]) if S else np.zeros(0, dtype=np.int64)

    return _Param(T, list(np.tile(M.flat_exps, len(S))), A % M.ring.modulus,
                  _flat_rows(M, len(S) * o), Bc % M.ring.modulus, params_of)


def _param2(M: GModule) -> _Param:
    G, N, o = M.group, M.dim, M.group.order
    S = _generators(G)
    P = (1 + len(S) * o) * N
    T = np.zeros((o, o, N, P), dtype=np.int64)
    T[0, :, :, :N] = np.eye(N, dtype=np.int64)
    pos = {}
    for a, s in enumerate(S):
        pos[s] = a
        for h in range(o):
            c0 = N + (a * o + h) * N
            T[s, h, :, c0:c0 + N] = np.eye(N, dtype=np.int64)
    Tab = G.table
    for g, s, h in G.cayley_tree(S):
        if h == 0:
            continue
        # c(sh, k) = s c(h, k) + c(s, hk) - c(s, h)
        T[g] = (np.einsum("ij,kjp->kip", M.real[s], T[h]) + T[s, Tab[h]] - T[s, h][None])
        T[g] %= M.ring.modulus
    T = np.moveaxis(M.reduce_rows(np.moveaxis(T, 2, 0)), 0, 2)
    rows = []
    for s in S:
        # s c(h,k) - c(sh,k) + c(s,hk) - c(s,h)
        d = (np.einsum("ij,hkjp->hkip", M.real[s], T) - T[Tab[s]] + T[s][Tab]
             - T[s][:, None])
        rows.append((d % M.ring.modulus).reshape(o * o * N, P))
    A = np.concatenate(rows, axis=0) if rows else np.zeros((0, P), dtype=np.int64)
    # coboundaries of b in C^1: parameter coordinates of db
    Bc = np.zeros((P, o * N), dtype=np.int64)
    eye = np.eye(N, dtype=np.int64)

    def put(row0, h, mat):
        Bc[row0:row0 + N, h * N:(h + 1) * N] += mat

    put(0, 0, eye)   # db(1,1) = b(1)
    for a, s in enumerate(S):
        for h in range(o):
            r0 = N + (a * o + h) * N
            put(r0, h, M.real[s])
            put(r0, int(Tab[s, h]), -eye)
            put(r0, s, eye)

    def params_of(table):
        table = np.asarray(table)
        parts = [table[0, 0]] + [table[s, h] for s in S for h in range(o)]
        return np.concatenate(parts)

    exps = list(np.tile(M.flat_exps, 1 + len(S) * o))
    return _Param(T, exps, A % M.ring.modulus, _flat_rows(M, len(S) * o * o),
                  Bc % M.ring.modulus, params_of)


_PARAM = {0: _param0, 1: _param1, 2: _param2}


# ---------------------------------------------------------------------------

@dataclass
class CohomologyGroup:
    """H^n(G, M) = Z^n / B^n with a cyclic decomposition.

    ``orders[j]`` is the order of the j-th cyclic factor, ``representatives[j]``
    a full cocycle table generating it.
    """

    module: GModule
    n: int
    orders: list
    representatives: list
    _param: _Param = field(repr=False)
    _sq: Subquotient = field(repr=False)

    @property
    def group(self) -> FiniteGroup:
        return self.module.group

    @property
    def size(self) -> int:
        out = 1
        for o in self.orders:
            out *= o
        return out

    @property
    def is_zero(self) -> bool:
        return not self.orders

    @property
    def exps(self):
        return list(self._sq.exps)

    def is_cocycle(self, table) -> bool:
        d = differential(self.module, self.n, table)
        return not d.any()

    def class_of(self, table, check: bool = True) -> np.ndarray:
        """Coordinates of the class of a cocycle, entry j reduced mod orders[j]."""
        table = np.asarray(table, dtype=np.int64)
        if check and not self.is_cocycle(table):
            raise NotACocycle(f"not a {self.n}-cocycle")
        M = self.module
        table = (table.reshape(-1, M.dim) % M.row_mods[None, :]).reshape(table.shape)
        x = self._param.params_of(table)
        return self._sq.coords(x.reshape(-1, 1))[:, 0]

    def is_coboundary(self, table) -> bool:
        return not self.class_of(table).any()

    def cobounding(self, table):
        """An (n-1)-cochain b with db = table, or None if the class is nonzero."""
        if self.n == 0:
            raise InputError("degree 0 has no coboundaries")
        table = np.asarray(table, dtype=np.int64)
        if not self.is_cocycle(table):
            raise NotACocycle(f"not a {self.n}-cocycle")
        M, par = self.module, self._param
        x = par.params_of(table) % (M.p ** np.array(par.exps, dtype=np.int64))
        b = solve(par.coboundary, x, M.p, M.D, row_exps=par.exps)
        if b is None:
            return None
        shape = (self.group.order,) * (self.n - 1) + (M.dim,)
        return (b.reshape(-1, M.dim) % M.row_mods[None, :]).reshape(shape)

    def cocycle(self, coords) -> np.ndarray:
        """A cocycle table representing the class with the given coordinates."""
        coords = np.asarray(coords, dtype=np.int64).reshape(-1)
        if len(coords) != len(self.orders):
            raise ShapeMismatch("wrong number of class coordinates")
        params = self._sq.element(coords[:, None])[:, 0] if len(coords) else \
            np.zeros(self._param.T.shape[-1], dtype=np.int64)
        return _table_from_params(self, params)

    def zero(self) -> np.ndarray:
        return np.zeros((self.group.order,) * self.n + (self.module.dim,), dtype=np.int64)

    def to_json(self):
        return {"orders": [int(o) for o in self.orders],
                "representatives": [np.asarray(r).tolist() for r in self.representatives]}


def _table_from_params(H: CohomologyGroup, params) -> np.ndarray:
    T = H._param.T
    tab = np.tensordot(T, np.asarray(params, dtype=np.int64), axes=([-1], [0]))
    M = H.module
    flat = tab.reshape(-1, M.dim)
    return (flat % M.row_mods[None, :]).reshape(tab.shape)


def _module_cache(M: GModule) -> dict:
    c = M.__dict__.get("_cohom")
    if c is None:
        c = M.__dict__["_cohom"] = {}
    return c


def cohomology_group(G_or_H, M: GModule, n: int, budget=None) -> CohomologyGroup:
    """H^n(G, M), or H^n(H, Res M) when a Subgroup is given."""
    if isinstance(G_or_H, Subgroup):
        if G_or_H.parent is not M.group:
            raise InputError("subgroup of a different group")
        M = restricted(M, G_or_H)
    elif G_or_H is not None and G_or_H is not M.group:
        raise InputError("module is over a different group")
    if n not in (0, 1, 2):
        raise InputError("only degrees 0, 1, 2 are supported")
    _budget(M.group, n, budget)
    cache = _module_cache(M)
    if n in cache:
        return cache[n]
    p, D = M.p, M.D
    R = zp(p, D)
    par = _PARAM[n](M)
    Zk = kernel(par.constraints, p, D, row_exps=par.row_exps) if len(par.constraints) \
        else np.eye(len(par.exps), dtype=np.int64)
    rel = _relations(par.exps, p, D)
    Z = np.concatenate([Zk, rel], axis=1)
    B = np.concatenate([par.coboundary, rel], axis=1)
    sq = subquotient(Z, B, p, D)
    H = CohomologyGroup(M, n, [p ** e for e in sq.exps], [], par, sq)
    gens = sq.gens[..., 0] if sq.gens.ndim == 3 else sq.gens
    H.representatives = [_table_from_params(H, gens[:, j]) for j in range(len(sq.exps))]
    cache[n] = H
    return H


def restricted(M: GModule, H: Subgroup) -> GModule:
    if H.order == M.group.order:
        return M
    c = M.__dict__.setdefault("_restrict", {})
    if H.elements not in c:
        c[H.elements] = restrict(M, H)
    return c[H.elements]


# ---------------------------------------------------------------------------
# independent routes

def _d_matrix(M: GModule, n: int) -> np.ndarray:
    o, N = M.group.order, M.dim
    size = o ** n * N
    basis = np.eye(size, dtype=np.int64).reshape((o,) * n + (N, size))
    img = differential(M, n, basis)
    return img.reshape(o ** (n + 1) * N, size)


def naive_cohomology(M: GModule, n: int, limit: int = 2000):
    """Orders and Subquotient of H^n from the full bar complex (small cases only)."""
    o, N = M.group.order, M.dim
    if o ** n * N > limit or o ** (n + 1) * N > 50 * limit:
        raise BudgetExceeded("naive bar complex too large")
    p, D = M.p, M.D
    dn = _d_matrix(M, n)
    Zk = kernel(dn, p, D, row_exps=_flat_rows(M, o ** (n + 1)))
    exps = list(np.tile(M.flat_exps, o ** n))
    rel = _relations(exps, p, D)
    Z = np.concatenate([Zk, rel], axis=1)
    if n:
        B = np.concatenate([_d_matrix(M, n - 1), rel], axis=1)
    else:
        B = rel
    sq = subquotient(Z, B, p, D)
    return [p ** e for e in sq.exps], sq


def cyclic_oracle(G: FiniteGroup, M: GModule, n: int):
    """H^n of a cyclic group from the norm and augmentation formulas.

    Returns (orders, representative cocycle tables).
    """
    if M.group is not G:
        raise InputError("module over a different group")
    sigma = G.cyclic_generator()
    if sigma is None:
        raise NotCyclic(f"{G!r} is not cyclic")
    o, N = G.order, M.dim
    p, D = M.p, M.D
    mod = M.ring.modulus
    powers = [0]
    for _ in range(o - 1):
        powers.append(G.mul(sigma, powers[-1]))
    S = M.real[sigma]
    I = np.eye(N, dtype=np.int64)
    Nm = sum(M.real[g] for g in range(o)) % mod
    rel = _relations(M.flat_exps, p, D)
    rows = list(M.flat_exps)
    if n == 0 or n % 2 == 0:
        Zk = kernel((S - I) % mod, p, D, row_exps=rows)
        B = rel if n == 0 else np.concatenate([Nm, rel], axis=1)
    else:
        Zk = kernel(Nm, p, D, row_exps=rows)
        B = np.concatenate([(S - I) % mod, rel], axis=1)
    sq = subquotient(np.concatenate([Zk, rel], axis=1), B, p, D)
    gens = sq.gens[..., 0]
    reps = []
    for j in range(len(sq.exps)):
        v = gens[:, j]
        if n == 0:
            reps.append(M.reduce_rows(v))
        elif n == 1:
            # c(sigma^k) = (1 + sigma + ... + sigma^{k-1}) v
            tab = np.zeros((o, N), dtype=np.int64)
            acc = np.zeros(N, dtype=np.int64)
            for k in range(o):
                tab[powers[k]] = acc
                acc = (acc + M.real[powers[k]] @ v) % mod
            reps.append(M.reduce_rows(tab.T).T)
        else:
            # c(sigma^i, sigma^j) = v if i + j >= |G| else 0
            tab = np.zeros((o, o, N), dtype=np.int64)
            for i in range(o):
                for k in range(o):
                    if i + k >= o:
                        tab[powers[i], powers[k]] = v
            reps.append(np.moveaxis(M.reduce_rows(np.moveaxis(tab, 2, 0)), 0, 2))
    return [p ** e for e in sq.exps], reps


# ---------------------------------------------------------------------------
# induced maps

@dataclass
class InducedMap:
    """f_*: H^n(H, A) -> H^n(H, B) in the cyclic bases of source and target."""

    source: CohomologyGroup
    target: CohomologyGroup
    matrix: np.ndarray        # (len(target.orders), len(source.orders))

    def is_surjective(self) -> bool:
        return self.uncovered() is None

    def uncovered(self):
        """Index of a target generator outside the image, or None when onto."""
        tgt = self.target
        if not tgt.orders:
            return None
        p, D = tgt.module.p, tgt.module.D
        rel = _relations(tgt.exps, p, D)
        A = np.concatenate([self.matrix, rel], axis=1)
        if not wcokernel_exps(A[..., None], zp(p, D)):
            return None
        for i in range(len(tgt.orders)):
            b = np.zeros(len(tgt.orders), dtype=np.int64)
            b[i] = 1
            if solve(A, b, p, D) is None:
                return i
        return None  # pragma: no cover

    def apply(self, coords):
        out = self.matrix @ np.asarray(coords, dtype=np.int64)
        return out % np.array(self.target.orders, dtype=np.int64) if self.target.orders else out


def apply_to_cochain(F, table, target: GModule):
    table = np.asarray(table, dtype=np.int64)
    out = np.tensordot(table, np.asarray(F, dtype=np.int64).T, axes=([-1], [0]))
    flat = out.reshape(-1, target.dim) % target.row_mods[None, :]
    return flat.reshape(out.shape)


def induced_map(f, n: int, H=None, A: GModule | None = None, B: GModule | None = None,
                budget=None) -> InducedMap:
    """Map on H^n(H, -) induced by an equivariant morphism ``f: A -> B``.

    ``f`` may be a Morphism-like object with ``source``, ``target`` and
    ``matrix`` attributes, or a realified matrix together with A and B.
    """
    if A is None:
        A, B, F = f.source, f.target, f.matrix
    else:
        F = np.asarray(f, dtype=np.int64)
    check_morphism(A, B, F)
    if H is None:
        H = A.group.whole()
    HA = cohomology_group(H, A, n, budget)
    HB = cohomology_group(H, B, n, budget)
    cols = [HB.class_of(apply_to_cochain(F, r, HB.module), check=False)
            for r in HA.representatives]
    mat = np.stack(cols, axis=1) if cols else np.zeros((len(HB.orders), 0), dtype=np.int64)
    return InducedMap(HA, HB, mat.astype(np.int64))


def restriction_map(M: GModule, n: int, K: Subgroup, H: Subgroup) -> InducedMap:
    """res: H^n(K, M) -> H^n(H, M) for H <= K <= G."""
    if not H.is_subgroup_of(K):
        raise InputError("H is not contained in K")
    HK = cohomology_group(K, M, n)
    HH = cohomology_group(H, M, n)
    posK = {g: i for i, g in enumerate(K.elements)}
    sel = np.array([posK[h] for h in H.elements], dtype=np.int64)
    cols = []
    for r in HK.representatives:
        t = r[np.ix_(*([sel] * n))] if n else r
        cols.append(HH.class_of(t, check=False))
    mat = np.stack(cols, axis=1) if cols else np.zeros((len(HH.orders), 0), dtype=np.int64)
    return InducedMap(HK, HH, mat.astype(np.int64))


@dataclass
class SurjectivityEntry:
    subgroup: Subgroup
    surjective: bool
    source_orders: list
    target_orders: list
    witness: np.ndarray | None = None

    def to_json(self):
        out = {"subgroup": list(self.subgroup.elements), "surjective": self.surjective,
               "source_orders": self.source_orders, "target_orders": self.target_orders}
        if self.witness is not None:
            out["witness"] = np.asarray(self.witness).tolist()
        return out


@dataclass
class SurjectivityReport:
    n: int
    entries: list

    @property
    def surjective(self) -> bool:
        return all(e.surjective for e in self.entries)

    @property
    def witness(self):
        for e in self.entries:
            if not e.surjective:
                return e
        return None

    def to_json(self):
        return {"n": self.n, "surjective": self.surjective,
                "subgroups": [e.to_json() for e in self.entries]}


def is_n_surjective(f, n: int, G: FiniteGroup | None = None, A=None, B=None,
                    stop_early: bool = False, budget=None) -> SurjectivityReport:
    """Check that f_*: H^n(H, A) -> H^n(H, B) is onto for every subgroup H."""
    if A is None:
        A, B, F = f.source, f.target, f.matrix
    else:
        F = np.asarray(f, dtype=np.int64)
    G = A.group if G is None else G
    if G is not A.group:
        raise InputError("morphism over a different group")
    entries = []
    for Hs in G.subgroups():
        im = induced_map(F, n, Hs, A, B, budget)
        miss = im.uncovered()
        wit = im.target.representatives[miss] if miss is not None else None
        entries.append(SurjectivityEntry(Hs, miss is None, list(im.source.orders),
                                         list(im.target.orders), wit))
        if stop_early and miss is not None:
            break
    return SurjectivityReport(n, entries)


# ---------------------------------------------------------------------------
# Shapiro

@dataclass
class Shapiro:
    """H^1(G_0, K[X]) ≅ ⊕_i H^1(G_i, K) for a G_0-set X and a coefficient module K.

    K[X] = k^X ⊗ K has flat index x * K.dim + j and g (v e_x) = (g v) e_{gx}.
    G_i is the stabiliser of the base point of the i-th orbit.  Cocycle
    tables on G_i are indexed by positions in ``stabilizer.elements``.
    """

    module: GModule
    gset: GSet
    orbits: list
    coefficient: GModule

    def _block(self, x):
        n = self.coefficient.dim
        return slice(x * n, (x + 1) * n)

    def forward(self, table):
        """c |-> (h |-> c(h)_{b_i}) on each stabiliser."""
        table = np.asarray(table, dtype=np.int64)
        out = []
        for orb in self.orbits:
            idx = list(orb.stabilizer.elements)
            out.append(table[idx][:, self._block(orb.base)])
        return out

    def backward(self, tables):
        """(a_i) |-> c with c(g)_x = t_x a_i(t_x^-1 g t_{g^-1 x}) on orbit i."""
        G = self.gset.group
        K = self.coefficient
        act = self.gset.action
        out = np.zeros((G.order, self.module.dim), dtype=np.int64)
        for orb, a in zip(self.orbits, tables):
            a = np.asarray(a, dtype=np.int64)
            pos = {h: i for i, h in enumerate(orb.stabilizer.elements)}
            for g in range(G.order):
                ginv = G.inverse(g)
                for x in orb.points:
                    tx = orb.transversal[x]
                    y = int(act[ginv, x])
                    h = G.mul(G.mul(G.inverse(tx), g), orb.transversal[y])
                    out[g, self._block(x)] = K.real[tx] @ a[pos[h]]
        return self.module.reduce_rows(out.T % self.module.ring.modulus).T

    def stabilizer_groups(self):
        return [cohomology_group(None, restricted(self.coefficient, o.stabilizer), 1)
                for o in self.orbits]

    def verify(self) -> bool:
        """Round trips on representatives: exact one way, up to coboundary the other."""
        HP = cohomology_group(None, self.module, 1)
        Hs = self.stabilizer_groups()
        for k, Hi in enumerate(Hs):
            for r in Hi.representatives:
                tabs = [np.zeros_like(Hj.zero()) for Hj in Hs]
                tabs[k] = r
                back = self.backward(tabs)
                if not HP.is_cocycle(back):
                    return False
                fw = self.forward(back)
                if any(not np.array_equal(x % self.module.ring.modulus, t) for x, t in
                       zip(fw, tabs)):
                    return False
        for r in HP.representatives:
            rt = self.backward(self.forward(r))
            if not np.array_equal(HP.class_of(rt), HP.class_of(r)):
                return False
        return True


def shapiro(G0: FiniteGroup, X: GSet, ring=None, profile_exp: int | None = None,
            coefficient: GModule | None = None) -> Shapiro:
    """Shapiro data for K[X]; K defaults to the free (or W_e) rank-1 trivial module."""
    if X.group is not G0:
        raise InputError("G-set over a different group")
    if coefficient is None:
        e = ring.d if profile_exp is None else profile_exp
        coefficient = GModule.trivial(ring, G0, 1, (e,))
    K = coefficient
    if K.group is not G0:
        raise InputError("coefficient module over a different group")
    real = np.stack([np.kron(np.eye(X.size, dtype=np.int64)[X.action[g]].T, K.real[g])
                     for g in range(G0.order)])
    M = GModule(K.ring, G0, K.profile * X.size, real % K.ring.modulus, check=False)
    M.gset = X
    return Shapiro(M, X, orbits(G0, X), K)


def oracle_agrees(M: GModule, n: int) -> bool:
    """Bar-resolution H^n against the cyclic formulas, class by class.

    The orders must agree and the oracle's representative cocycles must be
    cocycles whose classes generate all of H^n.
    """
    G = M.group
    H = cohomology_group(None, M, n)
    orders, reps = cyclic_oracle(G, M, n)
    if sorted(H.orders) != sorted(orders):
        return False
    if not H.orders:
        return True
    if not all(H.is_cocycle(r) for r in reps):
        return False
    C = np.stack([H.class_of(r, check=False) for r in reps], axis=1)
    rel = _relations(H.exps, M.p, M.D)
    sq = subquotient(np.concatenate([C, rel], axis=1), rel, M.p, M.D)
    return sq.size == H.size
