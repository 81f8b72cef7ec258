"""Yoneda 1-extensions 0 -> B -> E -> A -> 0 and their classes in H^1(G, Hom(A, B))."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .cohomology import CohomologyGroup, cohomology_group, differential
from .errors import (BudgetExceeded, MixedRings, NotACocycle, NotExact, NotFree,
                     ShapeMismatch)
from .gmodules import (GModule, check_morphism, direct_sum, hom, hom_unvec, hom_vec,
                       image_of, kernel_of, quotient, subquotient_module)
from .linalg import Scalars, wsolve_many

LINK_BUDGET = 2 ** 16


def module_length(M: GModule) -> int:
    """log_p |M|."""
    return M.m * sum(M.profile)


def elements(M: GModule) -> np.ndarray:
    """Every element of M as a flattened coordinate vector, in lexicographic order."""
    ranges = [range(M.p ** int(e)) for e in M.flat_exps]
    if not ranges:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(*ranges)), dtype=np.int64).reshape(-1, M.dim)


def _lin(M: GModule, F):
    return M.R.unrealify(np.asarray(F, dtype=np.int64))


def _real(R: Scalars, lin, target: GModule):
    return target.reduce_rows(R.realify(np.asarray(lin, dtype=np.int64) % R.mod))


@dataclass
class Extension1:
    """0 -> sub --incl--> middle --proj--> quot -> 0, maps realified."""

    sub: GModule
    middle: GModule
    quot: GModule
    incl: np.ndarray
    proj: np.ndarray

    def __post_init__(self):
        self.incl = np.asarray(self.incl, dtype=np.int64)
        self.proj = np.asarray(self.proj, dtype=np.int64)
        self.validate()

    # the names used in the extension-of-A-by-B convention
    @property
    def B(self):
        return self.sub

    @property
    def E(self):
        return self.middle

    @property
    def A(self):
        return self.quot

    @property
    def group(self):
        return self.middle.group

    def validate(self):
        B, E, A = self.sub, self.middle, self.quot
        if not (B.ring is E.ring is A.ring) or not (B.group is E.group is A.group):
            raise MixedRings("extension terms over different rings or groups")
        check_morphism(B, E, self.incl)
        check_morphism(E, A, self.proj)
        if A.reduce_rows(self.proj @ self.incl).any():
            raise NotExact("proj o incl is not zero")
        if kernel_of(B, E, self.incl).module.rank:
            raise NotExact("inclusion is not injective")
        if module_length(image_of(E, A, self.proj).module) != module_length(A):
            raise NotExact("projection is not surjective")
        if module_length(E) != module_length(A) + module_length(B):
            raise NotExact("image of the inclusion differs from the kernel of the projection")

    def to_json(self):
        R = self.middle.R
        from .gmodules import witt_matrix_json
        return {"sub": self.sub.to_json(), "middle": self.middle.to_json(),
                "quot": self.quot.to_json(),
                "incl": witt_matrix_json(self.middle.ring, R.unrealify(self.incl)),
                "proj": witt_matrix_json(self.middle.ring, R.unrealify(self.proj))}

    @classmethod
    def from_json(cls, obj, group):
        from .gmodules import lin_matrix
        B = GModule.from_json(obj["sub"], group)
        E = GModule.from_json(obj["middle"], group)
        A = GModule.from_json(obj["quot"], group)
        B, A = _same_ring(E, B), _same_ring(E, A)
        R = E.R
        incl = _real(R, lin_matrix(E.ring, obj["incl"]), E)
        proj = _real(R, lin_matrix(E.ring, obj["proj"]), A)
        return cls(B, E, A, incl, proj)


def _same_ring(E: GModule, M: GModule) -> GModule:
    if M.ring is E.ring:
        return M
    if M.ring.field != E.ring.field or M.ring.d > E.ring.d:
        raise MixedRings("extension terms over incompatible rings")
    return inflate(M, E.ring.d)


def inflate(M: GModule, D: int) -> GModule:
    """A W_r-module regarded as a W_D-module (D >= r), same profile."""
    from .witt import WittRing
    if D == M.D:
        return M
    ring = WittRing(M.ring.field, D)
    R = Scalars.of_ring(ring)
    real = np.stack([R.realify(a) for a in M.lin_action])
    return GModule(ring, M.group, M.profile, real, check=False)


def split_extension(B: GModule, A: GModule) -> Extension1:
    E = direct_sum(B, A)
    incl = np.zeros((E.dim, B.dim), dtype=np.int64)
    incl[:B.dim] = np.eye(B.dim, dtype=np.int64)
    proj = np.zeros((A.dim, E.dim), dtype=np.int64)
    proj[:, B.dim:] = np.eye(A.dim, dtype=np.int64)
    return Extension1(B, E, A, E.reduce_rows(incl), A.reduce_rows(proj))


# ---------------------------------------------------------------------------
# classes

def section(ext: Extension1, variant: int = 0) -> np.ndarray:
    """A W-linear (not equivariant) section A -> E of the projection, realified.

    ``variant = 1`` adds incl o phi for a fixed nonzero phi: A -> B, giving a
    second, different section.
    """
    A, E = ext.quot, ext.middle
    if not A.is_free():
        raise NotFree("sections are only constructed for free quotients")
    R = E.R
    P = _lin(E, ext.proj)
    X = wsolve_many(P, R.eye(A.rank), R, row_exps=A.profile)
    if X is None:  # pragma: no cover - excluded by validate()
        raise NotExact("projection is not surjective")
    if variant and ext.sub.rank:
        inc = _lin(E, ext.incl)
        X = X.copy()
        X[:, 0] = (X[:, 0] + variant * inc[:, 0]) % R.mod
    return _real(R, X, E)


@dataclass
class ExtClass1:
    """A 1-cocycle G -> Hom(A, B) with its class in H^1(G, Hom(A, B))."""

    hom_module: GModule
    cocycle: np.ndarray
    H1: CohomologyGroup
    coords: np.ndarray

    def __eq__(self, other):
        return (isinstance(other, ExtClass1) and self.hom_module.same_action(other.hom_module)
                and np.array_equal(self.coords, other.coords))

    def is_zero(self) -> bool:
        return not self.coords.any()

    def to_json(self):
        return {"orders": list(self.H1.orders), "coords": [int(x) for x in self.coords],
                "cocycle": self.cocycle.tolist()}


def hom_cocycle_from_maps(A: GModule, B: GModule, maps) -> np.ndarray:
    """(|G|, rank B, rank A, m) lin maps -> flattened Hom(A, B) cochain table."""
    maps = np.asarray(maps, dtype=np.int64)
    return np.stack([hom_vec(f).reshape(-1) for f in maps])


def class_of_cocycle(A: GModule, B: GModule, table) -> ExtClass1:
    H = hom(A, B)
    H1 = cohomology_group(None, H, 1)
    table = np.asarray(table, dtype=np.int64)
    return ExtClass1(H, table, H1, H1.class_of(table))


def extension_cocycle(ext: Extension1, S=None) -> np.ndarray:
    """g |-> rho_E(g) s rho_A(g)^-1 - s, as a Hom(A, B)-valued table."""
    A, B, E = ext.quot, ext.sub, ext.middle
    G = E.group
    R = E.R
    if S is None:
        S = section(ext)
    inc = _lin(E, ext.incl)
    vals = []
    for g in range(G.order):
        C = E.reduce_rows(E.real[g] @ S @ A.real[G.inverse(g)] - S)
        vals.append(_lin(E, C))
    rhs = np.concatenate(vals, axis=1)           # (rank E, |G| rank A, m)
    X = wsolve_many(inc, rhs, R, row_exps=E.profile)
    if X is None:
        raise NotExact("cocycle values do not lie in the image of the inclusion")
    X = X.reshape(B.rank, G.order, A.rank, R.m).transpose(1, 0, 2, 3)
    mods = (B.p ** np.array(B.profile))[None, :, None, None]
    return hom_cocycle_from_maps(A, B, X % mods)


def class_of_extension(ext: Extension1, S=None) -> ExtClass1:
    if not ext.quot.is_free():
        raise NotFree("the quotient of the extension must be free")
    return class_of_cocycle(ext.quot, ext.sub, extension_cocycle(ext, S))


def extension_of_class(c, A: GModule, B: GModule) -> Extension1:
    """E = B ⊕ A with rho(g) = [[rho_B(g), c(g) rho_A(g)], [0, rho_A(g)]]."""
    table = c.cocycle if isinstance(c, ExtClass1) else np.asarray(c, dtype=np.int64)
    if not A.is_free():
        raise NotFree("A must be free")
    H = hom(A, B)
    if table.shape != (A.group.order, H.dim):
        raise ShapeMismatch(f"cocycle table has shape {table.shape}")
    if differential(H, 1, table).any():
        raise NotACocycle("not a 1-cocycle")
    G = A.group
    R = A.R
    N = B.dim + A.dim
    real = np.zeros((G.order, N, N), dtype=np.int64)
    for g in range(G.order):
        f = hom_unvec(table[g].reshape(-1, R.m), B.rank, A.rank)
        Cg = R.realify(f % R.mod) @ A.real[g]
        real[g, :B.dim, :B.dim] = B.real[g]
        real[g, :B.dim, B.dim:] = Cg
        real[g, B.dim:, B.dim:] = A.real[g]
    E = GModule(A.ring, G, B.profile + A.profile, real % A.ring.modulus, check=True)
    incl = np.zeros((N, B.dim), dtype=np.int64)
    incl[:B.dim] = np.eye(B.dim, dtype=np.int64)
    proj = np.zeros((A.dim, N), dtype=np.int64)
    proj[:, B.dim:] = np.eye(A.dim, dtype=np.int64)
    return Extension1(B, E, A, E.reduce_rows(incl), A.reduce_rows(proj))


# ---------------------------------------------------------------------------
# functoriality

def _flat_unit(n, k):
    v = np.zeros(n, dtype=np.int64)
    v[k] = 1
    return v


def pushforward(ext: Extension1, f, B2: GModule) -> Extension1:
    """f_* E: the pushout of E along f: B -> B2 (f realified)."""
    B, E, A = ext.sub, ext.middle, ext.quot
    f = np.asarray(f, dtype=np.int64)
    check_morphism(B, B2, f)
    R = E.R
    amb = direct_sum(B2, E)
    rel = np.concatenate([(-f) % R.mod, ext.incl], axis=0)
    Q = quotient(amb, _lin(amb, amb.reduce_rows(rel)))
    incl2 = np.stack([Q.coords(_flat_unit(amb.dim, k)) for k in range(B2.dim)], axis=1) \
        if B2.dim else np.zeros((Q.module.dim, 0), dtype=np.int64)
    proj2 = A.reduce_rows(ext.proj @ Q.lift[B2.dim:] % R.mod)
    return Extension1(B2, Q.module, A, Q.module.reduce_rows(incl2), proj2)


def pullback(ext: Extension1, g, A2: GModule) -> Extension1:
    """g^* E: the fibre product of E and A2 over A along g: A2 -> A."""
    B, E, A = ext.sub, ext.middle, ext.quot
    g = np.asarray(g, dtype=np.int64)
    check_morphism(A2, A, g)
    R = E.R
    amb = direct_sum(E, A2)
    F = A.reduce_rows(np.concatenate([ext.proj, (-g) % R.mod], axis=1))
    K = kernel_of(amb, A, F)
    emb = np.concatenate([ext.incl, np.zeros((A2.dim, B.dim), dtype=np.int64)], axis=0)
    incl2 = np.stack([K.coords(emb[:, k]) for k in range(B.dim)], axis=1) \
        if B.dim else np.zeros((K.module.dim, 0), dtype=np.int64)
    proj2 = A2.reduce_rows(K.lift[E.dim:])
    return Extension1(B, K.module, A2, K.module.reduce_rows(incl2), proj2)


def direct_sum_extension(e1: Extension1, e2: Extension1) -> Extension1:
    B = direct_sum(e1.sub, e2.sub)
    E = direct_sum(e1.middle, e2.middle)
    A = direct_sum(e1.quot, e2.quot)
    incl = np.zeros((E.dim, B.dim), dtype=np.int64)
    incl[:e1.middle.dim, :e1.sub.dim] = e1.incl
    incl[e1.middle.dim:, e1.sub.dim:] = e2.incl
    proj = np.zeros((A.dim, E.dim), dtype=np.int64)
    proj[:e1.quot.dim, :e1.middle.dim] = e1.proj
    proj[e1.quot.dim:, e1.middle.dim:] = e2.proj
    return Extension1(B, E, A, incl, proj)


def baer_sum(e1: Extension1, e2: Extension1) -> Extension1:
    """Pull back the direct sum along the diagonal, push forward along the sum map."""
    A, B = e1.quot, e1.sub
    if not (e2.quot.same_action(A) and e2.sub.same_action(B)):
        raise ShapeMismatch("Baer sum operands must share A and B")
    e2 = Extension1(B, e2.middle, A, e2.incl, e2.proj)
    D = direct_sum_extension(e1, e2)
    diag = np.concatenate([np.eye(A.dim, dtype=np.int64)] * 2, axis=0)
    P = pullback(D, D.quot.reduce_rows(diag), A)
    add = np.concatenate([np.eye(B.dim, dtype=np.int64)] * 2, axis=1)
    return pushforward(P, B.reduce_rows(add), B)


def push_cocycle(A: GModule, B: GModule, B2: GModule, f, table) -> np.ndarray:
    """c |-> f o c for a Hom(A, B)-valued cochain table."""
    R = A.R
    fl = _lin(B2, f)
    out = []
    for row in np.asarray(table, dtype=np.int64):
        c = hom_unvec(row.reshape(-1, R.m), B.rank, A.rank)
        out.append(hom_vec(R.matmul(fl, c)).reshape(-1))
    return hom(A, B2).reduce_rows(np.stack(out).T).T


def pull_cocycle(A: GModule, A2: GModule, B: GModule, g, table) -> np.ndarray:
    """c |-> c o g for a Hom(A, B)-valued cochain table."""
    R = A.R
    gl = _lin(A, g)
    out = []
    for row in np.asarray(table, dtype=np.int64):
        c = hom_unvec(row.reshape(-1, R.m), B.rank, A.rank)
        out.append(hom_vec(R.matmul(c, gl)).reshape(-1))
    return hom(A2, B).reduce_rows(np.stack(out).T).T


# ---------------------------------------------------------------------------
# linkage by exhaustive search

def linked_brute(e1: Extension1, e2: Extension1, budget: int = LINK_BUDGET) -> bool:
    return find_linking_iso(e1, e2, budget) is not None


def find_linking_iso(e1: Extension1, e2: Extension1, budget: int = LINK_BUDGET):
    """Search for phi: E1 -> E2 with phi incl1 = incl2, proj2 phi = proj1, equivariant.

    The search uses enumeration only: lifts of the basis of A are found by
    scanning the elements of E1 and E2, B-coordinates by table lookup, and
    every candidate is tested against the generators.
    """
    B, A = e1.sub, e1.quot
    E1, E2 = e1.middle, e2.middle
    if E1.group is not E2.group or E1.ring is not E2.ring:
        raise MixedRings("extensions over different groups or rings")
    if not (e2.sub.same_action(B) and e2.quot.same_action(A)):
        return None
    if not A.is_free():
        raise NotFree("linkage search needs a free quotient")
    for E in (E1, E2):
        if E.p ** module_length(E) > budget:
            raise BudgetExceeded(f"an extension middle exceeds {budget} elements")
    R = E1.R
    mod = E1.ring.modulus
    els1, els2, elsB = elements(E1), elements(E2), elements(B)
    p1 = A.reduce_rows(e1.proj @ els1.T % mod).T
    p2 = A.reduce_rows(e2.proj @ els2.T % mod).T
    X, cand = [], []
    for j in range(A.rank):
        u = _flat_unit(A.dim, j * A.m)
        X.append(els1[np.nonzero((p1 == u).all(axis=1))[0][0]])
        cand.append(els2[np.nonzero((p2 == u).all(axis=1))[0]])
    total = 1
    for c in cand:
        total *= len(c)
    if total > budget:
        raise BudgetExceeded(f"{total} candidate maps exceed the budget {budget}")
    inc1 = E1.reduce_rows(e1.incl @ elsB.T % mod).T
    table = {row.tobytes(): b for row, b in zip(inc1, elsB)}
    Xr = E1.reduce_rows(R.realify(_columns_lin(E1, np.stack(X, axis=1))))
    Bco = np.zeros((B.dim, E1.dim), dtype=np.int64)
    Aco = np.zeros((A.dim, E1.dim), dtype=np.int64)
    for k in range(E1.dim):
        v = _flat_unit(E1.dim, k)
        a = A.reduce_rows(e1.proj @ v % mod)
        rest = E1.reduce_rows((v - Xr @ a) % mod)
        b = table.get(rest.tobytes())
        if b is None:  # pragma: no cover - exactness was validated
            raise NotExact("element outside incl(B) + span of the lifts")
        Bco[:, k], Aco[:, k] = b, a
    base = e2.incl @ Bco % mod
    gens = E1.group.generators
    for choice in itertools.product(*cand):
        Yr = R.realify(_columns_lin(E2, np.stack(choice, axis=1)))
        Phi = E2.reduce_rows((base + Yr @ Aco) % mod)
        if all(np.array_equal(E2.reduce_rows(E2.real[g] @ Phi), E2.reduce_rows(Phi @ E1.real[g]))
               for g in gens):
            return Phi
    return None


def _columns_lin(M: GModule, cols):
    """Flat element columns (dim, k) -> lin matrix (rank, k, m)."""
    cols = np.asarray(cols, dtype=np.int64)
    k = cols.shape[1]
    return cols.reshape(M.rank, M.m, k).transpose(0, 2, 1)
