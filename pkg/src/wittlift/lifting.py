"""Lifting representations over W_r(F_q) to higher torsion.

A representation here is a free GModule.  Matrices handled internally are in
linear coordinates over the Witt ring unless they are called ``real``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .cohomology import (CohomologyGroup, cohomology_group, induced_map, shapiro,
                         _relations as _rel_matrix)
from .errors import (BudgetExceeded, CertificateFailed, ClassNonzero, BadShrink,
                     IndexDivisibleByP, MixedRings, NotALift, NotFound, NotFree,
                     ShapeMismatch, WittLiftError)
from .gmodules import (Character, GModule, conjugate, direct_sum, fixed_points,
                       frobenius_twist, hom, hom_unvec, hom_vec, induce, norm_splitting,
                       reduce_module, restrict, truncate)
from .groups import FiniteGroup, GSet, Subgroup, orbits
from .linalg import Scalars, kernel, solve, wis_invertible, winverse, wkernel
from .witt import WittRing
from .yoneda import (Extension1, class_of_extension, extension_cocycle, extension_of_class,
                     inflate, pullback, pushforward, section)

BRUTE_BUDGET = 10 ** 7
INTERTWINER_BUDGET = 4096


def _ring(M: GModule, d: int) -> WittRing:
    return WittRing(M.ring.field, d)


def _check_rep(M: GModule):
    if not M.is_free():
        raise NotFree("representations must be free modules")


def pad(lin, ring: WittRing) -> np.ndarray:
    """Reinterpret linear coordinates in [0, p^r) as elements of a deeper ring."""
    return np.asarray(lin, dtype=np.int64) % ring.modulus


def rep_from_lin(ring: WittRing, group: FiniteGroup, acts, check: bool = True) -> GModule:
    R = Scalars.of_ring(ring)
    acts = np.asarray(acts, dtype=np.int64)
    real = np.stack([R.realify(a % R.mod) for a in acts])
    return GModule(ring, group, (ring.d,) * acts.shape[1], real, check=check)


def rebase(M: GModule, group: FiniteGroup) -> GModule:
    """The same module over an equal copy of its group."""
    if group is M.group:
        return M
    if not np.array_equal(group.table, M.group.table):
        raise MixedRings("groups with different multiplication tables")
    return GModule(M.ring, group, M.profile, M.real, check=False)


def _compose_subgroup(G: FiniteGroup, H: Subgroup, K: Subgroup) -> Subgroup:
    """K <= H.as_group, viewed inside G."""
    return Subgroup(G, tuple(sorted(H.elements[k] for k in K.elements)))


def _lin_inverse(R: Scalars, X):
    return winverse(np.asarray(X, dtype=np.int64), R)


# ---------------------------------------------------------------------------
# lift verification

@dataclass
class LiftCheck:
    ok: bool
    method: str            # "equal", "conjugate", "none"
    intertwiner: np.ndarray | None = None   # lin X with X rho_small(g) = rho_red(g) X

    def __bool__(self):
        return self.ok


def check_lift(big: GModule, small: GModule, budget: int = INTERTWINER_BUDGET) -> LiftCheck:
    if big.group is not small.group and not np.array_equal(big.group.table, small.group.table):
        raise ShapeMismatch("representations of different groups")
    if big.rank != small.rank or big.ring.field != small.ring.field or big.D < small.D:
        raise ShapeMismatch("incompatible ranks, fields or depths")
    _check_rep(big)
    _check_rep(small)
    red = reduce_module(big, small.D)
    if np.array_equal(red.lin_action, small.lin_action):
        return LiftCheck(True, "equal")
    X = find_intertwiner(red, small, budget)
    if X is None:
        return LiftCheck(False, "none")
    return LiftCheck(True, "conjugate", X)


def is_lift(big: GModule, small: GModule) -> bool:
    return check_lift(big, small).ok


def find_intertwiner(A: GModule, B: GModule, budget: int = INTERTWINER_BUDGET):
    """An invertible X with X rho_B(g) = rho_A(g) X for all g, or None.

    The solution module is computed exactly; invertibility only depends on X
    mod p, so only generators of full exponent are combined, with residue
    coefficients.  Exhaustive up to ``budget`` combinations, seeded random
    sampling beyond.
    """
    R = A.R
    n = A.rank
    I = R.eye(n)
    rows = []
    from .gmodules import _kron_lin
    for s in A.group.generators:
        BsT = B.lin_action[s].transpose(1, 0, 2)
        # vec(A_s X - X B_s) = (I ⊗ A_s - B_s^T ⊗ I) vec X
        rows.append((_kron_lin(R, I, A.lin_action[s]) - _kron_lin(R, BsT, I)) % R.mod)
    if not rows:
        rows.append(R.zeros(0, n * n))
    M = np.concatenate(rows, axis=0)
    gens, exps = wkernel(M, R)
    full = [gens[:, j] for j, e in enumerate(exps) if e == R.D]
    if not full:
        return None
    R1 = Scalars.of_ring(WittRing(A.ring.field, 1))
    p, m = R.p, R.m
    k = len(full)
    G = np.stack(full, axis=1)            # (n*n, k, m)

    def build(coef):
        x = R.matvec(G, coef)
        return x.reshape(n, n, m).transpose(1, 0, 2)   # column-major vec

    def ok(X):
        return wis_invertible(X % p, R1)

    total = p ** (m * k)
    if total <= budget:
        for digits in itertools.product(range(p), repeat=m * k):
            coef = np.array(digits, dtype=np.int64).reshape(k, m)
            if coef.any():
                X = build(coef)
                if ok(X):
                    return X
        return None
    rng = np.random.default_rng(7)
    for _ in range(budget):
        X = build(rng.integers(0, p, size=(k, m)))
        if ok(X):
            return X
    return None


def align_lift(big: GModule, small: GModule) -> GModule:
    """A conjugate of ``big`` reducing to ``small`` exactly."""
    chk = check_lift(big, small)
    if not chk.ok:
        raise NotALift("not a lift, not even up to conjugacy")
    if chk.method == "equal":
        return big
    R = big.R
    X = pad(chk.intertwiner, big.ring)      # X rho_small = rho_red X, so use X^-1 big X
    Xr = R.realify(X)
    Xinv = R.realify(_lin_inverse(R, X))
    out = conjugate(big, Xr, Xinv)
    assert np.array_equal(reduce_module(out, small.D).lin_action, small.lin_action)
    return rebase(out, small.group)


# ---------------------------------------------------------------------------
# Teichmüller lifts

def teichmuller_lift(rho: GModule, D: int) -> GModule:
    """Lifts of trivial or one-dimensional representations through the Teichmüller map."""
    _check_rep(rho)
    ring = _ring(rho, D)
    G = rho.group
    if rho.rank == 1:
        vals = []
        small = rho.ring
        for g in range(G.order):
            x = small.delin(rho.lin_action[g, 0, 0])
            code = x.codes[0]
            vals.append(np.array(ring.lin(ring.teichmuller(code)), dtype=np.int64))
        acts = np.array(vals)[:, None, None, :]
        out = rep_from_lin(ring, G, acts)
        if not is_lift(out, rho):
            raise NotALift("Teichmüller lift does not reduce correctly")
        return out
    R = rho.R
    I = R.eye(rho.rank)
    if not all(np.array_equal(rho.lin_action[g], I) for g in range(G.order)):
        raise ShapeMismatch("Teichmüller lifting needs a trivial or rank-1 representation")
    return GModule.trivial(ring, G, rho.rank)


# ---------------------------------------------------------------------------
# the obstruction to lifting one step

@dataclass
class ObstructionReport:
    rep: GModule
    r: int
    set_lift: np.ndarray        # (|G|, n, n, m) lin over W_{r+1}
    coefficient: GModule        # End(V_1) with its Frobenius^r twist
    cocycle: np.ndarray         # (|G|, |G|, dim) in the Witt view
    H2: CohomologyGroup
    coords: np.ndarray
    cobounding: np.ndarray | None

    @property
    def vanishes(self) -> bool:
        return not self.coords.any()

    def to_json(self):
        out = {"r": self.r, "h2_orders": [int(o) for o in self.H2.orders],
               "class": [int(x) for x in self.coords], "vanishes": self.vanishes,
               "set_lift": self.set_lift.tolist(), "cocycle": self.cocycle.tolist()}
        if self.cobounding is not None:
            out["cobounding"] = self.cobounding.tolist()
        return out


def _frobenius_power(ring1: WittRing, i: int):
    m = ring1.m
    i %= m
    F = np.eye(m, dtype=np.int64)
    for _ in range(i):
        F = F @ ring1.frobenius_matrix % ring1.modulus
    return F


def padded_set_lift(rho: GModule) -> np.ndarray:
    """L(g) = rho(g) read in W_{r+1} (digits in [0, p^r)); invertible since mod p unchanged."""
    return pad(rho.lin_action, _ring(rho, rho.D + 1))


def perturbed_set_lift(rho: GModule, rng) -> np.ndarray:
    """Another set-theoretic lift: L(g) + p^r X(g) for random X, L(1) = I kept."""
    L = padded_set_lift(rho)
    r = rho.D
    X = rng.integers(0, rho.p, size=L.shape)
    X[0] = 0
    return (L + rho.p ** r * X) % rho.p ** (r + 1)


def obstruction_p_next(rho: GModule, set_lift=None, budget=None) -> ObstructionReport:
    _check_rep(rho)
    G = rho.group
    r = rho.D
    p, n, m = rho.p, rho.rank, rho.m
    ring = _ring(rho, r + 1)
    R = Scalars.of_ring(ring)
    L = padded_set_lift(rho) if set_lift is None else np.asarray(set_lift, dtype=np.int64)
    if L.shape != (G.order, n, n, m):
        raise ShapeMismatch("set-theoretic lift has the wrong shape")
    if not np.array_equal(L % p ** r, rho.lin_action):
        raise NotALift("the set-theoretic lift does not reduce to the representation")
    mod = R.mod
    Lr = np.stack([R.realify(a) for a in L])
    Li = np.stack([R.realify(_lin_inverse(R, a)) for a in L])
    # c(g, h) = L(g) L(h) L(gh)^-1
    C = np.einsum("gij,hjk->ghik", Lr, Lr) % mod
    C = np.einsum("ghik,ghkl->ghil", C, Li[G.table]) % mod
    D = (C - np.eye(n * m, dtype=np.int64)) % mod
    if (D % p ** r).any():
        raise AssertionError("set-theoretic lift is not a lift mod p^r")
    mlin = np.stack([[R.unrealify(D[g, h]) // p ** r for h in range(G.order)]
                     for g in range(G.order)]) % p           # (o, o, n, n, m)
    F = _frobenius_power(WittRing(rho.ring.field, 1), r)
    mw = np.einsum("cb,ghijb->ghijc", F, mlin) % p
    V1 = reduce_module(rho, 1)
    coeff = frobenius_twist(hom(V1, V1), r)
    table = np.stack([[hom_vec(mw[g, h]).reshape(-1) for h in range(G.order)]
                      for g in range(G.order)])
    H2 = cohomology_group(None, coeff, 2, budget)
    if not H2.is_cocycle(table):
        raise AssertionError("obstruction cochain fails the cocycle identity")
    coords = H2.class_of(table, check=False)
    b = H2.cobounding(table) if not coords.any() else None
    return ObstructionReport(rho, r, L, coeff, table, H2, coords, b)


def _generator_list(G: FiniteGroup):
    return list(dict.fromkeys(s for s in G.generators if s != 0))


def _rref_mod_p(rows, p):
    """Fully reduced row echelon form over F_p (rows as a 2-d array)."""
    A = np.array(rows, dtype=np.int64) % p
    piv = []
    r = 0
    for c in range(A.shape[1] if A.size else 0):
        nz = [i for i in range(r, A.shape[0]) if A[i, c]]
        if not nz:
            continue
        A[[r, nz[0]]] = A[[nz[0], r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        for i in range(A.shape[0]):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        piv.append(c)
        r += 1
        if r == A.shape[0]:
            break
    return A[:r], piv


def solve_lift(rho: GModule, report: ObstructionReport | None = None,
               canonical: bool = True) -> GModule:
    """L'(g) = (I - p^r b(g)) L(g) for a cobounding cochain db = m.

    All lifts arise this way with b running over b_0 + Z^1.  With
    ``canonical`` the lift whose generator matrices come first in the
    lexicographic order of :func:`brute_force_lift` is returned.
    """
    if report is None:
        report = obstruction_p_next(rho)
    if not report.vanishes:
        raise ClassNonzero(f"obstruction class {list(report.coords)} is nonzero")
    G = rho.group
    r, p, n, m = report.r, rho.p, rho.rank, rho.m
    ring = _ring(rho, r + 1)
    R = Scalars.of_ring(ring)
    R1 = Scalars.of_ring(WittRing(rho.ring.field, 1))
    Finv = _frobenius_power(WittRing(rho.ring.field, 1), -r)
    L = report.set_lift
    b = report.cobounding

    def factor(bg):
        """Linear-view matrix b_lin(g) from a Witt-view Hom vector."""
        bw = hom_unvec(np.asarray(bg).reshape(-1, m), n, n)
        return np.einsum("cb,ijb->ijc", Finv, bw) % p

    if canonical and G.order > 1:
        gens = _generator_list(G)
        C = report.coefficient
        H1 = cohomology_group(None, C, 1)
        par = H1._param
        Zg = kernel(par.constraints, p, 1, row_exps=par.row_exps) if par.constraints.size \
            else np.eye(par.T.shape[-1], dtype=np.int64)

        def digits(table_at_gens):
            # digit vector y with lift(s) = L(s) + p^r y(s), y(s) = -b_lin(s) L(s) mod p
            out = [(-R1.matmul(factor(table_at_gens[i]), L[s] % p)) % p
                   for i, s in enumerate(gens)]
            return np.stack(out).reshape(-1)

        y0 = digits([b[s] for s in gens])
        zt = [np.einsum("gdp,p->gd", par.T, Zg[:, j]) % p for j in range(Zg.shape[1])]
        # y is affine in b: y(b0 + z) = y0 + (y(z) computed from the zero base)
        basis = [digits([z[s] for s in gens]) for z in zt]
        E, piv = _rref_mod_p(basis, p) if basis else (np.zeros((0, y0.size), dtype=np.int64), [])
        coef = np.zeros(len(zt), dtype=np.int64)
        y = y0.copy()
        for row, c in zip(E, piv):
            y = (y - y[c] * row) % p
        # recover the cocycle realising y - y0 (solve in the span of the z's)
        if basis:
            Bm = np.stack(basis, axis=1)
            sol = solve(Bm, (y - y0) % p, p, 1)
            coef = sol if sol is not None else coef
            zfull = sum((int(coef[j]) * zt[j] for j in range(len(zt))),
                        np.zeros_like(b)) % p
            b = (b + zfull) % p
    acts = []
    for g in range(G.order):
        U = (R.eye(n) - p ** r * factor(b[g])) % R.mod
        acts.append(R.matmul(U, L[g]))
    out = rep_from_lin(ring, G, np.stack(acts))
    if not is_lift(out, rho):
        raise AssertionError("solve_lift produced a non-lift")
    return out


# ---------------------------------------------------------------------------
# exhaustive search

@dataclass
class BruteResult:
    found: bool
    lift: GModule | None
    checked: int
    total: int

    def to_json(self):
        out = {"found": self.found, "checked": self.checked, "total": self.total}
        if self.lift is not None:
            out["lift"] = self.lift.to_json()
        return out


def _batch_realify(R: Scalars, X):
    """(z, a, b, m) lin -> (z, a*m, b*m) realified."""
    z, a, b, m = X.shape
    if m == 1:
        return X[..., 0] % R.mod
    blocks = np.einsum("zija,abc->zicjb", X, R.S) % R.mod
    return blocks.reshape(z, a * m, b * m)


def brute_force_lift(rho: GModule, budget: int = BRUTE_BUDGET, chunk: int = 4096) -> BruteResult:
    """First lift of the generator matrices (lexicographic) defining a representation."""
    _check_rep(rho)
    G = rho.group
    r, p, n, m = rho.D, rho.p, rho.rank, rho.m
    ring = _ring(rho, r + 1)
    R = Scalars.of_ring(ring)
    gens = [s for s in G.generators if s != 0]
    gens = list(dict.fromkeys(gens))
    k = len(gens) * n * n * m
    total = p ** k
    if total > budget:
        raise BudgetExceeded(f"{total} candidate lifts exceed the budget {budget}")
    base = pad(rho.lin_action[gens], ring) if gens else np.zeros((0, n, n, m), dtype=np.int64)
    tree = G.cayley_tree(gens) if gens else []
    gpos = {s: i for i, s in enumerate(gens)}
    N = n * m
    I = np.eye(N, dtype=np.int64)
    weights = p ** np.arange(k - 1, -1, -1, dtype=np.int64)
    checked = 0
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = (idx[:, None] // weights[None, :]) % p
        cand = (base[None] + p ** r * digits.reshape((-1,) + base.shape)) % R.mod
        z = cand.shape[0]
        reals = _batch_realify(R, cand.reshape((-1, n, n, m))).reshape(z, len(gens), N, N) \
            if gens else np.zeros((z, 0, N, N), dtype=np.int64)
        full = np.zeros((z, G.order, N, N), dtype=np.int64)
        full[:, 0] = I
        built = {0}
        for g, s, h in tree:
            if g in built:
                continue
            full[:, g] = np.einsum("zij,zjk->zik", reals[:, gpos[s]], full[:, h]) % R.mod
            built.add(g)
        good = np.ones(z, dtype=bool)
        for a, s in enumerate(gens):
            lhs = np.einsum("zij,zhjk->zhik", reals[:, a], full) % R.mod
            rhs = full[:, G.table[s]]
            good &= (lhs == rhs).all(axis=(1, 2, 3))
        checked += z
        hit = np.nonzero(good)[0]
        if hit.size:
            j = hit[0]
            out = GModule(ring, G, (r + 1,) * n, full[j], check=True)
            return BruteResult(True, out, checked - z + int(j) + 1, total)
    return BruteResult(False, None, checked, total)


# ---------------------------------------------------------------------------
# invariant flags

@dataclass
class FlagData:
    """G_0 <= G and a basis Q (lin, over W_1) with Q^-1 rho(g) Q = [[P_Y(g), *], [0, P_X(g)]].

    P_Y and P_X are permutation matrices of the G_0-sets Y (sub) and X
    (quotient), both over ``G0.as_group``.
    """

    G0: Subgroup
    basis: np.ndarray
    k: int
    Y: GSet
    X: GSet
    transcript: list = field(default_factory=list)

    def to_json(self):
        return {"G0": list(self.G0.elements), "basis": self.basis.tolist(), "k": self.k,
                "Y": self.Y.action.tolist(), "X": self.X.action.tolist(),
                "transcript": list(self.transcript)}


def _flag_blocks(rho: GModule, Q, g_list):
    R = rho.R
    Qi = _lin_inverse(R, Q)
    return {g: R.matmul(R.matmul(Qi, rho.lin_action[g]), Q) for g in g_list}


def _perm_of(Pm):
    """Permutation x -> sigma(x) of a 0/1 permutation matrix, or None."""
    P = np.asarray(Pm)
    if P.ndim == 3:
        if P[..., 1:].any():
            return None
        P = P[..., 0]
    if not ((P == 0) | (P == 1)).all() or not (P.sum(axis=0) == 1).all() \
            or not (P.sum(axis=1) == 1).all():
        return None
    return [int(np.argmax(P[:, x])) for x in range(P.shape[1])]


def find_invariant_flag(rho: GModule) -> FlagData:
    _check_rep(rho)
    if rho.D != 1:
        raise ShapeMismatch("invariant flags are computed for representations over the residue field")
    if rho.rank == 2:
        return _flag_dim2(rho)
    if rho.p == 2 and rho.m == 1 and rho.rank in (3, 4):
        return _flag_perm_search(rho)
    raise ShapeMismatch("flags are supported in dimension 2, or dimension 3 and 4 over F_2")


def _flag_dim2(rho: GModule) -> FlagData:
    G, R, p = rho.group, rho.R, rho.p
    P = G.sylow(p)
    fp = fixed_points(rho, P)
    v = fp.basis[:, 0]
    log = [f"Sylow-{p} subgroup of order {P.order}", f"fixed vector {v.tolist()}"]
    Q = None
    for j in range(2):
        e = R.zeros(2)
        e[j] = R.one()
        cand = np.stack([v, e], axis=1)
        if wis_invertible(cand, R):
            Q = cand
            break
    blocks = _flag_blocks(rho, Q, range(G.order))
    one = R.one()
    stab = [g for g in range(G.order) if not blocks[g][1, 0].any()]
    elems = [g for g in stab if np.array_equal(blocks[g][0, 0], one)
             and np.array_equal(blocks[g][1, 1], one)]
    G0 = G.subgroup(elems)
    log.append(f"line stabilizer of order {len(stab)}, character kernels give G_0 of order {G0.order}")
    if G0.index % p == 0:  # pragma: no cover - G_0 contains the Sylow subgroup
        raise AssertionError("flag subgroup has index divisible by p")
    H = G0.as_group
    return FlagData(G0, Q, 1, GSet.trivial(H, 1), GSet.trivial(H, 1), log)


def _gl_f2(k):
    out = []
    for bits in itertools.product(range(2), repeat=k * k):
        A = np.array(bits, dtype=np.int64).reshape(k, k)
        if round(abs(np.linalg.det(A))) % 2 == 1:
            out.append(A)
    return out


def _subspaces_f2(n, k):
    """All k-dimensional subspaces of F_2^n as (rref key, basis columns)."""
    seen, out = set(), []
    vecs = [np.array(v, dtype=np.int64) for v in itertools.product(range(2), repeat=n) if any(v)]
    for combo in itertools.combinations(range(len(vecs)), k):
        B = np.stack([vecs[i] for i in combo], axis=1)
        span = frozenset(tuple((B @ np.array(c)) % 2) for c in itertools.product(range(2), repeat=k))
        if len(span) != 2 ** k or span in seen:
            continue
        seen.add(span)
        out.append(B)
    return out


def _complete_basis_f2(B, n):
    cols = [B[:, j] for j in range(B.shape[1])]
    for j in range(n):
        e = np.zeros(n, dtype=np.int64)
        e[j] = 1
        trial = np.stack(cols + [e], axis=1)
        if _rank_f2(trial) == trial.shape[1]:
            cols.append(e)
        if len(cols) == n:
            break
    return np.stack(cols, axis=1)


def _rank_f2(A):
    A = A.copy() % 2
    r = 0
    rows, cols = A.shape
    for c in range(cols):
        piv = [i for i in range(r, rows) if A[i, c]]
        if not piv:
            continue
        A[[r, piv[0]]] = A[[piv[0], r]]
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] ^= A[r]
        r += 1
    return r


def _permuting_basis(blocks, k):
    """A in GL_k(F_2) with A^-1 B A a permutation matrix for every block B."""
    for A in _gl_f2(k):
        Ai = np.round(np.linalg.inv(A) * round(np.linalg.det(A))).astype(np.int64) % 2
        if all(_perm_of(Ai @ B @ A % 2) is not None for B in blocks):
            return A, Ai
    return None


def _flag_perm_search(rho: GModule) -> FlagData:
    G = rho.group
    n = rho.rank
    log = []
    dims = [2] if n == 4 else [1, 2]
    subs = [H for H in G.subgroups() if H.index % 2 == 1]
    subs.sort(key=lambda H: (-H.order, H.elements))
    acts = {g: rho.lin_action[g][..., 0] % 2 for g in range(G.order)}
    for H in subs:
        gens = H.generators()
        for k in dims:
            for B in _subspaces_f2(n, k):
                if any(_rank_f2(np.concatenate([B, acts[s] @ B % 2], axis=1)) != k for s in gens):
                    continue
                Q = _complete_basis_f2(B, n)
                Qi = np.round(np.linalg.inv(Q) * round(np.linalg.det(Q))).astype(np.int64) % 2
                M = {s: Qi @ acts[s] @ Q % 2 for s in gens}
                top = _permuting_basis([M[s][:k, :k] for s in gens], k)
                bot = _permuting_basis([M[s][k:, k:] for s in gens], n - k)
                if top is None or bot is None:
                    continue
                Dg = np.zeros((n, n), dtype=np.int64)
                Dg[:k, :k], Dg[k:, k:] = top[0], bot[0]
                Q2 = Q @ Dg % 2
                Q2l = Q2[..., None]
                blocks = _flag_blocks(rho, Q2l, H.elements)
                Hg = H.as_group
                Y = np.zeros((Hg.order, k), dtype=np.int64)
                X = np.zeros((Hg.order, n - k), dtype=np.int64)
                for i, h in enumerate(H.elements):
                    Y[i] = _perm_of(blocks[h][:k, :k])
                    X[i] = _perm_of(blocks[h][k:, k:])
                log.append(f"subgroup of order {H.order} (index {H.index}), "
                           f"invariant subspace of dimension {k}")
                return FlagData(H, Q2l, k, GSet(Hg, Y), GSet(Hg, X), log)
        log.append(f"no permuted flag for the subgroup {list(H.elements)}")
    raise NotFound("no invariant flag with permuted bases: " + "; ".join(log))


def flag_extension(rho: GModule, flag: FlagData) -> Extension1:
    """Res_{G_0} rho in the flag basis, as 0 -> k^Y -> V -> k^X -> 0."""
    H = flag.G0.as_group
    R = rho.R
    Q = flag.basis
    Qr, Qir = R.realify(Q), R.realify(_lin_inverse(R, Q))
    V = conjugate(restrict(rho, flag.G0), Qr, Qir)
    A = GModule.permutation(rho.ring, flag.Y)
    B = GModule.permutation(rho.ring, flag.X)
    k, n, m = flag.k, rho.rank, rho.m
    incl = np.zeros((n * m, k * m), dtype=np.int64)
    incl[:k * m] = np.eye(k * m, dtype=np.int64)
    proj = np.zeros(((n - k) * m, n * m), dtype=np.int64)
    proj[:, k * m:] = np.eye((n - k) * m, dtype=np.int64)
    GModule(V.ring, H, V.profile, V.real, check=True)
    return Extension1(A, V, B, incl, proj)


# ---------------------------------------------------------------------------
# lifting an extension of permutation modules, orbit by orbit

@dataclass
class PermLift:
    subgroup: Subgroup          # the shrunk group, inside the extension's group
    module: GModule             # free over W_{d+1}, over subgroup.as_group, reduces exactly
    extension: Extension1       # 0 -> T^Y -> module -> W^X -> 0
    transcript: list

    def to_json(self):
        return {"subgroup": list(self.subgroup.elements), "module": self.module.to_json(),
                "transcript": list(self.transcript)}


def _perm_twisted(gset: GSet, K: GModule) -> GModule:
    real = np.stack([np.kron(np.eye(gset.size, dtype=np.int64)[gset.action[g]].T, K.real[g])
                     for g in range(gset.group.order)])
    return GModule(K.ring, K.group, K.profile * gset.size, real % K.ring.modulus, check=False)


def _restrict_ext(ext: Extension1, K: Subgroup) -> Extension1:
    return Extension1(restrict(ext.sub, K), restrict(ext.middle, K), restrict(ext.quot, K),
                      ext.incl, ext.proj)


def permutation_extension_lift(ext: Extension1, X: GSet, Y: GSet, chi: Character,
                               cert_n: int = 1) -> PermLift:
    """Lift 0 -> k^Y -> V -> k^X -> 0 (over the group of ``chi``) to W_{d+1}.

    ``chi`` is the certificate character restricted to the extension's group.
    """
    if cert_n != 1:
        raise ShapeMismatch("extension lifting uses a 1-cyclotomic certificate")
    G0 = ext.group
    if chi.group is not G0 or X.group is not G0 or Y.group is not G0:
        raise MixedRings("extension, G-sets and character over different groups")
    if ext.middle.D != 1:
        raise ShapeMismatch("the extension must be over the residue field")
    p = ext.middle.p
    ring = chi.ring
    log = []
    # shrink to the kernel of chi mod p
    K = chi.reduce(1).kernel()
    if K.index % p == 0:
        raise BadShrink(f"kernel of chi mod p has index {K.index}, divisible by p")
    log.append(f"shrink to ker(chi mod p) of order {K.order} (index {K.index})")
    if K.order != G0.order:
        ext = _restrict_ext(ext, K)
        X, Y = X.restrict(K), Y.restrict(K)
        chi = chi.restrict(K)
    else:
        K = G0.whole()
    Z = X.product(Y)
    S = section(ext)
    c = extension_cocycle(ext, S)
    Hm = hom(ext.quot, ext.sub)
    sh1 = shapiro(ext.group, Z, ext.middle.ring)
    if not sh1.module.same_action(Hm):
        raise AssertionError("Hom(k^X, k^Y) is not the permutation module on X x Y")
    T = chi.module()
    T1 = truncate(T, 1)
    Fred = T1.reduce_rows(np.eye(T.dim, dtype=np.int64))
    sh2 = shapiro(ext.group, Z, ring, coefficient=T)
    lifted = []
    for orb, a in zip(sh1.orbits, sh1.forward(c)):
        Gi = orb.stabilizer
        im = induced_map(Fred, 1, Gi, T, T1)
        target = im.target.class_of(a)
        rel = _rel_matrix(im.target.exps, p, ring.d)
        A = np.concatenate([im.matrix, rel], axis=1)
        x = solve(A, target, p, ring.d) if len(target) else np.zeros(A.shape[1], dtype=np.int64)
        if x is None:
            raise CertificateFailed(f"H^1 of T -> T{{1}} does not reach the class at the "
                                    f"stabilizer {list(Gi.elements)}", witness=Gi)
        src = im.source.cocycle(x[:len(im.source.orders)]) if im.source.orders else \
            im.source.zero()
        lifted.append(src)
        log.append(f"orbit of {orb.base}: stabilizer order {Gi.order}, class {target.tolist()} lifted")
    ct = sh2.backward(lifted)
    WX = GModule.permutation(ring, X)
    TY = _perm_twisted(Y, T)
    if not sh2.module.same_action(hom(WX, TY)):
        raise AssertionError("Hom(W^X, T^Y) is not T[X x Y]")
    big = extension_of_class(ct, WX, TY)
    # align: reduction of ct is c + d(psi) in Hom(k^X, k^Y)
    cbar = ct % p
    H1 = cohomology_group(None, Hm, 1)
    psi = H1.cobounding((cbar - c) % p)
    if psi is None:  # pragma: no cover - the classes agree by construction
        raise AssertionError("lifted class does not reduce to the original one")
    R = ext.middle.R
    nY, nX = ext.sub.rank, ext.quot.rank
    Phi = np.concatenate([ext.incl, S], axis=1) % p               # E_c -> V
    Psi = np.eye(ext.middle.dim, dtype=np.int64)
    Psi[:ext.sub.dim, ext.sub.dim:] = R.realify(hom_unvec(psi.reshape(-1, R.m), nY, nX))
    Qm = Phi @ Psi % p
    Rb = big.middle.R
    Ql = pad(R.unrealify(Qm), big.middle.ring)
    Qr, Qir = Rb.realify(Ql), Rb.realify(_lin_inverse(Rb, Ql))
    lift = conjugate(big.middle, Qir, Qr)
    if not np.array_equal(reduce_module(lift, 1).lin_action, ext.middle.lin_action):
        raise AssertionError("aligned lift does not reduce to the extension")
    new_ext = Extension1(big.sub, lift, big.quot, big.middle.reduce_rows(Qr @ big.incl),
                         big.quot.reduce_rows(big.proj @ Qir))
    log.append(f"middle module free of rank {lift.rank} over W_{ring.d}")
    return PermLift(K, lift, new_ext, log)


# ---------------------------------------------------------------------------
# stable lifts and extraction of a genuine lift

@dataclass
class StableLift:
    G0: Subgroup
    W: GModule              # complement with V ⊕ W ≅ Ind Res V (over the residue ring)
    lift: GModule           # lift of V ⊕ W, exact after reduction
    iso: np.ndarray         # realified V ⊕ W -> Ind Res V

    def to_json(self):
        return {"G0": list(self.G0.elements), "W": self.W.to_json(),
                "lift": self.lift.to_json(), "iso": self.iso.tolist()}


def stable_lift_upgrade(V: GModule, G0: Subgroup, Vd: GModule) -> StableLift:
    _check_rep(V)
    if G0.index % V.p == 0:
        raise IndexDivisibleByP(f"index {G0.index} is divisible by p = {V.p}")
    res = restrict(V, G0)
    Vd = align_lift(rebase(Vd, G0.as_group), res)
    if G0.order == V.group.order:
        return StableLift(G0, _zero_module(V), rebase(Vd, V.group), np.eye(V.dim, dtype=np.int64))
    ns = norm_splitting(V, G0)
    L = induce(Vd, G0)
    if not np.array_equal(reduce_module(L, V.D).lin_action, ns.induced.lin_action):
        raise AssertionError("induced lift does not reduce to the induced module")
    R = L.R
    P = pad(V.R.unrealify(ns.phi), L.ring)
    out = conjugate(L, R.realify(P), R.realify(_lin_inverse(R, P)))
    VW = direct_sum(V, ns.W)
    if not is_lift(out, VW):
        raise NotALift("stable lift failed to verify")
    return StableLift(G0, ns.W, out, ns.phi)


def _zero_module(V: GModule) -> GModule:
    return GModule(V.ring, V.group, (), np.zeros((V.group.order, 0, 0), dtype=np.int64),
                   check=False)


@dataclass
class AbliftResult:
    lift: GModule
    block_formula_agrees: bool


def ablift(V: GModule, W: GModule, Z: GModule) -> AbliftResult:
    """From a lift Z of V ⊕ W to W_{r+1}, extract a lift of V."""
    _check_rep(V)
    r = V.D
    if Z.D != r + 1:
        raise ShapeMismatch("the lift of V ⊕ W must have depth r + 1")
    if W.rank == 0:
        return AbliftResult(align_lift(Z, V), True)
    VW = direct_sum(V, W)
    Z = align_lift(Z, VW)
    n, m = V.rank, V.m
    # E: 0 -> Z/p -> Z -> Z/p^r -> 0 in the linear view (sub = p^r Z)
    sub = truncate(Z, 1)
    quot = truncate(Z, r)
    N = Z.dim
    I = np.eye(N, dtype=np.int64)
    E = Extension1(sub, Z, quot, Z.reduce_rows(Z.p ** r * I), quot.reduce_rows(I))
    Vr = inflate(V, r + 1)
    Vr = GModule(Z.ring, Z.group, Vr.profile, Vr.real, check=False)
    i = np.zeros((N, n * m), dtype=np.int64)
    i[:n * m] = np.eye(n * m, dtype=np.int64)
    E1 = pullback(E, quot.reduce_rows(i), Vr)
    V1 = truncate(GModule(Z.ring, Z.group, (r + 1,) * n, Z.real[:, :n * m, :n * m],
                          check=False), 1)
    pi = np.zeros((n * m, N), dtype=np.int64)
    pi[:, :n * m] = np.eye(n * m, dtype=np.int64)
    E2 = pushforward(E1, V1.reduce_rows(pi), V1)
    mid = E2.middle
    if not mid.is_free() or mid.rank != n:
        raise AssertionError("extracted middle module is not free of rank n")
    R = mid.R
    P = R.unrealify(E2.proj)                       # (n, n, m), invertible mod p
    P = pad(P % R.p ** r, mid.ring)
    Pr, Pir = R.realify(P), R.realify(_lin_inverse(R, P))
    # P rho_mid P^-1 reduces to V exactly
    out = conjugate(mid, Pir, Pr)
    chk = check_lift(out, V)
    if not chk.ok:
        raise NotALift("extracted module does not lift V")
    out = align_lift(out, V)
    block = GModule(Z.ring, Z.group, (r + 1,) * n, Z.real[:, :n * m, :n * m], check=False)
    agrees = np.array_equal(out.lin_action, block.lin_action)
    return AbliftResult(rebase(out, V.group), agrees)


# ---------------------------------------------------------------------------
# pipelines

@dataclass
class LiftResult:
    status: str                           # lifted | stably_lifted | obstructed | certificate_failed | budget
    lift: GModule | None = None           # genuine lift to p^2
    stable: StableLift | None = None      # stable lift to p^{d+1}
    transcript: list = field(default_factory=list)
    witness: object = None

    def to_json(self):
        out = {"status": self.status, "transcript": list(self.transcript)}
        if self.lift is not None:
            out["lift"] = self.lift.to_json()
        if self.stable is not None:
            out["stable"] = self.stable.to_json()
        if self.witness is not None:
            out["witness"] = self.witness
        return out


class _Stage:
    def __init__(self, name, log):
        self.name, self.log = name, log

    def __enter__(self):
        self.log.append(f"[{self.name}]")
        return self

    def __exit__(self, et, ev, tb):
        if ev is not None and isinstance(ev, WittLiftError) and not getattr(ev, "stage", None):
            ev.stage = self.name
            ev.args = (f"{self.name}: {ev.args[0] if ev.args else ''}",) + ev.args[1:]
        return False


def _is_trivial_rep(rho: GModule) -> bool:
    I = rho.R.eye(rho.rank)
    return all(np.array_equal(rho.lin_action[g], I) for g in range(rho.group.order))


def _pipeline(rho: GModule, chi: Character, flag_fn) -> LiftResult:
    _check_rep(rho)
    G = rho.group
    log = []
    if rho.D != 1:
        raise ShapeMismatch("the pipeline lifts representations over the residue field")
    if chi.group is not G or chi.ring.field != rho.ring.field:
        raise MixedRings("certificate character over a different group or field")
    d1 = chi.ring.d
    if _is_trivial_rep(rho) or rho.rank == 1:
        with _Stage("teichmuller", log):
            L2 = teichmuller_lift(rho, 2)
            Ld = teichmuller_lift(rho, d1)
        log.append("Teichmüller lift")
        stable = StableLift(G.whole(), _zero_module(rho), Ld, np.eye(rho.dim, dtype=np.int64))
        return LiftResult("lifted", L2, stable, log)
    try:
        with _Stage("flag", log):
            flag = flag_fn(rho)
            log.extend(flag.transcript)
            ext = flag_extension(rho, flag)
        with _Stage("extension_lift", log):
            pl = permutation_extension_lift(ext, flag.X, flag.Y, chi.restrict(flag.G0))
            log.extend(pl.transcript)
        with _Stage("unflag", log):
            Kg = _compose_subgroup(G, flag.G0, pl.subgroup)
            M = pl.module
            R = M.R
            Q = pad(flag.basis, M.ring)
            Qr, Qir = R.realify(Q), R.realify(_lin_inverse(R, Q))
            LK = rebase(conjugate(M, Qir, Qr), Kg.as_group)
            if not check_lift(LK, restrict(rho, Kg)).ok:
                raise NotALift("lift over G_0 does not verify")
            log.append(f"lift over G_0 of order {Kg.order} to W_{d1}")
        with _Stage("stable_upgrade", log):
            st = stable_lift_upgrade(rho, Kg, LK)
            log.append(f"complement W of rank {st.W.rank}")
        with _Stage("ablift", log):
            Z = reduce_module(st.lift, 2)
            ab = ablift(rho, st.W, Z)
            log.append(f"block formula agrees: {ab.block_formula_agrees}")
    except CertificateFailed as e:
        wit = getattr(e, "witness", None)
        w = list(wit.elements) if isinstance(wit, Subgroup) else None
        log.append(str(e))
        return LiftResult("certificate_failed", None, None, log, {"stabilizer": w})
    except BudgetExceeded as e:
        log.append(str(e))
        return LiftResult("budget", None, None, log)
    if not is_lift(ab.lift, rho):
        raise NotALift("final lift does not verify")
    return LiftResult("lifted", ab.lift, st, log)


def required_stabilizers(rho: GModule, chi: Character) -> list:
    """Subgroups of G at which the pipeline needs H^1(T) -> H^1(T{1}) onto.

    These are the stabilizers of X x Y for the flag the pipeline picks, taken
    inside the kernel of chi mod p.  Empty when the Teichmüller shortcut applies.
    """
    if _is_trivial_rep(rho) or rho.rank == 1:
        return []
    G = rho.group
    flag = find_invariant_flag(rho)
    chi0 = chi.restrict(flag.G0)
    K = chi0.reduce(1).kernel()
    X, Y = flag.X, flag.Y
    if K.order != flag.G0.order:
        X, Y = X.restrict(K), Y.restrict(K)
        base = _compose_subgroup(G, flag.G0, K)
    else:
        base = flag.G0
    out = []
    for orb in orbits(X.group, X.product(Y)):
        S = Subgroup(G, tuple(sorted(base.elements[k] for k in orb.stabilizer.elements)))
        if S not in out:
            out.append(S)
    return out


def lift_dim2(rho: GModule, chi: Character) -> LiftResult:
    if rho.rank not in (1, 2):
        raise ShapeMismatch("lift_dim2 expects a representation of dimension at most 2")
    return _pipeline(rho, chi, find_invariant_flag)


def lift_dim4_f2(rho: GModule, chi: Character) -> LiftResult:
    if rho.p != 2 or rho.m != 1 or rho.rank > 4:
        raise ShapeMismatch("lift_dim4_f2 expects a representation over F_2 of dimension <= 4")
    return _pipeline(rho, chi, find_invariant_flag)
