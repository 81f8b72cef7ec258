"""Finite groups as multiplication tables.

Element 0 is always the identity.  For groups built from permutations the
product is composition, ``(g*h)(x) = g(h(x))``, so the natural action on
points is a left action.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import BudgetExceeded, InputError, NotAGroup, NotAPermutation, NotASubgroup

CLOSURE_BUDGET = 5000
SUBGROUP_BUDGET = 128


class FiniteGroup:
    """A finite group given by its full multiplication table."""

    def __init__(self, table, generators=None, name: str | None = None, perms=None,
                 check: bool = True):
        T = np.array(table, dtype=np.int64)
        n = T.shape[0]
        if T.shape != (n, n) or n == 0:
            raise NotAGroup("multiplication table must be square and nonempty")
        if T.min() < 0 or T.max() >= n:
            raise NotAGroup("table entries out of range")
        self.table = T
        self.order = n
        self.name = name
        self.perms = perms
        if check:
            self._check_axioms()
        inv = np.zeros(n, dtype=np.int64)
        rows, cols = np.nonzero(T == 0)
        inv[rows] = cols
        self.inv = inv
        if generators is None:
            generators = self._greedy_generators()
        self.generators = tuple(int(g) for g in generators)
        if check and len(self.closure(self.generators)) != n:
            raise NotAGroup("generators do not generate the group")

    def _check_axioms(self):
        T = self.table
        n = self.order
        if not (T[0] == np.arange(n)).all() or not (T[:, 0] == np.arange(n)).all():
            raise NotAGroup("element 0 is not the identity")
        for row in T:
            if len(set(row.tolist())) != n:
                raise NotAGroup("table is not a Latin square")
        # (ab)c = a(bc) for all triples, vectorised over (b, c)
        for a in range(n):
            if not (T[T[a]] == T[a][T]).all():
                raise NotAGroup("multiplication is not associative")

    def _greedy_generators(self):
        gens, span = [], {0}
        for g in range(self.order):
            if g not in span:
                gens.append(g)
                span = set(self.closure(gens))
        return gens

    # -- constructors ----------------------------------------------------------
    @classmethod
    def from_permutations(cls, degree: int, gens, budget: int = CLOSURE_BUDGET,
                          name: str | None = None) -> "FiniteGroup":
        perms = []
        for g in gens:
            g = tuple(int(x) for x in g)
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise NotAPermutation(f"{list(g)} is not a permutation of 0..{degree - 1}")
            perms.append(g)
        ident = tuple(range(degree))
        elems = [ident]
        index = {ident: 0}
        frontier = [ident]
        while frontier:
            nxt = []
            for h in frontier:
                for g in perms:
                    gh = tuple(g[h[x]] for x in range(degree))
                    if gh not in index:
                        if len(elems) >= budget:
                            raise BudgetExceeded(f"group closure exceeds {budget} elements")
                        index[gh] = len(elems)
                        elems.append(gh)
                        nxt.append(gh)
            frontier = nxt
        P = np.array(elems, dtype=np.int64).reshape(len(elems), degree)
        n = len(elems)
        table = np.zeros((n, n), dtype=np.int64)
        for a in range(n):
            comp = P[a][P]          # row b: x -> a(b(x))
            table[a] = [index[tuple(r)] for r in comp.tolist()]
        gen_idx = [index[g] for g in perms]
        return cls(table, gen_idx or [0], name=name, perms=[tuple(e) for e in elems],
                   check=False)

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls([[0]], [], name="1")

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls.from_permutations(n, [[(i + 1) % n for i in range(n)]], name=f"C{n}")

    def to_json(self):
        if self.perms is not None:
            degree = len(self.perms[0])
            return {"degree": degree,
                    "generators": [list(self.perms[g]) for g in self.generators]}
        return {"table": self.table.tolist(), "generators": list(self.generators)}

    @classmethod
    def from_json(cls, obj, name=None) -> "FiniteGroup":
        if not isinstance(obj, dict):
            raise InputError("group JSON must be an object")
        name = obj.get("name", name)
        if "table" in obj:
            return cls(obj["table"], obj.get("generators"), name=name)
        if "degree" in obj and "generators" in obj:
            return cls.from_permutations(int(obj["degree"]), obj["generators"], name=name)
        raise InputError("group JSON needs 'table' or 'degree' and 'generators'")

    # -- arithmetic --------------------------------------------------------------
    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse(a), -k
        r = 0
        while k:
            if k & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            k >>= 1
        return r

    @cached_property
    def element_orders(self):
        out = []
        for g in range(self.order):
            k, x = 1, g
            while x != 0:
                x = self.mul(x, g)
                k += 1
            out.append(k)
        return out

    def closure(self, elems):
        """Sorted tuple of the subgroup generated by elems."""
        gens = sorted({int(e) for e in elems} - {0})
        seen = np.zeros(self.order, dtype=bool)
        seen[0] = True
        frontier = np.array([0], dtype=np.int64)
        T = self.table
        while frontier.size and gens:
            cand = T[np.ix_(gens, frontier)].ravel()
            cand = np.unique(cand[~seen[cand]])
            seen[cand] = True
            frontier = cand
        return tuple(int(x) for x in np.nonzero(seen)[0])

    def cayley_tree(self, generators=None):
        """BFS spanning tree: list of (g, s, h) with g = s*h, h reached first.

        Every non-identity element appears exactly once as g, in BFS order.
        """
        gens = self.generators if generators is None else generators
        seen = {0}
        order = [0]
        tree = []
        i = 0
        while i < len(order):
            h = order[i]
            i += 1
            for s in gens:
                g = self.mul(s, h)
                if g not in seen:
                    seen.add(g)
                    order.append(g)
                    tree.append((g, s, h))
        return tree

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, (0,))

    # -- subgroups ----------------------------------------------------------------
    def subgroups(self, budget: int = SUBGROUP_BUDGET):
        """All subgroups, sorted by (order, elements)."""
        if self.order > budget:
            raise BudgetExceeded(f"subgroup enumeration limited to |G| <= {budget}")
        return list(self._subgroups)

    @cached_property
    def _subgroups(self):
        n = self.order
        found = {(0,)}
        queue = [(0,)]
        cyc = {g: self.closure([g]) for g in range(n)}
        while queue:
            H = queue.pop()
            Hs = set(H)
            gensH = _small_gens(self, H)
            for g in range(n):
                if g in Hs:
                    continue
                if set(cyc[g]) <= Hs:
                    continue
                K = self.closure(gensH + [g])
                if K not in found:
                    found.add(K)
                    queue.append(K)
        return [Subgroup(self, K) for K in sorted(found, key=lambda k: (len(k), k))]

    def subgroup(self, elems) -> "Subgroup":
        elems = tuple(sorted({int(e) for e in elems}))
        if self.closure(elems) != elems:
            raise NotASubgroup("element set is not closed under the group law")
        return Subgroup(self, elems)

    def generated(self, elems) -> "Subgroup":
        return Subgroup(self, self.closure(elems))

    def normalizer(self, H: "Subgroup") -> "Subgroup":
        Hs = set(H.elements)
        out = []
        for g in range(self.order):
            gi = self.inverse(g)
            if all(self.mul(self.mul(g, h), gi) in Hs for h in H.elements):
                out.append(g)
        return Subgroup(self, tuple(out))

    def sylow(self, p: int) -> "Subgroup":
        """A Sylow p-subgroup, grown greedily inside successive normalizers."""
        n = self.order
        target = 1
        while n % p == 0:
            n //= p
            target *= p
        P = self.trivial_subgroup()
        orders = self.element_orders
        while P.order < target:
            N = self.normalizer(P)
            Ps = set(P.elements)
            for g in N.elements:
                if g in Ps or not _is_p_power(orders[g], p):
                    continue
                Q = self.closure(list(P.elements) + [g])
                if _is_p_power(len(Q), p):
                    P = Subgroup(self, Q)
                    break
            else:  # pragma: no cover - Sylow theory forbids this
                raise AssertionError("no p-element in the normalizer")
        return P

    @cached_property
    def commutator_subgroup(self) -> "Subgroup":
        comms = set()
        for a in range(self.order):
            for b in range(self.order):
                comms.add(self.mul(self.mul(a, b), self.mul(self.inverse(a), self.inverse(b))))
        return Subgroup(self, self.closure(comms))

    @cached_property
    def abelianization(self) -> "Abelianization":
        return Abelianization.of(self)

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def cyclic_generator(self):
        """An element generating the group, or None."""
        for g in range(self.order):
            if self.element_orders[g] == self.order:
                return g
        return None

    def left_cosets(self, H: "Subgroup"):
        """Left cosets gH sorted by minimal element; returns (reps, coset index per element)."""
        label = -np.ones(self.order, dtype=np.int64)
        reps = []
        for g in range(self.order):
            if label[g] < 0:
                idx = len(reps)
                reps.append(g)
                for h in H.elements:
                    label[self.mul(g, h)] = idx
        return reps, label


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _small_gens(G: FiniteGroup, elems):
    gens, span = [], {0}
    for g in elems:
        if g not in span:
            gens.append(g)
            span = set(G.closure(gens))
    return gens


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    def __contains__(self, g) -> bool:
        return g in self._set

    @cached_property
    def _set(self):
        return frozenset(self.elements)

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and other.elements == self.elements)

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return self._set <= other._set

    @cached_property
    def as_group(self) -> FiniteGroup:
        """This subgroup as a standalone group; element i is ``elements[i]``."""
        pos = {g: i for i, g in enumerate(self.elements)}
        T = self.parent.table
        e = np.array(self.elements, dtype=np.int64)
        table = np.vectorize(pos.__getitem__)(T[np.ix_(e, e)]) if len(e) > 1 else [[0]]
        gens = [pos[g] for g in _small_gens(self.parent, self.elements)]
        G = FiniteGroup(table, gens, name=None, check=False)
        return G

    def generators(self):
        """Generators as parent indices."""
        return [self.elements[i] for i in self.as_group.generators]

    def to_json(self):
        return {"elements": list(self.elements)}

    def __repr__(self):
        return f"Subgroup(order={self.order}, elements={list(self.elements)})"


class Abelianization:
    """G^ab = G/[G,G] with a cyclic decomposition.

    ``invariants[i]`` is the order of the i-th cyclic factor and
    ``coords[g]`` the coordinate vector of the image of g.
    """

    def __init__(self, invariants, coords, basis):
        self.invariants = tuple(invariants)
        self.coords = coords
        self.basis = tuple(basis)

    @property
    def order(self) -> int:
        out = 1
        for n in self.invariants:
            out *= n
        return out

    @classmethod
    def of(cls, G: FiniteGroup) -> "Abelianization":
        K = G.commutator_subgroup
        reps, label = G.left_cosets(K)
        Q = len(reps)
        qtab = np.zeros((Q, Q), dtype=np.int64)
        for i, a in enumerate(reps):
            for j, b in enumerate(reps):
                qtab[i, j] = label[G.mul(a, b)]

        def qclosure(elems):
            span = {0}
            frontier = [0]
            while frontier:
                nxt = []
                for x in frontier:
                    for e in elems:
                        y = int(qtab[e, x])
                        if y not in span:
                            span.add(y)
                            nxt.append(y)
                frontier = nxt
            return span

        def qorder(x, within):
            k, y = 1, x
            while y not in within:
                y = int(qtab[x, y])
                k += 1
            return k

        basis, inv = [], []
        C = {0}
        while len(C) < Q:
            best = None
            for x in range(Q):
                if x in C:
                    continue
                oq = qorder(x, C)
                oa = qorder(x, {0})
                if oq == oa and (best is None or oq > best[0]):
                    best = (oq, x)
            if best is None:  # pragma: no cover
                raise AssertionError("cyclic decomposition failed")
            basis.append(best[1])
            inv.append(best[0])
            C = qclosure(basis)
        # coordinates by enumerating all combinations
        lookup = {}
        for combo in itertools.product(*[range(n) for n in inv]):
            x = 0
            for b, k in zip(basis, combo):
                for _ in range(k):
                    x = int(qtab[b, x])
            lookup[x] = combo
        if len(lookup) != Q:  # pragma: no cover
            raise AssertionError("cyclic decomposition is not direct")
        coords = [lookup[int(label[g])] for g in range(G.order)]
        return cls(inv, coords, [reps[b] for b in basis])


class GSet:
    """A finite left G-set; ``action[g, x]`` is g.x."""

    def __init__(self, group: FiniteGroup, action, check: bool = True):
        A = np.array(action, dtype=np.int64)
        self.group = group
        self.action = A
        self.size = A.shape[1] if A.ndim == 2 else 0
        if check:
            n = self.size
            if A.shape != (group.order, n):
                raise InputError("action table has the wrong shape")
            if not (A[0] == np.arange(n)).all():
                raise InputError("identity does not act trivially")
            T = group.table
            for g in range(group.order):
                # (g h).x == g.(h.x)
                if not (A[T[g]] == A[g][A]).all():
                    raise InputError("action is not compatible with the group law")

    @classmethod
    def natural(cls, G: FiniteGroup) -> "GSet":
        if G.perms is None:
            raise InputError("group has no permutation representation")
        return cls(G, np.array(G.perms, dtype=np.int64), check=False)

    @classmethod
    def regular(cls, G: FiniteGroup) -> "GSet":
        return cls(G, G.table.copy(), check=False)

    @classmethod
    def trivial(cls, G: FiniteGroup, n: int) -> "GSet":
        return cls(G, np.tile(np.arange(n), (G.order, 1)), check=False)

    @classmethod
    def cosets(cls, G: FiniteGroup, H: Subgroup) -> "GSet":
        """G/H with cosets ordered by minimal representative."""
        reps, label = G.left_cosets(H)
        A = np.zeros((G.order, len(reps)), dtype=np.int64)
        for g in range(G.order):
            for i, r in enumerate(reps):
                A[g, i] = label[G.mul(g, r)]
        return cls(G, A, check=False)

    def product(self, other: "GSet") -> "GSet":
        """X x Y with point (x, y) at index x * |Y| + y."""
        if other.group is not self.group:
            raise InputError("G-sets over different groups")
        A = self.action[:, :, None] * other.size + other.action[:, None, :]
        return GSet(self.group, A.reshape(self.group.order, -1), check=False)

    def restrict(self, H: Subgroup) -> "GSet":
        return GSet(H.as_group, self.action[list(H.elements)], check=False)


@dataclass
class Orbit:
    points: tuple
    stabilizer: Subgroup
    base: int
    transversal: dict  # point -> element s with s.base = point (minimal index)


def orbits(G0, X: GSet):
    """Orbit decomposition of X under G0 (a Subgroup of X.group or the whole group).

    Orbits are listed by minimal point, which is also the base point.
    """
    G = X.group
    if isinstance(G0, FiniteGroup):
        if G0 is not G:
            raise InputError("group mismatch")
        G0 = G.whole()
    if G0.parent is not G:
        raise InputError("subgroup of a different group")
    seen = set()
    out = []
    for x in range(X.size):
        if x in seen:
            continue
        trans = {}
        for g in G0.elements:
            y = int(X.action[g, x])
            if y not in trans:
                trans[y] = g
        pts = tuple(sorted(trans))
        seen.update(pts)
        stab = tuple(g for g in G0.elements if X.action[g, x] == x)
        out.append(Orbit(pts, Subgroup(G, stab), x, trans))
    return out
