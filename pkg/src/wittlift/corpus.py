"""The fixture corpus: small groups, representations, characters, extensions.

Expectation files are produced by the independent oracles only (the
Teichmüller/Z/p^d isomorphism for Witt arithmetic, the norm/augmentation
formulas for cyclic cohomology, exhaustive search for lifts).  The engine is
checked against them by :func:`verify_expectations`.
"""
from __future__ import annotations

import itertools
from pathlib import Path

import numpy as np

from . import jsonio
from .cohomology import cyclic_oracle
from .errors import InputError, OracleDisagreement
from .gmodules import Character, GModule, characters
from .groups import FiniteGroup, GSet
from .witt import FieldDesc, WittRing, from_zpd, zpd_iso
from .yoneda import Extension1, split_extension

GROUP_SPECS = {
    "trivial": (1, []),
    "C2": (2, [[1, 0]]),
    "C3": (3, [[1, 2, 0]]),
    "C4": (4, [[1, 2, 3, 0]]),
    "C2xC2": (4, [[1, 0, 3, 2], [2, 3, 0, 1]]),
    "S3": (3, [[1, 0, 2], [1, 2, 0]]),
    "D4": (4, [[1, 2, 3, 0], [0, 3, 2, 1]]),
    "Q8": (8, [[1, 2, 3, 0, 5, 6, 7, 4], [4, 7, 6, 5, 2, 1, 0, 3]]),
    "A4": (4, [[1, 2, 0, 3], [1, 0, 3, 2]]),
    "S4": (4, [[1, 0, 2, 3], [1, 2, 3, 0]]),
}

F4 = FieldDesc(2, 2, (1, 1, 1))
_W, _W2 = [[0, 1]], [[1, 1]]          # w and w^2 = w + 1 in F_4, as Witt coordinates

# name -> (group, field, d, generator matrices); ints mean elements of Z/p^d
REP_SPECS = {
    "c2_unipotent": ("C2", FieldDesc(2), 1, [[[1, 1], [0, 1]]]),
    "c2_trivial": ("C2", FieldDesc(2), 1, [[[1, 0], [0, 1]]]),
    "c2_z4_shear": ("C2", FieldDesc(2), 2, [[[1, 2], [0, 1]]]),
    "c3_unipotent": ("C3", FieldDesc(3), 1, [[[1, 1], [0, 1]]]),
    "c3_f2_irreducible": ("C3", FieldDesc(2), 1, [[[0, 1], [1, 1]]]),
    "c3_f4_diagonal": ("C3", F4, 1, [[[_W, 0], [0, _W2]]]),
    "c4_unipotent": ("C4", FieldDesc(2), 1, [[[1, 1], [0, 1]]]),
    "c4_f3_rotation": ("C4", FieldDesc(3), 1, [[[0, 2], [1, 0]]]),
    "v4_unipotent": ("C2xC2", FieldDesc(2), 1, [[[1, 1], [0, 1]], [[1, 0], [0, 1]]]),
    "v4_diagonal_shear": ("C2xC2", FieldDesc(2), 1, [[[1, 1], [0, 1]], [[1, 1], [0, 1]]]),
    "s3_natural_f2": ("S3", FieldDesc(2), 1, [[[0, 1], [1, 0]], [[0, 1], [1, 1]]]),
    "s3_sign_f3": ("S3", FieldDesc(3), 1, [[[2, 1], [0, 1]], [[1, 1], [0, 1]]]),
    "d4_f2": ("D4", FieldDesc(2), 1, [[[1, 1], [0, 1]], [[1, 0], [0, 1]]]),
    "d4_f3": ("D4", FieldDesc(3), 1, [[[0, 2], [1, 0]], [[1, 0], [0, 2]]]),
    "q8_f3": ("Q8", FieldDesc(3), 1, [[[0, 2], [1, 0]], [[1, 1], [1, 2]]]),
    "a4_f2": ("A4", FieldDesc(2), 1, [[[0, 1], [1, 1]], [[1, 0], [0, 1]]]),
    "c2_regular_sum": ("C2", FieldDesc(2), 1,
                       [[[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]]),
    "c2_jordan4": ("C2", FieldDesc(2), 1,
                   [[[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]]]),
    "v4_regular": ("C2xC2", FieldDesc(2), 1,
                   [[[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
                    [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]]),
}

# name -> (group, p, d, generator values in Z/p^d)
CHARACTER_SPECS = {
    "c2_sign_w2": ("C2", 2, 2, [3]),
    "c2_trivial_w2": ("C2", 2, 2, [1]),
    "c3_trivial_w2_p3": ("C3", 3, 2, [1]),
    "c4_trivial_w2": ("C4", 2, 2, [1]),
    "v4_trivial_w2": ("C2xC2", 2, 2, [1, 1]),
}

WITT_TABLES = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2)]
BRUTE_LIMIT = 10 ** 6


def group(name: str) -> FiniteGroup:
    try:
        deg, gens = GROUP_SPECS[name]
    except KeyError:
        raise InputError(f"unknown corpus group {name!r}") from None
    return _group_cache(name, deg, gens)


_GROUPS: dict = {}


def _group_cache(name, deg, gens):
    G = _GROUPS.get(name)
    if G is None:
        G = _GROUPS[name] = FiniteGroup.from_permutations(deg, gens, name=name)
    return G


def rep(name: str) -> GModule:
    gname, field, d, mats = REP_SPECS[name]
    G = group(gname)
    return GModule.from_json({"ring": {**field.to_json(), "d": d}, "generators": mats}, G)


def character(name: str) -> Character:
    gname, p, d, vals = CHARACTER_SPECS[name]
    return Character.from_json({"ring": {"p": p, "m": 1, "d": d}, "generators": vals},
                               group(gname))


def extensions() -> dict:
    """A few extensions of F_2[C2]-modules."""
    G = group("C2")
    F2 = WittRing(FieldDesc(2), 1)
    k = GModule.trivial(F2, G, 1)
    reg = GModule.permutation(F2, GSet.regular(G))
    incl = np.array([[1], [1]], dtype=np.int64)
    proj = np.array([[1, 1]], dtype=np.int64)
    out = {"c2_regular": Extension1(k, reg, k, incl, proj),
           "c2_split": split_extension(k, k)}
    for e in out.values():
        e.validate()
    return out


def group_json(name: str):
    return {"name": name, **group(name).to_json()}


def rep_json(M: GModule, gname: str):
    return {**M.to_json(), "group": group_json(gname)}


def load_group(obj, source=None) -> FiniteGroup:
    jsonio.check_group(obj, src=source)
    name = obj.get("name")
    if isinstance(name, str) and name in GROUP_SPECS and \
            jsonio.dumps(group_json(name)) == jsonio.dumps(obj):
        return group(name)
    return FiniteGroup.from_json(obj)


def load_rep(obj, source=None, G: FiniteGroup | None = None) -> GModule:
    jsonio.check_rep(obj, src=source, need_group=G is None)
    if G is None:
        G = load_group(obj["group"], source)
    return GModule.from_json(obj, G)


# ---------------------------------------------------------------------------
# oracle-generated expectations

def _witt_expectation(p, d):
    q = p ** d
    els = [from_zpd(a, p, d) for a in range(q)]
    codes = [list(x.codes) for x in els]
    rows = []
    for a, b in itertools.product(range(q), repeat=2):
        rows.append([a, b, codes[(a + b) % q], codes[(a * b) % q], codes[(a - b) % q]])
    if any(zpd_iso(x) != a for a, x in enumerate(els)):
        raise OracleDisagreement(f"Z/{q} round trip failed")
    return {"p": p, "d": d, "codes": codes, "table": rows}


def _cyclic_modules():
    """(label, module) pairs over the cyclic corpus groups."""
    out = []
    for gname in ("trivial", "C2", "C3", "C4"):
        G = group(gname)
        for p in (2, 3):
            for d in (1, 2):
                ring = WittRing(FieldDesc(p), d)
                out.append((f"{gname}/trivial_p{p}_d{d}", GModule.trivial(ring, G, 1)))
            ring = WittRing(FieldDesc(p), 1)
            out.append((f"{gname}/regular_p{p}", GModule.permutation(ring, GSet.regular(G))))
        ring = WittRing(FieldDesc(2), 2)
        for chi in characters(G, ring):
            if not chi.is_trivial():
                vals = "_".join(str(int(chi.values[s][0])) for s in G.generators)
                out.append((f"{gname}/character_w2_{vals}", chi.module()))
    for rname, (gname, *_rest) in REP_SPECS.items():
        if gname in ("C2", "C3", "C4"):
            out.append((f"{gname}/{rname}", rep(rname)))
    return out


def cyclic_family(max_order: int = 12):
    """(label, module) pairs over every cyclic group of order <= max_order.

    Trivial and character modules over Z/p and Z/p^2, the regular module
    over F_p, and the corpus representations of cyclic groups.
    """
    out = []
    for n in range(1, max_order + 1):
        G = FiniteGroup.cyclic(n)
        for p in (2, 3):
            for d in (1, 2):
                ring = WittRing(FieldDesc(p), d)
                out.append((f"C{n}/trivial_p{p}_d{d}", GModule.trivial(ring, G, 1)))
                for chi in characters(G, ring):
                    if not chi.is_trivial():
                        vals = "_".join(str(int(chi.values[s][0])) for s in G.generators)
                        out.append((f"C{n}/character_p{p}_d{d}_{vals}", chi.module()))
            ring = WittRing(FieldDesc(p), 1)
            out.append((f"C{n}/regular_p{p}", GModule.permutation(ring, GSet.regular(G))))
    for rname, (gname, *_rest) in REP_SPECS.items():
        if gname in ("C2", "C3", "C4"):
            out.append((f"{gname}/{rname}", rep(rname)))
    return out


def yoneda_pairs():
    """(label, A, B) with A free, for the extension round-trip sweeps."""
    out = []
    for gname in ("C2", "C3", "C4", "C2xC2", "S3"):
        G = group(gname)
        for p, d in ((2, 1), (2, 2), (3, 1)):
            ring = WittRing(FieldDesc(p), d)
            mods = [("triv", GModule.trivial(ring, G, 1))]
            mods += [(f"chi{i}", c.module()) for i, c in enumerate(characters(G, ring))
                     if not c.is_trivial()]
            if d == 1:
                mods.append(("triv2", GModule.trivial(ring, G, 2)))
            for (an, A), (bn, B) in itertools.product(mods, repeat=2):
                if A.rank + B.rank <= 3:
                    out.append((f"{gname}/p{p}d{d}/{an}-by-{bn}", A, B))
    for rname in ("c2_unipotent", "c3_unipotent", "s3_natural_f2"):
        M = rep(rname)
        T = GModule.trivial(M.ring, M.group, 1)
        out.append((f"{rname}/by-trivial", M, T))
        out.append((f"trivial/by-{rname}", T, M))
    return out


def random_trivial_surjection(ring: WittRing, G: FiniteGroup, rng, max_rank: int = 3):
    """A random surjection pi: M -> N of W-modules with trivial G-action.

    N gets a random profile and M = N + K for a random K; pi restricts to the
    identity on N and to a random profile-respecting map on K.
    """
    from .gmodules import direct_sum, morphism_real
    from .linalg import Scalars
    D, m, p = ring.d, ring.m, ring.p
    R = Scalars.of_ring(ring)
    rn = int(rng.integers(1, max_rank + 1))
    rk = int(rng.integers(0, max_rank - rn + 1))
    N = GModule.trivial(ring, G, profile=tuple(int(e) for e in rng.integers(1, D + 1, rn)))
    if not rk:
        return N, N, morphism_real(N, N, R.eye(rn))
    K = GModule.trivial(ring, G, profile=tuple(int(e) for e in rng.integers(1, D + 1, rk)))
    M = direct_sum(N, K)
    f = rng.integers(0, ring.modulus, (rn, rk, m))
    for a, fe in enumerate(N.profile):
        for b, se in enumerate(K.profile):
            f[a, b] = f[a, b] * p ** max(0, fe - se) % ring.modulus
    return M, N, morphism_real(M, N, np.concatenate([R.eye(rn), f], axis=1))


def all_reps(G: FiniteGroup, ring: WittRing, n: int = 2):
    """Every n-dimensional representation of G over ``ring`` (m = 1), in lex order
    of the generator matrices."""
    from .linalg import Scalars, wis_invertible
    R = Scalars.of_ring(ring)
    q = ring.modulus
    mats = [np.array(v, dtype=np.int64).reshape(n, n, 1)
            for v in itertools.product(range(q), repeat=n * n)]
    mats = [M for M in mats if wis_invertible(M % ring.p, Scalars(ring.p, 1))]
    gens = G.generators
    for combo in itertools.product(mats, repeat=len(gens)):
        try:
            yield GModule.from_generators(ring, G, list(combo))
        except InputError:
            continue


def _perm_sets(G: FiniteGroup):
    sets = [GSet.trivial(G, 1)]
    sets += [GSet.cosets(G, H) for H in G.subgroups() if H.order * 2 == G.order]
    if G.order > 2:
        sets.append(GSet.regular(G))
    return sets


def dim4_instances():
    """(label, rho) over F_2 for C2 and C2xC2, dimension <= 4.

    Extensions of permutation modules for every class, then direct sums of
    the two-dimensional ones, then the four-dimensional corpus entries.
    """
    from .cohomology import cohomology_group
    from .gmodules import direct_sum, hom
    from .yoneda import extension_of_class
    F = WittRing(FieldDesc(2), 1)
    out = []
    for gname in ("C2", "C2xC2"):
        G = group(gname)
        sets = _perm_sets(G)
        small = []
        for (i, X), (j, Y) in itertools.product(enumerate(sets), repeat=2):
            if X.size + Y.size > 4:
                continue
            A, B = GModule.permutation(F, X), GModule.permutation(F, Y)
            H1 = cohomology_group(None, hom(A, B), 1)
            for c in itertools.product(*[range(o) for o in H1.orders]):
                rho = extension_of_class(H1.cocycle(list(c)), A, B).middle
                tag = "".join(map(str, c)) or "0"
                out.append((f"{gname}/ext_X{i}_Y{j}_c{tag}", rho))
                if rho.rank == 2:
                    small.append((f"X{i}Y{j}c{tag}", rho))
        for (a, M), (b, N) in itertools.combinations_with_replacement(small, 2):
            out.append((f"{gname}/sum_{a}+{b}", direct_sum(M, N)))
    for rname in ("c2_regular_sum", "c2_jordan4", "v4_regular"):
        out.append((f"corpus/{rname}", rep(rname)))
    return out


def _cohomology_expectation(label, M):
    G = M.group
    out = {"module": label, "degrees": {}}
    for n in (0, 1, 2):
        orders, _ = cyclic_oracle(G, M, n)
        out["degrees"][str(n)] = [int(o) for o in orders]
    return out


def brute_space(M: GModule) -> int:
    return (M.p ** M.m) ** (len(M.group.generators) * M.rank * M.rank)


def _lift_expectation(name, M):
    from .lifting import brute_force_lift
    res = brute_force_lift(M)
    out = {"rep": name, "found": res.found, "total": res.total}
    if res.found:
        out["lift"] = [np.asarray(x).tolist() for x in res.lift.generator_matrices()]
    return out


def expectation_documents() -> dict:
    docs = {}
    for p, d in WITT_TABLES:
        docs[f"expectations/witt_p{p}_d{d}.json"] = _witt_expectation(p, d)
    for label, M in _cyclic_modules():
        docs[f"expectations/cohomology_{label.replace('/', '__')}.json"] = \
            _cohomology_expectation(label, M)
    for name in REP_SPECS:
        M = rep(name)
        if M.rank <= 2 and brute_space(M) <= BRUTE_LIMIT:
            docs[f"expectations/lift_{name}.json"] = _lift_expectation(name, M)
    return docs


def input_documents() -> dict:
    docs = {}
    for name in GROUP_SPECS:
        docs[f"groups/{name}.json"] = group_json(name)
    for name, (gname, *_r) in REP_SPECS.items():
        docs[f"reps/{name}.json"] = rep_json(rep(name), gname)
    for name, (gname, *_r) in CHARACTER_SPECS.items():
        docs[f"characters/{name}.json"] = {**character(name).to_json(),
                                           "group": group_json(gname)}
    for name, e in extensions().items():
        docs[f"extensions/{name}.json"] = {**e.to_json(), "group": group_json("C2")}
    return docs


DIGEST_FILE = "DIGEST.json"


def regen_fixtures(root, force: bool = False) -> list:
    """Write every corpus file under ``root``; return the relative paths written.

    A stored expectation that differs from what the oracle now produces raises
    OracleDisagreement naming the file, unless ``force`` is set.
    """
    root = Path(root)
    texts = {k: jsonio.pretty(v) for k, v in input_documents().items()}
    exp = {k: jsonio.pretty(v) for k, v in expectation_documents().items()}
    for rel, text in sorted(exp.items()):
        path = root / rel
        if path.exists() and not force and path.read_text() != text:
            raise OracleDisagreement(f"{path}: stored expectation contradicts the oracle")
    texts.update(exp)
    for rel, text in sorted(texts.items()):
        jsonio.write_atomic(root / rel, text)
    dig = {rel: jsonio.hashlib.sha256(text.encode()).hexdigest()
           for rel, text in sorted(texts.items())}
    jsonio.write_atomic(root / DIGEST_FILE, jsonio.pretty(dig))
    return sorted(texts) + [DIGEST_FILE]


def digest_drift(root) -> list:
    """Relative paths whose content no longer matches the stored digest."""
    root = Path(root)
    dig = jsonio.load(root / DIGEST_FILE)
    bad = []
    for rel, h in sorted(dig.items()):
        path = root / rel
        if not path.exists() or jsonio.hashlib.sha256(path.read_bytes()).hexdigest() != h:
            bad.append(rel)
    return bad


# ---------------------------------------------------------------------------
# checking the engine against stored expectations

def _check_witt(path, e):
    p, d = e["p"], e["d"]
    ring = WittRing(FieldDesc(p), d)
    els = [ring.element(c) for c in e["codes"]]
    for a, b, s, m, t in e["table"]:
        x, y = els[a], els[b]
        if list((x + y).codes) != s or list((x * y).codes) != m or list((x - y).codes) != t:
            raise OracleDisagreement(f"{path}: Witt arithmetic differs at ({a}, {b})")


def _check_cohomology(path, e, modules):
    from .cohomology import cohomology_group
    M = modules[e["module"]]
    for n, orders in e["degrees"].items():
        got = [int(o) for o in cohomology_group(M.group, M, int(n)).orders]
        if sorted(got) != sorted(orders):
            raise OracleDisagreement(f"{path}: H^{n} orders {got} != {orders}")


def _check_lift(path, e):
    from .lifting import obstruction_p_next, solve_lift
    M = rep(e["rep"])
    rep_ = obstruction_p_next(M)
    if rep_.vanishes != e["found"]:
        raise OracleDisagreement(f"{path}: obstruction vanishing = {rep_.vanishes}, "
                                 f"brute force found = {e['found']}")
    if e["found"]:
        L = solve_lift(M, rep_)
        got = [np.asarray(x).tolist() for x in L.generator_matrices()]
        if got != e["lift"]:
            raise OracleDisagreement(f"{path}: canonical lift {got} != {e['lift']}")


def verify_expectations(root) -> int:
    """Run the engine against every stored expectation; return the count checked."""
    root = Path(root)
    modules = dict(_cyclic_modules())
    count = 0
    for path in sorted((root / "expectations").glob("*.json")):
        e = jsonio.load(path)
        name = path.name
        if name.startswith("witt_"):
            _check_witt(path, e)
        elif name.startswith("cohomology_"):
            _check_cohomology(path, e, modules)
        elif name.startswith("lift_"):
            _check_lift(path, e)
        else:
            raise InputError(f"{path}: unknown expectation kind")
        count += 1
    return count
