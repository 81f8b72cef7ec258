"""Truncated Witt vectors W_d(F_q) over finite fields.

Elements are stored in Witt coordinates: a length-d tuple of F_q elements,
each F_q element encoded as the integer ``sum(c_i * p**i)`` of its
polynomial-basis coordinates.  Ring operations evaluate the universal Witt
sum/product/negation polynomials coordinatewise.  The polynomials are solved
once per (p, d) from the ghost-component recursion and cached.

Two independent routes exist for the prime field (m = 1): the classical ghost
map over the integers (:func:`ghost_oracle`) and the Teichmüller-Verschiebung
identification W_d(F_p) = Z/p^d (:func:`zpd_iso`).  Neither uses the Witt
polynomials, so both serve as oracles for them.

Linear coordinates
------------------
The module and cohomology layers need W_d(F_q) as a free Z/p^d-module.  The
basis used throughout is ``t_j = teich(w**j)`` for ``j < m`` where ``w`` is the
class of ``x`` modulo the field's modulus.  :meth:`WittRing.lin` and
:meth:`WittRing.delin` convert between Witt coordinates and this basis, and
:attr:`WittRing.structure` holds the multiplication constants derived from the
Witt polynomials themselves.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (BadLength, InputError, InternalIntegralityFailure,
                     MixedRings, NotAUnit, NotIrreducible, UnsupportedField)

MAX_P = 13
MAX_M = 4
MAX_D = 5

_cache_lock = threading.RLock()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# Polynomials over F_p (coefficient lists, low degree first)

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, b, p):
    """Remainder of a modulo b over F_p; b must have invertible leading coefficient."""
    a = [x % p for x in a]
    b = _poly_trim([x % p for x in b])
    inv = pow(b[-1], -1, p)
    while len(_poly_trim(a)) >= len(b):
        a = _poly_trim(a)
        shift = len(a) - len(b)
        f = (a[-1] * inv) % p
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % p
    return _poly_trim(a)


def _monic_polys(p, deg):
    for tail in itertools.product(range(p), repeat=deg):
        yield list(tail) + [1]


def is_irreducible(p: int, coeffs) -> bool:
    """Exhaustive factor search (degrees up to 4 only)."""
    f = _poly_trim([c % p for c in coeffs])
    deg = len(f) - 1
    if deg < 1:
        return False
    for k in range(1, deg // 2 + 1):
        for g in _monic_polys(p, k):
            if not _poly_mod(f, g, p):
                return False
    return True


@dataclass(frozen=True)
class FieldDesc:
    """The finite field F_{p^m} = F_p[x]/(modulus).

    ``modulus`` is the full coefficient list of a monic degree-m polynomial,
    lowest degree first.  For m = 1 it defaults to ``x``.
    """

    p: int
    m: int = 1
    modulus: tuple = None

    def __post_init__(self):
        p, m = self.p, self.m
        if not isinstance(p, int) or not is_prime(p) or p > MAX_P:
            raise InputError(f"p must be a prime <= {MAX_P}, got {p!r}")
        if not isinstance(m, int) or not 1 <= m <= MAX_M:
            raise InputError(f"extension degree must be in 1..{MAX_M}, got {m!r}")
        mod = self.modulus
        if mod is None:
            if m != 1:
                raise InputError("an explicit modulus is required for m > 1")
            mod = (0, 1)
        mod = tuple(int(c) % p for c in mod)
        if len(mod) == m:
            mod = mod + (1,)
        if len(mod) != m + 1 or mod[-1] != 1:
            raise InputError(f"modulus must be monic of degree {m}: {mod}")
        if not is_irreducible(p, mod):
            raise NotIrreducible(f"{mod} is reducible over F_{p}")
        object.__setattr__(self, "modulus", mod)

    @property
    def q(self) -> int:
        return self.p ** self.m

    @classmethod
    def first_irreducible(cls, p: int, m: int) -> "FieldDesc":
        """Lexicographically first monic irreducible modulus of degree m."""
        for g in _monic_polys(p, m):
            if is_irreducible(p, g):
                return cls(p, m, tuple(g))
        raise NotIrreducible("no irreducible polynomial found")  # pragma: no cover

    def to_json(self):
        out = {"p": self.p, "m": self.m}
        if self.m > 1:
            out["modulus"] = list(self.modulus)
        return out

    @classmethod
    def from_json(cls, obj):
        try:
            p = int(obj["p"])
            m = int(obj.get("m", 1))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad field descriptor {obj!r}") from exc
        mod = obj.get("modulus")
        if m == 1 and mod is not None and len(mod) in (1, 2):
            mod = None
        return cls(p, m, None if mod is None else tuple(mod))


class _FieldArith:
    """Table-driven arithmetic on integer-coded elements of F_q."""

    def __init__(self, field: FieldDesc):
        p, m, q = field.p, field.m, field.q
        self.p, self.m, self.q = p, m, q
        coords = np.zeros((q, m), dtype=np.int64)
        for code in range(q):
            c = code
            for i in range(m):
                coords[code, i] = c % p
                c //= p
        self.coords = coords
        self.weights = p ** np.arange(m, dtype=np.int64)
        # x^m = -(modulus tail)
        self._xm = [(-c) % p for c in field.modulus[:m]]
        gen = self._find_primitive()
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        cur = 1
        for k in range(q - 1):
            exp[k] = cur
            log[cur] = k
            cur = self._slow_mul(cur, gen)
        self.exp, self.log = exp, log

    def encode(self, cs) -> int:
        return int(sum(int(c) % self.p * self.p ** i for i, c in enumerate(cs)))

    def _slow_mul(self, a, b):
        p, m = self.p, self.m
        ca, cb = self.coords[a], self.coords[b]
        prod = [0] * (2 * m - 1)
        for i in range(m):
            for j in range(m):
                prod[i + j] = (prod[i + j] + int(ca[i]) * int(cb[j])) % p
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k]
            prod[k] = 0
            if c:
                for i in range(m):
                    prod[k - m + i] = (prod[k - m + i] + c * self._xm[i]) % p
        return self.encode(prod[:m])

    def _find_primitive(self):
        q = self.q
        if q == 2:
            return 1
        factors = [r for r in range(2, q) if (q - 1) % r == 0 and is_prime(r)]
        for g in range(2, q):
            ok = True
            for r in factors:
                if self._slow_pow(g, (q - 1) // r) == 1:
                    ok = False
                    break
            if ok:
                return g
        raise AssertionError("no primitive element")  # pragma: no cover

    def _slow_pow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    # vectorised helpers on code arrays
    def add(self, a, b):
        c = (self.coords[a] + self.coords[b]) % self.p
        return c @ self.weights

    def neg(self, a):
        return ((-self.coords[a]) % self.p) @ self.weights

    def mul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        r = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, r)

    def pow(self, a, e: int):
        a = np.asarray(a)
        if e == 0:
            return np.ones_like(a)
        r = self.exp[(self.log[a] * (e % (self.q - 1))) % (self.q - 1)]
        return np.where(a == 0, 0, r)

    def inv(self, a: int) -> int:
        if a == 0:
            raise NotAUnit("zero is not invertible in F_q")
        return int(self.exp[(-self.log[a]) % (self.q - 1)])


@lru_cache(maxsize=None)
def field_arith(field: FieldDesc) -> _FieldArith:
    return _FieldArith(field)


@dataclass(frozen=True)
class FqElem:
    field: FieldDesc
    code: int

    @classmethod
    def from_coords(cls, field: FieldDesc, coords) -> "FqElem":
        if len(coords) != field.m:
            raise BadLength(f"expected {field.m} coordinates, got {len(coords)}")
        return cls(field, field_arith(field).encode(coords))

    @property
    def coords(self) -> tuple:
        return tuple(int(c) for c in field_arith(self.field).coords[self.code])

    def _check(self, other):
        if not isinstance(other, FqElem) or other.field != self.field:
            raise MixedRings("field elements from different fields")

    def __add__(self, other):
        self._check(other)
        return FqElem(self.field, int(field_arith(self.field).add(self.code, other.code)))

    def __neg__(self):
        return FqElem(self.field, int(field_arith(self.field).neg(self.code)))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        return FqElem(self.field, int(field_arith(self.field).mul(self.code, other.code)))

    def __pow__(self, e: int):
        fa = field_arith(self.field)
        if e < 0:
            return FqElem(self.field, fa.inv(self.code)) ** (-e)
        return FqElem(self.field, int(fa.pow(self.code, e)))

    def inverse(self):
        return FqElem(self.field, field_arith(self.field).inv(self.code))

    def frobenius(self, i: int = 1):
        return self ** (self.field.p ** (i % self.field.m))

    def __repr__(self):
        return f"FqElem({list(self.coords)})"


# ---------------------------------------------------------------------------
# Universal Witt polynomials
#
# A polynomial is a dict {encoded exponent: integer coefficient}.  Exponent
# vectors over the 2d variables X_0..X_{d-1}, Y_0..Y_{d-1} are packed into a
# single integer in radix R = p^(d-1) + 1; every polynomial met during the
# recursion has weighted degree <= p^(d-1) (X_i and Y_i have weight p^i), so
# no digit ever overflows.

class _Packing:
    def __init__(self, p, d):
        self.nvars = 2 * d
        self.radix = p ** (d - 1) + 1
        self.d = d

    def var(self, k, e=1):
        return e * self.radix ** k

    def unpack(self, key):
        out = []
        for _ in range(self.nvars):
            key, r = divmod(key, self.radix)
            out.append(r)
        return tuple(out)


def _pmul(a, b, mod=None):
    out = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            out[k] = out.get(k, 0) + ca * cb
    if mod is None:
        return {k: c for k, c in out.items() if c}
    return {k: c % mod for k, c in out.items() if c % mod}


def _ppow(a, e, mod=None):
    result = {0: 1}
    base = a
    while e:
        if e & 1:
            result = _pmul(result, base, mod)
        e >>= 1
        if e:
            base = _pmul(base, base, mod)
    return result


def _padd(a, b, scale=1, mod=None):
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) + scale * c
    if mod is None:
        return {k: c for k, c in out.items() if c}
    return {k: c % mod for k, c in out.items() if c % mod}


def _ghost_poly(pk: _Packing, p, n, offset):
    """w_n in the variables offset..offset+n as a packed polynomial."""
    return {pk.var(offset + i, p ** (n - i)): p ** i for i in range(n + 1)}


def _solve_family(p, d, kind, exact):
    pk = _Packing(p, d)
    polys = []
    for n in range(d):
        mod = None if exact else p ** (n + 1)
        wx = _ghost_poly(pk, p, n, 0)
        wy = _ghost_poly(pk, p, n, d)
        if kind == "sum":
            num = _padd(wx, wy, mod=mod)
        elif kind == "product":
            num = _pmul(wx, wy, mod)
        else:
            num = _padd({}, wx, scale=-1, mod=mod)
        for i, prev in enumerate(polys):
            e = n - i
            tmod = None if exact else p ** (e + 1)
            src = prev if exact else {k: c % p for k, c in prev.items() if c % p}
            term = _ppow(src, p ** e, tmod)
            num = _padd(num, term, scale=-(p ** i), mod=mod)
        pn = p ** n
        out = {}
        for k, c in num.items():
            if c % pn:
                raise InternalIntegralityFailure(
                    f"non-integral coefficient {c}/{pn} in {kind} polynomial {n} (p={p})")
            out[k] = c // pn
        if not exact:
            out = {k: c % p for k, c in out.items() if c % p}
        polys.append(out)
    return polys


@dataclass(frozen=True)
class WittPolynomials:
    """Integer Witt polynomials for fixed (p, d).

    Each family is a list of length d; entry n maps exponent tuples of length
    2d (X_0..X_{d-1}, Y_0..Y_{d-1}) to coefficients.  ``exact`` families carry
    the true integer coefficients; otherwise coefficients are reduced mod p.
    """

    p: int
    d: int
    sum: tuple
    product: tuple
    negation: tuple
    exact: bool

    def show(self, family: str, n: int) -> str:
        terms = []
        poly = getattr(self, family)[n]
        names = [f"X{i}" for i in range(self.d)] + [f"Y{i}" for i in range(self.d)]
        for exps in sorted(poly, reverse=True):
            mono = "*".join(f"{v}^{e}" if e > 1 else v
                            for v, e in zip(names, exps) if e)
            terms.append(f"{poly[exps]}*{mono or '1'}")
        return " + ".join(terms) or "0"


def _unpacked(pk, polys):
    return tuple({pk.unpack(k): c for k, c in poly.items()} for poly in polys)


_poly_cache = {}


def witt_polynomials(p: int, d: int, exact: bool = True) -> WittPolynomials:
    """Solve the ghost recursion for the sum, product and negation polynomials.

    With ``exact=True`` the recursion runs over the integers.  With
    ``exact=False`` the numerator of level n is only kept mod p^(n+1); this is
    enough to recover every coefficient mod p (and to check divisibility by
    p^n exactly) because A = B mod p implies A^(p^j) = B^(p^j) mod p^(j+1).
    """
    if not is_prime(p) or p > MAX_P:
        raise InputError(f"p must be a prime <= {MAX_P}")
    if not 1 <= d <= MAX_D:
        raise BadLength(f"d must be in 1..{MAX_D}")
    key = (p, d, exact)
    with _cache_lock:
        if key not in _poly_cache:
            pk = _Packing(p, d)
            fams = {kind: _unpacked(pk, _solve_family(p, d, kind, exact))
                    for kind in ("sum", "product", "negation")}
            _poly_cache[key] = WittPolynomials(p, d, fams["sum"], fams["product"],
                                               fams["negation"], exact)
        return _poly_cache[key]


class _CompiledFamily:
    """Witt polynomials of one family packed into numpy arrays for evaluation."""

    def __init__(self, polys, p, d):
        rows, coeffs, starts = [], [], []
        for poly in polys:
            starts.append(len(rows))
            for exps, c in sorted(poly.items()):
                rows.append(exps)
                coeffs.append(c % p)
        self.expo = np.array(rows, dtype=np.int64).reshape(-1, 2 * d)
        self.coeff = np.array(coeffs, dtype=np.int64)
        self.starts = np.array(starts, dtype=np.int64)
        self.sizes = np.diff(np.append(self.starts, len(rows)))
        self.support = (self.expo > 0).astype(np.int64)
        # log sums stay below 2^53, so the exponent matmul can run in float64 (BLAS)
        bound = _ZERO_LOG * int(self.expo.sum(axis=1).max(initial=0))
        self.expo_f = self.expo.T.astype(np.float64) if bound < 2 ** 52 else None
        W = np.zeros((len(rows), len(polys)), dtype=np.float64)
        slot = np.repeat(np.arange(len(polys)), self.sizes)
        W[np.arange(len(rows)), slot] = self.coeff
        self.slot_weights = W


@lru_cache(maxsize=None)
def _compiled(p, d, kind):
    polys = getattr(witt_polynomials(p, d, exact=False), kind)
    return _CompiledFamily(polys, p, d)


@lru_cache(maxsize=None)
def _compiled_teich_sum(p, d):
    """Sum polynomials specialised to X = [x], Y = [y] (two variables)."""
    polys = witt_polynomials(p, d, exact=False).sum
    spec = []
    for poly in polys:
        spec.append({(e[0], e[d]): c for e, c in poly.items()
                     if not any(e[1:d]) and not any(e[d + 1:])})
    return _CompiledFamily(spec, p, 1)


_ZERO_LOG = 1 << 20


def _evaluate(fa: _FieldArith, fam: _CompiledFamily, values, d):
    """Evaluate all d polynomials of a family at a batch of points.

    ``values`` has shape (B, 2d) of field codes; returns (B, d) codes.
    Monomial values come from one matmul of discrete logs against the
    exponent matrix (zero inputs get a sentinel log that marks the monomial
    as zero).  Addition in F_q is coordinatewise mod p, so the
    coefficient-weighted sum per output slot is a second matmul on the
    F_p-coordinates of the monomial values.
    """
    B = values.shape[0]
    q, p, m = fa.q, fa.p, fa.m
    out = np.zeros((B, d), dtype=np.int64)
    M = fam.expo.shape[0]
    if M == 0:
        return out
    expo_t = fam.expo.T
    W = fam.slot_weights                     # (M, d): coefficient in its output slot
    chunk = max(1, 2_000_000 // (M * m))
    for lo in range(0, B, chunk):
        v = values[lo:lo + chunk]
        logs = np.where(v == 0, _ZERO_LOG, fa.log[v])
        if fam.expo_f is not None:
            e = (logs.astype(np.float64) @ fam.expo_f).astype(np.int64)
        else:
            e = logs @ expo_t
        mono = fa.exp[e % (q - 1)]
        mono[e >= _ZERO_LOG] = 0
        if m == 1:
            acc = np.rint(mono.astype(np.float64) @ W).astype(np.int64) % p
            out[lo:lo + chunk] = acc
            continue
        cs = fa.coords[mono].astype(np.float64)          # (nb, M, m)
        acc = np.rint(np.swapaxes(cs, 1, 2) @ W).astype(np.int64) % p    # (nb, m, d)
        out[lo:lo + chunk] = np.einsum("bkd,k->bd", acc, fa.weights)
    return out


# ---------------------------------------------------------------------------
# Rings and elements

class WittRing:
    """The ring W_d(F_q).  Instances are cached: ``WittRing(f, d) is WittRing(f, d)``."""

    _instances = {}

    def __new__(cls, field: FieldDesc, d: int):
        if not isinstance(d, int) or not 1 <= d <= MAX_D:
            raise BadLength(f"truncation length must be in 1..{MAX_D}, got {d!r}")
        key = (field, d)
        with _cache_lock:
            inst = cls._instances.get(key)
            if inst is None:
                inst = super().__new__(cls)
                inst._init(field, d)
                cls._instances[key] = inst
            return inst

    def _init(self, field, d):
        self.field = field
        self.d = d
        self.p = field.p
        self.m = field.m
        self.q = field.q
        self.modulus = field.p ** d
        self.fa = field_arith(field)
        self._lin_cache = {}
        self._lin_data = None

    def __repr__(self):
        return f"WittRing(p={self.p}, m={self.m}, d={self.d})"

    def __reduce__(self):
        return (WittRing, (self.field, self.d))

    # -- batch operations on code arrays of shape (B, d) --------------------
    def add_codes(self, a, b):
        """Witt sum of two batches.

        Uses a = [a_0] + V(a'), so a + b = ([a_0] + [b_0]) + V(a' + b'), and
        [c_0] + V(z) = (c_0, z).  Only the Teichmüller specialisation of the
        sum polynomials is evaluated; :meth:`add_codes_direct` evaluates the
        full polynomials and gives identical results.
        """
        a = np.asarray(a, dtype=np.int64).reshape(-1, self.d)
        b = np.asarray(b, dtype=np.int64).reshape(-1, self.d)
        return self._add_rec(a, b)

    def _add_rec(self, a, b):
        n = a.shape[1]
        if n == 1:
            return self.fa.add(a, b)
        c = self._teich_sum(a[:, 0], b[:, 0])[:, :n]
        e = self._add_rec(a[:, 1:], b[:, 1:])
        rest = self._add_rec(c[:, 1:], e)
        return np.concatenate([c[:, :1], rest], axis=1)

    def _teich_sum(self, x, y):
        """[x] + [y] for code batches; evaluated once per distinct pair."""
        q = self.q
        key = x * q + y
        uniq, inv = np.unique(key, return_inverse=True)
        pts = np.stack([uniq // q, uniq % q], axis=1)
        vals = _evaluate(self.fa, _compiled_teich_sum(self.p, self.d), pts, self.d)
        return vals[inv.reshape(-1)]

    def add_codes_direct(self, a, b):
        a = np.asarray(a, dtype=np.int64).reshape(-1, self.d)
        b = np.asarray(b, dtype=np.int64).reshape(-1, self.d)
        return _evaluate(self.fa, _compiled(self.p, self.d, "sum"),
                         np.concatenate([a, b], axis=1), self.d)

    def mul_codes(self, a, b):
        a = np.asarray(a, dtype=np.int64).reshape(-1, self.d)
        b = np.asarray(b, dtype=np.int64).reshape(-1, self.d)
        return _evaluate(self.fa, _compiled(self.p, self.d, "product"),
                         np.concatenate([a, b], axis=1), self.d)

    def neg_codes(self, a):
        a = np.asarray(a, dtype=np.int64).reshape(-1, self.d)
        return _evaluate(self.fa, _compiled(self.p, self.d, "negation"),
                         np.concatenate([a, np.zeros_like(a)], axis=1), self.d)

    def frobenius_codes(self, a, i=1):
        a = np.asarray(a, dtype=np.int64)
        return self.fa.pow(a, self.p ** (i % self.m))

    # -- element constructors -----------------------------------------------
    def element(self, coords) -> "WittVec":
        """Build from a length-d sequence of F_q coordinates.

        Each coordinate may be an :class:`FqElem`, an int code, or a length-m
        coordinate list.
        """
        coords = list(coords)
        if len(coords) != self.d:
            raise BadLength(f"expected {self.d} Witt coordinates, got {len(coords)}")
        codes = []
        for c in coords:
            if isinstance(c, FqElem):
                if c.field != self.field:
                    raise MixedRings("coordinate from a different field")
                codes.append(c.code)
            elif isinstance(c, (list, tuple)):
                if len(c) != self.m:
                    raise BadLength(f"expected {self.m} field coordinates")
                codes.append(self.fa.encode(c))
            else:
                c = int(c)
                if not 0 <= c < self.q:
                    raise InputError(f"field code {c} out of range")
                codes.append(c)
        return WittVec(self, tuple(codes))

    def zero(self) -> "WittVec":
        return WittVec(self, (0,) * self.d)

    def one(self) -> "WittVec":
        return WittVec(self, (1,) + (0,) * (self.d - 1))

    def teichmuller(self, x) -> "WittVec":
        code = x.code if isinstance(x, FqElem) else int(x)
        return WittVec(self, (code,) + (0,) * (self.d - 1))

    def from_int(self, n: int) -> "WittVec":
        """The image of the integer n under Z -> W_d(F_p) -> W_d(F_q)."""
        return WittVec(self, _zpd_to_witt_codes(n, self.p, self.d))

    # -- linear coordinates over Z/p^d ----------------------------------------
    def _basis(self):
        fa = self.fa
        w = self.p if self.m > 1 else 1
        return [self.teichmuller(int(fa.pow(w, j))) for j in range(self.m)]

    def lin(self, a: "WittVec"):
        """Coordinates of a in the basis teich(w^j) over Z/p^d."""
        self._check(a)
        key = a.codes
        hit = self._lin_cache.get(key)
        if hit is not None:
            return hit
        p, m = self.p, self.m
        if m == 1:
            out = (zpd_iso(a),)
        else:
            b = self.fa.coords[a.codes[0]]
            approx = self.zero()
            for j, t in enumerate(self._basis()):
                if b[j]:
                    approx = approx + self.from_int(int(b[j])) * t
            r = a - approx
            assert r.codes[0] == 0
            if self.d == 1:
                out = tuple(int(x) for x in b)
            else:
                lower = WittRing(self.field, self.d - 1)
                inv_frob = self.m - 1
                s = WittVec(lower, tuple(int(x) for x in
                                         self.frobenius_codes(np.array(r.codes[1:]),
                                                              inv_frob)))
                c2 = lower.lin(s)
                out = tuple((int(b[j]) + p * c2[j]) % self.modulus for j in range(m))
        self._lin_cache[key] = out
        return out

    def delin(self, c) -> "WittVec":
        c = [int(x) % self.modulus for x in c]
        if len(c) != self.m:
            raise BadLength(f"expected {self.m} linear coordinates")
        if self.m == 1:
            return self.from_int(c[0])
        acc = self.zero()
        for cj, t in zip(c, self._basis()):
            if cj:
                acc = acc + self.from_int(cj) * t
        return acc

    def _linear_data(self):
        if self._lin_data is None:
            with _cache_lock:
                if self._lin_data is None:
                    m = self.m
                    basis = self._basis()
                    S = np.zeros((m, m, m), dtype=np.int64)
                    for a in range(m):
                        for b in range(m):
                            S[a, b] = self.lin(basis[a] * basis[b])
                    F = np.zeros((m, m), dtype=np.int64)
                    for j in range(m):
                        F[:, j] = self.lin(basis[j].frobenius())
                    self._lin_data = (S, F)
        return self._lin_data

    @property
    def structure(self):
        """Array S with t_a * t_b = sum_c S[a, b, c] t_c."""
        return self._linear_data()[0]

    @property
    def frobenius_matrix(self):
        """Z/p^d-matrix of the Witt Frobenius in linear coordinates."""
        return self._linear_data()[1]

    def _check(self, a):
        if not isinstance(a, WittVec) or a.ring is not self:
            raise MixedRings("Witt vector from a different ring")


@dataclass(frozen=True, eq=True)
class WittVec:
    ring: WittRing
    codes: tuple

    @property
    def coords(self) -> tuple:
        f = self.ring.field
        return tuple(FqElem(f, c) for c in self.codes)

    @property
    def d(self):
        return self.ring.d

    @property
    def field(self):
        return self.ring.field

    def _other(self, other):
        if isinstance(other, int):
            return self.ring.from_int(other)
        if not isinstance(other, WittVec) or other.ring is not self.ring:
            raise MixedRings("Witt vectors from different rings")
        return other

    def __add__(self, other):
        other = self._other(other)
        return WittVec(self.ring, tuple(int(x) for x in
                                        self.ring.add_codes(self.codes, other.codes)[0]))

    __radd__ = __add__

    def __neg__(self):
        return WittVec(self.ring, tuple(int(x) for x in self.ring.neg_codes(self.codes)[0]))

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        other = self._other(other)
        return WittVec(self.ring, tuple(int(x) for x in
                                        self.ring.mul_codes(self.codes, other.codes)[0]))

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return self.codes[0] != 0

    def inverse(self) -> "WittVec":
        if not self.is_unit():
            raise NotAUnit("first Witt coordinate is zero")
        ring = self.ring
        b = ring.teichmuller(ring.fa.inv(self.codes[0]))
        two = ring.from_int(2)
        prec = 1
        while prec < ring.d:
            b = b * (two - self * b)
            prec *= 2
        assert (self * b) == ring.one()
        return b

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def frobenius(self, i: int = 1) -> "WittVec":
        return frobenius(self, i)

    def __repr__(self):
        return f"WittVec(p={self.ring.p}, d={self.ring.d}, {[list(c.coords) for c in self.coords]})"

    def to_json(self):
        return [list(c.coords) for c in self.coords]


def ring_of(field: FieldDesc, d: int) -> WittRing:
    return WittRing(field, d)


def verschiebung(a: WittVec) -> WittVec:
    """(a_0, ..., a_{d-1}) -> (0, a_0, ..., a_{d-2})."""
    return WittVec(a.ring, (0,) + a.codes[:-1])


def frobenius(a: WittVec, i: int = 1) -> WittVec:
    """Coordinatewise p^i-th power (the Witt Frobenius for perfect F_q)."""
    ring = a.ring
    return WittVec(ring, tuple(int(x) for x in ring.frobenius_codes(np.array(a.codes), i)))


def teichmuller(x: FqElem, d: int) -> WittVec:
    return WittRing(x.field, d).teichmuller(x)


def reduce(a: WittVec, r: int) -> WittVec:
    """Truncation W_d -> W_r, a ring homomorphism."""
    if not 1 <= r <= a.ring.d:
        raise BadLength(f"cannot reduce length {a.ring.d} to {r}")
    return WittVec(WittRing(a.ring.field, r), a.codes[:r])


# ---------------------------------------------------------------------------
# Oracles for the prime field

def _teich_int(x: int, p: int, d: int) -> int:
    return pow(x, p ** (d - 1), p ** d) if x % p else 0


def zpd_iso(a: WittVec) -> int:
    """W_d(F_p) -> Z/p^d via a = sum_i V^i(teich(a_i)) = sum_i p^i [a_i]."""
    ring = a.ring
    if ring.m != 1:
        raise UnsupportedField("Z/p^d identification needs m = 1")
    p, d = ring.p, ring.d
    return sum(p ** i * _teich_int(c, p, d) for i, c in enumerate(a.codes)) % p ** d


def _zpd_to_witt_codes(n: int, p: int, d: int):
    n %= p ** d
    out = []
    for i in range(d):
        prec = d - i
        c = n % p
        out.append(c)
        n = ((n - _teich_int(c, p, prec)) % p ** prec) // p
    return tuple(out)


def from_zpd(n: int, p: int, d: int) -> WittVec:
    """Inverse of :func:`zpd_iso` by successive Teichmüller subtraction."""
    return WittVec(WittRing(FieldDesc(p), d), _zpd_to_witt_codes(n, p, d))


@dataclass(frozen=True)
class GhostVec:
    d: int
    values: tuple


def ghost_oracle(a: WittVec) -> GhostVec:
    """Ghost components of the canonical integer lift (coordinates in [0, p))."""
    ring = a.ring
    if ring.m != 1:
        raise UnsupportedField("ghost oracle needs m = 1")
    p = ring.p
    x = a.codes
    vals = tuple(sum(p ** i * x[i] ** (p ** (n - i)) for i in range(n + 1))
                 for n in range(ring.d))
    return GhostVec(ring.d, vals)


def ghost_compare(op: str, a: WittVec, b: WittVec = None, result: WittVec = None) -> bool:
    """Check a ring operation against ghost arithmetic over Z.

    ``op`` is one of add, mul, neg, sub.  ``result`` defaults to the
    polynomial evaluation being checked.
    """
    ga = ghost_oracle(a).values
    gb = ghost_oracle(b).values if b is not None else None
    if op == "add":
        expect = [x + y for x, y in zip(ga, gb)]
        result = a + b if result is None else result
    elif op == "mul":
        expect = [x * y for x, y in zip(ga, gb)]
        result = a * b if result is None else result
    elif op == "sub":
        expect = [x - y for x, y in zip(ga, gb)]
        result = a - b if result is None else result
    elif op == "neg":
        expect = [-x for x in ga]
        result = -a if result is None else result
    else:
        raise InputError(f"unknown op {op!r}")
    gr = ghost_oracle(result).values
    p = a.ring.p
    return all((x - y) % p ** (n + 1) == 0 for n, (x, y) in enumerate(zip(expect, gr)))


def _powmod_array(x, e: int, mod: int):
    x = np.asarray(x, dtype=np.int64) % mod
    r = np.ones_like(x)
    while e:
        if e & 1:
            r = r * x % mod
        x = x * x % mod
        e >>= 1
    return r


def ghost_batch(p: int, d: int, codes) -> np.ndarray:
    """Ghost components w_n mod p^(n+1) for a batch (B, d) of codes over F_p.

    This is all the information ghost_compare uses; the reduction keeps the
    integers small so the check runs in numpy.
    """
    codes = np.asarray(codes, dtype=np.int64).reshape(-1, d)
    out = np.zeros_like(codes)
    for n in range(d):
        mod = p ** (n + 1)
        acc = np.zeros(codes.shape[0], dtype=np.int64)
        for i in range(n + 1):
            acc = (acc + p ** i * _powmod_array(codes[:, i], p ** (n - i), mod)) % mod
        out[:, n] = acc
    return out


def zpd_batch(p: int, d: int, codes) -> np.ndarray:
    """Vectorised zpd_iso on a batch (B, d) of codes."""
    codes = np.asarray(codes, dtype=np.int64).reshape(-1, d)
    mod = p ** d
    acc = np.zeros(codes.shape[0], dtype=np.int64)
    for i in range(d):
        t = _powmod_array(codes[:, i], p ** (d - 1), mod)
        acc = (acc + p ** i * t) % mod
    return acc
