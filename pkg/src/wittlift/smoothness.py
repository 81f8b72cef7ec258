"""Cyclotomic certificates: n-surjectivity of the reduction of chi^n to depth one."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cohomology import SurjectivityReport, cohomology_group, is_n_surjective
from .errors import CertificateRequired, NotSurjective, MixedRings
from .gmodules import (Character, GModule, characters, check_morphism, image_of,
                       truncate, twist)
from .groups import FiniteGroup
from .witt import FieldDesc, WittRing
from .yoneda import module_length

CHARACTER_BUDGET = 10_000


@dataclass
class CyclotomicCertificate:
    """Verdict of the surjectivity sweep for T = W_{d+1}(chi) at degree n."""

    group: FiniteGroup
    character: Character
    n: int
    d: int
    report: SurjectivityReport

    @property
    def passed(self) -> bool:
        return self.report.surjective

    @property
    def witness(self):
        return self.report.witness

    def verdict_for(self, H) -> bool | None:
        for e in self.report.entries:
            if e.subgroup == H:
                return e.surjective
        return None

    def to_json(self):
        out = {"n": self.n, "d": self.d, "character": self.character.to_json(),
               "passed": self.passed, "subgroups": self.report.to_json()["subgroups"]}
        w = self.witness
        if w is not None:
            out["witness"] = {"subgroup": list(w.subgroup.elements),
                              "uncovered": np.asarray(w.witness).tolist()}
        return out


def cyclotomic_map(chi: Character, n: int):
    """(T^n, T^n{1}, reduction matrix) for T the rank-1 module of chi."""
    Tn = chi.power(n).module()
    T1 = truncate(Tn, 1)
    F = T1.reduce_rows(np.eye(Tn.dim, dtype=np.int64))
    return Tn, T1, F


def check_cyclotomic(G: FiniteGroup, chi: Character, n: int, d: int,
                     budget=None) -> CyclotomicCertificate:
    if chi.group is not G:
        raise MixedRings("character over a different group")
    if chi.ring.d != d + 1:
        raise MixedRings(f"character must take values in W_{d + 1}, not W_{chi.ring.d}")
    if n < 0:
        raise ValueError("n must be non-negative")
    Tn, T1, F = cyclotomic_map(chi, n)
    rep = is_n_surjective(F, n, G, Tn, T1, budget=budget)
    return CyclotomicCertificate(G, chi, n, d, rep)


@dataclass
class SearchResult:
    group: FiniteGroup
    n: int
    d: int
    witness: CyclotomicCertificate | None
    tried: list = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_json(self):
        out = {"n": self.n, "d": self.d, "found": self.found,
               "tried": [c.to_json() for c in self.tried]}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def smooth_search(G: FiniteGroup, n: int, d: int, field_desc: FieldDesc,
                  budget=None, char_budget: int = CHARACTER_BUDGET) -> SearchResult:
    """First character (deterministic order) giving a passing certificate."""
    ring = WittRing(field_desc, d + 1)
    tried = []
    for chi in characters(G, ring, char_budget):
        cert = check_cyclotomic(G, chi, n, d, budget)
        tried.append(cert)
        if cert.passed:
            return SearchResult(G, n, d, cert, tried)
    return SearchResult(G, n, d, None, tried)


@dataclass
class CdResult:
    group: FiniteGroup
    p: int
    h2: list                 # (subgroup, orders) per subgroup
    certificates: list       # filled only when every H^2 vanishes

    @property
    def passed(self) -> bool:
        return all(not o for _, o in self.h2)

    @property
    def witness(self):
        for H, o in self.h2:
            if o:
                return H, o
        return None

    def to_json(self):
        out = {"p": self.p, "passed": self.passed,
               "h2": [{"subgroup": list(H.elements), "orders": o} for H, o in self.h2],
               "certificates": [c.to_json() for c in self.certificates]}
        if self.witness is not None:
            out["witness"] = {"subgroup": list(self.witness[0].elements),
                              "orders": self.witness[1]}
        return out


def cd1_check(G: FiniteGroup, p: int, n: int = 1, d: int = 1, budget=None) -> CdResult:
    """H^2(H, F_p) = 0 for all subgroups H; if so, every rank-1 free module is cyclotomic."""
    F = WittRing(FieldDesc(p), 1)
    k = GModule.trivial(F, G, 1)
    h2 = []
    for H in G.subgroups():
        h2.append((H, list(cohomology_group(H, k, 2, budget).orders)))
    res = CdResult(G, p, h2, [])
    if res.passed:
        ring = WittRing(FieldDesc(p), d + 1)
        for chi in characters(G, ring):
            cert = check_cyclotomic(G, chi, n, d, budget)
            res.certificates.append(cert)
            if not cert.passed:
                raise AssertionError("cd_p <= 1 but a rank-1 module is not cyclotomic")
    return res


def tofp_property(cert: CyclotomicCertificate, M: GModule, N: GModule, pi,
                  budget=None) -> SurjectivityReport:
    """Twist a surjection pi: M -> N of trivial modules by chi^n and test n-surjectivity."""
    if not cert.passed:
        raise CertificateRequired("the certificate did not pass")
    chi = cert.character
    for X in (M, N):
        if X.ring is not chi.ring or X.group is not chi.group:
            raise MixedRings("modules must live over the certificate's ring and group")
        if not (X.real == np.eye(X.dim, dtype=np.int64)[None] % X.row_mods[None, :, None]).all():
            raise ValueError("tofp_property expects trivial actions")
    pi = np.asarray(pi, dtype=np.int64)
    check_morphism(M, N, pi)
    if module_length(image_of(M, N, pi).module) != module_length(N):
        raise NotSurjective("pi is not surjective")
    Mt, Nt = twist(M, chi, cert.n), twist(N, chi, cert.n)
    rep = is_n_surjective(pi, cert.n, cert.group, Mt, Nt, budget=budget)
    if not rep.surjective:
        raise AssertionError("twisted surjection is not n-surjective despite a passing certificate")
    return rep
