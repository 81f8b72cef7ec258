"""Search every small corpus group for a cyclotomic character.

Run with ``python3 demos/03_cyclotomic_search.py``.
"""
from __future__ import annotations

from wittlift import corpus
from wittlift import smoothness as sm
from wittlift.witt import FieldDesc

for p in (2, 3):
    print(f"p = {p}, n = d = 1")
    for name in corpus.GROUP_SPECS:
        G = corpus.group(name)
        if G.order > 8:
            continue
        res = sm.smooth_search(G, 1, 1, FieldDesc(p))
        if res.found:
            vals = res.witness.character.values[:, 0].tolist()
            print(f"  {name:8s} witness with values {vals}")
        else:
            fails = sorted({c.witness.subgroup.order for c in res.tried})
            print(f"  {name:8s} none; failing subgroup orders {fails}")

# C3 at p = 2 has odd order, so every H^1 vanishes and the check passes
# trivially.  The same happens on the odd part of S3.

# %% cd_p <= 1 criterion
for name, p in [("C3", 2), ("C2", 2), ("S3", 3)]:
    r = sm.cd1_check(corpus.group(name), p)
    print(f"cd_{p}({name}) <= 1:", r.passed)
