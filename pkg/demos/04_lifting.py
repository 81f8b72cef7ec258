"""From a mod-2 representation of C2 to a lift over Z/4.

Run with ``python3 demos/04_lifting.py``.
"""
from __future__ import annotations

from wittlift import corpus
from wittlift import gmodules as gm
from wittlift import lifting as lf
from wittlift.witt import FieldDesc, WittRing

rho = corpus.rep("c2_unipotent")
print("rho:", rho.matrix(1)[..., 0].tolist())

# %% The obstruction class vanishes, and the canonical lift is found
ob = lf.obstruction_p_next(rho)
print("obstruction vanishes:", ob.vanishes)
print("canonical lift:", lf.solve_lift(rho, ob).generator_matrices()[0][..., 0].tolist())
b = lf.brute_force_lift(rho)
print(f"brute force: found={b.found} after {b.checked} of {b.total}")

# %% An obstructed representation over Z/4
shear = corpus.rep("c2_z4_shear")
print("c2_z4_shear obstruction vanishes:", lf.obstruction_p_next(shear).vanishes)

# %% The full pipeline with the sign character
sign = gm.Character.from_generator_values(WittRing(FieldDesc(2), 2), rho.group, [[3]])
res = lf.lift_dim2(rho, sign)
for line in res.transcript:
    print("  |", line)
print("status:", res.status, " verified:", lf.is_lift(res.lift, rho))

# %% With the trivial character the certificate fails at a stabilizer
res = lf.lift_dim2(rho, gm.Character.trivial(sign.ring, rho.group))
print("trivial character:", res.status, res.witness)

# %% A four-dimensional example
J = corpus.rep("c2_jordan4")
res = lf.lift_dim4_f2(J, sign)
print("c2_jordan4:", res.status, lf.is_lift(res.lift, J))
