"""Truncated Witt vectors by hand.

Run with ``python3 demos/01_witt_vectors.py``.
"""
from __future__ import annotations

import numpy as np

from wittlift.witt import (FieldDesc, WittRing, frobenius, ghost_oracle, verschiebung,
                           witt_polynomials, zpd_iso)

# %% The universal sum polynomials, for p = 2
polys = witt_polynomials(2, 2)
print("S_1 =", polys.show("sum", 1))

# %% W_2(F_2) is Z/4: the element (1, 1) is the integer 3
R = WittRing(FieldDesc(2), 2)
a = R.element([1, 1])
print("(1,1) ->", zpd_iso(a), "  (1,1)^2 ->", zpd_iso(a * a))
print("ghost components of (1,1):", list(ghost_oracle(a).values))

# %% Over F_4 the ring is no longer Z/p^d, but F∘V = p still holds
F4 = FieldDesc.first_irreducible(2, 2)
R4 = WittRing(F4, 3)
x = R4.element([[0, 1], [1, 1], [1, 0]])
two = R4.from_int(2)
print("F(V(x)) == 2x:", frobenius(verschiebung(x)) == two * x)
print("V(F(x)) == 2x:", verschiebung(frobenius(x)) == two * x)

# %% Batch arithmetic runs on code arrays
rng = np.random.default_rng(0)
A = rng.integers(0, F4.q, (5, 3))
B = rng.integers(0, F4.q, (5, 3))
print("batch sums agree with the direct formula:",
      np.array_equal(R4.add_codes(A, B), R4.add_codes_direct(A, B)))
