"""Extension classes of C2-modules and the classes in H^1.

Run with ``python3 demos/02_extensions.py``.
"""
from __future__ import annotations

from wittlift import cohomology as co
from wittlift import corpus
from wittlift import gmodules as gm
from wittlift import yoneda as yo
from wittlift.witt import FieldDesc, WittRing

C2 = corpus.group("C2")
T = gm.GModule.trivial(WittRing(FieldDesc(2), 1), C2, 1)

# %% H^1(C2, Hom(T, T)) = Z/2; the nonzero class is the regular representation
H1 = co.cohomology_group(None, gm.hom(T, T), 1)
print("H^1 orders:", H1.orders)
e = yo.extension_of_class(H1.cocycle([1]), T, T)
print("middle term action:", e.middle.matrix(1)[..., 0].tolist())

# %% Linkage agrees with equality of classes
reg, split = corpus.extensions()["c2_regular"], corpus.extensions()["c2_split"]
print("regular ~ built from class:", yo.linked_brute(e, reg))
print("regular ~ split:", yo.linked_brute(reg, split))

# %% The Baer sum of the regular extension with itself splits
print("class of reg + reg:", yo.class_of_extension(yo.baer_sum(reg, reg)).coords.tolist())

# %% Over Z/4 the sign character gives a class of order 2
R2 = WittRing(FieldDesc(2), 2)
S = gm.GModule.from_ints(R2, C2, [[[3]]])
H = co.cohomology_group(None, gm.hom(gm.GModule.trivial(R2, C2, 1), S), 1)
print("H^1(C2, Z/4(-1)) orders:", H.orders)
