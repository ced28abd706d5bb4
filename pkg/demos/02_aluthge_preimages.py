"""
Aluthge transforms and their pre-images
=======================================

The Aluthge transform of a shift has squared weights α_n α_{n+1}. Going
back requires a choice of the first weight; the automatic choice makes the
pre-image weights converge.
"""

import math
from fractions import Fraction as F

from midshift.shift_model import agler, bergman, geom2
from midshift.transforms import (agler_preimage, agler_preimage_alpha0, aluthge, aluthge_q,
                                 inverse_aluthge)

# exact transform of the Bergman shift: squared weights are square roots
at = aluthge(bergman())
print([str(at.weight_squared(n)) for n in range(4)])

# asymmetric version interpolates between the shift and its backward step
print(float(aluthge_q(bergman(), F(1, 3)).weight(0)))

# a user-chosen first weight gives an exact pre-image, but it oscillates
s = inverse_aluthge(bergman(), F(1, 2)).shift
print([round(s.weight_squared_float(n), 4) for n in range(1000, 1004)])

# the automatic choice removes the oscillation
r = inverse_aluthge(geom2())
print("alpha0 =", r.alpha0, "residual =", r.limit_diagnostics.residual)

# Agler shifts have closed-form pre-images
for k in (2, 3, 4):
    p = agler_preimage(k)
    back = math.sqrt(p.weight_squared_float(5) * p.weight_squared_float(6))
    print(k, agler_preimage_alpha0(k), back, float(agler(k).weight_squared(5)))
