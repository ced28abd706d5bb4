"""
Certifying moment infinite divisibility
=======================================

Build a few shifts from the catalog, look at their moments and run the
certificates in exact arithmetic.
"""

from fractions import Fraction as F

import numpy as np

from midshift.certify import certify_che, certify_k_hyponormal, certify_mid, diagram_check
from midshift.shift_model import agler, bergman, dirichlet, geom2, normalize, scale

# moments are exact rationals; a float view is handy for a quick look
for s in (bergman(), agler(3), geom2()):
    print(s.label, np.array([float(s.moment(n)) for n in range(6)]).round(4))

# MID is certified over orders 1..N and indices 0..K
for s in (bergman(), agler(3), geom2(), dirichlet()):
    c = certify_mid(s, 8, 40)
    print(f"{s.label:10s} {c.verdict:5s} witness={c.witness}")

# Dirichlet fails MID but is completely hyperexpansive
print("che(dirichlet):", certify_che(dirichlet()).verdict)

# subnormality through Hankel matrices
print("khypo(bergman, 3):", certify_k_hyponormal(bergman(), 3, 20).verdict)

# the four sequence conditions agree on a contraction
r = diagram_check(bergman(), 8, 40)
print(r.verdicts())

# rescaling does not change the verdict once the shift is normalized
print(certify_mid(normalize(scale(agler(4), F(3, 2)))).verdict)
