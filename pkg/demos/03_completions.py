"""
Completing finite weight data
=============================

Given two or three initial weights, find shifts that extend them while
keeping MID or subnormality.
"""

from fractions import Fraction as F

from midshift.certify import certify_mid, flatness_rigidity_check
from midshift.completion import (agler_subshift_completion, che_three_weight_test,
                                 stampfli_completion, trivial_completion)
from midshift.scalar import sqrt
from midshift.shift_model import is_flat

# the trivial completion is flat
t = trivial_completion(F(37, 100), F(61, 100))
print(t.label, is_flat(t), certify_mid(t).verdict)

# an Agler subshift gives a non-flat completion, up to eps
g = agler_subshift_completion(F(37, 100), F(61, 100), 1e-3)
print((g.m, g.n, g.delta), [float(x) for x in g.achieved], g.errors)
print("flat:", is_flat(g.shift), "mid:", certify_mid(g.shift).verdict)

# three weights: a sufficient test for an MID completion
r = che_three_weight_test(0.4, 0.7, 0.8, squared=True)
print(r.to_dict())

# Stampfli's subnormal completion follows a two-term moment recursion
s = stampfli_completion(F(1, 2), sqrt(F(1, 2)), 1)
print(s.phi0, s.phi1, [str(s.weight_squared(n)) for n in range(5)])

# it is subnormal but not MID, and the flatness check does not alarm
print(flatness_rigidity_check(s, 8, 30).to_dict())
