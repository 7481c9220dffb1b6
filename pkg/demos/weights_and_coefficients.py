"""
Weights and leading error coefficients
======================================

Builds the weight vectors for each scheme, checks that they sum to zero, and
compares the leading error coefficients of the second-order schemes across
the order range.
"""

import math

import numpy as np

from fracapprox import Scheme, expansion_coeff, scheme_weights, tail_correction

###############################################################################
# Every scheme annihilates constants, so the weights sum to zero.

alpha = 0.5
for scheme in Scheme:
    w = scheme_weights(scheme, alpha, 8)
    head = ", ".join(f"{v:+.5f}" for v in w.weights[:4])
    print(f"{scheme.value:>10}  norm={w.normalization:+.5f}  sum={math.fsum(w.weights):+.1e}  head: {head}")

###############################################################################
# The tail correction decays like alpha / (24 n^(1+alpha)).

for n in (1, 10, 100, 1000):
    W = tail_correction(alpha, n)
    print(f"n={n:5d}  W_n={W:.6e}  scaled={W * n ** (1 + alpha) / (alpha / 24):.4f}")

###############################################################################
# The midpoint scheme with the sigma correction has a smaller leading
# coefficient than L1 across the whole range of alpha.

grid = np.linspace(0.05, 0.95, 10)
print(" alpha      |C1|       |C10|     ratio")
for a in grid:
    c1 = abs(expansion_coeff(Scheme.L1, a))
    c10 = abs(expansion_coeff(Scheme.MID_SIGMA, a))
    print(f"{a:6.2f}  {c1:9.5f}  {c10:9.5f}  {c10 / c1:7.4f}")
