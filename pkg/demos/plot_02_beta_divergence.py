"""
The beta-divergence family
==========================

Euclidean (beta=2), Kullback-Leibler (beta=1) and Itakura-Saito (beta=0),
and why only the last one ignores the overall scale of the data.
"""

import numpy as np

from cnmf2d import D_beta, d_beta

for beta in (0.0, 0.5, 1.0, 1.5, 2.0):
    print(f"beta={beta:3}: d(3, 1) = {d_beta(3, 1, beta):.6f}   d(1, 3) = {d_beta(1, 3, beta):.6f}")

# %%
# d(c p, c q) = c**beta d(p, q): scaling both arguments by 10 multiplies the
# divergence by 10**beta.
for beta in (0.0, 1.0, 2.0):
    ratio = d_beta(30, 10, beta) / d_beta(3, 1, beta)
    print(f"beta={beta:g}: d(30, 10) / d(3, 1) = {ratio:.6g}")

# %%
# The same holds entrywise for matrices.
rng = np.random.default_rng(0)
V = rng.uniform(0.1, 2, (10, 25))
U = rng.uniform(0.1, 2, (10, 25))
for c in (1.0, 100.0):
    print(f"c={c:g}: D_0 = {D_beta(c * V, c * U, 0):.12f}   D_1 = {D_beta(c * V, c * U, 1):.6f}")
