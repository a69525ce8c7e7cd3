"""
The 2D convolutional model
==========================

Builds a reconstruction by hand from the shift operators and checks it
against ``reconstruct``.
"""

import numpy as np

from cnmf2d import reconstruct, shift_down, shift_left, shift_right, shift_up

X = np.arange(1.0, 7.0).reshape(2, 3)
print("X\n", X)
print("shift_right(X, 1)\n", shift_right(X, 1))
print("shift_left(X, 1)\n", shift_left(X, 1))
print("shift_down(X, 1)\n", shift_down(X, 1))
print("shift_up(X, 1)\n", shift_up(X, 1))

# %%
# Shifts are size-preserving and zero-fill what they vacate, so a shift past
# the edge gives the zero matrix.
print(shift_right(X, 5))

# %%
# Two weight slices (M = 2) and two activation slices (L = 2), rank 1.
W = np.array([[[1.0], [2.0]], [[3.0], [4.0]]])  # (M, K, I)
H = np.array([[[5.0, 6.0]], [[7.0, 8.0]]])      # (L, I, N)

U = sum(shift_down(W[m], l) @ shift_right(H[l], m) for l in range(2) for m in range(2))
print("by hand\n", U)
print("reconstruct\n", reconstruct(W, H))
