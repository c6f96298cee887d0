"""Tour of the spectral toolbox: transforms, derivatives, Sobolev norms.

Everything lives on the 2pi-periodic torus [-pi, pi]^2 sampled on an n x n
grid.  Fourier coefficients use the convention f = sum_k f_hat[k] e^{i k.x},
so a pure trig mode has two conjugate coefficients of magnitude 1/2.
"""

import numpy as np

from mhd2tor import (
    GridSpec,
    ScalarField,
    forward_transform,
    inverse_transform,
    partial_derivative,
    sobolev_norm,
    VectorField,
)

grid = GridSpec(32)
print(f"grid: n={grid.n}, spacing={2 * np.pi / grid.n:.4f}, "
      f"dealias keeps |k| <= {grid.n // 3}")

# A smooth test function and its exact partial derivatives.
f = np.sin(2 * grid.x1) * np.cos(grid.x2)
fx = 2 * np.cos(2 * grid.x1) * np.cos(grid.x2)
fyy = -np.sin(2 * grid.x1) * np.cos(grid.x2)

spec = forward_transform(ScalarField(grid, f))

# Round trip is exact to roundoff.
back = inverse_transform(spec).samples
print(f"round-trip error:        {np.max(np.abs(back - f)):.2e}")

# Spectral differentiation matches the analytic derivatives.
dx = inverse_transform(partial_derivative(spec, (1, 0))).samples
dyy = inverse_transform(partial_derivative(spec, (0, 2))).samples
print(f"d/dx error:              {np.max(np.abs(dx - fx)):.2e}")
print(f"d2/dy2 error:            {np.max(np.abs(dyy - fyy)):.2e}")

# Sobolev norms via the exact multiplier sum_{|alpha|<=m} k^{2 alpha}.
# sin(2 x1) cos(x2) puts weight 1/4 on each of the four modes k = (+-2, +-1),
# so ||f||_L2 = pi and, with 1 + k1^2 + k2^2 = 6, ||f||_H1 = pi sqrt(6).
v = VectorField(spec, forward_transform(ScalarField(grid, np.zeros_like(f))))
h0 = sobolev_norm(v, 0)
h1 = sobolev_norm(v, 1)
print(f"H0 norm:                 {h0:.6f}  (exact {np.pi:.6f})")
print(f"H1 norm:                 {h1:.6f}  (exact {np.pi * np.sqrt(6):.6f})")
