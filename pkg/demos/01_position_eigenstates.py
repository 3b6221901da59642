"""Position eigenstates are normalizable but not orthogonal.

Solving X psi = lam psi on the bounded momentum interval gives a phase
exp(-i lam arcsin(sqrt(beta) p) / (hbar sqrt(beta))) of constant modulus.
Two such states overlap with a sinc profile in lam - lam', which vanishes
only when the separation is a non-zero multiple of 2 hbar sqrt(beta).
"""

import numpy as np

from gupqm import ModelParameters, lattice_overlap_matrix, overlap_curve

params = ModelParameters(beta=0.25)
spacing = 2 * params.hbar * params.sqrt_beta
print(f"beta = {params.beta}, lattice spacing 2 hbar sqrt(beta) = {spacing}")

x = np.linspace(-3, 3, 13) * spacing / 2
curve = overlap_curve(x, params)
print(f"\n{'x':>8} {'closed form':>14} {'quadrature':>14} {'KMM form':>14}")
for row in zip(curve["x"], curve["y_closed_form"], curve["y_quadrature"], curve["y_kmm"]):
    print(f"{row[0]:8.3f} {row[1]:14.10f} {row[2]:14.10f} {row[3]:14.10f}")
print(f"largest closed-form vs quadrature gap: {curve['abs_diff'].max():.2e}")

# states on a shifted lattice are exactly orthonormal
m = lattice_overlap_matrix(range(-3, 4), 0.4, params)
print(f"\nlattice with offset 0.4: max |M - I| = {np.abs(m - np.eye(7)).max():.2e}")
