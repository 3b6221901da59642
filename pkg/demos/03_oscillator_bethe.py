"""The deformed harmonic oscillator, solved exactly.

Eigenfunctions are (1 - beta p^2)^alpha times a polynomial whose roots obey
Bethe-type equations in t = (1 - sqrt(beta) p)/2. Energies grow with n^2 on
top of the linear term, and reduce to (n + 1/2) hbar omega as beta -> 0.
"""

import numpy as np

from gupqm import (
    ModelParameters,
    alpha_exponent,
    bethe_solve,
    energy_level,
    hamiltonian_residual,
    polynomial_oracle_roots,
)

print("E_n for several beta (hbar = m = omega = 1)")
betas = (1e-8, 0.1, 0.5, 1.0)
print("  n " + "".join(f"{b:>14g}" for b in betas))
for n in range(8):
    print(f"{n:3d} " + "".join(f"{energy_level(n, ModelParameters(beta=b)).energy:14.8f}" for b in betas))

params = ModelParameters(beta=1.0)
print(f"\nalpha at g=1: {alpha_exponent(params).alpha:.12f}")
for n in (1, 2, 5):
    roots = bethe_solve(n, params)
    oracle = polynomial_oracle_roots(n, params)
    print(f"n={n}: roots {np.round(roots.roots, 8)}  residual {roots.max_residual:.1e}  "
          f"vs Gegenbauer roots {np.abs(roots.roots - oracle.roots).max():.1e}")

print("\n||H psi_n - E_n psi_n|| / E_n:", ", ".join(f"{hamiltonian_residual(n, params):.1e}" for n in range(5)))
