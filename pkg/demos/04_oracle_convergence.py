"""Cross-checking the spectrum with an independent finite-difference solver.

In theta = arcsin(sqrt(beta) p) the oscillator becomes a particle in a tan^2
well on (-pi/2, pi/2). Central differences converge at second order; the
singular wall adds a term of order h^(4 alpha - 1), which matters once the
deformation is strong.
"""

import numpy as np

from gupqm import ModelParameters, energy_level, oracle_levels
from gupqm.oracle import build_theta_problem, convergence_study, wall_exponent

params = ModelParameters(beta=1.0)
exact = energy_level(0, params).energy
study = convergence_study(params, [128, 256, 512, 1024, 2048])
print(f"ground level at beta=1, closed form {exact:.12f}")
for m, v in zip(study["sizes"], study["values"]):
    print(f"  M={m:5d}  {v:.12f}  error {exact - v:.2e}")
print(f"  direction of convergence: {study['direction']}")

print("\nworst relative error over n=0..10")
for beta in (0.01, 0.1, 1.0, 3.0, 10.0):
    p = ModelParameters(beta=beta)
    ref = np.array([energy_level(n, p).energy for n in range(11)])
    plain = oracle_levels(p, 11, wall_correction=False)
    best = oracle_levels(p, 11)
    print(f"  beta={beta:5g}  wall order {wall_exponent(p):6.3f}  two-grid {np.max(abs(plain.extrapolated - ref) / ref):.1e}"
          f"  {best.method:>14s} {np.max(abs(best.extrapolated - ref) / ref):.1e}")

prob = build_theta_problem(ModelParameters(beta=0.1), 256)
print(f"\ntheta grid: {prob.grid_size} nodes, step {prob.step:.4e}, smallest potential value {prob.potential.min():.2e}")
