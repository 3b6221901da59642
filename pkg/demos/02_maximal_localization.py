"""Maximally localized states and the two readings of the kinetic energy.

The state (1 - beta p^2) exp(-i xi arcsin(sqrt(beta) p)/(hbar sqrt(beta)))
sits at <X> = xi with position spread 2 hbar sqrt(beta/3) and saturates the
Robertson bound. Its kinetic expectation is 1/(12 m beta) when computed with
the undeformed p^2 and 1/(6 m beta) with the deformed P^2.
"""

from gupqm import (
    ModelParameters,
    comparison_report,
    expectation_report,
    max_localization_state,
    position_eigenstate,
)

params = ModelParameters(beta=1.0)
for xi in (0.0, 0.5, 2.0):
    rep = expectation_report(max_localization_state(xi, params).state, params)
    print(f"xi={xi:4.1f}  <X>={rep.mean_X:.12f}  dX={rep.delta_X:.12f}  dX dP={rep.delta_X * rep.delta_P:.12f}"
          f"  |<[X,P]>|/2={rep.robertson_rhs:.12f}")

print("\nkinetic expectations, units of 1/(12 m beta):")
for row in comparison_report(params):
    if row["ratio"] is not None:
        print(f"  {row['quantity']:28s} {row['ratio']:8.4f}   ({row['source']})")
    else:
        print(f"  {row['quantity']:28s} {row['value']:8.4f}   ({row['source']})")

flat = expectation_report(position_eigenstate(0.0, params).state, params)
print(f"\nposition eigenstate: <p^2>/2m = {flat.mean_p2_lower / 2:.10f} (1/(4 m beta) = 0.25), "
      f"deformed <P^2>/2m = {flat.mean_P2_deformed} (boundary non-integrable)")
