"""Quantum mechanics with a minimal length and a maximal momentum.

Momentum-space operators for the deformed algebra [X, P] = i hbar/(1 - beta p^2),
its position eigenfunctions and maximally localized states, the exactly
solvable harmonic oscillator and an independent finite-difference oracle.
"""

from .algebra import (
    ChebyshevGrid,
    ExpectationReport,
    InvariantViolation,
    apply_P,
    apply_X,
    build_grid,
    commutator_residual,
    expectation_report,
    inner_product,
    norm,
    normalized,
    symmetry_defect_P,
    symmetry_defect_X,
)
from .eigenstates import (
    MaxLocalizationState,
    PositionEigenstate,
    ReferenceConstants,
    SqueezedStateParams,
    comparison_report,
    lattice_overlap_matrix,
    max_localization_state,
    overlap_closed_form,
    overlap_curve,
    overlap_quadrature,
    position_eigenstate,
    squeezed_state,
)
from .oracle import InsufficientGridError, OracleSpectrum, oracle_levels
from .oscillator import (
    BetheConvergenceError,
    BetheRootSet,
    alpha_exponent,
    bethe_solve,
    energy_classical_limit,
    energy_level,
    hamiltonian_residual,
    oscillator_wavefunction,
    polynomial_oracle_roots,
)
from .params import ModelParameters
from .states import AnalyticState, SampledState

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
