"""Invariant suites shared by the ``verify`` command and the acceptance tests.

Each suite returns a list of :class:`Check` rows. A suite that raises is
recorded as a single failing row rather than aborting the run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import algebra, eigenstates, oracle, oscillator
from .params import ModelParameters
from .states import (
    AnalyticState,
    arcsin_phase_state,
    enveloped_polynomial,
    envelope_state,
    gaussian_state,
    polynomial_state,
)


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    measured: float
    tolerance: float
    comparison: str  # "<=" or ">="
    provenance: str = ""
    beta: float = math.nan
    value: float = math.nan  # the labelled quantity itself, where one exists

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.measured):
            return False
        if self.comparison == "<=":
            return self.measured <= self.tolerance
        return self.measured >= self.tolerance


def _le(suite, name, measured, tol, provenance, beta, value=math.nan):
    return Check(suite, name, float(measured), tol, "<=", provenance, beta, float(value))


def _ge(suite, name, measured, tol, provenance, beta, value=math.nan):
    return Check(suite, name, float(measured), tol, ">=", provenance, beta, float(value))


def _rel(a, b):
    return abs(a - b) / abs(b)


def interior_probes(params: ModelParameters, count: int = 11) -> np.ndarray:
    return np.linspace(-0.95, 0.95, count) * params.p_max


# -- state baskets -------------------------------------------------------------


def commutator_basket(params: ModelParameters) -> list[AnalyticState]:
    """Order-2 test states: enveloped polynomials, Gaussians, position eigenstates."""
    b, scale = params.beta, params.hbar * params.sqrt_beta
    basket = [
        polynomial_state([1.0]),
        polynomial_state([1.0, 0.0, -b]),
        polynomial_state([0.0, 0.0, 0.0, 1.0]),
        enveloped_polynomial([0.3, -1.0, 0.5j], b, 1.0),
        enveloped_polynomial([1.0, 2.0, 0.0, -0.7], b, 2.0),
        enveloped_polynomial([0.2j, 1.0], b, 0.75),
        gaussian_state(1.0),
        gaussian_state(0.3 * params.p_max, center=0.2 * params.p_max),
    ]
    for lam in (0.0, scale, -3.7 * scale):
        basket.append(eigenstates.position_eigenstate(lam, params).state)
    basket.append(eigenstates.max_localization_state(1.3 * scale, params).state)
    return basket


def boundary_vanishing_basket(params: ModelParameters) -> list[AnalyticState]:
    b, scale = params.beta, params.hbar * params.sqrt_beta
    return [
        envelope_state(b, 1.0),
        enveloped_polynomial([0.3, -1.0, 0.5j], b, 1.0),
        enveloped_polynomial([1.0, 2.0, 0.0, -0.7], b, 2.0),
        enveloped_polynomial([0.2j, 1.0], b, 0.75) * arcsin_phase_state(b, -0.4j),
        eigenstates.max_localization_state(0.0, params).state,
        eigenstates.max_localization_state(2.0 * scale, params).state,
    ]


def random_enveloped_states(rng: np.random.Generator, params: ModelParameters, count: int,
                            symmetric: bool = False) -> list[AnalyticState]:
    """Random polynomial x (1 - beta p^2)^k states, k in {1, 2, 3}.

    ``symmetric`` draws real even polynomials, so <P> = 0 exactly.
    """
    states = []
    pm = params.p_max
    for _ in range(count):
        degree = int(rng.integers(1, 6))
        if symmetric:
            coeffs = np.zeros(2 * degree + 1)
            coeffs[::2] = rng.normal(size=degree + 1) / pm ** np.arange(0, 2 * degree + 1, 2)
        else:
            coeffs = (rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)) / pm ** np.arange(degree + 1)
        power = int(rng.integers(1, 4))
        states.append(enveloped_polynomial(coeffs, params.beta, power))
    return states


# -- suites ------------------------------------------------------------------


def algebra_suite(params: ModelParameters, n_random: int = 100, seed: int = 20240611) -> list[Check]:
    S, beta = "algebra", params.beta
    rows = []
    g = algebra.build_grid(params, 16)
    measure = math.pi / params.sqrt_beta
    rows.append(_le(S, "grid_measure_rel_err", _rel(float(g.integrate(np.ones(g.size))), measure), 1e-14,
                    "sum of weights vs pi/sqrt(beta)", beta))
    worst = 0.0
    for k in range(g.size):  # even degrees 0 .. 2N-2
        exact = math.pi * math.comb(2 * k, k) / 4**k / params.beta ** (k + 0.5)
        worst = max(worst, _rel(float(g.integrate(g.nodes ** (2 * k))), exact))
    rows.append(_le(S, "grid_polynomial_exactness", worst, 1e-12, "moments p^2k vs central binomial form", beta))

    probes = interior_probes(params)
    basket = commutator_basket(params)
    rows.append(_le(S, "commutator_residual_max",
                    max(algebra.commutator_residual(s, probes, params) for s in basket), 1e-10,
                    "[X,P] psi vs i hbar psi/(1-beta p^2) at 11 probes", beta))

    # non-integer envelope powers converge algebraically, hence the finer grid
    fine = algebra.build_grid(params, 8192)
    vanish = boundary_vanishing_basket(params)
    norms = [algebra.norm(s, fine) for s in vanish]
    x_norms = [algebra.norm(algebra.apply_X(s, params), fine) for s in vanish]
    p_norms = [algebra.norm(algebra.apply_P(s, params), fine) for s in vanish]
    dx = dp = 0.0
    for i, a in enumerate(vanish):
        for j, b in enumerate(vanish):
            dx = max(dx, algebra.symmetry_defect_X(a, b, params, fine)
                     / (x_norms[i] * norms[j] + norms[i] * x_norms[j]))
            dp = max(dp, algebra.symmetry_defect_P(a, b, params, fine)
                     / (p_norms[i] * norms[j] + norms[i] * p_norms[j]))
    rows.append(_le(S, "hermiticity_X", dx, 1e-10,
                    "|<Xa|b>-<a|Xb>| / (|Xa||b|+|a||Xb|), boundary-vanishing pairs", beta))
    rows.append(_le(S, "hermiticity_P", dp, 1e-10,
                    "|<Pa|b>-<a|Pb>| / (|Pa||b|+|a||Pb|), boundary-vanishing pairs", beta))

    grid = algebra.build_grid(params, 512)
    rng = np.random.default_rng(seed)
    margins = [algebra.expectation_report(s, params, grid).robertson_margin
               for s in random_enveloped_states(rng, params, n_random)]
    rows.append(_ge(S, "robertson_margin_min", min(margins), -1e-12,
                    f"dX dP - |<[X,P]>|/2 over {n_random} random states", beta))
    chain1, chain2 = [], []
    for s in random_enveloped_states(rng, params, max(n_random // 4, 1), symmetric=True):
        r = algebra.expectation_report(s, params, grid)
        lower = params.hbar / 2 * r.mean_inverse_u
        chain1.append(r.delta_X * r.delta_P - lower)
        chain2.append(lower - params.hbar / 2 / (1 - params.beta * r.mean_p2_lower))
    rows.append(_ge(S, "gup_chain_first_link_min", min(chain1), -1e-12,
                    "dX dP - (hbar/2)<1/(1-beta p^2)>, symmetric states", beta))
    rows.append(_ge(S, "gup_chain_second_link_min", min(chain2), -1e-12,
                    "(hbar/2)<1/(1-beta p^2)> - (hbar/2)/(1-beta<p^2>), symmetric states", beta))
    return rows


def eigenstates_suite(params: ModelParameters) -> list[Check]:
    S, beta = "eigenstates", params.beta
    scale = params.hbar * params.sqrt_beta
    rows = []
    lams = np.linspace(-3, 3, 21) * scale
    gram = eigenstates.overlap_gram(lams, params)
    closed = eigenstates.overlap_closed_form(lams[:, None], lams[None, :], params)
    rows.append(_le(S, "overlap_closed_vs_quadrature", np.max(np.abs(gram - closed)), 1e-10,
                    "sinc closed form vs Chebyshev quadrature, 21x21", beta))
    worst = max(np.max(np.abs(eigenstates.lattice_overlap_matrix(range(-5, 6), off, params) - np.eye(11)))
                for off in (-1.0, -0.5, 0.0, 0.5, 1.0))
    rows.append(_le(S, "lattice_identity", worst, 1e-12, "|n|<=5, offsets -1..1", beta))

    probes = interior_probes(params)
    worst = 0.0
    for lam in (0.0, scale, -scale, 3.7 * scale, -3.7 * scale):
        st = eigenstates.position_eigenstate(lam, params).state
        x = algebra.apply_X(st, params).value(probes)
        v = st.value(probes)
        worst = max(worst, float(np.max(np.abs(x - lam * v)) / max(abs(lam), scale) / np.max(np.abs(v))))
    rows.append(_le(S, "position_eigen_relation", worst, 1e-12, "X psi_lam - lam psi_lam at 11 probes", beta))

    worst = 0.0
    for xi in (0.0, 1.0, -1.0, 10.0, -10.0):
        ml = eigenstates.max_localization_state(xi * scale, params)
        r = algebra.expectation_report(ml.state, params)
        worst = max(worst, abs(r.mean_X - xi * scale), abs(r.norm_factor - 1))
    rows.append(_le(S, "ml_mean_X_and_norm", worst, 1e-8, "<X> = xi and unit norm", beta))

    m = params.mass
    rep = algebra.expectation_report(eigenstates.max_localization_state(0.0, params).state, params)
    lower = rep.mean_p2_lower / (2 * m)
    deformed = rep.mean_P2_deformed / (2 * m)
    rows.append(_le(S, "ml_kinetic_lower_p", _rel(lower, 1 / (12 * m * beta)), 1e-10,
                    "quadrature <p^2>/2m vs closed form 1/(12 m beta)", beta, lower))
    rows.append(_le(S, "ml_kinetic_deformed_P", _rel(deformed, 1 / (6 * m * beta)), 1e-8,
                    "quadrature <P^2>/2m vs 1/(6 m beta); the quoted value 1/(12 m beta) is the <p^2> reading",
                    beta, deformed))
    rows.append(_le(S, "ml_delta_X", _rel(rep.delta_X, 2 * params.hbar * math.sqrt(beta / 3)), 1e-8,
                    "quadrature dX vs 2 hbar sqrt(beta/3)", beta, rep.delta_X))
    ref = eigenstates.ReferenceConstants.for_params(params)
    rows.append(_le(S, "pp_min_length_reference", _rel(ref.pp_min_length, 3 * math.sqrt(3) / 4 * scale), 1e-15,
                    f"quoted constant (3 sqrt3/4) hbar sqrt(beta), shown beside the ml state dX = {rep.delta_X:.17g}",
                    beta, ref.pp_min_length))
    pe = algebra.expectation_report(eigenstates.position_eigenstate(0.7 * scale, params).state, params)
    pe_lower = pe.mean_p2_lower / (2 * m)
    rows.append(_le(S, "position_state_kinetic_lower_p", _rel(pe_lower, 1 / (4 * m * beta)), 1e-8,
                    "quadrature <p^2>/2m vs closed form 1/(4 m beta)", beta, pe_lower))
    rows.append(_ge(S, "position_state_kinetic_deformed_divergent", float(pe.divergent), 1.0,
                    "deformed <P^2>/2m: divergent (boundary non-integrable)", beta,
                    pe.mean_P2_deformed / (2 * m)))
    table = {r["quantity"]: r for r in eigenstates.comparison_report(params)}
    quoted = {"KMM": 6.0, "PP": 0.8814, "WH": 0.7176}
    worst = max(abs(table[f"kinetic_ml_{k}"]["ratio"] - v) for k, v in quoted.items())
    rows.append(_le(S, "comparison_constants_verbatim", worst, 0.0, "quoted ratios 6, 0.8814, 0.7176", beta))
    return rows


def oscillator_suite(params: ModelParameters, n_max: int = 10) -> list[Check]:
    S, beta = "oscillator", params.beta
    rows = []
    a = oscillator.alpha_exponent(params)
    rows.append(_le(S, "alpha_indicial_equation", abs(a.alpha**2 - a.alpha / 2 - 1 / (4 * a.g**2)),
                    1e-12 * max(1.0, a.alpha**2), "alpha^2 - alpha/2 - 1/(4 g^2) = 0", beta))
    energies = [oscillator.energy_level(n, params).energy for n in range(n_max + 1)]
    gaps = np.diff(energies)
    rows.append(_ge(S, "spectrum_gap_growth_min", float(np.min(np.diff(gaps))) if gaps.size > 1 else 1.0, 0.0 + 1e-300,
                    "E_{n+1}-E_n strictly increasing", beta))
    res, agree, sym = 0.0, 0.0, 0.0
    for n in range(1, min(max(n_max, 6), 12) + 1):
        r = oscillator.bethe_solve(n, params)
        o = oscillator.polynomial_oracle_roots(n, params)
        res = max(res, r.max_residual / max(1.0, r.alpha))
        agree = max(agree, float(np.max(np.abs(r.roots - o.roots))))
        sym = max(sym, r.symmetry_defect)
    rows.append(_le(S, "bethe_residual_max", res, 1e-12, "damped Newton residual / max(1, alpha)", beta))
    rows.append(_le(S, "bethe_vs_polynomial_oracle", agree, 1e-10, "Gegenbauer-root oracle", beta))
    rows.append(_le(S, "bethe_root_symmetry", sym, 1e-12, "roots symmetric about 1/2", beta))

    grid = algebra.build_grid(params, oscillator.quadrature_size(4, params))
    waves = []
    worst_h, worst_parity = 0.0, 0.0
    probes = interior_probes(params)
    for n in range(5):
        worst_h = max(worst_h, oscillator.hamiltonian_residual(n, params))
        roots = oscillator.bethe_solve(n, params) if n else None
        psi = oscillator.oscillator_wavefunction(n, roots, params)
        waves.append(psi)
        worst_parity = max(worst_parity, float(np.max(np.abs(psi.value(-probes) - (-1) ** n * psi.value(probes)))))
    vals = np.array([w.value(grid.nodes) for w in waves])
    gram = (np.conj(vals) * grid.weights) @ vals.T
    rows.append(_le(S, "hamiltonian_residual_max", worst_h, 1e-8, "||H psi_n - E_n psi_n||/E_n, n<=4", beta))
    rows.append(_le(S, "orthonormality", float(np.max(np.abs(gram - np.eye(5)))), 1e-8, "n, m <= 4", beta))
    rows.append(_le(S, "parity", worst_parity, 1e-12, "psi_n(-p) = (-1)^n psi_n(p)", beta))
    tiny = params.with_beta(1e-8)
    dev = max(abs(oscillator.energy_level(n, tiny).energy - oscillator.energy_classical_limit(n, tiny))
              for n in range(n_max + 1))
    rows.append(_le(S, "classical_limit_closed_form", dev, 1e-6 * params.hbar * params.omega,
                    "|E_n(beta=1e-8) - (n+1/2) hbar omega|", beta))
    return rows


def oracle_suite(params: ModelParameters, n_max: int = 10, grid_size: int = 1024) -> list[Check]:
    S, beta = "oracle", params.beta
    rows = []
    rows.append(_le(S, "transform_defect", oracle.transform_defect(params), 1e-10,
                    "momentum-space vs theta-space Hamiltonian on a probe", beta))
    spec = oracle.oracle_levels(params, n_max + 1, grid_size)
    ref = np.array([oscillator.energy_level(n, params).energy for n in range(n_max + 1)])
    grids = f"M={grid_size},{2 * grid_size}" + (f",{4 * grid_size}" if spec.method == "wall-corrected" else "")
    rows.append(_le(S, "spectrum_rel_diff_max", float(np.max(np.abs(spec.extrapolated - ref) / ref)), 1e-6,
                    f"{spec.method} extrapolation {grids} vs closed form", beta))
    problem = oracle.build_theta_problem(params, grid_size, oracle.auto_extent(params, n_max + 1))
    raw = oracle.solve_spectrum(problem, max(2, min(n_max + 1, grid_size // 10)))
    worst = 0.0
    for n in range(2):
        roots = oscillator.bethe_solve(n, params) if n else None
        psi = oscillator.oscillator_wavefunction(n, roots, params)
        worst = max(worst, oracle.compare_eigenvector(raw.eigenvectors[:, n], psi, params, raw.theta, raw.step))
    rows.append(_le(S, "eigenvector_l2_n01", worst, 1e-4, f"flat-theta L2 distance, M={grid_size}", beta))
    return rows


SUITES: dict[str, Callable[..., list[Check]]] = {
    "algebra": algebra_suite,
    "eigenstates": eigenstates_suite,
    "oscillator": oscillator_suite,
    "oracle": oracle_suite,
}


def run_all(params: ModelParameters, n_max: int = 10, grid_size: int = 1024) -> list[Check]:
    rows: list[Check] = []
    calls = {
        "algebra": lambda: algebra_suite(params),
        "eigenstates": lambda: eigenstates_suite(params),
        "oscillator": lambda: oscillator_suite(params, n_max),
        "oracle": lambda: oracle_suite(params, n_max, grid_size),
    }
    for name, call in calls.items():
        try:
            rows.extend(call())
        except Exception as exc:  # recorded as a failing row; verify must finish every suite
            rows.append(Check(name, "suite_error", math.nan, 0.0, "<=", f"{type(exc).__name__}: {exc}",
                              params.beta))
    return rows
