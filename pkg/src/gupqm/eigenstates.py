"""Position eigenfunctions, squeezed states and maximal-localization states."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .algebra import ChebyshevGrid, build_grid, expectation_report, inner_product, normalized
from .params import ModelParameters
from .states import AnalyticState, arcsin_phase_state, envelope_state

# grid used when an analytic overlap must be resolved to ~1e-11 (the phase
# exp(i c theta) is not a polynomial in p, so convergence is only O(h^2))
OVERLAP_GRID_SIZE = 2**18


@dataclass(frozen=True)
class PositionEigenstate:
    lam: float
    params: ModelParameters
    state: AnalyticState = field(repr=False)


@dataclass(frozen=True)
class MaxLocalizationState:
    xi: float
    params: ModelParameters
    state: AnalyticState = field(repr=False)


@dataclass(frozen=True)
class SqueezedStateParams:
    """Parameters of the minimal-uncertainty family.

    ``kappa = 1 + beta delta_p^2 + beta mean_p^2`` where ``mean_p`` is the
    undeformed <p>. Shipped states use ``mean_p = 0``.
    """

    mean_X: float
    mean_P: float
    delta_p: float
    kappa: float

    @classmethod
    def create(cls, mean_X, mean_P, delta_p, params: ModelParameters, mean_p: float = 0.0):
        if not delta_p > 0:
            raise ValueError(f"delta_p must be > 0, got {delta_p!r}")
        kappa = 1.0 + params.beta * delta_p**2 + params.beta * mean_p**2
        return cls(float(mean_X), float(mean_P), float(delta_p), kappa)

    def envelope_power(self, params: ModelParameters) -> float:
        return self.kappa / (4 * params.beta * self.delta_p**2)


@dataclass(frozen=True)
class ReferenceConstants:
    """Constants quoted for other deformed algebras, for side-by-side reports.

    Kinetic ratios are in units of 1/(12 m beta). ``adv_min_length`` and
    ``adv_max_momentum`` depend on the opaque ADV parameter ``alpha`` and are
    only available through :meth:`adv`.
    """

    kmm_min_length: float
    pp_min_length: float
    kinetic_ratios: dict = field(default_factory=lambda: dict(KINETIC_RATIOS))

    @classmethod
    def for_params(cls, params: ModelParameters) -> "ReferenceConstants":
        scale = params.hbar * params.sqrt_beta
        return cls(kmm_min_length=scale, pp_min_length=3 * math.sqrt(3) / 4 * scale)

    @staticmethod
    def adv(alpha: float, hbar: float = 1.0) -> dict:
        return {"adv_min_length": hbar * alpha, "adv_max_momentum": 1.0 / alpha}


KINETIC_RATIOS = {"KMM": 6.0, "PP": 0.8814, "WH": 0.7176, "new": 1.0}


def _phase_coefficient(lam, params):
    return -1j * lam / (params.hbar * params.sqrt_beta)


def position_eigenstate(lam: float, params: ModelParameters) -> PositionEigenstate:
    """Normalized solution of X psi = lam psi."""
    params.require_deformed()
    amp = math.sqrt(params.sqrt_beta / math.pi)
    state = arcsin_phase_state(params.beta, _phase_coefficient(lam, params)).scaled(amp, f"psi_lam={lam:g}")
    return PositionEigenstate(float(lam), params, state)


def overlap_closed_form(lam, lam_prime, params: ModelParameters):
    """Sinc-form overlap of two position eigenstates (1 at coincidence).

    Accepts scalars or arrays.
    """
    params.require_deformed()
    d = np.asarray(lam, dtype=float) - np.asarray(lam_prime, dtype=float)
    # np.sinc(z) = sin(pi z)/(pi z) handles z = 0 by its limit
    out = np.sinc(d / (2 * params.hbar * params.sqrt_beta))
    return float(out) if out.ndim == 0 else out


def overlap_quadrature(lam, lam_prime, params: ModelParameters, grid: ChebyshevGrid | None = None) -> complex:
    if grid is None:
        grid = build_grid(params, OVERLAP_GRID_SIZE)
    a = position_eigenstate(lam, params).state
    b = position_eigenstate(lam_prime, params).state
    return inner_product(a, b, grid)


def overlap_gram(lams, params: ModelParameters, grid: ChebyshevGrid | None = None) -> np.ndarray:
    """Matrix of quadrature overlaps <psi_lam_i | psi_lam_j>."""
    if grid is None:
        grid = build_grid(params, OVERLAP_GRID_SIZE)
    lams = np.asarray(lams, dtype=float)
    phase = np.exp(np.outer(_phase_coefficient(lams, params), grid.theta))
    vals = math.sqrt(params.sqrt_beta / math.pi) * phase
    return (np.conj(vals) * grid.weights) @ vals.T


def lattice_points(n_range, offset: float, params: ModelParameters) -> np.ndarray:
    if not -1.0 <= offset <= 1.0:
        raise ValueError("lattice offset must lie in [-1, 1]")
    n = np.asarray(list(n_range), dtype=float)
    return (2 * n + offset) * params.hbar * params.sqrt_beta


def lattice_overlap_matrix(n_range, lambda_offset: float, params: ModelParameters, other_offset: float | None = None):
    """Closed-form overlaps between lattice states (2n + offset) hbar sqrt(beta).

    With ``other_offset`` given, rows use ``lambda_offset`` and columns use
    ``other_offset``; otherwise the matrix is the identity.
    """
    n_range = list(n_range)
    rows = lattice_points(n_range, lambda_offset, params)
    cols = lattice_points(n_range, lambda_offset if other_offset is None else other_offset, params)
    return overlap_closed_form(rows[:, None], cols[None, :], params)


def kmm_overlap_quadrature(x: float, params: ModelParameters) -> float:
    """Overlap of KMM formal position eigenvectors, by quadrature over the real line.

    KMM states live on all of R with measure dp/(1 + beta p^2) and phase
    arctan(sqrt(beta) p); used only to emit the comparison curve.
    """
    sb = params.sqrt_beta
    c = x / (params.hbar * sb)
    val, _ = integrate.quad(lambda p: math.cos(c * math.atan(sb * p)) / (1 + params.beta * p * p),
                            -np.inf, np.inf, epsabs=1e-13, epsrel=1e-13, limit=500)
    return sb / math.pi * val


def overlap_curve(x_values, params: ModelParameters, with_kmm: bool = True) -> dict:
    """Overlap versus lam - lam' for the new algebra (closed form and quadrature)."""
    x = np.asarray(x_values, dtype=float)
    grid = build_grid(params, OVERLAP_GRID_SIZE)
    closed = np.atleast_1d(overlap_closed_form(x, 0.0, params))
    lams = np.concatenate([[0.0], x])
    gram = overlap_gram(lams, params, grid)
    quad = gram[1:, 0].real
    out = {"x": x, "y_closed_form": closed, "y_quadrature": quad, "abs_diff": np.abs(closed - quad)}
    if with_kmm:
        out["y_kmm"] = np.array([kmm_overlap_quadrature(v, params) for v in x])
    return out


def squeezed_state(sp: SqueezedStateParams, params: ModelParameters, grid_size: int = 256) -> AnalyticState:
    """Normalized minimal-uncertainty state

    psi(p) ~ (1 - beta p^2)^(kappa / (4 beta dp^2))
             * exp[(<X>/(i hbar sqrt(beta)) + kappa <P>/(2 dp^2 sqrt(beta))) arcsin(sqrt(beta) p)]
    """
    params.require_deformed()
    power = sp.envelope_power(params)
    if not power > 0:
        raise ValueError(f"non-integrable envelope exponent {power!r}")
    sb = params.sqrt_beta
    coeff = sp.mean_X / (1j * params.hbar * sb) + sp.kappa * sp.mean_P / (2 * sp.delta_p**2 * sb)
    raw = envelope_state(params.beta, power) * arcsin_phase_state(params.beta, coeff)
    state, _ = normalized(raw, build_grid(params, grid_size))
    return AnalyticState(state.jet_fn, state.order, "squeezed")


def max_localization_state(xi: float, params: ModelParameters, check_tol: float = 1e-8) -> MaxLocalizationState:
    """Maximally localized state around ``xi`` with closed-form normalization."""
    params.require_deformed()
    amp = math.sqrt(8 * params.sqrt_beta / (3 * math.pi))
    state = (envelope_state(params.beta, 1.0) * arcsin_phase_state(params.beta, _phase_coefficient(xi, params))).scaled(
        amp, f"ml(xi={xi:g})"
    )
    report = expectation_report(state, params)
    if abs(report.norm_factor - 1) > 1e-10 or abs(report.mean_X - xi) > check_tol * max(1.0, abs(xi)):
        raise RuntimeError(f"ml state failed its checks: norm {report.norm_factor!r}, <X> {report.mean_X!r}")
    return MaxLocalizationState(float(xi), params, state)


@dataclass(frozen=True)
class UncertaintyProfile:
    delta_X: float
    delta_P: float
    delta_p_lower: float
    reference_pp_min_length: float
    reference_kmm_min_length: float


def ml_uncertainty_profile(xi: float, params: ModelParameters) -> UncertaintyProfile:
    ml = max_localization_state(xi, params)
    rep = expectation_report(ml.state, params)
    ref = ReferenceConstants.for_params(params)
    return UncertaintyProfile(
        delta_X=rep.delta_X,
        delta_P=rep.delta_P,
        delta_p_lower=math.sqrt(rep.mean_p2_lower - rep.mean_p_lower**2),
        reference_pp_min_length=ref.pp_min_length,
        reference_kmm_min_length=ref.kmm_min_length,
    )


def comparison_report(params: ModelParameters, adv_alpha: float | None = None) -> list[dict]:
    """Kinetic-energy expectations of maximal-localization states across models.

    Rows carry ``value`` (energy units), ``ratio`` (units of 1/(12 m beta))
    and a ``source`` label. The new-model rows are computed by quadrature.
    """
    unit = 1.0 / (12 * params.mass * params.beta)
    rep = expectation_report(max_localization_state(0.0, params).state, params)
    rows = []
    for model in ("KMM", "PP", "WH"):
        r = KINETIC_RATIOS[model]
        rows.append({"quantity": f"kinetic_ml_{model}", "ratio": r, "value": r * unit, "source": "quoted constant"})
    new_lower = rep.mean_p2_lower / (2 * params.mass)
    new_deformed = rep.mean_P2_deformed / (2 * params.mass)
    rows.append({"quantity": "kinetic_ml_new_lower_p", "ratio": new_lower / unit, "value": new_lower,
                 "source": "quadrature <p^2>/2m"})
    rows.append({"quantity": "kinetic_ml_new_deformed_P", "ratio": new_deformed / unit, "value": new_deformed,
                 "source": "quadrature <P^2>/2m"})
    ref = ReferenceConstants.for_params(params)
    rows.append({"quantity": "min_length_KMM", "ratio": None, "value": ref.kmm_min_length,
                 "source": "quoted hbar*sqrt(beta)"})
    rows.append({"quantity": "min_length_PP", "ratio": None, "value": ref.pp_min_length,
                 "source": "quoted (3*sqrt(3)/4)*hbar*sqrt(beta)"})
    rows.append({"quantity": "delta_X_ml_new", "ratio": None, "value": rep.delta_X,
                 "source": "quadrature, expected 2*hbar*sqrt(beta/3)"})
    if adv_alpha is not None:
        adv = ReferenceConstants.adv(adv_alpha, params.hbar)
        rows.append({"quantity": "min_length_ADV", "ratio": None, "value": adv["adv_min_length"],
                     "source": "quoted hbar*alpha"})
        rows.append({"quantity": "max_momentum_ADV", "ratio": None, "value": adv["adv_max_momentum"],
                     "source": "quoted 1/alpha"})
    return rows

