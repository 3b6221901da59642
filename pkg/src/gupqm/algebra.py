"""Deformed position/momentum operators on the bounded momentum interval.

In the momentum representation the operators act as

    P psi(p) = p / sqrt(1 - beta p^2) * psi(p)
    X psi(p) = i hbar sqrt(1 - beta p^2) * psi'(p)

on (-1/sqrt(beta), 1/sqrt(beta)), with the scalar product weighted by
1/sqrt(1 - beta p^2). Under theta = arcsin(sqrt(beta) p) that weight is flat,
so first-kind Gauss-Chebyshev quadrature is the midpoint rule in theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import ModelParameters
from .states import AnalyticState, SampledState, leibniz

# ratio between quadratures on N and 2N nodes above which an integral is
# treated as non-integrable at the boundary (divergent sums grow ~N)
DIVERGENCE_RATIO = 1.5


class InvariantViolation(RuntimeError):
    """A documented invariant failed to hold on computed data."""


@dataclass(frozen=True, eq=False)
class ChebyshevGrid:
    """Quadrature nodes and weights for the measure dp / sqrt(1 - beta p^2)."""

    size: int
    beta: float
    nodes: np.ndarray
    weights: np.ndarray
    theta: np.ndarray

    def integrate(self, values) -> complex | float:
        return np.sum(self.weights * np.asarray(values))

    def same_as(self, other: "ChebyshevGrid") -> bool:
        return self.size == other.size and self.beta == other.beta


def build_grid(params: ModelParameters, size: int) -> ChebyshevGrid:
    """First-kind Gauss-Chebyshev nodes mapped to momentum.

    Weighted sums ``grid.integrate(f(grid.nodes))`` approximate
    ``int f(p) dp / sqrt(1 - beta p^2)`` and are exact for polynomials of
    degree up to ``2 * size - 1``.
    """
    if int(size) != size or size < 2:
        raise ValueError(f"grid size must be an integer >= 2, got {size!r}")
    size = int(size)
    params.require_deformed()
    sb = params.sqrt_beta
    # build the upper half and mirror it so nodes pair exactly as +/- p
    k = np.arange(size // 2)
    upper_theta = (size - 1 - 2 * k) * np.pi / (2 * size)
    upper_theta = upper_theta[::-1]
    middle = np.zeros(size % 2)
    theta = np.concatenate([-upper_theta[::-1], middle, upper_theta])
    nodes = np.sin(theta) / sb
    weights = np.full(size, np.pi / (size * sb))
    for arr in (theta, nodes, weights):
        arr.setflags(write=False)
    return ChebyshevGrid(size, params.beta, nodes, weights, theta)


def sample(state: AnalyticState, grid: ChebyshevGrid) -> SampledState:
    return SampledState(grid, state.value(grid.nodes))


# -- operators ---------------------------------------------------------------


def _domain_check(p: np.ndarray, params: ModelParameters) -> None:
    if np.any(params.beta * p * p >= 1.0):
        raise ValueError(f"evaluation outside the open interval |p| < {params.p_max:.17g}")


def _momentum_factor_jet(p, beta, order):
    """Jet of p / sqrt(1 - beta p^2)."""
    u = 1.0 - beta * p * p
    s = np.sqrt(u)
    rows = [p / s, 1.0 / (s * u), 3 * beta * p / (s * u * u), 3 * beta * (1 + 4 * beta * p * p) / (s * u**3)]
    return np.array(rows[: order + 1])


def _position_factor_jet(p, beta, hbar, order):
    """Jet of i hbar sqrt(1 - beta p^2)."""
    u = 1.0 - beta * p * p
    s = np.sqrt(u)
    rows = [s, -beta * p / s, -beta / (s * u), -3 * beta**2 * p / (s * u * u)]
    return 1j * hbar * np.array(rows[: order + 1])


def apply_P(state: AnalyticState, params: ModelParameters) -> AnalyticState:
    """Deformed momentum operator; keeps the jet order of ``state``."""
    params.require_deformed()
    beta, fn, order = params.beta, state.jet_fn, state.order

    def jet(p):
        _domain_check(p, params)
        return leibniz(_momentum_factor_jet(p, beta, order), np.asarray(fn(p)))

    return AnalyticState(jet, order, f"P({state.label})")


def apply_X(state: AnalyticState, params: ModelParameters) -> AnalyticState:
    """Deformed position operator.

    X consumes one derivative, so the result carries a jet one order lower
    than ``state``. An order-0 input raises ``ValueError``.
    """
    params.require_deformed()
    if state.order < 1:
        raise ValueError("X needs the first derivative: jet order insufficient for this composition")
    beta, hbar, fn, order = params.beta, params.hbar, state.jet_fn, state.order - 1

    def jet(p):
        _domain_check(p, params)
        dpsi = np.asarray(fn(p))[1:]
        return leibniz(_position_factor_jet(p, beta, hbar, order), dpsi)

    return AnalyticState(jet, order, f"X({state.label})")


def commutator_state(state: AnalyticState, params: ModelParameters) -> AnalyticState:
    """[X, P] psi built as X(P psi) - P(X psi)."""
    return apply_X(apply_P(state, params), params) - apply_P(apply_X(state, params), params)


def commutator_residual(state: AnalyticState, probes, params: ModelParameters) -> float:
    """Max relative deviation of [X,P]psi from i hbar psi / (1 - beta p^2).

    Where the reference vanishes the absolute deviation is used.
    """
    p = np.atleast_1d(np.asarray(probes, dtype=float))
    _domain_check(p, params)
    lhs = commutator_state(state, params).value(p)
    rhs = 1j * params.hbar * state.value(p) / (1.0 - params.beta * p * p)
    scale = np.abs(rhs)
    scale = np.where(scale > 1e-300, scale, 1.0)
    return float(np.max(np.abs(lhs - rhs) / scale))


# -- scalar products -----------------------------------------------------------


def _values_on(state, grid: ChebyshevGrid | None) -> tuple[np.ndarray, ChebyshevGrid]:
    if isinstance(state, SampledState):
        if grid is not None and not grid.same_as(state.grid):
            raise ValueError("grid mismatch between sampled state and requested grid")
        return state.values, state.grid
    if isinstance(state, AnalyticState):
        if grid is None:
            raise ValueError("an analytic state needs a grid to be sampled on")
        return state.value(grid.nodes), grid
    raise TypeError(f"unsupported state type {type(state).__name__}")


def inner_product(a, b, grid: ChebyshevGrid | None = None) -> complex:
    """<a|b> with the weighted measure; conjugate-linear in ``a``.

    Sampled states must share a grid. Analytic states are sampled on
    ``grid`` (required when neither argument is sampled).
    """
    if grid is None:
        for s in (a, b):
            if isinstance(s, SampledState):
                grid = s.grid
                break
    va, ga = _values_on(a, grid)
    vb, gb = _values_on(b, grid)
    if not ga.same_as(gb):
        raise ValueError("grid mismatch")
    return complex(ga.integrate(np.conj(va) * vb))


def norm(state, grid: ChebyshevGrid | None = None) -> float:
    return math.sqrt(inner_product(state, state, grid).real)


def normalized(state: AnalyticState, grid: ChebyshevGrid) -> tuple[AnalyticState, float]:
    """Return ``state / ||state||`` and the norm that was divided out."""
    n = norm(state, grid)
    if n == 0.0 or not math.isfinite(n):
        raise ValueError("state has zero or non-finite norm")
    return state.scaled(1.0 / n), n


def symmetry_defect_X(a: AnalyticState, b: AnalyticState, params: ModelParameters, grid: ChebyshevGrid) -> float:
    """|<Xa|b> - <a|Xb>|.

    Vanishes (to quadrature accuracy) when ``conj(a) b`` vanishes at both
    ends of the interval; otherwise it equals the magnitude of the
    integration-by-parts boundary term hbar |[conj(a) b]| evaluated at +/- p_max.
    """
    left = inner_product(apply_X(a, params), b, grid)
    right = inner_product(a, apply_X(b, params), grid)
    return abs(left - right)


def symmetry_defect_P(a: AnalyticState, b: AnalyticState, params: ModelParameters, grid: ChebyshevGrid) -> float:
    left = inner_product(apply_P(a, params), b, grid)
    right = inner_product(a, apply_P(b, params), grid)
    return abs(left - right)


# -- expectation values --------------------------------------------------------


@dataclass(frozen=True)
class ExpectationReport:
    """Moments of a normalized state.

    ``mean_p2_lower`` is the undeformed <p^2>; ``mean_P2_deformed`` uses the
    deformed P and is ``inf`` when its integral does not converge at the
    boundary (flat-modulus states). ``robertson_rhs`` is |<[X,P]>|/2.
    """

    mean_X: float
    mean_P: float
    var_X: float
    var_P: float
    mean_p_lower: float
    mean_p2_lower: float
    mean_P2_deformed: float
    mean_inverse_u: float
    robertson_rhs: float
    norm_factor: float
    grid_size: int

    @property
    def delta_X(self) -> float:
        return math.sqrt(self.var_X)

    @property
    def delta_P(self) -> float:
        return math.sqrt(self.var_P)

    @property
    def robertson_margin(self) -> float:
        """sqrt(var_X) sqrt(var_P) - |<[X,P]>|/2 (nan when undefined)."""
        if not (math.isfinite(self.var_P) and math.isfinite(self.robertson_rhs)):
            return math.nan
        return self.delta_X * self.delta_P - self.robertson_rhs

    @property
    def divergent(self) -> bool:
        return not math.isfinite(self.mean_P2_deformed)


def _weighted_mean(grid, weight_values, density):
    return float(np.real(grid.integrate(weight_values * density)))


def _boundary_sensitive(fn, grid, params):
    """Quadrature of ``fn(grid)``; ``inf`` if doubling the grid grows it like N."""
    coarse = fn(grid)
    fine = fn(build_grid(params, 2 * grid.size))
    if abs(coarse) > 0 and abs(fine) / abs(coarse) > DIVERGENCE_RATIO:
        return math.inf
    return coarse


def expectation_report(
    state: AnalyticState,
    params: ModelParameters,
    grid: ChebyshevGrid | None = None,
    size: int = 256,
    robertson_tol: float = 1e-12,
) -> ExpectationReport:
    """Quadrature moments of ``state`` after normalizing it.

    Raises
    ------
    ValueError
        If the state has zero norm.
    InvariantViolation
        If the Robertson bound fails beyond ``robertson_tol``.
    """
    if grid is None:
        grid = build_grid(params, size)
    psi_n, norm_factor = normalized(state, grid)
    beta = params.beta

    def moments(g):
        p = g.nodes
        psi = psi_n.value(p)
        dens = np.abs(psi) ** 2
        return p, psi, dens

    p, psi, dens = moments(grid)
    x_psi = apply_X(psi_n, params).value(p)
    mean_X = float(np.real(grid.integrate(np.conj(psi) * x_psi)))
    var_X = float(grid.integrate(np.abs(x_psi - mean_X * psi) ** 2))
    mean_p = _weighted_mean(grid, p, dens)
    mean_p2 = _weighted_mean(grid, p * p, dens)

    def P_mean(g):
        q, _, d = moments(g)
        return _weighted_mean(g, q / np.sqrt(1 - beta * q * q), d)

    def P2_mean(g):
        q, _, d = moments(g)
        return _weighted_mean(g, q * q / (1 - beta * q * q), d)

    def inv_u_mean(g):
        q, _, d = moments(g)
        return _weighted_mean(g, 1.0 / (1 - beta * q * q), d)

    def commutator_mean(g):
        c = commutator_state(psi_n, params).value(g.nodes)
        return abs(complex(g.integrate(np.conj(psi_n.value(g.nodes)) * c)))

    mean_P = P_mean(grid)
    mean_P2 = _boundary_sensitive(P2_mean, grid, params)
    if math.isfinite(mean_P2):
        # as a norm rather than <P^2> - <P>^2 to avoid cancellation
        var_P = float(grid.integrate(np.abs((p / np.sqrt(1 - beta * p * p) - mean_P) * psi) ** 2))
    else:
        var_P = math.inf
    inv_u = _boundary_sensitive(inv_u_mean, grid, params)
    rhs = _boundary_sensitive(commutator_mean, grid, params) / 2

    report = ExpectationReport(
        mean_X=mean_X,
        mean_P=mean_P,
        var_X=var_X,
        var_P=var_P,
        mean_p_lower=mean_p,
        mean_p2_lower=mean_p2,
        mean_P2_deformed=mean_P2,
        mean_inverse_u=inv_u,
        robertson_rhs=rhs,
        norm_factor=norm_factor,
        grid_size=grid.size,
    )
    margin = report.robertson_margin
    if math.isfinite(margin) and margin < -robertson_tol * max(1.0, rhs):
        raise InvariantViolation(f"Robertson bound violated by {-margin:.3e}")
    return report
