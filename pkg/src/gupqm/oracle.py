"""Finite-difference eigensolver for the deformed oscillator in theta space.

Substituting theta = arcsin(sqrt(beta) p) turns X into i hbar sqrt(beta) d/dtheta
and P into tan(theta)/sqrt(beta), so

    H = -(m omega^2 hbar^2 beta / 2) d^2/dtheta^2 + tan(theta)^2 / (2 m beta)

on (-pi/2, pi/2) with a flat measure. The operator is discretized by
second-order central differences with Dirichlet ends, giving a real symmetric
tridiagonal matrix. Nothing here uses the closed-form spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
import sympy as sp
from scipy import integrate
from scipy.linalg import eigh_tridiagonal

from .params import ModelParameters
from .states import AnalyticState

MIN_GRID_SIZE = 64
# amplitude decay exp(-WKB_DECAY) demanded at a truncated Dirichlet wall
WKB_DECAY = 40.0
TRANSFORM_TOL = 1e-10


class InsufficientGridError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ThetaProblem:
    params: ModelParameters
    grid_size: int
    extent: float
    step: float
    theta: np.ndarray = field(repr=False)
    potential: np.ndarray = field(repr=False)
    kinetic: float = 0.0

    @property
    def diagonal(self) -> np.ndarray:
        return 2 * self.kinetic / self.step**2 + self.potential

    @property
    def off_diagonal(self) -> np.ndarray:
        return np.full(self.grid_size - 1, -self.kinetic / self.step**2)

    def apply(self, vec) -> np.ndarray:
        """Discrete H applied to values on the interior nodes."""
        v = np.asarray(vec)
        out = self.diagonal * v
        off = -self.kinetic / self.step**2
        out[:-1] += off * v[1:]
        out[1:] += off * v[:-1]
        return out


@dataclass(frozen=True, eq=False)
class OracleSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)
    grid_size: int = 0
    step: float = 0.0
    theta: np.ndarray = field(default=None, repr=False)
    extrapolated: np.ndarray | None = None
    error_estimate: np.ndarray | None = None
    method: str = "raw"

    @property
    def best(self) -> np.ndarray:
        return self.eigenvalues if self.extrapolated is None else self.extrapolated


def theta_potential(theta, params: ModelParameters):
    return np.tan(theta) ** 2 / (2 * params.mass * params.beta)


def kinetic_coefficient(params: ModelParameters) -> float:
    return params.mass * params.omega**2 * params.hbar**2 * params.beta / 2


@lru_cache(maxsize=1)
def _transform_pair():
    """Lambdified p-form and theta-form Hamiltonians applied to a fixed probe."""
    th, b, m, w, hb = sp.symbols("theta beta m omega hbar", positive=True)
    p = sp.Symbol("p", real=True)
    probe = lambda t: sp.cos(t) ** 3 * sp.exp(sp.sin(t) / 2) * (1 + sp.sin(t) / 3)  # noqa: E731
    psi_p = probe(sp.asin(sp.sqrt(b) * p))
    p_form = (-(m * w**2 * hb**2 / 2) * ((1 - b * p**2) * sp.diff(psi_p, p, 2) - b * p * sp.diff(psi_p, p))
              + p**2 / (2 * m * (1 - b * p**2)) * psi_p)
    phi = probe(th)
    theta_form = -(m * w**2 * hb**2 * b / 2) * sp.diff(phi, th, 2) + sp.tan(th) ** 2 / (2 * m * b) * phi
    args = (b, m, w, hb)
    return sp.lambdify((p, *args), p_form, "numpy"), sp.lambdify((th, *args), theta_form, "numpy")


def transform_defect(params: ModelParameters, probes=None) -> float:
    """Relative mismatch between the momentum-space and theta-space Hamiltonians.

    Both are applied symbolically to the same probe function and compared at
    interior probe angles.
    """
    params.require_deformed()
    if probes is None:
        probes = np.linspace(-1.3, 1.3, 9)
    probes = np.asarray(probes, dtype=float)
    f_p, f_th = _transform_pair()
    args = (params.beta, params.mass, params.omega, params.hbar)
    lhs = f_p(np.sin(probes) / params.sqrt_beta, *args)
    rhs = f_th(probes, *args)
    return float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)))


def confinement_extent(params: ModelParameters, energy: float, decay: float = WKB_DECAY) -> float:
    """Half-width of a Dirichlet box that loses nothing at ``energy``.

    Returns the angle past the classical turning point where the WKB
    amplitude has dropped by ``exp(-decay)``, or pi/2 when that point is
    within 1e-3 (relative) of the true wall.
    """
    kin = kinetic_coefficient(params)
    turning = math.atan(math.sqrt(2 * params.mass * params.beta * energy))
    gap = math.pi / 2 - turning
    # geometric clustering at both the turning point and the wall
    s = np.geomspace(1e-10, 1.0, 4001)
    th = np.unique(np.concatenate([turning + gap * s, math.pi / 2 - gap * s * (1 - 1e-12)]))
    th = th[th < math.pi / 2]
    kappa = np.sqrt(np.maximum(theta_potential(th, params) - energy, 0.0) / kin)
    accum = integrate.cumulative_trapezoid(kappa, th, initial=0.0)
    hit = np.nonzero(accum >= decay)[0]
    if not hit.size:
        return math.pi / 2
    extent = float(th[hit[0]])
    if math.pi / 2 - extent < 1e-3 * math.pi / 2:
        return math.pi / 2
    return extent


def build_theta_problem(params: ModelParameters, grid_size: int, extent: float = math.pi / 2,
                        check_transform: bool = True) -> ThetaProblem:
    """Assemble the tridiagonal theta-space Hamiltonian on ``grid_size`` interior nodes.

    Nodes are uniform with spacing h = 2 extent / (grid_size + 1), so the
    outermost ones sit at +/-(extent - h) and the potential stays finite.
    ``extent`` below pi/2 truncates the box where the wall already confines
    the states (see :func:`confinement_extent`).
    """
    if int(grid_size) != grid_size or grid_size < MIN_GRID_SIZE:
        raise InsufficientGridError(f"insufficient grid: need grid_size >= {MIN_GRID_SIZE}, got {grid_size!r}")
    if not 0 < extent <= math.pi / 2:
        raise ValueError(f"extent must lie in (0, pi/2], got {extent!r}")
    params.require_deformed()
    if check_transform:
        defect = transform_defect(params)
        if defect > TRANSFORM_TOL:
            raise ArithmeticError(f"theta transform does not reproduce the momentum equation ({defect:.2e})")
    grid_size = int(grid_size)
    h = 2 * extent / (grid_size + 1)
    theta = -extent + h * np.arange(1, grid_size + 1)
    return ThetaProblem(params, grid_size, extent, h, theta, theta_potential(theta, params),
                        kinetic_coefficient(params))


def solve_spectrum(problem: ThetaProblem, k_levels: int) -> OracleSpectrum:
    """Lowest ``k_levels`` eigenpairs, eigenvectors unit-normalized in the flat theta norm."""
    if k_levels < 1 or k_levels > problem.grid_size // 10:
        raise ValueError(f"k_levels must lie in [1, grid_size/10], got {k_levels}")
    vals, vecs = eigh_tridiagonal(problem.diagonal, problem.off_diagonal, select="i",
                                  select_range=(0, k_levels - 1))
    vecs = vecs / math.sqrt(problem.step)
    for j in range(vecs.shape[1]):
        lead = np.nonzero(np.abs(vecs[:, j]) > 1e-3 * np.max(np.abs(vecs[:, j])))[0][0]
        if vecs[lead, j] < 0:
            vecs[:, j] = -vecs[:, j]
    if np.any(np.diff(vals) <= 0):
        raise ArithmeticError("oracle eigenvalues are not strictly increasing")
    return OracleSpectrum(vals, vecs, problem.grid_size, problem.step, problem.theta)


def richardson_extrapolate(coarse: OracleSpectrum, fine: OracleSpectrum) -> OracleSpectrum:
    """Cancel the h^2 error term level by level.

    Returns ``fine`` with ``extrapolated`` and ``error_estimate`` filled in;
    the estimate is |E_fine - E_coarse| / (r^2 - 1) with r = h_coarse/h_fine
    (about 3 for a doubled grid).
    """
    k = min(coarse.eigenvalues.size, fine.eigenvalues.size)
    r2 = (coarse.step / fine.step) ** 2
    if r2 <= 1:
        raise ValueError("fine spectrum must use a smaller step than the coarse one")
    e_c, e_f = coarse.eigenvalues[:k], fine.eigenvalues[:k]
    extrap = (r2 * e_f - e_c) / (r2 - 1)
    err = np.abs(e_f - e_c) / (r2 - 1)
    return replace(fine, extrapolated=extrap, error_estimate=err, method="richardson")


def wall_exponent(params: ModelParameters) -> float:
    """Order 2 nu - 1 of the error term contributed by the singular walls.

    Near theta = +/- pi/2 the potential behaves like 1/(2 m beta s^2), so
    eigenfunctions vanish like s^nu with nu (nu - 1) = 1/g^2. The resulting
    finite-difference error term is O(h^(2 nu - 1)); when that is close to
    2, two-grid Richardson extrapolation stalls.
    """
    nu = 0.5 + math.sqrt(0.25 + 1.0 / params.g**2)
    return 2 * nu - 1


def wall_corrected_extrapolate(spectra: list[OracleSpectrum], exponent: float) -> OracleSpectrum:
    """Eliminate both the h^2 term and the h^exponent wall term using three grids."""
    if len(spectra) != 3:
        raise ValueError("wall correction needs exactly three grids")
    k = min(s.eigenvalues.size for s in spectra)
    # scale h by the coarsest step to keep the 3x3 system well conditioned
    h0 = spectra[0].step
    design = np.array([[1.0, (s.step / h0) ** 2, (s.step / h0) ** exponent] for s in spectra])
    values = np.array([s.eigenvalues[:k] for s in spectra])
    extrap = np.linalg.solve(design, values)[0]
    plain = richardson_extrapolate(spectra[1], spectra[2]).extrapolated
    return replace(spectra[2], extrapolated=extrap, error_estimate=np.abs(extrap - plain),
                   method="wall-corrected")


def auto_extent(params: ModelParameters, k_levels: int, passes: int = 3) -> float:
    """Box half-width for the lowest ``k_levels`` states.

    Starts from twice the undeformed energy of the top level and refines with
    the oracle's own coarse eigenvalue until the extent stops moving.
    """
    energy = 2 * (k_levels - 0.5) * params.hbar * params.omega
    extent = confinement_extent(params, energy)
    for _ in range(passes):
        coarse = solve_spectrum(build_theta_problem(params, 40 * k_levels, extent, check_transform=False), k_levels)
        # a box that is too tight raises the coarse levels, which widens the next box
        new = confinement_extent(params, 1.5 * coarse.eigenvalues[-1])
        if abs(new - extent) <= 1e-3 * extent:
            return new
        extent = new
    return extent


def oracle_levels(params: ModelParameters, k_levels: int, grid_size: int = 1024,
                  extent: float | None = None, wall_correction: bool | None = None) -> OracleSpectrum:
    """Extrapolated lowest levels from grids of ``grid_size`` and ``2 * grid_size``.

    ``wall_correction`` adds a ``4 * grid_size`` grid and removes the wall
    term as well (see :func:`wall_exponent`). By default it is used only
    when the box reaches the walls and the wall order is below 3.
    """
    if grid_size < MIN_GRID_SIZE:
        raise InsufficientGridError(f"insufficient grid: need grid_size >= {MIN_GRID_SIZE}, got {grid_size!r}")
    if extent is None:
        extent = auto_extent(params, k_levels)
    exponent = wall_exponent(params)
    if wall_correction is None:
        wall_correction = extent >= math.pi / 2 and exponent < 3.0
    coarse = solve_spectrum(build_theta_problem(params, grid_size, extent), k_levels)
    fine = solve_spectrum(build_theta_problem(params, 2 * grid_size, extent, check_transform=False), k_levels)
    if not wall_correction:
        return richardson_extrapolate(coarse, fine)
    finest = solve_spectrum(build_theta_problem(params, 4 * grid_size, extent, check_transform=False), k_levels)
    return wall_corrected_extrapolate([coarse, fine, finest], exponent)


def transplant(state: AnalyticState, theta, params: ModelParameters) -> np.ndarray:
    """Momentum-space state evaluated at p = sin(theta)/sqrt(beta), scaled by beta^(-1/4)

    so that flat theta norms equal weighted momentum norms.
    """
    return state.value(np.sin(theta) / params.sqrt_beta) * params.beta ** -0.25


def theta_inner_product(a: AnalyticState, b: AnalyticState, params: ModelParameters) -> complex:
    """Flat-measure integral of conj(a) b over theta, by adaptive quadrature (no rescaling)."""
    sb = params.sqrt_beta

    def integrand(t, part):
        p = np.array([math.sin(t) / sb])
        v = np.conj(a.value(p)[0]) * b.value(p)[0]
        return v.real if part == 0 else v.imag

    lim = math.pi / 2
    re = integrate.quad(integrand, -lim, lim, args=(0,), epsabs=1e-14, epsrel=1e-13, limit=200)[0]
    im = integrate.quad(integrand, -lim, lim, args=(1,), epsabs=1e-14, epsrel=1e-13, limit=200)[0]
    return complex(re, im)


def compare_eigenvector(oracle_vec, analytic: AnalyticState, params: ModelParameters, theta, step: float) -> float:
    """Flat-theta L2 distance after unit-normalizing both and aligning the global phase."""
    v = np.asarray(oracle_vec, dtype=complex)
    a = transplant(analytic, theta, params)
    v = v / math.sqrt(step * np.sum(np.abs(v) ** 2))
    a = a / math.sqrt(step * np.sum(np.abs(a) ** 2))
    overlap = step * np.sum(np.conj(a) * v)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(math.sqrt(step * np.sum(np.abs(v - phase * a) ** 2)))


def convergence_study(params: ModelParameters, sizes, level: int = 0, extent: float = math.pi / 2) -> dict:
    """Discrete eigenvalue of one level on successively refined grids.

    Reports whether the sequence is monotone and in which direction; the
    direction is observed, not assumed.
    """
    values = np.array([solve_spectrum(build_theta_problem(params, m, extent), level + 1).eigenvalues[level]
                       for m in sizes])
    steps = np.diff(values)
    if np.all(steps > 0):
        direction = "increasing"
    elif np.all(steps < 0):
        direction = "decreasing"
    else:
        direction = "non-monotone"
    return {"sizes": list(sizes), "values": values, "direction": direction}
