"""Exact solution of the deformed harmonic oscillator.

With t = (1 - sqrt(beta) p)/2 and psi = (t - t^2)^alpha f(t), the
Schroedinger equation becomes a hypergeometric-type equation for f. Its
degree-n polynomial solutions fix the spectrum, and their roots obey the
Bethe ansatz equations

    sum_{j != i} 2/(t_i - t_j) + (1 + 4 alpha - (2 + 8 alpha) t_i) / (2 (t_i - t_i^2)) = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq

from .algebra import apply_P, apply_X, build_grid, normalized
from .params import ModelParameters
from .states import AnalyticState, envelope_state, polynomial_state

ENERGY_IDENTITY_RTOL = 1e-12


class BetheConvergenceError(RuntimeError):
    def __init__(self, message, roots=None, residuals=None):
        super().__init__(message)
        self.roots = roots
        self.residuals = residuals


@dataclass(frozen=True)
class AlphaExponent:
    alpha: float
    g: float


@dataclass(frozen=True)
class SpectrumRow:
    n: int
    energy: float
    beta: float
    mass: float
    omega: float
    hbar: float


@dataclass(frozen=True)
class BetheRootSet:
    n: int
    roots: np.ndarray
    residuals: np.ndarray
    alpha: float
    iterations: int = 0

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residuals))) if self.n else 0.0

    @property
    def symmetry_defect(self) -> float:
        """max |t_i - (1 - t_{n+1-i})| over the sorted roots."""
        if not self.n:
            return 0.0
        return float(np.max(np.abs(self.roots - (1.0 - self.roots[::-1]))))


def alpha_exponent(params: ModelParameters) -> AlphaExponent:
    """Boundary exponent alpha = 1/4 + sqrt(g^2 + 4)/(4 g), g = beta m omega hbar."""
    params.require_deformed()
    g = params.g
    return AlphaExponent(alpha=0.25 + math.sqrt(g * g + 4) / (4 * g), g=g)


def _closed_form_energy(n, params):
    g = params.g
    return ((n + 0.5) * params.hbar * params.omega * math.sqrt(1 + g * g / 4)
            + (n * n + n + 0.5) * params.beta * params.mass * params.omega**2 * params.hbar**2 / 2)


def energy_level(n: int, params: ModelParameters) -> SpectrumRow:
    """Closed-form level E_n, checked against the polynomial termination condition

    (2 beta m E + 1) / g^2 = (2 alpha + n)^2.
    """
    if int(n) != n or n < 0:
        raise ValueError(f"level index must be a non-negative integer, got {n!r}")
    n = int(n)
    a = alpha_exponent(params)
    energy = _closed_form_energy(n, params)
    lhs = (2 * params.beta * params.mass * energy + 1) / a.g**2
    rhs = (2 * a.alpha + n) ** 2
    if abs(lhs - rhs) > ENERGY_IDENTITY_RTOL * rhs:
        raise ArithmeticError(f"E_{n}: closed form and termination condition disagree ({lhs!r} vs {rhs!r})")
    return SpectrumRow(n, energy, params.beta, params.mass, params.omega, params.hbar)


def energy_classical_limit(n: int, params: ModelParameters) -> float:
    """Undeformed spectrum (n + 1/2) hbar omega; any beta (including 0) accepted."""
    if int(n) != n or n < 0:
        raise ValueError(f"level index must be a non-negative integer, got {n!r}")
    return (n + 0.5) * params.hbar * params.omega


# -- Bethe ansatz ------------------------------------------------------------


def bethe_residuals(roots, alpha: float, denominator: str = "corrected") -> np.ndarray:
    """Left-hand sides of the Bethe equations at ``roots``.

    ``denominator="printed"`` uses 2 (t + t^2) in place of 2 (t - t^2); it is
    kept only to show that both forms agree on the n = 1 root.
    """
    t = np.asarray(roots, dtype=float)
    diff = t[:, None] - t[None, :]
    np.fill_diagonal(diff, np.inf)
    pair = np.sum(2.0 / diff, axis=1)
    if denominator == "corrected":
        den = 2 * (t - t * t)
    elif denominator == "printed":
        den = 2 * (t + t * t)
    else:
        raise ValueError(f"unknown denominator form {denominator!r}")
    return pair + (1 + 4 * alpha - (2 + 8 * alpha) * t) / den


def _bethe_jacobian(t, alpha):
    diff = t[:, None] - t[None, :]
    np.fill_diagonal(diff, np.inf)
    off = 2.0 / diff**2
    jac = off.copy()
    a = 1 + 4 * alpha
    q = t - t * t
    # d/dt [a (1 - 2t) / (2 q)]
    single = (-2 * a * q - a * (1 - 2 * t) ** 2) / (2 * q * q)
    np.fill_diagonal(jac, -off.sum(axis=1) + single)
    return jac


def bethe_solve(n: int, params: ModelParameters, tol: float = 1e-12, max_iter: int = 200) -> BetheRootSet:
    """Roots t_i in (0, 1) of the Bethe equations by damped Newton iteration.

    Starts from Chebyshev points in (0.1, 0.9) and iterates until the Newton
    step reaches roundoff. Raises :class:`BetheConvergenceError` (carrying
    the last iterate) if the max residual is then not below
    ``tol * max(1, alpha)``; the single-root term grows like alpha, so for
    small g an absolute tolerance would sit below roundoff.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"degree must be a positive integer, got {n!r}")
    n = int(n)
    alpha = alpha_exponent(params).alpha
    k = np.arange(1, n + 1)
    t = np.sort(0.5 - 0.4 * np.cos((2 * k - 1) * np.pi / (2 * n)))
    res = bethe_residuals(t, alpha)
    it = 0
    for it in range(1, max_iter + 1):
        step = np.linalg.solve(_bethe_jacobian(t, alpha), -res)
        lam = 1.0
        current = np.max(np.abs(res))
        while True:
            trial = t + lam * step
            ok = np.all((trial > 0) & (trial < 1)) and np.all(np.diff(trial) > 0)
            if ok:
                trial_res = bethe_residuals(trial, alpha)
                if np.max(np.abs(trial_res)) < current or lam < 1e-3:
                    break
            lam *= 0.5
            if lam < 1e-10:
                raise BetheConvergenceError("damped Newton stalled", t, res)
        t, res = trial, trial_res
        # run to the roundoff floor, then judge the residual against tol
        if np.max(np.abs(lam * step)) < 1e-15 or np.max(np.abs(res)) < 1e-15:
            break
    if np.max(np.abs(res)) >= tol * max(1.0, alpha):
        raise BetheConvergenceError(
            f"Bethe solve for n={n} did not converge (max residual {np.max(np.abs(res)):.3e})", t, res
        )
    return BetheRootSet(n, t, res, alpha, it)


def gegenbauer(n: int, mu: float, x):
    """C_n^(mu)(x) by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 2 * mu * x
    for k in range(2, n + 1):
        prev, cur = cur, (2 * x * (k + mu - 1) * cur - (k + 2 * mu - 2) * prev) / k
    return cur


def polynomial_oracle_roots(n: int, params: ModelParameters) -> BetheRootSet:
    """Roots of the degree-n polynomial solution, found without the Bethe equations.

    The polynomial is the ultraspherical C_n^(2 alpha)(x) in x = 1 - 2t. Its
    roots are bracketed by interlacing with the degree n-1 roots and refined
    by Brent's method.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"degree must be a positive integer, got {n!r}")
    alpha = alpha_exponent(params).alpha
    mu = 2 * alpha
    xroots = np.array([])
    for deg in range(1, int(n) + 1):
        edges = np.concatenate([[-1.0], xroots, [1.0]])
        new = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            f_lo, f_hi = gegenbauer(deg, mu, lo), gegenbauer(deg, mu, hi)
            if f_lo == 0.0:
                new.append(lo)
                continue
            if np.sign(f_lo) == np.sign(f_hi):
                raise ArithmeticError(f"root bracketing failed at degree {deg} on [{lo}, {hi}]")
            new.append(brentq(lambda x: gegenbauer(deg, mu, x), lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps,
                              maxiter=500))
        xroots = np.array(new)
    t = np.sort((1.0 - xroots) / 2.0)
    return BetheRootSet(int(n), t, bethe_residuals(t, alpha), alpha)


# -- wavefunctions -----------------------------------------------------------


def quadrature_size(n: int, params: ModelParameters, minimum: int = 2048) -> int:
    """Chebyshev grid size that resolves psi_n.

    In theta the envelope cos(theta)^(2 alpha) has width ~ 1/sqrt(alpha), so
    the node count grows like sqrt(alpha + n) once alpha is large.
    """
    need = 20 * math.pi * math.sqrt(alpha_exponent(params).alpha + n)
    return max(minimum, 1 << math.ceil(math.log2(need)))


def oscillator_wavefunction(n: int, roots: BetheRootSet | None, params: ModelParameters,
                            grid_size: int | None = None) -> AnalyticState:
    """Normalized eigenfunction (1 - beta p^2)^alpha prod_i (1/2 - sqrt(beta) p/2 - t_i).

    The constant 4^-alpha of the t-variable form is dropped because it
    underflows for small g. Normalization is by quadrature; the global sign makes psi(0) > 0, or
    psi'(0) > 0 when psi(0) vanishes.
    """
    a = alpha_exponent(params)
    if n == 0:
        poly_coeffs = [1.0]
    else:
        if roots is None or roots.n != n:
            raise ValueError(f"need a root set of degree {n}")
        sb = params.sqrt_beta
        p_roots = (1.0 - 2.0 * roots.roots) / sb
        poly_coeffs = (Polynomial.fromroots(p_roots) * (-sb / 2) ** n).coef
    raw = polynomial_state(poly_coeffs) * envelope_state(params.beta, a.alpha)
    state, _ = normalized(raw, build_grid(params, grid_size or quadrature_size(n, params)))
    jet0 = state.jet(np.array([0.0]))[:, 0].real
    sign = np.sign(jet0[0]) if abs(jet0[0]) > 1e-14 * np.max(np.abs(jet0)) else np.sign(jet0[1])
    return state.scaled(float(sign) if sign else 1.0, f"psi_{n}")


def hamiltonian(state: AnalyticState, params: ModelParameters) -> AnalyticState:
    """H psi = P^2 psi / 2m + m omega^2 X^2 psi / 2 (needs an order-2 jet)."""
    kinetic = apply_P(apply_P(state, params), params).scaled(1 / (2 * params.mass))
    potential = apply_X(apply_X(state, params), params).scaled(params.mass * params.omega**2 / 2)
    return kinetic + potential


def hamiltonian_residual(n: int, params: ModelParameters, grid_size: int | None = None) -> float:
    """||H psi_n - E_n psi_n|| / E_n with the weighted quadrature norm."""
    grid_size = grid_size or quadrature_size(n, params)
    roots = bethe_solve(n, params) if n else None
    psi = oscillator_wavefunction(n, roots, params, grid_size)
    energy = energy_level(n, params).energy
    grid = build_grid(params, grid_size)
    r = hamiltonian(psi, params).value(grid.nodes) - energy * psi.value(grid.nodes)
    return math.sqrt(float(grid.integrate(np.abs(r) ** 2))) / energy
