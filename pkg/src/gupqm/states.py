"""Momentum-space wavefunctions carried as derivative jets.

An :class:`AnalyticState` evaluates to a *jet*: an array of shape
``(order + 1, len(p))`` whose row ``k`` holds the k-th derivative with
respect to ``p``. Operators in :mod:`gupqm.algebra` combine jets by the
product and chain rules, so nothing in the operator path differentiates
numerically.

Elementary building blocks support jets up to order 3.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial

MAX_ORDER = 3

JetFunction = Callable[[np.ndarray], np.ndarray]


def _as_points(p) -> np.ndarray:
    return np.atleast_1d(np.asarray(p, dtype=float))


def leibniz(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Jet of the product of two jets, truncated to the shorter one."""
    order = min(a.shape[0], b.shape[0]) - 1
    out = np.zeros((order + 1, a.shape[1]), dtype=np.result_type(a, b))
    for k in range(order + 1):
        for j in range(k + 1):
            out[k] += comb(k, j) * a[j] * b[k - j]
    return out


def exp_jet(g: np.ndarray) -> np.ndarray:
    """Jet of ``exp(g)`` from the jet of ``g`` (Faa di Bruno, order <= 3)."""
    order = g.shape[0] - 1
    if order > MAX_ORDER:
        raise ValueError(f"exp_jet supports order <= {MAX_ORDER}")
    e = np.exp(g[0])
    out = np.empty_like(g, dtype=np.result_type(g, e))
    out[0] = e
    if order >= 1:
        out[1] = g[1] * e
    if order >= 2:
        out[2] = (g[2] + g[1] ** 2) * e
    if order >= 3:
        out[3] = (g[3] + 3 * g[1] * g[2] + g[1] ** 3) * e
    return out


def polynomial_jet(poly: Polynomial, p: np.ndarray, order: int) -> np.ndarray:
    return np.array([poly.deriv(k)(p) if k else poly(p) for k in range(order + 1)])


def arcsin_jet(p: np.ndarray, beta: float, order: int) -> np.ndarray:
    """Jet of ``theta(p) = arcsin(sqrt(beta) p)``."""
    sb = np.sqrt(beta)
    u = 1.0 - beta * p * p
    s = np.sqrt(u)
    rows = [np.arcsin(sb * p), sb / s, sb * beta * p / (s * u), sb * beta * (1 + 2 * beta * p * p) / (s * u * u)]
    return np.array(rows[: order + 1])


def log_envelope_jet(p: np.ndarray, beta: float, order: int) -> np.ndarray:
    """Jet of ``log(1 - beta p^2)``."""
    u = 1.0 - beta * p * p
    rows = [
        np.log(u),
        -2 * beta * p / u,
        -2 * beta * (1 + beta * p * p) / u**2,
        -4 * beta**2 * p * (3 + beta * p * p) / u**3,
    ]
    return np.array(rows[: order + 1])


@dataclass(frozen=True)
class AnalyticState:
    """A complex wavefunction psi(p) with exact derivatives up to ``order``.

    ``jet_fn(p)`` must return an array of shape ``(order + 1, len(p))``.
    """

    jet_fn: JetFunction = field(repr=False)
    order: int = 2
    label: str = ""

    def jet(self, p) -> np.ndarray:
        p = _as_points(p)
        out = np.asarray(self.jet_fn(p), dtype=complex)
        if out.shape != (self.order + 1, p.size):
            raise RuntimeError(f"jet of {self.label or 'state'} has shape {out.shape}")
        return out

    def value(self, p) -> np.ndarray:
        return self.jet(p)[0]

    def d1(self, p) -> np.ndarray:
        return self._row(p, 1)

    def d2(self, p) -> np.ndarray:
        return self._row(p, 2)

    def _row(self, p, k):
        if self.order < k:
            raise ValueError(f"state carries an order-{self.order} jet; derivative {k} unavailable")
        return self.jet(p)[k]

    def scaled(self, factor: complex, label: str | None = None) -> "AnalyticState":
        fn = self.jet_fn
        return AnalyticState(lambda p: factor * np.asarray(fn(p)), self.order, label or self.label)

    def truncated(self, order: int) -> "AnalyticState":
        if order > self.order:
            raise ValueError("cannot raise jet order by truncation")
        fn = self.jet_fn
        return AnalyticState(lambda p: np.asarray(fn(p))[: order + 1], order, self.label)

    def __mul__(self, other: "AnalyticState") -> "AnalyticState":
        if not isinstance(other, AnalyticState):
            return NotImplemented
        f, g = self.jet_fn, other.jet_fn
        order = min(self.order, other.order)
        return AnalyticState(
            lambda p: leibniz(np.asarray(f(p))[: order + 1], np.asarray(g(p))[: order + 1]),
            order,
            f"{self.label}*{other.label}",
        )

    def __add__(self, other: "AnalyticState") -> "AnalyticState":
        if not isinstance(other, AnalyticState):
            return NotImplemented
        f, g = self.jet_fn, other.jet_fn
        order = min(self.order, other.order)
        return AnalyticState(
            lambda p: np.asarray(f(p))[: order + 1] + np.asarray(g(p))[: order + 1],
            order,
            f"{self.label}+{other.label}",
        )

    def __sub__(self, other: "AnalyticState") -> "AnalyticState":
        return self + other.scaled(-1.0)


@dataclass(frozen=True)
class SampledState:
    """Complex amplitudes on the nodes of a :class:`~gupqm.algebra.ChebyshevGrid`."""

    grid: "ChebyshevGrid"  # noqa: F821
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.size,):
            raise ValueError(f"expected {self.grid.size} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("sampled values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


# -- elementary states -------------------------------------------------------


def constant_state(c: complex = 1.0, order: int = 2) -> AnalyticState:
    def fn(p):
        out = np.zeros((order + 1, p.size), dtype=complex)
        out[0] = c
        return out

    return AnalyticState(fn, order, "const")


def polynomial_state(coeffs, order: int = 2) -> AnalyticState:
    """psi(p) = sum_k coeffs[k] p^k."""
    poly = Polynomial(np.asarray(coeffs, dtype=complex))
    return AnalyticState(lambda p: polynomial_jet(poly, p, order), order, f"poly{len(poly.coef) - 1}")


def envelope_state(beta: float, power: float, order: int = 2) -> AnalyticState:
    """psi(p) = (1 - beta p^2)^power."""
    return AnalyticState(
        lambda p: exp_jet(power * log_envelope_jet(p, beta, order)), order, f"env^{power:g}"
    )


def arcsin_phase_state(beta: float, coefficient: complex, order: int = 2) -> AnalyticState:
    """psi(p) = exp(coefficient * arcsin(sqrt(beta) p))."""
    return AnalyticState(
        lambda p: exp_jet(coefficient * arcsin_jet(p, beta, order)), order, "arcsin-phase"
    )


def gaussian_state(width: float = 1.0, center: float = 0.0, order: int = 2) -> AnalyticState:
    """psi(p) = exp(-(p - center)^2 / width^2)."""
    a = 1.0 / width**2

    def fn(p):
        q = p - center
        g = np.array([-a * q * q, -2 * a * q, np.full_like(q, -2 * a), np.zeros_like(q)])
        return exp_jet(g[: order + 1])

    return AnalyticState(fn, order, "gauss")


def enveloped_polynomial(coeffs, beta: float, power: float, order: int = 2) -> AnalyticState:
    """Polynomial times (1 - beta p^2)^power, the workhorse of random baskets."""
    return polynomial_state(coeffs, order) * envelope_state(beta, power, order)


def jet_consistency(state: AnalyticState, probes, step: float = 1e-4) -> float:
    """Largest relative mismatch between the jet rows and central differences.

    Validation helper only. Compares ``d1`` and ``d2`` of ``state`` with
    second-order central differences of ``value``.
    """
    probes = _as_points(probes)
    jet = state.jet(probes)
    f = lambda x: state.value(x)  # noqa: E731
    fd1 = (f(probes + step) - f(probes - step)) / (2 * step)
    fd2 = (f(probes + step) - 2 * f(probes) + f(probes - step)) / step**2
    worst = 0.0
    for fd, k in ((fd1, 1), (fd2, 2)):
        if state.order < k:
            break
        scale = np.maximum(np.abs(jet[k]), np.max(np.abs(jet[: k + 1])))
        worst = max(worst, float(np.max(np.abs(fd - jet[k]) / scale)))
    return worst
