"""Model parameters shared by every module."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ModelParameters:
    """Deformation strength and physical constants.

    Parameters
    ----------
    beta : float
        Deformation strength in units of 1/momentum^2. ``beta == 0`` is
        accepted only by operations that take the undeformed limit
        analytically; everything else calls :meth:`require_deformed`.
    hbar, mass, omega : float
        Action, mass and oscillator angular frequency. Natural units by
        default.
    """

    beta: float = 0.1
    hbar: float = 1.0
    mass: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        for name in ("beta", "hbar", "mass", "omega"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta!r}")
        for name in ("hbar", "mass", "omega"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)!r}")

    def require_deformed(self) -> None:
        if self.beta <= 0:
            raise ValueError("operation requires beta > 0 (bounded momentum domain)")

    @property
    def p_max(self) -> float:
        """Maximal momentum 1/sqrt(beta)."""
        self.require_deformed()
        return 1.0 / math.sqrt(self.beta)

    @property
    def sqrt_beta(self) -> float:
        return math.sqrt(self.beta)

    @property
    def g(self) -> float:
        """Dimensionless oscillator coupling beta*m*omega*hbar."""
        return self.beta * self.mass * self.omega * self.hbar

    def with_beta(self, beta: float) -> "ModelParameters":
        return ModelParameters(beta=beta, hbar=self.hbar, mass=self.mass, omega=self.omega)
