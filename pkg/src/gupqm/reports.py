"""Tables behind the command-line front end.

Every number here comes from a closed form, a quadrature or the oracle;
the front end only formats what these functions return.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import algebra, eigenstates, oracle, oscillator
from .params import ModelParameters
from .verification import run_all


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    footer: list[list] = field(default_factory=list)  # [beta, key, value]
    ok: bool = True
    message: str = ""


def verify_table(params_list: list[ModelParameters], n_max: int, grid_size: int) -> Table:
    table = Table(["beta", "suite", "check", "measured", "comparison", "tolerance", "status", "value", "provenance"])
    for params in params_list:
        for c in run_all(params, n_max, grid_size):
            table.rows.append([params.beta, c.suite, c.name, c.measured, c.comparison, c.tolerance,
                               "pass" if c.passed else "FAIL", c.value, c.provenance])
            if not c.passed and table.ok:
                table.ok = False
                table.message = f"first failing check: {c.suite}.{c.name} (beta={params.beta!r}): {c.provenance}"
    return table


def overlap_table(params_list: list[ModelParameters], lambda_min: float, lambda_max: float, steps: int) -> Table:
    """Overlap <psi_lam | psi_0> against x = lam, in absolute position units."""
    if steps < 2:
        raise ValueError("steps must be >= 2")
    table = Table(["beta", "x", "y_closed_form", "y_quadrature", "abs_diff"])
    x = np.linspace(lambda_min, lambda_max, steps)
    for params in params_list:
        curve = eigenstates.overlap_curve(x, params, with_kmm=False)
        for i in range(steps):
            table.rows.append([params.beta, curve["x"][i], curve["y_closed_form"][i], curve["y_quadrature"][i],
                               curve["abs_diff"][i]])
    return table


def spectrum_table(params_list: list[ModelParameters], n_max: int, grid_size: int) -> Table:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    table = Table(["n", "beta", "E_closed_form", "E_oracle", "rel_diff"])
    cells = {}
    for params in params_list:
        spec = oracle.oracle_levels(params, n_max + 1, grid_size)
        for n in range(n_max + 1):
            exact = oscillator.energy_level(n, params).energy
            cells[(n, params.beta)] = [n, params.beta, exact, spec.extrapolated[n],
                                       abs(spec.extrapolated[n] - exact) / exact]
    # grouped by level, then by beta, so a fixed-n slice reads down the page
    table.rows = [cells[k] for k in sorted(cells)]
    return table


def bethe_table(params_list: list[ModelParameters], n: int) -> Table:
    if not 1 <= n <= 12:
        raise ValueError("n must lie in 1..12")
    table = Table(["beta", "i", "t_i", "residual", "oracle_root", "abs_diff"])
    for params in params_list:
        reference = oscillator.polynomial_oracle_roots(n, params).roots
        try:
            result = oscillator.bethe_solve(n, params)
            roots, residuals = result.roots, result.residuals
        except oscillator.BetheConvergenceError as exc:
            roots, residuals = exc.roots, exc.residuals
            table.ok = False
            table.message = f"Bethe solve did not converge for n={n}, beta={params.beta!r}: {exc}"
        for i in range(n):
            table.rows.append([params.beta, i + 1, roots[i], residuals[i], reference[i],
                               abs(roots[i] - reference[i])])
        if not table.ok:
            break
    return table


def mlstate_table(params_list: list[ModelParameters], xi: float, samples: int) -> Table:
    if samples < 16:
        raise ValueError("samples must be >= 16")
    table = Table(["beta", "p", "re_psi", "im_psi", "abs_psi2"])
    for params in params_list:
        ml = eigenstates.max_localization_state(xi, params)
        # cell midpoints: the state is only defined on the open interval
        p = params.p_max * (-1 + (2 * np.arange(samples) + 1) / samples)
        psi = ml.state.value(p)
        for k in range(samples):
            table.rows.append([params.beta, p[k], psi[k].real, psi[k].imag, abs(psi[k]) ** 2])
        rep = algebra.expectation_report(ml.state, params)
        ref = eigenstates.ReferenceConstants.for_params(params)
        m = params.mass
        for key, value in (
            ("norm", rep.norm_factor),
            ("mean_X", rep.mean_X),
            ("delta_X_quadrature", rep.delta_X),
            ("delta_X_closed_form_2hbar_sqrt(beta/3)", 2 * params.hbar * math.sqrt(params.beta / 3)),
            ("reference_min_length_(3sqrt3/4)hbar_sqrt(beta)", ref.pp_min_length),
            ("mean_p2_lower/2m", rep.mean_p2_lower / (2 * m)),
            ("mean_P2_deformed/2m", rep.mean_P2_deformed / (2 * m)),
        ):
            table.footer.append([params.beta, key, value])
    return table
