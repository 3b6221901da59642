import math

import numpy as np
import pytest

from gupqm import algebra, eigenstates
from gupqm.eigenstates import (
    KINETIC_RATIOS,
    ReferenceConstants,
    SqueezedStateParams,
    comparison_report,
    lattice_overlap_matrix,
    max_localization_state,
    ml_uncertainty_profile,
    overlap_closed_form,
    overlap_curve,
    overlap_gram,
    overlap_quadrature,
    position_eigenstate,
    squeezed_state,
)
from gupqm.params import ModelParameters
from gupqm.verification import interior_probes


def test_position_eigenstate_examples(unit):
    psi0 = position_eigenstate(0.0, unit).state
    p = np.array([-0.9, 0.0, 0.5])
    assert np.allclose(psi0.value(p), math.sqrt(1 / math.pi), rtol=1e-15)
    psi = position_eigenstate(1.0, unit).state
    assert psi.value([0.0])[0] == pytest.approx(math.sqrt(1 / math.pi), rel=1e-15)


@pytest.mark.parametrize("lam_units", [0.0, 1.0, -1.0, 3.7, -3.7])
def test_eigen_relation(lam_units):
    params = ModelParameters(beta=0.3, hbar=1.3)
    lam = lam_units * params.hbar * params.sqrt_beta
    st = position_eigenstate(lam, params).state
    probes = interior_probes(params)
    defect = np.abs(algebra.apply_X(st, params).value(probes) - lam * st.value(probes))
    assert np.max(defect) < 1e-12 * max(abs(lam), 1.0)


def test_position_eigenstate_norm():
    params = ModelParameters(beta=0.1)
    st = position_eigenstate(2.0, params).state
    assert algebra.norm(st, algebra.build_grid(params, 4096)) == pytest.approx(1.0, abs=1e-10)


def test_overlap_closed_form_examples(unit):
    assert overlap_closed_form(0.3, 0.3, unit) == 1.0
    assert abs(overlap_closed_form(2.0, 0.0, unit)) < 1e-16
    assert overlap_closed_form(1.0, 0.0, unit) == pytest.approx(2 / math.pi, rel=1e-15)
    # the sinc form against the quotient as printed
    d, s = 0.77, 1.0
    printed = 2 * s / (d * math.pi) * math.sin(d * math.pi / (2 * s))
    assert overlap_closed_form(d, 0.0, unit) == pytest.approx(printed, rel=1e-15)


def test_overlap_closed_form_arrays(unit):
    out = overlap_closed_form(np.array([0.0, 2.0, 4.0]), 0.0, unit)
    assert out.shape == (3,) and np.allclose(out, [1, 0, 0], atol=1e-15)


@pytest.mark.parametrize("beta", [0.1, 1.0])
def test_overlap_closed_vs_quadrature_grid(beta):
    params = ModelParameters(beta=beta)
    lams = np.linspace(-3, 3, 21) * params.hbar * params.sqrt_beta
    gram = overlap_gram(lams, params)
    closed = overlap_closed_form(lams[:, None], lams[None, :], params)
    assert np.max(np.abs(gram - closed)) < 1e-10


def test_overlap_quadrature_single_pair(unit):
    assert abs(overlap_quadrature(0.37, 0.0, unit) - overlap_closed_form(0.37, 0.0, unit)) < 1e-10


@pytest.mark.parametrize("offset", [-1.0, -0.5, 0.0, 0.5, 1.0])
def test_lattice_is_orthonormal(offset):
    params = ModelParameters(beta=0.7, hbar=1.1)
    m = lattice_overlap_matrix(range(-5, 6), offset, params)
    assert np.max(np.abs(m - np.eye(11))) < 1e-12


def test_lattice_cross_offset_matches_quadrature(unit):
    m = lattice_overlap_matrix(range(-2, 3), 0.0, unit, other_offset=0.37)
    lam, lam2 = eigenstates.lattice_points([0], 0.0, unit)[0], eigenstates.lattice_points([0], 0.37, unit)[0]
    assert m[2, 2] == pytest.approx(overlap_closed_form(lam, lam2, unit))
    assert abs(m[2, 2] - overlap_quadrature(lam, lam2, unit)) < 1e-10


def test_lattice_offset_bounds(unit):
    with pytest.raises(ValueError):
        eigenstates.lattice_points(range(3), 1.5, unit)


def test_overlap_curve_coincides_with_kmm():
    params = ModelParameters(beta=0.5)
    x = np.linspace(-4, 4, 9) * params.hbar * params.sqrt_beta
    c = overlap_curve(x, params)
    assert np.max(c["abs_diff"]) < 1e-10
    assert np.max(np.abs(c["y_kmm"] - c["y_closed_form"])) < 1e-9


def test_squeezed_state_critical_width_is_ml_shape(unit):
    sp = SqueezedStateParams.create(0.0, 0.0, 1 / math.sqrt(3 * unit.beta), unit)
    assert sp.kappa == pytest.approx(4 / 3)
    assert sp.envelope_power(unit) == pytest.approx(1.0)
    sq = squeezed_state(sp, unit)
    ml = max_localization_state(0.0, unit).state
    p = interior_probes(unit)
    assert np.allclose(sq.value(p), ml.value(p), rtol=1e-12)


@pytest.mark.parametrize("dp", [0.2, 0.5, 1.5])
def test_squeezed_state_centered_is_real_even(unit, dp):
    sq = squeezed_state(SqueezedStateParams.create(0.0, 0.0, dp, unit), unit)
    p = interior_probes(unit)
    v = sq.value(p)
    assert np.allclose(v.imag, 0) and np.allclose(v, v[::-1])


def test_squeezed_state_shifted_position(unit):
    sp = SqueezedStateParams.create(1.0, 0.0, 1 / math.sqrt(3), unit)
    sq = squeezed_state(sp, unit)
    p = np.array([0.4])
    ratio = sq.value(p)[0] / abs(sq.value(p)[0])
    assert ratio == pytest.approx(np.exp(-1j * np.arcsin(0.4)), rel=1e-12)
    assert algebra.expectation_report(sq, unit).mean_X == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("dp", [0.3, 1 / math.sqrt(3)])
def test_squeezed_state_is_minimal_uncertainty(unit, dp):
    """The family saturates the Robertson bound, with dX dP = hbar kappa / 2."""
    sp = SqueezedStateParams.create(0.4, 0.0, dp, unit)
    rep = algebra.expectation_report(squeezed_state(sp, unit), unit, algebra.build_grid(unit, 2048))
    assert rep.robertson_margin == pytest.approx(0.0, abs=1e-12)
    assert rep.delta_X * rep.delta_P == pytest.approx(unit.hbar * sp.kappa / 2, rel=1e-12)


def test_squeezed_state_saturation_converges_for_rough_envelope(unit):
    # envelope power 0.64: quadrature converges algebraically, but towards saturation
    sq = squeezed_state(SqueezedStateParams.create(0.4, 0.0, 0.8, unit), unit)
    margins = [algebra.expectation_report(sq, unit, algebra.build_grid(unit, n)).robertson_margin
               for n in (2048, 16384)]
    assert 0 <= margins[1] < margins[0] / 10


def test_squeezed_params_validation(unit):
    with pytest.raises(ValueError):
        SqueezedStateParams.create(0.0, 0.0, 0.0, unit)
    bad = SqueezedStateParams(0.0, 0.0, 1.0, -1.0)
    with pytest.raises(ValueError):
        squeezed_state(bad, unit)


@pytest.mark.parametrize("xi_units", [0.0, 1.0, -1.0, 10.0, -10.0])
def test_ml_mean_position(xi_units):
    params = ModelParameters(beta=0.1)
    xi = xi_units * params.hbar * params.sqrt_beta
    rep = algebra.expectation_report(max_localization_state(xi, params).state, params)
    assert rep.mean_X == pytest.approx(xi, abs=1e-8)
    assert rep.norm_factor == pytest.approx(1.0, abs=1e-10)


def test_ml_examples():
    params = ModelParameters(beta=0.1)
    assert algebra.expectation_report(max_localization_state(2.5, params).state, params).mean_X == pytest.approx(
        2.5, abs=1e-8
    )


def test_ml_uncertainty_profile(unit):
    prof = ml_uncertainty_profile(0.0, unit)
    assert prof.delta_X == pytest.approx(2 / math.sqrt(3), rel=1e-12)
    assert prof.delta_p_lower**2 == pytest.approx(1 / 6, rel=1e-12)
    assert prof.reference_pp_min_length == pytest.approx(3 * math.sqrt(3) / 4, rel=1e-15)
    # the quoted constant is not what the state achieves
    assert abs(prof.delta_X - prof.reference_pp_min_length) > 0.1
    shifted = ml_uncertainty_profile(3.3, unit)
    assert shifted.delta_X == pytest.approx(prof.delta_X, rel=1e-10)


def test_ml_saturates_robertson(unit):
    rep = algebra.expectation_report(max_localization_state(0.0, unit).state, unit)
    assert rep.delta_X * rep.delta_P == pytest.approx(2 / 3, rel=1e-12)
    assert rep.robertson_margin == pytest.approx(0.0, abs=1e-12)


def test_reference_constants(unit):
    ref = ReferenceConstants.for_params(ModelParameters(beta=4.0, hbar=0.5))
    assert ref.kmm_min_length == 1.0
    assert ref.pp_min_length == pytest.approx(3 * math.sqrt(3) / 4)
    assert ref.kinetic_ratios == {"KMM": 6.0, "PP": 0.8814, "WH": 0.7176, "new": 1.0}
    assert ReferenceConstants.adv(0.2, 2.0) == {"adv_min_length": 0.4, "adv_max_momentum": 5.0}


def test_comparison_report_unit(unit):
    rows = {r["quantity"]: r for r in comparison_report(unit)}
    assert rows["kinetic_ml_new_lower_p"]["value"] == pytest.approx(1 / 12, rel=1e-12)
    assert rows["kinetic_ml_KMM"]["value"] == pytest.approx(0.5, rel=1e-15)
    assert rows["kinetic_ml_new_deformed_P"]["ratio"] == pytest.approx(2.0, rel=1e-12)
    for k in ("KMM", "PP", "WH"):
        assert rows[f"kinetic_ml_{k}"]["ratio"] == KINETIC_RATIOS[k]


def test_comparison_report_scaling():
    base = {r["quantity"]: r["value"] for r in comparison_report(ModelParameters(beta=1.0))}
    scaled = {r["quantity"]: r["value"] for r in comparison_report(ModelParameters(beta=0.5, mass=2.0))}
    for key in ("kinetic_ml_KMM", "kinetic_ml_PP", "kinetic_ml_WH", "kinetic_ml_new_lower_p",
                "kinetic_ml_new_deformed_P"):
        assert scaled[key] == pytest.approx(base[key], rel=1e-12)  # m beta = 1 in both


def test_comparison_report_adv(unit):
    rows = {r["quantity"]: r for r in comparison_report(unit, adv_alpha=0.3)}
    assert rows["min_length_ADV"]["value"] == pytest.approx(0.3)
    assert rows["max_momentum_ADV"]["value"] == pytest.approx(1 / 0.3)


def test_requires_deformation():
    flat = ModelParameters(beta=0.0)
    with pytest.raises(ValueError):
        position_eigenstate(0.0, flat)
    with pytest.raises(ValueError):
        max_localization_state(0.0, flat)
