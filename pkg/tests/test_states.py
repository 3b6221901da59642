import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gupqm.algebra import build_grid
from gupqm.params import ModelParameters
from gupqm.states import (
    SampledState,
    arcsin_phase_state,
    constant_state,
    enveloped_polynomial,
    envelope_state,
    exp_jet,
    gaussian_state,
    jet_consistency,
    polynomial_state,
)

PROBES = np.linspace(-0.9, 0.9, 11)


def test_polynomial_jet_exact():
    s = polynomial_state([1.0, 2.0, 3.0], order=3)
    jet = s.jet([2.0])[:, 0]
    assert np.allclose(jet, [1 + 4 + 12, 2 + 12, 6, 0])


def test_envelope_matches_direct_power():
    s = envelope_state(0.5, 1.7)
    p = np.array([0.3, -1.1])
    u = 1 - 0.5 * p**2
    assert np.allclose(s.value(p), u**1.7)
    assert np.allclose(s.d1(p), 1.7 * u**0.7 * (-p))


@pytest.mark.parametrize(
    "state",
    [
        envelope_state(1.0, 2.5),
        arcsin_phase_state(1.0, 0.3 - 2.0j),
        gaussian_state(0.4, center=0.1),
        enveloped_polynomial([0.2, 1.0j, -0.5], 1.0, 1.0),
        arcsin_phase_state(1.0, -1.5j, order=3) * envelope_state(1.0, 0.75, order=3),
    ],
)
def test_jets_match_finite_differences(state):
    assert jet_consistency(state, PROBES, step=1e-4) < 1e-6


def test_exp_jet_third_order():
    # exp(p^2): derivatives 2p e, (2 + 4p^2) e, (12p + 8p^3) e
    p = np.array([0.7])
    g = np.array([p**2, 2 * p, np.full_like(p, 2.0), np.zeros_like(p)])
    e = np.exp(p**2)
    expected = np.concatenate([e, 2 * p * e, (2 + 4 * p**2) * e, (12 * p + 8 * p**3) * e])
    assert np.allclose(exp_jet(g)[:, 0], expected, rtol=1e-14)


def test_product_truncates_to_lower_order():
    a = polynomial_state([1.0, 1.0], order=3)
    b = polynomial_state([0.0, 1.0], order=1)
    assert (a * b).order == 1
    with pytest.raises(ValueError):
        (a * b).d2([0.0])


def test_arithmetic():
    a, b = polynomial_state([1.0, 2.0]), constant_state(3.0)
    p = np.array([0.5])
    assert np.allclose((a + b).value(p), 5.0)
    assert np.allclose((a - b).value(p), -1.0)
    assert np.allclose(a.scaled(2j).value(p), 4j)
    with pytest.raises(ValueError):
        a.truncated(3)


def test_sampled_state_is_read_only_and_checked():
    grid = build_grid(ModelParameters(beta=1.0), 8)
    s = SampledState(grid, np.ones(8))
    assert s.values.dtype == complex
    with pytest.raises(ValueError):
        s.values[0] = 2.0
    with pytest.raises(ValueError):
        SampledState(grid, np.ones(7))
    with pytest.raises(ValueError):
        SampledState(grid, np.full(8, np.nan))


@settings(max_examples=40, deadline=None)
@given(
    coeffs=st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=1, max_size=5),
    power=st.floats(0.5, 3.0),
)
def test_enveloped_polynomial_jet_property(coeffs, power):
    s = enveloped_polynomial(coeffs, 1.0, power)
    # relative mismatch only meaningful away from accidental zeros of psi
    if np.min(np.abs(s.value(PROBES))) < 1e-3:
        return
    assert jet_consistency(s, PROBES, step=1e-4) < 1e-5
