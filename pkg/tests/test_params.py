import math

import pytest

from gupqm import ModelParameters


def test_defaults_are_natural_units():
    p = ModelParameters()
    assert (p.beta, p.hbar, p.mass, p.omega) == (0.1, 1.0, 1.0, 1.0)


def test_derived_quantities():
    p = ModelParameters(beta=4.0, hbar=2.0, mass=3.0, omega=0.5)
    assert p.p_max == 0.5
    assert p.sqrt_beta == 2.0
    assert p.g == pytest.approx(4.0 * 3.0 * 0.5 * 2.0)


@pytest.mark.parametrize("field", ["hbar", "mass", "omega"])
@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_rejects_non_positive_constants(field, bad):
    with pytest.raises(ValueError):
        ModelParameters(**{field: bad})


def test_beta_zero_allowed_but_not_deformed():
    p = ModelParameters(beta=0.0)
    with pytest.raises(ValueError):
        p.require_deformed()
    with pytest.raises(ValueError):
        p.p_max


def test_negative_beta_rejected():
    with pytest.raises(ValueError):
        ModelParameters(beta=-0.1)


def test_frozen_and_with_beta():
    p = ModelParameters(beta=0.1, mass=2.0)
    with pytest.raises(AttributeError):
        p.beta = 1.0
    q = p.with_beta(0.5)
    assert q.beta == 0.5 and q.mass == 2.0 and p.beta == 0.1
