import math

import numpy as np
import pytest

from gupqm.params import ModelParameters
from gupqm.verification import Check, random_enveloped_states, run_all


@pytest.mark.parametrize("beta", [1e-6, 0.01, 0.1, 0.5, 1.0, 4.0])
def test_all_suites_pass(beta):
    rows = run_all(ModelParameters(beta=beta), n_max=10, grid_size=1024)
    failing = [(r.suite, r.name, r.measured, r.provenance) for r in rows if not r.passed]
    assert not failing


def test_suites_in_other_units():
    rows = run_all(ModelParameters(beta=0.3, hbar=0.6, mass=2.5, omega=1.7), n_max=6)
    assert all(r.passed for r in rows), [(r.name, r.measured) for r in rows if not r.passed]


def test_check_semantics():
    assert Check("s", "a", 1e-13, 1e-12, "<=").passed
    assert not Check("s", "a", 1e-11, 1e-12, "<=").passed
    assert Check("s", "b", 0.0, -1e-12, ">=").passed
    assert not Check("s", "c", math.nan, 1.0, "<=").passed


def test_random_symmetric_states_are_even_and_real():
    params = ModelParameters(beta=0.5)
    rng = np.random.default_rng(1)
    p = np.linspace(-1.2, 1.2, 7)
    for s in random_enveloped_states(rng, params, 10, symmetric=True):
        v = s.value(p)
        assert np.allclose(v.imag, 0) and np.allclose(v, v[::-1])
