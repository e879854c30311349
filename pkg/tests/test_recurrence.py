import math

import numpy as np
import pytest

from decolab.envmodels import recurrence as rc
from decolab.errors import NumericalGuardError, ValidationError


def test_bath_validation():
    with pytest.raises(ValidationError):
        rc.FiniteBath([1.0, -1.0], [0.1, 0.1])
    with pytest.raises(ValidationError):
        rc.FiniteBath([1.0], [0.1, 0.2])
    with pytest.raises(ValidationError):
        rc.FiniteBath([np.inf], [0.1])


@pytest.mark.parametrize("n_modes", [1, 5])
def test_degenerate_bath_returns_at_period(n_modes):
    bath = rc.FiniteBath.degenerate(n_modes, 1.3, 0.5 * 1.3)
    period = 2 * math.pi / 1.3
    t = np.linspace(0, 3 * period, 301)
    now = rc.coherence_at(bath, t)
    later = rc.coherence_at(bath, t + period)
    assert np.max(np.abs(later - now)) <= 1e-6
    assert abs(rc.coherence_at(bath, [period])[0] - 0.5) <= 1e-6
    assert now.min() < 0.5 - 0.05  # it really decays in between


def test_truncated_evolution_matches_closed_form():
    bath = rc.FiniteBath.band(6, 0.5, 1.5, 0.4, seed=1)
    t, coh = rc.finite_bath_recurrence(bath, 20.0, 201)
    assert np.max(np.abs(coh - rc.coherence_closed_form(bath, t))) <= 1e-8


def test_band_bath_has_no_revival():
    bath = rc.FiniteBath.band(40, 0.5, 1.5, 0.7, seed=3)
    t, coh = rc.finite_bath_recurrence(bath, 10 * 2 * math.pi, 4001)
    collapsed = np.nonzero(coh < 0.1 * coh[0])[0][0]
    assert coh[collapsed:].max() < 0.1 * coh[0]
    assert coh[t >= math.pi].max() < 1e-3 * coh[0]


def test_truncation_guard():
    bath = rc.FiniteBath.degenerate(1, 1.0, 6.0)
    with pytest.raises(NumericalGuardError) as info:
        rc.finite_bath_recurrence(bath, 5.0, 11)
    assert info.value.invariant == "truncation"
