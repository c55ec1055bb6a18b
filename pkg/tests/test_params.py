import math

import pytest

from tseqclust import suggest_parameters


def test_reference_values():
    s = suggest_parameters(3, 20)
    assert (s.p_t, s.p_e) == (1.0, 9.0)
    assert s.delta == pytest.approx(23 / 9 + 1)


def test_tau_20_gives_1_over_400():
    s = suggest_parameters(20, 20)
    assert s.p_t / s.p_e == pytest.approx(1 / 400)


def test_tau_7():
    assert suggest_parameters(7, 16).delta == pytest.approx(23 / 49 + 1)


@pytest.mark.parametrize("tau,t_max", [(0, 5), (-1, 5), (5, 4)])
def test_invalid(tau, t_max):
    with pytest.raises(ValueError):
        suggest_parameters(tau, t_max)


@pytest.mark.parametrize("tau", [0.5, 1, 3.5, 10])
def test_invariants(tau):
    s = suggest_parameters(tau, 2 * tau + 1)
    assert s.p_e == tau**2 * s.p_t
    assert s.delta > 1
    p = s.to_params()
    assert p.tau == tau and p.delta == s.delta and math.isinf(p.sigma)
