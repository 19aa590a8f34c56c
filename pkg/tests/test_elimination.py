import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phononflux import (
    ArraySpec,
    AsymmetricArray,
    BlueDetunedRegime,
    InvalidSpec,
    effective_bath,
    reduce_two_element,
    regime_report,
    sideband_rates,
    spectral_density,
    spring_shift,
)

finite = dict(allow_nan=False, allow_infinity=False)
rates_st = st.floats(min_value=1e-3, max_value=1e3)
signed_st = st.floats(min_value=-1e3, max_value=1e3, **finite)


def symmetric_pair(g_each=0.01 / math.sqrt(2.0), detuning=-1.0):
    return ArraySpec(
        n_elements=2, omega=1.0, detuning=detuning, kappa=0.1,
        gamma=(1e-4, 1e-4), n_bath=(10.0, 1.0), g=(g_each, g_each),
    )


def test_spectral_density_magnitude_and_phase():
    s = spectral_density(delta=-1.0, kappa=0.1, omega_eval=0.0)
    assert abs(s) ** 2 == pytest.approx(1.0 / (1.0 + 0.01), rel=1e-12)
    assert s.real == pytest.approx(0.1 / 1.01, rel=1e-12)
    with pytest.raises(InvalidSpec):
        spectral_density(delta=-1.0, kappa=0.0, omega_eval=0.0)


def test_spring_shift_reference_value():
    # 2 g^2 d (d^2 - w^2 + k^2) / ([(d+w)^2+k^2][(d-w)^2+k^2]) at the pinned point
    lam = spring_shift(g=0.01, delta=-1.0, omega=1.0, kappa=0.1)
    assert lam == pytest.approx(-2e-6 / 0.0401, rel=1e-12)


def test_spring_shift_vanishes_on_the_magic_detuning():
    # d^2 = w^2 - k^2 kills the numerator
    delta = -math.sqrt(1.0 - 0.1**2)
    assert spring_shift(0.01, delta, 1.0, 0.1) == pytest.approx(0.0, abs=1e-18)


@settings(max_examples=80, deadline=None)
@given(st.floats(min_value=1e-2, max_value=10.0), signed_st, rates_st, rates_st)
def test_spring_shift_is_odd_in_detuning(g, delta, omega, kappa):
    assert spring_shift(g, -delta, omega, kappa) == -spring_shift(g, delta, omega, kappa)


@settings(max_examples=80, deadline=None)
@given(signed_st, rates_st, rates_st)
def test_sideband_denominators_match_expanded_form(delta, omega, kappa):
    left = ((delta + omega) ** 2 + kappa**2) * ((delta - omega) ** 2 + kappa**2)
    right = (delta**2 - omega**2 - kappa**2) ** 2 + (2.0 * delta * kappa) ** 2
    assert left == pytest.approx(right, rel=1e-12)


def test_sideband_rates_reference_values():
    rates = sideband_rates(g=0.01, delta=-1.0, omega=1.0, kappa=0.1)
    assert rates.beta_plus == pytest.approx(1e-3, rel=1e-12)
    assert rates.beta_minus == pytest.approx(1e-5 / 4.01, rel=1e-12)


@settings(max_examples=80, deadline=None)
@given(st.floats(min_value=1e-2, max_value=10.0), signed_st, rates_st, rates_st)
def test_sideband_rates_swap_under_detuning_flip(g, delta, omega, kappa):
    a = sideband_rates(g, delta, omega, kappa)
    b = sideband_rates(g, -delta, omega, kappa)
    assert a.beta_plus == b.beta_minus
    assert a.beta_minus == b.beta_plus


def test_effective_bath_recovers_rate_decomposition():
    rates = sideband_rates(g=0.01, delta=-1.0, omega=1.0, kappa=0.1)
    gamma_bar, n_common = effective_bath(rates)
    assert gamma_bar == pytest.approx(rates.beta_plus - rates.beta_minus, rel=1e-15)
    # the pair (gamma_bar, n_common) must reproduce both rates exactly
    assert gamma_bar * n_common == pytest.approx(rates.beta_minus, rel=1e-12)
    assert gamma_bar * (n_common + 1.0) == pytest.approx(rates.beta_plus, rel=1e-12)


def test_effective_bath_zero_rates_map_to_silence():
    from phononflux import SidebandRates

    assert effective_bath(SidebandRates(0.0, 0.0)) == (0.0, 0.0)


def test_effective_bath_rejects_heating_dominance():
    rates = sideband_rates(g=0.01, delta=+1.0, omega=1.0, kappa=0.1)
    assert rates.beta_minus > rates.beta_plus
    with pytest.raises(BlueDetunedRegime):
        effective_bath(rates)


def test_reduce_two_element_reference_values():
    m = reduce_two_element(symmetric_pair())
    # collective coupling is sqrt(2) times the per-element value, 0.01 here
    assert m.lambda_coupling == pytest.approx(-4.987531172069825e-5, rel=1e-9)
    assert m.gamma_bar == pytest.approx(1e-3 - 1e-5 / 4.01, rel=1e-12)
    assert m.n_common == pytest.approx((1e-5 / 4.01) / (1e-3 - 1e-5 / 4.01), rel=1e-12)
    assert m.gamma == 1e-4
    assert (m.n1, m.n2) == (10.0, 1.0)
    assert m.omega_prime == pytest.approx(1.0 + m.lambda_coupling)


def test_reduce_two_element_chains_the_collective_coupling():
    spec = symmetric_pair()
    m = reduce_two_element(spec)
    assert m.lambda_coupling == spring_shift(
        spec.collective_coupling, spec.detuning, spec.omega, spec.kappa
    )


def test_reduce_two_element_decoupled_array_is_silent():
    m = reduce_two_element(symmetric_pair(g_each=0.0))
    assert (m.lambda_coupling, m.gamma_bar, m.n_common) == (0.0, 0.0, 0.0)


def test_reduce_two_element_rejects_wrong_size_and_asymmetry():
    with pytest.raises(InvalidSpec):
        reduce_two_element(
            ArraySpec(1, 1.0, -1.0, 0.1, (1e-4,), (1.0,), (0.01,))
        )
    with pytest.raises(AsymmetricArray):
        reduce_two_element(
            ArraySpec(2, 1.0, -1.0, 0.1, (1e-4, 2e-4), (1.0, 1.0), (0.01, 0.01))
        )
    with pytest.raises(AsymmetricArray):
        reduce_two_element(
            ArraySpec(2, 1.0, -1.0, 0.1, (1e-4, 1e-4), (1.0, 1.0), (0.01, 0.02))
        )


def test_reduce_two_element_propagates_blue_detuning():
    with pytest.raises(BlueDetunedRegime):
        reduce_two_element(symmetric_pair(detuning=+1.0))


def test_regime_report_margins_and_flags():
    spec = symmetric_pair()
    m = reduce_two_element(spec)
    report = regime_report(spec, m)
    weak, spring, hier = report.margins
    assert weak == pytest.approx(0.01 / 0.1)
    assert spring == pytest.approx(abs(m.lambda_coupling) / 1.0)
    assert hier == pytest.approx(max(m.gamma, m.gamma_bar) / abs(m.lambda_coupling))
    assert report.threshold == 0.1
    assert report.spring_small_ok
    # gamma_bar ~ 1e-3 dwarfs |lambda| ~ 5e-5 at this point
    assert not report.hierarchy_ok


def test_regime_report_zero_spring_fails_hierarchy():
    spec = symmetric_pair(g_each=0.0)
    m = reduce_two_element(spec)
    report = regime_report(spec, m, threshold=0.2)
    assert math.isinf(report.margins[2])
    assert not report.hierarchy_ok
    assert report.threshold == 0.2
