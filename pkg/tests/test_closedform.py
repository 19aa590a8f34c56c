import math

import numpy as np
import pytest

from phononflux import (
    ArraySpec,
    AsymmetricArray,
    DegenerateDamping,
    EffectiveTwoOscModel,
    InvalidSpec,
    UnequalTemperatures,
    equal_temp_array,
    fourier_scaling,
    transmissive_couplings,
    two_osc_heatflows,
    two_osc_limits,
    two_osc_occupations,
)


def reduced(**overrides):
    base = dict(
        omega=1.0, lambda_coupling=0.0, gamma=1.0, gamma_bar=2.0,
        n1=10.0, n2=2.0, n_common=0.0,
    )
    base.update(overrides)
    return EffectiveTwoOscModel(**base)


def test_occupations_reference_point():
    # gamma=1, gamma_bar=2, lambda=0, n = (10, 2), n_common=0:
    # heavy=4, so n1' = 20/4 + (4/24)*6 = 6 and n2' = 4/4 + 1 = 2
    n1p, n2p = two_osc_occupations(reduced())
    assert n1p == pytest.approx(6.0, rel=1e-14)
    assert n2p == pytest.approx(2.0, rel=1e-14)


def test_occupations_with_coupling_reference_point():
    n1p, n2p = two_osc_occupations(reduced(lambda_coupling=10.0, n2=1.0))
    assert n1p == pytest.approx(3.9770114942528734, rel=1e-12)
    assert n2p == pytest.approx(3.3563218390804597, rel=1e-12)


def test_occupations_need_some_damping():
    with pytest.raises(DegenerateDamping):
        two_osc_occupations(reduced(gamma=0.0, gamma_bar=0.0))


def test_heatflows_reference_point():
    flows = two_osc_heatflows(reduced())
    assert flows.flows[0] == pytest.approx(8.0, rel=1e-14)
    assert flows.flows[1] == pytest.approx(0.0, abs=1e-14)
    assert flows.as_printed[0] == pytest.approx(16.0, rel=1e-14)
    assert flows.doubled


def test_heatflows_follow_occupations():
    m = reduced(lambda_coupling=3.0, gamma_bar=0.7, n_common=1.2)
    n1p, n2p = two_osc_occupations(m)
    flows = two_osc_heatflows(m)
    assert flows.flows[0] == pytest.approx(2.0 * m.omega * m.gamma * (m.n1 - n1p))
    assert flows.flows[1] == pytest.approx(2.0 * m.omega * m.gamma * (m.n2 - n2p))


def test_total_flow_is_coupling_independent():
    totals = []
    for lam in np.linspace(0.0, 100.0, 41):
        flows = two_osc_heatflows(reduced(lambda_coupling=lam)).flows
        totals.append(flows[0] + flows[1])
    totals = np.asarray(totals)
    spread = float(totals.max() - totals.min())
    assert spread <= 1e-12 * float(np.abs(totals).max())


def test_total_flow_closed_expression():
    # J1 + J2 = omega gamma gamma_bar (n1 + n2 - 2 n_common) / (gamma + gamma_bar)
    m = reduced(lambda_coupling=7.0, gamma=0.8, gamma_bar=1.9, n_common=0.6)
    flows = two_osc_heatflows(m).flows
    expected = (
        m.omega * m.gamma * m.gamma_bar * (m.n1 + m.n2 - 2.0 * m.n_common)
        / (m.gamma + m.gamma_bar)
    )
    assert flows[0] + flows[1] == pytest.approx(expected, rel=1e-12)


def test_total_flow_grows_with_common_coupling():
    totals = [
        sum(two_osc_heatflows(reduced(gamma_bar=gb)).flows)
        for gb in np.linspace(0.0, 20.0, 21)
    ]
    assert all(b > a for a, b in zip(totals, totals[1:]))
    assert totals[0] == 0.0


def test_limits_reference_and_reductions():
    m = reduced(gamma=1.0, gamma_bar=1.0, n1=6.0, n2=2.0)
    limits = two_osc_limits(m)
    # (2g+gb)/(2(g+gb)) * mean + gb/(2(g+gb)) * n_common = (3/4)*4
    assert limits.large_coupling == pytest.approx(3.0, rel=1e-14)
    assert two_osc_limits(reduced(gamma_bar=0.0)).large_coupling == 6.0
    assert two_osc_limits(reduced(gamma_bar=0.0)).independent_baths == 6.0
    only_common = two_osc_limits(reduced(gamma=0.0, n_common=1.0))
    assert only_common.large_coupling == only_common.common_dominated
    assert only_common.common_dominated == pytest.approx(0.5 + 3.0)
    with pytest.raises(DegenerateDamping):
        two_osc_limits(reduced(gamma=0.0, gamma_bar=0.0))


def test_occupations_approach_strong_coupling_limit():
    m = reduced(lambda_coupling=1e4, gamma_bar=0.5, n_common=0.3)
    limit = two_osc_limits(m).large_coupling
    n1p, n2p = two_osc_occupations(m)
    assert abs(n1p - limit) <= 1e-6
    assert abs(n2p - limit) <= 1e-6


def equal_temp_spec(n_elements=4, n=3.0, gamma=1e-4):
    return ArraySpec(
        n_elements=n_elements, omega=1.0, detuning=-1.0, kappa=0.05,
        gamma=(gamma,) * n_elements, n_bath=(n,) * n_elements,
        g=transmissive_couplings(n_elements, 2e-3),
    )


def test_equal_temp_array_profile_follows_coupling_squares():
    spec = equal_temp_spec()
    report = equal_temp_array(spec, gamma_bar=3e-4, n_common=0.1)
    g_sq = np.asarray(spec.g) ** 2
    weights = g_sq / g_sq.sum()
    eta = 3e-4 / (1e-4 + 3e-4)
    np.testing.assert_allclose(
        report.occupations, 3.0 + weights * eta * (0.1 - 3.0), rtol=1e-12
    )
    np.testing.assert_allclose(
        report.flows, 2.0 * 1e-4 * weights * eta * (3.0 - 0.1), rtol=1e-12
    )
    assert report.cavity_flow == -report.total_mechanical
    assert report.solver == "closed-form"


def test_equal_temp_array_silent_without_common_bath():
    report = equal_temp_array(equal_temp_spec(), gamma_bar=0.0, n_common=0.0)
    np.testing.assert_allclose(report.occupations, 3.0, atol=0.0)
    np.testing.assert_allclose(report.flows, 0.0, atol=0.0)


def test_equal_temp_array_four_elements_share_equally():
    report = equal_temp_array(equal_temp_spec(4), gamma_bar=2e-4, n_common=0.0)
    np.testing.assert_allclose(
        report.flows, report.total_mechanical / 4.0, rtol=1e-12
    )


def test_equal_temp_total_is_size_independent():
    totals = [
        equal_temp_array(equal_temp_spec(n), gamma_bar=2e-4, n_common=0.0).total_mechanical
        for n in (4, 16, 64)
    ]
    scale = abs(totals[0])
    assert max(totals) - min(totals) <= 1e-14 * scale


def test_equal_temp_array_rejections():
    spec = equal_temp_spec()
    with pytest.raises(InvalidSpec):
        equal_temp_array(spec, gamma_bar=-1e-5, n_common=0.0)
    mixed_n = ArraySpec(
        n_elements=4, omega=1.0, detuning=-1.0, kappa=0.05,
        gamma=(1e-4,) * 4, n_bath=(3.0, 3.0, 3.0, 2.0),
        g=transmissive_couplings(4, 2e-3),
    )
    with pytest.raises(UnequalTemperatures):
        equal_temp_array(mixed_n, gamma_bar=1e-4, n_common=0.0)
    mixed_gamma = ArraySpec(
        n_elements=4, omega=1.0, detuning=-1.0, kappa=0.05,
        gamma=(1e-4, 1e-4, 2e-4, 1e-4), n_bath=(3.0,) * 4,
        g=transmissive_couplings(4, 2e-3),
    )
    with pytest.raises(AsymmetricArray):
        equal_temp_array(mixed_gamma, gamma_bar=1e-4, n_common=0.0)


def test_scaling_mean_flow_is_exact_inverse_size():
    result = fourier_scaling(
        (8, 16, 32, 64), omega=1.0, gamma=1.0, n_occupation=1.0,
        gamma_bar=2.0, n_common=0.0,
    )
    assert result.slope_mean == pytest.approx(-1.0, abs=1e-10)
    np.testing.assert_allclose(
        result.mean_flow * np.asarray(result.sizes, dtype=float),
        result.mean_flow[0] * result.sizes[0],
        rtol=1e-14,
    )
    assert result.fitted_slopes == (
        result.slope_first, result.slope_quarter, result.slope_mean
    )


def test_scaling_rejects_bad_size_ladders():
    kwargs = dict(omega=1.0, gamma=1.0, n_occupation=1.0, gamma_bar=2.0, n_common=0.0)
    with pytest.raises(InvalidSpec):
        fourier_scaling((8,), **kwargs)
    with pytest.raises(InvalidSpec):
        fourier_scaling((2, 8), **kwargs)
    with pytest.raises(InvalidSpec):
        fourier_scaling((8, 8), **kwargs)
    with pytest.raises(InvalidSpec):
        fourier_scaling((16, 8), **kwargs)


def test_scaling_needs_a_transporting_bath():
    # gamma_bar = 0 makes every flow zero, which has no log-log slope
    with pytest.raises(InvalidSpec):
        fourier_scaling(
            (8, 16), omega=1.0, gamma=1.0, n_occupation=1.0,
            gamma_bar=0.0, n_common=0.0,
        )
