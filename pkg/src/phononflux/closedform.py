"""Analytic steady-state results: occupations, heat flows, limits, scaling.

All formulas here are exact steady states of the reduced (cavity
eliminated) description in the fast-oscillation limit. They serve both as
production solvers for large parameter sweeps and as oracles for the
numerical routes in ``dynamics``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from .dynamics import SOLVER_CLOSED_FORM, HeatFlowReport
from .errors import (
    AsymmetricArray,
    DegenerateDamping,
    InvalidSpec,
    UnequalTemperatures,
)
from .model import ArraySpec, EffectiveTwoOscModel, transmissive_couplings, validate_spec

FloatArray = NDArray[np.float64]


def two_osc_occupations(m: EffectiveTwoOscModel) -> tuple[float, float]:
    """Steady occupations of the two coupled oscillators.

    With heavy = 2 gamma + gamma_bar:

        n_j' = (2 gamma n_j + gamma_bar n_common) / heavy
             + gamma_bar^2 / (2 heavy (gamma + gamma_bar)) ((n_1 + n_2)/2 - n_common)
             + (-1)^j 2 gamma lambda^2 / (heavy (heavy^2 + lambda^2)) (n_1 - n_2)/2

    The first term is per-oscillator bath competition, the second the
    common-bath mixing, the third the coupling-induced exchange that drags
    both occupations toward their mean.
    """
    heavy = 2.0 * m.gamma + m.gamma_bar
    if not heavy > 0.0:
        raise DegenerateDamping("2 gamma + gamma_bar must be > 0")
    mean = 0.5 * (m.n1 + m.n2)
    mix = m.gamma_bar**2 / (2.0 * heavy * (m.gamma + m.gamma_bar)) * (mean - m.n_common)
    lam_sq = m.lambda_coupling**2
    exchange = (
        2.0 * m.gamma * lam_sq / (heavy * (heavy * heavy + lam_sq)) * 0.5 * (m.n1 - m.n2)
    )
    n1p = (2.0 * m.gamma * m.n1 + m.gamma_bar * m.n_common) / heavy + mix - exchange
    n2p = (2.0 * m.gamma * m.n2 + m.gamma_bar * m.n_common) / heavy + mix + exchange
    return n1p, n2p


@dataclass(frozen=True)
class TwoOscillatorFlows:
    """Steady heat flows of the two-oscillator model, both bookkeeping routes.

    ``flows`` holds 2 omega gamma (n_j - n_j'), the first-principles rate.
    ``as_printed`` holds an independently coded closed form whose prefactor
    is 4 omega gamma; it comes out exactly twice ``flows`` for every input,
    and ``doubled`` records that check so reports can surface the
    discrepancy between the two conventions instead of hiding it.
    """

    flows: tuple[float, float]
    as_printed: tuple[float, float]
    doubled: bool


def _two_osc_flows_printed(m: EffectiveTwoOscModel) -> tuple[float, float]:
    """Literal evaluation of the displayed flow formula (4 omega gamma prefactor)."""
    heavy = 2.0 * m.gamma + m.gamma_bar
    if not heavy > 0.0:
        raise DegenerateDamping("2 gamma + gamma_bar must be > 0")
    lam_sq = m.lambda_coupling**2
    out = []
    for j, n_j in ((1, m.n1), (2, m.n2)):
        braces = (
            m.gamma_bar * (n_j - m.n_common) / heavy
            + m.gamma_bar**2
            / (2.0 * heavy * (m.gamma + m.gamma_bar))
            * (m.n_common - 0.5 * (m.n1 + m.n2))
            - (-1.0) ** j
            * m.gamma
            * lam_sq
            / (heavy * (heavy * heavy + lam_sq))
            * (m.n1 - m.n2)
        )
        out.append(4.0 * m.omega * m.gamma * braces)
    return out[0], out[1]


def two_osc_heatflows(m: EffectiveTwoOscModel) -> TwoOscillatorFlows:
    """Steady heat flows J_j = 2 omega gamma (n_j - n_j'), plus the doubled variant."""
    n1p, n2p = two_osc_occupations(m)
    j1 = 2.0 * m.omega * m.gamma * (m.n1 - n1p)
    j2 = 2.0 * m.omega * m.gamma * (m.n2 - n2p)
    a1, a2 = _two_osc_flows_printed(m)
    scale = max(
        abs(a1),
        abs(a2),
        4.0 * abs(m.omega * m.gamma) * (abs(m.n1) + abs(m.n2) + 2.0 * abs(m.n_common)),
        1e-300,
    )
    doubled = abs(a1 - 2.0 * j1) <= 1e-9 * scale and abs(a2 - 2.0 * j2) <= 1e-9 * scale
    return TwoOscillatorFlows(flows=(j1, j2), as_printed=(a1, a2), doubled=doubled)


@dataclass(frozen=True)
class LimitOccupations:
    """Occupations in the strong-mutual-coupling limit, shared by both modes."""

    large_coupling: float
    independent_baths: float
    common_dominated: float


def two_osc_limits(m: EffectiveTwoOscModel) -> LimitOccupations:
    """Limiting occupations for mutual coupling far above all damping.

    large_coupling is the full limit; independent_baths is its reduction
    for gamma >> gamma_bar (plain average of the private baths);
    common_dominated is the opposite reduction, n_common/2 + (n_1 + n_2)/4.
    """
    total = m.gamma + m.gamma_bar
    if not total > 0.0:
        raise DegenerateDamping("gamma + gamma_bar must be > 0")
    mean = 0.5 * (m.n1 + m.n2)
    large = (2.0 * m.gamma + m.gamma_bar) / (2.0 * total) * mean + m.gamma_bar / (
        2.0 * total
    ) * m.n_common
    return LimitOccupations(
        large_coupling=large,
        independent_baths=mean,
        common_dominated=0.5 * m.n_common + 0.5 * mean,
    )


def _equal_temp_profile(
    omega: float,
    gamma: float,
    n: float,
    g_vec: FloatArray,
    gamma_bar: float,
    n_common: float,
) -> HeatFlowReport:
    """Shared core: weights g_j^2/g^2 route the common-bath pull to elements."""
    g_sq = np.asarray(g_vec, dtype=float) ** 2
    total_sq = float(g_sq.sum())
    if total_sq == 0.0:
        raise InvalidSpec("couplings all zero")
    weights = g_sq / total_sq
    denom = gamma + gamma_bar
    eta = gamma_bar / denom if denom > 0.0 else 0.0  # branching ratio
    occ = n + weights * eta * (n_common - n)
    flows = 2.0 * omega * gamma * weights * eta * (n - n_common)
    total = float(np.sum(flows))
    return HeatFlowReport(
        occupations=occ,
        flows=flows,
        total_mechanical=total,
        cavity_flow=-total,
        solver=SOLVER_CLOSED_FORM,
    )


def equal_temp_array(spec: ArraySpec, gamma_bar: float, n_common: float) -> HeatFlowReport:
    """Closed-form array steady state when every element bath shares one occupation.

    n_j' = n + (g_j^2/g^2) eta (n_common - n) and
    J_j = 2 omega gamma (g_j^2/g^2) eta (n - n_common) with
    eta = gamma_bar / (gamma + gamma_bar); the counter-flow is exactly
    minus the summed element flows, and their total is independent of how
    many elements share it.
    """
    validate_spec(spec)
    if any(x != spec.n_bath[0] for x in spec.n_bath):
        raise UnequalTemperatures("all n_bath entries must be equal")
    if any(x != spec.gamma[0] for x in spec.gamma):
        raise AsymmetricArray("all gamma entries must be equal")
    if gamma_bar < 0.0:
        raise InvalidSpec("gamma_bar must be >= 0")
    return _equal_temp_profile(
        omega=spec.omega,
        gamma=spec.gamma[0],
        n=spec.n_bath[0],
        g_vec=np.asarray(spec.g),
        gamma_bar=gamma_bar,
        n_common=n_common,
    )


@dataclass(frozen=True)
class ScalingResult:
    """Flow-versus-size series with their fitted log-log slopes.

    flows_first tracks the edge element, flows_quarter the element at
    floor(N/4), mean_flow the total divided by N.
    """

    sizes: tuple[int, ...]
    flows_first: FloatArray
    flows_quarter: FloatArray
    mean_flow: FloatArray
    slope_first: float
    slope_quarter: float
    slope_mean: float

    @property
    def fitted_slopes(self) -> tuple[float, float, float]:
        return (self.slope_first, self.slope_quarter, self.slope_mean)


def _loglog_slope(sizes: Sequence[int], series: FloatArray) -> float:
    """Unweighted least-squares slope of log(series) against log(size)."""
    if np.any(series <= 0.0):
        raise InvalidSpec("scaling series must stay positive for a log-log fit")
    return float(np.polyfit(np.log(np.asarray(sizes, dtype=float)), np.log(series), 1)[0])


def fourier_scaling(
    sizes: Sequence[int],
    *,
    omega: float,
    gamma: float,
    n_occupation: float,
    gamma_bar: float,
    n_common: float,
) -> ScalingResult:
    """Equal-temperature flows across a ladder of array sizes.

    Each size uses the sinusoidal coupling profile, whose weights
    g_j^2/g^2 are scale-free, so no absolute coupling enters. Extracts the
    edge flow J_1, the bulk flow at element floor(N/4), and the mean flow
    (total over N), then fits unweighted log-log slopes, endpoints
    included.
    """
    sizes = tuple(int(n) for n in sizes)
    if len(sizes) < 2:
        raise InvalidSpec("need at least two sizes to fit a slope")
    if any(n <= 2 for n in sizes):
        raise InvalidSpec("all sizes must be > 2")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise InvalidSpec("sizes must be strictly increasing")
    first = np.empty(len(sizes))
    quarter = np.empty(len(sizes))
    mean = np.empty(len(sizes))
    for i, n_el in enumerate(sizes):
        g_vec = np.asarray(transmissive_couplings(n_el, 1.0))
        report = _equal_temp_profile(
            omega=omega,
            gamma=gamma,
            n=n_occupation,
            g_vec=g_vec,
            gamma_bar=gamma_bar,
            n_common=n_common,
        )
        first[i] = report.flows[0]
        quarter[i] = report.flows[max(1, n_el // 4) - 1]
        mean[i] = report.total_mechanical / n_el
    return ScalingResult(
        sizes=sizes,
        flows_first=first,
        flows_quarter=quarter,
        mean_flow=mean,
        slope_first=_loglog_slope(sizes, first),
        slope_quarter=_loglog_slope(sizes, quarter),
        slope_mean=_loglog_slope(sizes, mean),
    )
