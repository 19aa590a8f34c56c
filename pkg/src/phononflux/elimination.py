"""Adiabatic elimination of the cavity mode.

Maps bare cavity + mechanics parameters onto the effective two-oscillator
description: the cavity spectral density seen by the mechanics, the optical
spring shift, the sideband cooling/heating rates, and the thermal reservoir
they amount to. A diagnostic report says how well the hierarchy of scales
behind the elimination is respected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AsymmetricArray, BlueDetunedRegime, InvalidSpec
from .model import ArraySpec, EffectiveTwoOscModel


@dataclass(frozen=True)
class SidebandRates:
    """Lorentzian-weighted rates at the two sidebands.

    ``beta_plus`` damps the mechanics (cooling), ``beta_minus`` feeds it
    (heating); both are nonnegative by construction.
    """

    beta_plus: float
    beta_minus: float


@dataclass(frozen=True)
class RegimeReport:
    """Validity diagnostics for the eliminated description.

    margins holds the three dimensionless ratios
    (g / min(kappa, omega), |lambda| / omega, max(gamma, gamma_bar) / |lambda|);
    each flag records whether its ratio sits below ``threshold``. The
    hierarchy flag needs both the second and third ratio small.
    """

    weak_coupling_ok: bool
    spring_small_ok: bool
    hierarchy_ok: bool
    margins: tuple[float, float, float]
    threshold: float


def spectral_density(delta: float, kappa: float, omega_eval: float) -> complex:
    """Cavity response S(w) = -1 / (i (delta + w) - kappa).

    Its real part, kappa / ((delta + w)^2 + kappa^2), sets the sideband
    rates; its imaginary part sets the spring shift.
    """
    if not kappa > 0.0:
        raise InvalidSpec("kappa must be > 0")
    return -1.0 / complex(-kappa, delta + omega_eval)


def spring_shift(g: float, delta: float, omega: float, kappa: float) -> float:
    """Field-induced frequency shift, doubling as the mutual coupling.

    lambda = 2 g^2 delta (delta^2 - omega^2 + kappa^2)
             / ([(delta+omega)^2 + kappa^2] [(delta-omega)^2 + kappa^2])

    Odd in delta; vanishes with g and at delta^2 = omega^2 - kappa^2.
    """
    if not kappa > 0.0:
        raise InvalidSpec("kappa must be > 0")
    num = 2.0 * g * g * delta * (delta * delta - omega * omega + kappa * kappa)
    den = ((delta + omega) ** 2 + kappa * kappa) * ((delta - omega) ** 2 + kappa * kappa)
    return num / den


def sideband_rates(g: float, delta: float, omega: float, kappa: float) -> SidebandRates:
    """Cooling/heating rates beta_pm = g^2 kappa / ((delta +- omega)^2 + kappa^2)."""
    if not kappa > 0.0:
        raise InvalidSpec("kappa must be > 0")
    g2k = g * g * kappa
    return SidebandRates(
        beta_plus=g2k / ((delta + omega) ** 2 + kappa * kappa),
        beta_minus=g2k / ((delta - omega) ** 2 + kappa * kappa),
    )


def effective_bath(rates: SidebandRates) -> tuple[float, float]:
    """Thermal reservoir equivalent to the sideband rate pair.

    Returns (gamma_bar, n_common) with gamma_bar = beta_plus - beta_minus
    and n_common = beta_minus / gamma_bar, so that
    beta_plus = gamma_bar (n_common + 1) and beta_minus = gamma_bar n_common.
    Both rates zero map to (0, 0) by convention. Raises BlueDetunedRegime
    when heating wins, since a negative-temperature reservoir breaks every
    closed form downstream.
    """
    bp, bm = rates.beta_plus, rates.beta_minus
    if bp == 0.0 and bm == 0.0:
        return 0.0, 0.0
    if bp <= bm:
        raise BlueDetunedRegime(
            f"beta_plus={bp:g} must exceed beta_minus={bm:g} for a thermal reservoir"
        )
    gamma_bar = bp - bm
    return gamma_bar, bm / gamma_bar


def reduce_two_element(spec: ArraySpec) -> EffectiveTwoOscModel:
    """Eliminate the cavity for a symmetric two-element array.

    Needs both elements to carry the same damping and the same coupling, so
    that only the centre-of-mass combination talks to the cavity; the
    collective rate is then sqrt(2) times the per-element one. Chains
    spring_shift, sideband_rates, and effective_bath evaluated at that
    collective rate.
    """
    if spec.n_elements != 2:
        raise InvalidSpec("reduction is defined for exactly two elements")
    if len(spec.gamma) != 2 or len(spec.n_bath) != 2 or len(spec.g) != 2:
        raise InvalidSpec("per-element lists must have two entries")
    if spec.gamma[0] != spec.gamma[1]:
        raise AsymmetricArray("gamma must match between the two elements")
    if spec.g[0] != spec.g[1]:
        raise AsymmetricArray("couplings must match between the two elements")
    g_coll = spec.collective_coupling
    lam = spring_shift(g_coll, spec.detuning, spec.omega, spec.kappa)
    gamma_bar, n_common = effective_bath(
        sideband_rates(g_coll, spec.detuning, spec.omega, spec.kappa)
    )
    return EffectiveTwoOscModel(
        omega=spec.omega,
        lambda_coupling=lam,
        gamma=spec.gamma[0],
        gamma_bar=gamma_bar,
        n1=spec.n_bath[0],
        n2=spec.n_bath[1],
        n_common=n_common,
    )


def regime_report(
    spec: ArraySpec, effective: EffectiveTwoOscModel, threshold: float = 0.1
) -> RegimeReport:
    """Quantify how deep the parameters sit in the elimination regime.

    Diagnostic only: never raises, never blocks a computation. A ratio of
    infinity (e.g. zero spring shift) simply fails its flag.
    """
    g = spec.collective_coupling
    fast = min(spec.kappa, spec.omega)
    m_weak = g / fast if fast > 0.0 else math.inf
    lam = abs(effective.lambda_coupling)
    m_spring = lam / effective.omega if effective.omega > 0.0 else math.inf
    slow = max(effective.gamma, effective.gamma_bar)
    m_hier = slow / lam if lam > 0.0 else math.inf
    return RegimeReport(
        weak_coupling_ok=m_weak < threshold,
        spring_small_ok=m_spring < threshold,
        hierarchy_ok=(m_hier < threshold and m_spring < threshold),
        margins=(m_weak, m_spring, m_hier),
        threshold=float(threshold),
    )
