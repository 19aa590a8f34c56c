"""Built-in cross-validation of the closed forms against the solvers.

Each check pits two independent routes to the same number against each
other at reduced density, so a fresh install can prove its own consistency
in seconds. The cli module formats the results and maps them to an exit
code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .closedform import two_osc_occupations
from .dynamics import (
    MECHANICAL,
    BathContribution,
    LinearModel,
    assemble_effective_two,
    assemble_full,
    default_timestep,
    energy_flows_full,
    evolve,
    lyapunov_solve,
    mechanical_occupations,
    occupations,
    vacuum_state,
)
from .elimination import reduce_two_element
from .model import ArraySpec, EffectiveTwoOscModel, transmissive_couplings


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one cross-validation measurement."""

    criterion: int
    index: int
    label: str
    measured: float
    bound: float
    passed: bool


def _result(criterion: int, index: int, label: str, measured: float, bound: float) -> CheckResult:
    return CheckResult(criterion, index, label, float(measured), float(bound), measured <= bound)


def _check_closed_vs_ode() -> list[CheckResult]:
    """Reduced steady state against the closed form, error falling as 1/omega."""
    out = []
    for index, (omega, bound) in enumerate(((1e3, 2e-2), (1e4, 2e-3)), start=1):
        m = EffectiveTwoOscModel(
            omega=omega, lambda_coupling=10.0, gamma=1.0, gamma_bar=2.0,
            n1=10.0, n2=1.0, n_common=0.0,
        )
        target = np.asarray(two_osc_occupations(m))
        got = occupations(lyapunov_solve(assemble_effective_two(m)))
        measured = float(np.max(np.abs(got - target) / np.abs(target)))
        out.append(_result(1, index, f"reduced steady state vs closed form at omega={omega:g}", measured, bound))
    return out


def _check_elimination_convergence() -> list[CheckResult]:
    """Full-model occupations approach the eliminated closed form as g shrinks."""
    errors = []
    for g in (1e-3, 5e-4):
        per_element = g / math.sqrt(2.0)
        spec = ArraySpec(
            n_elements=2, omega=1.0, detuning=-1.0, kappa=0.05,
            gamma=(1e-6, 1e-6), n_bath=(10.0, 1.0), g=(per_element, per_element),
        )
        target = np.asarray(two_osc_occupations(reduce_two_element(spec)))
        got = mechanical_occupations(lyapunov_solve(assemble_full(spec)))
        errors.append(float(np.max(np.abs(got - target) / np.abs(target))))
    return [
        _result(2, 1, "discrepancy shrinks with the coupling", errors[1] / errors[0], 1.0),
        _result(2, 2, "discrepancy at the smallest coupling", errors[1], 0.05),
    ]


def _check_energy_balance() -> list[CheckResult]:
    """Per-reservoir energy flows cancel at the full-model steady state."""
    spec = ArraySpec(
        n_elements=4, omega=1.0, detuning=-1.0, kappa=0.05,
        gamma=(1e-5, 2e-5, 1e-5, 3e-5), n_bath=(10.0, 1.0, 5.0, 0.5),
        g=transmissive_couplings(4, 2e-3),
    )
    model = assemble_full(spec)
    flows = energy_flows_full(model, lyapunov_solve(model))
    total = math.fsum(flows.values())
    largest = max(abs(f) for f in flows.values())
    return [_result(5, 1, "per-reservoir energy flows balance", abs(total) / largest, 1e-10)]


def _single_mode_model(omega: float, gamma: float, n_bath: float) -> LinearModel:
    h = omega * np.eye(2)
    drift_h = np.array([[0.0, omega], [-omega, 0.0]])
    a_bath = -gamma * np.eye(2)
    d_bath = gamma * (2.0 * n_bath + 1.0) * np.eye(2)
    return LinearModel(
        modes=(MECHANICAL,),
        drift=drift_h + a_bath,
        diffusion=d_bath,
        drift_hamiltonian=drift_h,
        hamiltonian=h,
        baths=(BathContribution("element_1", a_bath, d_bath),),
    )


def _check_solver_bedrock() -> list[CheckResult]:
    """Residual bound on random stable systems, transient accuracy, convergence."""
    rng = np.random.default_rng(20260816)
    worst = 0.0
    for _ in range(25):
        n_modes = int(rng.integers(1, 9))
        dim = 2 * n_modes
        a = rng.standard_normal((dim, dim))
        a -= (max(float(np.linalg.eigvals(a).real.max()), 0.0) + 0.5) * np.eye(dim)
        c = rng.standard_normal((dim, dim))
        d = c @ c.T
        model = LinearModel(
            modes=(MECHANICAL,) * n_modes,
            drift=a,
            diffusion=d,
            drift_hamiltonian=np.zeros((dim, dim)),
            hamiltonian=np.zeros((dim, dim)),
            baths=(BathContribution("element_1", a, d),),
        )
        v = lyapunov_solve(model).matrix
        residual = float(np.abs(a @ v + v @ a.T + d).max())
        bound = 1e-10 * max(1.0, float(np.abs(d).max()))
        worst = max(worst, residual / bound)
    checks = [_result(6, 1, "steady-state residuals on random stable systems", worst, 1.0)]

    single = _single_mode_model(omega=1.0, gamma=1.0, n_bath=5.0)
    traj = evolve(single, vacuum_state(single.modes), t_final=1.0, dt=1e-3)
    n_t = 0.5 * (traj.matrices[:, 0, 0] + traj.matrices[:, 1, 1] - 1.0)
    target = 5.0 * (1.0 - np.exp(-2.0 * traj.times))
    checks.append(_result(6, 2, "single-mode relaxation against the analytic law", float(np.abs(n_t - target).max()), 1e-6))

    m = EffectiveTwoOscModel(
        omega=4.0, lambda_coupling=3.0, gamma=1.0, gamma_bar=2.0,
        n1=2.0, n2=1.0, n_common=0.5,
    )
    lm = assemble_effective_two(m)
    steady = lyapunov_solve(lm).matrix
    final = evolve(
        lm, vacuum_state(lm.modes), t_final=20.0, dt=default_timestep(lm), record_every=10**9
    ).final.matrix
    checks.append(_result(6, 3, "transient converges onto the steady solver", float(np.abs(final - steady).max()), 1e-8))
    return checks


def run_all_checks() -> list[CheckResult]:
    """Run every reduced cross-check, in criterion order."""
    results: list[CheckResult] = []
    results += _check_closed_vs_ode()
    results += _check_elimination_convergence()
    results += _check_energy_balance()
    results += _check_solver_bedrock()
    return results
