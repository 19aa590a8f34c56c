"""Steady-state heat transport in arrays of oscillators sharing one cavity.

The package covers four layers and keeps them independently testable:

* model: validated parameter containers for the physical array and for the
  reduced two-oscillator description.
* elimination: the cavity integrated out into effective rates, with regime
  diagnostics.
* dynamics: Gaussian covariance evolution, steady-state solvers, heat flows.
* closedform: analytic steady-state occupations, flows, limits, and the
  size-scaling of Fourier-profile arrays.

The cli module turns JSON scenario configs into deterministic CSV tables.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    AsymmetricArray,
    BlueDetunedRegime,
    ConfigError,
    DegenerateCouplings,
    DegenerateDamping,
    InvalidSpec,
    NonPhysical,
    NumericalError,
    PhononFluxError,
    SingularSystem,
    StepTooLarge,
    UnequalTemperatures,
    UnstableDrift,
)
from .model import (
    ArraySpec,
    CollectiveBasis,
    EffectiveTwoOscModel,
    collective_basis,
    transmissive_couplings,
    validate_spec,
)
from .elimination import (
    RegimeReport,
    SidebandRates,
    effective_bath,
    reduce_two_element,
    regime_report,
    sideband_rates,
    spectral_density,
    spring_shift,
)
from .dynamics import (
    CAVITY,
    MECHANICAL,
    SOLVER_CLOSED_FORM,
    SOLVER_LYAPUNOV_FULL,
    SOLVER_ODE_STEADY,
    BathContribution,
    CovarianceState,
    CovarianceTrajectory,
    HeatFlowReport,
    LinearModel,
    assemble_effective_two,
    assemble_full,
    default_timestep,
    energy_flows_full,
    evolve,
    heat_flows_weak,
    lyapunov_solve,
    mechanical_occupations,
    occupations,
    thermal_state,
    vacuum_state,
)
from .closedform import (
    LimitOccupations,
    ScalingResult,
    TwoOscillatorFlows,
    equal_temp_array,
    fourier_scaling,
    two_osc_heatflows,
    two_osc_limits,
    two_osc_occupations,
)
from .selfcheck import CheckResult, run_all_checks
from .cli import (
    ResultTable,
    ScenarioConfig,
    main,
    parse_config,
    read_table,
    run_config,
    run_fig2_preset,
    run_fig3_preset,
    run_selfcheck,
    write_table,
)

__all__ = [
    "__version__",
    "PhononFluxError",
    "InvalidSpec",
    "DegenerateCouplings",
    "BlueDetunedRegime",
    "AsymmetricArray",
    "DegenerateDamping",
    "UnequalTemperatures",
    "NumericalError",
    "UnstableDrift",
    "SingularSystem",
    "StepTooLarge",
    "NonPhysical",
    "ConfigError",
    "ArraySpec",
    "CollectiveBasis",
    "EffectiveTwoOscModel",
    "collective_basis",
    "transmissive_couplings",
    "validate_spec",
    "SidebandRates",
    "RegimeReport",
    "spectral_density",
    "spring_shift",
    "sideband_rates",
    "effective_bath",
    "reduce_two_element",
    "regime_report",
    "CAVITY",
    "MECHANICAL",
    "SOLVER_CLOSED_FORM",
    "SOLVER_ODE_STEADY",
    "SOLVER_LYAPUNOV_FULL",
    "BathContribution",
    "LinearModel",
    "CovarianceState",
    "CovarianceTrajectory",
    "HeatFlowReport",
    "vacuum_state",
    "thermal_state",
    "assemble_full",
    "assemble_effective_two",
    "lyapunov_solve",
    "default_timestep",
    "evolve",
    "occupations",
    "mechanical_occupations",
    "heat_flows_weak",
    "energy_flows_full",
    "TwoOscillatorFlows",
    "LimitOccupations",
    "ScalingResult",
    "two_osc_occupations",
    "two_osc_heatflows",
    "two_osc_limits",
    "equal_temp_array",
    "fourier_scaling",
    "CheckResult",
    "run_all_checks",
    "ResultTable",
    "ScenarioConfig",
    "parse_config",
    "run_config",
    "run_selfcheck",
    "run_fig2_preset",
    "run_fig3_preset",
    "write_table",
    "read_table",
    "main",
]
