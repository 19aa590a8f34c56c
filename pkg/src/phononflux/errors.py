"""Exception types raised across the package."""

from __future__ import annotations


class PhononFluxError(Exception):
    """Base class for every error this package raises on purpose."""


class InvalidSpec(PhononFluxError, ValueError):
    """A model description violates one of its invariants."""


class DegenerateCouplings(InvalidSpec):
    """Every element coupling vanishes, so no collective mode exists."""


class BlueDetunedRegime(PhononFluxError):
    """Heating beats cooling; the eliminated field is not a thermal bath."""


class AsymmetricArray(PhononFluxError):
    """An operation needing identical per-element parameters got unequal ones."""


class DegenerateDamping(PhononFluxError):
    """All damping channels vanish; no steady state exists."""


class UnequalTemperatures(PhononFluxError):
    """A closed form valid only for equal bath occupations got mixed ones."""


class NumericalError(PhononFluxError):
    """Base class for failures of the numerical solvers."""


class UnstableDrift(NumericalError):
    """The drift matrix has a non-decaying eigenvalue.

    The offending eigenvalue is kept on the ``eigenvalue`` attribute.
    """

    def __init__(self, eigenvalue: complex):
        self.eigenvalue = complex(eigenvalue)
        super().__init__(
            f"drift eigenvalue {self.eigenvalue} has non-negative real part"
        )


class SingularSystem(NumericalError):
    """The steady-state linear solve is numerically rank-deficient."""


class StepTooLarge(NumericalError):
    """The fixed-step integrator diverged; reduce dt."""


class NonPhysical(NumericalError):
    """A state fails a physicality bound (negative occupation)."""


class ConfigError(PhononFluxError, ValueError):
    """A scenario config is malformed; ``path`` locates the offending key."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
