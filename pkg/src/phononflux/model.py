"""Parameter containers for an oscillator array coupled to one lossy cavity mode.

Conventions used across the package: hbar = 1, every rate and frequency
shares one time unit, and all couplings are real. ``kappa`` and ``gamma``
are amplitude decay rates, so energy relaxes at twice these values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import DegenerateCouplings, InvalidSpec

FloatArray = NDArray[np.float64]


@dataclass(frozen=True)
class ArraySpec:
    """N mechanical elements at a common frequency, coupled to one cavity.

    Attributes
    ----------
    n_elements:
        Number of mechanical elements N.
    omega:
        Mechanical frequency, identical for all elements.
    detuning:
        Cavity detuning (drive frequency minus cavity frequency) in the
        rotating frame of the drive.
    kappa:
        Cavity amplitude decay rate, must be positive.
    gamma, n_bath:
        Per-element mechanical amplitude decay rates and bath occupations.
    g:
        Per-element drive-enhanced coupling rates; real, not all zero.
    """

    n_elements: int
    omega: float
    detuning: float
    kappa: float
    gamma: tuple[float, ...]
    n_bath: tuple[float, ...]
    g: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "n_elements", int(self.n_elements))
        for name in ("omega", "detuning", "kappa"):
            object.__setattr__(self, name, float(getattr(self, name)))
        for name in ("gamma", "n_bath", "g"):
            object.__setattr__(
                self, name, tuple(float(x) for x in getattr(self, name))
            )

    @property
    def collective_coupling(self) -> float:
        """Root-sum-square coupling sqrt(sum_j g_j^2)."""
        return math.sqrt(math.fsum(x * x for x in self.g))


def validate_spec(spec: ArraySpec) -> ArraySpec:
    """Check every ArraySpec invariant and return the argument unchanged.

    Raises InvalidSpec naming the first violated invariant. Idempotent:
    accepted input passes again unchanged.
    """
    if spec.n_elements < 1:
        raise InvalidSpec("n_elements must be a positive integer")
    for name in ("omega", "detuning", "kappa"):
        if not math.isfinite(getattr(spec, name)):
            raise InvalidSpec(f"{name} must be finite")
    if not spec.kappa > 0.0:
        raise InvalidSpec("kappa must be > 0")
    for name in ("gamma", "n_bath", "g"):
        values = getattr(spec, name)
        if len(values) != spec.n_elements:
            raise InvalidSpec(f"{name} must list one value per element")
        if not all(math.isfinite(v) for v in values):
            raise InvalidSpec(f"{name} entries must be finite")
    if any(v < 0.0 for v in spec.gamma):
        raise InvalidSpec("gamma entries must be >= 0")
    if any(v < 0.0 for v in spec.n_bath):
        raise InvalidSpec("n_bath entries must be >= 0")
    if all(v == 0.0 for v in spec.g):
        raise InvalidSpec("couplings all zero")
    return spec


@dataclass(frozen=True)
class CollectiveBasis:
    """Orthonormal mode-mixing matrix; row 1 is the normalized coupling vector.

    ``matrix @ matrix.T`` is the identity to within 1e-12 entrywise, and
    ``g_total`` is the Euclidean norm of the coupling vector, i.e. the rate
    at which the first collective mode talks to the cavity.
    """

    matrix: FloatArray
    g_total: float


def collective_basis(g_vec: Sequence[float]) -> CollectiveBasis:
    """Complete the normalized coupling vector to an orthonormal basis.

    The remaining rows come from Gram-Schmidt over the canonical basis
    vectors taken in index order, skipping any that are linearly dependent
    on the rows accumulated so far. Two projection passes per seed keep the
    result orthonormal to round-off even for nearly-canonical inputs.
    """
    g_arr = np.asarray(g_vec, dtype=float)
    if g_arr.ndim != 1 or g_arr.size == 0:
        raise InvalidSpec("coupling vector must be a nonempty 1-d sequence")
    if not np.isfinite(g_arr).all():
        raise InvalidSpec("coupling entries must be finite")
    g_total = float(np.linalg.norm(g_arr))
    if g_total == 0.0:
        raise DegenerateCouplings("couplings all zero")
    n = g_arr.size
    rows = np.empty((n, n))
    rows[0] = g_arr / g_total
    count = 1
    for k in range(n):
        if count == n:
            break
        v = np.zeros(n)
        v[k] = 1.0
        for _ in range(2):
            v -= rows[:count].T @ (rows[:count] @ v)
        norm = float(np.linalg.norm(v))
        if norm < 1e-10:
            continue  # seed already spanned by earlier rows
        rows[count] = v / norm
        count += 1
    if count != n:  # unreachable for finite input; guards the invariant anyway
        raise DegenerateCouplings("could not complete an orthonormal basis")
    return CollectiveBasis(matrix=rows, g_total=g_total)


def transmissive_couplings(n_elements: int, g: float) -> tuple[float, ...]:
    """Sinusoidal coupling profile g_j = g sqrt(2/N) sin(2 pi (j - 1/2) / N).

    The squares sum to g^2 exactly for every N > 2, so ``g`` plays the role
    of the collective coupling of the whole array. N = 4 gives |g_j| = g/2
    for all four elements.
    """
    if int(n_elements) <= 2:
        raise InvalidSpec("n_elements must be > 2 for the sinusoidal profile")
    if not g > 0.0:
        raise InvalidSpec("g must be > 0")
    j = np.arange(1, int(n_elements) + 1, dtype=float)
    profile = g * np.sqrt(2.0 / n_elements) * np.sin(2.0 * np.pi * (j - 0.5) / n_elements)
    return tuple(float(x) for x in profile)


@dataclass(frozen=True)
class EffectiveTwoOscModel:
    """Two oscillators with mutual coupling, private baths, and a shared bath.

    This is the reduced description left after the cavity has been
    eliminated: ``lambda_coupling`` is the field-induced mutual spring,
    ``gamma_bar``/``n_common`` the rate and occupation of the effective
    shared reservoir, and ``gamma``/``n1``/``n2`` the private baths.
    ``omega_prime = omega + lambda_coupling`` is recorded for reference;
    the dynamics below keep the bare ``omega``.
    """

    omega: float
    lambda_coupling: float
    gamma: float
    gamma_bar: float
    n1: float
    n2: float
    n_common: float
    omega_prime: float = field(init=False)

    def __post_init__(self) -> None:
        for name in ("omega", "lambda_coupling", "gamma", "gamma_bar", "n1", "n2", "n_common"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.gamma_bar >= 0.0:
            raise InvalidSpec("gamma_bar must be >= 0")
        if not self.n_common >= 0.0:
            raise InvalidSpec("n_common must be >= 0")
        object.__setattr__(self, "omega_prime", self.omega + self.lambda_coupling)
