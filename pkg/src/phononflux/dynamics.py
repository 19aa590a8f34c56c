"""Drift/diffusion models, steady-state solver, and transient integrator.

Everything here works on the covariance flow dV/dt = A V + V A^T + D of
quadratures x = (b + b^dagger)/sqrt(2), p = (b - b^dagger)/(i sqrt(2)),
ordered (x_a, p_a, x_1, p_1, ..., x_N, p_N) with the cavity pair first.
Reduced two-oscillator models drop the cavity pair. Since cross-mode
operators commute, plain products serve as the off-diagonal moments, and
same-mode xp entries hold the symmetrized combination; this representation
is closed, so commutators never appear as variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import solve_continuous_lyapunov

from .errors import (
    InvalidSpec,
    NonPhysical,
    SingularSystem,
    StepTooLarge,
    UnstableDrift,
)
from .model import ArraySpec, EffectiveTwoOscModel, validate_spec

FloatArray = NDArray[np.float64]

CAVITY = "cavity"
MECHANICAL = "mech"

SOLVER_CLOSED_FORM = "closed-form"
SOLVER_ODE_STEADY = "ode-steady"
SOLVER_LYAPUNOV_FULL = "lyapunov-full"


def _symplectic(n_modes: int) -> FloatArray:
    """Block-diagonal [[0, 1], [-1, 0]] per mode."""
    s = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        s[2 * k, 2 * k + 1] = 1.0
        s[2 * k + 1, 2 * k] = -1.0
    return s


@dataclass(frozen=True)
class BathContribution:
    """One reservoir's share of the drift and diffusion."""

    label: str
    drift: FloatArray
    diffusion: FloatArray


@dataclass(frozen=True)
class LinearModel:
    """Covariance flow dV/dt = A V + V A^T + D with per-bath bookkeeping.

    ``drift`` is the sum of ``drift_hamiltonian`` (the symplectic part,
    Sigma H, which conserves the mean energy 1/2 z^T H z) and the bath
    drifts; ``diffusion`` is the sum of the bath diffusions. Keeping the
    split around lets per-reservoir energy flows be read off exactly.
    """

    modes: tuple[str, ...]
    drift: FloatArray
    diffusion: FloatArray
    drift_hamiltonian: FloatArray
    hamiltonian: FloatArray
    baths: tuple[BathContribution, ...]

    @property
    def dim(self) -> int:
        """Number of modes M; matrices are 2M x 2M."""
        return len(self.modes)


@dataclass(frozen=True)
class CovarianceState:
    """Symmetrized second moments of a Gaussian state.

    ``modes`` labels each (x, p) pair as cavity or mechanical, in the
    matrix ordering. The vacuum is the identity over two; a thermal mode
    carries (n + 1/2) on its diagonal pair.
    """

    matrix: FloatArray
    modes: tuple[str, ...]

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float)
        if m.shape != (2 * len(self.modes), 2 * len(self.modes)):
            raise InvalidSpec("covariance must be 2M x 2M for M labelled modes")
        scale = max(1.0, float(np.abs(m).max()))
        if float(np.abs(m - m.T).max()) > 1e-9 * scale:
            raise InvalidSpec("covariance must be symmetric")
        m = 0.5 * (m + m.T)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "modes", tuple(self.modes))

    @property
    def mech_indices(self) -> tuple[int, ...]:
        return tuple(i for i, kind in enumerate(self.modes) if kind == MECHANICAL)


@dataclass(frozen=True)
class CovarianceTrajectory:
    """Covariances recorded along a transient, first frame at t = 0."""

    times: FloatArray
    matrices: FloatArray
    modes: tuple[str, ...]

    def state(self, k: int) -> CovarianceState:
        return CovarianceState(matrix=self.matrices[k], modes=self.modes)

    @property
    def final(self) -> CovarianceState:
        return self.state(-1)


@dataclass(frozen=True)
class HeatFlowReport:
    """Per-element heat flows and the balancing counter-flow.

    Sign convention: positive flow means heat enters the system from that
    bath. ``total_mechanical`` always equals the summed flows; the
    constructor enforces it to 1e-12 relative.
    """

    occupations: FloatArray
    flows: FloatArray
    total_mechanical: float
    cavity_flow: float
    solver: str

    def __post_init__(self) -> None:
        flows = np.asarray(self.flows, dtype=float)
        total = float(np.sum(flows))
        scale = max(
            abs(total), float(np.max(np.abs(flows), initial=0.0)), 1e-300
        )
        if abs(total - self.total_mechanical) > 1e-12 * scale:
            raise InvalidSpec("total_mechanical must equal the summed flows")


def vacuum_state(modes: Sequence[str]) -> CovarianceState:
    """Ground state of every mode: V = identity / 2."""
    dim = 2 * len(modes)
    return CovarianceState(matrix=0.5 * np.eye(dim), modes=tuple(modes))


def thermal_state(modes: Sequence[str], occupations: Sequence[float]) -> CovarianceState:
    """Product of thermal modes, (n_i + 1/2) on each diagonal pair."""
    occ = [float(n) for n in occupations]
    if len(occ) != len(modes):
        raise InvalidSpec("one occupation per mode")
    diag = np.repeat(np.asarray(occ) + 0.5, 2)
    return CovarianceState(matrix=np.diag(diag), modes=tuple(modes))


def assemble_full(spec: ArraySpec) -> LinearModel:
    """Linearized (N+1)-mode model in the drive's rotating frame.

    Drift, with no rotating-wave truncation of the coupling:

        dx_a = -Delta p_a - kappa x_a
        dp_a =  Delta x_a - kappa p_a - sum_j 2 g_j x_j
        dx_j =  omega p_j - gamma_j x_j
        dp_j = -omega x_j - gamma_j p_j - 2 g_j x_a

    Diffusion: kappa I_2 on the cavity pair and gamma_j (2 n_j + 1) I_2 on
    element j, the normalization fixed by the single-mode steady state
    V = (n + 1/2) I and energy relaxation rate 2 gamma.
    """
    validate_spec(spec)
    n = spec.n_elements
    dim = 2 * (n + 1)
    h = np.zeros((dim, dim))
    h[0, 0] = h[1, 1] = -spec.detuning
    for j in range(n):
        x = 2 + 2 * j
        h[x, x] = h[x + 1, x + 1] = spec.omega
        h[0, x] = h[x, 0] = 2.0 * spec.g[j]
    drift_h = _symplectic(n + 1) @ h

    baths = []
    a_cav = np.zeros((dim, dim))
    d_cav = np.zeros((dim, dim))
    a_cav[0, 0] = a_cav[1, 1] = -spec.kappa
    d_cav[0, 0] = d_cav[1, 1] = spec.kappa
    baths.append(BathContribution(CAVITY, a_cav, d_cav))
    for j in range(n):
        x, p = 2 + 2 * j, 3 + 2 * j
        a_j = np.zeros((dim, dim))
        d_j = np.zeros((dim, dim))
        a_j[x, x] = a_j[p, p] = -spec.gamma[j]
        d_j[x, x] = d_j[p, p] = spec.gamma[j] * (2.0 * spec.n_bath[j] + 1.0)
        baths.append(BathContribution(f"element_{j + 1}", a_j, d_j))

    drift = drift_h + sum(b.drift for b in baths)
    diffusion = sum(b.diffusion for b in baths)
    return LinearModel(
        modes=(CAVITY,) + (MECHANICAL,) * n,
        drift=drift,
        diffusion=diffusion,
        drift_hamiltonian=drift_h,
        hamiltonian=h,
        baths=tuple(baths),
    )


def assemble_effective_two(model: EffectiveTwoOscModel) -> LinearModel:
    """Two-mode moment flow for the reduced mutual-coupling description.

    z = (x_1, p_1, x_2, p_2), with k the other index:

        dx_j =  omega p_j
        dp_j = -omega x_j - lambda x_k - (2 gamma + gamma_bar) p_j - gamma_bar p_k

    Diffusion acts on momenta only: 2 gamma (2 n_j + 1) + gamma_bar
    (2 n_common + 1) on the diagonal and gamma_bar (2 n_common + 1) across
    the pair. The resulting A V + V A^T + D reproduces the ten independent
    second-moment equations of motion term by term.
    """
    w, lam = model.omega, model.lambda_coupling
    gamma, gbar = model.gamma, model.gamma_bar
    h = np.array(
        [
            [w, 0.0, lam, 0.0],
            [0.0, w, 0.0, 0.0],
            [lam, 0.0, w, 0.0],
            [0.0, 0.0, 0.0, w],
        ]
    )
    drift_h = _symplectic(2) @ h

    baths = []
    for j, n_j in ((0, model.n1), (1, model.n2)):
        p = 1 + 2 * j
        a_j = np.zeros((4, 4))
        d_j = np.zeros((4, 4))
        a_j[p, p] = -2.0 * gamma
        d_j[p, p] = 2.0 * gamma * (2.0 * n_j + 1.0)
        baths.append(BathContribution(f"element_{j + 1}", a_j, d_j))
    a_c = np.zeros((4, 4))
    d_c = np.zeros((4, 4))
    for p in (1, 3):
        for q in (1, 3):
            a_c[p, q] = -gbar
            d_c[p, q] = gbar * (2.0 * model.n_common + 1.0)
    baths.append(BathContribution("common", a_c, d_c))

    drift = drift_h + sum(b.drift for b in baths)
    diffusion = sum(b.diffusion for b in baths)
    return LinearModel(
        modes=(MECHANICAL, MECHANICAL),
        drift=drift,
        diffusion=diffusion,
        drift_hamiltonian=drift_h,
        hamiltonian=h,
        baths=tuple(baths),
    )


def lyapunov_solve(model: LinearModel) -> CovarianceState:
    """Steady covariance of dV/dt = A V + V A^T + D.

    Schur-based dense solve plus one refinement pass; the accepted residual
    is ||A V + V A^T + D||_max <= 1e-10 max(1, ||D||_max). Raises
    UnstableDrift (with the offending eigenvalue) when A is not Hurwitz and
    SingularSystem when the solve cannot reach the residual bound.
    """
    a = model.drift
    d = model.diffusion
    eigenvalues = np.linalg.eigvals(a)
    worst = eigenvalues[int(np.argmax(eigenvalues.real))]
    if worst.real >= 0.0:
        raise UnstableDrift(worst)
    try:
        v = solve_continuous_lyapunov(a, -d)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    v = 0.5 * (v + v.T)
    residual = a @ v + v @ a.T + d
    correction = solve_continuous_lyapunov(a, -residual)
    v = v + 0.5 * (correction + correction.T)
    worst_entry = float(np.abs(a @ v + v @ a.T + d).max())
    bound = 1e-10 * max(1.0, float(np.abs(d).max()))
    if not np.isfinite(v).all() or worst_entry > bound:
        raise SingularSystem(
            f"steady-state residual {worst_entry:.3e} exceeds bound {bound:.3e}"
        )
    return CovarianceState(matrix=v, modes=model.modes)


def default_timestep(model: LinearModel) -> float:
    """1/200th of the fastest period implied by the drift spectrum."""
    rho = float(np.abs(np.linalg.eigvals(model.drift)).max())
    if rho <= 0.0:
        raise InvalidSpec("drift has no dynamics to set a timescale")
    return 2.0 * np.pi / (200.0 * rho)


def evolve(
    model: LinearModel,
    v0: CovarianceState,
    t_final: float,
    dt: float,
    record_every: int = 1,
) -> CovarianceTrajectory:
    """Integrate dV/dt = A V + V A^T + D with fixed-step classic RK4.

    t_final is rounded to a whole number of steps. V is symmetrized after
    every step; global error is O(dt^4). Raises StepTooLarge once the
    covariance norm passes 1e12, the signature of a step size beyond the
    stability region.
    """
    if not dt > 0.0:
        raise InvalidSpec("dt must be > 0")
    if t_final < 0.0:
        raise InvalidSpec("t_final must be >= 0")
    if record_every < 1:
        raise InvalidSpec("record_every must be >= 1")
    if tuple(v0.modes) != tuple(model.modes):
        raise InvalidSpec("initial state and model must agree on modes")
    a = model.drift
    d = model.diffusion
    v = np.array(v0.matrix, dtype=float)
    steps = int(round(t_final / dt))
    times = [0.0]
    frames = [v.copy()]
    half = 0.5 * dt
    for k in range(1, steps + 1):
        k1 = a @ v + v @ a.T + d
        v2 = v + half * k1
        k2 = a @ v2 + v2 @ a.T + d
        v3 = v + half * k2
        k3 = a @ v3 + v3 @ a.T + d
        v4 = v + dt * k3
        k4 = a @ v4 + v4 @ a.T + d
        v = v + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        v = 0.5 * (v + v.T)
        if float(np.abs(v).max()) > 1e12:
            raise StepTooLarge(f"covariance left the stable region at t = {k * dt:g}")
        if k % record_every == 0 or k == steps:
            times.append(k * dt)
            frames.append(v.copy())
    return CovarianceTrajectory(
        times=np.asarray(times), matrices=np.stack(frames), modes=model.modes
    )


def occupations(state: CovarianceState) -> FloatArray:
    """Occupation n' = (<x^2> + <p^2> - 1)/2 of every mode in the state."""
    v = state.matrix
    idx = 2 * np.arange(len(state.modes))
    n = 0.5 * (v[idx, idx] + v[idx + 1, idx + 1] - 1.0)
    if float(n.min()) < -1e-9:
        raise NonPhysical(f"negative occupation {float(n.min()):.3e}")
    return n


def mechanical_occupations(state: CovarianceState) -> FloatArray:
    """Occupations of the mechanical modes only, cavity pair skipped."""
    return occupations(state)[list(state.mech_indices)]


def heat_flows_weak(
    state: CovarianceState,
    gamma: Sequence[float],
    n_bath: Sequence[float],
    omega: float,
    solver: str = SOLVER_ODE_STEADY,
) -> HeatFlowReport:
    """Per-element heat flow J_l = 2 omega gamma_l (n_l - n_l').

    Positive values mean heat enters the element from its bath. The
    balancing counter-flow through the remaining reservoir (the common bath
    of a reduced model, or the cavity) is reported as cavity_flow = -sum J_l.
    """
    occ = mechanical_occupations(state)
    gamma_arr = np.asarray(gamma, dtype=float)
    n_arr = np.asarray(n_bath, dtype=float)
    if gamma_arr.shape != occ.shape or n_arr.shape != occ.shape:
        raise InvalidSpec("need one (gamma, n_bath) pair per mechanical mode")
    flows = 2.0 * omega * gamma_arr * (n_arr - occ)
    total = float(np.sum(flows))
    return HeatFlowReport(
        occupations=occ,
        flows=flows,
        total_mechanical=total,
        cavity_flow=-total,
        solver=solver,
    )


def energy_flows_full(model: LinearModel, state: CovarianceState) -> Mapping[str, float]:
    """Exact per-reservoir energy flow 1/2 tr(H (A_l V + V A_l^T + D_l)).

    Returns one value per bath, the cavity included. At a steady state they
    sum to zero; away from it the imbalance is d<H>/dt.
    """
    v = state.matrix
    h = model.hamiltonian
    return {
        bath.label: 0.5 * float(np.trace(h @ (bath.drift @ v + v @ bath.drift.T + bath.diffusion)))
        for bath in model.baths
    }
