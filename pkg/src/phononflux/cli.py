"""Deterministic command-line front end.

Scenarios are described by a strict JSON config: unknown keys are fatal and
every complaint carries a ``$.dotted.path`` to the offending entry. The same
config always produces byte-identical CSV files, whatever the thread count.

Config layout::

    {
      "task": "steady" | "transient" | "sweep" | "scaling" | "selfcheck",
      "mode": "full" | "effective" | "closed-form",
      "system": { ... },
      "sweep":  {"axes": [{"name", "min", "max", "points"}, ...]},
      "scaling": {"sizes": [16, 32, ...]},
      "transient": {"t_final", "dt"?, "record_every"?, "initial_occupations"?},
      "output": "prefix",
      "tolerances": {"regime_threshold": 0.1}
    }

With ``mode: "full"`` the system block describes the physical array
(n_elements, omega, detuning, kappa, gamma, n_bath, g); gamma and n_bath
accept a scalar or a per-element list, and g accepts a per-element list or
``{"profile": "transmissive", "total": g}``. With the effective and
closed-form modes the system block describes the reduced pair directly
(omega, lambda_coupling?, gamma, gamma_bar, n1, n2, n_common).

Sweep axes are the dimensionless ratios ``lambda_over_gamma`` and
``gammabar_over_gamma``; rows iterate the common-bath axis in the outer
loop and the coupling axis in the inner loop. Transient initial
occupations are per mode, cavity first in full mode.

Each CSV starts with ``# phononflux v<version> config=<sha256> solver=<tag>``
followed by a comma-separated header row; floats are written in shortest
round-trip form.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import math
import os
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__
from .closedform import equal_temp_array, fourier_scaling, two_osc_heatflows, two_osc_occupations
from .dynamics import (
    SOLVER_CLOSED_FORM,
    SOLVER_LYAPUNOV_FULL,
    SOLVER_ODE_STEADY,
    FloatArray,
    assemble_effective_two,
    assemble_full,
    default_timestep,
    energy_flows_full,
    evolve,
    heat_flows_weak,
    lyapunov_solve,
    occupations,
    thermal_state,
    vacuum_state,
)
from .elimination import reduce_two_element, regime_report
from .errors import (
    AsymmetricArray,
    BlueDetunedRegime,
    ConfigError,
    InvalidSpec,
    NumericalError,
    PhononFluxError,
)
from .model import ArraySpec, EffectiveTwoOscModel, transmissive_couplings, validate_spec
from .selfcheck import run_all_checks

_TASKS = ("steady", "transient", "sweep", "scaling", "selfcheck")
_MODES = ("full", "effective", "closed-form")
_AXIS_NAMES = ("lambda_over_gamma", "gammabar_over_gamma")
_MAX_TRANSIENT_ROWS = 2000

_MISSING = object()


# ---------------------------------------------------------------------------
# result tables


@dataclass(frozen=True)
class ResultTable:
    """Rectangular, finite, named block of numbers bound to its config hash."""

    name: str
    columns: tuple[str, ...]
    data: FloatArray
    config_hash: str
    solver: str

    def __post_init__(self) -> None:
        arr = np.asarray(self.data, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != len(self.columns):
            raise InvalidSpec("table data must be rectangular with one column per name")
        if arr.size and not np.isfinite(arr).all():
            raise InvalidSpec("table entries must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "columns", tuple(str(c) for c in self.columns))


_HEADER_RE = re.compile(
    r"^# phononflux v(?P<version>\S+) config=(?P<hash>[0-9a-f]{64}) solver=(?P<solver>\S+)$"
)


def write_table(table: ResultTable, path: str | os.PathLike[str]) -> None:
    """Write one CSV with the pinned comment header, byte-deterministically."""
    lines = [f"# phononflux v{__version__} config={table.config_hash} solver={table.solver}"]
    lines.append(",".join(table.columns))
    for row in table.data:
        lines.append(",".join(repr(float(x)) for x in row))
    target = Path(path)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def read_table(path: str | os.PathLike[str]) -> ResultTable:
    """Parse a CSV written by write_table back into a ResultTable."""
    target = Path(path)
    with open(target, "r", encoding="utf-8", newline="") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise InvalidSpec(f"{target}: empty table file")
    match = _HEADER_RE.match(lines[0])
    if match is None:
        raise InvalidSpec(f"{target}: malformed header line")
    if len(lines) < 2:
        raise InvalidSpec(f"{target}: missing column row")
    columns = tuple(lines[1].split(","))
    rows = [[float(cell) for cell in line.split(",")] for line in lines[2:] if line]
    data = np.asarray(rows, dtype=float).reshape(len(rows), len(columns))
    return ResultTable(
        name=target.stem,
        columns=columns,
        data=data,
        config_hash=match.group("hash"),
        solver=match.group("solver"),
    )


# ---------------------------------------------------------------------------
# config parsing


@dataclass(frozen=True)
class SweepAxis:
    name: str
    minimum: float
    maximum: float
    points: int

    @property
    def values(self) -> FloatArray:
        return np.linspace(self.minimum, self.maximum, self.points)


@dataclass(frozen=True)
class TransientSettings:
    t_final: float
    dt: float | None
    record_every: int | None
    initial_occupations: tuple[float, ...] | None


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully validated scenario, with defaults applied and the hash pinned."""

    task: str
    mode: str | None
    array_system: ArraySpec | None
    reduced_system: EffectiveTwoOscModel | None
    sweep: tuple[SweepAxis, ...]
    scaling_sizes: tuple[int, ...]
    transient: TransientSettings | None
    output: str
    regime_threshold: float
    config_hash: str


def _fail(path: str, message: str) -> None:
    raise ConfigError(path, message)


def _require_object(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        _fail(path, "must be a JSON object")
    return value


def _check_keys(obj: dict, path: str, allowed: Sequence[str], required: Sequence[str]) -> None:
    for key in obj:
        if key not in allowed:
            _fail(f"{path}.{key}", "unknown key")
    for key in required:
        if key not in obj:
            _fail(f"{path}.{key}", "missing required key")


def _as_float(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(path, "must be a number")
    out = float(value)
    if not math.isfinite(out):
        _fail(path, "must be finite")
    return out


def _as_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(path, "must be an integer")
    return int(value)


def _get_float(obj: dict, key: str, path: str, default: Any = _MISSING, *,
               minimum: float | None = None, exclusive: bool = False) -> float:
    if key not in obj:
        if default is _MISSING:
            _fail(f"{path}.{key}", "missing required key")
        return default
    out = _as_float(obj[key], f"{path}.{key}")
    if minimum is not None:
        if exclusive and not out > minimum:
            _fail(f"{path}.{key}", f"must be > {minimum:g}")
        if not exclusive and not out >= minimum:
            _fail(f"{path}.{key}", f"must be >= {minimum:g}")
    return out


def _get_int(obj: dict, key: str, path: str, default: Any = _MISSING, *,
             minimum: int | None = None) -> int:
    if key not in obj:
        if default is _MISSING:
            _fail(f"{path}.{key}", "missing required key")
        return default
    out = _as_int(obj[key], f"{path}.{key}")
    if minimum is not None and out < minimum:
        _fail(f"{path}.{key}", f"must be >= {minimum}")
    return out


def _rate_list(obj: dict, key: str, path: str, count: int, *, minimum: float) -> tuple[float, ...]:
    """Scalar broadcast or per-element list of nonnegative rates."""
    if key not in obj:
        _fail(f"{path}.{key}", "missing required key")
    value = obj[key]
    if isinstance(value, list):
        if len(value) != count:
            _fail(f"{path}.{key}", f"expected {count} entries, got {len(value)}")
        out = tuple(_as_float(v, f"{path}.{key}[{i}]") for i, v in enumerate(value))
    else:
        out = (_as_float(value, f"{path}.{key}"),) * count
    for i, v in enumerate(out):
        if v < minimum:
            _fail(f"{path}.{key}[{i}]" if isinstance(value, list) else f"{path}.{key}",
                  f"must be >= {minimum:g}")
    return out


def _coupling_list(obj: dict, path: str, count: int) -> tuple[float, ...]:
    if "g" not in obj:
        _fail(f"{path}.g", "missing required key")
    value = obj["g"]
    if isinstance(value, dict):
        _check_keys(value, f"{path}.g", ("profile", "total"), ("profile", "total"))
        profile = value["profile"]
        if profile != "transmissive":
            _fail(f"{path}.g.profile", "unknown profile (expected \"transmissive\")")
        total = _get_float(value, "total", f"{path}.g", minimum=0.0, exclusive=True)
        if count <= 2:
            _fail(f"{path}.g.profile", "transmissive profile needs more than 2 elements")
        return transmissive_couplings(count, total)
    if isinstance(value, list):
        if len(value) != count:
            _fail(f"{path}.g", f"expected {count} entries, got {len(value)}")
        return tuple(_as_float(v, f"{path}.g[{i}]") for i, v in enumerate(value))
    _fail(f"{path}.g", "must be a list or a profile object")
    raise AssertionError("unreachable")


def _parse_array_system(obj: dict, path: str) -> ArraySpec:
    keys = ("n_elements", "omega", "detuning", "kappa", "gamma", "n_bath", "g")
    _check_keys(obj, path, keys, keys)
    n = _get_int(obj, "n_elements", path, minimum=1)
    spec = ArraySpec(
        n_elements=n,
        omega=_get_float(obj, "omega", path),
        detuning=_get_float(obj, "detuning", path),
        kappa=_get_float(obj, "kappa", path, minimum=0.0, exclusive=True),
        gamma=_rate_list(obj, "gamma", path, n, minimum=0.0),
        n_bath=_rate_list(obj, "n_bath", path, n, minimum=0.0),
        g=_coupling_list(obj, path, n),
    )
    try:
        validate_spec(spec)
    except InvalidSpec as exc:
        _fail(path, str(exc))
    return spec


def _parse_reduced_system(obj: dict, path: str) -> EffectiveTwoOscModel:
    keys = ("omega", "lambda_coupling", "gamma", "gamma_bar", "n1", "n2", "n_common")
    required = ("omega", "gamma", "gamma_bar", "n1", "n2", "n_common")
    _check_keys(obj, path, keys, required)
    return EffectiveTwoOscModel(
        omega=_get_float(obj, "omega", path),
        lambda_coupling=_get_float(obj, "lambda_coupling", path, 0.0),
        gamma=_get_float(obj, "gamma", path, minimum=0.0),
        gamma_bar=_get_float(obj, "gamma_bar", path, minimum=0.0),
        n1=_get_float(obj, "n1", path, minimum=0.0),
        n2=_get_float(obj, "n2", path, minimum=0.0),
        n_common=_get_float(obj, "n_common", path, minimum=0.0),
    )


def _parse_sweep(obj: dict, path: str) -> tuple[SweepAxis, ...]:
    _check_keys(obj, path, ("axes",), ("axes",))
    axes_raw = obj["axes"]
    if not isinstance(axes_raw, list) or not axes_raw:
        _fail(f"{path}.axes", "must be a non-empty list")
    if len(axes_raw) > 2:
        _fail(f"{path}.axes", "at most two axes")
    axes = []
    for i, entry in enumerate(axes_raw):
        apath = f"{path}.axes[{i}]"
        entry = _require_object(entry, apath)
        _check_keys(entry, apath, ("name", "min", "max", "points"),
                    ("name", "min", "max", "points"))
        name = entry["name"]
        if name not in _AXIS_NAMES:
            _fail(f"{apath}.name", f"must be one of {_AXIS_NAMES}")
        lo = _as_float(entry["min"], f"{apath}.min")
        hi = _as_float(entry["max"], f"{apath}.max")
        if hi < lo:
            _fail(f"{apath}.max", "must be >= min")
        points = _as_int(entry["points"], f"{apath}.points")
        if points < 2:
            _fail(f"{apath}.points", "grids need at least 2 points per axis")
        axes.append(SweepAxis(name, lo, hi, points))
    if len(axes) == 2 and axes[0].name == axes[1].name:
        _fail(f"{path}.axes[1].name", "duplicate axis")
    return tuple(axes)


def _parse_scaling(obj: dict, path: str) -> tuple[int, ...]:
    _check_keys(obj, path, ("sizes",), ("sizes",))
    raw = obj["sizes"]
    if not isinstance(raw, list) or len(raw) < 2:
        _fail(f"{path}.sizes", "must be a list of at least 2 sizes")
    sizes = tuple(_as_int(v, f"{path}.sizes[{i}]") for i, v in enumerate(raw))
    for i, n in enumerate(sizes):
        if n <= 2:
            _fail(f"{path}.sizes[{i}]", "array sizes must exceed 2")
        if i and n <= sizes[i - 1]:
            _fail(f"{path}.sizes[{i}]", "sizes must be strictly increasing")
    return sizes


def _parse_transient(obj: dict, path: str, n_modes: int) -> TransientSettings:
    keys = ("t_final", "dt", "record_every", "initial_occupations")
    _check_keys(obj, path, keys, ("t_final",))
    t_final = _get_float(obj, "t_final", path, minimum=0.0, exclusive=True)
    dt = None
    if "dt" in obj:
        dt = _get_float(obj, "dt", path, minimum=0.0, exclusive=True)
    record_every = None
    if "record_every" in obj:
        record_every = _get_int(obj, "record_every", path, minimum=1)
    initial = None
    if "initial_occupations" in obj:
        raw = obj["initial_occupations"]
        if not isinstance(raw, list):
            _fail(f"{path}.initial_occupations", "must be a list")
        if len(raw) != n_modes:
            _fail(f"{path}.initial_occupations",
                  f"expected {n_modes} entries (one per mode, cavity first), got {len(raw)}")
        initial = tuple(
            _as_float(v, f"{path}.initial_occupations[{i}]") for i, v in enumerate(raw)
        )
        for i, v in enumerate(initial):
            if v < 0.0:
                _fail(f"{path}.initial_occupations[{i}]", "must be >= 0")
    return TransientSettings(t_final, dt, record_every, initial)


def _canonical_hash(normalized: dict) -> str:
    text = json.dumps(normalized, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def parse_config(text: str | bytes) -> ScenarioConfig:
    """Validate a JSON scenario; every error names its ``$.path``."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError:
            _fail("$", "config must be UTF-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        _fail("$", f"invalid JSON: {exc}")
    raw = _require_object(raw, "$")

    allowed = ("task", "mode", "system", "sweep", "scaling", "transient", "output", "tolerances")
    _check_keys(raw, "$", allowed, ("task",))
    task = raw["task"]
    if task not in _TASKS:
        _fail("$.task", f"must be one of {_TASKS}")

    tolerances = _require_object(raw.get("tolerances", {}), "$.tolerances")
    _check_keys(tolerances, "$.tolerances", ("regime_threshold",), ())
    threshold = _get_float(tolerances, "regime_threshold", "$.tolerances", 0.1,
                           minimum=0.0, exclusive=True)

    output = raw.get("output", "out")
    if not isinstance(output, str) or not output:
        _fail("$.output", "must be a non-empty string")

    mode = None
    array_system = None
    reduced_system = None
    sweep: tuple[SweepAxis, ...] = ()
    sizes: tuple[int, ...] = ()
    transient = None
    normalized: dict[str, Any] = {
        "task": task,
        "tolerances": {"regime_threshold": threshold},
    }

    if task == "selfcheck":
        for key in ("mode", "system", "sweep", "scaling", "transient"):
            if key in raw:
                _fail(f"$.{key}", "not allowed with task \"selfcheck\"")
    else:
        if "mode" not in raw:
            _fail("$.mode", "missing required key")
        mode = raw["mode"]
        if mode not in _MODES:
            _fail("$.mode", f"must be one of {_MODES}")
        if "system" not in raw:
            _fail("$.system", "missing required key")
        system = _require_object(raw["system"], "$.system")
        normalized["mode"] = mode
        if mode == "full":
            array_system = _parse_array_system(system, "$.system")
            normalized["system"] = {
                "n_elements": array_system.n_elements,
                "omega": array_system.omega,
                "detuning": array_system.detuning,
                "kappa": array_system.kappa,
                "gamma": list(array_system.gamma),
                "n_bath": list(array_system.n_bath),
                "g": list(array_system.g),
            }
        else:
            reduced_system = _parse_reduced_system(system, "$.system")
            normalized["system"] = {
                "omega": reduced_system.omega,
                "lambda_coupling": reduced_system.lambda_coupling,
                "gamma": reduced_system.gamma,
                "gamma_bar": reduced_system.gamma_bar,
                "n1": reduced_system.n1,
                "n2": reduced_system.n2,
                "n_common": reduced_system.n_common,
            }

        for key, tasks in (("sweep", ("sweep",)), ("scaling", ("scaling",)),
                           ("transient", ("transient",))):
            if key in raw and task not in tasks:
                _fail(f"$.{key}", f"only allowed with task \"{key}\"")

        if task == "sweep":
            if mode == "full":
                _fail("$.mode", "sweep supports the closed-form and effective modes")
            if "sweep" not in raw:
                _fail("$.sweep", "missing required key")
            if reduced_system.gamma <= 0.0:
                _fail("$.system.gamma", "sweep ratios need gamma > 0")
            sweep = _parse_sweep(_require_object(raw["sweep"], "$.sweep"), "$.sweep")
            normalized["sweep"] = {
                "axes": [
                    {"name": a.name, "min": a.minimum, "max": a.maximum, "points": a.points}
                    for a in sweep
                ],
            }
        elif task == "scaling":
            if mode != "closed-form":
                _fail("$.mode", "scaling supports only the closed-form mode")
            if "scaling" not in raw:
                _fail("$.scaling", "missing required key")
            if reduced_system.n1 != reduced_system.n2:
                _fail("$.system.n2", "scaling needs equal bath occupations n1 == n2")
            sizes = _parse_scaling(_require_object(raw["scaling"], "$.scaling"), "$.scaling")
            normalized["scaling"] = {"sizes": list(sizes)}
        elif task == "transient":
            if mode == "closed-form":
                _fail("$.mode", "transient needs an integrable model (full or effective)")
            if "transient" not in raw:
                _fail("$.transient", "missing required key")
            n_modes = array_system.n_elements + 1 if mode == "full" else 2
            transient = _parse_transient(
                _require_object(raw["transient"], "$.transient"), "$.transient", n_modes
            )
            block: dict[str, Any] = {"t_final": transient.t_final}
            if transient.dt is not None:
                block["dt"] = transient.dt
            if transient.record_every is not None:
                block["record_every"] = transient.record_every
            if transient.initial_occupations is not None:
                block["initial_occupations"] = list(transient.initial_occupations)
            normalized["transient"] = block

    return ScenarioConfig(
        task=task,
        mode=mode,
        array_system=array_system,
        reduced_system=reduced_system,
        sweep=sweep,
        scaling_sizes=sizes,
        transient=transient,
        output=output,
        regime_threshold=threshold,
        config_hash=_canonical_hash(normalized),
    )


# ---------------------------------------------------------------------------
# task runners


def _steady_full(cfg: ScenarioConfig) -> list[ResultTable]:
    spec = cfg.array_system
    model = assemble_full(spec)
    state = lyapunov_solve(model)
    occ = occupations(state)
    weak = heat_flows_weak(state, spec.gamma, spec.n_bath, spec.omega,
                           solver=SOLVER_LYAPUNOV_FULL)
    exact = energy_flows_full(model, state)
    rows = [
        [
            float(j + 1), spec.g[j], spec.gamma[j], spec.n_bath[j],
            occ[j + 1], weak.flows[j], exact[f"element_{j + 1}"],
        ]
        for j in range(spec.n_elements)
    ]
    tables = [
        ResultTable(
            "steady",
            ("element", "coupling", "gamma", "n_bath", "occupation",
             "flow_weak", "flow_energy"),
            np.asarray(rows),
            cfg.config_hash,
            SOLVER_LYAPUNOV_FULL,
        )
    ]
    element_total = math.fsum(exact[f"element_{j + 1}"] for j in range(spec.n_elements))
    balance = [[
        occ[0], exact["cavity"], element_total,
        math.fsum(exact.values()), weak.total_mechanical,
    ]]
    tables.append(ResultTable(
        "balance",
        ("cavity_occupation", "cavity_flow_energy", "element_flow_energy",
         "flow_residual", "element_flow_weak"),
        np.asarray(balance),
        cfg.config_hash,
        SOLVER_LYAPUNOV_FULL,
    ))
    if spec.n_elements == 2:
        try:
            reduced = reduce_two_element(spec)
        except (AsymmetricArray, BlueDetunedRegime):
            return tables
        report = regime_report(spec, reduced, threshold=cfg.regime_threshold)
        # CSV entries must stay finite; an unbounded margin means "no constraint"
        margins = [min(m, np.finfo(float).max) for m in report.margins]
        row = [[
            margins[0], margins[1], margins[2], report.threshold,
            float(report.weak_coupling_ok), float(report.spring_small_ok),
            float(report.hierarchy_ok),
        ]]
        tables.append(ResultTable(
            "regime",
            ("weak_coupling_margin", "spring_margin", "hierarchy_margin",
             "threshold", "weak_coupling_ok", "spring_small_ok", "hierarchy_ok"),
            np.asarray(row),
            cfg.config_hash,
            "diagnostic",
        ))
    return tables


def _steady_effective(cfg: ScenarioConfig) -> list[ResultTable]:
    m = cfg.reduced_system
    state = lyapunov_solve(assemble_effective_two(m))
    report = heat_flows_weak(state, (m.gamma, m.gamma), (m.n1, m.n2), m.omega,
                             solver=SOLVER_ODE_STEADY)
    occ = occupations(state)
    rows = [[1.0, occ[0], report.flows[0]], [2.0, occ[1], report.flows[1]]]
    tables = [ResultTable("steady", ("element", "occupation", "flow"),
                          np.asarray(rows), cfg.config_hash, SOLVER_ODE_STEADY)]
    balance = [[report.total_mechanical, report.cavity_flow]]
    tables.append(ResultTable("balance", ("element_flow_total", "counter_flow"),
                              np.asarray(balance), cfg.config_hash, SOLVER_ODE_STEADY))
    return tables


def _steady_closed(cfg: ScenarioConfig) -> list[ResultTable]:
    m = cfg.reduced_system
    occ = two_osc_occupations(m)
    flows = two_osc_heatflows(m)
    rows = [
        [1.0, occ[0], flows.flows[0], flows.as_printed[0]],
        [2.0, occ[1], flows.flows[1], flows.as_printed[1]],
    ]
    tables = [ResultTable("steady", ("element", "occupation", "flow", "flow_as_printed"),
                          np.asarray(rows), cfg.config_hash, SOLVER_CLOSED_FORM)]
    total = math.fsum(flows.flows)
    tables.append(ResultTable("balance", ("element_flow_total", "counter_flow"),
                              np.asarray([[total, -total]]), cfg.config_hash,
                              SOLVER_CLOSED_FORM))
    return tables


def _run_transient(cfg: ScenarioConfig) -> list[ResultTable]:
    settings = cfg.transient
    if cfg.mode == "full":
        model = assemble_full(cfg.array_system)
        labels = ["occupation_cavity"] + [
            f"occupation_{j + 1}" for j in range(cfg.array_system.n_elements)
        ]
    else:
        model = assemble_effective_two(cfg.reduced_system)
        labels = ["occupation_1", "occupation_2"]
    dt = settings.dt if settings.dt is not None else default_timestep(model)
    if settings.initial_occupations is None:
        v0 = vacuum_state(model.modes)
    else:
        v0 = thermal_state(model.modes, settings.initial_occupations)
    steps = max(1, int(round(settings.t_final / dt)))
    record_every = settings.record_every
    if record_every is None:
        record_every = max(1, -(-steps // _MAX_TRANSIENT_ROWS))
    traj = evolve(model, v0, settings.t_final, dt, record_every=record_every)
    diag = traj.matrices[:, np.arange(traj.matrices.shape[1]), np.arange(traj.matrices.shape[1])]
    per_mode = 0.5 * (diag[:, 0::2] + diag[:, 1::2] - 1.0)
    data = np.column_stack([traj.times, per_mode])
    return [ResultTable("transient", ("time", *labels), data, cfg.config_hash,
                        "rk4-transient")]


def _sweep_point(base: EffectiveTwoOscModel, mode: str,
                 lam_ratio: float, gbar_ratio: float) -> tuple[float, float]:
    m = EffectiveTwoOscModel(
        omega=base.omega,
        lambda_coupling=lam_ratio * base.gamma,
        gamma=base.gamma,
        gamma_bar=gbar_ratio * base.gamma,
        n1=base.n1,
        n2=base.n2,
        n_common=base.n_common,
    )
    if mode == "closed-form":
        flows = two_osc_heatflows(m).flows
        return flows[0], flows[1]
    state = lyapunov_solve(assemble_effective_two(m))
    report = heat_flows_weak(state, (m.gamma, m.gamma), (m.n1, m.n2), m.omega,
                             solver=SOLVER_ODE_STEADY)
    return report.flows[0], report.flows[1]


def _run_sweep(cfg: ScenarioConfig, threads: int) -> list[ResultTable]:
    base = cfg.reduced_system
    by_name = {axis.name: axis.values for axis in cfg.sweep}
    lam_values = by_name.get("lambda_over_gamma",
                             np.asarray([base.lambda_coupling / base.gamma]))
    gbar_values = by_name.get("gammabar_over_gamma",
                              np.asarray([base.gamma_bar / base.gamma]))
    grid = [(lam, gbar) for gbar in gbar_values for lam in lam_values]

    def point(args: tuple[float, float]) -> tuple[float, float]:
        return _sweep_point(base, cfg.mode, args[0], args[1])

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            flows = list(pool.map(point, grid))
    else:
        flows = [point(args) for args in grid]

    solver = SOLVER_CLOSED_FORM if cfg.mode == "closed-form" else SOLVER_ODE_STEADY
    tables = []
    for name, pick in (("J1", 0), ("J2", 1), ("Jtotal", 2)):
        rows = []
        for (lam, gbar), (j1, j2) in zip(grid, flows):
            value = j1 + j2 if pick == 2 else (j1, j2)[pick]
            rows.append([lam, gbar, value])
        tables.append(ResultTable(
            name, ("lambda_over_gamma", "gammabar_over_gamma", "flow"),
            np.asarray(rows), cfg.config_hash, solver,
        ))
    return tables


def _run_scaling(cfg: ScenarioConfig) -> list[ResultTable]:
    m = cfg.reduced_system
    result = fourier_scaling(
        cfg.scaling_sizes,
        omega=m.omega,
        gamma=m.gamma,
        n_occupation=m.n1,
        gamma_bar=m.gamma_bar,
        n_common=m.n_common,
    )
    rows = np.column_stack([
        np.asarray(result.sizes, dtype=float),
        result.flows_first,
        result.flows_quarter,
        result.mean_flow,
    ])
    tables = [ResultTable("scaling", ("n_elements", "flow_first", "flow_quarter", "flow_mean"),
                          rows, cfg.config_hash, SOLVER_CLOSED_FORM)]
    slopes = [[result.slope_first, result.slope_quarter, result.slope_mean]]
    tables.append(ResultTable("slopes", ("slope_first", "slope_quarter", "slope_mean"),
                              np.asarray(slopes), cfg.config_hash, SOLVER_CLOSED_FORM))
    return tables


def run_selfcheck(echo: Callable[[str], None] | None = print) -> tuple[int, ResultTable]:
    """Run the reduced cross-validation suite; exit code 0 iff all checks pass."""
    results = run_all_checks()
    rows = []
    for r in results:
        if echo is not None:
            verdict = "PASS" if r.passed else "FAIL"
            echo(f"{verdict} criterion-{r.criterion}.{r.index} {r.label}: "
                 f"measured {r.measured:.3e}, bound {r.bound:.3e}")
        rows.append([float(r.criterion), float(r.index), float(r.passed),
                     r.measured, r.bound])
    table = ResultTable(
        "selfcheck",
        ("criterion", "index", "passed", "measured", "bound"),
        np.asarray(rows),
        _canonical_hash({"task": "selfcheck", "tolerances": {"regime_threshold": 0.1}}),
        "selfcheck",
    )
    code = 0 if all(r.passed for r in results) else 3
    return code, table


def run_config(cfg: ScenarioConfig, threads: int = 1,
               echo: Callable[[str], None] | None = print) -> tuple[int, list[ResultTable]]:
    """Execute a parsed scenario; returns (exit code, tables to write)."""
    if cfg.task == "selfcheck":
        code, table = run_selfcheck(echo)
        return code, [table]
    if cfg.task == "steady":
        runner = {
            "full": _steady_full,
            "effective": _steady_effective,
            "closed-form": _steady_closed,
        }[cfg.mode]
        return 0, runner(cfg)
    if cfg.task == "transient":
        return 0, _run_transient(cfg)
    if cfg.task == "sweep":
        return 0, _run_sweep(cfg, threads)
    return 0, _run_scaling(cfg)


# ---------------------------------------------------------------------------
# presets


def _fig2_config(ratio: int) -> dict:
    return {
        "task": "sweep",
        "mode": "closed-form",
        "system": {
            "omega": 1.0,
            "lambda_coupling": 0.0,
            "gamma": 1.0,
            "gamma_bar": 0.0,
            "n1": float(ratio),
            "n2": 1.0,
            "n_common": 0.0,
        },
        "sweep": {
            "axes": [
                {"name": "lambda_over_gamma", "min": 0.0, "max": 20.0, "points": 81},
                {"name": "gammabar_over_gamma", "min": 0.0, "max": 20.0, "points": 81},
            ],
        },
    }


def run_fig2_preset(ratio: int = 10, threads: int = 1) -> list[ResultTable]:
    """Closed-form heat flow maps over the coupling and common-bath ratios."""
    if ratio not in (2, 10):
        raise ConfigError("$.ratio", "must be 2 or 10")
    cfg = parse_config(json.dumps(_fig2_config(ratio)))
    _, tables = run_config(cfg, threads=threads, echo=None)
    return tables


_FIG3_SIZES = (16, 32, 64, 128, 256, 512, 1024)
_FIG3_PROFILE_N = 20


def run_fig3_preset() -> list[ResultTable]:
    """Per-element flow profile at N=20 plus the size-scaling series."""
    omega, gamma, gamma_bar = 1.0, 1.0, 2.0
    n_occ, n_common = 1.0, 0.0
    config_hash = _canonical_hash({
        "preset": "fig3",
        "profile_size": _FIG3_PROFILE_N,
        "scaling": {"sizes": list(_FIG3_SIZES)},
        "system": {
            "omega": omega, "gamma": gamma, "gamma_bar": gamma_bar,
            "n_occupation": n_occ, "n_common": n_common,
        },
    })
    # cavity parameters are inert in the closed form; any valid pair works
    spec = ArraySpec(
        n_elements=_FIG3_PROFILE_N,
        omega=omega,
        detuning=-omega,
        kappa=omega,
        gamma=(gamma,) * _FIG3_PROFILE_N,
        n_bath=(n_occ,) * _FIG3_PROFILE_N,
        g=transmissive_couplings(_FIG3_PROFILE_N, 1.0),
    )
    report = equal_temp_array(spec, gamma_bar=gamma_bar, n_common=n_common)
    g_sq = sum(x * x for x in spec.g)
    rows = [
        [float(j + 1), spec.g[j] ** 2 / g_sq, report.flows[j]]
        for j in range(_FIG3_PROFILE_N)
    ]
    tables = [ResultTable("profile", ("element", "coupling_weight", "flow"),
                          np.asarray(rows), config_hash, SOLVER_CLOSED_FORM)]
    result = fourier_scaling(_FIG3_SIZES, omega=omega, gamma=gamma,
                             n_occupation=n_occ, gamma_bar=gamma_bar, n_common=n_common)
    scaling_rows = np.column_stack([
        np.asarray(result.sizes, dtype=float),
        result.flows_first,
        result.flows_quarter,
        result.mean_flow,
    ])
    tables.append(ResultTable("scaling",
                              ("n_elements", "flow_first", "flow_quarter", "flow_mean"),
                              scaling_rows, config_hash, SOLVER_CLOSED_FORM))
    slopes = [[result.slope_first, result.slope_quarter, result.slope_mean]]
    tables.append(ResultTable("slopes", ("slope_first", "slope_quarter", "slope_mean"),
                              np.asarray(slopes), config_hash, SOLVER_CLOSED_FORM))
    return tables


# ---------------------------------------------------------------------------
# entry point


def _write_all(tables: Sequence[ResultTable], prefix: str,
               echo: Callable[[str], None]) -> None:
    for table in tables:
        path = f"{prefix}_{table.name}.csv"
        write_table(table, path)
        echo(f"wrote {path}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="phononflux",
        description="steady-state heat transport in cavity-coupled oscillator arrays",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a JSON scenario config")
    p_run.add_argument("config", help="path to the JSON config file")
    p_preset = sub.add_parser("preset", help="run a built-in scenario")
    p_preset.add_argument("which", choices=("fig2", "fig3"))
    p_preset.add_argument("--ratio", type=int, default=10,
                          help="bath occupation ratio n1/n2 for fig2 (2 or 10)")
    sub.add_parser("selfcheck", help="run the built-in cross-validation suite")
    for p in sub.choices.values():
        p.add_argument("--out", default=None, help="output path prefix")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads for grid evaluation")

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; that code is reserved here
        code = exc.code if isinstance(exc.code, int) else 1
        return 1 if code == 2 else code

    try:
        if args.threads < 1:
            raise ConfigError("$.threads", "must be >= 1")
        if args.command == "run":
            cfg = parse_config(Path(args.config).read_bytes())
            code, tables = run_config(cfg, threads=args.threads)
            _write_all(tables, args.out or cfg.output, print)
            return code
        if args.command == "preset":
            if args.which == "fig2":
                tables = run_fig2_preset(args.ratio, threads=args.threads)
                prefix = args.out or f"fig2_r{args.ratio}"
            else:
                tables = run_fig3_preset()
                prefix = args.out or "fig3"
            _write_all(tables, prefix, print)
            return 0
        code, table = run_selfcheck()
        _write_all([table], args.out or "selfcheck", print)
        return code
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PhononFluxError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
