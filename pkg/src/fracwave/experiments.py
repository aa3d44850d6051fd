"""Declarative scenario runner, lifespan sweep, and phase-diagram driver.

A Scenario pins every knob of one run: coefficients, grid, initial
data, step size, stop rule, recording cadence, dealiasing, and which
snapshots to persist.  Runs write a diagnostics CSV, snapshot/spectrum
CSVs, and a JSON manifest recording the conventions in force, so any
output directory is self-describing and reruns are bit-identical.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .core import EquationParams, SpectralGrid, make_grid
from .diagnostics import CSV_HEADER, DiagnosticsRecord
from .dynamics import RunOutcome, RunVerdict, StopCondition, evolve, stable_dt
from .initial_data import InitialCondition
from .transforms import FieldState

# Outcome labels used in phase/sweep CSVs ("smooth" is the domain term
# for a run that reached max_time without tripping the drift rule).
_OUTCOME_LABELS = {
    RunOutcome.COMPLETED: "smooth",
    RunOutcome.BLOW_UP: "blow-up",
    RunOutcome.ABORTED: "aborted",
}


@dataclass(frozen=True)
class Scenario:
    name: str
    params: EquationParams
    L: float
    N: int
    initial: InitialCondition
    stop: StopCondition
    dt: Union[float, str] = "auto"
    record_every: int = 100
    dealias: bool = True
    snapshot_times: tuple = ()
    spectrum_times: tuple = ()
    sobolev_index: Optional[float] = None

    def __post_init__(self):
        if isinstance(self.dt, str):
            if self.dt != "auto":
                raise ValueError(f"dt must be a positive number or 'auto', got {self.dt!r}")
        elif not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.record_every < 1:
            raise ValueError(f"record_every must be >= 1, got {self.record_every}")
        for t in tuple(self.snapshot_times) + tuple(self.spectrum_times):
            if t > self.stop.max_time:
                raise ValueError(
                    f"output time {t} exceeds max_time {self.stop.max_time}")

    def resolve_dt(self, grid: SpectralGrid) -> float:
        if self.dt == "auto":
            return stable_dt(self.params, grid, safety=0.5)
        return float(self.dt)


@dataclass(frozen=True)
class RunResult:
    scenario: Scenario
    verdict: RunVerdict
    records: tuple
    final_state: Optional[FieldState]
    outdir: Optional[Path] = None
    diag_path: Optional[Path] = None
    manifest_path: Optional[Path] = None
    snapshot_paths: dict = field(default_factory=dict)
    spectrum_paths: dict = field(default_factory=dict)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_snapshot(path: Path, state: FieldState, grid: SpectralGrid):
    lines = ["x,u"]
    lines += (f"{_fmt(x)},{_fmt(u)}" for x, u in zip(grid.x, state.values))
    path.write_text("\n".join(lines) + "\n")


def _write_spectrum(path: Path, state: FieldState, grid: SpectralGrid):
    order = np.argsort(grid.k)
    mod = np.abs(state.spectrum)
    lines = ["k,modulus"]
    lines += (f"{_fmt(grid.k[j])},{_fmt(mod[j])}" for j in order)
    path.write_text("\n".join(lines) + "\n")


def _time_label(t: float) -> str:
    return f"{t:g}"


def run_scenario(scenario: Scenario, outdir: Optional[Union[str, Path]] = None) -> RunResult:
    """Run one scenario; persist CSVs and a manifest when outdir is given.

    Written artifacts: diag.csv (the diagnostics series), one
    snapshot_t<T>.csv / spectrum_t<T>.csv per requested output time
    (captured at the first record at or past T), snapshot_final.csv /
    spectrum_final.csv for the end state, and manifest.json.
    """
    grid = make_grid(scenario.L, scenario.N)
    state0 = scenario.initial.build(grid, scenario.params)
    dt = scenario.resolve_dt(grid)

    records: list = []
    last_state: list = [None]
    pending_snaps = sorted(scenario.snapshot_times)
    pending_spectra = sorted(scenario.spectrum_times)
    snapshot_paths: dict = {}
    spectrum_paths: dict = {}

    out = Path(outdir) if outdir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)

    def sink(record: DiagnosticsRecord, state: FieldState):
        records.append(record)
        last_state[0] = state
        # Output times land on the recording granularity, like the
        # blow-up verdict itself.
        while pending_snaps and record.time >= pending_snaps[0] - 1e-9:
            label = _time_label(pending_snaps.pop(0))
            if out is not None:
                path = out / f"snapshot_t{label}.csv"
                _write_snapshot(path, state, grid)
                snapshot_paths[label] = path
        while pending_spectra and record.time >= pending_spectra[0] - 1e-9:
            label = _time_label(pending_spectra.pop(0))
            if out is not None:
                path = out / f"spectrum_t{label}.csv"
                _write_spectrum(path, state, grid)
                spectrum_paths[label] = path

    verdict = evolve(scenario.params, grid, state0, dt, scenario.stop,
                     record_every=scenario.record_every, sink=sink,
                     dealias=scenario.dealias,
                     sobolev_index=scenario.sobolev_index)

    diag_path = manifest_path = None
    if out is not None:
        diag_path = out / "diag.csv"
        diag_path.write_text(
            "\n".join([CSV_HEADER] + [r.csv_row() for r in records]) + "\n")
        if last_state[0] is not None:
            path = out / "snapshot_final.csv"
            _write_snapshot(path, last_state[0], grid)
            snapshot_paths["final"] = path
            path = out / "spectrum_final.csv"
            _write_spectrum(path, last_state[0], grid)
            spectrum_paths["final"] = path
        manifest_path = out / "manifest.json"
        manifest_path.write_text(_manifest_json(
            scenario, dt, verdict, diag_path, snapshot_paths, spectrum_paths))

    return RunResult(scenario=scenario, verdict=verdict, records=tuple(records),
                     final_state=last_state[0], outdir=out, diag_path=diag_path,
                     manifest_path=manifest_path, snapshot_paths=snapshot_paths,
                     spectrum_paths=spectrum_paths)


def _manifest_json(scenario: Scenario, dt: float, verdict: RunVerdict,
                   diag_path: Path, snapshot_paths: dict,
                   spectrum_paths: dict) -> str:
    p = scenario.params
    doc = {
        "name": scenario.name,
        "params": {"kappa": p.kappa, "lambda": p.lam, "mu": p.mu,
                   "nu": p.nu, "alpha": p.alpha},
        "grid": {"L": scenario.L, "N": scenario.N},
        "initial": scenario.initial.describe(),
        "dt": dt,
        "dt_requested": scenario.dt,
        "stop": {"max_time": scenario.stop.max_time,
                 "drift_threshold": scenario.stop.drift_threshold,
                 "linf_ceiling": scenario.stop.linf_ceiling},
        "record_every": scenario.record_every,
        "conventions": {
            "dealias": scenario.dealias,
            "dealias_rule": "2/3 zero-padding mask on the quadratic term",
            "drift_variable": "I2",
            "drift_definition": "|I2(t) - I2(0)| / |I2(0)|",
            "transform": "forward dx-weighted sum, inverse (dk/2pi)-weighted",
            "nyquist": "zeroed in derivative multipliers and interactions",
        },
        "verdict": {"outcome": _OUTCOME_LABELS[verdict.outcome],
                    "end_time": verdict.end_time,
                    "reason": verdict.reason},
        "artifacts": {
            "diagnostics": diag_path.name,
            "snapshots": {k: v.name for k, v in snapshot_paths.items()},
            "spectra": {k: v.name for k, v in spectrum_paths.items()},
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Lifespan sweep


@dataclass(frozen=True)
class SweepRow:
    delta: float
    alpha: float
    end_time: float
    outcome: RunOutcome


@dataclass(frozen=True)
class SweepResult:
    rows: tuple
    fitted_exponent: Optional[float]

    def blow_up_rows(self) -> tuple:
        return tuple(r for r in self.rows if r.outcome is RunOutcome.BLOW_UP)


def _cell_scenario(template: Scenario, alpha: float, delta: float) -> Scenario:
    params = replace(template.params, alpha=alpha)
    initial = replace(template.initial, delta=delta)
    if initial.kind != "sech2":
        raise ValueError("sweeps vary the sech2 amplitude; template initial "
                         f"data must be 'sech2', got {initial.kind!r}")
    name = f"{template.name}_a{alpha:g}_d{delta:g}"
    return replace(template, name=name, params=params, initial=initial)


def _run_cell(args) -> RunResult:
    scenario, outdir = args
    return run_scenario(scenario, outdir)


def lifespan_sweep(alpha: float, deltas: Sequence[float], template: Scenario,
                   outdir: Optional[Union[str, Path]] = None,
                   workers: int = 1) -> SweepResult:
    """One run per amplitude; fit the end-time scaling over blow-up rows.

    The fitted exponent is the least-squares slope of log(end_time)
    against log(delta), defined only when at least three runs blew up.
    """
    deltas = list(deltas)
    if not deltas:
        raise ValueError("deltas must be a nonempty sorted positive sequence")
    if any(d <= 0 for d in deltas) or sorted(deltas) != deltas:
        raise ValueError("deltas must be positive and sorted ascending")

    out = Path(outdir) if outdir is not None else None
    jobs = []
    for d in deltas:
        cell = _cell_scenario(template, alpha, d)
        cell_dir = out / f"delta_{d:g}" if out is not None else None
        jobs.append((cell, cell_dir))

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell, jobs))
    else:
        results = [_run_cell(j) for j in jobs]

    rows = tuple(
        SweepRow(delta=d, alpha=alpha, end_time=res.verdict.end_time,
                 outcome=res.verdict.outcome)
        for d, res in zip(deltas, results))

    blew = [r for r in rows if r.outcome is RunOutcome.BLOW_UP]
    exponent = None
    if len(blew) >= 3:
        logd = np.log([r.delta for r in blew])
        logt = np.log([r.end_time for r in blew])
        exponent = float(np.polyfit(logd, logt, 1)[0])

    result = SweepResult(rows=rows, fitted_exponent=exponent)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        lines = ["delta,alpha,end_time,outcome"]
        lines += (f"{_fmt(r.delta)},{_fmt(r.alpha)},{_fmt(r.end_time)},"
                  f"{_OUTCOME_LABELS[r.outcome]}" for r in rows)
        (out / "sweep_summary.csv").write_text("\n".join(lines) + "\n")
        doc = {"alpha": alpha, "deltas": deltas,
               "fitted_exponent": exponent,
               "rows": [{"delta": r.delta, "end_time": r.end_time,
                         "outcome": _OUTCOME_LABELS[r.outcome]} for r in rows]}
        (out / "sweep_manifest.json").write_text(
            json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return result


# ---------------------------------------------------------------------------
# Phase diagram


@dataclass(frozen=True)
class PhaseCell:
    alpha: float
    delta: float
    outcome: str  # "smooth" | "blow-up" | "aborted" | "error"
    end_time: float


@dataclass(frozen=True)
class PhaseResult:
    alphas: tuple
    deltas: tuple
    cells: tuple  # row-major over (alpha, delta)

    def outcome(self, alpha: float, delta: float) -> str:
        for c in self.cells:
            if c.alpha == alpha and c.delta == delta:
                return c.outcome
        raise KeyError((alpha, delta))


def phase_diagram(alphas: Sequence[float], deltas: Sequence[float],
                  template: Scenario,
                  outdir: Optional[Union[str, Path]] = None,
                  workers: int = 1) -> PhaseResult:
    """Outcome matrix over the (alpha, delta) lattice.

    Failures in a cell are recorded as outcome "error" and the sweep
    continues; the CSV serialization feeds the plotting component.
    """
    alphas, deltas = list(alphas), list(deltas)
    if not alphas or not deltas:
        raise ValueError("alphas and deltas must be nonempty")

    out = Path(outdir) if outdir is not None else None
    jobs = []
    for a in alphas:
        for d in deltas:
            cell = _cell_scenario(template, a, d)
            cell_dir = out / f"alpha_{a:g}_delta_{d:g}" if out is not None else None
            jobs.append((a, d, cell, cell_dir))

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(_phase_cell_job, jobs))
    else:
        cells = [_phase_cell_job(j) for j in jobs]

    result = PhaseResult(tuple(alphas), tuple(deltas), tuple(cells))
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        lines = ["alpha,delta,outcome,end_time"]
        lines += (f"{_fmt(c.alpha)},{_fmt(c.delta)},{c.outcome},{_fmt(c.end_time)}"
                  for c in cells)
        (out / "phase.csv").write_text("\n".join(lines) + "\n")
    return result


def _phase_cell_job(job):
    a, d, cell, cell_dir = job
    try:
        res = run_scenario(cell, cell_dir)
        return PhaseCell(a, d, _OUTCOME_LABELS[res.verdict.outcome],
                         res.verdict.end_time)
    except Exception:  # noqa: BLE001
        return PhaseCell(a, d, "error", math.nan)


# ---------------------------------------------------------------------------
# Config loading (TOML)


def _load_toml(path: Union[str, Path]) -> dict:
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def params_from_dict(d: dict) -> EquationParams:
    d = dict(d)
    if "lambda" in d:
        d["lam"] = d.pop("lambda")
    return EquationParams(kappa=float(d["kappa"]), lam=float(d["lam"]),
                          mu=float(d["mu"]), nu=float(d["nu"]),
                          alpha=float(d["alpha"]))


def scenario_from_dict(doc: dict, name: Optional[str] = None) -> Scenario:
    grid = doc["grid"]
    if "L" in grid:
        L = float(grid["L"])
    elif "L_over_pi" in grid:
        L = float(grid["L_over_pi"]) * math.pi
    else:
        raise ValueError("grid table needs L or L_over_pi")
    init = dict(doc["initial"])
    initial = InitialCondition(kind=init.pop("kind"), **init)
    stop_doc = doc.get("stop", {})
    stop = StopCondition(
        max_time=float(stop_doc["max_time"]),
        drift_threshold=float(stop_doc.get("drift_threshold", 5e-3)),
        linf_ceiling=float(stop_doc.get("linf_ceiling", 1e6)))
    outputs = doc.get("outputs", {})
    dt = doc.get("dt", "auto")
    if not isinstance(dt, str):
        dt = float(dt)
    return Scenario(
        name=name or doc.get("name", "run"),
        params=params_from_dict(doc["params"]),
        L=L, N=int(grid["N"]),
        initial=initial,
        stop=stop,
        dt=dt,
        record_every=int(doc.get("record_every", 100)),
        dealias=bool(doc.get("dealias", True)),
        snapshot_times=tuple(float(t) for t in outputs.get("snapshot_times", ())),
        spectrum_times=tuple(float(t) for t in outputs.get("spectrum_times", ())),
        sobolev_index=doc.get("sobolev_index"),
    )


def scenario_from_toml(path: Union[str, Path]) -> Scenario:
    return scenario_from_dict(_load_toml(path))


def sweep_from_toml(path: Union[str, Path]) -> dict:
    doc = _load_toml(path)
    return {
        "alpha": float(doc["alpha"]),
        "deltas": [float(d) for d in doc["deltas"]],
        "template": scenario_from_dict(doc["template"]),
        "workers": int(doc.get("workers", 1)),
    }


def phase_from_toml(path: Union[str, Path]) -> dict:
    doc = _load_toml(path)
    return {
        "alphas": [float(a) for a in doc["alphas"]],
        "deltas": [float(d) for d in doc["deltas"]],
        "template": scenario_from_dict(doc["template"]),
        "workers": int(doc.get("workers", 1)),
    }


# ---------------------------------------------------------------------------
# Preset scenarios
#
# Four canonical runs, each in a full-resolution profile ("full") and a
# faster reduced one ("ci").  The blow-up candidate keeps dealiasing
# OFF in both profiles: the drift-based stopping rule watches the
# aliasing signature of resolution loss, which the 2/3 mask would
# filter out.


def _preset(name, alpha, delta, L_pi, stop, full, ci, dealias=True,
            snapshot_times=(), spectrum_times=()):
    return {
        "name": name, "alpha": alpha, "delta": delta, "L": L_pi * math.pi,
        "stop": stop, "full": full, "ci": ci, "dealias": dealias,
        "snapshot_times": snapshot_times, "spectrum_times": spectrum_times,
    }


_PRESETS = {
    # large-amplitude hump splitting into two coherent waves + radiation
    "split": _preset(
        "split", alpha=0.5, delta=20.0, L_pi=20.0,
        stop=StopCondition(max_time=5.0, drift_threshold=5e-3),
        full={"N": 2 ** 14, "dt": 1e-4}, ci={"N": 2 ** 12, "dt": 5e-4},
        snapshot_times=(0.0, 1.25, 2.5, 3.75, 5.0), spectrum_times=(5.0,)),
    # small hump dispersing away, high fractional order
    "radiation": _preset(
        "radiation", alpha=0.9, delta=0.1, L_pi=100.0,
        stop=StopCondition(max_time=50.0, drift_threshold=5e-3),
        full={"N": 2 ** 15, "dt": 5e-4}, ci={"N": 2 ** 12, "dt": 2e-3},
        snapshot_times=(0.0, 25.0, 50.0), spectrum_times=(50.0,)),
    # super-unit amplitude at low fractional order: finite-time blow-up
    "blowup": _preset(
        "blowup", alpha=0.2, delta=1.1, L_pi=48.0,
        stop=StopCondition(max_time=16.0, drift_threshold=5e-3),
        full={"N": 2 ** 16, "dt": 1e-4}, ci={"N": 2 ** 13, "dt": 1e-3},
        dealias=False,
        snapshot_times=(0.0, 4.0, 8.0), spectrum_times=(8.0,)),
    # small amplitude at low fractional order: persists smoothly
    "persist": _preset(
        "persist", alpha=0.2, delta=0.1, L_pi=100.0,
        stop=StopCondition(max_time=50.0, drift_threshold=5e-3),
        full={"N": 2 ** 15, "dt": 5e-4}, ci={"N": 2 ** 12, "dt": 1e-3},
        snapshot_times=(0.0, 25.0, 50.0), spectrum_times=(50.0,)),
}

PRESET_NAMES = tuple(_PRESETS)


def preset_scenario(name: str, profile: str = "ci") -> Scenario:
    """Canonical run configurations at 'full' or 'ci' resolution."""
    if name not in _PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
    if profile not in ("full", "ci"):
        raise ValueError(f"profile must be 'full' or 'ci', got {profile!r}")
    preset = _PRESETS[name]
    res = preset[profile]
    return Scenario(
        name=f"{name}-{profile}",
        params=EquationParams(kappa=1.0, lam=1.0, mu=1.0, nu=1.0,
                              alpha=preset["alpha"]),
        L=preset["L"], N=res["N"],
        initial=InitialCondition(kind="sech2", delta=preset["delta"]),
        stop=preset["stop"],
        dt=res["dt"],
        record_every=100,
        dealias=preset["dealias"],
        snapshot_times=preset["snapshot_times"],
        spectrum_times=preset["spectrum_times"],
    )
