"""Monte Carlo sweep runner with deterministic seeding and CSV/JSON export.

A sweep is described by an :class:`ExperimentConfig`: a fixed array/scene
template plus one swept variable (``snr_db``, ``n_snapshots``,
``delta_theta_deg`` or ``rho``). Every (sweep value, trial) pair derives its
seed purely from the base seed and the two indices, so runs are bit
reproducible and trials can execute in any order or in parallel.

Exports:

* ``records.csv`` -- one row per (trial, estimator, sweep value) with the
  columns ``sweep_value, estimator, seed, doa_errors_deg, power_errors,
  iterations, wall_time_s, error``; per-source error lists are
  semicolon-joined, floats are ``repr``-round-trippable, a nonempty
  ``error`` field flags an estimator failure on that trial.
* ``summary.json`` -- per (estimator, sweep value) aggregate metrics plus
  the direction bound per sweep value and the full configuration.
* ``spectra.csv`` (optional) -- example spectra of one trial, columns
  ``estimator, theta_deg, power``.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..arrays import ArrayGeometry, angular_grid
from ..exceptions import DegenerateError, DomainError, SercomError, UnsupportedError
from ..matching import SercomConfig, extract_peaks, samv_estimate, sercom_estimate, spice_estimate
from ..simulate import (
    SourceScene,
    db_to_linear,
    noise_power_for_snr,
    sample_covariance,
    simulate_snapshots,
)
from ..arrays import steering_matrix
from .crb import crb_doa
from .esprit import esprit_doas
from .metrics import match_peaks_to_truth, per_trial_rms, rmse_doa, rmse_power

SWEEP_VARIABLES = ("snr_db", "n_snapshots", "delta_theta_deg", "rho")

ESTIMATOR_NAMES = (
    "sercom_jbld",
    "sercom_airm",
    "sercom_le",
    "spice",
    "samv",
    "esprit",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one Monte Carlo experiment."""

    name: str
    geometry: str                      # "ula:<m>[:<spacing>]" or "uca:<m>"
    directions_deg: tuple
    powers_db: tuple
    sweep: str
    sweep_values: tuple
    snr_db: float = 0.0                # fixed SNR when not the swept variable
    correlation: float = 0.0
    n_snapshots: int = 50
    grid_start: float = 0.0
    grid_stop: float = 180.0
    grid_step: float = 0.5
    trials: int = 100
    full_trials: int = 500
    base_seed: int = 20240901
    estimators: tuple = ("sercom_jbld", "spice", "samv")
    n_peaks: int | None = None
    maxiter: int = 5000
    eps_p: float = 1e-4
    save_example_spectra: bool = False
    example_sweep_value: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "directions_deg", tuple(float(v) for v in self.directions_deg))
        object.__setattr__(self, "powers_db", tuple(float(v) for v in self.powers_db))
        object.__setattr__(self, "sweep_values", tuple(float(v) for v in self.sweep_values))
        object.__setattr__(self, "estimators", tuple(self.estimators))
        if self.sweep not in SWEEP_VARIABLES:
            raise UnsupportedError(
                f"sweep variable {self.sweep!r} not in {SWEEP_VARIABLES}"
            )
        if not self.sweep_values:
            raise DomainError("sweep needs at least one value")
        if self.trials < 1:
            raise DomainError("need at least one trial")
        unknown = set(self.estimators) - set(ESTIMATOR_NAMES)
        if unknown:
            raise UnsupportedError(f"unknown estimators: {sorted(unknown)}")

    def array_geometry(self):
        return parse_geometry(self.geometry)

    def grid(self):
        return angular_grid(self.grid_start, self.grid_stop, self.grid_step)

    def k_peaks(self):
        return self.n_peaks if self.n_peaks is not None else len(self.directions_deg)

    def scene_for(self, sweep_value):
        """Scene template instantiated at one sweep value; returns the scene
        and the snapshot count."""
        directions = np.asarray(self.directions_deg, dtype=float)
        powers = tuple(db_to_linear(np.asarray(self.powers_db)))
        snr = self.snr_db
        correlation = self.correlation
        n = self.n_snapshots
        if self.sweep == "snr_db":
            snr = sweep_value
        elif self.sweep == "n_snapshots":
            n = int(round(sweep_value))
        elif self.sweep == "delta_theta_deg":
            directions = directions + sweep_value
        else:  # rho
            correlation = sweep_value
        scene = SourceScene(
            directions_deg=tuple(directions),
            powers_linear=powers,
            noise_power=noise_power_for_snr(powers, snr),
            correlation=correlation,
        )
        return scene, n


def parse_geometry(spec):
    parts = str(spec).split(":")
    kind = parts[0].lower()
    if kind == "ula" and len(parts) in (2, 3):
        spacing = float(parts[2]) if len(parts) == 3 else 0.5
        return ArrayGeometry.ula(int(parts[1]), spacing)
    if kind == "uca" and len(parts) == 2:
        return ArrayGeometry.semicircular_uca(int(parts[1]))
    raise UnsupportedError(
        f"geometry spec {spec!r} not understood (use 'ula:M[:spacing]' or 'uca:M')"
    )


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one estimator on one simulated trial."""

    sweep_value: float
    estimator: str
    seed: int
    doa_errors_deg: tuple
    power_errors: tuple
    iterations: int
    wall_time_s: float
    error: str = ""


@dataclass
class SummaryEntry:
    estimator: str
    sweep_value: float
    n_trials: int
    n_failed: int
    rmse_doa_deg: float | None
    rmse_power: float | None
    p25_doa_deg: float | None
    p50_doa_deg: float | None
    p75_doa_deg: float | None
    p25_power: float | None
    p50_power: float | None
    p75_power: float | None
    mean_iterations: float
    mean_wall_time_s: float


@dataclass
class MetricsSummary:
    sweep_variable: str
    truth_directions_deg: tuple
    truth_powers_db: tuple
    entries: list = field(default_factory=list)
    crb: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def entry(self, estimator, sweep_value):
        for e in self.entries:
            if e.estimator == estimator and e.sweep_value == sweep_value:
                return e
        raise KeyError((estimator, sweep_value))

    def curve(self, estimator, metric):
        """Metric values for one estimator ordered by sweep value."""
        rows = sorted(
            (e for e in self.entries if e.estimator == estimator),
            key=lambda e: e.sweep_value,
        )
        return [getattr(e, metric) for e in rows]


def trial_seed(base_seed, trial_index):
    """Per-trial seed, a pure function of the base seed and trial index.

    Deliberately independent of the sweep value: trials are paired across
    sweep values (common random numbers), which removes independent Monte
    Carlo noise from cross-sweep comparisons.
    """
    sequence = np.random.SeedSequence((int(base_seed), int(trial_index)))
    return int(sequence.generate_state(1, np.uint64)[0])


def _run_one_estimator(name, rhat, steering, grid, scene, config, geometry):
    k = config.k_peaks()
    start = time.perf_counter()
    if name == "esprit":
        doas = esprit_doas(rhat, k, geometry)
        wall = time.perf_counter() - start
        return doas, None, 0, wall, None
    if name.startswith("sercom_"):
        sercom_cfg = SercomConfig(
            criterion=name.split("_", 1)[1],
            maxiter=config.maxiter,
            eps_p=config.eps_p,
        )
        result = sercom_estimate(rhat, steering, grid, scene.noise_power, sercom_cfg)
    elif name == "spice":
        result = spice_estimate(
            rhat, steering, grid, scene.noise_power,
            maxiter=config.maxiter, eps_p=config.eps_p,
        )
    elif name == "samv":
        result = samv_estimate(
            rhat, steering, grid, scene.noise_power,
            maxiter=config.maxiter, eps_p=config.eps_p,
        )
    else:
        raise UnsupportedError(f"unknown estimator {name!r}")
    peaks = extract_peaks(result.spectrum, k)
    return (
        peaks.doas_deg,
        peaks.powers_linear,
        result.iterations,
        result.wall_time_s,
        result.spectrum,
    )


def _run_trial(config, sweep_index, trial_index, geometry, grid, steering,
               warm_up=False, want_spectra=False):
    """All estimators on one simulated trial; returns records and optional
    example spectra."""
    sweep_value = config.sweep_values[sweep_index]
    scene, n = config.scene_for(sweep_value)
    seed = trial_seed(config.base_seed, trial_index)
    snapshots = simulate_snapshots(scene, geometry, n, seed)
    rhat = sample_covariance(snapshots)
    truth_doas = np.asarray(scene.directions_deg)
    truth_powers = np.asarray(scene.powers_linear)
    records = []
    spectra = {}
    for name in config.estimators:
        if warm_up:
            try:
                _run_one_estimator(
                    name, rhat, steering, grid, scene, config, geometry
                )
            except (SercomError, np.linalg.LinAlgError):
                pass
        attempt_start = time.perf_counter()
        try:
            doas, powers, iterations, wall, spectrum = _run_one_estimator(
                name, rhat, steering, grid, scene, config, geometry
            )
            assignment = match_peaks_to_truth(doas, truth_doas)
            doa_errors = tuple(
                float(truth_doas[k] - doas[assignment[k]])
                for k in range(truth_doas.size)
            )
            if powers is None:
                power_errors = ()
            else:
                power_errors = tuple(
                    float(truth_powers[k] - powers[assignment[k]])
                    for k in range(truth_powers.size)
                )
            records.append(
                TrialRecord(
                    sweep_value=sweep_value,
                    estimator=name,
                    seed=seed,
                    doa_errors_deg=doa_errors,
                    power_errors=power_errors,
                    iterations=iterations,
                    wall_time_s=wall,
                    error="",
                )
            )
            if want_spectra and spectrum is not None:
                spectra[name] = spectrum
        except (SercomError, np.linalg.LinAlgError) as exc:
            records.append(
                TrialRecord(
                    sweep_value=sweep_value,
                    estimator=name,
                    seed=seed,
                    doa_errors_deg=(),
                    power_errors=(),
                    iterations=0,
                    wall_time_s=time.perf_counter() - attempt_start,
                    error=type(exc).__name__,
                )
            )
    return records, spectra


def _trial_job(args):
    config, sweep_index, trial_index = args
    geometry = config.array_geometry()
    grid = config.grid()
    steering = steering_matrix(geometry, grid)
    want_spectra = (
        config.save_example_spectra
        and trial_index == 0
        and config.sweep_values[sweep_index] == _example_value(config)
    )
    records, spectra = _run_trial(
        config, sweep_index, trial_index, geometry, grid, steering,
        warm_up=(trial_index == 0), want_spectra=want_spectra,
    )
    packed = {
        name: (s.grid_deg.tolist(), s.powers.tolist()) for name, s in spectra.items()
    }
    return sweep_index, trial_index, records, packed


def _example_value(config):
    if config.example_sweep_value is not None:
        return config.example_sweep_value
    return config.sweep_values[0]


def _limit_worker_threads():
    try:
        from threadpoolctl import threadpool_limits

        threadpool_limits(1)
    except Exception:
        pass


def run_sweep(config, threads=1):
    """Run the full sweep; returns ``(records, summary, spectra)``.

    ``records`` is ordered by (sweep value index, trial index, estimator
    order). ``spectra`` maps estimator name to an example
    :class:`~sercom.simulate.PowerSpectrum`-like pair when
    ``save_example_spectra`` is set, else is empty.
    """
    jobs = [
        (config, si, ti)
        for si in range(len(config.sweep_values))
        for ti in range(config.trials)
    ]
    results = {}
    if threads > 1:
        with ProcessPoolExecutor(
            max_workers=threads, initializer=_limit_worker_threads
        ) as pool:
            for sweep_index, trial_index, records, spectra in pool.map(
                _trial_job, jobs, chunksize=1
            ):
                results[(sweep_index, trial_index)] = (records, spectra)
    else:
        geometry = config.array_geometry()
        grid = config.grid()
        steering = steering_matrix(geometry, grid)
        for _, si, ti in jobs:
            want_spectra = (
                config.save_example_spectra
                and ti == 0
                and config.sweep_values[si] == _example_value(config)
            )
            records, spectra = _run_trial(
                config, si, ti, geometry, grid, steering,
                warm_up=(ti == 0), want_spectra=want_spectra,
            )
            packed = {
                name: (s.grid_deg.tolist(), s.powers.tolist())
                for name, s in spectra.items()
            }
            results[(si, ti)] = (records, packed)
    all_records = []
    example_spectra = {}
    for si in range(len(config.sweep_values)):
        for ti in range(config.trials):
            records, spectra = results[(si, ti)]
            all_records.extend(records)
            example_spectra.update(spectra)
    summary = summarize(config, all_records)
    return all_records, summary, example_spectra


def summarize(config, records):
    """Aggregate trial records into per-(estimator, sweep value) metrics."""
    summary = MetricsSummary(
        sweep_variable=config.sweep,
        truth_directions_deg=config.directions_deg,
        truth_powers_db=config.powers_db,
        config=dataclasses.asdict(config),
    )
    for sweep_value in config.sweep_values:
        for name in config.estimators:
            group = [
                r for r in records
                if r.estimator == name and r.sweep_value == sweep_value
            ]
            ok = [r for r in group if not r.error]
            entry = SummaryEntry(
                estimator=name,
                sweep_value=sweep_value,
                n_trials=len(group),
                n_failed=len(group) - len(ok),
                rmse_doa_deg=None,
                rmse_power=None,
                p25_doa_deg=None,
                p50_doa_deg=None,
                p75_doa_deg=None,
                p25_power=None,
                p50_power=None,
                p75_power=None,
                mean_iterations=(
                    float(np.mean([r.iterations for r in ok])) if ok else 0.0
                ),
                mean_wall_time_s=(
                    float(np.mean([r.wall_time_s for r in ok])) if ok else 0.0
                ),
            )
            if ok and any(r.doa_errors_deg for r in ok):
                entry.rmse_doa_deg = rmse_doa(ok)
                trial_rms = per_trial_rms(ok, "doa_errors_deg")
                entry.p25_doa_deg = float(np.percentile(trial_rms, 25))
                entry.p50_doa_deg = float(np.percentile(trial_rms, 50))
                entry.p75_doa_deg = float(np.percentile(trial_rms, 75))
            if ok and any(r.power_errors for r in ok):
                entry.rmse_power = rmse_power(ok)
                trial_rms = per_trial_rms(ok, "power_errors")
                entry.p25_power = float(np.percentile(trial_rms, 25))
                entry.p50_power = float(np.percentile(trial_rms, 50))
                entry.p75_power = float(np.percentile(trial_rms, 75))
            summary.entries.append(entry)
        scene, n = config.scene_for(sweep_value)
        geometry = config.array_geometry()
        try:
            bounds = crb_doa(scene, geometry, n)
            summary.crb.append(
                {
                    "sweep_value": sweep_value,
                    "crb_doa_deg": [float(b) for b in bounds],
                    "crb_rmse_deg": float(np.sqrt(np.mean(bounds**2))),
                }
            )
        except (DegenerateError, DomainError):
            summary.crb.append(
                {"sweep_value": sweep_value, "crb_doa_deg": None, "crb_rmse_deg": None}
            )
    return summary


# ---------------------------------------------------------------------------
# Export / import
# ---------------------------------------------------------------------------

RECORD_COLUMNS = (
    "sweep_value",
    "estimator",
    "seed",
    "doa_errors_deg",
    "power_errors",
    "iterations",
    "wall_time_s",
    "error",
)


def _join(values):
    return ";".join(repr(float(v)) for v in values)


def _split(text):
    if not text:
        return ()
    return tuple(float(v) for v in text.split(";"))


def export_records(records, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RECORD_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    repr(float(r.sweep_value)),
                    r.estimator,
                    str(int(r.seed)),
                    _join(r.doa_errors_deg),
                    _join(r.power_errors),
                    str(int(r.iterations)),
                    repr(float(r.wall_time_s)),
                    r.error,
                ]
            )


def import_records(path):
    records = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != RECORD_COLUMNS:
            raise DomainError(
                f"{path}: unexpected record columns {reader.fieldnames}"
            )
        for row in reader:
            records.append(
                TrialRecord(
                    sweep_value=float(row["sweep_value"]),
                    estimator=row["estimator"],
                    seed=int(row["seed"]),
                    doa_errors_deg=_split(row["doa_errors_deg"]),
                    power_errors=_split(row["power_errors"]),
                    iterations=int(row["iterations"]),
                    wall_time_s=float(row["wall_time_s"]),
                    error=row["error"],
                )
            )
    return records


def summary_to_json(summary):
    payload = {
        "sweep_variable": summary.sweep_variable,
        "truth_directions_deg": list(summary.truth_directions_deg),
        "truth_powers_db": list(summary.truth_powers_db),
        "entries": [dataclasses.asdict(e) for e in summary.entries],
        "crb": summary.crb,
        "config": summary.config,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def export_results(records, summary, out_dir, spectra=None):
    """Write ``records.csv``, ``summary.json`` and optionally
    ``spectra.csv`` into ``out_dir``; returns the paths written."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        records_path = out / "records.csv"
        export_records(records, records_path)
        summary_path = out / "summary.json"
        summary_path.write_text(summary_to_json(summary), encoding="utf-8")
        paths = [records_path, summary_path]
        if spectra:
            spectra_path = out / "spectra.csv"
            with open(spectra_path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["estimator", "theta_deg", "power"])
                for name in sorted(spectra):
                    grid, powers = spectra[name]
                    for theta, power in zip(grid, powers):
                        writer.writerow(
                            [name, repr(float(theta)), repr(float(power))]
                        )
            paths.append(spectra_path)
        return paths
    except OSError as exc:
        raise SercomError(f"cannot write results into {out}: {exc}") from exc


def config_to_json(config):
    return json.dumps(dataclasses.asdict(config), indent=2, sort_keys=True) + "\n"


def config_from_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(payload) - known
    if unknown:
        raise DomainError(f"{path}: unknown config fields {sorted(unknown)}")
    missing = {"name", "geometry", "directions_deg", "powers_db", "sweep",
               "sweep_values"} - set(payload)
    if missing:
        raise DomainError(f"{path}: missing config fields {sorted(missing)}")
    for key in ("directions_deg", "powers_db", "sweep_values", "estimators"):
        if key in payload:
            payload[key] = tuple(payload[key])
    return ExperimentConfig(**payload)
