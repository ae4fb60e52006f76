"""Command-line interface.

Subcommands:

* ``run <preset|config.json>`` -- execute a Monte Carlo sweep and write
  ``records.csv`` / ``summary.json`` (and ``spectra.csv`` for presets that
  save example spectra) into the output directory.
* ``list-presets`` -- show the shipped experiment presets.
* ``estimate`` -- one-shot spectrum/DOA estimation from a snapshot file.

Exit status is 0 on success and 1 on configuration or I/O errors, with the
message on stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from ..arrays import angular_grid, steering_matrix
from ..exceptions import SercomError
from ..matching import SercomConfig, extract_peaks, samv_estimate, sercom_estimate, spice_estimate
from ..simulate import load_snapshots, sample_covariance
from .esprit import esprit_doas
from .presets import PRESETS, get_preset
from .runner import config_from_json, export_results, parse_geometry, run_sweep

ESTIMATE_METHODS = (
    "sercom_jbld", "sercom_airm", "sercom_le", "spice", "samv", "esprit",
)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sercom",
        description="Spatial power spectrum and DOA estimation benchmarks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a Monte Carlo sweep")
    run_p.add_argument("experiment", help="preset name or path to a config JSON file")
    run_p.add_argument("--trials", type=int, default=None, help="override trial count")
    run_p.add_argument("--seed", type=int, default=None, help="override base seed")
    run_p.add_argument("--out-dir", default="results", help="output directory")
    run_p.add_argument("--threads", type=int, default=1, help="worker processes")
    run_p.add_argument(
        "--full-scale", action="store_true",
        help="use the full-scale trial count recorded in the config",
    )

    sub.add_parser("list-presets", help="list shipped experiment presets")

    est_p = sub.add_parser("estimate", help="estimate a spectrum from a snapshot file")
    est_p.add_argument("--input", required=True, help="snapshot file (binary or CSV)")
    est_p.add_argument(
        "--geometry", required=True, help="array spec, e.g. ula:12 or uca:14"
    )
    est_p.add_argument("--method", required=True, choices=ESTIMATE_METHODS)
    est_p.add_argument("--noise-power", type=float, default=1.0)
    est_p.add_argument(
        "--grid", default="0:180:0.5", help="angular grid as start:stop:step degrees"
    )
    est_p.add_argument("--peaks", type=int, default=3, help="peaks to report")
    est_p.add_argument("--out", default=None, help="write the spectrum as CSV")
    return parser


def _load_config(token):
    if token in PRESETS:
        return get_preset(token)
    path = Path(token)
    if path.exists():
        return config_from_json(path)
    raise SercomError(
        f"{token!r} is neither a preset ({', '.join(sorted(PRESETS))}) "
        f"nor an existing config file"
    )


def cmd_run(args):
    config = _load_config(args.experiment)
    overrides = {}
    if args.full_scale:
        overrides["trials"] = config.full_trials
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["base_seed"] = args.seed
    if overrides:
        config = dataclasses.replace(config, **overrides)
    records, summary, spectra = run_sweep(config, threads=max(1, args.threads))
    paths = export_results(records, summary, args.out_dir, spectra)
    n_failed = sum(1 for r in records if r.error)
    print(f"{config.name}: {len(records)} records ({n_failed} failures)")
    for path in paths:
        print(f"wrote {path}")
    return 0


def cmd_list_presets(_args):
    for name in sorted(PRESETS):
        config = PRESETS[name]
        print(
            f"{name:22s} geometry={config.geometry:8s} sweep={config.sweep}"
            f"={list(config.sweep_values)} trials={config.trials}"
            f" estimators={','.join(config.estimators)}"
        )
    return 0


def cmd_estimate(args):
    snapshots = load_snapshots(args.input)
    geometry = parse_geometry(args.geometry)
    if snapshots.shape[0] != geometry.n_sensors:
        raise SercomError(
            f"snapshot file has {snapshots.shape[0]} sensors but geometry "
            f"{args.geometry} expects {geometry.n_sensors}"
        )
    rhat = sample_covariance(snapshots)
    start, stop, step = (float(v) for v in args.grid.split(":"))
    grid = angular_grid(start, stop, step)
    if args.method == "esprit":
        doas = np.sort(esprit_doas(rhat, args.peaks, geometry))
        for theta in doas:
            print(f"doa_deg={theta:.4f}")
        return 0
    steering = steering_matrix(geometry, grid)
    if args.method.startswith("sercom_"):
        config = SercomConfig(criterion=args.method.split("_", 1)[1])
        result = sercom_estimate(rhat, steering, grid, args.noise_power, config)
    elif args.method == "spice":
        result = spice_estimate(rhat, steering, grid, args.noise_power)
    else:
        result = samv_estimate(rhat, steering, grid, args.noise_power)
    peaks = extract_peaks(result.spectrum, min(args.peaks, grid.size))
    print(
        f"method={args.method} iterations={result.iterations} "
        f"converged={result.converged}"
    )
    for theta, power in zip(peaks.doas_deg, peaks.powers_linear):
        print(f"doa_deg={theta:.4f} power={power:.6g}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("theta_deg,power\n")
            for theta, power in zip(result.spectrum.grid_deg, result.spectrum.powers):
                fh.write(f"{theta!r},{power!r}\n")
        print(f"wrote {args.out}")
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": cmd_run,
        "list-presets": cmd_list_presets,
        "estimate": cmd_estimate,
    }
    try:
        return handlers[args.command](args)
    except (SercomError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
