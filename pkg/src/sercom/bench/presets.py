"""Named experiment presets.

Each preset mirrors one benchmark scenario: SNR and snapshot sweeps on a
12-sensor half-wavelength ULA with three sources at 35/43/51 degrees
(0, 0 and -5 dB), an off-grid sweep on a coarser one-degree grid, a
two-source correlation sweep, the same SNR sweep on a semicircular UCA,
and runtime measurements at 12 and 120 sensors. ``trials`` is the
desk-scale default; ``full_trials`` records the full-scale count.
"""

from __future__ import annotations

import dataclasses

from .runner import ExperimentConfig

_SNR_VALUES = (-4.5, -3.0, -1.5, 0.0, 1.5, 3.0, 4.5)
_THREE_SOURCES = dict(
    directions_deg=(35.0, 43.0, 51.0),
    powers_db=(0.0, 0.0, -5.0),
)

PRESETS = {
    "snr_sweep_ula": ExperimentConfig(
        name="snr_sweep_ula",
        geometry="ula:12",
        sweep="snr_db",
        sweep_values=_SNR_VALUES,
        n_snapshots=50,
        estimators=("sercom_jbld", "spice", "samv"),
        **_THREE_SOURCES,
    ),
    "snr_sweep_ula_full": ExperimentConfig(
        name="snr_sweep_ula_full",
        geometry="ula:12",
        sweep="snr_db",
        sweep_values=_SNR_VALUES,
        n_snapshots=50,
        estimators=(
            "sercom_jbld", "sercom_airm", "sercom_le", "spice", "samv",
        ),
        **_THREE_SOURCES,
    ),
    "snapshot_sweep_ula": ExperimentConfig(
        name="snapshot_sweep_ula",
        geometry="ula:12",
        sweep="n_snapshots",
        sweep_values=(12.0, 24.0, 36.0, 48.0, 60.0, 72.0, 84.0),
        snr_db=-1.5,
        estimators=("sercom_jbld", "spice", "samv"),
        **_THREE_SOURCES,
    ),
    "offgrid_sweep_ula": ExperimentConfig(
        name="offgrid_sweep_ula",
        geometry="ula:12",
        sweep="delta_theta_deg",
        sweep_values=(0.0, 0.25, 0.5),
        snr_db=0.0,
        n_snapshots=50,
        grid_step=1.0,
        directions_deg=(35.0, 51.0),
        powers_db=(0.0, 0.0),
        estimators=("sercom_jbld", "spice", "samv", "esprit"),
    ),
    "correlation_sweep_ula": ExperimentConfig(
        name="correlation_sweep_ula",
        geometry="ula:12",
        sweep="rho",
        sweep_values=(0.0, 0.3, 0.6, 0.9, 1.0),
        snr_db=0.0,
        n_snapshots=50,
        directions_deg=(35.0, 41.0),
        powers_db=(0.0, 0.0),
        estimators=("sercom_jbld", "spice", "samv", "esprit"),
    ),
    "snr_sweep_uca": ExperimentConfig(
        name="snr_sweep_uca",
        geometry="uca:14",
        sweep="snr_db",
        sweep_values=_SNR_VALUES,
        n_snapshots=50,
        estimators=("sercom_jbld", "spice", "samv"),
        **_THREE_SOURCES,
    ),
    "runtime_m12": ExperimentConfig(
        name="runtime_m12",
        geometry="ula:12",
        sweep="snr_db",
        sweep_values=(0.0,),
        n_snapshots=50,
        trials=20,
        estimators=(
            "sercom_jbld", "sercom_airm", "sercom_le", "spice", "samv",
        ),
        **_THREE_SOURCES,
    ),
    "runtime_m120": ExperimentConfig(
        name="runtime_m120",
        geometry="ula:120",
        sweep="snr_db",
        sweep_values=(0.0,),
        n_snapshots=240,
        trials=20,
        estimators=(
            "sercom_jbld", "sercom_airm", "sercom_le", "spice", "samv",
        ),
        **_THREE_SOURCES,
    ),
    "spectrum_example": ExperimentConfig(
        name="spectrum_example",
        geometry="ula:12",
        sweep="snr_db",
        sweep_values=(-1.5,),
        n_snapshots=50,
        trials=1,
        estimators=(
            "sercom_jbld", "sercom_airm", "sercom_le", "spice", "samv",
        ),
        save_example_spectra=True,
        **_THREE_SOURCES,
    ),
}


def get_preset(name, **overrides):
    """Look up a preset, optionally replacing fields (e.g. trials, seed)."""
    if name not in PRESETS:
        raise KeyError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        )
    config = PRESETS[name]
    if overrides:
        config = dataclasses.replace(config, **overrides)
    return config
