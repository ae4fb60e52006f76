"""Monte Carlo benchmark harness: metrics, reference baselines, sweep
runner, presets and the command-line interface."""

from .crb import crb_doa
from .esprit import esprit_doas
from .metrics import match_peaks_to_truth, rmse_doa, rmse_power
from .runner import (
    ExperimentConfig,
    MetricsSummary,
    TrialRecord,
    config_from_json,
    config_to_json,
    export_results,
    import_records,
    run_sweep,
)
from .presets import PRESETS, get_preset

__all__ = [
    "ExperimentConfig",
    "MetricsSummary",
    "PRESETS",
    "TrialRecord",
    "config_from_json",
    "config_to_json",
    "crb_doa",
    "esprit_doas",
    "export_results",
    "get_preset",
    "import_records",
    "match_peaks_to_truth",
    "rmse_doa",
    "rmse_power",
    "run_sweep",
]
