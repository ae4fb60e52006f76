"""Error metrics over Monte Carlo trial records."""

from __future__ import annotations

import itertools
import math

import numpy as np

from ..exceptions import DomainError, ShapeError, UnsupportedError

#: Exhaustive assignment is factorial in the source count; beyond this the
#: pairing is ambiguous enough that a dedicated matcher would be needed.
MAX_ASSIGNMENT_SOURCES = 6


def match_peaks_to_truth(estimated_doas, truth_doas):
    """Pair estimated directions with the true ones.

    Returns the tuple ``perm`` minimizing the total squared angular error,
    with ``perm[k]`` the index of the estimate assigned to truth ``k``.
    Exhaustive over all permutations, so limited to small source counts.
    """
    est = np.asarray(estimated_doas, dtype=float)
    truth = np.asarray(truth_doas, dtype=float)
    if est.shape != truth.shape or est.ndim != 1:
        raise ShapeError(
            f"need equally many estimates and truths, got {est.shape} vs {truth.shape}"
        )
    k = truth.size
    if k > MAX_ASSIGNMENT_SOURCES:
        raise UnsupportedError(
            f"exhaustive peak assignment supports at most "
            f"{MAX_ASSIGNMENT_SOURCES} sources, got {k}"
        )
    best, best_cost = None, math.inf
    for perm in itertools.permutations(range(k)):
        cost = float(np.sum((est[list(perm)] - truth) ** 2))
        if cost < best_cost:
            best, best_cost = perm, cost
    return best


def _collect(records, field):
    rows = [
        getattr(r, field)
        for r in records
        if not r.error and len(getattr(r, field)) > 0
    ]
    if not rows:
        raise DomainError(f"no successful records with {field}")
    return np.asarray(rows, dtype=float)


def rmse_doa(records):
    """Root-mean-square direction error in degrees over all records and
    sources: ``sqrt(mean of squared per-source errors)``."""
    errors = _collect(records, "doa_errors_deg")
    return float(np.sqrt(np.mean(errors**2)))


def rmse_power(records):
    """Root-mean-square power error (linear units) over all records and
    sources."""
    errors = _collect(records, "power_errors")
    return float(np.sqrt(np.mean(errors**2)))


def per_trial_rms(records, field):
    """Per-record root-mean-square error (one value per trial), used for
    the interquartile bands."""
    errors = _collect(records, field)
    return np.sqrt(np.mean(errors**2, axis=1))
