"""Least-squares ESPRIT, the gridless subspace baseline for uniform linear
arrays."""

from __future__ import annotations

import math

import numpy as np

from ..arrays import ULA
from ..exceptions import DomainError, UnsupportedError
from ..validation import as_hermitian


def esprit_doas(sample, n_sources, geometry):
    """Direction estimates from the shift invariance of the signal subspace.

    The signal subspace is spanned by the dominant eigenvectors of the
    sample covariance; the least-squares solution of the subarray shift
    equation has eigenvalues ``exp(j 2 pi spacing cos(theta))``, from which
    the directions are read off in degrees.
    """
    if geometry.kind != ULA or geometry.spacing is None:
        raise UnsupportedError("ESPRIT requires a uniform linear array")
    values = as_hermitian(sample, "sample covariance").values
    m = values.shape[0]
    if not 1 <= n_sources < m:
        raise DomainError(
            f"number of sources must lie in [1, {m - 1}], got {n_sources}"
        )
    _, vectors = np.linalg.eigh(values)
    signal = vectors[:, m - n_sources:]
    shift, *_ = np.linalg.lstsq(signal[:-1], signal[1:], rcond=None)
    phases = np.angle(np.linalg.eigvals(shift))
    cosines = np.clip(phases / (2.0 * math.pi * geometry.spacing), -1.0, 1.0)
    return np.degrees(np.arccos(cosines))
