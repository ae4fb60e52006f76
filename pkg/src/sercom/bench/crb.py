"""Stochastic Cramér-Rao bound for direction estimation.

Standard Gaussian-signal bound for an array observing zero-mean circular
complex Gaussian sources in white noise:

``CRB = (noise_power / 2N) * Re[(D^H P D) .* (Sigma A^H R^{-1} A Sigma)^T]^{-1}``

with ``A`` the steering matrix at the true directions, ``D`` its
element-wise derivative with respect to the directions (here per degree),
``P`` the projector onto the orthogonal complement of the column span of
``A``, ``Sigma`` the source covariance and ``R`` the population covariance.
"""

from __future__ import annotations

import math

import numpy as np

from ..arrays import steering_matrix
from ..exceptions import DegenerateError, DomainError
from ..simulate import population_covariance, source_covariance


def steering_derivative(geometry, directions_deg):
    """Derivative of each steering vector with respect to its direction in
    degrees, stacked as columns."""
    theta = np.radians(np.atleast_1d(np.asarray(directions_deg, dtype=float)))
    tangent = np.vstack([-np.sin(theta), np.cos(theta)])
    rate = 2.0 * math.pi * (geometry.positions @ tangent) * (math.pi / 180.0)
    return 1j * rate * steering_matrix(geometry, directions_deg)


def crb_doa(scene, geometry, n_snapshots):
    """Per-source standard-deviation bound in degrees.

    Decreases like ``1/sqrt(N)`` in the snapshot count and decreases with
    SNR. Raises DegenerateError when the information matrix is singular
    (e.g. fully coherent sources).
    """
    if scene.n_sources < 1:
        raise DomainError("the bound needs at least one source")
    if n_snapshots < 1:
        raise DomainError("need at least one snapshot")
    directions = np.asarray(scene.directions_deg, dtype=float)
    a = steering_matrix(geometry, directions)
    d = steering_derivative(geometry, directions)
    sigma = source_covariance(scene)
    r = population_covariance(scene, geometry).values
    try:
        gram_inv = np.linalg.inv(a.conj().T @ a)
    except np.linalg.LinAlgError:
        raise DegenerateError(
            "steering matrix is rank deficient (duplicated directions)"
        ) from None
    projector = np.eye(geometry.n_sensors) - a @ gram_inv @ a.conj().T
    weighted = sigma @ a.conj().T @ np.linalg.solve(r, a) @ sigma
    fisher = np.real((d.conj().T @ projector @ d) * weighted.T)
    fisher *= 2.0 * n_snapshots / scene.noise_power
    if np.linalg.cond(fisher) > 1e12:
        raise DegenerateError("direction information matrix is singular")
    crb = np.linalg.inv(fisher)
    return np.sqrt(np.diagonal(crb))


def crb_rmse_deg(scene, geometry, n_snapshots):
    """Aggregate bound matching the RMSE metric:
    ``sqrt(mean of per-source variance bounds)``."""
    bounds = crb_doa(scene, geometry, n_snapshots)
    return float(np.sqrt(np.mean(bounds**2)))
