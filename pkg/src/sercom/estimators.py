"""Scikit-learn style estimator classes.

Each estimator is configured with an array geometry, an angular grid and the
known noise power, then fitted on a complex snapshot matrix ``X`` of shape
``(n_snapshots, n_sensors)`` (one row per snapshot, matching the
samples-by-features convention). Fitting computes the sample covariance and
runs the configured spectrum estimator; the fitted spectrum, peak directions
and diagnostics are exposed as trailing-underscore attributes.

A precomputed sample covariance can be supplied through
:meth:`fit_covariance`.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .arrays import angular_grid, steering_matrix
from .exceptions import ShapeError
from .matching import (
    SercomConfig,
    extract_peaks,
    samv_estimate,
    sercom_estimate,
    spice_estimate,
)
from .simulate import sample_covariance
from .validation import as_hermitian


class _CovarianceMatchingEstimator(BaseEstimator):
    """Shared fit plumbing for the spectrum estimators."""

    def __init__(self, geometry=None, grid_deg=None, noise_power=1.0,
                 n_sources=None):
        self.geometry = geometry
        self.grid_deg = grid_deg
        self.noise_power = noise_power
        self.n_sources = n_sources

    def _grid(self):
        if self.grid_deg is None:
            return angular_grid()
        return np.asarray(self.grid_deg, dtype=float)

    def fit(self, X, y=None):
        """Fit the grid power spectrum from snapshots.

        Parameters
        ----------
        X : complex ndarray of shape (n_snapshots, n_sensors)
        y : ignored
        """
        x = np.asarray(X)
        if x.ndim != 2:
            raise ShapeError(f"X must be 2-D (n_snapshots, n_sensors), got {x.shape}")
        return self.fit_covariance(sample_covariance(x.T))

    def fit_covariance(self, covariance, n_snapshots=None):
        """Fit from a precomputed (Hermitian) sample covariance."""
        if self.geometry is None:
            raise ShapeError("estimator needs an array geometry before fitting")
        sample = as_hermitian(covariance, "sample covariance")
        if sample.dim != self.geometry.n_sensors:
            raise ShapeError(
                f"covariance is {sample.dim}x{sample.dim} but the geometry has "
                f"{self.geometry.n_sensors} sensors"
            )
        grid = self._grid()
        steering = steering_matrix(self.geometry, grid)
        result = self._estimate(sample, steering, grid)
        self.result_ = result
        self.spectrum_ = result.spectrum
        self.powers_ = result.spectrum.powers
        self.n_iter_ = result.iterations
        self.converged_ = result.converged
        if self.n_sources is not None:
            peaks = extract_peaks(result.spectrum, self.n_sources)
            self.peaks_ = peaks
            self.doas_ = peaks.doas_deg
        return self

    def _estimate(self, sample, steering, grid):
        raise NotImplementedError

    def fit_predict(self, X, y=None):
        """Fit on ``X`` and return the estimated source directions
        (requires ``n_sources``)."""
        self.fit(X)
        if self.n_sources is None:
            raise ShapeError("set n_sources to extract directions")
        return self.doas_

    def _check_fitted(self):
        if not hasattr(self, "spectrum_"):
            raise NotFittedError(
                f"{type(self).__name__} is not fitted yet; call fit first"
            )

    def estimate_doas(self, n_sources):
        """Directions of the strongest peaks of the fitted spectrum."""
        self._check_fitted()
        return extract_peaks(self.spectrum_, n_sources).doas_deg


class SercomEstimator(_CovarianceMatchingEstimator):
    """Spectrum estimation by manifold-aware covariance matching.

    Parameters mirror :class:`~sercom.matching.SercomConfig`; the criterion
    selects the JBLD divergence (default, eigendecomposition-free, accepts
    rank-deficient sample covariances), the AIRM geodesic distance or the
    Log-Euclidean distance.
    """

    def __init__(self, geometry=None, grid_deg=None, noise_power=1.0,
                 n_sources=None, criterion="jbld", eta=1e-2, beta1=0.9,
                 beta2=0.999, eps_v=1e-8, maxiter=5000, eps_p=1e-4,
                 track_objective=False):
        super().__init__(geometry, grid_deg, noise_power, n_sources)
        self.criterion = criterion
        self.eta = eta
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps_v = eps_v
        self.maxiter = maxiter
        self.eps_p = eps_p
        self.track_objective = track_objective

    def _estimate(self, sample, steering, grid):
        config = SercomConfig(
            eta=self.eta,
            beta1=self.beta1,
            beta2=self.beta2,
            eps_v=self.eps_v,
            maxiter=self.maxiter,
            eps_p=self.eps_p,
            criterion=self.criterion,
            track_objective=self.track_objective,
        )
        return sercom_estimate(sample, steering, grid, self.noise_power, config)


class SpiceEstimator(_CovarianceMatchingEstimator):
    """SPICE baseline (weighted-Euclidean covariance matching, convex)."""

    def __init__(self, geometry=None, grid_deg=None, noise_power=1.0,
                 n_sources=None, maxiter=5000, eps_p=1e-4):
        super().__init__(geometry, grid_deg, noise_power, n_sources)
        self.maxiter = maxiter
        self.eps_p = eps_p

    def _estimate(self, sample, steering, grid):
        return spice_estimate(
            sample, steering, grid, self.noise_power,
            maxiter=self.maxiter, eps_p=self.eps_p,
        )


class SamvEstimator(_CovarianceMatchingEstimator):
    """SAMV baseline (direct minimization of the AMV criterion)."""

    def __init__(self, geometry=None, grid_deg=None, noise_power=1.0,
                 n_sources=None, maxiter=5000, eps_p=1e-4):
        super().__init__(geometry, grid_deg, noise_power, n_sources)
        self.maxiter = maxiter
        self.eps_p = eps_p

    def _estimate(self, sample, steering, grid):
        return samv_estimate(
            sample, steering, grid, self.noise_power,
            maxiter=self.maxiter, eps_p=self.eps_p,
        )
