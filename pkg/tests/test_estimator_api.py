"""Scikit-learn estimator API conformance tests."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from sercom import (
    ArrayGeometry,
    SamvEstimator,
    SercomEstimator,
    ShapeError,
    SourceScene,
    SpiceEstimator,
    angular_grid,
    simulate_snapshots,
)

GEOM = ArrayGeometry.ula(8, 0.5)
GRID = angular_grid(0.0, 180.0, 2.0)
SCENE = SourceScene((40.0, 90.0), (1.0, 2.0), noise_power=0.5)


def snapshots(n=64, seed=0):
    # estimator API rows are snapshots
    return simulate_snapshots(SCENE, GEOM, n, seed=seed).T


@pytest.mark.parametrize(
    "factory",
    [SercomEstimator, SpiceEstimator, SamvEstimator],
    ids=["sercom", "spice", "samv"],
)
class TestApiConformance:
    def test_fit_sets_attributes(self, factory):
        est = factory(geometry=GEOM, grid_deg=GRID, noise_power=0.5, n_sources=2)
        out = est.fit(snapshots())
        assert out is est
        assert est.spectrum_.powers.shape == GRID.shape
        assert est.n_iter_ >= 1
        assert est.doas_.shape == (2,)
        assert np.all(np.abs(np.sort(est.doas_) - [40.0, 90.0]) <= 3.0)

    def test_get_set_params_clone(self, factory):
        est = factory(geometry=GEOM, grid_deg=GRID, noise_power=0.5)
        params = est.get_params()
        assert params["noise_power"] == 0.5
        est.set_params(noise_power=0.7)
        assert est.noise_power == 0.7
        cloned = clone(est)
        assert cloned.get_params()["noise_power"] == 0.7
        assert not hasattr(cloned, "spectrum_")

    def test_not_fitted_guard(self, factory):
        est = factory(geometry=GEOM, grid_deg=GRID)
        with pytest.raises(NotFittedError):
            est.estimate_doas(2)

    def test_fit_covariance_matches_fit(self, factory):
        from sercom import sample_covariance

        x = snapshots()
        a = factory(geometry=GEOM, grid_deg=GRID, noise_power=0.5).fit(x)
        b = factory(geometry=GEOM, grid_deg=GRID, noise_power=0.5).fit_covariance(
            sample_covariance(x.T)
        )
        np.testing.assert_array_equal(a.powers_, b.powers_)

    def test_shape_validation(self, factory):
        est = factory(geometry=GEOM, grid_deg=GRID)
        with pytest.raises(ShapeError):
            est.fit(np.zeros(5, dtype=complex))
        with pytest.raises(ShapeError):
            est.fit_covariance(np.eye(5))  # wrong sensor count
        with pytest.raises(ShapeError):
            factory(grid_deg=GRID).fit(snapshots())  # no geometry


class TestSercomSpecifics:
    def test_fit_predict_returns_doas(self):
        est = SercomEstimator(
            geometry=GEOM, grid_deg=GRID, noise_power=0.5, n_sources=2
        )
        doas = est.fit_predict(snapshots())
        np.testing.assert_array_equal(doas, est.doas_)

    def test_criterion_parameter(self):
        for criterion in ("jbld", "airm", "le"):
            est = SercomEstimator(
                geometry=GEOM,
                grid_deg=GRID,
                noise_power=0.5,
                criterion=criterion,
                maxiter=200,
            )
            est.fit(snapshots())
            assert est.spectrum_.powers.min() >= 0.0

    def test_default_grid_is_full_span(self):
        est = SercomEstimator(geometry=GEOM, noise_power=0.5, maxiter=5)
        est.fit(snapshots())
        assert est.spectrum_.grid_deg.size == 361

    def test_track_objective(self):
        est = SercomEstimator(
            geometry=GEOM, grid_deg=GRID, noise_power=0.5, maxiter=40,
            track_objective=True,
        )
        est.fit(snapshots())
        assert est.result_.objective_trace.size == est.n_iter_
