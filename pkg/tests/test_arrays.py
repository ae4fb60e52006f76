"""Array geometry and steering vector tests."""

import math

import numpy as np
import pytest

from sercom import ArrayGeometry, angular_grid, steering_matrix, steering_vector
from sercom.exceptions import DomainError, ShapeError


class TestGeometries:
    def test_ula_positions(self):
        geom = ArrayGeometry.ula(4, spacing=0.5)
        np.testing.assert_allclose(geom.positions[:, 0], [0.0, 0.5, 1.0, 1.5])
        np.testing.assert_allclose(geom.positions[:, 1], 0.0)
        assert geom.kind == "ula"
        assert geom.n_sensors == 4

    def test_uca_arc_spacing(self):
        geom = ArrayGeometry.semicircular_uca(14)
        radius = 0.5 * 13 / math.pi
        np.testing.assert_allclose(np.linalg.norm(geom.positions, axis=1), radius)
        # adjacent sensors half a wavelength apart along the arc
        angles = np.arctan2(geom.positions[:, 1], geom.positions[:, 0])
        arc = radius * np.abs(np.diff(angles))
        np.testing.assert_allclose(arc, 0.5, rtol=1e-12)
        assert np.all(geom.positions[:, 1] >= -1e-12)  # upper half plane

    def test_invalid_positions(self):
        with pytest.raises(ShapeError):
            ArrayGeometry(np.zeros((3,)))
        with pytest.raises(ShapeError):
            ArrayGeometry(np.array([[np.nan, 0.0]]))


class TestGrid:
    def test_default_has_361_points(self):
        grid = angular_grid()
        assert grid.size == 361
        assert grid[0] == 0.0
        assert grid[-1] == 180.0
        assert np.all(np.diff(grid) > 0)

    def test_coarse_grid(self):
        grid = angular_grid(0.0, 180.0, 1.0)
        assert grid.size == 181

    def test_invalid_grids(self):
        with pytest.raises(DomainError):
            angular_grid(0.0, 180.0, -1.0)
        with pytest.raises(DomainError):
            angular_grid(10.0, 5.0, 1.0)


class TestSteering:
    def test_broadside_is_all_ones(self):
        geom = ArrayGeometry.ula(6, 0.5)
        np.testing.assert_allclose(steering_vector(geom, 90.0), np.ones(6), atol=1e-12)

    def test_endfire_alternates_sign(self):
        geom = ArrayGeometry.ula(2, 0.5)
        np.testing.assert_allclose(
            steering_vector(geom, 0.0), [1.0, -1.0], atol=1e-12
        )

    def test_unit_modulus_everywhere(self):
        rng = np.random.default_rng(0)
        geom = ArrayGeometry(rng.standard_normal((5, 2)))
        for theta in rng.uniform(0.0, 180.0, size=10):
            np.testing.assert_allclose(
                np.abs(steering_vector(geom, theta)), 1.0, rtol=1e-12
            )

    def test_ula_phase_convention(self):
        geom = ArrayGeometry.ula(5, 0.5)
        theta = 37.0
        expected = np.exp(
            1j * math.pi * np.arange(5) * math.cos(math.radians(theta))
        )
        np.testing.assert_allclose(steering_vector(geom, theta), expected, rtol=1e-12)

    def test_matrix_stacks_columns(self):
        geom = ArrayGeometry.ula(12, 0.5)
        grid = angular_grid()
        a = steering_matrix(geom, grid)
        assert a.shape == (12, 361)
        np.testing.assert_allclose(a[:, 70], steering_vector(geom, grid[70]))

    def test_single_direction_matches_vector(self):
        geom = ArrayGeometry.ula(3, 0.5)
        a = steering_matrix(geom, [42.0])
        np.testing.assert_allclose(a[:, 0], steering_vector(geom, 42.0))

    def test_mirror_directions_conjugate_for_ula(self):
        geom = ArrayGeometry.ula(7, 0.5)
        a = steering_matrix(geom, [30.0, 150.0])
        np.testing.assert_allclose(a[:, 1], a[:, 0].conj(), rtol=1e-12)
