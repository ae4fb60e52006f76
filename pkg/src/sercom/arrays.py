"""Sensor array geometries, angular grids and steering vectors.

Positions are planar coordinates in units of the carrier wavelength. A
direction ``theta`` (degrees) maps to the unit vector
``u = (cos theta, sin theta)``, so for a uniform linear array along the
x-axis the broadside direction is 90 degrees and the angular grid spans
0-180 degrees. Steering phases use the ``exp(+j * phase)`` convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, ShapeError

ULA = "ula"
UCA = "uca"
CUSTOM = "custom"


@dataclass(frozen=True)
class ArrayGeometry:
    """Planar sensor array with positions in wavelength units.

    Attributes
    ----------
    positions : ndarray of shape (n_sensors, 2)
    kind : str
        ``"ula"``, ``"uca"`` or ``"custom"``; some baselines (ESPRIT) only
        accept uniform linear arrays.
    spacing : float or None
        Inter-element spacing in wavelengths for a ULA, else None.
    """

    positions: np.ndarray
    kind: str = CUSTOM
    spacing: float | None = None

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float)  # owned copy
        if pos.ndim != 2 or pos.shape[1] != 2 or pos.shape[0] < 1:
            raise ShapeError(
                f"positions must have shape (n_sensors, 2), got {pos.shape}"
            )
        if not np.all(np.isfinite(pos)):
            raise ShapeError("sensor positions must be finite")
        pos.flags.writeable = False
        object.__setattr__(self, "positions", pos)

    @property
    def n_sensors(self):
        return self.positions.shape[0]

    @classmethod
    def ula(cls, n_sensors, spacing=0.5):
        """Uniform linear array along the x-axis: sensor m at
        ``(spacing * m, 0)``."""
        if n_sensors < 1:
            raise DomainError("a ULA needs at least one sensor")
        x = spacing * np.arange(n_sensors, dtype=float)
        return cls(np.column_stack([x, np.zeros(n_sensors)]), kind=ULA, spacing=spacing)

    @classmethod
    def semicircular_uca(cls, n_sensors):
        """Sensors spread uniformly along the upper half of a circle, the
        radius chosen so adjacent sensors are half a wavelength apart along
        the arc."""
        if n_sensors < 2:
            raise DomainError("a semicircular array needs at least two sensors")
        radius = 0.5 * (n_sensors - 1) / math.pi
        angles = np.linspace(0.0, math.pi, n_sensors)
        pos = radius * np.column_stack([np.cos(angles), np.sin(angles)])
        return cls(pos, kind=UCA)


def angular_grid(start=0.0, stop=180.0, step=0.5):
    """Strictly ascending direction grid in degrees, endpoints included.

    The default covers 0-180 degrees at half-degree resolution (361 points).
    """
    if step <= 0:
        raise DomainError("grid step must be positive")
    if stop <= start:
        raise DomainError("grid stop must exceed start")
    n = int(round((stop - start) / step)) + 1
    grid = start + step * np.arange(n)
    grid = grid[grid <= stop + 1e-9]
    return check_grid(grid)


def check_grid(grid):
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size < 1:
        raise ShapeError("angular grid must be a nonempty 1-D array")
    if np.any(np.diff(g) <= 0):
        raise ShapeError("angular grid must be strictly ascending")
    if g[0] < -1e-9 or g[-1] > 180.0 + 1e-9:
        raise DomainError("angular grid must lie within [0, 180] degrees")
    return g


def steering_vector(geometry, theta_deg):
    """Array response to a unit far-field source from ``theta_deg``.

    Entry m is ``exp(+j 2 pi <position_m, u(theta)>)`` with positions in
    wavelengths; all entries have unit modulus.
    """
    theta = math.radians(theta_deg)
    u = np.array([math.cos(theta), math.sin(theta)])
    phase = 2.0 * math.pi * (geometry.positions @ u)
    return np.exp(1j * phase)


def steering_matrix(geometry, grid_deg):
    """Steering vectors for every grid direction, stacked as columns of an
    ``n_sensors x n_directions`` matrix."""
    theta = np.radians(np.atleast_1d(np.asarray(grid_deg, dtype=float)))
    u = np.vstack([np.cos(theta), np.sin(theta)])
    phase = 2.0 * math.pi * (geometry.positions @ u)
    return np.exp(1j * phase)
