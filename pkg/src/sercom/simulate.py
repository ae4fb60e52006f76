"""Source scenes, covariance models and snapshot simulation.

The signal model is narrowband and far-field: a snapshot is
``y(t) = A s(t) + n(t)`` with steering matrix ``A`` at the source
directions, zero-mean circular complex Gaussian source amplitudes ``s(t)``
with covariance ``Sigma``, and white circular complex Gaussian noise of
known power. Snapshots are independent across time and deterministic for a
fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arrays import check_grid, steering_matrix
from .exceptions import DomainError, ShapeError, UnsupportedError
from .validation import HermitianMatrix, hermitian_part


@dataclass(frozen=True)
class SourceScene:
    """Ground-truth sources: directions, linear powers, pairwise correlation
    (two-source scenes only) and known noise power."""

    directions_deg: tuple
    powers_linear: tuple
    noise_power: float
    correlation: float = 0.0

    def __post_init__(self):
        directions = tuple(float(d) for d in self.directions_deg)
        powers = tuple(float(p) for p in self.powers_linear)
        object.__setattr__(self, "directions_deg", directions)
        object.__setattr__(self, "powers_linear", powers)
        if len(directions) != len(powers):
            raise ShapeError("directions and powers must have equal length")
        if any(p <= 0 for p in powers):
            raise DomainError("source powers must be positive")
        if self.noise_power <= 0:
            raise DomainError("noise power must be positive")
        if not 0.0 <= self.correlation <= 1.0:
            raise DomainError("correlation must lie in [0, 1]")
        if self.correlation != 0.0 and len(directions) != 2:
            raise UnsupportedError(
                "correlated sources are only supported for two-source scenes"
            )

    @property
    def n_sources(self):
        return len(self.directions_deg)


@dataclass(frozen=True)
class PowerSpectrum:
    """Nonnegative power estimate over an angular grid, together with the
    known noise power that completes the covariance model."""

    grid_deg: np.ndarray
    powers: np.ndarray
    noise_power: float

    def __post_init__(self):
        grid = check_grid(self.grid_deg).copy()
        p = np.array(self.powers, dtype=float)  # owned copy
        if p.shape != grid.shape:
            raise ShapeError(
                f"powers have shape {p.shape}, grid has shape {grid.shape}"
            )
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise DomainError("powers must be finite and nonnegative")
        if self.noise_power <= 0:
            raise DomainError("noise power must be positive")
        grid.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "grid_deg", grid)
        object.__setattr__(self, "powers", p)


def source_covariance(scene):
    """Source amplitude covariance ``Sigma`` (n_sources x n_sources).

    Diagonal for uncorrelated scenes; for two correlated sources the
    off-diagonal entry is ``correlation * sqrt(p1 * p2)``.
    """
    powers = np.asarray(scene.powers_linear, dtype=float)
    sigma = np.diag(powers).astype(complex)
    if scene.correlation != 0.0:
        cross = scene.correlation * math.sqrt(powers[0] * powers[1])
        sigma[0, 1] = cross
        sigma[1, 0] = cross
    return sigma


def _source_factor(scene):
    """Factor F with F @ F^H equal to the source covariance. Cholesky for
    correlation below one; the rank-one factor at full coherence."""
    sigma = source_covariance(scene)
    if scene.correlation == 1.0:
        amplitudes = np.sqrt(np.asarray(scene.powers_linear, dtype=float))
        return amplitudes.reshape(-1, 1).astype(complex)
    return np.linalg.cholesky(sigma)


def model_covariance(spectrum, steering):
    """Covariance implied by a grid power spectrum:
    ``A diag(p) A^H + noise_power * I``. Positive definite thanks to the
    noise floor."""
    a = np.asarray(steering, dtype=complex)
    p = np.asarray(spectrum.powers, dtype=float)
    if a.ndim != 2 or a.shape[1] != p.size:
        raise ShapeError(
            f"steering matrix shape {a.shape} does not match {p.size} grid points"
        )
    if spectrum.noise_power <= 0:
        raise DomainError("noise power must be positive")
    r = (a * p) @ a.conj().T
    r[np.diag_indices_from(r)] += spectrum.noise_power
    return HermitianMatrix.from_array(hermitian_part(r), "model covariance")


def population_covariance(scene, geometry):
    """Exact covariance of the scene: ``A Sigma A^H + noise_power * I``."""
    m = geometry.n_sensors
    r = scene.noise_power * np.eye(m, dtype=complex)
    if scene.n_sources:
        a = steering_matrix(geometry, np.asarray(scene.directions_deg))
        r += a @ source_covariance(scene) @ a.conj().T
    return HermitianMatrix.from_array(hermitian_part(r), "population covariance")


def simulate_snapshots(scene, geometry, n_snapshots, seed):
    """Simulate an ``n_sensors x n_snapshots`` complex snapshot matrix.

    Source amplitudes and noise are independent circular complex Gaussian
    draws (real and imaginary parts i.i.d. with half the variance each).
    Identical seeds give bit-identical output.
    """
    if n_snapshots < 1:
        raise DomainError("need at least one snapshot")
    rng = np.random.default_rng(seed)
    m = geometry.n_sensors
    y = _circular_gaussian(rng, (m, n_snapshots)) * math.sqrt(scene.noise_power)
    if scene.n_sources:
        a = steering_matrix(geometry, np.asarray(scene.directions_deg))
        factor = _source_factor(scene)
        z = _circular_gaussian(rng, (factor.shape[1], n_snapshots))
        y += a @ (factor @ z)
    return y


def _circular_gaussian(rng, shape):
    return (
        rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    ) / math.sqrt(2.0)


def sample_covariance(snapshots):
    """Sample covariance ``(1/N) Y Y^H`` of a snapshot matrix, graded HPD
    when full rank and PSD otherwise (always PSD when N < n_sensors)."""
    y = np.asarray(snapshots, dtype=complex)
    if y.ndim != 2 or y.shape[1] < 1:
        raise ShapeError(
            f"snapshots must be an (n_sensors, n_snapshots) matrix, got {y.shape}"
        )
    r = hermitian_part((y @ y.conj().T) / y.shape[1])
    return HermitianMatrix.from_array(r, "sample covariance")


def snr_db(scene):
    """Signal-to-noise ratio ``10 log10(max_k power_k / noise_power)``."""
    if scene.n_sources == 0:
        raise DomainError("SNR is undefined for a scene without sources")
    return 10.0 * math.log10(max(scene.powers_linear) / scene.noise_power)


def noise_power_for_snr(powers_linear, snr_db_value):
    """Noise power that realizes a target SNR for the given source powers."""
    if not powers_linear:
        raise DomainError("need at least one source power")
    return max(powers_linear) / 10.0 ** (snr_db_value / 10.0)


def db_to_linear(power_db):
    return 10.0 ** (np.asarray(power_db, dtype=float) / 10.0)


# ---------------------------------------------------------------------------
# Snapshot file formats
#
# Binary layout (little-endian):
#   8-byte magic "SERCSNP1", uint32 n_sensors, uint32 n_snapshots, then
#   n_sensors * n_snapshots complex entries in C (sensor-major) order, each
#   stored as two float64 values (real part first).
# CSV layout:
#   a comment header "# snapshots n_sensors=<M> n_snapshots=<N>", then one
#   row per snapshot holding "re,im" pairs for sensors 1..M, i.e. 2M fields.
# ---------------------------------------------------------------------------

_MAGIC = b"SERCSNP1"


def save_snapshots(path, snapshots, fmt="binary"):
    """Write a snapshot matrix to ``path`` in the binary or CSV format."""
    y = np.ascontiguousarray(np.asarray(snapshots, dtype=np.complex128))
    if y.ndim != 2:
        raise ShapeError("snapshots must be a 2-D matrix")
    m, n = y.shape
    if fmt == "binary":
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(np.array([m, n], dtype="<u4").tobytes())
            interleaved = np.empty((m, n, 2), dtype="<f8")
            interleaved[..., 0] = y.real
            interleaved[..., 1] = y.imag
            fh.write(interleaved.tobytes())
    elif fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(f"# snapshots n_sensors={m} n_snapshots={n}\n")
            for t in range(n):
                fields = []
                for s in range(m):
                    z = y[s, t]
                    fields.append(repr(float(z.real)))
                    fields.append(repr(float(z.imag)))
                fh.write(",".join(fields) + "\n")
    else:
        raise DomainError(f"unknown snapshot format {fmt!r}")


def load_snapshots(path):
    """Read a snapshot matrix written by :func:`save_snapshots`; the format
    is detected from the leading bytes."""
    with open(path, "rb") as fh:
        head = fh.read(len(_MAGIC))
        if head == _MAGIC:
            m, n = np.frombuffer(fh.read(8), dtype="<u4")
            raw = np.frombuffer(fh.read(), dtype="<f8")
            if raw.size != 2 * m * n:
                raise ShapeError(
                    f"snapshot file {path}: expected {2 * m * n} values, "
                    f"found {raw.size}"
                )
            pairs = raw.reshape(int(m), int(n), 2)
            return pairs[..., 0] + 1j * pairs[..., 1]
    return _load_snapshots_csv(path)


def _load_snapshots_csv(path):
    m = n = None
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for token in line.lstrip("#").split():
                    if token.startswith("n_sensors="):
                        m = int(token.split("=", 1)[1])
                    elif token.startswith("n_snapshots="):
                        n = int(token.split("=", 1)[1])
                continue
            fields = [float(v) for v in line.split(",")]
            if len(fields) % 2:
                raise ShapeError(
                    f"snapshot file {path}: rows must hold re,im pairs"
                )
            rows.append(fields)
    if not rows:
        raise ShapeError(f"snapshot file {path} holds no data rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ShapeError(f"snapshot file {path}: ragged rows")
    data = np.asarray(rows)
    y = (data[:, 0::2] + 1j * data[:, 1::2]).T  # rows were snapshots
    if m is not None and y.shape[0] != m:
        raise ShapeError(
            f"snapshot file {path}: header says {m} sensors, rows say {y.shape[0]}"
        )
    if n is not None and y.shape[1] != n:
        raise ShapeError(
            f"snapshot file {path}: header says {n} snapshots, rows say {y.shape[1]}"
        )
    return y
