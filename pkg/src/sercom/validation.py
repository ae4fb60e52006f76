"""Input validation helpers for Hermitian matrices.

All matrix-valued operations in the package funnel their inputs through the
helpers here, so tolerance conventions live in one place:

* a matrix is Hermitian when ``max|X - X^H| <= HERMITIAN_RTOL * max|X|``;
* a Hermitian matrix is graded HPD when its smallest eigenvalue exceeds
  ``HPD_RTOL`` times its spectral norm, PSD when the smallest eigenvalue is
  above ``-PSD_RTOL`` times the spectral norm, and invalid otherwise.

Both thresholds are relative, so the grading is invariant under rescaling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DefinitenessError, ShapeError

HERMITIAN_RTOL = 1e-12
HPD_RTOL = 1e-12
PSD_RTOL = 1e-10

HPD = "hpd"
PSD = "psd"


def as_square_matrix(x, name="matrix"):
    """Coerce ``x`` to a square complex128 ndarray."""
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"{name} must be a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(np.float64))):
        raise ShapeError(f"{name} contains non-finite entries")
    return a


def hermitian_part(x):
    """Return the Hermitian part ``(X + X^H) / 2``.

    Used after composite operations to suppress floating-point drift so that
    eigensolvers stay on the real-eigenvalue branch.
    """
    return 0.5 * (x + x.conj().T)


def check_hermitian(x, name="matrix"):
    """Validate that ``x`` is Hermitian within the relative tolerance."""
    a = as_square_matrix(x, name)
    scale = np.abs(a).max()
    if np.abs(a - a.conj().T).max() > HERMITIAN_RTOL * max(scale, 1e-300):
        raise ShapeError(f"{name} is not Hermitian")
    return hermitian_part(a)


def check_same_shape(a, b, name_a="first operand", name_b="second operand"):
    if a.shape != b.shape:
        raise ShapeError(
            f"{name_a} has shape {a.shape} but {name_b} has shape {b.shape}"
        )


def grade_definiteness(x):
    """Grade a Hermitian ndarray as HPD or PSD.

    Raises DefinitenessError when the matrix is indefinite beyond the PSD
    tolerance.
    """
    w = np.linalg.eigvalsh(x)
    spectral = max(abs(w[0]), abs(w[-1]))
    if w[0] > HPD_RTOL * spectral:
        return HPD
    if w[0] >= -PSD_RTOL * spectral:
        return PSD
    raise DefinitenessError(
        f"matrix is indefinite: smallest eigenvalue {w[0]:.3e} "
        f"against spectral norm {spectral:.3e}"
    )


def cholesky_or_raise(x, name="matrix"):
    """Cholesky factor (lower) of ``x``, raising DefinitenessError on failure."""
    try:
        return np.linalg.cholesky(x)
    except np.linalg.LinAlgError:
        raise DefinitenessError(f"{name} is not positive definite") from None


@dataclass(frozen=True)
class HermitianMatrix:
    """A validated complex Hermitian matrix with a definiteness grade.

    The universal currency of the package: covariance models, sample
    covariances and tangent-space anchors are all carried as instances.
    ``values`` is a read-only array; instances are safe to share between
    threads.

    Attributes
    ----------
    values : ndarray of shape (dim, dim)
        The matrix entries, exactly Hermitian (symmetrized on construction).
    definiteness : str
        Either ``"hpd"`` (Cholesky succeeds) or ``"psd"``.
    """

    values: np.ndarray
    definiteness: str

    @classmethod
    def from_array(cls, values, name="matrix"):
        a = check_hermitian(values, name)
        grade = grade_definiteness(a)
        a.flags.writeable = False
        return cls(values=a, definiteness=grade)

    @property
    def dim(self):
        return self.values.shape[0]

    def is_hpd(self):
        return self.definiteness == HPD

    def require_hpd(self, context="operation"):
        if not self.is_hpd():
            raise DefinitenessError(
                f"{context} requires a positive definite matrix, "
                f"got grade '{self.definiteness}'"
            )
        return self.values


def as_hermitian(x, name="matrix"):
    """Coerce an ndarray or HermitianMatrix to a HermitianMatrix."""
    if isinstance(x, HermitianMatrix):
        return x
    return HermitianMatrix.from_array(x, name)


def hpd_values(x, name="matrix"):
    """Return the ndarray behind ``x``, insisting on an HPD grade."""
    return as_hermitian(x, name).require_hpd(name)


def hermitian_values(x, name="matrix"):
    """Return the ndarray behind ``x``, insisting only on Hermitian symmetry."""
    if isinstance(x, HermitianMatrix):
        return x.values
    return check_hermitian(x, name)
