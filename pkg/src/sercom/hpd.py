"""Distances, divergences and matching criteria on Hermitian positive
definite matrices.

The module provides the affine-invariant Riemannian metric (AIRM), the
Log-Euclidean (LE) distance, the Jensen-Bregman LogDet (JBLD) divergence and
the weighted-Euclidean AMV / SPICE matching criteria, together with their
shared per-eigenvalue decomposition: every criterion applied to a model
covariance ``R`` and a sample covariance ``S`` equals a sum of scalar
penalties of the eigenvalues of the whitened matrix ``R^{-1/2} S R^{-1/2}``.

Log-determinants are always evaluated through Cholesky pivots, never through
explicit determinants; matrix logarithms and square roots go through a single
Hermitian eigendecomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import (
    DefinitenessError,
    DegenerateError,
    DomainError,
    UnsupportedError,
)
from .validation import (
    HPD_RTOL,
    check_same_shape,
    grade_definiteness,
    hermitian_part,
    hermitian_values,
    hpd_values,
)

#: Closed set of matching criteria accepted throughout the package.
CRITERIA = ("amv", "spice", "airm", "le", "jbld")

#: Criteria that admit the per-eigenvalue penalty decomposition (all but LE).
SPECTRUM_CRITERIA = ("amv", "spice", "airm", "jbld")


def check_criterion(kind, allowed=CRITERIA):
    kind = str(kind).lower()
    if kind not in allowed:
        raise UnsupportedError(
            f"unknown criterion {kind!r}; expected one of {sorted(allowed)}"
        )
    return kind


def _eigh_hpd(values, name="matrix"):
    """Eigendecomposition of an HPD array, enforcing positive eigenvalues."""
    w, v = np.linalg.eigh(values)
    if w[0] <= HPD_RTOL * max(abs(w[0]), abs(w[-1])):
        raise DefinitenessError(f"{name} is not positive definite")
    return w, v


def matrix_log(m):
    """Principal matrix logarithm of an HPD matrix.

    Parameters
    ----------
    m : HermitianMatrix or ndarray
        Positive definite input.

    Returns
    -------
    ndarray
        Hermitian matrix ``V diag(log w) V^H`` for the eigendecomposition
        ``m = V diag(w) V^H``.
    """
    a = hermitian_values(m, "matrix_log input")
    w, v = _eigh_hpd(a, "matrix_log input")
    return hermitian_part((v * np.log(w)) @ v.conj().T)


def matrix_sqrt_and_invsqrt(m):
    """Square root and inverse square root of an HPD matrix.

    Returns the pair ``(s, t)`` with ``s @ s = m`` and ``t @ m @ t = I``.
    """
    a = hermitian_values(m, "matrix square root input")
    w, v = _eigh_hpd(a, "matrix square root input")
    root = np.sqrt(w)
    s = hermitian_part((v * root) @ v.conj().T)
    t = hermitian_part((v / root) @ v.conj().T)
    return s, t


def riemannian_logmap(base, target):
    """Logarithmic map of ``target`` into the tangent space at ``base``.

    Computes ``base^{1/2} log(base^{-1/2} target base^{-1/2}) base^{1/2}``.
    The result is Hermitian but in general not definite.
    """
    b = hpd_values(base, "logmap base")
    g = hpd_values(target, "logmap target")
    check_same_shape(b, g, "logmap base", "logmap target")
    s, t = matrix_sqrt_and_invsqrt(b)
    inner = matrix_log(hermitian_part(t @ g @ t))
    return hermitian_part(s @ inner @ s)


def airm_inner(base, x, y):
    """AIRM inner product ``tr(base^{-1} x base^{-1} y)`` of two tangent
    vectors at ``base``. Symmetric in ``x`` and ``y`` and real."""
    b = hpd_values(base, "inner-product base")
    xv = hermitian_values(x, "first tangent vector")
    yv = hermitian_values(y, "second tangent vector")
    check_same_shape(b, xv, "base", "first tangent vector")
    check_same_shape(b, yv, "base", "second tangent vector")
    bx = np.linalg.solve(b, xv)
    by = np.linalg.solve(b, yv)
    return float(np.real(np.einsum("ij,ji->", bx, by)))


def _generalized_eigenvalues(numerator, denominator, name):
    """Ascending eigenvalues of ``denominator^{-1} numerator`` through the
    generalized Hermitian eigenproblem (Cholesky of the denominator,
    no explicit inverse square root)."""
    try:
        w = scipy.linalg.eigh(numerator, denominator, eigvals_only=True)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise DefinitenessError(f"{name}: generalized eigenproblem failed") from exc
    return w


def dist_airm(r1, r2):
    """Squared AIRM geodesic distance between two HPD matrices.

    ``||log(r1^{-1/2} r2 r1^{-1/2})||_F^2``, evaluated through the
    generalized eigenvalues of ``(r2, r1)``.
    """
    a = hpd_values(r1, "first matrix")
    b = hpd_values(r2, "second matrix")
    check_same_shape(a, b)
    w = _generalized_eigenvalues(b, a, "squared AIRM distance")
    if w[0] <= 0:
        raise DefinitenessError("squared AIRM distance: inputs not both HPD")
    return float(np.sum(np.log(w) ** 2))


def dist_le(r1, r2):
    """Squared Log-Euclidean distance ``||log r1 - log r2||_F^2``."""
    a = hpd_values(r1, "first matrix")
    b = hpd_values(r2, "second matrix")
    check_same_shape(a, b)
    diff = matrix_log(a) - matrix_log(b)
    return float(np.sum(np.abs(diff) ** 2))


def _cholesky_logdet(values, name):
    """``log|values|`` as twice the log of the Cholesky pivot magnitudes."""
    try:
        chol = np.linalg.cholesky(values)
    except np.linalg.LinAlgError:
        raise DefinitenessError(f"{name} is not positive definite") from None
    return 2.0 * float(np.sum(np.log(np.real(np.diagonal(chol)))))


def dist_jbld(r1, r2):
    """Jensen-Bregman LogDet divergence
    ``log|(r1 + r2)/2| - (1/2) log|r1 r2|``.

    ``r2`` must be HPD. ``r1`` may be merely PSD provided the midpoint stays
    HPD; the divergence is then ``+inf`` (the ``log|r1|`` term diverges),
    which is returned rather than raised. All log-determinants go through
    Cholesky factorizations.
    """
    a = hermitian_values(r1, "first matrix")
    b = hermitian_values(r2, "second matrix")
    check_same_shape(a, b)
    logdet_b = _cholesky_logdet(b, "second matrix")
    logdet_mid = _cholesky_logdet(hermitian_part(0.5 * (a + b)), "midpoint")
    try:
        logdet_a = _cholesky_logdet(a, "first matrix")
    except DefinitenessError:
        grade_definiteness(a)  # raises if indefinite; PSD falls through
        return math.inf
    return logdet_mid - 0.5 * (logdet_a + logdet_b)


def crit_amv(model, sample):
    """AMV matching criterion ``||model^{-1/2} (sample - model) model^{-1/2}||_F^2``.

    The sample matrix only needs to be Hermitian.
    """
    r = hpd_values(model, "model covariance")
    s = hermitian_values(sample, "sample covariance")
    check_same_shape(r, s, "model covariance", "sample covariance")
    chol = np.linalg.cholesky(r)
    delta = s - r
    half = scipy.linalg.solve_triangular(chol, delta, lower=True)
    whitened = scipy.linalg.solve_triangular(
        chol, half.conj().T, lower=True
    ).conj().T
    return float(np.sum(np.abs(whitened) ** 2))


def crit_spice(model, sample):
    """SPICE matching criterion
    ``||model^{-1/2} (sample - model) sample^{-1/2}||_F^2``,
    evaluated in the trace form
    ``tr(model^{-1} sample) + tr(sample^{-1} model) - 2 dim``.
    """
    r = hpd_values(model, "model covariance")
    s = hpd_values(sample, "sample covariance")
    check_same_shape(r, s, "model covariance", "sample covariance")
    w = _generalized_eigenvalues(s, r, "SPICE criterion")
    if w[0] <= 0:
        raise DefinitenessError("SPICE criterion: inputs not both HPD")
    return float(np.sum(w + 1.0 / w) - 2.0 * r.shape[0])


def whitened_eigenvalues(model, sample):
    """Ascending eigenvalues of the model-whitened sample covariance
    ``model^{-1/2} sample model^{-1/2}``.

    Solved as the generalized Hermitian eigenproblem
    ``sample v = w model v`` using the Cholesky factor of the model, which
    avoids forming an explicit inverse square root. All eigenvalues are
    strictly positive when both inputs are HPD, and all equal one when
    ``sample == model``.
    """
    r = hpd_values(model, "model covariance")
    s = hpd_values(sample, "sample covariance")
    check_same_shape(r, s, "model covariance", "sample covariance")
    w = _generalized_eigenvalues(s, r, "whitened spectrum")
    if w[0] <= 0:
        raise DefinitenessError("whitened spectrum: inputs not both HPD")
    return w


def eigenvalue_penalty(kind, lam):
    """Scalar penalty a criterion assigns to one whitened eigenvalue.

    ======  =============================
    amv     ``(lam - 1)^2``
    spice   ``(sqrt(lam) - 1/sqrt(lam))^2``
    airm    ``log(lam)^2``
    jbld    ``log((1 + lam) / (2 sqrt(lam)))``
    ======  =============================

    All four are nonnegative and vanish exactly at ``lam == 1``. The LE
    distance has no such decomposition and is rejected. Accepts scalars or
    arrays of positive eigenvalues.
    """
    kind = check_criterion(kind)
    if kind == "le":
        raise UnsupportedError(
            "the LE distance has no per-eigenvalue penalty decomposition"
        )
    lam = np.asarray(lam, dtype=float)
    if np.any(lam <= 0):
        raise DomainError("eigenvalue penalties are defined for positive values only")
    if kind == "amv":
        out = (lam - 1.0) ** 2
    elif kind == "spice":
        root = np.sqrt(lam)
        out = (root - 1.0 / root) ** 2
    elif kind == "airm":
        out = np.log(lam) ** 2
    else:  # jbld
        out = np.log1p(lam) - 0.5 * np.log(lam) - math.log(2.0)
    if out.ndim == 0:
        return float(out)
    return out


def criterion_from_spectrum(kind, spectrum):
    """Criterion value as the sum of per-eigenvalue penalties.

    For each of ``amv``, ``spice``, ``airm`` and ``jbld`` this equals the
    corresponding direct matrix criterion evaluated on the pair that produced
    the whitened spectrum.
    """
    values = np.asarray(spectrum, dtype=float)
    return float(np.sum(eigenvalue_penalty(kind, values)))


def relative_contribution(kind, spectrum, index):
    """Share of the total criterion contributed by one eigenvalue.

    ``penalty(spectrum[index]) / sum(penalty(spectrum))``, a value in
    ``[0, 1]``. Raises DegenerateError when every penalty is zero (an
    all-ones spectrum).
    """
    values = np.asarray(spectrum, dtype=float)
    penalties = np.atleast_1d(eigenvalue_penalty(kind, values))
    total = float(np.sum(penalties))
    if total <= 0.0:
        raise DegenerateError(
            "all eigenvalue penalties vanish; relative contribution undefined"
        )
    return float(penalties[index] / total)


@dataclass(frozen=True)
class EquivalenceBounds:
    """Sample-size threshold and gap constants for the asymptotic
    equivalence of the matching criteria.

    For a population covariance with condition number ``kappa``, any model
    within AIRM radius ``rho`` of it, and a sample covariance built from at
    least ``n0`` snapshots, the spectral deviation
    ``||sample model^{-1} - I||_2`` stays below ``epsilon`` with probability
    at least ``1 - delta``; on that event the criteria satisfy

    * ``|amv - spice|      <= dim * c_amv  * epsilon^3``
    * ``|airm - spice|     <= dim * c_airm * epsilon^4``
    * ``|8 * jbld - spice| <= dim * c_jbld * epsilon^4``
    """

    epsilon: float
    rho: float
    delta: float
    dim: int
    kappa: float
    n0: float
    c_amv: float
    c_airm: float
    c_jbld: float


def equivalence_bounds(epsilon, rho, delta, dim, kappa):
    """Compute the sample-size threshold and the three gap constants.

    Parameters
    ----------
    epsilon : float in (0, 1)
        Target spectral deviation of the whitened sample covariance.
    rho : float in (0, log(1 + epsilon))
        AIRM radius of the model neighbourhood around the population
        covariance.
    delta : float in (0, 1)
        Allowed failure probability.
    dim : int
        Matrix dimension.
    kappa : float >= 1
        Condition number of the population covariance.
    """
    if not 0.0 < epsilon < 1.0:
        raise DomainError("epsilon must lie in (0, 1)")
    if not 0.0 < delta < 1.0:
        raise DomainError("delta must lie in (0, 1)")
    if kappa < 1.0:
        raise DomainError("condition number must be at least 1")
    if dim < 1:
        raise DomainError("dimension must be positive")
    slack = epsilon - math.expm1(rho)
    if rho <= 0.0 or slack <= 0.0:
        raise DomainError("radius must satisfy 0 < rho < log(1 + epsilon)")
    n0 = kappa**2 * math.exp(2.0 * rho) * (dim + math.log(2.0 / delta)) / slack**2
    shrink = 1.0 - epsilon
    c_amv = 1.0 / shrink
    c_airm = (11.0 + 6.0 * abs(math.log(shrink))) / (12.0 * shrink**4) + 1.0 / shrink
    c_jbld = 1.0 / shrink**4 + 1.0 / (2.0 - epsilon) ** 4 + 1.0 / shrink
    return EquivalenceBounds(
        epsilon=epsilon,
        rho=rho,
        delta=delta,
        dim=dim,
        kappa=kappa,
        n0=n0,
        c_amv=c_amv,
        c_airm=c_airm,
        c_jbld=c_jbld,
    )
