"""Randomized numeric checkers for the equivalence and robustness
guarantees of the matching criteria.

Two families of checks live here:

* the asymptotic-equivalence check draws a population covariance, models
  inside an AIRM ball around it, and finite-snapshot sample covariances, and
  verifies the three criterion gap bounds on every trial where the spectral
  concentration event holds;
* the outlier-contribution check draws eigenvalue spectra with a single
  dominant deviation and verifies that the criteria rank its relative
  contribution in the order amv >= spice >= airm >= jbld.

The module also exposes the two scalar penalty ratios whose monotonicity in
the log-eigenvalue coordinate underpins the ordering result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError
from .hpd import (
    SPECTRUM_CRITERIA,
    crit_amv,
    crit_spice,
    dist_airm,
    dist_jbld,
    equivalence_bounds,
    relative_contribution,
)
from .validation import hermitian_part, hpd_values


def random_hermitian(dim, rng, scale=1.0):
    """Random Hermitian matrix with independent Gaussian entries."""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return hermitian_part(a) * scale


def random_hpd(dim, rng, cond=None, scale=1.0):
    """Random HPD matrix, optionally with a prescribed condition number.

    Eigenvalues are drawn log-uniformly; when ``cond`` is given the extreme
    eigenvalues are pinned so the condition number is exactly ``cond``.
    """
    q, _ = np.linalg.qr(
        rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    )
    if cond is None:
        log_w = rng.uniform(-1.0, 1.0, size=dim)
    else:
        if cond < 1.0:
            raise DomainError("condition number must be at least 1")
        log_w = rng.uniform(0.0, math.log(cond), size=dim)
        log_w[0] = 0.0
        if dim > 1:
            log_w[-1] = math.log(cond)
    w = np.exp(log_w) * scale
    return hermitian_part((q * w) @ q.conj().T)


def random_unitary(dim, rng):
    q, r = np.linalg.qr(
        rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    )
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def airm_ball_sample(center, radius, rng):
    """Random HPD matrix at AIRM distance strictly below ``radius`` from
    ``center``: ``center^{1/2} expm(A) center^{1/2}`` with ``||A||_F`` drawn
    uniformly in ``(0, radius)``."""
    from .hpd import matrix_sqrt_and_invsqrt

    c = hpd_values(center, "ball center")
    direction = random_hermitian(c.shape[0], rng)
    direction *= rng.uniform(0.0, radius) / np.linalg.norm(direction)
    w, v = np.linalg.eigh(direction)
    inner = hermitian_part((v * np.exp(w)) @ v.conj().T)
    s, _ = matrix_sqrt_and_invsqrt(c)
    return hermitian_part(s @ inner @ s)


def gaussian_sample_covariance(cov, n_snapshots, rng):
    """Sample covariance of ``n_snapshots`` i.i.d. circular complex Gaussian
    vectors with the given population covariance."""
    c = hpd_values(cov, "population covariance")
    dim = c.shape[0]
    chol = np.linalg.cholesky(c)
    z = (
        rng.standard_normal((dim, n_snapshots))
        + 1j * rng.standard_normal((dim, n_snapshots))
    ) / math.sqrt(2.0)
    y = chol @ z
    return hermitian_part((y @ y.conj().T) / n_snapshots)


@dataclass
class EquivalenceCheckReport:
    """Outcome of the randomized criterion-equivalence check."""

    bounds: object
    n_snapshots: int
    n_trials: int
    n_conditioned: int = 0
    n_violations: int = 0
    worst_margin: float = field(default=-math.inf)
    max_gap_ratios: dict = field(default_factory=dict)

    @property
    def event_failure_rate(self):
        return 1.0 - self.n_conditioned / self.n_trials


def criterion_gaps(model, sample):
    """The three criterion gaps measured against the SPICE baseline.

    Returns a dict with ``|amv - spice|``, ``|airm - spice|`` and
    ``|8 jbld - spice|``.
    """
    spice = crit_spice(model, sample)
    return {
        "amv": abs(crit_amv(model, sample) - spice),
        "airm": abs(dist_airm(model, sample) - spice),
        "jbld": abs(8.0 * dist_jbld(model, sample) - spice),
    }


def check_equivalence_gaps(
    population, epsilon, rho, delta, n_trials, rng, n_snapshots=None
):
    """Randomized check of the three criterion gap bounds.

    Each trial draws a model covariance in the AIRM ball of radius ``rho``
    around ``population`` and a sample covariance from ``n_snapshots``
    Gaussian snapshots (default: the computed threshold, rounded up). Trials
    where the spectral deviation exceeds ``epsilon`` are skipped (the
    guarantee is conditional on that event); on conditioned trials the gaps
    are asserted against ``dim * C * epsilon^k``.
    """
    pop = hpd_values(population, "population covariance")
    dim = pop.shape[0]
    kappa = float(np.linalg.cond(pop))
    bounds = equivalence_bounds(epsilon, rho, delta, dim, kappa)
    if n_snapshots is None:
        n_snapshots = math.ceil(bounds.n0)
    limits = {
        "amv": dim * bounds.c_amv * epsilon**3,
        "airm": dim * bounds.c_airm * epsilon**4,
        "jbld": dim * bounds.c_jbld * epsilon**4,
    }
    report = EquivalenceCheckReport(
        bounds=bounds,
        n_snapshots=n_snapshots,
        n_trials=n_trials,
        max_gap_ratios={name: 0.0 for name in limits},
    )
    for _ in range(n_trials):
        model = airm_ball_sample(pop, rho, rng)
        sample = gaussian_sample_covariance(pop, n_snapshots, rng)
        deviation = np.linalg.norm(
            np.linalg.solve(model.conj().T, sample.conj().T).conj().T
            - np.eye(dim),
            ord=2,
        )
        if deviation > epsilon:
            continue
        report.n_conditioned += 1
        gaps = criterion_gaps(model, sample)
        for name, gap in gaps.items():
            ratio = gap / limits[name]
            report.max_gap_ratios[name] = max(report.max_gap_ratios[name], ratio)
            margin = gap - limits[name]
            report.worst_margin = max(report.worst_margin, margin)
            if margin > 0:
                report.n_violations += 1
    return report


def random_outlier_spectrum(dim, rng, epsilon=None, headroom=2.0):
    """Random eigenvalue spectrum with a single dominant outlier.

    All entries but one lie in ``[1 - epsilon, 1 + epsilon]``; the outlier
    ``1 + delta`` satisfies
    ``log(1 + delta) >= max(log(1 + epsilon), -log(1 - epsilon))``.
    Returns ``(spectrum, outlier_index)``.
    """
    if epsilon is None:
        epsilon = rng.uniform(0.05, 0.9)
    if not 0.0 < epsilon < 1.0:
        raise DomainError("epsilon must lie in (0, 1)")
    values = rng.uniform(1.0 - epsilon, 1.0 + epsilon, size=dim)
    threshold = max(math.log1p(epsilon), -math.log1p(-epsilon))
    log_delta = threshold * (1.0 + rng.uniform(0.0, headroom))
    index = int(rng.integers(dim))
    values[index] = math.exp(log_delta)
    return values, index


def contribution_ordering_holds(spectrum, index, slack=1e-12):
    """Whether the outlier's relative contribution is ordered
    amv >= spice >= airm >= jbld on the given spectrum."""
    shares = [
        relative_contribution(kind, spectrum, index) for kind in SPECTRUM_CRITERIA
    ]
    return all(shares[i] >= shares[i + 1] - slack for i in range(len(shares) - 1))


def spice_airm_penalty_ratio(u):
    """Ratio of the SPICE to the AIRM penalty in the half-log-eigenvalue
    coordinate: ``(sinh(u)/u)^2`` with the limit 1 at zero. Strictly
    increasing in ``|u|``."""
    u = np.asarray(u, dtype=float)
    out = np.ones_like(u)
    nz = u != 0
    out[nz] = (np.sinh(u[nz]) / u[nz]) ** 2
    if out.ndim == 0:
        return float(out)
    return out


def jbld_airm_penalty_ratio(u):
    """Ratio of the JBLD to the AIRM penalty in the half-log-eigenvalue
    coordinate: ``log(cosh(u)) / (4 u^2)`` with the limit 1/8 at zero.
    Strictly decreasing in ``|u|``."""
    u = np.asarray(u, dtype=float)
    out = np.full_like(u, 0.125)
    nz = u != 0
    # log(cosh(u)) = |u| + log1p(exp(-2|u|)) - log 2, overflow-safe
    au = np.abs(u[nz])
    log_cosh = au + np.log1p(np.exp(-2.0 * au)) - math.log(2.0)
    out[nz] = log_cosh / (4.0 * u[nz] ** 2)
    if out.ndim == 0:
        return float(out)
    return out
