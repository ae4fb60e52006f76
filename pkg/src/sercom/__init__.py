"""Spatial power spectrum and DOA estimation by covariance matching on the
manifold of Hermitian positive definite matrices."""

from .arrays import ArrayGeometry, angular_grid, steering_matrix, steering_vector
from .estimators import SamvEstimator, SercomEstimator, SpiceEstimator
from .exceptions import (
    DefinitenessError,
    DegenerateError,
    DomainError,
    SercomError,
    ShapeError,
    UnsupportedError,
)
from .hpd import (
    CRITERIA,
    EquivalenceBounds,
    airm_inner,
    crit_amv,
    crit_spice,
    criterion_from_spectrum,
    dist_airm,
    dist_jbld,
    dist_le,
    eigenvalue_penalty,
    equivalence_bounds,
    matrix_log,
    matrix_sqrt_and_invsqrt,
    relative_contribution,
    riemannian_logmap,
    whitened_eigenvalues,
)
from .matching import (
    EstimateResult,
    PeakSet,
    SercomConfig,
    delay_and_sum,
    extract_peaks,
    samv_estimate,
    sercom_estimate,
    sercom_gradient,
    spice_estimate,
)
from .simulate import (
    PowerSpectrum,
    SourceScene,
    load_snapshots,
    model_covariance,
    population_covariance,
    sample_covariance,
    save_snapshots,
    simulate_snapshots,
    snr_db,
)
from .validation import HermitianMatrix

__version__ = "0.1.0"

__all__ = [
    "ArrayGeometry",
    "CRITERIA",
    "DefinitenessError",
    "DegenerateError",
    "DomainError",
    "EquivalenceBounds",
    "EstimateResult",
    "HermitianMatrix",
    "PeakSet",
    "PowerSpectrum",
    "SamvEstimator",
    "SercomConfig",
    "SercomError",
    "SercomEstimator",
    "ShapeError",
    "SourceScene",
    "SpiceEstimator",
    "UnsupportedError",
    "airm_inner",
    "angular_grid",
    "crit_amv",
    "crit_spice",
    "criterion_from_spectrum",
    "delay_and_sum",
    "dist_airm",
    "dist_jbld",
    "dist_le",
    "eigenvalue_penalty",
    "equivalence_bounds",
    "extract_peaks",
    "load_snapshots",
    "matrix_log",
    "matrix_sqrt_and_invsqrt",
    "model_covariance",
    "population_covariance",
    "relative_contribution",
    "riemannian_logmap",
    "samv_estimate",
    "sample_covariance",
    "save_snapshots",
    "sercom_estimate",
    "sercom_gradient",
    "simulate_snapshots",
    "snr_db",
    "spice_estimate",
    "steering_matrix",
    "steering_vector",
    "whitened_eigenvalues",
]
