"""Geometry and criterion tests with independent scalar/matrix oracles."""

import math

import numpy as np
import pytest
import scipy.linalg

from sercom import (
    DefinitenessError,
    DegenerateError,
    DomainError,
    ShapeError,
    UnsupportedError,
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
from sercom.validation import HermitianMatrix, hermitian_part


def rand_hpd(rng, dim, jitter=0.5):
    """Random HPD matrix, built independently of the package helpers."""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return hermitian_part(a @ a.conj().T) + jitter * np.eye(dim)


def rand_hermitian(rng, dim):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return hermitian_part(a)


# --- scalar penalty oracles (independent reimplementation via math) -------

def psi_oracle(kind, lam):
    if kind == "amv":
        return (lam - 1.0) ** 2
    if kind == "spice":
        return (math.sqrt(lam) - 1.0 / math.sqrt(lam)) ** 2
    if kind == "airm":
        return math.log(lam) ** 2
    if kind == "jbld":
        return math.log((1.0 + lam) / (2.0 * math.sqrt(lam)))
    raise AssertionError(kind)


DIRECT = {
    "amv": crit_amv,
    "spice": crit_spice,
    "airm": dist_airm,
    "jbld": dist_jbld,
}


class TestMatrixLog:
    def test_identity_maps_to_zero(self):
        np.testing.assert_allclose(matrix_log(np.eye(3)), np.zeros((3, 3)), atol=1e-14)

    def test_diagonal_scalar_log(self):
        m = np.diag([math.e, math.e**2])
        np.testing.assert_allclose(matrix_log(m), np.diag([1.0, 2.0]), atol=1e-12)

    def test_one_by_one(self):
        np.testing.assert_allclose(
            matrix_log(np.array([[4.0]])), [[math.log(4.0)]], rtol=1e-12
        )

    def test_rejects_non_hpd(self):
        with pytest.raises(DefinitenessError):
            matrix_log(np.diag([1.0, -1.0]))
        with pytest.raises(DefinitenessError):
            matrix_log(np.diag([1.0, 0.0]))

    def test_inverse_of_exp(self):
        rng = np.random.default_rng(11)
        h = rand_hermitian(rng, 5)
        np.testing.assert_allclose(matrix_log(scipy.linalg.expm(h)), h, atol=1e-10)


class TestSqrtInvsqrt:
    def test_identity(self):
        s, t = matrix_sqrt_and_invsqrt(np.eye(2))
        np.testing.assert_allclose(s, np.eye(2), atol=1e-14)
        np.testing.assert_allclose(t, np.eye(2), atol=1e-14)

    def test_diagonal(self):
        s, t = matrix_sqrt_and_invsqrt(np.diag([4.0, 9.0]))
        np.testing.assert_allclose(s, np.diag([2.0, 3.0]), atol=1e-12)
        np.testing.assert_allclose(t, np.diag([0.5, 1.0 / 3.0]), atol=1e-12)

    def test_one_by_one(self):
        s, t = matrix_sqrt_and_invsqrt(np.array([[0.25]]))
        assert s[0, 0] == pytest.approx(0.5, rel=1e-12)
        assert t[0, 0] == pytest.approx(2.0, rel=1e-12)

    def test_defining_relations(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            m = rand_hpd(rng, 6)
            s, t = matrix_sqrt_and_invsqrt(m)
            scale = np.linalg.norm(m)
            assert np.linalg.norm(s @ s - m) <= 1e-10 * scale
            assert np.linalg.norm(t @ m @ t - np.eye(6)) <= 1e-10


class TestLogmapAndInner:
    def test_logmap_at_itself_is_zero(self):
        rng = np.random.default_rng(3)
        r = rand_hpd(rng, 4)
        np.testing.assert_allclose(
            riemannian_logmap(r, r), np.zeros((4, 4)), atol=1e-12
        )

    def test_logmap_at_identity_reduces_to_matrix_log(self):
        target = np.diag([math.e, math.e])
        np.testing.assert_allclose(
            riemannian_logmap(np.eye(2), target), np.eye(2), atol=1e-12
        )

    def test_logmap_norm_matches_squared_distance(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            base, target = rand_hpd(rng, 5), rand_hpd(rng, 5)
            tangent = riemannian_logmap(base, target)
            assert airm_inner(base, tangent, tangent) == pytest.approx(
                dist_airm(base, target), rel=1e-9
            )

    def test_inner_identity_base(self):
        assert airm_inner(np.eye(3), np.eye(3), np.eye(3)) == pytest.approx(3.0)
        assert airm_inner(
            np.eye(2), np.diag([1.0, -1.0]), np.diag([1.0, 1.0])
        ) == pytest.approx(0.0, abs=1e-14)

    def test_inner_is_positive_form(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            base = rand_hpd(rng, 4)
            x = rand_hermitian(rng, 4)
            assert airm_inner(base, x, x) >= 0.0

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            airm_inner(np.eye(3), np.eye(2), np.eye(3))
        with pytest.raises(ShapeError):
            riemannian_logmap(np.eye(3), np.eye(2))


class TestDistances:
    def test_zero_at_equal_arguments(self):
        rng = np.random.default_rng(6)
        r = rand_hpd(rng, 4)
        for dist in (dist_airm, dist_le, dist_jbld):
            assert dist(r, r) == pytest.approx(0.0, abs=1e-10)

    def test_commuting_diagonal_values(self):
        # diagonal pair: all three reduce to per-eigenvalue scalar penalties
        m = np.diag([math.e**2, math.e**2])
        assert dist_airm(np.eye(2), m) == pytest.approx(8.0, rel=1e-12)
        assert dist_le(np.eye(2), m) == pytest.approx(8.0, rel=1e-12)

    def test_jbld_scalar(self):
        expected = math.log(5.0) - 0.5 * math.log(16.0)  # = log 1.25
        assert dist_jbld(np.array([[2.0]]), np.array([[8.0]])) == pytest.approx(
            expected, rel=1e-12
        )

    def test_symmetry(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            r1, r2 = rand_hpd(rng, 5), rand_hpd(rng, 5)
            for dist in (dist_airm, dist_le, dist_jbld):
                assert abs(dist(r1, r2) - dist(r2, r1)) <= 1e-10 * (1 + dist(r1, r2))

    def test_positive_on_distinct_arguments(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            r = rand_hpd(rng, 4)
            perturbed = r + 1e-3 * rand_hpd(rng, 4)
            for dist in (dist_airm, dist_le, dist_jbld):
                assert dist(r, perturbed) > 0.0

    def test_airm_affine_invariance(self):
        rng = np.random.default_rng(10)
        for _ in range(5):
            r1, r2 = rand_hpd(rng, 4), rand_hpd(rng, 4)
            a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            d0 = dist_airm(r1, r2)
            d1 = dist_airm(
                hermitian_part(a @ r1 @ a.conj().T), hermitian_part(a @ r2 @ a.conj().T)
            )
            assert abs(d0 - d1) <= 1e-8 * d0

    def test_jbld_affine_invariance(self):
        rng = np.random.default_rng(12)
        for _ in range(5):
            r1, r2 = rand_hpd(rng, 4), rand_hpd(rng, 4)
            a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            d0 = dist_jbld(r1, r2)
            d1 = dist_jbld(
                hermitian_part(a @ r1 @ a.conj().T), hermitian_part(a @ r2 @ a.conj().T)
            )
            assert abs(d0 - d1) <= 1e-8 * d0

    def test_le_unitary_invariance(self):
        rng = np.random.default_rng(13)
        q, _ = np.linalg.qr(
            rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        )
        r1, r2 = rand_hpd(rng, 4), rand_hpd(rng, 4)
        d0 = dist_le(r1, r2)
        d1 = dist_le(
            hermitian_part(q @ r1 @ q.conj().T), hermitian_part(q @ r2 @ q.conj().T)
        )
        assert abs(d0 - d1) <= 1e-8 * d0

    def test_jbld_sqrt_triangle_inequality(self):
        rng = np.random.default_rng(14)
        for _ in range(50):
            a, b, c = (rand_hpd(rng, 4) for _ in range(3))
            dab = math.sqrt(dist_jbld(a, b))
            dbc = math.sqrt(dist_jbld(b, c))
            dac = math.sqrt(dist_jbld(a, c))
            assert dac <= dab + dbc + 1e-12

    def test_jbld_psd_first_argument_is_infinite(self):
        rng = np.random.default_rng(15)
        r2 = rand_hpd(rng, 3)
        v = rng.standard_normal((3, 1)) + 1j * rng.standard_normal((3, 1))
        psd = hermitian_part(v @ v.conj().T)  # rank one
        assert dist_jbld(psd, r2) == math.inf

    def test_jbld_indefinite_argument_rejected(self):
        with pytest.raises(DefinitenessError):
            dist_jbld(np.diag([1.0, -5.0]), np.eye(2))
        with pytest.raises(DefinitenessError):
            dist_jbld(np.eye(2), np.diag([1.0, -1.0]))


class TestCriteria:
    def test_zero_at_match(self):
        rng = np.random.default_rng(16)
        r = rand_hpd(rng, 4)
        assert crit_amv(r, r) == pytest.approx(0.0, abs=1e-10)
        assert crit_spice(r, r) == pytest.approx(0.0, abs=1e-10)

    def test_scalar_cases(self):
        assert crit_amv(np.array([[1.0]]), np.array([[2.0]])) == pytest.approx(1.0)
        # (sqrt(4) - 1/sqrt(4))^2 = 2.25
        assert crit_spice(np.array([[1.0]]), np.array([[4.0]])) == pytest.approx(2.25)

    def test_amv_accepts_indefinite_sample(self):
        rng = np.random.default_rng(17)
        r = rand_hpd(rng, 3)
        s = rand_hermitian(rng, 3)  # generally indefinite
        delta = s - r
        sqrt_inv = np.linalg.inv(scipy.linalg.sqrtm(r))
        oracle = np.linalg.norm(sqrt_inv @ delta @ sqrt_inv) ** 2
        assert crit_amv(r, s) == pytest.approx(float(np.real(oracle)), rel=1e-9)

    def test_spice_frobenius_route_matches_trace_route(self):
        rng = np.random.default_rng(18)
        for _ in range(10):
            r, s = rand_hpd(rng, 5), rand_hpd(rng, 5)
            r_isq = np.linalg.inv(scipy.linalg.sqrtm(r))
            s_isq = np.linalg.inv(scipy.linalg.sqrtm(s))
            oracle = float(np.real(np.linalg.norm(r_isq @ (s - r) @ s_isq) ** 2))
            assert crit_spice(r, s) == pytest.approx(oracle, rel=1e-9)

    def test_amv_matches_penalty_sum(self):
        rng = np.random.default_rng(19)
        for _ in range(10):
            r, s = rand_hpd(rng, 5), rand_hpd(rng, 5)
            w = whitened_eigenvalues(r, s)
            assert crit_amv(r, s) == pytest.approx(
                float(np.sum((w - 1.0) ** 2)), rel=1e-9
            )


class TestWhitenedEigenvalues:
    def test_match_gives_all_ones(self):
        rng = np.random.default_rng(20)
        r = rand_hpd(rng, 5)
        np.testing.assert_allclose(whitened_eigenvalues(r, r), np.ones(5), atol=1e-10)

    def test_diagonal_ratio(self):
        w = whitened_eigenvalues(np.diag([1.0, 2.0]), np.diag([2.0, 2.0]))
        np.testing.assert_allclose(w, [1.0, 2.0], rtol=1e-12)

    def test_scalar_ratio(self):
        w = whitened_eigenvalues(np.array([[4.0]]), np.array([[6.0]]))
        assert w[0] == pytest.approx(1.5)

    def test_ascending_and_positive(self):
        rng = np.random.default_rng(21)
        w = whitened_eigenvalues(rand_hpd(rng, 6), rand_hpd(rng, 6))
        assert np.all(w > 0)
        assert np.all(np.diff(w) >= 0)


class TestEigenvaluePenalty:
    @pytest.mark.parametrize("kind", ["amv", "spice", "airm", "jbld"])
    def test_zero_at_one(self, kind):
        assert eigenvalue_penalty(kind, 1.0) == pytest.approx(0.0, abs=1e-15)

    def test_scalar_values(self):
        assert eigenvalue_penalty("spice", 4.0) == pytest.approx(2.25)
        assert eigenvalue_penalty("airm", math.e) == pytest.approx(1.0)

    def test_matches_oracle_on_grid(self):
        lams = np.linspace(0.05, 6.0, 40)
        for kind in ("amv", "spice", "airm", "jbld"):
            values = eigenvalue_penalty(kind, lams)
            oracle = np.array([psi_oracle(kind, l) for l in lams])
            np.testing.assert_allclose(values, oracle, rtol=1e-12, atol=1e-15)
            assert np.all(values >= 0)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            eigenvalue_penalty("amv", 0.0)
        with pytest.raises(DomainError):
            eigenvalue_penalty("jbld", -1.0)
        with pytest.raises(UnsupportedError):
            eigenvalue_penalty("le", 2.0)
        with pytest.raises(UnsupportedError):
            eigenvalue_penalty("nope", 2.0)


class TestCriterionFromSpectrum:
    def test_all_ones_is_zero(self):
        for kind in ("amv", "spice", "airm", "jbld"):
            assert criterion_from_spectrum(kind, np.ones(5)) == pytest.approx(0.0)

    def test_hand_case(self):
        # 0.01 + 0.01 + 9
        assert criterion_from_spectrum("amv", [1.1, 0.9, 4.0]) == pytest.approx(9.02)

    def test_matches_direct_criteria(self):
        rng = np.random.default_rng(22)
        for _ in range(20):
            r, s = rand_hpd(rng, 6), rand_hpd(rng, 6)
            w = whitened_eigenvalues(r, s)
            for kind, direct in DIRECT.items():
                expected = direct(r, s)
                value = criterion_from_spectrum(kind, w)
                assert value == pytest.approx(expected, rel=1e-9, abs=1e-12)


class TestEquivalenceBounds:
    def test_small_epsilon_limits(self):
        b = equivalence_bounds(1e-9, 5e-10, 0.1, 4, 1.0)
        assert b.c_amv == pytest.approx(1.0, rel=1e-6)
        assert b.c_airm == pytest.approx(23.0 / 12.0, rel=1e-6)
        assert b.c_jbld == pytest.approx(2.0625, rel=1e-6)

    def test_threshold_hand_case(self):
        b = equivalence_bounds(0.5, 1e-6, 0.05, 12, 1.0)
        # dominant arithmetic: (12 + log 40) / 0.25
        assert b.n0 == pytest.approx((12 + math.log(40.0)) / 0.25, rel=1e-4)
        assert b.n0 == pytest.approx(62.7559, abs=1e-3)

    def test_radius_boundary_rejected(self):
        with pytest.raises(DomainError):
            equivalence_bounds(0.5, math.log(1.5), 0.05, 8, 1.0)
        with pytest.raises(DomainError):
            equivalence_bounds(0.5, math.log(1.5) + 0.1, 0.05, 8, 1.0)

    def test_parameter_domains(self):
        with pytest.raises(DomainError):
            equivalence_bounds(1.5, 0.1, 0.05, 8, 1.0)
        with pytest.raises(DomainError):
            equivalence_bounds(0.5, 0.1, 0.0, 8, 1.0)
        with pytest.raises(DomainError):
            equivalence_bounds(0.5, 0.1, 0.05, 8, 0.5)


class TestRelativeContribution:
    def test_hand_case_ordering(self):
        spectrum = [1.1, 0.9, 4.0]
        shares = {}
        for kind in ("amv", "spice", "airm", "jbld"):
            oracle = psi_oracle(kind, 4.0) / sum(psi_oracle(kind, l) for l in spectrum)
            shares[kind] = relative_contribution(kind, spectrum, 2)
            assert shares[kind] == pytest.approx(oracle, rel=1e-12)
        # frozen from the scalar oracle
        assert shares["amv"] == pytest.approx(0.99778, abs=5e-5)
        assert shares["spice"] == pytest.approx(0.99110, abs=5e-5)
        assert shares["airm"] == pytest.approx(0.98960, abs=5e-5)
        assert shares["jbld"] == pytest.approx(0.98882, abs=5e-5)
        assert (
            shares["amv"] >= shares["spice"] >= shares["airm"] >= shares["jbld"]
        )

    def test_outlier_with_unit_rest(self):
        for kind in ("amv", "spice", "airm", "jbld"):
            assert relative_contribution(kind, [1.0, 1.0, 3.0], 2) == pytest.approx(1.0)

    def test_degenerate_spectrum(self):
        with pytest.raises(DegenerateError):
            relative_contribution("amv", [1.0, 1.0, 1.0], 0)


class TestHermitianMatrixType:
    def test_grades(self):
        rng = np.random.default_rng(23)
        hpd = HermitianMatrix.from_array(rand_hpd(rng, 4))
        assert hpd.definiteness == "hpd"
        v = rng.standard_normal((4, 1)) + 1j * rng.standard_normal((4, 1))
        psd = HermitianMatrix.from_array(hermitian_part(v @ v.conj().T))
        assert psd.definiteness == "psd"
        with pytest.raises(DefinitenessError):
            HermitianMatrix.from_array(np.diag([1.0, -1.0]))

    def test_rejects_non_hermitian(self):
        with pytest.raises(ShapeError):
            HermitianMatrix.from_array(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_values_are_frozen(self):
        m = HermitianMatrix.from_array(np.eye(3))
        with pytest.raises(ValueError):
            m.values[0, 0] = 2.0

    def test_require_hpd(self):
        m = HermitianMatrix.from_array(np.diag([1.0, 0.0]))
        with pytest.raises(DefinitenessError):
            m.require_hpd()
