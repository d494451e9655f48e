import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from formkit.errors import (
    ConditionGuard,
    DimensionMismatch,
    MetricSingular,
    NotInvertible,
    NotSymmetric,
)
from formkit.forms import (
    FiniteForm,
    MetricOperator,
    adjoint_form,
    adjoint_rep,
    associated_operator,
    associated_operator_two_metrics,
    eval_form,
    form_from_operator,
    heinz_constants,
    rn_extract,
    sampled_second_rep_residual,
    second_rep_check,
    second_rep_factors,
    second_rep_v,
    second_rep_w,
    semibounded_gamma,
    solvability_check,
)
from formkit.spectral import ToleranceConfig, is_invertible, modulus_half, operator_norm

from conftest import cgauss, random_hermitian, random_matrix, random_pd


def _loop_form(a, xi, eta):
    # sum_ij a_ij xi_j conj(eta_i)
    n = len(xi)
    return sum(a[i][j] * xi[j] * np.conj(eta[i]) for i in range(n) for j in range(n))


class TestFiniteForm:
    def test_eval_matches_double_loop(self, rng):
        for n in (1, 3, 6):
            a = cgauss(rng, n, n)
            xi, eta = cgauss(rng, n), cgauss(rng, n)
            assert eval_form(FiniteForm(a), xi, eta) == pytest.approx(_loop_form(a, xi, eta), rel=1e-13)

    def test_sesquilinear(self, rng):
        f = FiniteForm(cgauss(rng, 4, 4))
        xi, eta, zeta = cgauss(rng, 4), cgauss(rng, 4), cgauss(rng, 4)
        c = 0.3 - 1.7j
        assert f(c * xi + zeta, eta) == pytest.approx(c * f(xi, eta) + f(zeta, eta))
        assert f(xi, c * eta) == pytest.approx(np.conj(c) * f(xi, eta))

    def test_adjoint_form(self, rng):
        f = FiniteForm(cgauss(rng, 4, 4))
        g = adjoint_form(f)
        xi, eta = cgauss(rng, 4), cgauss(rng, 4)
        assert g(xi, eta) == pytest.approx(np.conj(f(eta, xi)))

    def test_dimension_checks(self):
        f = FiniteForm(np.eye(2))
        with pytest.raises(DimensionMismatch):
            eval_form(f, np.ones(3), np.ones(2))
        with pytest.raises(DimensionMismatch):
            FiniteForm(np.ones((2, 3)))


class TestMetric:
    def test_rejects_indefinite(self):
        with pytest.raises(MetricSingular):
            MetricOperator(np.diag([1.0, -1.0]))

    def test_rejects_singular(self):
        with pytest.raises(MetricSingular):
            MetricOperator(np.diag([1.0, 0.0]))

    def test_rejects_non_hermitian(self):
        with pytest.raises(MetricSingular):
            MetricOperator(np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_sandwich_inverse(self, rng):
        h = random_pd(rng, 5, 30.0)
        a = cgauss(rng, 5, 5)
        hinv = np.linalg.inv(h)
        np.testing.assert_allclose(MetricOperator(h).sandwich_inverse(a), hinv @ a @ hinv, atol=1e-12)


class TestRepresentation:
    @pytest.mark.parametrize("seed", range(10))
    def test_round_trip(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 12))
        a = cgauss(rng, n, n)
        rep = rn_extract(FiniteForm(a), MetricOperator(random_pd(rng, n, 100.0)))
        assert rep.residual(a) <= 1e-8 * operator_norm(a)
        # <Q H xi, H eta> reproduces the form
        xi, eta = cgauss(rng, n), cgauss(rng, n)
        h = rep.metric.h
        assert np.vdot(h @ eta, rep.q @ (h @ xi)) == pytest.approx(_loop_form(a, xi, eta), rel=1e-9)

    def test_identity(self):
        rep = rn_extract(FiniteForm(np.eye(3)), MetricOperator(np.eye(3)))
        np.testing.assert_array_equal(rep.q, np.eye(3))
        np.testing.assert_array_equal(associated_operator(rep), np.eye(3))

    def test_condition_guard(self):
        h = np.diag([1.0, 1e5])
        with pytest.raises(ConditionGuard):
            rn_extract(FiniteForm(np.eye(2)), MetricOperator(h))
        tol = ToleranceConfig(cond_guard=1e11)
        rn_extract(FiniteForm(np.eye(2)), MetricOperator(h, tol), tol)

    def test_adjoint(self, rng):
        a = cgauss(rng, 4, 4)
        rep = rn_extract(FiniteForm(a), MetricOperator(random_pd(rng, 4, 5.0)))
        np.testing.assert_allclose(associated_operator(adjoint_rep(rep)), a.conj().T, atol=1e-12)

    def test_two_metrics(self, rng):
        q = cgauss(rng, 3, 3)
        m1, m2 = MetricOperator(random_pd(rng, 3, 4.0)), MetricOperator(random_pd(rng, 3, 4.0))
        t = associated_operator_two_metrics(q, m1, m2)
        xi, eta = cgauss(rng, 3), cgauss(rng, 3)
        assert np.vdot(eta, t @ xi) == pytest.approx(np.vdot(m2.h @ eta, q @ (m1.h @ xi)))


class TestSolvability:
    def test_identity_no_perturbation(self):
        rep = rn_extract(FiniteForm(np.eye(2)), MetricOperator(np.eye(2)))
        assert solvability_check(rep, np.zeros((2, 2))).solvable

    def test_singular_made_solvable(self):
        rep = rn_extract(FiniteForm(np.diag([1.0, 0.0])), MetricOperator(np.eye(2)))
        assert not solvability_check(rep, np.zeros((2, 2))).solvable
        v = solvability_check(rep, np.diag([0.0, 1.0]))
        assert v.solvable
        np.testing.assert_array_equal(v.t_plus_b, np.eye(2))

    @pytest.mark.parametrize("seed", range(20))
    def test_constructed_singular_and_random_agree(self, seed):
        rng = np.random.default_rng(seed)
        n = 6
        a = cgauss(rng, n, n)
        rep = rn_extract(FiniteForm(a), MetricOperator(random_pd(rng, n, 50.0)))
        # B chosen so T + B has a kernel
        b = random_matrix(rng, n, rank=n - 2) - a
        v = solvability_check(rep, b)
        assert not v.bijection.invertible and not v.resolvent_zero.invertible
        v = solvability_check(rep, cgauss(rng, n, n))
        assert v.solvable


class TestSemibounded:
    def test_gamma_is_sampled_infimum(self, rng):
        a = random_hermitian(rng, 5)
        gamma = semibounded_gamma(FiniteForm(a))
        xs = cgauss(rng, 5, 20000)
        xs /= np.linalg.norm(xs, axis=0)
        vals = np.einsum("ik,ij,jk->k", xs.conj(), a, xs).real
        assert vals.min() >= gamma - 1e-12
        # the bound is attained at the bottom eigenvector
        w, v = np.linalg.eigh(a)
        assert FiniteForm(a)(v[:, 0], v[:, 0]).real == pytest.approx(gamma)

    def test_non_symmetric(self):
        with pytest.raises(NotSymmetric):
            semibounded_gamma(FiniteForm(np.array([[0, 1], [0, 0]])))


class TestSecondRepresentation:
    def test_identity_zero_residuals(self):
        res = second_rep_check(FiniteForm(np.eye(3)))
        assert res.r1 == 0 and res.r2 == 0 and res.normal_gap == 0

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 10), st.integers(0, 2**32 - 1))
    def test_factorizations(self, n, seed):
        rng = np.random.default_rng(seed)
        t = random_matrix(rng, n, rank=int(rng.integers(0, n + 1)))
        f = FiniteForm(t)
        res = second_rep_check(f)
        scale = operator_norm(t)
        assert res.r1 <= 1e-10 * scale and res.r2 <= 1e-10 * scale
        assert sampled_second_rep_residual(f, rng, 20) <= 1e-9

    def test_hermitian_is_normal(self, rng):
        res = second_rep_check(FiniteForm(random_hermitian(rng, 5)))
        assert res.normal_gap <= 1e-12

    def test_factors(self, rng):
        t = cgauss(rng, 4, 4)
        u, half, half_star, p, p_star = second_rep_factors(t)
        np.testing.assert_allclose(half @ half, p, atol=1e-12)
        np.testing.assert_allclose(half_star @ half_star, p_star, atol=1e-12)

    def test_w(self, rng):
        t = cgauss(rng, 6, 6)
        w = second_rep_w(t)
        root = modulus_half(t)
        np.testing.assert_allclose(root @ w @ root, t, atol=1e-10 * operator_norm(t))
        assert is_invertible(w).invertible
        # W is unitary here: |T|^-1/2 U |T|^1/2 is similar to U
        np.testing.assert_allclose(np.abs(np.linalg.eigvals(w)), 1.0, atol=1e-8)

    def test_w_requires_invertible(self):
        with pytest.raises(NotInvertible) as info:
            second_rep_w(np.diag([1.0, 0.0]))
        assert info.value.sigma_min == 0.0

    def test_v_for_singular_t(self):
        t = np.diag([1.0, 0.0])
        v = second_rep_v(t, np.diag([0.0, 1.0]))
        root = modulus_half(t + np.diag([0.0, 1.0]))
        np.testing.assert_allclose(root @ v @ root, t, atol=1e-15)


class TestFormFromOperator:
    def test_identity(self):
        np.testing.assert_allclose(form_from_operator(np.eye(3), np.zeros((3, 3))).gram, np.eye(3))

    @pytest.mark.parametrize("seed", range(10))
    def test_recovers_operator(self, seed):
        rng = np.random.default_rng(seed)
        t = random_matrix(rng, 7, rank=4)
        b = cgauss(rng, 7, 7)
        f = form_from_operator(t, b)
        assert operator_norm(f.gram - t) <= 1e-9 * (operator_norm(t) + operator_norm(b))

    def test_hermitian_gives_symmetric_form(self, rng):
        t = random_hermitian(rng, 5)
        g = form_from_operator(t, 1j * np.eye(5)).gram
        np.testing.assert_allclose(g, g.conj().T, atol=1e-10)

    def test_not_invertible(self):
        with pytest.raises(NotInvertible):
            form_from_operator(np.diag([1.0, 0.0]), np.zeros((2, 2)))


class TestHeinz:
    def test_no_perturbation(self, rng):
        lo, hi = heinz_constants(cgauss(rng, 4, 4), np.zeros((4, 4)))
        assert abs(lo - 1) <= 1e-12 and abs(hi - 1) <= 1e-12

    def test_zero_operator(self):
        lo, hi = heinz_constants(np.zeros((3, 3)), np.eye(3))
        assert lo == pytest.approx(2.0) and hi == pytest.approx(2.0)

    def test_sampled_ratios_within_constants(self, rng):
        t, b = cgauss(rng, 5, 5), cgauss(rng, 5, 5)
        lo, hi = heinz_constants(t, b)
        pt, ptb = modulus_half(t), modulus_half(t + b)
        xs = cgauss(rng, 5, 5000)
        num = np.sum(np.abs(xs) ** 2, 0) + np.sum(np.abs(ptb @ xs) ** 2, 0)
        den = np.sum(np.abs(xs) ** 2, 0) + np.sum(np.abs(pt @ xs) ** 2, 0)
        ratio = num / den
        assert lo - 1e-10 <= ratio.min() and ratio.max() <= hi + 1e-10
        assert lo > 0
