import numpy as np
import pytest
from math import gamma

from nibm.errors import CutAmbiguityError, DomainError
from nibm.special import (
    airy,
    complete_elliptic,
    complete_elliptic_landen,
    heuman_lambda,
    incomplete_elliptic,
    jacobi_dn,
    jacobi_zeta,
    nome_from,
    theta,
    theta_dz,
)


class TestCompleteElliptic:
    def test_k_zero(self):
        ce = complete_elliptic(0.0)
        assert ce.K == pytest.approx(np.pi / 2, abs=1e-15)
        assert ce.E == pytest.approx(np.pi / 2, abs=1e-15)

    def test_legendre_relation(self):
        ce = complete_elliptic(0.6)
        cep = complete_elliptic(0.8)
        assert ce.K * cep.E + cep.K * ce.E - ce.K * cep.K == pytest.approx(
            np.pi / 2, abs=1e-12
        )

    def test_legendre_grid(self):
        for k in 1.0 - np.logspace(-6, -0.5, 50):
            kp = np.sqrt(1.0 - k * k)
            ce, cep = complete_elliptic(k), complete_elliptic(kp)
            assert abs(ce.K * cep.E + cep.K * ce.E - ce.K * cep.K - np.pi / 2) < 1e-12

    def test_near_one_finite_and_boundary(self):
        assert np.isfinite(complete_elliptic(0.999999).K)
        with pytest.raises(DomainError):
            complete_elliptic(1.0)

    def test_landen_route(self):
        k = 0.7
        kt = 2 * np.sqrt(k) / (1 + k)
        Kt, Et = complete_elliptic_landen(k)
        ce = complete_elliptic(kt)
        assert Kt == pytest.approx(ce.K, rel=1e-14)
        assert Et == pytest.approx(ce.E, rel=1e-14)


class TestIncompleteElliptic:
    def test_zero(self):
        F, E = incomplete_elliptic(0.0, 0.5)
        assert F == 0 and E == 0

    def test_complete_at_one(self):
        F, E = incomplete_elliptic(1.0, 0.5)
        ce = complete_elliptic(0.5)
        assert F == pytest.approx(ce.K, abs=1e-14)
        assert E == pytest.approx(ce.E, abs=1e-14)

    def test_outer_cut_jump(self):
        k = 0.4
        x = 1.5 / k
        Fp, _ = incomplete_elliptic(x, k, side=+1)
        Fm, _ = incomplete_elliptic(x, k, side=-1)
        Kp = complete_elliptic(np.sqrt(1 - k * k)).K
        assert Fp - Fm == pytest.approx(2j * Kp, abs=1e-11)

    def test_cut_needs_side(self):
        with pytest.raises(CutAmbiguityError):
            incomplete_elliptic(1.5, 0.4)

    def test_inner_cut_sums(self):
        k = 0.4
        ce = complete_elliptic(k)
        Fp, Ep = incomplete_elliptic(1.5, k, side=+1)
        Fm, Em = incomplete_elliptic(1.5, k, side=-1)
        assert Fp + Fm == pytest.approx(2 * ce.K, abs=1e-11)
        assert Ep + Em == pytest.approx(2 * ce.E, abs=1e-11)


class TestTheta:
    def test_q_zero(self):
        assert theta(0.7, 0.0) == (1.0, 1.0)

    def test_periodicity(self):
        t3a, _ = theta(0.3, 0.5)
        t3b, _ = theta(0.3 + np.pi, 0.5)
        assert t3a == pytest.approx(t3b, abs=1e-14)

    def test_value_vs_elliptic(self, pd16):
        # theta3(0)^2 = 2 Ktilde / pi at the nome of T = 16
        t3, _ = theta(0.0, pd16.q)
        assert t3**2 == pytest.approx(2 * pd16.K_tilde / np.pi, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            theta(0.0, 1.0)

    def test_half_period_shift(self):
        zs = np.linspace(0, 3, 17)
        t3, t4 = theta(zs, 0.71)
        t3s, _ = theta(zs + np.pi / 2, 0.71)
        np.testing.assert_allclose(t3s, t4, atol=1e-14)

    def test_derivatives_termwise(self):
        h = 1e-6
        for z in (0.11, 0.8, 2.3):
            d3, d4 = theta_dz(z, 0.4)
            t3p, t4p = theta(z + h, 0.4)
            t3m, t4m = theta(z - h, 0.4)
            assert d3 == pytest.approx((t3p - t3m) / (2 * h), abs=1e-9)
            assert d4 == pytest.approx((t4p - t4m) / (2 * h), abs=1e-9)


class TestNome:
    def test_small_k(self):
        # q ~ k/4 near zero
        assert nome_from(1e-8) < 1e-8
        assert nome_from(1e-8) == pytest.approx(1e-8 / 4, rel=1e-6)

    def test_two_expressions_agree(self):
        k = 0.5
        kt = 2 * np.sqrt(k) / (1 + k)
        ktp = np.sqrt(1 - kt * kt)
        q2 = np.exp(-np.pi * complete_elliptic(ktp).K / complete_elliptic(kt).K)
        assert nome_from(k) == pytest.approx(q2, abs=1e-12)

    def test_monotone(self):
        ks = np.linspace(0.05, 0.95, 40)
        qs = [nome_from(k) for k in ks]
        assert np.all(np.diff(qs) > 0)
        assert 0 < qs[-1] < 1


class TestJacobiDn:
    def test_origin(self):
        assert jacobi_dn(0.0, 0.4) == 1.0

    def test_periodicity(self):
        kt = 0.9
        K = complete_elliptic(kt).K
        assert jacobi_dn(0.7 + 2 * K, kt) == pytest.approx(jacobi_dn(0.7, kt), abs=1e-13)

    def test_quarter_period(self):
        k = 0.6
        K = complete_elliptic(k).K
        assert jacobi_dn(K, k) == pytest.approx(np.sqrt(1 - k * k), abs=1e-13)


class TestJacobiZeta:
    def test_zeros(self):
        assert jacobi_zeta(0.0, 0.5) == 0
        assert abs(jacobi_zeta(1.0, 0.5)) < 1e-14

    def test_branch_point_value(self):
        k = 0.5
        K = complete_elliptic(k).K
        assert jacobi_zeta(1 / k, k, side=+1) == pytest.approx(
            -1j * np.pi / (2 * K), abs=1e-12
        )

    def test_derivative_at_zero(self):
        k = 0.7
        ce = complete_elliptic(k)
        h = 1e-5
        zp = (jacobi_zeta(h, k) - jacobi_zeta(0.0, k)) / h
        assert zp.real == pytest.approx(1 - ce.E / ce.K, abs=1e-8)

    def test_matches_incomplete_composition(self):
        k = 0.63
        ce = complete_elliptic(k)
        for u in (0.3, 0.5 + 0.4j, 1.2j):
            F, E = incomplete_elliptic(u, k)
            assert jacobi_zeta(u, k) == pytest.approx(E - (ce.E / ce.K) * F, abs=1e-12)

    def test_imag_decreasing_between_branch_points(self):
        k = 0.55
        xs = np.linspace(1.001, 1 / k - 0.001, 100)
        vals = [jacobi_zeta(x, k, side=+1).imag for x in xs]
        assert np.all(np.diff(vals) < 0)

    def test_outer_real_increasing_concave(self):
        k = 0.55
        K = complete_elliptic(k).K
        xs = np.linspace(1 / k + 0.01, 1 / k + 8.0, 100)
        vals = np.array([(jacobi_zeta(x, k, side=+1) + 1j * np.pi / (2 * K)).real for x in xs])
        assert np.all(np.diff(vals) > 0)
        assert np.all(np.diff(np.diff(vals)) < 0)

    def test_imaginary_axis_increasing_convex(self):
        k = 0.55
        ys = np.linspace(0.01, 6.0, 100)
        vals = np.array([jacobi_zeta(1j * y, k).imag for y in ys])
        assert np.all(np.diff(vals) > 0)
        assert np.all(np.diff(np.diff(vals)) > 0)


class TestHeumanLambda:
    def test_endpoints(self):
        assert heuman_lambda(0.0, 0.6) == pytest.approx(0.0, abs=1e-15)
        assert heuman_lambda(1.0, 0.6) == pytest.approx(1.0, abs=1e-12)

    def test_interior(self):
        v = heuman_lambda(0.5, 0.6)
        assert 0.0 < v < 1.0

    def test_strictly_increasing(self):
        xs = np.linspace(0.0, 1.0, 60)
        vals = [heuman_lambda(x, 0.37) for x in xs]
        assert np.all(np.diff(vals) > 0)


class TestAiry:
    def test_origin_value(self):
        ai, _ = airy(0.0)
        assert ai == pytest.approx(3.0 ** (-2 / 3) / gamma(2 / 3), abs=1e-15)

    def test_positive_decreasing(self):
        xs = np.linspace(0.0, 8.0, 50)
        vals = airy(xs)[0]
        assert np.all(vals > 0)
        assert np.all(np.diff(vals) < 0)

    def test_defining_ode(self):
        h = 1e-4
        x = 1.3
        a = airy(np.array([x - h, x, x + h]))[0]
        second = (a[0] - 2 * a[1] + a[2]) / (h * h)
        assert second == pytest.approx(x * airy(x)[0], abs=1e-6)
