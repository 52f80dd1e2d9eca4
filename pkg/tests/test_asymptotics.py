import numpy as np
import pytest

from nibm.asymptotics import (
    ModelM,
    gamma_sq_asymptotic,
    model_entries,
    u_integral,
)
from nibm.errors import RegimeError
from nibm.phase import T_CRITICAL, phase_data


class TestModelEntries:
    def test_unimodular(self, pd16):
        mm = ModelM(pd=pd16, n_parity=0.5, tau=0.3)
        m11, m12, m21, m22 = model_entries(0.5 * pd16.beta + 0.4j, mm)
        assert m11 * m22 - m12 * m21 == pytest.approx(1.0, abs=1e-10)

    def test_saturated_jump_phase(self, pd16):
        mm = ModelM(pd=pd16, n_parity=0.5, tau=0.3)
        x = pd16.alpha / 2
        up = model_entries(complex(x, 1e-9), mm)
        dn = model_entries(complex(x, -1e-9), mm)
        phase = np.exp(2j * np.pi * (0.3 + 0.5))
        assert up[0] == pytest.approx(dn[0] * phase, abs=1e-8)
        assert up[2] == pytest.approx(dn[2] * phase, abs=1e-8)
        assert up[1] == pytest.approx(dn[1] * np.conj(phase), abs=1e-7)
        assert up[3] == pytest.approx(dn[3] * np.conj(phase), abs=1e-8)

    def test_identity_at_infinity_for_trivial_shift(self, pd16):
        mm = ModelM(pd=pd16, n_parity=0.5, tau=0.5)
        for z, tol in ((200.0 + 0.2j, 2e-3), (2000.0 + 0.2j, 2e-4)):
            m11, m12, m21, m22 = model_entries(z, mm)
            assert abs(m11 - 1) <= tol and abs(m22 - 1) <= tol
            assert abs(m12) <= tol and abs(m21) <= tol

    def test_trivial_theta_ratios_at_matching_shift(self, pd16):
        # tau = parity shift: entries reduce to pure ratio-function forms
        from nibm.asymptotics import gamma_ratio

        mm = ModelM(pd=pd16, n_parity=0.5, tau=0.5)
        z = 0.4 * pd16.beta + 0.9j
        g = gamma_ratio(z, pd16)
        m11, m12, m21, m22 = model_entries(z, mm)
        assert m11 == pytest.approx((g + 1 / g) / 2, rel=1e-12)
        assert m22 == pytest.approx((g + 1 / g) / 2, rel=1e-12)
        assert m12 == pytest.approx(np.pi * (g - 1 / g), rel=1e-12)
        assert m21 == pytest.approx((g - 1 / g) / (4 * np.pi), rel=1e-12)

    def test_regime_guard(self):
        with pytest.raises(RegimeError):
            ModelM(pd=phase_data(5.0), n_parity=0.0, tau=0.0)


class TestUIntegral:
    def test_path_independence(self, pd16):
        z = 0.5 * pd16.beta + 0.4j
        u1 = u_integral(z, pd16)
        u2 = u_integral(z, pd16, via=pd16.beta + 1.2j)
        assert abs(u1 - u2) <= 1e-10

    def test_saturated_jump_is_imaginary_period(self, pd16):
        from nibm.special import complete_elliptic

        Kp = complete_elliptic(np.sqrt(1 - pd16.k**2)).K
        x = pd16.alpha / 3
        jump = u_integral(complex(x, 1e-9), pd16) - u_integral(complex(x, -1e-9), pd16)
        assert jump == pytest.approx(1j * np.pi * Kp / (2 * pd16.K), abs=1e-8)


class TestGammaSqPrediction:
    def test_subcritical(self):
        assert gamma_sq_asymptotic(30, 5.0, 0.1) == pytest.approx(0.2)

    def test_supercritical_even_parity(self, pd16):
        from nibm.special import jacobi_dn

        v = gamma_sq_asymptotic(20, 16.0, 0.0)
        pred = jacobi_dn(2 * pd16.K_tilde, pd16.k_tilde) ** 2 / (4 * pd16.E_tilde**2)
        assert v == pytest.approx(pred, rel=1e-13)

    def test_critical_formula(self, hm):
        n = 64
        q0 = hm.q_at(0.0)
        v = gamma_sq_asymptotic(n, T_CRITICAL, 0.0, sigma=0.0, hm=hm)
        expected = (1 / T_CRITICAL) * (
            1
            - 2 ** (5 / 3) * n ** (-1 / 3) * q0 * np.cos(2 * np.pi * 0.5)
            + 2 ** (4 / 3) * n ** (-2 / 3) * q0**2
        )
        assert v == pytest.approx(expected, rel=1e-14)

    def test_error_shrinks_at_stated_order(self):
        # the prediction's error must shrink at least as fast as the stated
        # O(1/n); the observed decay here is in fact faster (about n^-2)
        from nibm.hp import hp_lattice

        errs = []
        for n in (40, 80):
            lat = hp_lattice(n, 16.0, 0.3)
            errs.append(abs(lat.gamma_sq_top() - gamma_sq_asymptotic(n, 16.0, 0.3)))
        slope = np.log2(errs[0] / errs[1])
        assert slope >= 1.0 - 0.3
