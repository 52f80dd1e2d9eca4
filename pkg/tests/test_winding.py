import numpy as np
import pytest

from nibm.asymptotics import hsgn
from nibm.dgop import hankel_log
from nibm.errors import DomainError, RegimeError
from nibm.phase import T_CRITICAL
from nibm.winding import discrete_normal, log_hankel_via_ode, winding_distribution


class TestWindingDistribution:
    def test_subcritical_concentration(self):
        wd = winding_distribution(30, 5.0, 3, 64)
        assert wd.prob(0) >= 1 - 1e-6

    def test_supercritical_limit_law(self):
        wd = winding_distribution(40, 16.0, 3, 128)
        limit, _ = discrete_normal(16.0)
        for o in range(-2, 3):
            assert abs(wd.prob(o) - limit(o)) <= 0.05
        assert abs(wd.probs.sum() - 1) <= 1e-8

    def test_critical_first_moment(self, hm):
        n = 64
        wd = winding_distribution(n, T_CRITICAL, 2, 128)
        q0 = hm.q_at(0.0)
        pred = q0 / (2 ** (4 / 3) * n ** (1 / 3)) - q0**2 / (2 ** (5 / 3) * n ** (2 / 3))
        assert abs(wd.prob(1) - pred) <= 2.0 / n
        assert abs(wd.prob(-1) - pred) <= 2.0 / n

    def test_symmetry(self):
        wd = winding_distribution(12, 14.0, 3, 64)
        np.testing.assert_allclose(wd.probs, wd.probs[::-1], atol=1e-9)

    def test_quadrature_doubling(self):
        w1 = winding_distribution(12, 14.0, 2, 64)
        w2 = winding_distribution(12, 14.0, 2, 128)
        np.testing.assert_allclose(w1.probs, w2.probs, atol=1e-9)

    def test_underresolved_guard(self):
        with pytest.raises(DomainError):
            winding_distribution(10, 12.0, 20, 32)

    def test_supercritical_log_ratio_structure(self):
        # -log(P(w)/P(0))/w^2 is constant in w and equals -log q
        from nibm.phase import phase_data

        wd = winding_distribution(40, 16.0, 2, 128)
        q = phase_data(16.0).q
        r1 = -np.log(wd.prob(1) / wd.prob(0))
        r2 = -np.log(wd.prob(2) / wd.prob(0)) / 4
        assert abs(r1 - r2) / r1 <= 0.02
        assert abs(r1 + np.log(q)) / abs(np.log(q)) <= 0.05


class TestDiscreteNormal:
    def test_normalized(self):
        prob, _ = discrete_normal(16.0)
        total = sum(prob(o) for o in range(-20, 21))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_flattening_with_temperature(self):
        ratios = []
        for T in (11.0, 14.0, 20.0, 30.0, 60.0):
            prob, _ = discrete_normal(T)
            ratios.append(prob(0) / prob(1))
        assert all(r > 1 for r in ratios)
        assert np.all(np.diff(ratios) < 0)

    def test_near_critical_concentration(self):
        # the nome closes like sqrt(T - pi^2); concentration to 1e-3 needs
        # T within about 1e-6 of critical
        prob, _ = discrete_normal(np.pi**2 + 1e-6)
        assert prob(0) >= 1 - 1e-3
        probs = [discrete_normal(np.pi**2 + dT)[0](0) for dT in (1.0, 0.1, 1e-3)]
        assert np.all(np.diff(probs) > 0)

    def test_regime_guard(self):
        with pytest.raises(RegimeError):
            discrete_normal(5.0)


class TestDeformationRoute:
    def test_trivial_at_parity_shift(self):
        assert log_hankel_via_ode(12, 12.0, hsgn(12)) == 0.0

    def test_matches_direct_hankel(self):
        n, T, tau = 12, 12.0, 0.37
        direct = hankel_log(n, T, tau) - hankel_log(n, T, hsgn(n))
        via = log_hankel_via_ode(n, T, tau)
        assert via == pytest.approx(direct, rel=1e-5)

    def test_stationary_at_parity_shift(self):
        n, T = 10, 11.0
        h = 1e-4
        d = (hankel_log(n, T, hsgn(n) + h) - hankel_log(n, T, hsgn(n) - h)) / (2 * h)
        assert abs(d) <= 1e-6
