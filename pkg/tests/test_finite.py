import numpy as np
import pytest
from scipy.integrate import quad

from nibm.asymptotics import hsgn
from nibm.errors import DomainError, QuadratureError
from nibm.finite import (
    CorrelationContext,
    corr_kernel_hp,
    heat_kernel,
    heat_series_pair,
    km_determinant,
    pearcey_probe,
    s_transform,
    tacnode_probe,
)
from nibm.kernels import gaussian_phi, pearcey_kernel
from nibm.phase import pearcey_d, phase_data


class TestHeatKernel:
    def test_dual_series_agree_on_grid(self):
        worst = 0.0
        for n, t in ((6, 0.7), (10, 1.0), (11, 2.0)):
            for tau in (0.0, 0.3):
                for a in np.linspace(-2, 2, 4):
                    for b in np.linspace(-3, 3, 4):
                        image, fourier = heat_series_pair(n, a, b, t, tau)
                        worst = max(worst, abs(image - fourier))
        assert worst <= 1e-12

    def test_probability_normalization(self):
        val, _ = quad(lambda b: heat_kernel(10, 0.3, b, 1.0).real, -np.pi, np.pi, limit=100)
        assert val == pytest.approx(1.0, abs=1e-10)

    def test_shift_periodicity(self):
        # tau -> tau + 1 relabels the dual lattice and leaves the value fixed
        a = heat_kernel(9, 0.4, -0.2, 1.3, 0.27)
        b = heat_kernel(9, 0.4, -0.2, 1.3, 1.27)
        assert a == pytest.approx(b, abs=1e-13)

    def test_positive_time_required(self):
        with pytest.raises(DomainError):
            heat_kernel(5, 0.0, 0.1, 0.0)


class TestReturnDeterminant:
    def test_single_particle_reduction(self):
        assert km_determinant(1, [0.1], [0.5], 1.0) == heat_kernel(1, 0.1, 0.5, 1.0)

    def test_even_count_half_shift_real_nonnegative(self):
        d = km_determinant(2, [-0.5, 0.7], [-0.3, 0.9], 1.0, 0.5)
        assert abs(d.imag) <= 1e-10
        assert d.real >= 0

    def test_sorted_input_required(self):
        with pytest.raises(DomainError):
            km_determinant(2, [0.7, -0.5], [-0.3, 0.9], 1.0, 0.5)

    def test_matches_walker_extrapolation(self):
        # finest cylinder ensemble available: (M, N) = (16, 48)
        from nibm.walkers import CylinderEnsemble, dp_offset_counts

        M, N, n = 16, 48, 2
        t = 4 * np.pi**2 * n * N / M**2
        ce = CylinderEnsemble(M=M, N=N, n=n, starts=(0, 2), ends=(0, 2))
        dp = (M / (4 * np.pi)) ** 2 * sum(dp_offset_counts(ce).values()) / 2 ** (n * N)
        km = km_determinant(n, [0.0, 2 * np.pi * 2 / M], [0.0, 2 * np.pi * 2 / M], t, 0.5)
        assert dp == pytest.approx(km.real, rel=0.02)


@pytest.fixture(scope="module")
def ctx():
    return CorrelationContext.build(8, 6.0, hsgn(8))


class TestCorrelationContext:

    def test_times_inside_interval(self, ctx):
        with pytest.raises(DomainError):
            ctx.corr_kernel(0.0, 1.0, 0.0, 0.0)

    def test_s_vector_conjugation(self, ctx):
        m1, l1 = ctx.s_vector(2.0, 0.7)
        m2, l2 = ctx.s_vector(2.0, -0.7)
        np.testing.assert_allclose(m2, np.conj(m1), atol=1e-15)
        np.testing.assert_allclose(l1, l2)

    def test_s_zero_positive(self, ctx):
        m, l = ctx.s_vector(2.0, 0.0)
        assert m[0].real > 0 and abs(m[0].imag) < 1e-15
        m0, l0 = s_transform(ctx, 0, 2.0, 0.0)
        assert m0 == m[0] and l0 == l[0]

    def test_parseval_normalization(self, ctx):
        # (n/2pi) integral of S_{k,T-t}(x) S_{k,t}(-x) dx equals h_k
        n, T, t = ctx.n, ctx.T, 2.0
        xs = np.linspace(-np.pi, np.pi, 256, endpoint=False)
        for k in (0, 3, 7):
            vals = []
            for x in xs:
                m1, l1 = ctx.s_vector(T - t, x)
                m2, l2 = ctx.s_vector(t, -x)
                vals.append(m1[k] * m2[k] * np.exp(l1[k] + l2[k] - ctx.rt.log_h[k]))
            total = np.mean(vals) * 2 * np.pi * n / (2 * np.pi)
            assert total == pytest.approx(1.0, abs=1e-8)

    def test_trace_equals_count(self, ctx):
        xs = np.linspace(-np.pi, np.pi, 256, endpoint=False)
        diag = [ctx.corr_kernel(2.0, 2.0, x, x).value for x in xs]
        assert np.mean(np.real(diag)) * 2 * np.pi == pytest.approx(8.0, abs=1e-6)
        assert np.max(np.abs(np.imag(diag))) <= 1e-8

    def test_density_nonnegative(self, ctx):
        xs = np.linspace(-np.pi, np.pi, 64, endpoint=False)
        vals = [ctx.corr_kernel(2.0, 2.0, x, x).value.real for x in xs]
        assert min(vals) >= -1e-8

    def test_reproducing_property(self, ctx):
        x0, y0 = 0.4, -0.9
        zs = np.linspace(-np.pi, np.pi, 256, endpoint=False)
        vals = [
            ctx.corr_kernel(2.0, 2.0, x0, z).value * ctx.corr_kernel(2.0, 2.0, z, y0).value
            for z in zs
        ]
        lhs = np.mean(vals) * 2 * np.pi
        assert lhs == pytest.approx(ctx.corr_kernel(2.0, 2.0, x0, y0).value, abs=1e-6)

    def test_shift_periodicity(self):
        c1 = CorrelationContext.build(6, 7.0, 0.2)
        c2 = CorrelationContext.build(6, 7.0, 1.2)
        v1 = c1.corr_kernel(2.0, 3.0, 0.3, -0.5).value
        v2 = c2.corr_kernel(2.0, 3.0, 0.3, -0.5).value
        assert v1 == pytest.approx(v2, abs=1e-12 * abs(v1))

    def test_two_point_symmetry(self, ctx):
        # equal-time 2-point function is symmetric under swapping positions
        x, y, t = 0.5, -0.3, 2.0
        kxx = ctx.corr_kernel(t, t, x, x).value
        kyy = ctx.corr_kernel(t, t, y, y).value
        kxy = ctx.corr_kernel(t, t, x, y).value
        kyx = ctx.corr_kernel(t, t, y, x).value
        det1 = kxx * kyy - kxy * kyx
        det2 = kyy * kxx - kyx * kxy
        assert det1 == pytest.approx(det2, rel=1e-8)
        assert abs(det1.imag) <= 1e-8

    def test_ordered_times_counterterm(self, ctx):
        kv = ctx.corr_kernel(2.0, 3.0, 0.3, 0.35)
        w = ctx.transition_factor(0.3, 0.35, 1.0)
        assert kv.counterterm == pytest.approx(w.real)
        kv_rev = ctx.corr_kernel(3.0, 2.0, 0.3, 0.35)
        assert kv_rev.counterterm == 0.0


class TestExtendedPrecisionRoute:
    def test_matches_double_at_benign_point(self):
        ctx = CorrelationContext.build(16, 16.0, 0.5)
        kd = ctx.corr_kernel(5.0, 5.0, 0.3, 0.3).value
        kh = corr_kernel_hp(16, 16.0, 0.5, 5.0, 5.0, 0.3, 0.3).value
        assert kh == pytest.approx(kd, rel=1e-10)

    def test_matches_double_at_far_point_small_n(self):
        ctx = CorrelationContext.build(16, 16.0, 0.5)
        kd = ctx.corr_kernel(4.0, 4.0, -np.pi, -np.pi).value
        kh = corr_kernel_hp(16, 16.0, 0.5, 4.0, 4.0, -np.pi, -np.pi).value
        assert kh == pytest.approx(kd, rel=1e-9)

    def test_noise_floor_guard(self):
        from nibm.hp import HPLattice

        lat = HPLattice(64, 16.0, 0.0, prec_bits=53)
        with pytest.raises(QuadratureError):
            lat.ktilde(4.0, 4.0, -np.pi, -np.pi)


class TestScalingProbes:
    def test_pearcey_probe_converges(self):
        errs = pearcey_probe([100, 200, 400], 16.0)
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] <= 0.1

    def test_pearcey_probe_shift_independence(self):
        e1 = pearcey_probe([200], 16.0)[0]
        e2 = pearcey_probe([200], 16.0, tau=0.3)[0]
        assert e2 <= 10 * max(e1, 1e-3)

    def test_pearcey_jacobian_scaling(self):
        # the target comparison uses |dy/d eta| = d n^{-3/4} exactly
        pd = phase_data(16.0)
        d = pearcey_d(pd)
        n = 100
        target = pearcey_kernel(0.0, 0.0, 0.0, 0.0).value
        kv = corr_kernel_hp(n, 16.0, hsgn(n), pd.t_c, pd.t_c, -np.pi, -np.pi)
        assert abs(kv.value * d * n ** (-0.75) - target) == pytest.approx(
            pearcey_probe([n], 16.0)[0], rel=1e-12
        )

    def test_tacnode_probe_converges(self, hm):
        errs = tacnode_probe([64, 128, 256], 0.0, hm=hm)
        assert errs[0] > errs[1] > errs[2]

    def test_transition_factor_gaussian_limit(self):
        pd = phase_data(16.0)
        d = pearcey_d(pd)
        n = 200
        ctx = CorrelationContext.build(n, 16.0, hsgn(n))
        ti_, tj_, xi, eta = 0.0, 0.7, 0.4, -0.3
        t1 = pd.t_c + d * d * n**-0.5 * ti_
        t2 = pd.t_c + d * d * n**-0.5 * tj_
        x = -np.pi - d * n**-0.75 * xi
        y = -np.pi - d * n**-0.75 * eta
        w = ctx.transition_factor(x, y, t2 - t1).real
        pred = (n**0.75 / d) * gaussian_phi(ti_, tj_, xi, eta)
        assert w == pytest.approx(pred, rel=0.05)
