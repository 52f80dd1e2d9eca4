"""Exact finite-n machinery: circular heat kernels, return determinants, and
the shift-deformed correlation kernel with its scaling probes.

The kernel is assembled from lattice sums (never from asymptotic contour
representations): K~ = (n/2pi) sum_k S_{k,T-t_i}(x) S_{k,t_j}(-y)/h_k with the
transition factor subtracted for ordered times.
"""

from dataclasses import dataclass, field

import numpy as np

from .asymptotics import hsgn
from .dgop import LatticeMeasure, RecurrenceTable, build_lattice, weighted_poly_matrix
from .errors import DomainError, QuadratureError
from .kernels import KernelValue, pearcey_kernel, tacnode_kernel
from .phase import CRITICAL_SCALING_D, T_CRITICAL, pearcey_d, phase_data


def heat_series_pair(n, a, b, t, tau=0.0):
    """Both routes to the transition factor: (Gaussian-image sum, lattice Fourier sum)."""
    if not t > 0:
        raise DomainError(f"time t={t} must be positive")
    d = b - a
    kmax = int(np.ceil(np.sqrt(2.0 * t * 45.0 / n) / (2.0 * np.pi))) + 2
    ks = np.arange(-kmax, kmax + 1)
    image = np.sqrt(n / (2.0 * np.pi * t)) * np.sum(
        np.exp(-n * (d + 2.0 * np.pi * ks) ** 2 / (2.0 * t)) * np.exp(2j * np.pi * tau * ks)
    )
    jmax = int(np.ceil(np.sqrt(2.0 * 45.0 * n / t))) + 2
    js = np.arange(-jmax, jmax + 1)
    xs = (js + tau) / n
    fourier = np.sum(np.exp(-t * n * xs**2 / 2.0) * np.exp(-1j * n * xs * d)) / (2.0 * np.pi)
    return complex(image), complex(fourier)


def heat_kernel(n, a, b, t, tau=0.0):
    """Single-particle transition factor on the circle, by dual series.

    Both the Gaussian-image sum and its lattice Fourier resummation are
    evaluated; they must agree to 1e-12 and the better-conditioned one (the
    image series, whose terms decay like exp(-2 pi^2 n k^2/t)) is returned.
    """
    image, fourier = heat_series_pair(n, a, b, t, tau)
    if abs(image - fourier) > 1e-12 * max(1.0, abs(image)):
        raise QuadratureError(
            f"heat-kernel series disagree: image={image}, fourier={fourier}"
        )
    return image


def km_determinant(n, A, B, t, tau=0.0):
    """Return-probability determinant det[P(a_i; b_j; t; tau)].

    For tau = 0 (n odd) or 1/2 (n even) this is the nonintersecting
    transition density.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.size != n or B.size != n:
        raise DomainError("need exactly n starting and ending angles")
    for arr in (A, B):
        if np.any(np.diff(arr) <= 0):
            raise DomainError("angles must be strictly sorted")
    mat = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            mat[i, j] = heat_kernel(n, A[i], B[j], t, tau)
    return complex(np.linalg.det(mat))


@dataclass
class CorrelationContext:
    """Immutable bundle of lattice, recurrence, and weighted-polynomial data."""

    n: int
    T: float
    tau: float
    lm: LatticeMeasure = field(repr=False)
    rt: RecurrenceTable = field(repr=False)
    phi: np.ndarray = field(repr=False)
    L: np.ndarray = field(repr=False)
    _s_cache: dict = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, n, T, tau):
        lm = build_lattice(n, tau, T)
        rt, phi, L = weighted_poly_matrix(lm, n)
        return cls(n=n, T=float(T), tau=float(tau), lm=lm, rt=rt, phi=phi, L=L)

    def s_vector(self, a, x):
        """All S_{k,a}(x) for k < n as (mantissas, log_scales).

        S_{k,a}(x) = (1/n) sum_s p_k(s) exp(-a n s^2/2) exp(i x n s); the
        weighted vectors supply p_k sqrt(w), so the per-node exponent is
        (T/2 - a) n s^2 / 2 relative to them.
        """
        key = (float(a), float(x))
        if key in self._s_cache:
            return self._s_cache[key]
        nodes = self.lm.nodes
        n = self.n
        expo = (self.T / 2.0 - a) * n * nodes**2 / 2.0  # adjusts sqrt(w) to e^{-a n s^2/2}
        with np.errstate(divide="ignore"):
            logmag = np.log(np.abs(self.phi[:n])) + expo[None, :]
        M = np.max(logmag, axis=1)
        scaled = np.sign(self.phi[:n]) * np.exp(logmag - M[:, None])
        osc = np.exp(1j * x * n * nodes)
        mantissas = (scaled @ osc) / n
        out = (mantissas, M + self.L[:n])
        if len(self._s_cache) >= 64:
            self._s_cache.pop(next(iter(self._s_cache)))
        self._s_cache[key] = out
        return out

    def transition_factor(self, x, y, dt):
        """The ordered-time counterterm: lattice heat factor at time gap dt."""
        nodes = self.lm.nodes
        vals = np.exp(-dt * self.n * nodes**2 / 2.0 - 1j * self.n * (y - x) * nodes)
        return complex(np.sum(vals) / (2.0 * np.pi))

    def corr_kernel(self, t_i, t_j, x, y):
        """Two-time correlation kernel K_{t_i,t_j}(x, y) as a KernelValue."""
        if not (0.0 < t_i < self.T and 0.0 < t_j < self.T):
            raise DomainError("times must lie strictly inside (0, T)")
        sx_m, sx_l = self.s_vector(self.T - t_i, x)
        sy_m, sy_l = self.s_vector(t_j, -y)
        log_terms = sx_l + sy_l - self.rt.log_h[: self.n]
        shift = np.max(log_terms)
        total = np.sum(sx_m * sy_m * np.exp(log_terms - shift))
        ktilde = (self.n / (2.0 * np.pi)) * total * np.exp(shift)
        counter = 0.0 + 0.0j
        if t_j > t_i:
            counter = self.transition_factor(x, y, t_j - t_i)
        return KernelValue(
            value=ktilde - counter,
            counterterm=float(counter.real),
            quad_estimate=float(1e-13 * (1.0 + abs(ktilde))),
        )


def s_transform(ctx, k, a, x):
    """Fourier-Gauss transform S_{k,a}(x) of the k-th polynomial, as
    (mantissa, log_scale)."""
    mants, logs = ctx.s_vector(a, x)
    return mants[k], logs[k]


def corr_kernel_hp(n, T, tau, t_i, t_j, x, y, prec_bits=None):
    """Correlation kernel via the extended-precision lattice engine.

    Needed whenever the saturated-regime cancellation (~0.21 n digits, see
    the hp module) exceeds double precision: supercritical contexts beyond
    n of order 70 and any evaluation near x = -pi at large n.
    """
    from .hp import hp_lattice

    lat = hp_lattice(n, T, tau, prec_bits)
    val, floor = lat.ktilde(t_i, t_j, x, y)
    counter = 0.0 + 0.0j
    if t_j > t_i:
        nodes = lat.nodes_float()
        vals = np.exp(-(t_j - t_i) * n * nodes**2 / 2.0 - 1j * n * (y - x) * nodes)
        counter = complex(np.sum(vals) / (2.0 * np.pi))
    return KernelValue(
        value=val - counter,
        counterterm=float(counter.real),
        quad_estimate=float(floor),
    )


def pearcey_probe(n_list, T, tau=None, tau_i=0.0, tau_j=0.0, xi=0.0, eta=0.0, target=None):
    """Distance of the rescaled finite-n kernel from the Pearcey limit, per n.

    Scalings: t = t_c + d^2 n^{-1/2} tau, angle = -pi - d n^{-3/4} (xi or eta);
    the kernel times |dy/d eta| = d n^{-3/4} is compared against
    K^P_{-tau_j, -tau_i}(eta, xi).
    """
    pd = phase_data(T)
    d = pearcey_d(pd)
    if target is None:
        target = pearcey_kernel(-tau_j, -tau_i, eta, xi).value
    errs = []
    for n in n_list:
        tt = tau if tau is not None else hsgn(n)
        t1 = pd.t_c + d * d * n ** (-0.5) * tau_i
        t2 = pd.t_c + d * d * n ** (-0.5) * tau_j
        x = -np.pi - d * n ** (-0.75) * xi
        y = -np.pi - d * n ** (-0.75) * eta
        kv = corr_kernel_hp(n, T, tt, t1, t2, x, y)
        scaled = kv.value * d * n ** (-0.75)
        errs.append(float(abs(scaled - target)))
    return errs


def tacnode_probe(n_list, sigma=0.0, tau_i=0.0, tau_j=0.0, xi=0.0, eta=0.0,
                  hm=None, target=None):
    """Distance of the rescaled finite-n kernel from the tacnode limit, per n.

    Temperature is tied to n through the critical window
    T = pi^2 (1 - 2^{-2/3} sigma n^{-2/3}); scalings use d = 2^{-5/3} pi.
    """
    d = CRITICAL_SCALING_D
    if target is None:
        target = tacnode_kernel(tau_i, tau_j, xi, eta, sigma, hm=hm).value
    errs = []
    for n in n_list:
        T = T_CRITICAL * (1.0 - 2.0 ** (-2.0 / 3.0) * sigma * n ** (-2.0 / 3.0))
        t1 = T / 2.0 + d * d * n ** (-1.0 / 3.0) * tau_i
        t2 = T / 2.0 + d * d * n ** (-1.0 / 3.0) * tau_j
        x = -np.pi - d * n ** (-2.0 / 3.0) * xi
        y = -np.pi - d * n ** (-2.0 / 3.0) * eta
        kv = corr_kernel_hp(n, T, hsgn(n), t1, t2, x, y)
        scaled = kv.value * d * n ** (-2.0 / 3.0)
        errs.append(float(abs(scaled - target)))
    return errs
