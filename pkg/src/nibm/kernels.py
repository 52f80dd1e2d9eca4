"""Universal limit kernels: extended Pearcey and tacnode, by contour quadrature.

Both kernels are double contour integrals with quartic/cubic exponential decay
along their rays, truncated where the integrand is below 1e-20 and discretized
with composite Gauss-Legendre panels.  The two integration variables use
staggered node counts so the 1/(u-v) factor never sees coincident nodes.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .painleve import default_hastings_mcleod


@dataclass(frozen=True)
class KernelValue:
    """Kernel evaluation with its Gaussian counterterm and a quadrature estimate."""

    value: complex
    counterterm: float
    quad_estimate: float


def gaussian_phi(s, t, xi, eta):
    """Heat counterterm: 0 for s >= t, Gaussian of variance t - s otherwise."""
    if s >= t:
        return 0.0
    dt = t - s
    return float(np.exp(-((xi - eta) ** 2) / (2.0 * dt)) / np.sqrt(2.0 * np.pi * dt))


def _gl_polyline(vertices, panel_len, order):
    """Gauss-Legendre nodes/weights along a polyline, weights carrying dz."""
    gl_x, gl_w = np.polynomial.legendre.leggauss(order)
    nodes, weights = [], []
    for a, b in zip(vertices[:-1], vertices[1:]):
        a, b = complex(a), complex(b)
        seg = b - a
        n_panels = max(1, int(np.ceil(abs(seg) / panel_len)))
        for p in range(n_panels):
            lo = a + seg * p / n_panels
            hi = a + seg * (p + 1) / n_panels
            mid = 0.5 * (lo + hi)
            half = 0.5 * (hi - lo)
            nodes.append(mid + half * gl_x)
            weights.append(half * gl_w)
    return np.concatenate(nodes), np.concatenate(weights)


def _pearcey_sigma_vertices(trunc):
    c = trunc / np.sqrt(2.0)
    upper = [complex(c, c), 2 + 2j, -2 + 2j, complex(-c, c)]
    lower = [complex(-c, -c), -2 - 2j, 2 - 2j, complex(c, -c)]
    return upper, lower


def _pearcey_quadrature(s, t, xi, eta, trunc, panel_len, order):
    up, lo = _pearcey_sigma_vertices(trunc)
    z1, w1 = _gl_polyline(up, panel_len, order)
    z2, w2 = _gl_polyline(lo, panel_len, order)
    z = np.concatenate([z1, z2])
    wz = np.concatenate([w1, w2])
    gw, gww = _gl_polyline([complex(trunc, 1.0), complex(-trunc, 1.0)], panel_len, order)

    fz = np.exp(z**4 / 4.0 + s * z**2 / 2.0 + 1j * xi * z) * wz
    fw = np.exp(-(gw**4 / 4.0 + t * gw**2 / 2.0 + 1j * eta * gw)) * gww
    denom = z[:, None] - gw[None, :]
    total = fz @ (1.0 / denom) @ fw
    return (1j / (4.0 * np.pi**2)) * total


def pearcey_kernel(s, t, xi, eta, trunc=8.0, panel_len=0.4, order=12):
    """Extended Pearcey kernel K^P_{s,t}(xi, eta) with its counterterm removed."""
    base = _pearcey_quadrature(s, t, xi, eta, trunc, panel_len, order)
    coarse = _pearcey_quadrature(s, t, xi, eta, trunc, panel_len, max(6, order - 4))
    phi = gaussian_phi(s, t, xi, eta)
    return KernelValue(
        value=base - phi,
        counterterm=phi,
        quad_estimate=float(abs(base - coarse) + 1e-14 * (1.0 + abs(base))),
    )


# ----------------------------------------------------------------------------
# Tacnode kernel
# ----------------------------------------------------------------------------

_SIXTH = np.exp(1j * np.pi / 6.0)


def _tacnode_upper_vertices(trunc):
    return [trunc * _SIXTH, 2.0 * _SIXTH, -np.conj(2.0 * _SIXTH), -np.conj(trunc * _SIXTH)]


def _tacnode_nodes(trunc, panel_len, order):
    """Upper-contour nodes/weights; the lower contour is their negation."""
    up_nodes, up_w = _gl_polyline(_tacnode_upper_vertices(trunc), panel_len, order)
    nodes = np.concatenate([up_nodes, -up_nodes])
    weights = np.concatenate([up_w, -up_w])
    return nodes, weights, up_nodes.size


def _psi_cache_path(upper_nodes, sigma, R0, rtol):
    import hashlib
    import os

    cache_dir = os.environ.get("NIBM_CACHE_DIR")
    if not cache_dir:
        return None
    key = hashlib.sha256(
        upper_nodes.tobytes() + np.array([sigma, R0, rtol]).tobytes()
    ).hexdigest()[:24]
    return os.path.join(cache_dir, f"psi_{key}.npy")


def _psi_values_on_upper(upper_nodes, sigma, hm, R0, rtol):
    """(Psi12, Psi22) at the given upper-contour points via two ray sweeps.

    Tables are cached on disk when NIBM_CACHE_DIR is set.
    """
    import os

    cache = _psi_cache_path(upper_nodes, sigma, R0, rtol)
    if cache and os.path.exists(cache):
        return np.load(cache)
    vals = np.empty((upper_nodes.size, 2), dtype=complex)
    ray_r = np.abs(upper_nodes.real - np.sqrt(3.0) * upper_nodes.imag) < 1e-9
    ray_l = np.abs(upper_nodes.real + np.sqrt(3.0) * upper_nodes.imag) < 1e-9
    seg = np.abs(upper_nodes.imag - 1.0) < 1e-9
    if not np.all(ray_r | ray_l | seg):
        raise DomainError("contour node off the expected ray/segment pieces")

    # right sweep: ray arg pi/6 (decreasing radius), then segment x: sqrt(3) -> 0
    idx_ray_r = np.where(ray_r & ~seg)[0]
    idx_seg_r = np.where(seg & (upper_nodes.real >= 0))[0]
    order_r = np.concatenate(
        [idx_ray_r[np.argsort(-np.abs(upper_nodes[idx_ray_r]))],
         idx_seg_r[np.argsort(-upper_nodes[idx_seg_r].real)]]
    ).astype(int)
    # left sweep, mirrored
    idx_ray_l = np.where(ray_l & ~seg)[0]
    idx_seg_l = np.where(seg & (upper_nodes.real < 0))[0]
    order_l = np.concatenate(
        [idx_ray_l[np.argsort(-np.abs(upper_nodes[idx_ray_l]))],
         idx_seg_l[np.argsort(upper_nodes[idx_seg_l].real)]]
    ).astype(int)
    assert order_r.size + order_l.size == upper_nodes.size

    from .painleve import _recessive_column_on_path

    for idx, ray_angle, seg_end in (
        (order_r, np.pi / 6.0, 0.0 + 1j),
        (order_l, 5.0 * np.pi / 6.0, 0.0 + 1j),
    ):
        if idx.size == 0:
            continue
        targets = upper_nodes[idx]
        corner = 2.0 * np.exp(1j * ray_angle)
        path = [R0 * np.exp(1j * ray_angle), corner, seg_end]
        cols = _recessive_column_on_path(path, targets, sigma, hm, R0=R0, rtol=rtol)
        vals[idx] = cols
    if cache:
        os.makedirs(os.path.dirname(cache) or ".", exist_ok=True)
        np.save(cache, vals)
    return vals


def tacnode_kernel(
    tau_i, tau_j, xi, eta, sigma,
    hm=None, trunc=6.0, panel_len=0.35, order_u=12, order_v=14,
    R0=44.0, rtol=1e-10,
):
    """Tacnode kernel K^tac_{tau_i, tau_j}(xi, eta; sigma) from the Lax solution."""
    if hm is None:
        hm = default_hastings_mcleod()
    if not -hm.half_width <= sigma <= hm.half_width:
        raise DomainError(f"sigma={sigma} outside the Painleve grid")

    q_s = hm.q_at(sigma)
    qp_s = hm.q_prime_at(sigma)

    fu_tabs = {}
    for order in {order_u, order_v}:
        nodes, weights, n_up = _tacnode_nodes(trunc, panel_len, order)
        up = nodes[:n_up]
        psi_up = _psi_values_on_upper(up, sigma, hm, R0, rtol)
        # column derivative from the linear system itself
        a11 = -4j * up**2 - 1j * (sigma + 2.0 * q_s**2)
        a12 = 4.0 * up * q_s + 2j * qp_s
        a21 = 4.0 * up * q_s - 2j * qp_s
        d12 = a11 * psi_up[:, 0] + a12 * psi_up[:, 1]
        d22 = a21 * psi_up[:, 0] - a11 * psi_up[:, 1]
        f = np.empty(nodes.size, dtype=complex)
        g = np.empty(nodes.size, dtype=complex)
        fp = np.empty(nodes.size, dtype=complex)
        gp = np.empty(nodes.size, dtype=complex)
        f[:n_up] = -psi_up[:, 0]          # -Psi12 on the upper contour
        g[:n_up] = -psi_up[:, 1]          # -Psi22
        fp[:n_up] = -d12
        gp[:n_up] = -d22
        f[n_up:] = psi_up[:, 1]           # Psi11(-u) = Psi22(u)
        g[n_up:] = psi_up[:, 0]           # Psi21(-u) = Psi12(u)
        fp[n_up:] = -d22
        gp[n_up:] = -d12
        fu_tabs[order] = (nodes, weights, f, g, fp, gp)

    def assemble(u_tab, v_tab):
        un, uw, uf, ug, ufp, ugp = u_tab
        vn, vw, vf, vg, vfp, vgp = v_tab
        du = un[:, None] - vn[None, :]
        close = np.abs(du) < 1e-6
        num = uf[:, None] * vg[None, :] - ug[:, None] * vf[None, :]
        ratio = np.divide(num, du, out=np.zeros_like(num), where=~close)
        if np.any(close):
            # first-order confluent limit: numerator vanishes on the diagonal
            wron = ug * ufp - uf * ugp
            wron_v = vg * vfp - vf * vgp
            iu, iv = np.where(close)
            ratio[iu, iv] = 0.5 * (wron[iu] + wron_v[iv])
        env_u = np.exp(tau_i * un**2 / 2.0 - 1j * un * xi) * uw
        env_v = np.exp(-tau_j * vn**2 / 2.0 + 1j * vn * eta) * vw
        total = env_u @ ratio @ env_v
        return total / (2.0 * np.pi) / (2j * np.pi)

    k1 = assemble(fu_tabs[order_u], fu_tabs[order_v])
    k2 = assemble(fu_tabs[order_v], fu_tabs[order_u])
    value = 0.5 * (k1 + k2)
    phi = gaussian_phi(tau_i, tau_j, xi, eta)
    return KernelValue(
        value=value - phi,
        counterterm=phi,
        quad_estimate=float(0.5 * abs(k1 - k2) + 1e-12 * (1.0 + abs(value))),
    )
