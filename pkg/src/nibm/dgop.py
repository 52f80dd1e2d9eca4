"""Discrete Gaussian orthogonal polynomials on the shifted lattice {(j+tau)/n}.

The weight e^(-T n x^2/2) spans hundreds of orders of magnitude, so all
polynomial data is carried as weighted vectors p_j(x) sqrt(w(x)) e^(-L_j)
with an explicit running log-scale L_j, and normalizing constants are stored
as logarithms.  Recurrence coefficients come from the discrete Stieltjes
procedure (lattice inner products + three-term recurrence), which is stable
where moment-based constructions are hopeless.
"""

from dataclasses import dataclass

import numpy as np

from .errors import PoleProximityError, RankError
from .phase import T_CRITICAL, phase_data


@dataclass(frozen=True)
class LatticeMeasure:
    """Truncated lattice {(j+tau)/n} with log weights and a certified tail bound."""

    n: int
    tau: float
    T: float
    nodes: np.ndarray
    log_weights: np.ndarray
    tail_bound: float
    x_max: float


@dataclass(frozen=True)
class RecurrenceTable:
    """Monic three-term recurrence data: x p_j = p_{j+1} + beta_j p_j + gamma_j^2 p_{j-1}."""

    degree_max: int
    log_h: np.ndarray
    beta: np.ndarray
    gamma_sq: np.ndarray  # gamma_sq[0] is 0 by convention


def support_radius(T):
    """Endpoint beta of the equilibrium support at temperature T."""
    if T <= T_CRITICAL:
        return 2.0 / np.sqrt(T)
    return phase_data(T).beta


def build_lattice(n, tau, T):
    """Lattice nodes with |x| <= X_max, where the weight has decayed below 1e-32."""
    if n < 1:
        raise RankError(f"n={n} must be >= 1")
    if not T > 0:
        raise RankError(f"T={T} must be positive")
    x_cut = np.sqrt(2.0 * 32.0 * np.log(10.0) / (T * n))
    x_max = max(x_cut, 3.0 * support_radius(T))
    k_lo = int(np.ceil(-x_max * n - tau))
    k_hi = int(np.floor(x_max * n - tau))
    ks = np.arange(k_lo, k_hi + 1)
    nodes = (ks + tau) / n
    log_w = -T * n * nodes**2 / 2.0
    # Geometric bound on the weight mass dropped beyond the last node each side.
    tails = 0.0
    for edge in (nodes[0] - 1.0 / n, nodes[-1] + 1.0 / n):
        x0 = abs(edge)
        tails += np.exp(-T * n * x0**2 / 2.0) / (1.0 - np.exp(-T * x0))
    return LatticeMeasure(
        n=n, tau=float(tau), T=float(T), nodes=nodes, log_weights=log_w,
        tail_bound=float(tails), x_max=float(x_max),
    )


def weighted_poly_matrix(lm, m):
    """Stieltjes recurrence data plus the scaled weighted-polynomial vectors.

    Returns (RecurrenceTable, phi, L) where phi[j] = p_j(nodes) sqrt(w) e^(-L[j]).
    """
    nodes = lm.nodes
    count = nodes.size
    if m > count / 2:
        raise RankError(f"degree {m} too large for {count} lattice nodes")
    x = nodes
    sqw = np.exp(lm.log_weights / 2.0)

    phi = np.zeros((m + 1, count))
    L = np.zeros(m + 1)
    log_h = np.zeros(m + 1)
    beta = np.zeros(m + 1)
    gamma_sq = np.zeros(m + 1)

    cur = sqw.copy()
    scale = np.max(np.abs(cur))
    cur /= scale
    L[0] = np.log(scale)
    phi[0] = cur

    prev = np.zeros(count)
    for j in range(m + 1):
        ss = np.dot(phi[j], phi[j])
        if not ss > 0:
            raise RankError(f"degenerate norm at degree {j}")
        log_h[j] = np.log(ss / lm.n) + 2.0 * L[j]
        beta[j] = np.dot(x * phi[j], phi[j]) / ss
        if j > 0:
            gamma_sq[j] = np.exp(log_h[j] - log_h[j - 1])
        if j == m:
            break
        nxt = (x - beta[j]) * phi[j]
        if j > 0:
            nxt -= gamma_sq[j] * np.exp(L[j - 1] - L[j]) * phi[j - 1]
        scale = np.max(np.abs(nxt))
        if not scale > 0:
            raise RankError(f"vanishing polynomial at degree {j + 1}")
        phi[j + 1] = nxt / scale
        L[j + 1] = L[j] + np.log(scale)

    rt = RecurrenceTable(degree_max=m, log_h=log_h, beta=beta, gamma_sq=gamma_sq)
    return rt, phi, L


def stieltjes(lm, m):
    """Recurrence table of the first m+1 orthogonal polynomials on the lattice."""
    rt, _, _ = weighted_poly_matrix(lm, m)
    return rt


def hankel_log(n, T, tau):
    """log of the n-th Hankel determinant: sum of log h_j over j < n."""
    lm = build_lattice(n, tau, T)
    rt = stieltjes(lm, n - 1)
    return float(np.sum(rt.log_h[:n]))


def eval_poly(rt, k, z):
    """Monic p_k at complex z as (mantissa, log_scale) with per-step rescaling."""
    if k > rt.degree_max:
        raise RankError(f"degree {k} exceeds table ({rt.degree_max})")
    z = complex(z)
    if k == 0:
        return 1.0 + 0.0j, 0.0
    prev = 1.0 + 0.0j      # p_0 scaled
    lprev = 0.0
    cur = z - rt.beta[0]   # p_1
    lcur = 0.0
    for j in range(1, k):
        nxt = (z - rt.beta[j]) * cur - rt.gamma_sq[j] * np.exp(lprev - lcur) * prev
        prev, lprev = cur, lcur
        cur = nxt
        a = abs(cur)
        if a > 0 and (a > 1e2 or a < 1e-2):
            cur /= a
            lcur += np.log(a)
    return cur, lcur


def eval_poly_with_derivative(rt, k, z):
    """(p_k, p_k') at z as ((mant, log_scale), (mant, log_scale)) sharing the scale."""
    z = complex(z)
    if k == 0:
        return (1.0 + 0.0j, 0.0), (0.0 + 0.0j, 0.0)
    prev, dprev = 1.0 + 0.0j, 0.0 + 0.0j
    lprev = 0.0
    cur, dcur = z - rt.beta[0], 1.0 + 0.0j
    lcur = 0.0
    for j in range(1, k):
        fac = rt.gamma_sq[j] * np.exp(lprev - lcur)
        nxt = (z - rt.beta[j]) * cur - fac * prev
        dnxt = cur + (z - rt.beta[j]) * dcur - fac * dprev
        prev, dprev, lprev = cur, dcur, lcur
        cur, dcur = nxt, dnxt
        a = max(abs(cur), abs(dcur))
        if a > 0 and (a > 1e2 or a < 1e-2):
            cur /= a
            dcur /= a
            lcur += np.log(a)
    return (cur, lcur), (dcur, lcur)


def cauchy_transform(lm, rt, k, z, phi=None, L=None, pole_eps=1e-3):
    """Discrete Cauchy transform (1/n) sum p_k(x) w(x) / (z - x), exponent tracked.

    Returns (mantissa, log_scale).  Pass the (phi, L) pair from
    weighted_poly_matrix to avoid recomputing the recurrence vectors.
    """
    z = complex(z)
    if np.min(np.abs(z - lm.nodes)) < pole_eps / lm.n:
        raise PoleProximityError(f"z={z} within {pole_eps}/n of a lattice node")
    if phi is None or L is None:
        _, phi, L = weighted_poly_matrix(lm, k)
    # p_k(x) w(x) = phi[k] * sqrt(w) * e^{L[k]}
    log_mag = lm.log_weights / 2.0
    shift = np.max(log_mag)
    vals = phi[k] * np.exp(log_mag - shift)
    s = np.sum(vals / (z - lm.nodes)) / lm.n
    return s, L[k] + shift


def cd_kernel(lm, rt, n, z, w, phi=None, L=None, confluent_eps=1e-8):
    """Christoffel-Darboux sum_{k<n} p_k(z) p_k(w) / h_k via the closed form.

    Returns (mantissa, log_scale).
    """
    z, w = complex(z), complex(w)
    if n > rt.degree_max:
        raise RankError(f"need degrees up to {n}, table has {rt.degree_max}")
    lh = rt.log_h[n - 1]
    if abs(z - w) < confluent_eps:
        (pn, lpn), (dpn, _) = eval_poly_with_derivative(rt, n, z)
        (pm, lpm), (dpm, _) = eval_poly_with_derivative(rt, n - 1, z)
        val = dpn * pm - dpm * pn
        return val, lpn + lpm - lh
    pn, lpn = eval_poly(rt, n, z)
    pm, lpm = eval_poly(rt, n - 1, z)
    qn, lqn = eval_poly(rt, n, w)
    qm, lqm = eval_poly(rt, n - 1, w)
    a = lpn + lqm
    b = lpm + lqn
    shift = max(a, b)
    val = (pn * qm * np.exp(a - shift) - pm * qn * np.exp(b - shift)) / (z - w)
    return val, shift - lh
