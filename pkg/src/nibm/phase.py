"""Phase diagram of the circular ensemble: elliptic data, equilibrium measure, g-function.

The total time T drives everything.  Below T_CRITICAL = pi^2 the equilibrium
density is the Wigner semicircle; above it the density saturates at 1 on
[-alpha, alpha] and the endpoints are parametrized by an elliptic modulus
k = alpha/beta.
"""

from dataclasses import dataclass

import numpy as np

from .errors import CutAmbiguityError, DomainError, RegimeError
from .special import (
    complete_elliptic,
    complete_elliptic_landen,
    heuman_lambda,
    incomplete_elliptic,
    nome_from,
)

T_CRITICAL = np.pi**2

# Scaling constant of the critical (tangential-merging) regime.
CRITICAL_SCALING_D = 2.0 ** (-5.0 / 3.0) * np.pi

_CUT_EPS = 1e-13


@dataclass(frozen=True)
class PhaseData:
    """Elliptic parametrization of one temperature T."""

    T: float
    regime: str  # 'subcritical' | 'critical-window' | 'supercritical'
    beta: float
    lagrange_l: float
    k: float | None = None
    k_tilde: float | None = None
    alpha: float | None = None
    K: float | None = None
    E: float | None = None
    K_tilde: float | None = None
    E_tilde: float | None = None
    q: float | None = None
    t_c: float | None = None


def t_of_k(k):
    """Total time T = 4 K(kt) E(kt) with kt = 2 sqrt(k)/(1+k)."""
    Kt, Et = complete_elliptic_landen(k)
    return 4.0 * Kt * Et


def solve_k_from_T(T):
    """Invert T = 4 K~ E~ for the modulus k, valid for T > pi^2."""
    if not T > T_CRITICAL:
        raise RegimeError(f"T={T} is not supercritical (needs T > pi^2)")
    lo, hi = 1e-12, 1.0 - 1e-12
    if t_of_k(hi) < T:
        raise DomainError(f"T={T} beyond invertible range")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if t_of_k(mid) < T:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16 * max(1.0, lo):
            break
    k = 0.5 * (lo + hi)
    return k


def sigma_from(T, n):
    """Critical-window coordinate sigma with T = pi^2 (1 - 2^(-2/3) sigma n^(-2/3))."""
    return (1.0 - T / T_CRITICAL) * 2.0 ** (2.0 / 3.0) * n ** (2.0 / 3.0)


def is_critical_window(T, n):
    """Whether T lies in the n-dependent window around pi^2."""
    return abs(T - T_CRITICAL) <= 10.0 * T_CRITICAL * 2.0 ** (-2.0 / 3.0) * n ** (-2.0 / 3.0)


def phase_data(T):
    """Full elliptic record for total time T > 0."""
    T = float(T)
    if not T > 0:
        raise DomainError(f"T={T} must be positive")
    if T < T_CRITICAL:
        return PhaseData(
            T=T,
            regime="subcritical",
            beta=2.0 / np.sqrt(T),
            lagrange_l=-1.0 - np.log(T),
        )
    if T == T_CRITICAL:
        return PhaseData(
            T=T,
            regime="critical-window",
            beta=2.0 / np.sqrt(T),
            lagrange_l=-1.0 - np.log(T),
        )
    k = solve_k_from_T(T)
    ce = complete_elliptic(k)
    kt = 2.0 * np.sqrt(k) / (1.0 + k)
    Kt, Et = complete_elliptic_landen(k)
    beta = 1.0 / (2.0 * ce.E - (1.0 - k * k) * ce.K)
    alpha = k * beta
    t_c = T / 2.0 - (2.0 / alpha) * (ce.K - ce.E)
    lagrange_l = np.log(beta**2 - alpha**2) + ce.K * beta * (1.0 + k * k) - 2.0 * (1.0 + np.log(2.0))
    return PhaseData(
        T=T,
        regime="supercritical",
        beta=beta,
        lagrange_l=lagrange_l,
        k=k,
        k_tilde=kt,
        alpha=alpha,
        K=ce.K,
        E=ce.E,
        K_tilde=Kt,
        E_tilde=Et,
        q=nome_from(k),
        t_c=t_c,
    )


def rho_T(x, pd):
    """Equilibrium density at x (vectorized); 0 outside the support."""
    x = np.abs(np.asarray(x, dtype=float))
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.zeros_like(x)
    if pd.regime != "supercritical":
        T = pd.T
        inside = x < pd.beta
        out[inside] = (T / (2.0 * np.pi)) * np.sqrt(4.0 / T - x[inside] ** 2)
    else:
        a, b, k = pd.alpha, pd.beta, pd.k
        out[x <= a] = 1.0
        band = (x > a) & (x < b)
        if np.any(band):
            xi = np.sqrt((1.0 - (x[band] / b) ** 2) / (1.0 - k * k))
            out[band] = [heuman_lambda(min(v, 1.0), k) for v in xi]
    return float(out[0]) if scalar else out


def rho_T_quadrature(x, pd, n_nodes=400):
    """Supercritical band density by direct quadrature of its defining integrals.

    Serves as an independent check of the Heuman-Lambda evaluation; the
    endpoint square-root singularity is removed by the substitution
    s = beta - u^2.
    """
    if pd.regime != "supercritical":
        raise RegimeError("quadrature form defined for the supercritical band only")
    a, b = pd.alpha, pd.beta
    if not a < x < b:
        raise DomainError(f"x={x} outside the band ({a}, {b})")
    ce = complete_elliptic(pd.k)
    t_nodes, t_w = np.polynomial.legendre.leggauss(n_nodes)
    tmax = np.sqrt(b - x)
    t = 0.5 * tmax * (t_nodes + 1.0)
    w = 0.5 * tmax * t_w
    s = b - t * t
    # ds = -2t dt; sqrt(1 - s^2/b^2) = sqrt((b-s)(b+s))/b = t sqrt(b+s)/b
    root_a = np.sqrt(s * s / (a * a) - 1.0)
    j1 = np.sum(w * 2.0 * b / (np.sqrt(b + s) * root_a))  # ds/sqrt((s^2/a^2-1)(1-s^2/b^2))
    j2 = np.sum(w * 2.0 * t * t * np.sqrt(b + s) / (b * root_a))
    return (2.0 / (np.pi * a)) * (ce.E * j1 - ce.K * j2)


def _sqrt_two_cut(z, c, side=None):
    """sqrt(z^2 - c^2) with cut [-c, c], positive for real z > c, ~ z at infinity."""
    if np.ndim(z) == 0 and np.iscomplex(z) is not None:
        z = complex(z)
        if z.imag == 0.0:
            x = z.real
            if abs(x) >= c:
                return complex(np.sign(x) * np.sqrt(x * x - c * c))
            if side is None:
                raise CutAmbiguityError(f"z={x} on the cut [-{c}, {c}]; pass side")
            return side * 1j * np.sqrt(c * c - x * x)
        return np.sqrt(z - c) * np.sqrt(z + c)
    raise TypeError("scalar expected")


def g_prime(z, pd, side=None):
    """Derivative of the log transform of the equilibrium measure.

    On the real cuts the lateral limit is chosen by ``side`` (+1 above, -1
    below); off the real axis ``side`` is ignored.
    """
    z = complex(z)
    T = pd.T
    if pd.regime != "supercritical":
        if z.imag == 0.0 and abs(z.real) < pd.beta and side is not None:
            r = _sqrt_two_cut(z, pd.beta, side=side)
        else:
            r = _sqrt_two_cut(z, pd.beta, side=side)
        return (T / 2.0) * (z - r)
    a = pd.alpha
    ce_K, ce_E, k = pd.K, pd.E, pd.k
    if z.imag > 0.0:
        sgn = +1
    elif z.imag < 0.0:
        sgn = -1
    else:
        x = z.real
        if abs(x) > pd.beta:
            sgn = +1  # both limits agree off the support
            side = +1
        elif side is None:
            raise CutAmbiguityError(f"z={x} on the support; pass side")
        else:
            sgn = side
    F, E = incomplete_elliptic(z / a, k, side=side if z.imag == 0.0 else None)
    return T * z / 2.0 + 2.0 * ce_E * F - 2.0 * ce_K * E - sgn * 1j * np.pi


def g_prime_alt(z, pd, n_nodes=240):
    """Supercritical g' in its single-valued outer form (independent route).

    Integrates from beta along a straight path after the substitution
    s = beta + t^2 which removes the endpoint singularity.
    """
    if pd.regime != "supercritical":
        raise RegimeError("alternative form defined in the supercritical regime")
    z = complex(z)
    a, b, K, E = pd.alpha, pd.beta, pd.K, pd.E
    tmax = np.sqrt(z - b)
    t_nodes, t_w = np.polynomial.legendre.leggauss(n_nodes)
    t = 0.5 * tmax * (t_nodes + 1.0)
    w = 0.5 * tmax * t_w
    s = b + t * t
    root_a = np.sqrt(s - a) * np.sqrt(s + a)
    root_bp = np.sqrt(s + b)
    i1 = np.sum(w * 2.0 / (root_a * root_bp))          # ds / sqrt((s^2-a^2)(s^2-b^2))
    i2 = np.sum(w * 2.0 * t * t * root_bp / root_a)    # sqrt(s^2-b^2)/sqrt(s^2-a^2) ds
    return 2.0 * K * z / b - 2.0 * E * b * i1 - (2.0 * K / b) * i2


def g_value(z, pd):
    """g(z) with normalization g(z) - log z -> 0 at infinity; z off (-inf, beta]."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= pd.beta:
        raise CutAmbiguityError(f"z={z.real} on the branch cut (-inf, beta]")
    T = pd.T
    if pd.regime != "supercritical":
        r = _sqrt_two_cut(z, pd.beta)
        w = z - r
        return (T / 4.0) * z * w - np.log(w) - 0.5 + np.log(2.0) - np.log(T)
    a, b, k, K = pd.alpha, pd.beta, pd.k, pd.K
    rb = _sqrt_two_cut(z, b)
    ra = _sqrt_two_cut(z, a)
    gp = g_prime(z, pd, side=+1 if z.imag == 0.0 else None)
    return (
        z * gp
        - K * z * z / b
        + (K / b) * rb * ra
        + np.log(rb + ra)
        + K * b * (1.0 + k * k) / 2.0
        - 1.0
        - np.log(2.0)
    )


def g_tilde(z, pd):
    """Analytic continuation of g through the saturated region (-alpha, alpha)."""
    z = complex(z)
    if z.imag > 0.0:
        return g_value(z, pd)
    if z.imag < 0.0:
        return g_value(z, pd) + 1j * np.pi - 2j * np.pi * z
    # real axis: the continuation equals the limit from above
    return g_value(z + 1j * _CUT_EPS, pd)


def g_tilde_fourth_deriv(pd):
    """Closed form of the fourth derivative of the continued g at 0 (supercritical).

    Obtained by expanding g' near 0: the incomplete integrals contribute
    z/a + (1 +/- k^2) z^3 / (6 a^3), so the cubic coefficient of g' is
    2[(1+k^2)E - (1-k^2)K] / (6 a^3); a finite-difference oracle pins the
    overall constant.
    """
    if pd.regime != "supercritical":
        raise RegimeError("defined in the supercritical regime")
    k, K, E, a = pd.k, pd.K, pd.E, pd.alpha
    return 2.0 * ((1.0 + k * k) * E - (1.0 - k * k) * K) / a**3


def pearcey_d(pd):
    """Cusp scaling constant d = (g~''''(0)/6)^(1/4) > 0."""
    val = g_tilde_fourth_deriv(pd)
    if not val > 0:
        raise RegimeError("fourth derivative not positive; outside supercritical regime")
    return (val / 6.0) ** 0.25
