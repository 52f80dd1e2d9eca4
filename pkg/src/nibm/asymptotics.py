"""Closed-form large-n predictors for the lattice orthogonal polynomials.

The supercritical model solution is built from the ratio function gamma(z),
the abelian integral u(z), and theta ratios with the elliptic nome; its
entries predict polynomial/Cauchy-transform asymptotics and the recurrence
coefficient gamma_{n,n}^2 in all three temperature regimes.
"""

from dataclasses import dataclass

import numpy as np

from .errors import CutAmbiguityError, RegimeError
from .phase import PhaseData, T_CRITICAL, phase_data, sigma_from
from .special import jacobi_dn, theta


def hsgn(n):
    """Parity shift: 0 for odd n, 1/2 for even n."""
    return 0.0 if n % 2 else 0.5


@dataclass(frozen=True)
class ModelM:
    """Evaluator context for the 2x2 model-solution entries."""

    pd: PhaseData
    n_parity: float  # hsgn(n)
    tau: float

    def __post_init__(self):
        if self.pd.regime != "supercritical":
            raise RegimeError("model solution defined in the supercritical regime")


def gamma_ratio(z, pd):
    """Quartic-root ratio with cut [-beta,-alpha] u [alpha,beta], -> 1 at infinity."""
    z = complex(z)
    a, b = pd.alpha, pd.beta
    f1 = ((z + b) / (z + a)) ** 0.25
    f2 = ((z - a) / (z - b)) ** 0.25
    return f1 * f2


def u_integral(z, pd, n_nodes=240, via=None):
    """Abelian integral from beta to z, normalized by pi (alpha+beta) / (4 Ktilde).

    The substitution s = beta + t^2 removes the endpoint singularity.  Points
    close to the real axis inside the support are reached through a lifted
    waypoint on their own side, keeping the path clear of the branch points
    at +/- alpha, beta.  An explicit ``via`` (in the s-plane) overrides the
    waypoint for path-independence tests.
    """
    z = complex(z)
    a, b = pd.alpha, pd.beta
    pref = np.pi * (a + b) / (4.0 * pd.K_tilde)
    gl_x, gl_w = np.polynomial.legendre.leggauss(n_nodes)

    def t_leg(t0, t1):
        t = 0.5 * (t1 - t0) * (gl_x + 1.0) + t0
        w = 0.5 * (t1 - t0) * gl_w
        s = b + t * t
        den = np.sqrt(s - a) * np.sqrt(s + a) * np.sqrt(s + b)
        return np.sum(w * 2.0 / den)

    def s_leg(s0, s1):
        s = 0.5 * (s1 - s0) * (gl_x + 1.0) + s0
        w = 0.5 * (s1 - s0) * gl_w
        den = np.sqrt(s - b) * np.sqrt(s + b) * np.sqrt(s - a) * np.sqrt(s + a)
        return np.sum(w / den)

    if via is None:
        near_axis = abs(z.imag) < 0.25 * b and z.real < b - 1e-12
        if not near_axis:
            return pref * t_leg(0.0, np.sqrt(z - b))
        side = 1.0 if z.imag >= 0.0 else -1.0
        via = b + 0.5j * b * side
    return pref * (t_leg(0.0, np.sqrt(via - b)) + s_leg(via, z))


def model_entries(z, mm):
    """Model-solution entries (M11, M12, M21, M22) at z off the support cuts."""
    z = complex(z)
    pd = mm.pd
    if z.imag == 0.0 and pd.alpha <= abs(z.real) <= pd.beta:
        raise CutAmbiguityError(f"z={z.real} on the support cut")
    q = pd.q
    dlt = np.pi * (mm.tau - mm.n_parity)
    g = gamma_ratio(z, pd)
    u = u_integral(z, pd)
    th3_0, _ = theta(0.0, q)
    th3_d, _ = theta(dlt, q)
    pref = th3_0 / th3_d

    def th3(v):
        return theta(v, q)[0]

    um = u - np.pi / 4.0
    up = u + np.pi / 4.0
    m11 = 0.5 * (g + 1.0 / g) * pref * th3(um - dlt) / th3(um)
    m12 = np.pi * (g - 1.0 / g) * pref * th3(up + dlt) / th3(up)
    m21 = (g - 1.0 / g) / (4.0 * np.pi) * pref * th3(up - dlt) / th3(up)
    m22 = 0.5 * (g + 1.0 / g) * pref * th3(um + dlt) / th3(um)
    return m11, m12, m21, m22


def gamma_sq_asymptotic(n, T, tau, sigma=None, hm=None):
    """Large-n prediction of the recurrence coefficient gamma_{n,n}^2.

    The critical-window formula is used when the caller passes ``sigma`` (or
    at T exactly critical, where sigma follows from n); otherwise the strict
    sub/supercritical formulas apply.  Window classification is the caller's
    job because the window itself is n-dependent.  Critical predictions need
    the Painleve II value q(sigma); pass ``hm`` to reuse a solution.
    """
    eps = hsgn(n)
    critical = sigma is not None or T == T_CRITICAL
    if critical:
        if sigma is None:
            sigma = sigma_from(T, n)
        if hm is None:
            from .painleve import default_hastings_mcleod

            hm = default_hastings_mcleod()
        qs = hm.q_at(sigma)
        return (1.0 / T) * (
            1.0
            - 2.0 ** (5.0 / 3.0) * n ** (-1.0 / 3.0) * qs * np.cos(2.0 * np.pi * (tau + eps))
            + 2.0 ** (4.0 / 3.0) * n ** (-2.0 / 3.0) * qs**2 * np.cos(4.0 * np.pi * tau)
        )
    if T < T_CRITICAL:
        return 1.0 / T
    pd = phase_data(T)
    dn = jacobi_dn(2.0 * pd.K_tilde * (tau + 0.5 + eps), pd.k_tilde)
    return dn**2 / (4.0 * pd.E_tilde**2)
