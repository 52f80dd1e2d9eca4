"""Tacnode kernel through the Airy integral operator: an independent oracle.

Everything here is built from Airy-function quadrature and resolvent solves
of (1 - A_s) on [0, X]; no Painleve machinery enters, so agreement with the
Lax-based kernel is a genuine two-route check.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RegimeError, SolverError
from .kernels import gaussian_phi
from .special import airy


@dataclass(frozen=True)
class AiryOperator:
    """Discretized kernel B_s(x,y) = Ai(x+y+s) and its square on [0, X]."""

    s: float
    grid: np.ndarray
    weights: np.ndarray
    B: np.ndarray
    A: np.ndarray  # B^2 as an operator: acts via A * weights

    @property
    def action_matrix(self):
        """Matrix representing the operator A on grid values."""
        return self.A * self.weights[None, :]

    def spectral_radius(self):
        sqw = np.sqrt(self.weights)
        sym = sqw[:, None] * self.A * sqw[None, :]
        return float(np.max(np.linalg.eigvalsh(sym)))


def build_airy_operator(s, X=14.0, m=120):
    """Gauss-Legendre discretization of B_s and A_s = B_s^2 on [0, X]."""
    if X < 10.0:
        raise DomainError(f"cutoff X={X} too small (need >= 10)")
    if m < 80:
        raise DomainError(f"node count m={m} too small (need >= 80)")
    gl_x, gl_w = np.polynomial.legendre.leggauss(m)
    x = 0.5 * X * (gl_x + 1.0)
    w = 0.5 * X * gl_w
    B = airy(x[:, None] + x[None, :] + s)[0]
    A = (B * w[None, :]) @ B
    op = AiryOperator(s=float(s), grid=x, weights=w, B=B, A=A)
    if s >= -1.0 and op.spectral_radius() >= 1.0:
        raise RegimeError(f"Airy operator not contracting at s={s}")
    return op


def qr_functions(op):
    """Resolvent functions Q_s = (1-A)^{-1} B delta0 and R_s = (1-A)^{-1} A delta0."""
    x, w = op.grid, op.weights
    lhs = np.eye(x.size) - op.action_matrix
    b_delta = airy(x + op.s)[0]                # (B delta0)(x) = Ai(x+s)
    a_delta = op.B @ (w * b_delta)             # (A delta0)(x) = int Ai(x+y+s)Ai(y+s) dy
    try:
        Q = np.linalg.solve(lhs, b_delta)
        R = np.linalg.solve(lhs, a_delta)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"resolvent solve failed: {exc}") from None
    return Q, R


def b_function(tau, z, sigma, x):
    """Shifted-Airy family b_{tau,z,sigma}(x)."""
    pref = np.exp(
        -(2.0 / 3.0) * tau**3 - tau * z - 2.0 ** (1.0 / 3.0) * tau * x
        - 2.0 ** (-2.0 / 3.0) * tau * sigma
    )
    return pref * airy(2.0 ** (1.0 / 3.0) * x + z + 2.0 ** (-2.0 / 3.0) * sigma + tau**2)[0]


def _p1_hat(z, s, tau, op, Q, R):
    """p1(z; s, tau) = <b_{tau,-z,s}, R_s + delta0> - <b_{tau,z,s}, Q_s>."""
    x, w = op.grid, op.weights
    b_minus = b_function(tau, -z, s, x)
    b_plus = b_function(tau, z, s, x)
    term1 = np.sum(w * b_minus * R) + b_function(tau, -z, s, 0.0)
    term2 = np.sum(w * b_plus * Q)
    return term1 - term2


def l_tac(u, v, sigma, tau1, tau2, S=12.0, panels_per_unit=1, gl_order=8, X=14.0, m=120):
    """Symmetric tacnode kernel via the Airy-operator route.

    Integrates the p1-product density over s in [sigma, sigma + S]; the
    integrand decays like squared Airy functions, so S=12 puts the tail
    below 1e-10.
    """
    if sigma < -1.0:
        raise DomainError(f"sigma={sigma} below the contraction range")
    gl_x, gl_w = np.polynomial.legendre.leggauss(gl_order)
    total = 0.0
    n_panels = int(np.ceil(S * panels_per_unit))
    for p in range(n_panels):
        lo = sigma + p * S / n_panels
        hi = sigma + (p + 1) * S / n_panels
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        for xx, ww in zip(gl_x, gl_w):
            s = mid + half * xx
            op = build_airy_operator(s, X=X, m=m)
            Q, R = qr_functions(op)
            val = _p1_hat(u, s, tau1, op, Q, R) * _p1_hat(v, s, -tau2, op, Q, R)
            val += _p1_hat(-u, s, tau1, op, Q, R) * _p1_hat(-v, s, -tau2, op, Q, R)
            total += half * ww * val
    return 2.0 ** (-2.0 / 3.0) * total - gaussian_phi(2.0 * tau1, 2.0 * tau2, u, v)


def tacnode_via_airy(tau_i, tau_j, xi, eta, sigma, **kwargs):
    """K^tac through the operator route, in the Lax-kernel's argument scaling."""
    c = 2.0 ** (-2.0 / 3.0)
    return c * l_tac(c * xi, c * eta, sigma, 2.0 ** (-7.0 / 3.0) * tau_i,
                     2.0 ** (-7.0 / 3.0) * tau_j, **kwargs)
