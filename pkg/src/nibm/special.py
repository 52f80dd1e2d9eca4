"""Scalar special functions: elliptic integrals, Jacobi theta/dn/Zeta, Heuman Lambda, Airy.

Complete integrals use the scipy AGM-quality routines; incomplete integrals of
complex argument are assembled from the Carlson symmetric forms, which give the
principal branch with cuts on (-inf,-1) and (1,inf) in the argument.  Values on
a cut must be requested with an explicit ``side`` flag (+1 from above, -1 from
below).
"""

from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .errors import CutAmbiguityError, DomainError

_CUT_EPS = 1e-13  # imaginary nudge used to pick a cut side


@dataclass(frozen=True)
class EllipticPair:
    """Complete elliptic integrals of both kinds at modulus k."""

    k: float
    K: float
    E: float


def complete_elliptic(k):
    """Complete elliptic integrals (K(k), E(k)) for modulus 0 <= k < 1."""
    k = float(k)
    if not 0.0 <= k < 1.0:
        raise DomainError(f"modulus k={k} outside [0, 1)")
    m = k * k
    return EllipticPair(k=k, K=float(_sp.ellipkm1(1.0 - m)), E=float(_sp.ellipe(m)))


def complete_elliptic_landen(k):
    """(K(kt), E(kt)) for the ascending-Landen modulus kt = 2 sqrt(k)/(1+k).

    Works arbitrarily close to k = 1, where kt itself rounds to 1 in floats,
    by forming the complementary parameter 1 - kt^2 = ((1-k)/(1+k))^2 exactly.
    """
    k = float(k)
    if not 0.0 <= k < 1.0:
        raise DomainError(f"modulus k={k} outside [0, 1)")
    m1 = ((1.0 - k) / (1.0 + k)) ** 2
    return float(_sp.ellipkm1(m1)), float(_sp.ellipe(1.0 - m1))


def _carlson_args(z, k):
    x = 1.0 - z * z
    y = 1.0 - (k * z) ** 2
    return x, y


def incomplete_elliptic(z, k, side=None):
    """Incomplete elliptic integrals (F(z;k), E(z;k)) of complex argument.

    The argument convention is the algebraic one: F(z;k) integrates
    1/sqrt((1-s^2)(1-k^2 s^2)) from 0 to z, so F(1;k) = K(k).  For real z with
    |z| > 1 the point lies on a branch cut and ``side`` must be +1 or -1.
    """
    if not 0.0 < k < 1.0:
        raise DomainError(f"modulus k={k} outside (0, 1)")
    z = complex(z)
    if z.imag == 0.0:
        x = z.real
        if x < 0.0:
            F, E = incomplete_elliptic(-x, k, side=None if side is None else -side)
            return -F, -E
        if x == 1.0:
            ce = complete_elliptic(k)
            return complex(ce.K), complex(ce.E)
        if x > 1.0:
            if side is None:
                raise CutAmbiguityError(
                    f"z={x} lies on a cut of F/E; pass side=+1 or side=-1"
                )
            if x == 1.0 / k:
                # Branch-point value; the Carlson forms lose accuracy here.
                ce = complete_elliptic(k)
                kp = np.sqrt(1.0 - k * k)
                cep = complete_elliptic(kp)
                F = ce.K + side * 1j * cep.K
                E = ce.E + side * 1j * (cep.K - cep.E)
                return F, E
            z = complex(x, side * _CUT_EPS)
    if z == 0:
        return 0.0 + 0.0j, 0.0 + 0.0j
    x, y = _carlson_args(z, k)
    rf = complex(_sp.elliprf(x, y, 1.0))
    rd = complex(_sp.elliprd(x, y, 1.0))
    F = z * rf
    E = z * rf - (k * k) * z**3 * rd / 3.0
    return F, E


def nome_from(k):
    """Elliptic nome q = exp(-pi K(k') / (2 K(k))).

    The complementary integral is taken straight from the parameter k^2 to
    avoid the 1 - k^2 rounding loss at small moduli.
    """
    if not 0.0 < k < 1.0:
        raise DomainError(f"modulus k={k} outside (0, 1)")
    K = complete_elliptic(k).K
    Kp = float(_sp.ellipkm1(k * k))
    return float(np.exp(-np.pi * Kp / (2.0 * K)))


def _theta_terms(q, im_max=0.0):
    """Indices j and coefficients q^(j^2) until terms drop below 1e-18.

    For complex phases the j-th term carries a factor up to exp(2*j*|Im z|),
    which the truncation accounts for via ``im_max``.
    """
    if not 0.0 <= q < 1.0:
        raise DomainError(f"nome q={q} outside [0, 1)")
    if q == 0.0:
        return np.array([], dtype=int), np.array([])
    js, coefs = [], []
    j = 1
    while True:
        c = q ** (j * j)
        if c * np.exp(2.0 * j * im_max) < 1e-18:
            break
        js.append(j)
        coefs.append(c)
        j += 1
        if j > 10000:  # q extremely close to 1; series contract is q <= 0.999
            break
    return np.array(js, dtype=int), np.array(coefs)


def _theta_prepare(z, q):
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z))
    if not np.iscomplexobj(zz):
        zz = zz.astype(float)
        im_max = 0.0
    else:
        im_max = float(np.max(np.abs(zz.imag)))
    js, coefs = _theta_terms(q, im_max)
    return scalar, zz, js, coefs


def theta(z, q):
    """Jacobi theta values (theta3(z;q), theta4(z;q)) by direct series."""
    scalar, zz, js, coefs = _theta_prepare(z, q)
    if js.size == 0:
        th3 = np.ones_like(zz)
        th4 = np.ones_like(zz)
    else:
        cos_terms = np.cos(2.0 * zz[:, None] * js[None, :])
        th3 = 1.0 + 2.0 * cos_terms @ coefs
        th4 = 1.0 + 2.0 * cos_terms @ (coefs * (-1.0) ** js)
    if scalar:
        return th3[0].item(), th4[0].item()
    return th3, th4


def theta_dz(z, q):
    """z-derivatives (theta3'(z;q), theta4'(z;q)) by term-wise differentiation."""
    scalar, zz, js, coefs = _theta_prepare(z, q)
    if js.size == 0:
        d3 = np.zeros_like(zz)
        d4 = np.zeros_like(zz)
    else:
        sin_terms = np.sin(2.0 * zz[:, None] * js[None, :])
        d3 = -4.0 * sin_terms @ (coefs * js)
        d4 = -4.0 * sin_terms @ (coefs * js * (-1.0) ** js)
    if scalar:
        return d3[0].item(), d4[0].item()
    return d3, d4


def jacobi_dn(u, k):
    """Jacobi elliptic dn(u, k) for real u, with period 2K(k)."""
    if not 0.0 <= k < 1.0:
        raise DomainError(f"modulus k={k} outside [0, 1)")
    return float(_sp.ellipj(u, k * k)[2])


def jacobi_zeta(u, k, side=None):
    """Jacobi Zeta Z(u;k) = E(u;k) - (E/K) F(u;k), u in the closed first quadrant.

    The argument plays the role of a sine (Z(1;k) = 0); for real u > 1 the
    value is a cut boundary value and requires ``side``.
    """
    u = complex(u)
    if u.real < -1e-15 or u.imag < -1e-15:
        raise DomainError(f"u={u} outside the closed first quadrant")
    ce = complete_elliptic(k)
    F, E = incomplete_elliptic(u, k, side=side)
    return E - (ce.E / ce.K) * F


def heuman_lambda(x, k):
    """Heuman's Lambda function Lambda0(x; k) with x = sin(amplitude) in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x={x} outside [0, 1]")
    if not 0.0 < k < 1.0:
        raise DomainError(f"modulus k={k} outside (0, 1)")
    ce = complete_elliptic(k)
    kp = np.sqrt(1.0 - k * k)
    F, E = incomplete_elliptic(x, kp)
    val = (2.0 / np.pi) * ((ce.E - ce.K) * F + ce.K * E)
    return float(val.real)


def airy(x):
    """Airy function values (Ai(x), Ai'(x))."""
    ai, aip, _, _ = _sp.airy(x)
    return ai, aip
