"""Exact nonintersecting walkers on the cylinder lattice Z_M x Z.

Path tuples are counted by integer-exact dynamic programming over sorted
occupation tuples, with the total offset tracked through the winding of the
displacement sum.  Phase weights are kept symbolic (Laurent polynomials in
eps = exp(2 pi i tau)) so the cyclic determinant identity can be verified as
an exact integer identity.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .errors import DomainError, StateSpaceError


@dataclass(frozen=True)
class CylinderEnsemble:
    """n vicious walkers on Z_M for N steps between fixed even sites."""

    M: int
    N: int
    n: int
    starts: tuple
    ends: tuple
    tau: float = 0.0

    def __post_init__(self):
        if self.M % 2 or self.N % 2:
            raise DomainError("M and N must be even")
        if self.n > 3 or self.M > 16 or self.N > 48:
            raise StateSpaceError(f"(n={self.n}, M={self.M}, N={self.N}) beyond oracle scale")
        for sites in (self.starts, self.ends):
            if len(sites) != self.n or any(s % 2 for s in sites):
                raise DomainError("need n even sites")
            if list(sites) != sorted(sites):
                raise DomainError("sites must be sorted")
            if not all(-self.M // 2 <= s < self.M // 2 for s in sites):
                raise DomainError("sites outside the canonical window")


def _canon(p, M):
    return (p + M // 2) % M - M // 2


def dp_offset_counts(ce):
    """Exact counts of nonintersecting path tuples per total offset."""
    M, N, n = ce.M, ce.N, ce.n
    state = {(tuple(ce.starts), 0): 1}
    moves = [
        [1 if (mask >> i) & 1 else -1 for i in range(n)] for mask in range(2**n)
    ]
    for _ in range(N):
        nxt = {}
        for (pos, disp), cnt in state.items():
            for mv in moves:
                newpos = tuple(_canon(p + d, M) for p, d in zip(pos, mv))
                if len(set(newpos)) < n:
                    continue
                key = (tuple(sorted(newpos)), disp + sum(mv))
                nxt[key] = nxt.get(key, 0) + cnt
        state = nxt
    target = tuple(sorted(ce.ends))
    dsum = sum(ce.ends) - sum(ce.starts)
    out = {}
    for (pos, disp), cnt in state.items():
        if pos != target:
            continue
        if (disp - dsum) % M:
            raise DomainError("displacement incompatible with the endpoint set")
        o = (disp - dsum) // M
        out[o] = out.get(o, 0) + cnt
    return out


def dp_generating_function(ce, per_offset=True):
    """Phase-weighted generating function of the nonintersecting ensemble.

    With x = e^{-2 pi i tau/M}/2 and y = e^{2 pi i tau/M}/2 the weight of a
    tuple with total offset o is 2^{-nN} e^{2 pi i tau (sum(ends-starts) + oM)/M}.
    """
    counts = dp_offset_counts(ce)
    omax = max(abs(o) for o in counts) if counts else 0
    if omax > 3:
        raise StateSpaceError(f"offset window exceeded: |o| up to {omax}")
    base = Fraction(1, 2 ** (ce.n * ce.N))
    pref = np.exp(2j * np.pi * ce.tau * (sum(ce.ends) - sum(ce.starts)) / ce.M)
    gf = {
        o: complex(pref * np.exp(2j * np.pi * ce.tau * o) * float(base * c))
        for o, c in counts.items()
    }
    if per_offset:
        return gf
    return sum(gf.values())


def single_walker_counts(M, N, a, b, offset_window=4):
    """Laurent coefficients {o: #paths} of one walker from a to b + oM on Z."""
    out = {}
    for o in range(-offset_window, offset_window + 1):
        d = b + o * M - a
        if (N + d) % 2 or abs(d) > N:
            continue
        c = comb(N, (N + d) // 2)
        if c:
            out[o] = c
    return out


# -- Laurent polynomials over the integers, variable eps = exp(2 pi i tau) --

def _poly_mul(p, q):
    out = {}
    for a, ca in p.items():
        for b, cb in q.items():
            out[a + b] = out.get(a + b, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def _poly_add(p, q, sign=1):
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + sign * v
    return {k: v for k, v in out.items() if v}


def _poly_det(mat):
    n = len(mat)
    if n == 1:
        return mat[0][0]
    out = {}
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = _poly_mul(mat[0][j], _poly_det(minor))
        out = _poly_add(out, term, sign=(-1) ** j)
    return out


@dataclass(frozen=True)
class KMCheckReport:
    """Outcome of the exact cyclic determinant identity check."""

    exact_equal: bool
    lhs: dict
    rhs: dict
    counts: dict


def km_discrete_check(ce):
    """Exact identity: signed offset sum of ensemble counts = determinant.

    Both sides are integer Laurent polynomials in eps = e^{2 pi i tau} after
    the row/column phases e^{(b_j - a_i) 2 pi i tau / M} are factored out; the
    check is coefficient-by-coefficient integer equality.
    """
    counts = dp_offset_counts(ce)
    sgn = 1 if ce.n % 2 else -1  # sign of a unit offset shift
    lhs = {o: (sgn ** (o % 2) if o % 2 else 1) * c for o, c in counts.items()}
    lhs = {o: c for o, c in lhs.items() if c}

    mat = [
        [single_walker_counts(ce.M, ce.N, a, b) for b in ce.ends]
        for a in ce.starts
    ]
    rhs = _poly_det(mat)
    return KMCheckReport(exact_equal=lhs == rhs, lhs=lhs, rhs=rhs, counts=counts)


def dp_winding_histogram(ce, omega_max=3):
    """Normalized offset distribution of the ensemble (plain 1/2-1/2 weights)."""
    counts = dp_offset_counts(ce)
    total = sum(counts.values())
    return {
        o: Fraction(counts.get(o, 0), total) for o in range(-omega_max, omega_max + 1)
    }


def continuum_winding_histogram(n, A, B, t, omega_max=3, quad_points=64):
    """Offset distribution of the continuum ensemble with spread endpoints.

    Fourier inversion in the lattice shift of the return determinant; the
    parity sign accounts for even-n cyclic pairings.
    """
    from .finite import km_determinant

    taus = np.arange(quad_points) / quad_points
    vals = np.array([km_determinant(n, A, B, t, tau) for tau in taus])
    out = {}
    for o in range(-omega_max, omega_max + 1):
        coeff = np.mean(vals * np.exp(-2j * np.pi * o * taus))
        sign = (-1) ** o if n % 2 == 0 else 1
        out[o] = sign * coeff.real
    total = sum(out.values())
    return {o: v / total for o, v in out.items()}
