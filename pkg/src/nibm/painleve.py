"""Hastings-McLeod solution of Painleve II and the 2x2 Flaschka-Newell Lax system.

The Painleve transcendent is computed once as a global boundary-value problem
(shooting is exponentially unstable), then the Lax matrix is evaluated by
integrating the conjugated linear system Phi = Psi exp(i theta sigma3),
theta = 4 zeta^3/3 + s zeta, inward from a normalization ray.  Only the
column that is recessive along the integration path is ever integrated; the
other column follows from the zeta -> -zeta symmetry of the solution, which
keeps every integration numerically stable.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import sparse
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.sparse.linalg import splu

from .errors import DomainError, SolverError
from .special import airy


@dataclass(frozen=True)
class HMSolution:
    """Increasing-to-the-left Painleve II solution with q ~ Ai at +infinity."""

    s_grid: np.ndarray
    q: np.ndarray
    q_prime: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "_spline_q", CubicSpline(self.s_grid, self.q))
        object.__setattr__(self, "_spline_qp", CubicSpline(self.s_grid, self.q_prime))

    @property
    def half_width(self):
        return float(self.s_grid[-1])

    def q_at(self, s):
        self._check(s)
        return float(self._spline_q(s))

    def q_prime_at(self, s):
        self._check(s)
        return float(self._spline_qp(s))

    def hamiltonian(self, s):
        """First integral H = (q'^2 - s q^2 - q^4)/2, decaying at +infinity."""
        q = self.q_at(s)
        qp = self.q_prime_at(s)
        return 0.5 * (qp * qp - s * q * q - q**4)

    def _check(self, s):
        if not self.s_grid[0] <= s <= self.s_grid[-1]:
            raise DomainError(f"s={s} outside the solution grid")

    def pii_residual(self):
        """Max-norm residual of q'' = s q + 2 q^3 under the solver's stencil."""
        h = self.s_grid[1] - self.s_grid[0]
        d2 = _second_derivative_matrix(self.s_grid.size - 1, h) @ self.q
        rhs = self.s_grid * self.q + 2.0 * self.q**3
        return float(np.max(np.abs(d2[1:-1] - rhs[1:-1])))


def _second_derivative_matrix(N, h):
    """Fourth-order second-derivative matrix on N+1 uniform points (rows 1..N-1 used)."""
    rows, cols, vals = [], [], []

    def put(i, j, v):
        rows.append(i)
        cols.append(j)
        vals.append(v / (12.0 * h * h))

    put(1, 0, 11.0), put(1, 1, -20.0), put(1, 2, 6.0), put(1, 3, 4.0), put(1, 4, -1.0)
    for i in range(2, N - 1):
        put(i, i - 2, -1.0), put(i, i - 1, 16.0), put(i, i, -30.0)
        put(i, i + 1, 16.0), put(i, i + 2, -1.0)
    put(N - 1, N, 11.0), put(N - 1, N - 1, -20.0), put(N - 1, N - 2, 6.0)
    put(N - 1, N - 3, 4.0), put(N - 1, N - 4, -1.0)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(N + 1, N + 1))


def _first_derivative(y, h):
    """Fourth-order first derivative on a uniform grid."""
    d = np.empty_like(y)
    d[2:-2] = (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12 * h)
    for i in (0, 1):
        d[i] = (-25 * y[i] + 48 * y[i + 1] - 36 * y[i + 2] + 16 * y[i + 3] - 3 * y[i + 4]) / (12 * h)
    for i in (-1, -2):
        d[i] = (25 * y[i] - 48 * y[i - 1] + 36 * y[i - 2] - 16 * y[i - 3] + 3 * y[i - 4]) / (12 * h)
    return d


def hastings_mcleod(L=8.0, N=1600):
    """Solve the Painleve II boundary-value problem on [-L, L] by Newton iteration.

    Boundary values: q(L) = Ai(L) and the leading left asymptote sqrt(L/2).
    """
    if not 6.0 <= L <= 12.0:
        raise DomainError(f"half-width L={L} outside [6, 12]")
    if N < 400:
        raise DomainError(f"grid size N={N} too small (need >= 400)")
    s = np.linspace(-L, L, N + 1)
    h = s[1] - s[0]
    ai_L = airy(L)[0]

    blend = 1.0 / (1.0 + np.exp(s / 0.4))
    left = np.sqrt(np.maximum(-s, 0.0) / 2.0)
    right = airy(s)[0]
    q = blend * left + (1.0 - blend) * right
    q[0] = np.sqrt(L / 2.0)
    q[-1] = ai_L

    D2 = _second_derivative_matrix(N, h)

    for _ in range(60):
        F = D2 @ q - s * q - 2.0 * q**3
        F[0] = 0.0
        F[-1] = 0.0
        Jac = (D2 - sparse.diags(s + 6.0 * q**2)).tolil()
        Jac[0, :] = 0.0
        Jac[0, 0] = 1.0
        Jac[-1, :] = 0.0
        Jac[-1, -1] = 1.0
        delta = splu(Jac.tocsc()).solve(-F)
        step = 1.0
        if np.max(np.abs(delta)) > 1.0:
            step = 1.0 / np.max(np.abs(delta))
        q = q + step * delta
        if np.max(np.abs(delta)) < 1e-12:
            break
    else:
        raise SolverError("Newton iteration for the Painleve BVP did not converge")
    if np.any(q <= 0.0):
        raise SolverError("nonpositive values in the Painleve solution")
    return HMSolution(s_grid=s, q=q, q_prime=_first_derivative(q, h))


@lru_cache(maxsize=2)
def default_hastings_mcleod():
    return hastings_mcleod(8.0, 1600)


# ----------------------------------------------------------------------------
# Flaschka-Newell Lax system
# ----------------------------------------------------------------------------


def _asymptotic_m_coefficients(s, hm):
    """Coefficients m1, m2, m3 of Psi = (I + m1/z + m2/z^2 + m3/z^3 + ...) e^{-i theta sigma3}.

    Derived from the Lax pair; the nonlocal diagonal of m3 is a quadrature of
    the Painleve solution on its grid.
    """
    q = hm.q_at(s)
    qp = hm.q_prime_at(s)
    H = 0.5 * (qp * qp - s * q * q - q**4)
    m1 = np.array([[-1j * H, -1j * q / 2.0], [1j * q / 2.0, 1j * H]])
    diag2 = q * q / 8.0 - H * H / 2.0
    off2 = q * H / 2.0 + qp / 4.0
    m2 = np.array([[diag2, off2], [off2, diag2]])

    grid = hm.s_grid
    mask = grid >= s
    t = np.concatenate(([s], grid[mask]))
    qq = np.concatenate(([q], hm.q[mask]))
    qqp = np.concatenate(([qp], hm.q_prime[mask]))
    Ht = 0.5 * (qqp**2 - t * qq**2 - qq**4)
    m3_off_t = (t * qq + qq**3 / 2.0 + 2.0 * qq * Ht**2 + 2.0 * qqp * Ht) / 8.0
    m3_off = 1j * m3_off_t[0]
    m3_diag = 1j * np.trapezoid(qq * m3_off_t, t)
    m3 = np.array([[m3_diag, m3_off], [-m3_off, -m3_diag]])
    return m1, m2, m3


def _polyline(points):
    pts = [complex(p) for p in points]
    lengths = [abs(b - a) for a, b in zip(pts[:-1], pts[1:])]
    total = sum(lengths)
    return pts, lengths, total


def _recessive_column_on_path(path_points, targets, s, hm, R0=44.0, rtol=1e-10, atol=1e-12):
    """Integrate the (Phi12, Phi22) column system along the polyline ``path_points``.

    The path must start at the normalization point R0*exp(i pi/6) or
    R0*exp(5 i pi/6).  Returns Psi-column values (Psi12, Psi22) at the
    requested targets (which must lie on the path, in order).
    """
    q = hm.q_at(s)
    qp = hm.q_prime_at(s)
    pts, lengths, total = _polyline(path_points)

    # arclength parametrization of the polyline
    cum = np.concatenate(([0.0], np.cumsum(lengths)))

    def zeta_of(t):
        idx = np.searchsorted(cum, t, side="right") - 1
        idx = min(max(idx, 0), len(lengths) - 1)
        frac = (t - cum[idx]) / lengths[idx]
        z = pts[idx] + frac * (pts[idx + 1] - pts[idx])
        dz = (pts[idx + 1] - pts[idx]) / lengths[idx]
        return z, dz

    b11 = -2j * q * q
    b22 = 2j * q * q

    def _complex_matrix(t):
        z, dz = zeta_of(t)
        tp = 4.0 * z * z + s
        return np.array(
            [
                [dz * (b11 - 2j * tp), dz * (4.0 * z * q + 2j * qp)],
                [dz * (4.0 * z * q - 2j * qp), dz * b22],
            ]
        )

    # Implicit stepping needs a real system: y = (Re y1, Re y2, Im y1, Im y2).
    def _real_matrix(t):
        M = _complex_matrix(t)
        top = np.hstack([M.real, -M.imag])
        bot = np.hstack([M.imag, M.real])
        return np.vstack([top, bot])

    def rhs(t, y):
        return _real_matrix(t) @ y

    def jac(t, y):
        return _real_matrix(t)

    z0 = pts[0]
    m1, m2, m3 = _asymptotic_m_coefficients(s, hm)
    series = np.eye(2, dtype=complex) + m1 / z0 + m2 / z0**2 + m3 / z0**3
    y0c = np.array(series[:, 1], dtype=complex)
    y0 = np.concatenate([y0c.real, y0c.imag])

    t_eval = []
    ti = 0.0
    for tgt in targets:
        # locate target on the path (monotone progress)
        found = None
        for idx in range(len(lengths)):
            seg = pts[idx + 1] - pts[idx]
            r = (complex(tgt) - pts[idx]) / seg
            if abs(r.imag) < 1e-9 and -1e-9 <= r.real <= 1.0 + 1e-9:
                tt = cum[idx] + min(max(r.real, 0.0), 1.0) * lengths[idx]
                if tt >= ti - 1e-9:
                    found = tt
                    break
        if found is None:
            raise DomainError(f"target {tgt} not on the integration path")
        t_eval.append(found)
        ti = found

    sol = solve_ivp(
        rhs,
        (0.0, total),
        y0,
        method="Radau",
        jac=jac,
        t_eval=np.array(t_eval),
        rtol=rtol,
        atol=atol,
        dense_output=False,
    )
    if not sol.success:
        raise SolverError(f"Lax-system integration failed: {sol.message}")

    out = np.empty((len(targets), 2), dtype=complex)
    for i, (tt, tgt) in enumerate(zip(sol.t, targets)):
        z = complex(tgt)
        theta = 4.0 * z**3 / 3.0 + s * z
        col = sol.y[0:2, i] + 1j * sol.y[2:4, i]
        out[i] = col * np.exp(1j * theta)
    return out


def _upper_ray_start(w, R0):
    return R0 * np.exp(1j * np.pi / 6.0) if w.real >= 0.0 else R0 * np.exp(5j * np.pi / 6.0)


def psi_column2(zeta, s, hm, R0=44.0, rtol=1e-10):
    """(Psi12, Psi22) at a single point, normalized from the nearest upper ray."""
    w = complex(zeta)
    z0 = _upper_ray_start(w, R0)
    col = _recessive_column_on_path([z0, w], [w], s, hm, R0=R0, rtol=rtol)
    return col[0]


def psi_solve(zeta, s, hm, R0=44.0, rtol=1e-10):
    """Full 2x2 Flaschka-Newell matrix Psi(zeta; s).

    Column 2 is integrated directly; column 1 uses the reflection symmetry
    Psi11(z) = Psi22(-z), Psi21(z) = Psi12(-z).
    """
    w = complex(zeta)
    if abs(w) > 12.0:
        raise DomainError(f"|zeta|={abs(w):.2f} outside the evaluation disk (R=12)")
    c2 = psi_column2(w, s, hm, R0=R0, rtol=rtol)
    c2_neg = psi_column2(-w, s, hm, R0=R0, rtol=rtol)
    return np.array([[c2_neg[1], c2[0]], [c2_neg[0], c2[1]]])


@dataclass(frozen=True)
class PsiSolution:
    """Bound evaluator zeta -> Psi(zeta; s) at a fixed parameter s."""

    s: float
    hm: HMSolution
    R: float = 12.0
    R0: float = 44.0

    def __call__(self, zeta):
        if abs(complex(zeta)) > self.R:
            raise DomainError(f"|zeta| > normalization radius R={self.R}")
        return psi_solve(zeta, self.s, self.hm, R0=self.R0)

    def hastings_mcleod_values(self):
        """(q(s), q'(s)) underlying this solution."""
        return self.hm.q_at(self.s), self.hm.q_prime_at(self.s)


def f_g(u, s, hm, R0=44.0):
    """Kernel building blocks (f, g) from the recessive entries of Psi."""
    u = complex(u)
    if u.imag == 0.0:
        raise DomainError("f, g are defined off the real axis")
    if u.imag > 0.0:
        p12, p22 = psi_column2(u, s, hm, R0=R0)
        return -p12, -p22
    p12, p22 = psi_column2(-u, s, hm, R0=R0)
    # Psi11(u) = Psi22(-u), Psi21(u) = Psi12(-u)
    return p22, p12
