"""Extended-precision lattice engine for the saturated regime.

Above the critical temperature the weighted polynomials on the saturated
nodes emerge from near-total cancellation in the three-term recurrence
(about 0.21 n digits), and the kernel's oscillatory sums near the far point
x = -pi cancel at the same rate.  Double precision therefore degrades from
n of order 70; this module reruns the identical lattice algorithms in gmpy2
arithmetic at a precision chosen from that measured rate.

Only plain mpfr/mpc scalar loops are used; the Stieltjes sweep and each
kernel evaluation are O(n * nodes) so even n = 400 stays in seconds.
"""

import numpy as np

from .dgop import build_lattice
from .errors import QuadratureError


def default_prec_bits(n):
    """Working precision covering the ~0.7 n bit cancellation with margin."""
    return 128 + int(np.ceil(0.9 * n))


class HPLattice:
    """One (n, T, tau) lattice with recurrence data held in gmpy2 numbers."""

    def __init__(self, n, T, tau, prec_bits=None, store_phi=False):
        import gmpy2

        self._gmpy2 = gmpy2
        self.n = n
        self.T = float(T)
        self.tau = float(tau)
        self.prec_bits = prec_bits or default_prec_bits(n)
        self._store_phi = store_phi
        self.phi_float = [] if store_phi else None
        lm = build_lattice(n, tau, T)
        self._js = np.round(lm.nodes * n - tau).astype(int)

        self._ctx = gmpy2.context(precision=self.prec_bits)
        with self._ctx:
            nn = gmpy2.mpfr(n)
            tg = gmpy2.mpfr(self.T)
            taug = gmpy2.mpfr(self.tau)
            self.s = [(gmpy2.mpfr(int(j)) + taug) / nn for j in self._js]
            self.sqw = [gmpy2.exp(-tg * nn * s * s / 4) for s in self.s]
            self._stieltjes()
        if store_phi:
            self.phi_float = np.array(self.phi_float)

    def _stieltjes(self):
        gmpy2 = self._gmpy2
        n, m = self.n, len(self.s)
        s, sqw = self.s, self.sqw
        zero = gmpy2.mpfr(0)
        phi_prev = [zero] * m
        phi = list(sqw)
        beta, gamma_sq, log_h = [], [], []
        h_prev = None
        for k in range(n + 1):
            ss = zero
            sx = zero
            for j in range(m):
                p2 = phi[j] * phi[j]
                ss += p2
                sx += s[j] * p2
            hk = ss / n
            log_h.append(gmpy2.log(hk))
            beta.append(sx / ss)
            gamma_sq.append(hk / h_prev if h_prev is not None else zero)
            h_prev = hk
            if self._store_phi:
                scale = max(abs(v) for v in phi)
                self.phi_float.append([float(v / scale) for v in phi])
            if k == n:
                break
            bk, gk = beta[k], gamma_sq[k]
            if k == 0:
                nxt = [(s[j] - bk) * phi[j] for j in range(m)]
            else:
                nxt = [(s[j] - bk) * phi[j] - gk * phi_prev[j] for j in range(m)]
            phi_prev, phi = phi, nxt
        self.beta = beta
        self.gamma_sq = gamma_sq
        self.log_h = log_h

    # -- exported double-precision views ------------------------------------
    def nodes_float(self):
        return (self._js + self.tau) / self.n

    def gamma_sq_top(self):
        """Recurrence coefficient gamma_{n,n}^2 as a float."""
        return float(self.gamma_sq[self.n])

    def beta_float(self):
        return np.array([float(b) for b in self.beta])

    def recurrence_table(self):
        """Double-precision RecurrenceTable with extended-precision entries."""
        from .dgop import RecurrenceTable

        return RecurrenceTable(
            degree_max=self.n,
            log_h=self.log_h_float(),
            beta=self.beta_float(),
            gamma_sq=self.gamma_sq_float(),
        )

    def poly_top(self, k, z):
        """p_k(z) at a complex point, evaluated in extended precision."""
        gmpy2 = self._gmpy2
        with self._ctx:
            zg = gmpy2.mpc(z)
            prev = gmpy2.mpc(0)
            cur = gmpy2.mpc(1)
            for j in range(k):
                nxt = (zg - self.beta[j]) * cur - self.gamma_sq[j] * prev
                prev, cur = cur, nxt
            return complex(cur)

    def cauchy_top(self, k, z):
        """Discrete Cauchy transform (1/n) sum p_k(x) w(x)/(z-x) in extended precision."""
        gmpy2 = self._gmpy2
        with self._ctx:
            zg = gmpy2.mpc(z)
            m = len(self.s)
            prev = [gmpy2.mpfr(0)] * m
            cur = [gmpy2.mpfr(1)] * m
            for j in range(k):
                bk, gk = self.beta[j], self.gamma_sq[j]
                nxt = [(self.s[i] - bk) * cur[i] - gk * prev[i] for i in range(m)]
                prev, cur = cur, nxt
            tot = gmpy2.mpc(0)
            for i in range(m):
                w = self.sqw[i] * self.sqw[i]
                tot += cur[i] * w / (zg - self.s[i])
            return complex(tot / self.n)

    def gamma_sq_float(self):
        return np.array([float(g) for g in self.gamma_sq])

    def log_h_float(self):
        return np.array([float(v) for v in self.log_h])

    def hankel_log(self):
        gmpy2 = self._gmpy2
        with self._ctx:
            tot = gmpy2.mpfr(0)
            for v in self.log_h[: self.n]:
                tot += v
            return float(tot)

    # -- kernel evaluation ----------------------------------------------------
    def ktilde(self, t_i, t_j, x, y):
        """Lattice double sum K~_{t_i,t_j}(x,y), with a rounding-floor estimate."""
        gmpy2 = self._gmpy2
        with self._ctx:
            n, m = self.n, len(self.s)
            s = self.s
            nn = gmpy2.mpfr(n)
            a1 = gmpy2.mpfr(self.T - t_i)
            a2 = gmpy2.mpfr(t_j)
            xg = gmpy2.mpfr(x)
            yg = gmpy2.mpfr(y)
            w1, w2, env1, env2 = [], [], [], []
            for j in range(m):
                sj = s[j]
                e1 = gmpy2.exp(-a1 * nn * sj * sj / 2)
                e2 = gmpy2.exp(-a2 * nn * sj * sj / 2)
                ph1 = xg * nn * sj
                ph2 = -yg * nn * sj
                w1.append(gmpy2.mpc(e1 * gmpy2.cos(ph1), e1 * gmpy2.sin(ph1)))
                w2.append(gmpy2.mpc(e2 * gmpy2.cos(ph2), e2 * gmpy2.sin(ph2)))
                env1.append(e1)
                env2.append(e2)
            zero = gmpy2.mpfr(0)
            p_prev = [zero] * m
            p_cur = [gmpy2.mpfr(1)] * m
            total = gmpy2.mpc(0)
            gross = gmpy2.mpfr(0)
            for k in range(n):
                d1 = gmpy2.mpc(0)
                d2 = gmpy2.mpc(0)
                g1 = gmpy2.mpfr(0)
                g2 = gmpy2.mpfr(0)
                for j in range(m):
                    p = p_cur[j]
                    d1 += p * w1[j]
                    d2 += p * w2[j]
                    ap = abs(p)
                    g1 += ap * env1[j]
                    g2 += ap * env2[j]
                hk_inv = gmpy2.exp(-self.log_h[k])
                total += d1 * d2 * hk_inv
                # rounding floor tracks the uncancelled node sums, which is
                # where the exponential cancellation actually happens
                gross += (g1 * abs(d2) + g2 * abs(d1) + abs(d1) * abs(d2)) * hk_inv
                bk, gk = self.beta[k], self.gamma_sq[k]
                if k == 0:
                    nxt = [(s[j] - bk) * p_cur[j] for j in range(m)]
                else:
                    nxt = [(s[j] - bk) * p_cur[j] - gk * p_prev[j] for j in range(m)]
                p_prev, p_cur = p_cur, nxt
            two_pi = 2 * gmpy2.const_pi()
            scale = 1 / (two_pi * nn)  # n/(2 pi) times the two 1/n of the S sums
            val = complex(total * scale)
            floor = float(gross * scale) * 2.0 ** (-self.prec_bits)
        if abs(val) < 1e8 * floor and abs(val) > 0:
            raise QuadratureError(
                f"kernel value {abs(val):.2e} within 1e8 of rounding floor {floor:.2e};"
                f" raise prec_bits above {self.prec_bits}"
            )
        return val, floor


_HP_CACHE = {}


def hp_lattice(n, T, tau, prec_bits=None):
    """Memoized HPLattice constructor."""
    key = (n, float(T), float(tau), prec_bits)
    if key not in _HP_CACHE:
        if len(_HP_CACHE) > 8:
            _HP_CACHE.pop(next(iter(_HP_CACHE)))
        _HP_CACHE[key] = HPLattice(n, T, tau, prec_bits)
    return _HP_CACHE[key]
