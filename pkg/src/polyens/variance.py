"""Variances of linear statistics: exact path formulas, bounds, limits.

Var[sum_i x_i^l] for a polynomial ensemble equals the total weight of
lattice paths (0,k) -> (2l,k), k < N, whose midpoint ordinate escapes to
N or above. We sum the escape block of the l-th Hessenberg section power
directly: entries (k, m) with k < N <= m, times the return entries. Every
such loop stays at ordinates in [N-l, N+l-1], so the result depends only
on that coefficient window; the escaping-path reading is what the tests
enumerate literally.

The pair-correlation remainder measure

    Q_N(dx,dy) = (1/2) (P_N(x) P_{N-1}(y) - P_{N-1}(x) P_N(y))^2 mu(dx) mu(dy)

is a probability measure whose moments converge, for tables with limiting
coefficients a and b, to those of

    Q(dx,dy) = (4a^2 - (x-b)(y-b)) dx dy
               / (4 pi^2 a^2 sqrt(4a^2-(x-b)^2) sqrt(4a^2-(y-b)^2))

on [b-2a, b+2a]^2, and Var[sum f(x_i)] -> a^2 integral of the squared
divided difference of f against Q.
"""

from dataclasses import dataclass

import numpy as np

from .errors import CoefficientRangeError
from .recurrence import eval_polynomials, hessenberg_matrix


def _padded_power(table, ell, extra):
    size = table.N + extra
    if size - 1 > table.top:
        raise CoefficientRangeError(
            f"variance of power {ell} needs coefficients through index "
            f"{size - 1}; table stores {table.top} (pad >= {extra} required)"
        )
    H = hessenberg_matrix(table, size)
    return np.linalg.matrix_power(H, ell)


def variance_power(table, ell):
    """Var[sum_i x_i^l], exactly, from the table.

    Equals the total weight of length-2l loop paths below N that touch
    ordinate >= N at half time. Needs pad >= l."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    N = table.N
    q = table.q
    A = _padded_power(table, ell, (q * 2 * ell) // (q + 1))
    out = np.sum(A[:N, N:] * A[N:, :N].T)
    return float(np.real(out))


def covariance_power(table, ell, m):
    """Cov[sum_i x_i^l, sum_i x_i^m]: loop paths of length l+m whose
    ordinate at the split time l is >= N. Symmetric in (l, m).
    Needs pad >= max(l, m)."""
    if ell < 1 or m < 1:
        raise ValueError("powers must be >= 1")
    N = table.N
    q = table.q
    extra = (q * (ell + m)) // (q + 1)  # max climb of a length l+m loop
    A = _padded_power(table, ell, extra)
    C = A if m == ell else _padded_power(table, m, extra)
    out = np.sum(A[:N, N:] * C[N:, :N].T)
    return float(np.real(out))


def variance_upper_bound(table, ell):
    """(2l)^{2l} max^{2l}: combinatorial bound on Var[sum x_i^l], the max
    over coefficients |<x P_k, Q_m>| with k, m within l of N."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    wmax = table.window_max(table.N - ell, table.N + ell)
    return float((2.0 * ell) ** (2 * ell) * wmax ** (2 * ell))


def lipschitz_variance_bound(a_top, lip):
    """(a_{N-1} * lip)^2: bound on Var[sum f(x_i)] for lip-Lipschitz f.
    a_top may be a table (its a_{N-1} is used) or the number itself."""
    a = a_top if np.isscalar(a_top) else float(a_top.a[a_top.N - 1])
    return float((a * lip) ** 2)


def empirical_Q_moment(ensemble, m, n):
    """Moment integral x^m y^n dQ_N of the pair-correlation remainder
    measure, computed from P_{N-1} and P_N on the atoms. (0,0) gives 1."""
    N = ensemble.N
    if N + 1 > len(ensemble.basis):
        raise CoefficientRangeError("needs the basis padded through P_N")
    mu = ensemble.measure
    x, w = mu.points, mu.weights
    if mu.is_complex:
        raise ValueError("Q_N moments are defined for real-supported measures")
    pN = ensemble.basis[N]
    pM = ensemble.basis[N - 1]
    powers = np.power.outer(x, np.arange(max(m, n) + 1)).T

    def trio(p):
        xm = powers[p]
        return (
            float(np.sum(w * xm * pN * pN)),
            float(np.sum(w * xm * pM * pM)),
            float(np.sum(w * xm * pN * pM)),
        )

    Am, Bm, Cm = trio(m)
    An, Bn, Cn = trio(n)
    return 0.5 * (Am * Bn + Bm * An - 2.0 * Cm * Cn)


def limiting_Q_moment(m, n, a=1.0, b=0.0, nodes=None):
    """Moment integral x^m y^n dQ of the limiting pair measure on
    [b-2a, b+2a]^2. Chebyshev-Gauss quadrature, exact for the polynomial
    integrand once nodes > (max(m,n)+1)/2 + 1; (0,0) gives 1."""
    if m < 0 or n < 0:
        raise ValueError("moment orders must be >= 0")
    if a <= 0:
        raise ValueError("a must be positive")
    nodes = nodes or max(64, 2 * (m + n) + 8)
    u = np.cos((2 * np.arange(1, nodes + 1) - 1) * np.pi / (2 * nodes))
    x = b + 2.0 * a * u
    xm, xn = x**m, x**n
    # (1 - u v) factorizes, so the double integral splits
    S_m, T_m = xm.mean(), (xm * u).mean()
    S_n, T_n = xn.mean(), (xn * u).mean()
    return float(S_m * S_n - T_m * T_n)


def limiting_variance(f, a=1.0, b=0.0, nodes=512, fprime=None):
    """Limiting Var[sum f(x_i)] = a^2 integral of ((f(x)-f(y))/(x-y))^2 dQ.

    Tensor Chebyshev-Gauss quadrature on the support square; the divided
    difference falls back to f' (given, or a centered difference) within
    1e-8 of the diagonal."""
    if a <= 0:
        raise ValueError("a must be positive")
    u = np.cos((2 * np.arange(1, nodes + 1) - 1) * np.pi / (2 * nodes))
    x = b + 2.0 * a * u
    F = np.asarray(f(x), dtype=float)
    dx = x[:, None] - x[None, :]
    close = np.abs(dx) <= 1e-8 * max(1.0, float(np.max(np.abs(x))))
    num = F[:, None] - F[None, :]
    D = np.empty_like(dx)
    np.divide(num, dx, out=D, where=~close)
    if fprime is not None:
        dvals = np.asarray(fprime(x), dtype=float)
    else:
        h = 1e-5 * np.maximum(1.0, np.abs(x))
        dvals = (np.asarray(f(x + h), dtype=float) - np.asarray(f(x - h), dtype=float)) / (2 * h)
    D[close] = np.broadcast_to(dvals[:, None], D.shape)[close]
    Qw = 1.0 - u[:, None] * u[None, :]
    return float(a**2 * np.mean(D * D * Qw))


@dataclass
class CumulantReport:
    """First four cumulants of a replica sample, as unbiased k-statistics,
    with jackknife standard errors."""

    k: np.ndarray  # k[0] unused; k[1..4] are the cumulant estimates
    se: np.ndarray

    @property
    def mean(self):
        return self.k[1]

    @property
    def variance(self):
        return self.k[2]

    @property
    def skewness(self):
        return self.k[3] / self.k[2] ** 1.5

    @property
    def excess_kurtosis(self):
        return self.k[4] / self.k[2] ** 2


def _kstats_from_power_sums(S1, S2, S3, S4, n):
    k1 = S1 / n
    k2 = (n * S2 - S1**2) / (n * (n - 1))
    k3 = (n**2 * S3 - 3 * n * S2 * S1 + 2 * S1**3) / (n * (n - 1) * (n - 2))
    k4 = (
        n**2 * (n + 1) * S4
        - 4 * n * (n + 1) * S3 * S1
        - 3 * n * (n - 1) * S2**2
        + 12 * n * S2 * S1**2
        - 6 * S1**4
    ) / (n * (n - 1) * (n - 2) * (n - 3))
    return k1, k2, k3, k4


def cumulants(samples):
    """k-statistics k_1..k_4 (unbiased cumulant estimators) of a 1-d sample,
    with leave-one-out jackknife standard errors."""
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1 or len(x) < 5:
        raise ValueError("need a 1-d sample of size >= 5")
    n = len(x)
    # center for conditioning; cumulants above k1 are shift-invariant
    shift = x.mean()
    y = x - shift
    pows = [np.sum(y**r) for r in range(1, 5)]
    k1, k2, k3, k4 = _kstats_from_power_sums(*pows, n)
    k = np.array([np.nan, k1 + shift, k2, k3, k4])

    # jackknife: power sums with sample i removed, vectorized over i
    S = [pows[r - 1] - y**r for r in range(1, 5)]
    j1, j2, j3, j4 = _kstats_from_power_sums(S[0], S[1], S[2], S[3], n - 1)
    se = np.empty(5)
    se[0] = np.nan
    for slot, jk in zip((1, 2, 3, 4), (j1, j2, j3, j4)):
        se[slot] = np.sqrt((n - 1) / n * np.sum((jk - jk.mean()) ** 2))
    return CumulantReport(k, se)
