"""Recurrence tables and lattice-path moment formulas.

A table stores the multiplication coefficients <x P_k, Q_m> of a biorthogonal
family. Two storage forms:

  * 'op'     -- orthonormal polynomials: a_k = <x P_k, P_{k+1}> > 0 and
                b_k = <x P_k, P_k>, so x P_k = a_k P_{k+1} + b_k P_k
                + a_{k-1} P_{k-1} with a_{-1} = 0.
  * 'banded' -- lower bandwidth q: c[k][j] = <x P_k, Q_{k-j}> for
                -1 <= j <= q, everything below the band zero.

Powers <x^l P_k, Q_m> are sums over oriented lattice paths (0,k) -> (l,m)
whose steps rise by at most one and fall by at most q, each path weighted by
the product of its edge coefficients. We never enumerate paths: l banded
matrix-vector applications on a window of ordinates compute the same sum.
Indices run over 0..N+pad; access past the pad raises instead of
extrapolating.
"""

import numpy as np

from .errors import (
    CoefficientRangeError,
    NumericalBreakdownError,
    OrthogonalityError,
    RankError,
)

DEFAULT_PAD = 8

# full-reorthogonalization drift allowance for discretized Stieltjes
ORTHONORMALITY_TOL = 1e-9


class RecurrenceTable:
    """Banded family of coefficients <x P_k, Q_m>, indices 0..N+pad."""

    def __init__(self, N, form, a=None, b=None, c=None, q=None):
        if N < 1:
            raise ValueError("N must be >= 1")
        self.N = int(N)
        self.form = form
        if form == "op":
            a = np.asarray(a, dtype=float)
            b = np.asarray(b, dtype=float)
            if a.shape != b.shape or a.ndim != 1:
                raise ValueError("a and b must be 1-d arrays of equal length")
            if len(a) < N:
                raise ValueError("table must store at least N coefficients")
            if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
                raise ValueError("coefficients must be finite")
            if np.any(a <= 0):
                raise ValueError("op form requires a_k > 0")
            self.a = a
            self.b = b
            self.q = 1
        elif form == "banded":
            c = np.asarray(c)
            if c.ndim != 2 or q is None or c.shape[1] != q + 2:
                raise ValueError("banded form needs c with q + 2 columns")
            if len(c) < N:
                raise ValueError("table must store at least N coefficient rows")
            if not np.all(np.isfinite(c.real)) or not np.all(np.isfinite(np.imag(c))):
                raise ValueError("coefficients must be finite")
            c = c.copy()
            for k in range(min(len(c), q + 1)):
                c[k, k + 2:] = 0.0  # target index k-j < 0 does not exist
            self.c = c
            self.q = int(q)
        else:
            raise ValueError(f"unknown table form {form!r}")

    @property
    def top(self):
        """Largest stored coefficient index, N + pad."""
        return (len(self.a) if self.form == "op" else len(self.c)) - 1

    @property
    def pad(self):
        return self.top - self.N

    @property
    def is_complex(self):
        return self.form == "banded" and np.iscomplexobj(self.c)

    def __repr__(self):
        return f"RecurrenceTable({self.form}, N={self.N}, pad={self.pad}, q={self.q})"

    def coeff(self, k, m):
        """<x P_k, Q_m>; zero off the band, loud error past the pad."""
        if k < 0 or m < 0:
            return 0.0
        if m > k + 1 or m < k - self.q:
            return 0.0
        if k > self.top:
            raise CoefficientRangeError(
                f"coefficient index {k} exceeds stored range {self.top} "
                f"(N={self.N}, pad={self.pad}); rebuild with a larger pad"
            )
        if self.form == "op":
            if m == k + 1:
                return float(self.a[k])
            if m == k:
                return float(self.b[k])
            return float(self.a[k - 1])
        return self.c[k, k - m + 1]

    def window_max(self, lo, hi):
        """max |<x P_k, Q_m>| over lo <= k, m <= hi (clipped to the stored
        range at the bottom, erroring at the top like coeff)."""
        lo = max(lo, 0)
        if hi > self.top:
            raise CoefficientRangeError(
                f"window [{lo}, {hi}] exceeds stored range {self.top}"
            )
        if hi < lo:
            raise ValueError("empty window")
        if self.form == "op":
            best = float(np.max(np.abs(self.b[lo : hi + 1])))
            if hi > lo:
                best = max(best, float(np.max(self.a[lo:hi])))
            return best
        best = 0.0
        for k in range(lo, hi + 1):
            for j in range(-1, self.q + 1):
                if lo <= k - j <= hi:
                    best = max(best, abs(self.c[k, j + 1]))
        return best

    # -- banded application ------------------------------------------------

    def _apply(self, v, lo, hi):
        """One multiplication-by-x step on the coefficient window [lo, hi]:
        new[m] = sum_j v[j] <x P_j, Q_m>."""
        W = hi - lo + 1
        if self.form == "op":
            new = v * self.b[lo : hi + 1]
            if W > 1:
                new[1:] += v[:-1] * self.a[lo:hi]
                new[:-1] += v[1:] * self.a[lo:hi]
            return new
        new = np.zeros_like(v)
        for j in range(-1, self.q + 1):
            i0 = max(0, -j)
            i1 = min(W, W - j)
            if i1 > i0:
                new[i0:i1] += v[i0 + j : i1 + j] * self.c[lo + i0 + j : lo + i1 + j, j + 1]
        return new


def op_table(a, b, N):
    """OP-form table from coefficient arrays a_0..a_{N+pad}, b likewise."""
    return RecurrenceTable(N, "op", a=a, b=b)


def banded_table(c, q, N):
    """General banded table from the coefficient array c[k][j+1] = <xP_k, Q_{k-j}>."""
    return RecurrenceTable(N, "banded", c=c, q=q)


def classical_table(name, N, pad=DEFAULT_PAD, alpha=-1.0, beta=1.0):
    """Known closed-form tables.

    'gue'       -- orthonormal polynomials of exp(-N x^2/2) dx:
                   a_k = sqrt((k+1)/N), b_k = 0.
    'chebyshev' -- arcsine measure of [alpha, beta]:
                   a_0 = h/sqrt(2), a_k = h/2 (k >= 1), b_k = mid,
                   where h and mid are the half-width and midpoint.
    'uniform-circle' -- monomials on the unit circle: <z P_k, Q_m> is 1 at
                   m = k+1 and 0 elsewhere (banded, q = 0).
    """
    K = N + pad
    if name == "gue":
        a = np.sqrt((np.arange(K + 1) + 1.0) / N)
        return RecurrenceTable(N, "op", a=a, b=np.zeros(K + 1))
    if name == "chebyshev":
        half = 0.5 * (beta - alpha)
        mid = 0.5 * (alpha + beta)
        if half <= 0:
            raise ValueError("need alpha < beta")
        a = np.full(K + 1, half / 2.0)
        a[0] = half / np.sqrt(2.0)
        return RecurrenceTable(N, "op", a=a, b=np.full(K + 1, mid))
    if name in ("uniform-circle", "circle"):
        c = np.zeros((K + 1, 2))
        c[:, 0] = 1.0
        return RecurrenceTable(N, "banded", c=c, q=0)
    raise ValueError(f"unknown classical table {name!r}")


def table_from_measure(m, N, pad=DEFAULT_PAD):
    """Orthonormal-polynomial table of a real atomic measure, by the
    discretized Stieltjes procedure with full reorthogonalization.

    Needs at least N + pad + 2 distinct atoms (one degree past the stored
    range fixes a_{N+pad} as a residual norm). Raises OrthogonalityError if
    the produced family drifts from orthonormality beyond 1e-9.
    """
    if m.is_complex:
        raise ValueError("table_from_measure needs a real-supported measure")
    K = N + pad
    x, w = m.points, m.weights
    if np.unique(x).size < K + 2:
        raise RankError(
            f"measure has {np.unique(x).size} distinct atoms; "
            f"need at least {K + 2} for N={N}, pad={pad}"
        )
    n = len(x)
    P = np.empty((K + 2, n))
    P[0] = 1.0 / np.sqrt(w.sum())
    a = np.zeros(K + 1)
    b = np.zeros(K + 1)
    for k in range(K + 1):
        xp = x * P[k]
        b[k] = float(np.sum(w * xp * P[k]))
        y = xp - b[k] * P[k]
        if k > 0:
            y -= a[k - 1] * P[k - 1]
        for _ in range(2):  # twice is enough
            coefs = P[: k + 1] @ (w * y)
            y -= coefs @ P[: k + 1]
        nrm2 = float(np.sum(w * y * y))
        scale = float(np.sum(w * xp * xp))
        if not nrm2 > scale * 1e-28:
            raise NumericalBreakdownError(
                f"orthogonalization broke down at degree {k + 1}; "
                "the measure is too coarse for this table"
            )
        a[k] = np.sqrt(nrm2)
        P[k + 1] = y / a[k]
    G = (P * w) @ P.T
    drift = float(np.max(np.abs(G - np.eye(K + 2))))
    if drift > ORTHONORMALITY_TOL:
        raise OrthogonalityError(
            f"orthonormality drift {drift:.3e} exceeds {ORTHONORMALITY_TOL:g}"
        )
    return RecurrenceTable(N, "op", a=a, b=b)


def path_sum_moment(table, ell, k, m):
    """<x^l P_k, Q_m>: total weight of oriented lattice paths (0,k) -> (l,m).

    Computed as l banded applications on the window of ordinates reachable
    by contributing paths; coefficients outside that window are never read.
    """
    if ell < 0 or k < 0 or m < 0:
        raise ValueError("ell, k, m must be nonnegative")
    if ell == 0:
        return 1.0 if k == m else 0.0
    q = table.q
    if m > k + ell or m < k - q * ell:
        return 0.0
    hi = (q * (ell + k) + m) // (q + 1)
    lo = max(0, (k + q * m - q * ell + q) // (q + 1) - 1)
    if hi > table.top:
        raise CoefficientRangeError(
            f"path_sum_moment(l={ell}, k={k}, m={m}) climbs to ordinate {hi} "
            f"but the table stores indices up to {table.top}"
        )
    dtype = complex if table.is_complex else float
    v = np.zeros(hi - lo + 1, dtype=dtype)
    v[k - lo] = 1.0
    for _ in range(ell):
        v = table._apply(v, lo, hi)
    out = v[m - lo]
    return out if table.is_complex else float(out)


def mean_moment(table, ell):
    """(1/N) sum_{k<N} <x^l P_k, Q_k>: the l-th moment of the mean empirical
    measure, straight from the table."""
    total = sum(path_sum_moment(table, ell, k, k) for k in range(table.N))
    return total / table.N


def hessenberg_matrix(table, size=None):
    """Matrix [<x P_j, Q_i>]_{i,j < size} of multiplication by x compressed
    to the span of P_0..P_{size-1}. Upper Hessenberg: entries vanish for
    row > column + 1; symmetric tridiagonal in the OP form."""
    n = table.N if size is None else int(size)
    if n < 1:
        raise ValueError("size must be >= 1")
    if n - 1 > table.top:
        raise CoefficientRangeError(
            f"section size {n} exceeds stored range {table.top}"
        )
    if table.form == "op":
        H = np.diag(table.b[:n].copy())
        if n > 1:
            off = table.a[: n - 1]
            H += np.diag(off, 1) + np.diag(off, -1)
        return H
    H = np.zeros((n, n), dtype=table.c.dtype)
    for k in range(n):
        for j in range(-1, table.q + 1):
            i = k - j
            if 0 <= i < n:
                H[i, k] = table.c[k, j + 1]
    return H


def eval_polynomials(table, x, upto, p0=1.0):
    """Values of P_0..P_upto at points x, by the forward recurrence.

    p0 is the constant value of P_0 (1/sqrt(total mass) for orthonormal
    families). Needs stored coefficients through index upto - 1.
    """
    if upto < 0:
        raise ValueError("upto must be >= 0")
    if upto - 1 > table.top:
        raise CoefficientRangeError(
            f"evaluating P_{upto} needs coefficients through {upto - 1}, "
            f"stored range is {table.top}"
        )
    pts = np.atleast_1d(np.asarray(x))
    dtype = complex if (table.is_complex or np.iscomplexobj(pts)) else float
    out = np.zeros((upto + 1, len(pts)), dtype=dtype)
    out[0] = p0
    if upto == 0:
        return out
    if table.form == "op":
        a, b = table.a, table.b
        out[1] = (pts - b[0]) * out[0] / a[0]
        for k in range(1, upto):
            out[k + 1] = ((pts - b[k]) * out[k] - a[k - 1] * out[k - 1]) / a[k]
        return out
    for k in range(upto):
        up = table.c[k, 0]
        if up == 0:
            raise NumericalBreakdownError(
                f"banded table has zero up-coefficient at k={k}; "
                "P_{k+1} is not determined"
            )
        acc = pts * out[k]
        for j in range(0, table.q + 1):
            if k - j >= 0:
                acc = acc - table.c[k, j + 1] * out[k - j]
        out[k + 1] = acc / up
    return out
