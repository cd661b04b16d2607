"""Limit laws of mean empirical moments for tables with coefficient profiles.

When the coefficients of a table follow smooth shapes, a_k^N ~ a(k/N) and
b_k^N ~ b(k/N), the mean empirical moments converge to the moments of the
law of 2 a(U) xi + b(U), with U uniform on [0,1] and xi an independent
arcsine variable:

    m_l = sum_m binom(l, 2m) binom(2m, m) integral a(s)^{2m} b(s)^{l-2m} ds.

Constant profiles give the arcsine law of [b-2a, b+2a]; the GUE profile
a(s) = sqrt(s), b = 0 gives the semicircle (Catalan moments). General
banded profiles a_j(s) ~ <x P_k, Q_{k-j}> at k ~ sN contribute through
step-type compositions: all (k_{-1},...,k_q) >= 0 with sum k_j = l and
sum j k_j = 0.
"""

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .recurrence import mean_moment

GL_NODES = 256


def _as_profile_fn(f):
    if callable(f):
        return f
    val = float(f)
    return lambda s: np.full_like(np.asarray(s, dtype=float), val)


@dataclass
class CoefficientProfile:
    """Limiting coefficient shapes a_j(s), s in [0,1], for -1 <= j <= q.
    a_{-1} is the up-step profile; OP tables have a_{-1} = a_1 = a and
    a_0 = b."""

    funcs: dict

    def __post_init__(self):
        js = sorted(self.funcs)
        if not js or js[0] != -1:
            raise ValueError("profile needs the up-step shape at j = -1")
        if js != list(range(-1, js[-1] + 1)):
            raise ValueError("profile indices must be contiguous from -1")
        self.funcs = {j: _as_profile_fn(f) for j, f in self.funcs.items()}

    @property
    def q(self):
        return max(self.funcs)

    def __call__(self, j, s):
        return self.funcs[j](np.asarray(s, dtype=float))


def op_profile(a, b=0.0):
    """Profile of an OP table with coefficient shapes a(s) and b(s)."""
    a = _as_profile_fn(a)
    return CoefficientProfile({-1: a, 0: _as_profile_fn(b), 1: a})


def gue_profile():
    """a_k = sqrt((k+1)/N) flattens to a(s) = sqrt(s)."""
    return op_profile(lambda s: np.sqrt(s), 0.0)


def catalan_moment(ell):
    """Semicircle moments: Catalan numbers at even orders, 0 at odd."""
    if ell % 2:
        return 0.0
    m = ell // 2
    return float(math.comb(2 * m, m) // (m + 1))


def arcsine_moment(ell, alpha=-1.0, beta=1.0):
    """Moment integral x^l d omega_[alpha,beta]: exactly
    (1/4^m) binom(2m, m) on [-1,1], transported affinely elsewhere."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    mid = 0.5 * (alpha + beta)
    half = 0.5 * (beta - alpha)
    total = 0.0
    for j in range(0, ell + 1, 2):
        central = math.comb(j, j // 2) / 4.0 ** (j // 2)
        total += math.comb(ell, j) * mid ** (ell - j) * half**j * central
    return float(total)


def _gl_grid(nodes=GL_NODES):
    x, w = np.polynomial.legendre.leggauss(nodes)
    return 0.5 * (x + 1.0), 0.5 * w  # mapped to [0,1]


def mu_ab_moment(profile, ell, nodes=GL_NODES):
    """l-th moment of the law of 2 a(U) xi + b(U) for an OP profile."""
    if profile.q != 1:
        raise ValueError("mu_ab form needs an OP (q=1) profile")
    s, w = _gl_grid(nodes)
    av = profile(-1, s)
    bv = profile(0, s)
    total = 0.0
    for m in range(ell // 2 + 1):
        coeff = math.comb(ell, 2 * m) * math.comb(2 * m, m)
        total += coeff * float(np.sum(w * av ** (2 * m) * bv ** (ell - 2 * m)))
    return total


def mu_ab_sample(profile, rng, size):
    """Draws of 2 a(U) xi + b(U), xi = cos(pi V) arcsine on [-1,1]."""
    if profile.q != 1:
        raise ValueError("mu_ab form needs an OP (q=1) profile")
    u = rng.random(size)
    xi = np.cos(np.pi * rng.random(size))
    return 2.0 * profile(-1, u) * xi + profile(0, u)


def banded_limit_moment(profile, ell, nodes=GL_NODES):
    """Limit of mean empirical moments for a banded profile: sum over step
    compositions (k_{-1}..k_q) with sum k_j = l, sum j k_j = 0, of the
    multinomial coefficient times integral prod_j a_j(s)^{k_j} ds."""
    if ell == 0:
        return 1.0
    q = profile.q
    s, w = _gl_grid(nodes)
    vals = {j: profile(j, s) for j in range(-1, q + 1)}
    total = 0.0
    for combo in product(range(ell + 1), repeat=q + 2):
        if sum(combo) != ell:
            continue
        if sum(j * kj for j, kj in zip(range(-1, q + 1), combo)) != 0:
            continue
        coeff = math.factorial(ell)
        for kj in combo:
            coeff //= math.factorial(kj)
        integrand = np.ones_like(s)
        for j, kj in zip(range(-1, q + 1), combo):
            if kj:
                integrand = integrand * vals[j] ** kj
        total += coeff * float(np.sum(w * integrand))
    return total


@dataclass
class LimitRow:
    ell: int
    finite_moment: float
    limit_moment: float
    gap: float


def limit_report(table, profile, lmax):
    """Side-by-side finite-N mean moments (from the table) and their
    profile limits, with gaps."""
    rows = []
    for ell in range(1, lmax + 1):
        fin = mean_moment(table, ell)
        fin = float(np.real(fin))
        lim = banded_limit_moment(profile, ell)
        rows.append(LimitRow(ell, fin, lim, abs(fin - lim)))
    return rows
