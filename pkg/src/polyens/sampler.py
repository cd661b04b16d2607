"""Exact chain-rule sampling of polynomial ensembles on atomic measures.

Two equivalent conditional-density routes:

  * 'hkpv'  -- hermitian kernels only: Gram-Schmidt on the functions
               psi_j = K(x_j, .) keeps an orthonormal family e_1..e_k; the
               next conditional density is (K(x,x) - sum |e_j(x)|^2)/(N-k).
  * 'schur' -- any kernel: the ratio of principal minors
               det K[prefix + x] / det K[prefix], evaluated through the
               Schur complement K(x,x) - row . M^{-1} . col, with the
               prefix inverse maintained incrementally (block update) and
               refactored from scratch every 32 points to bound drift.

Every step draws exactly from the conditional density restricted to the
atoms (categorical draw, no rejection). The chain multiplies to the DPP
density: sum of log conditional densities = log det K[points] - log N!.
"""

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalBreakdownError, OrthogonalityError
from .measure import ReferenceMeasure
from .ensemble import PolynomialEnsemble
from .rng import DEFAULT_SEED, stream

REFACTOR_EVERY = 32


@dataclass
class PointConfiguration:
    """One exact draw: atom indices in order drawn, their values, and the
    log of the chain-rule density w.r.t. mu^N (log det K - log N!)."""

    indices: np.ndarray
    points: np.ndarray
    log_density: float

    def __len__(self):
        return len(self.indices)


class ConditionalState:
    """Chain-rule state after conditioning on a prefix of points."""

    def __init__(self, ensemble, mode="auto"):
        if mode == "auto":
            mode = "hkpv" if ensemble.hermitian else "schur"
        if mode == "hkpv" and not ensemble.hermitian:
            raise ValueError("hkpv mode requires a hermitian kernel")
        if mode not in ("hkpv", "schur"):
            raise ValueError(f"unknown mode {mode!r}")
        self.ensemble = ensemble
        self.mode = mode
        self.K = ensemble.kernel_matrix()
        self.Kdiag = np.ascontiguousarray(np.real(np.diag(self.K)))
        self.weights = ensemble.measure.weights
        self.selected = []
        self.heights = []  # ||psihat_k||^2, equivalently the Schur pivots
        n = len(self.weights)
        if mode == "hkpv":
            self._E = np.empty((ensemble.N, n), dtype=self.K.dtype)
        else:
            self._Minv = np.zeros((ensemble.N, ensemble.N), dtype=self.K.dtype)

    @classmethod
    def from_prefix(cls, ensemble, prefix, mode="auto"):
        state = cls(ensemble, mode=mode)
        for idx in prefix:
            state.push(int(idx))
        return state

    @property
    def k(self):
        return len(self.selected)

    def density_all(self):
        """Conditional density (w.r.t. mu) of the next point at every atom."""
        N, k = self.ensemble.N, self.k
        if k >= N:
            raise ValueError("all N points are already conditioned on")
        if self.mode == "hkpv":
            if k:
                E = self._E[:k]
                if np.iscomplexobj(E):
                    vals = self.Kdiag - np.einsum("ji,ji->i", E, E.conj()).real
                else:
                    vals = self.Kdiag - np.einsum("ji,ji->i", E, E)
            else:
                vals = self.Kdiag.copy()
        else:
            if k:
                sel = self.selected
                R = self.K[:, sel]
                C = self.K[sel, :]
                vals = self.Kdiag - np.real(np.einsum("ij,ji->i", R @ self._Minv[:k, :k], C))
            else:
                vals = self.Kdiag.copy()
        return vals / (N - k)

    def density_at(self, idx):
        """Conditional density (w.r.t. mu) of the next point at one atom."""
        N, k = self.ensemble.N, self.k
        if k >= N:
            raise ValueError("all N points are already conditioned on")
        if self.mode == "hkpv":
            if k:
                col = self._E[:k, idx]
                val = self.Kdiag[idx] - float(np.real(np.vdot(col, col)))
            else:
                val = self.Kdiag[idx]
        else:
            if k:
                sel = self.selected
                r = self.K[idx, sel]
                c = self.K[sel, idx]
                val = self.Kdiag[idx] - float(np.real(r @ self._Minv[: k, : k] @ c))
            else:
                val = self.Kdiag[idx]
        return val / (N - k)

    def push(self, idx):
        """Condition on the atom at index idx."""
        N, k = self.ensemble.N, self.k
        if k >= N:
            raise ValueError("all N points are already conditioned on")
        idx = int(idx)
        if self.mode == "hkpv":
            row = self.K[idx, :].copy()
            if k:
                coef = np.conj(self._E[:k, idx])
                row -= coef @ self._E[:k]
            nrm2 = float(np.real(row[idx]))
            if nrm2 <= 0:
                raise NumericalBreakdownError(
                    f"degenerate Gram-Schmidt pivot {nrm2:.3e} at atom {idx}"
                )
            self._E[k] = row / np.sqrt(nrm2)
            self.heights.append(nrm2)
        else:
            if k:
                sel = self.selected
                Minv = self._Minv[:k, :k]
                c = self.K[sel, idx]
                r = self.K[idx, sel]
                u = Minv @ c
                v = r @ Minv
                S = self.K[idx, idx] - r @ u
                if float(np.real(S)) <= 0:
                    raise NumericalBreakdownError(
                        f"degenerate prefix minor ratio {S!r} at atom {idx}"
                    )
                self._Minv[:k, :k] = Minv + np.outer(u, v) / S
                self._Minv[:k, k] = -u / S
                self._Minv[k, :k] = -v / S
                self._Minv[k, k] = 1.0 / S
                self.heights.append(float(np.real(S)))
            else:
                d = self.K[idx, idx]
                if float(np.real(d)) <= 0:
                    raise NumericalBreakdownError(f"K(x,x) <= 0 at atom {idx}")
                self._Minv[0, 0] = 1.0 / d
                self.heights.append(float(np.real(d)))
            self.selected.append(idx)
            if self.k % REFACTOR_EVERY == 0:
                self.refactor()
            return
        self.selected.append(idx)

    def refactor(self):
        """Rebuild the prefix inverse from scratch (schur mode)."""
        if self.mode != "schur" or not self.selected:
            return
        sel = self.selected
        sub = self.K[np.ix_(sel, sel)]
        try:
            self._Minv[: len(sel), : len(sel)] = np.linalg.inv(sub)
        except np.linalg.LinAlgError as exc:
            raise NumericalBreakdownError(f"prefix minor is singular: {exc}") from exc

    def base_times_height_check(self):
        """Relative gap between det[K(x_i, x_j)] on the prefix and the
        product of the recorded pivots ||psihat_k||^2."""
        if not self.selected:
            return 0.0
        sub = self.K[np.ix_(self.selected, self.selected)]
        sign, logdet = np.linalg.slogdet(sub)
        if np.real(sign) <= 0:
            raise OrthogonalityError("prefix determinant is not positive")
        logprod = float(np.sum(np.log(self.heights)))
        return abs(float(np.expm1(logdet - logprod)))


def conditional_density(ensemble, prefix, mode="auto"):
    """Density vector (over atoms, w.r.t. mu) of the next point given a
    prefix of atom indices."""
    return ConditionalState.from_prefix(ensemble, prefix, mode=mode).density_all()


def sample(ensemble, rng=None, mode="auto", check_normalization=False):
    """One exact draw of the N-point configuration."""
    rng = stream() if rng is None else rng
    state = ConditionalState(ensemble, mode=mode)
    return _drive(state, rng, check_normalization)


def _drive(state, rng, check_normalization=False):
    e = state.ensemble
    m = e.measure
    logdens = 0.0
    for _ in range(e.N):
        vals = state.density_all()
        if check_normalization:
            total = float(np.sum(vals * m.weights))
            if abs(total - 1.0) > 1e-8:
                raise NumericalBreakdownError(
                    f"conditional density integrates to {total!r}, not 1"
                )
        idx = m.sample_categorical(vals, rng)
        logdens += float(np.log(vals[idx]))
        state.push(idx)
    indices = np.array(state.selected, dtype=int)
    return PointConfiguration(indices, m.points[indices], logdens)


def _worker_count():
    raw = os.environ.get("POLYENS_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_chunk(ensemble, seed, replicas, mode, statistic):
    stats = []
    rows = []
    logs = np.empty(len(replicas))
    for i, r in enumerate(replicas):
        cfg = sample(ensemble, rng=stream(seed, r), mode=mode)
        logs[i] = cfg.log_density
        if statistic is None:
            rows.append(cfg.indices)
        else:
            stats.append(statistic(cfg.points))
    if statistic is None:
        return np.asarray(rows), logs
    return np.asarray(stats), logs


def sample_replicas(ensemble, n_replicas, seed=DEFAULT_SEED, mode="auto", statistic=None):
    """n_replicas independent draws; replica r uses stream(seed, r), so the
    result is reproducible and independent of worker fan-out.

    Returns (values, log_densities): values is the (replicas, N) index
    matrix, or the per-replica statistic array when statistic is given.
    POLYENS_THREADS > 1 fans chunks out over processes.
    """
    workers = min(_worker_count(), max(1, n_replicas))
    todo = np.arange(n_replicas)
    if workers == 1 or n_replicas < 4:
        return _run_chunk(ensemble, seed, todo, mode, statistic)
    import concurrent.futures

    chunks = np.array_split(todo, workers)
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(
            pool.map(_run_chunk, *zip(*[(ensemble, seed, c, mode, statistic) for c in chunks]))
        )
    values = np.concatenate([p[0] for p in parts])
    logs = np.concatenate([p[1] for p in parts])
    return values, logs


# -- spectral thinning -------------------------------------------------------


@dataclass
class SpectralData:
    """Kernel in spectral form K(x, y) = sum_k lambda_k phi_k(x) conj(psi_k(y))
    with biorthogonal families and contraction coefficients 0 <= lambda <= 1."""

    lambdas: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    measure: ReferenceMeasure
    validated: bool = field(default=False, repr=False)

    def __post_init__(self):
        self.lambdas = np.asarray(self.lambdas, dtype=float)
        self.phi = np.asarray(self.phi)
        self.psi = np.asarray(self.psi)
        r = len(self.lambdas)
        n = len(self.measure)
        if self.phi.shape != (r, n) or self.psi.shape != (r, n):
            raise ValueError("phi and psi must be (rank, n_atoms)")
        if np.any(self.lambdas < 0) or np.any(self.lambdas > 1):
            raise ValueError("contraction needs 0 <= lambda_k <= 1")
        G = (self.phi * self.measure.weights) @ np.conj(self.psi).T
        if r and np.max(np.abs(G - np.eye(r))) > 1e-8:
            raise OrthogonalityError("phi and psi are not biorthogonal")

    @property
    def rank(self):
        return len(self.lambdas)

    def intensity(self):
        """1-point correlation density sum lambda_k phi_k psi_k-bar w.r.t. mu."""
        vals = np.einsum("k,ki,ki->i", self.lambdas, self.phi, np.conj(self.psi))
        return vals.real if np.iscomplexobj(vals) else vals


def spectral_from_ensemble(ensemble, lambdas):
    """Spectral data of a hermitian ensemble contracted by the given
    coefficients: phi_k = psi_k = P_k."""
    lambdas = np.asarray(lambdas, dtype=float)
    if len(lambdas) > ensemble.N:
        raise ValueError("more coefficients than kernel rank")
    P = ensemble.P_vals[: len(lambdas)]
    return SpectralData(lambdas, P, P, ensemble.measure)


def thin_contraction(spectral, rng=None):
    """Bernoulli thinning of a contraction: keep the k-th spectral direction
    with probability lambda_k, returning the projection ensemble on the kept
    directions (possibly zero-rank) and the keep mask. Sampling the returned
    ensemble and mixing over masks reproduces the DPP of the contracted
    kernel."""
    rng = stream() if rng is None else rng
    keep = rng.random(spectral.rank) < spectral.lambdas
    phi = spectral.phi[keep]
    psi = spectral.psi[keep]
    ens = PolynomialEnsemble.from_values(
        spectral.measure, phi, psi, name="thinned-projection"
    )
    return ens, keep
