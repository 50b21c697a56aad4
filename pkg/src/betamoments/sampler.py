"""Monte Carlo over tridiagonal and bidiagonal matrix models of the beta ensembles.

Models (weights are the one-body factors of the eigenvalue density):

* Hermite: symmetric tridiagonal, diagonal N(0, 2)/sqrt(2), off-diagonal
  chi_{beta k}/sqrt(2); weight e^{-y^2/2}.
* Laguerre: B B^T with B lower bidiagonal, diagonal chi_{2c - beta i},
  subdiagonal chi_{beta k}; weight y^{c - 1 - beta(N-1)/2} e^{-y/2}.
* Jacobi: B^T B with B the upper bidiagonal built from Beta-distributed
  cosines; weight y^{a1} (1-y)^{a2} on (0, 1).

Every sample is reduced to a symmetric tridiagonal matrix, and the moment
only needs log|det(lam - T)|, obtained from the LDL^T pivot recurrence.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np
from scipy.special import logsumexp

from .ensembles import EnsembleSpec, Family, MomentQuery
from .errors import ConvergenceError, DomainError

__all__ = [
    "TridiagonalMatrix",
    "MCEstimate",
    "SignedMCEstimate",
    "eigen_tridiagonal",
    "sample_tridiagonal",
    "sample_spectrum",
    "mc_moment",
    "mc_signed_charpoly",
    "CHUNK_SIZE",
]

# Samples are generated in fixed-size chunks, each with its own counter-based
# stream, so results do not depend on how chunks are spread over threads.
CHUNK_SIZE = 8192


@dataclass(frozen=True)
class TridiagonalMatrix:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        if d.ndim != 1 or len(d) < 1 or len(e) != len(d) - 1:
            raise DomainError("need N diagonal and N-1 off-diagonal entries")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", np.abs(e))

    @property
    def N(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


@dataclass(frozen=True)
class MCEstimate:
    log_mean: float
    log_mean_stderr: float
    n_samples: int
    seed: int
    jackknife_stderr: float = float("nan")
    max_weight_fraction: float = float("nan")

    @property
    def heavy_tailed(self) -> bool:
        return self.max_weight_fraction >= 0.5


@dataclass(frozen=True)
class SignedMCEstimate:
    mean: float
    stderr: float
    n_samples: int
    seed: int


# ---------------------------------------------------------------------------
# eigenvalues


@numba.njit(cache=True)
def _ql_implicit(d, e, max_iter):
    n = d.shape[0]
    e2 = np.zeros(n)
    e2[: n - 1] = e
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e2[m]) <= 2.2e-16 * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                return False
            g = (d[l + 1] - d[l]) / (2.0 * e2[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e2[l] / (g + (r if g >= 0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e2[i]
                b = c * e2[i]
                r = math.hypot(f, g)
                e2[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e2[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e2[l] = g
            e2[m] = 0.0
    return True


def eigen_tridiagonal(T: TridiagonalMatrix) -> np.ndarray:
    """All eigenvalues of a symmetric tridiagonal matrix, ascending (implicit QL)."""
    d = T.diag.copy()
    if T.N == 1:
        return d
    ok = _ql_implicit(d, T.offdiag.copy(), 60)
    if not ok:
        raise ConvergenceError("implicit QL iteration did not converge")
    return np.sort(d)


# ---------------------------------------------------------------------------
# model construction (vectorised over a batch of samples)


def _chi(rng: np.random.Generator, dof, size) -> np.ndarray:
    return np.sqrt(2.0 * rng.standard_gamma(np.asarray(dof, dtype=float) / 2.0, size=size))


def _beta_sqrt(rng, a, b, size) -> np.ndarray:
    return np.sqrt(rng.beta(a, b, size=size))


def _hermite_batch(rng, beta, N, m):
    diag = rng.standard_normal((m, N))  # N(0, 2) / sqrt(2)
    dof = beta * np.arange(N - 1, 0, -1)
    off = _chi(rng, dof, (m, N - 1)) / math.sqrt(2.0)
    return diag, off


def _laguerre_batch(rng, beta, N, a_weight, m):
    c = a_weight + 1 + beta * (N - 1) / 2
    dg = _chi(rng, 2 * c - beta * np.arange(N), (m, N))
    sub = _chi(rng, beta * np.arange(N - 1, 0, -1), (m, N - 1))
    # B B^T for lower bidiagonal B
    diag = dg**2
    diag[:, 1:] += sub**2
    off = sub * dg[:, :-1]
    return diag, off


def _jacobi_batch(rng, beta, N, a1, a2, m):
    a = 2 * (a1 + 1) / beta - 1
    b = 2 * (a2 + 1) / beta - 1
    k = np.arange(1, N + 1)
    h = beta / 2
    c = _beta_sqrt(rng, h * (a + k), h * (b + k), (m, N))  # c_k, column k-1
    s = np.sqrt(1 - c**2)
    if N > 1:
        kp = np.arange(1, N)
        cp = _beta_sqrt(rng, h * kp, h * (a + b + 1 + kp), (m, N - 1))
        sp = np.sqrt(1 - cp**2)
    # upper bidiagonal: diagonal c_N, c_{N-1} s'_{N-1}, ..., c_1 s'_1;
    # superdiagonal s_N c'_{N-1}, ..., s_2 c'_1 (signs do not matter)
    dg = np.empty((m, N))
    dg[:, 0] = c[:, N - 1]
    sup = np.empty((m, N - 1))
    for i in range(1, N):
        dg[:, i] = c[:, N - 1 - i] * sp[:, N - 1 - i]
        sup[:, i - 1] = s[:, N - i] * cp[:, N - 1 - i]
    # B^T B
    diag = dg**2
    diag[:, 1:] += sup**2
    off = dg[:, :-1] * sup
    return diag, off


def _batch(spec: EnsembleSpec, rng: np.random.Generator, m: int):
    """(diag, offdiag, scale): x = scale * eigenvalue of the tridiagonal matrix."""
    fam, b, N = spec.family, spec.beta, spec.N
    if fam is Family.GAUSSIAN:
        d, e = _hermite_batch(rng, b, N, m)
        return d, e, 1.0 / math.sqrt(2 * b * N)
    if fam is Family.LAGUERRE_FIXED:
        d, e = _laguerre_batch(rng, b, N, spec.params[0], m)
        return d, e, 1.0 / (4 * b * N)
    if fam is Family.LAGUERRE_SCALED:
        d, e = _laguerre_batch(rng, b, N, spec.weight_exponents()[0], m)
        return d, e, 1.0 / (b * N)
    a1, a2 = spec.weight_exponents()
    d, e = _jacobi_batch(rng, b, N, a1, a2, m)
    return d, e, 1.0


def _stream(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(chunk)])))


def sample_tridiagonal(spec: EnsembleSpec, seed: int) -> tuple:
    """One draw of the model matrix and the scale mapping its spectrum onto the weight."""
    d, e, scale = _batch(spec, _stream(seed, 0), 1)
    return TridiagonalMatrix(d[0], e[0]), scale


def sample_spectrum(spec: EnsembleSpec, seed: int) -> np.ndarray:
    """One sorted eigenvalue vector distributed according to the ensemble."""
    T, scale = sample_tridiagonal(spec, seed)
    return scale * eigen_tridiagonal(T)


def _log_abs_charpoly(diag: np.ndarray, off: np.ndarray, x: float) -> tuple:
    """(sign, log|det(x - T)|) for each row, via LDL^T pivots."""
    m, N = diag.shape
    piv = x - diag[:, 0]
    logabs = np.log(np.abs(piv))
    sign = np.sign(piv)
    for k in range(1, N):
        piv = (x - diag[:, k]) - off[:, k - 1] ** 2 / piv
        logabs += np.log(np.abs(piv))
        sign *= np.sign(piv)
    return sign, logabs


# ---------------------------------------------------------------------------
# estimators


def _chunks(n_samples: int):
    full, rest = divmod(n_samples, CHUNK_SIZE)
    sizes = [CHUNK_SIZE] * full + ([rest] if rest else [])
    return list(enumerate(sizes))


def _run_chunks(work, n_samples: int, threads: int) -> np.ndarray:
    items = _chunks(n_samples)
    if threads <= 1:
        parts = [work(i, m) for i, m in items]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda im: work(*im), items))
    return np.concatenate(parts, axis=-1)


def _log_moment_samples(spec: EnsembleSpec, q: MomentQuery, n_samples: int, seed: int, threads: int):
    def work(chunk, m):
        d, e, scale = _batch(spec, _stream(seed, chunk), m)
        _, la = _log_abs_charpoly(d, e, q.lam / scale)
        return 2 * q.p * (la + spec.N * math.log(scale))

    return _run_chunks(work, n_samples, threads)


def log_mean_estimate(logs: np.ndarray, n_blocks: int = 20) -> tuple:
    """(log of the mean of exp(logs), delta-method SE, jackknife SE, max weight share)."""
    n = len(logs)
    top = logs.max()
    w = np.exp(logs - top)
    total = w.sum()
    mean = total / n
    var = w.var(ddof=1) if n > 1 else 0.0
    se = math.sqrt(var / n) / mean
    # leave-one-block-out means, summed in log space so a dominant block cannot cancel to zero
    blocks = np.array_split(logs, n_blocks)
    block_logs = np.array([logsumexp(b) for b in blocks])
    counts = np.array([len(b) for b in blocks])
    loo = np.array([
        logsumexp(np.delete(block_logs, i)) - math.log(n - counts[i]) for i in range(n_blocks)
    ])
    jk = math.sqrt((n_blocks - 1) / n_blocks * ((loo - loo.mean()) ** 2).sum())
    return math.log(mean) + top, se, jk, float(w.max() / total)


def mc_moment(spec: EnsembleSpec, q: MomentQuery, n_samples: int, seed: int, threads: int = 1) -> MCEstimate:
    """Estimate <prod |lam - x_l|^{2p}> by averaging in linear space."""
    if n_samples < 1000:
        raise DomainError("n_samples must be at least 1000")
    logs = _log_moment_samples(spec, q, n_samples, seed, threads)
    log_mean, se, jk, frac = log_mean_estimate(logs)
    est = MCEstimate(log_mean, se, n_samples, int(seed), jk, frac)
    if est.heavy_tailed:
        warnings.warn(f"one sample carries {frac:.0%} of the Monte Carlo mass; estimate is unreliable")
    return est


def mc_signed_charpoly(N: int, beta: float, x: float, n_samples: int, seed: int, threads: int = 1) -> SignedMCEstimate:
    """Mean of prod (x - x_l) for the weight e^{-beta t^2/2}."""
    if n_samples < 1000:
        raise DomainError("n_samples must be at least 1000")
    if not beta > 0:
        raise DomainError("beta must be positive")
    scale = 1.0 / math.sqrt(beta)

    def work(chunk, m):
        d, e = _hermite_batch(_stream(seed, chunk), beta, N, m)
        sign, la = _log_abs_charpoly(d, e, x / scale)
        return sign * np.exp(la + N * math.log(scale))

    vals = _run_chunks(work, n_samples, threads)
    return SignedMCEstimate(float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(n_samples)), n_samples, int(seed))
