"""Stationary unit-variance Gaussian sequences with long-range dependence.

Two exact finite-lag covariance families are provided, both with
``gamma(k) ~ ell0 * k**(2H - 2)``:

* ``fgn``: fractional Gaussian noise,
  ``gamma(k) = (|k+1|**2H - 2|k|**2H + |k-1|**2H) / 2``, ``ell0 = H(2H-1)``;
* ``arfima``: ARFIMA(0, d, 0) with ``d = H - 1/2`` normalized to unit
  variance, ``gamma(k) = prod_{j<=k} (j - 1 + d) / (j - d)``,
  ``ell0 = Gamma(1-d) / Gamma(d)``;

plus ``iid`` (white noise).  Paths are drawn exactly: by circulant embedding
for ``n >= EMBEDDING_THRESHOLD`` and by a dense Cholesky factor otherwise or
whenever the embedding has negative eigenvalues.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Union

import numpy as np
from scipy import linalg, special

from ._rng import substream
from .errors import EmbeddingError

GENERATORS = ("fgn", "arfima", "iid")
EMBEDDING_THRESHOLD = 512

Ell0 = Union[None, float, Callable[[float], float]]


@dataclass(frozen=True)
class LrdSpec:
    """Gaussian dependence model.

    ``ell0`` only affects :func:`autocov_asymptotic`; ``None`` selects the
    constant induced by the generator family.
    """

    hurst: float
    generator: str = "fgn"
    ell0: Ell0 = field(default=None, compare=False)

    def __post_init__(self):
        if not 0.0 < self.hurst < 1.0:
            raise ValueError(f"hurst must lie in (0, 1), got {self.hurst}")
        if self.generator not in GENERATORS:
            raise ValueError(f"generator must be one of {GENERATORS}, got {self.generator!r}")
        if self.generator == "iid" and self.hurst != 0.5:
            raise ValueError("generator 'iid' requires hurst = 0.5")
        if self.generator == "arfima" and self.hurst >= 1.0:
            raise ValueError("arfima requires d = H - 1/2 < 1/2")

    @property
    def memory_d(self) -> float:
        return self.hurst - 0.5

    @classmethod
    def from_d(cls, d: float, generator: str = "fgn", ell0: Ell0 = None) -> "LrdSpec":
        if d == 0.0 and generator == "iid":
            return cls(0.5, "iid", ell0)
        return cls(d + 0.5, generator, ell0)

    def ell0_constant(self) -> float:
        """Family-induced slowly varying constant (H(2H-1) for fGn)."""
        H = self.hurst
        if self.generator == "fgn":
            return H * (2 * H - 1)
        if self.generator == "arfima":
            d = self.memory_d
            if d == 0.0:
                return 0.0
            return math.gamma(1 - d) / math.gamma(d)
        return 0.0


@dataclass
class GaussianPath:
    values: np.ndarray
    seed: object
    spec: LrdSpec

    def __len__(self):
        return len(self.values)

    def to_csv(self, path_or_file) -> None:
        write_column_csv(path_or_file, "x", self.values)


def write_column_csv(path_or_file, header: str, values) -> None:
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([header])
        for v in values:
            w.writerow([repr(float(v))])
    finally:
        if own:
            fh.close()


def _fgn_acf(H: float, k: np.ndarray) -> np.ndarray:
    k = np.abs(np.asarray(k, dtype=float))
    h2 = 2.0 * H
    return 0.5 * (np.abs(k + 1.0) ** h2 - 2.0 * k**h2 + np.abs(k - 1.0) ** h2)


def _arfima_acf(d: float, k: np.ndarray) -> np.ndarray:
    k = np.abs(np.asarray(k, dtype=float))
    if d == 0.0:
        return (k == 0).astype(float)
    # Gamma(k + d) Gamma(1 - d) / (Gamma(k - d + 1) Gamma(d)), in logs for large k
    out = np.exp(
        special.gammaln(k + d) - special.gammaln(k - d + 1.0)
        + special.gammaln(1.0 - d) - special.gammaln(d)
    )
    return np.where(k == 0, 1.0, out)


def autocov(spec: LrdSpec, lag) -> np.ndarray | float:
    """Exact autocovariance ``gamma(lag)``; vectorized over ``lag``."""
    lag_arr = np.asarray(lag)
    if np.any(lag_arr < 0):
        raise ValueError("lag must be nonnegative")
    if spec.generator == "fgn":
        out = _fgn_acf(spec.hurst, lag_arr)
    elif spec.generator == "arfima":
        out = _arfima_acf(spec.memory_d, lag_arr)
    else:
        out = (lag_arr == 0).astype(float)
    return float(out) if np.ndim(out) == 0 else out


def autocov_asymptotic(spec: LrdSpec, lag) -> np.ndarray | float:
    """Power-law approximation ``ell0(k) * k**(2H - 2)`` for ``k >= 1``."""
    H = spec.hurst
    if H <= 0.5:
        raise ValueError(f"asymptotic LRD covariance needs H > 1/2, got H={H}")
    k = np.asarray(lag, dtype=float)
    if np.any(k < 1):
        raise ValueError("lag must be >= 1")
    if spec.ell0 is None:
        ell = spec.ell0_constant()
    elif callable(spec.ell0):
        ell = np.vectorize(spec.ell0, otypes=[float])(k)
    else:
        ell = float(spec.ell0)
    out = ell * k ** (2.0 * H - 2.0)
    return float(out) if np.ndim(out) == 0 else out


@lru_cache(maxsize=64)
def _embedding_sqrt_eigs(spec: LrdSpec, n: int):
    """sqrt(lambda / 2n) for the circulant of size 2n, or None if not PSD."""
    g = autocov(spec, np.arange(n + 1))
    row = np.concatenate([g, g[n - 1:0:-1]])
    lam = np.fft.rfft(row).real
    tol = 1e-10 * lam.max()
    if lam.min() < -tol:
        return None
    lam = np.clip(lam, 0.0, None)
    full = np.concatenate([lam, lam[-2:0:-1]])
    out = np.sqrt(full / (2.0 * n))
    out.setflags(write=False)
    return out


@lru_cache(maxsize=16)
def _cholesky_factor(spec: LrdSpec, n: int) -> np.ndarray:
    g = autocov(spec, np.arange(n))
    cov = linalg.toeplitz(g)
    for jitter in (0.0, 1e-12, 1e-10):
        try:
            L = linalg.cholesky(cov + jitter * np.eye(n), lower=True)
            L.setflags(write=False)
            return L
        except linalg.LinAlgError:
            continue
    raise EmbeddingError(
        f"covariance matrix of {spec} is not numerically positive definite at n={n}"
    )


def simulate_values(spec: LrdSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw one path of length ``n`` from an explicit generator."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if spec.generator == "iid" or (spec.generator == "fgn" and spec.hurst == 0.5):
        return rng.standard_normal(n)
    if n >= EMBEDDING_THRESHOLD:
        root = _embedding_sqrt_eigs(spec, n)
        if root is not None:
            xi = rng.standard_normal(2 * n) + 1j * rng.standard_normal(2 * n)
            return np.fft.fft(root * xi)[:n].real
    L = _cholesky_factor(spec, n)
    return L @ rng.standard_normal(n)


def simulate(spec: LrdSpec, n: int, seed) -> GaussianPath:
    """Exact stationary Gaussian path with autocovariance ``autocov(spec, .)``.

    ``seed`` is a nonnegative integer or a ``SeedSequence``; identical
    ``(spec, n, seed)`` give bit-identical paths.
    """
    rng = substream(seed)
    return GaussianPath(simulate_values(spec, n, rng), seed, spec)


def sample_autocov(x: np.ndarray, max_lag: int) -> np.ndarray:
    """Known-mean (zero) sample autocovariance at lags 0..max_lag."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    return np.array([np.dot(x[: n - h], x[h:]) / (n - h) for h in range(max_lag + 1)])
