"""Tail empirical processes, the i.i.d./LRD decomposition and the Hill estimator.

Order-statistic convention: ``Y_{n-k:n}`` is the (k+1)-th largest value, so
exactly ``k`` observations exceed it when the sample has no ties.  All
exceedance indicators use strict inequality.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid

from . import kernels
from ._rng import STREAM_GAUSS, STREAM_NOISE, substream
from .gauss_lrd import LrdSpec, simulate_values
from .tails import (
    NoiseSpec,
    TailGrid,
    VolatilitySpec,
    conditional_tail_Tn,
    inverse_survival_z,
    limit_tail,
    survival_y,
    survival_z,
)


@dataclass
class Sample:
    y: np.ndarray
    latent_x: np.ndarray | None = None
    latent_z: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=float)
        n = len(self.y)
        for name in ("latent_x", "latent_z"):
            v = getattr(self, name)
            if v is not None:
                v = np.asarray(v, dtype=float)
                if len(v) != n:
                    raise ValueError(f"{name} has length {len(v)}, expected {n}")
                setattr(self, name, v)

    def __len__(self):
        return len(self.y)

    def sorted_y(self) -> np.ndarray:
        cached = self.meta.get("_sorted")
        if cached is None:
            cached = np.sort(self.y)
            self.meta["_sorted"] = cached
        return cached


def simulate_sample(lrd: LrdSpec, noise: NoiseSpec, vol: VolatilitySpec, n: int,
                    seed, replication: int = 0) -> Sample:
    """Draw ``Y_i = sigma(X_i) Z_i`` with latent X and Z from substreams of ``seed``."""
    x = simulate_values(lrd, n, substream(seed, replication, STREAM_GAUSS))
    u = 1.0 - substream(seed, replication, STREAM_NOISE).random(n)
    z = np.asarray(inverse_survival_z(noise, u), dtype=float)
    y = vol(x) * z
    return Sample(y, x, z, {"lrd": lrd, "noise": noise, "vol": vol, "seed": seed,
                            "replication": replication})


@dataclass
class TepCurve:
    s: np.ndarray
    tilde_T: np.ndarray
    centered: np.ndarray
    level_kind: str
    level: float
    normalizer: float
    scaling_hint: float | None = None

    def to_csv(self, path_or_file) -> None:
        _write_columns(path_or_file, ["s", "tilde_T", "centered"], [self.s, self.tilde_T, self.centered])


@dataclass
class Decomposition:
    s: np.ndarray
    r_n: np.ndarray
    s_n: np.ndarray
    e_n: np.ndarray

    def to_csv(self, path_or_file) -> None:
        _write_columns(path_or_file, ["s", "r_n", "s_n"], [self.s, self.r_n, self.s_n])


def _write_columns(path_or_file, header, cols):
    own = not hasattr(path_or_file, "write")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*cols):
            w.writerow([repr(float(v)) for v in row])
    finally:
        if own:
            fh.close()


def _grid_values(grid) -> np.ndarray:
    s = grid.s_values if isinstance(grid, TailGrid) else np.asarray(grid, dtype=float)
    if s.ndim != 1 or np.any(s < 0) or np.any(np.diff(s) < 0):
        raise ValueError("grid must be a nondecreasing array of s >= 0")
    return s


def exceedance_counts(y, thresholds) -> np.ndarray:
    """``#{j: y_j > t}`` for each threshold (any order)."""
    t = np.asarray(thresholds, dtype=float)
    order = np.argsort(t, kind="stable")
    counts = kernels.count_exceedances(np.ascontiguousarray(y, dtype=float),
                                       np.ascontiguousarray(t[order]))
    out = np.empty_like(counts)
    out[order] = counts
    return out


def tail_empirical(sample: Sample, u_n: float, fbar_un: float, grid,
                   vol: VolatilitySpec | None = None, noise: NoiseSpec | None = None,
                   Tn=None) -> TepCurve:
    """Deterministic-level process ``T~_n(s)`` and ``e_n = T~_n - T_n``.

    ``T_n`` comes from ``Tn`` (array on the grid) if given, else from
    ``conditional_tail_Tn(vol, noise, u_n, s)``; with neither, the curve is
    centered at 0 (``centered == tilde_T``).
    """
    if u_n <= 0:
        raise ValueError("u_n must be > 0")
    if not 0.0 < fbar_un <= 1.0:
        raise ValueError("fbar_un must lie in (0, 1]")
    s = _grid_values(grid)
    norm = len(sample) * fbar_un
    tilde = exceedance_counts(sample.y, u_n * (1.0 + s)) / norm
    if Tn is None and vol is not None and noise is not None:
        Tn = conditional_tail_Tn(vol, noise, u_n, s)
    centered = tilde - (np.asarray(Tn, dtype=float) if Tn is not None else 0.0)
    return TepCurve(s, tilde, centered, "deterministic", float(u_n), float(norm))


def order_stat_from_top(sample: Sample, k: int) -> float:
    """``Y_{n-k:n}``, the (k+1)-th largest observation."""
    n = len(sample)
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    return float(sample.sorted_y()[n - k - 1])


def random_level_tep(sample: Sample, k: int, grid, alpha: float | None = None) -> TepCurve:
    """``T^_n(s) = k^-1 #{Y_j > Y_{n-k:n}(1+s)}``, centered at ``T(s)`` if alpha given."""
    s = _grid_values(grid)
    level = order_stat_from_top(sample, k)
    ys = sample.sorted_y()
    n = len(ys)
    counts = n - np.searchsorted(ys, level * (1.0 + s), side="right")
    hat = counts / k
    centered = hat - limit_tail(alpha, s) if alpha is not None else hat.copy()
    return TepCurve(s, hat, centered, "random", level, float(k))


def hill(sample_or_y, k: int) -> float:
    """Hill estimate ``k^-1 sum_{i<=k} log(Y_{n-i+1:n} / Y_{n-k:n})``."""
    sample = sample_or_y if isinstance(sample_or_y, Sample) else Sample(sample_or_y)
    level = order_stat_from_top(sample, k)
    if level <= 0:
        raise ValueError("Y_{n-k:n} must be > 0")
    top = sample.sorted_y()[len(sample) - k:]
    return float(np.mean(np.log(top)) - np.log(level))


def hill_path(y, kmax: int) -> np.ndarray:
    """Hill estimates for ``k = 1..kmax``."""
    y = np.asarray(y, dtype=float)
    n = len(y)
    if not 1 <= kmax < n:
        raise ValueError(f"need 1 <= kmax < n, got kmax={kmax}, n={n}")
    top = np.sort(np.partition(y, n - kmax - 1)[n - kmax - 1:])[::-1]
    if top[-1] <= 0:
        raise ValueError("Y_{n-k:n} must be > 0")
    return kernels.hill_curve(np.ascontiguousarray(top), kmax)


def hill_integral(sample: Sample, k: int, size: int = 20001) -> float:
    """Trapezoidal ``int_0^inf T^_n(s) / (1 + s) ds`` up to where ``T^_n`` vanishes."""
    level = order_stat_from_top(sample, k)
    log_max = np.log(sample.sorted_y()[-1] / level)
    s = np.expm1(np.linspace(0.0, log_max * (1.0 + 1e-9), size))
    curve = random_level_tep(sample, k, s)
    return float(trapezoid(curve.tilde_T / (1.0 + s), s))


def intermediate_quantile_stat(sample: Sample, k: int, u_n: float) -> float:
    """``(Y_{n-k:n} - u_n) / u_n``."""
    if u_n <= 0:
        raise ValueError("u_n must be > 0")
    return (order_stat_from_top(sample, k) - u_n) / u_n


def conditional_exceedance_sums(x, vol: VolatilitySpec, noise: NoiseSpec, levels) -> np.ndarray:
    """``sum_j P(Z > level / sigma(x_j))`` for each level."""
    levels = np.ascontiguousarray(levels, dtype=float)
    x = np.ascontiguousarray(x, dtype=float)
    if vol.family == "exp_scaled":
        return kernels.conditional_exceedance_sums(
            x, float(vol.tau), levels, float(noise.alpha), float(noise.scale),
            float(noise.beta or 0.0), kernels.FAMILY_CODES[noise.family], float(noise.support_lower),
        )
    sig = vol(x)
    with np.errstate(divide="ignore"):
        z = np.where(sig[None, :] > 0, levels[:, None] / np.where(sig > 0, sig, 1.0)[None, :], np.inf)
    return np.asarray(survival_z(noise, z)).sum(axis=1)


def decompose(sample: Sample, u_n: float, fbar_un: float, grid, vol: VolatilitySpec,
              noise: NoiseSpec, Tn=None) -> Decomposition:
    """Split ``e_n`` into the conditionally independent part and the subordinated part.

    ``R_n(s) = (n fbar)^-1 sum_j [1{Y_j > (1+s)u_n} - P(Z > (1+s)u_n / sigma(X_j))]``
    and ``S_n = e_n - R_n``, i.e.
    ``S_n(s) = (n fbar)^-1 sum_j P(Z > (1+s)u_n / sigma(X_j)) - T_n(s)``,
    which equals ``(n fbar)^-1 sum_j [P(.|X_j) - P(Y > (1+s)u_n)]`` when
    ``fbar = P(Y > u_n)``.
    """
    if sample.latent_x is None:
        raise ValueError("decompose needs the latent Gaussian sequence")
    curve = tail_empirical(sample, u_n, fbar_un, grid, vol, noise, Tn)
    norm = curve.normalizer
    cond = conditional_exceedance_sums(sample.latent_x, vol, noise, u_n * (1.0 + curve.s)) / norm
    r_n = curve.tilde_T - cond
    s_n = curve.centered - r_n
    return Decomposition(curve.s, r_n, s_n, curve.centered)


def fbar_for(vol: VolatilitySpec, noise: NoiseSpec, u_n: float) -> float:
    return float(survival_y(vol, noise, u_n))
