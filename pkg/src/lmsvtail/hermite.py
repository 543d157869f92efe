"""Hermite expansions of Gaussian functionals.

Probabilists' Hermite polynomials ``H_m`` satisfy
``cov(H_j(X), H_k(X)) = delta_jk k!``.  A function ``G`` in L2 of the
standard normal law expands as ``G = sum_m c_m / m! H_m`` with
``c_m = E[G(X) H_m(X)]``; the Hermite rank is the smallest ``m >= 1`` with
``c_m != 0``.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .errors import RankUndetectedError, RegimeError
from .gauss_lrd import LrdSpec, autocov, autocov_asymptotic
from .quadrature import DEFAULT_POLICY, QuadPolicy, expect_normal
from .tails import NoiseSpec, VolatilitySpec, survival_z

DEFAULT_ORDER = 12
RANK_TOL = 1e-8


class TruncationWarning(UserWarning):
    """The truncated Rozanov series may have lost accuracy."""


def hermite_poly(m: int, x):
    """``H_m(x)`` by the three-term recurrence; vectorized over ``x``."""
    if m < 0:
        raise ValueError("m must be >= 0")
    x = np.asarray(x, dtype=float)
    h_prev, h = np.ones_like(x), x.copy()
    if m == 0:
        out = h_prev
    else:
        for j in range(1, m):
            h_prev, h = h, x * h - j * h_prev
        out = h
    return float(out) if out.ndim == 0 else out


def hermite_table(x, M: int) -> np.ndarray:
    """Array of shape ``(len(x), M + 1)`` holding ``H_0(x) .. H_M(x)``."""
    return kernels.hermite_table(np.ascontiguousarray(x, dtype=float), int(M))


@dataclass(frozen=True)
class HermiteExpansion:
    coeffs: np.ndarray
    max_order: int
    rank: int | None
    tol_used: float
    second_moment: float

    @property
    def mean(self) -> float:
        return float(self.coeffs[0])

    @property
    def variance(self) -> float:
        return self.second_moment - self.mean**2

    def J(self, m: int) -> float:
        return float(self.coeffs[m])

    def parseval_sum(self) -> float:
        m = np.arange(self.max_order + 1)
        return float(np.sum(self.coeffs**2 / special_factorial(m)))

    def to_csv(self, path_or_file) -> None:
        own = not hasattr(path_or_file, "write")
        fh = open(path_or_file, "w", newline="") if own else path_or_file
        try:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["m", "c_m"])
            for m, c in enumerate(self.coeffs):
                w.writerow([m, repr(float(c))])
        finally:
            if own:
                fh.close()


def special_factorial(m) -> np.ndarray:
    return np.array([math.factorial(int(k)) for k in np.atleast_1d(m)], dtype=float)


def _detect_rank(coeffs: np.ndarray, tol: float) -> int | None:
    threshold = tol * max(1.0, float(np.linalg.norm(coeffs)))
    for m in range(1, len(coeffs)):
        if abs(coeffs[m]) > threshold:
            return m
    return None


def expand(G: Callable, M: int = DEFAULT_ORDER, *, breakpoints=(),
           policy: QuadPolicy = DEFAULT_POLICY, tol: float = RANK_TOL) -> HermiteExpansion:
    """Hermite coefficients ``c_0 .. c_M`` of a vectorized function ``G``.

    Pass the locations of kinks or jumps of ``G`` as ``breakpoints`` so the
    quadrature can split there.
    """
    if M < 1:
        raise ValueError("M must be >= 1")

    def integrand(x):
        g = np.asarray(G(x), dtype=float)
        table = hermite_table(x, M)
        return np.column_stack([g[:, None] * table, g * g])

    out = expect_normal(integrand, breakpoints=breakpoints, policy=policy)
    coeffs = np.asarray(out[:-1], dtype=float)
    coeffs.setflags(write=False)
    return HermiteExpansion(coeffs, M, _detect_rank(coeffs, tol), tol, float(out[-1]))


def rank_of(expansion: HermiteExpansion) -> int:
    if expansion.rank is None:
        raise RankUndetectedError(f"rank undetected up to M={expansion.max_order}")
    return expansion.rank


def expand_sigma_alpha(vol: VolatilitySpec, alpha: float, M: int = DEFAULT_ORDER,
                       policy: QuadPolicy = DEFAULT_POLICY) -> HermiteExpansion:
    """Expansion of ``G(x) = sigma(x)**alpha``."""
    return expand(lambda x: vol(x) ** alpha, M, breakpoints=vol.kinks(), policy=policy)


def Gn(vol: VolatilitySpec, noise: NoiseSpec, u_n: float, s: float):
    """``x -> P(sigma(x) Z > (1 + s) u_n) / P(Z > u_n)`` as a vectorized callable."""
    level = (1.0 + s) * u_n
    denom = survival_z(noise, u_n)

    def g(x):
        sig = vol(x)
        with np.errstate(divide="ignore"):
            z = np.where(sig > 0, level / np.where(sig > 0, sig, 1.0), np.inf)
        return survival_z(noise, z) / denom

    return g


def expand_Gn(vol: VolatilitySpec, noise: NoiseSpec, u_n: float, s: float = 0.0,
              M: int = DEFAULT_ORDER, policy: QuadPolicy = DEFAULT_POLICY) -> HermiteExpansion:
    """Coefficients ``J_n(m, s)`` of :func:`Gn`."""
    if u_n <= 0:
        raise ValueError("u_n must be > 0")
    if s < 0:
        raise ValueError("s must be >= 0")
    bps = vol.kinks() + vol.crossings((1.0 + s) * u_n / noise.support_lower)
    return expand(Gn(vol, noise, u_n, s), M, breakpoints=bps, policy=policy)


def class_rank(vol, noise, u_n: float, s_values, M: int = DEFAULT_ORDER) -> int | None:
    """``q_n = min_s q_n(s)`` over the supplied s values (None if all vanish)."""
    ranks = [expand_Gn(vol, noise, u_n, float(s), M).rank for s in s_values]
    ranks = [r for r in ranks if r is not None]
    return min(ranks) if ranks else None


def _long_memory_exponent(lrd: LrdSpec, q: int) -> float:
    return 1.0 - 2.0 * q * (1.0 - lrd.hurst)


def variance_sum_prediction(lrd: LrdSpec, J_q: float, q: int, n: int, *,
                            triangular: bool = False) -> float:
    """Asymptotic ``var(sum_{j<=n} G(X_j))`` for rank-``q`` G with long memory.

    Returns ``J_q**2 / q! * n**2 rho_n**q / (1 - 2q(1-H))``.  With
    ``triangular=True`` the ``(1 - j/n)`` lag weights of the double sum are
    integrated too, which multiplies the value by ``1 / (1 - q(1-H))`` and
    gives the exact leading-order constant.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if lrd.hurst <= 0.5:
        raise RegimeError("short-memory regime: partial sums are N(0, Sigma_0^2) at rate sqrt(n)")
    expo = _long_memory_exponent(lrd, q)
    if expo <= 0.0:
        raise RegimeError(
            f"q(1-H) = {q * (1 - lrd.hurst):.4g} >= 1/2: short-memory/borderline regime, "
            "partial sums are N(0, Sigma_0^2) at rate sqrt(n)"
        )
    rho_n = autocov_asymptotic(lrd, n)
    out = J_q**2 / math.factorial(q) * n**2 * rho_n**q / expo
    if triangular:
        out /= 1.0 - q * (1.0 - lrd.hurst)
    return float(out)


def rozanov_cov(expansion: HermiteExpansion, rho, *, return_bound: bool = False, warn_tol: float = 1e-8):
    """``cov(G(X_0), G(X_k)) = sum_{m>=q} c_m**2 / m! rho**m`` truncated at M.

    The neglected tail is bounded by
    ``|rho|**(M+1) * (var G - sum_{1<=m<=M} c_m**2 / m!)``.  A
    :class:`TruncationWarning` is issued when that bound exceeds
    ``warn_tol``; with ``return_bound=True`` the bound is returned as well.
    """
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(np.abs(rho_arr) > 1.0):
        raise ValueError("|rho| must be <= 1")
    M = expansion.max_order
    m = np.arange(1, M + 1)
    w = np.asarray(expansion.coeffs[1:]) ** 2 / special_factorial(m)
    value = np.sum(w * rho_arr[..., None] ** m, axis=-1)
    resid = max(expansion.variance - float(np.sum(w)), 0.0)
    bound = np.abs(rho_arr) ** (M + 1) * resid
    if np.any(bound > warn_tol * max(1.0, expansion.variance)):
        warnings.warn(f"Rozanov series tail bound {np.max(bound):.2e} at M={M}", TruncationWarning)
    value = float(value) if value.ndim == 0 else value
    if return_bound:
        return value, (float(bound) if np.ndim(bound) == 0 else bound)
    return value


def exact_variance_sum(expansion: HermiteExpansion, lrd: LrdSpec, n: int) -> float:
    """Finite-n ``var(sum_{j<=n} G(X_j))`` from the exact autocovariance."""
    lags = np.arange(1, n)
    cov = rozanov_cov(expansion, autocov(lrd, lags))
    return float(n * expansion.variance + 2.0 * np.sum((n - lags) * cov))


def sigma0_squared(expansion: HermiteExpansion, lrd: LrdSpec, max_lag: int = 10**6) -> float:
    """Short-memory long-run variance ``var G + 2 sum_j cov(G(X_0), G(X_j))``.

    The series is summed up to ``max_lag``; it converges when q(1-H) > 1/2.
    """
    lags = np.arange(1, max_lag + 1)
    cov = rozanov_cov(expansion, autocov(lrd, lags))
    return float(expansion.variance + 2.0 * np.sum(cov))
