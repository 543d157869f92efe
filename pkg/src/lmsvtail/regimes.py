"""i.i.d.-zone / LRD-zone classification and related predictions.

For ``u_n = U(n/k)`` the deterministic-level tail empirical process behaves
like the i.i.d. case (rate ``sqrt(k)``) when ``k rho_n^q -> 0`` and picks up
the long-memory factor (rate ``rho_n^{-q/2}``) when ``k rho_n^q -> inf``.
At finite n the product is compared with two thresholds; values in between
are labelled ``borderline``.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .gauss_lrd import LrdSpec, autocov, autocov_asymptotic
from .hermite import HermiteExpansion, expand_Gn, expand_sigma_alpha, special_factorial
from .tails import NoiseSpec, VolatilitySpec, breiman_constant, limit_tail, survival_y, survival_z

THRESHOLD_LOW = 0.1
THRESHOLD_HIGH = 10.0
BORDERLINE_TOL = 1e-9

SIGMA0_NOTE = (
    "subordinated partial sums are short-memory: n^-1/2 sum G(X_j) -> N(0, Sigma_0^2), "
    "Sigma_0^2 = var G(X_0) + 2 sum_j cov(G(X_0), G(X_j))"
)


@dataclass(frozen=True)
class RegimeReport:
    n: int
    k: int
    hurst: float
    q: int
    rho_n: float
    product: float
    zone: str
    w_n: float
    borderline_flag: bool
    sigma0_note: str = ""

    def to_kv(self) -> str:
        lines = []
        for key, val in asdict(self).items():
            if isinstance(val, float):
                val = repr(val)
            lines.append(f"{key} = {val}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def csv_header() -> list[str]:
        return list(RegimeReport.__dataclass_fields__)

    def to_csv_row(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([repr(v) if isinstance(v, float) else v for v in asdict(self).values()])
        return buf.getvalue()


def classify(n: int, k: int, lrd: LrdSpec, q: int, *, threshold_low: float = THRESHOLD_LOW,
             threshold_high: float = THRESHOLD_HIGH, exact_rho: bool = False) -> RegimeReport:
    """Zone of ``(n, k, H, q)`` from ``k * rho_n**q``."""
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    if q < 1:
        raise ValueError("q must be >= 1")
    if not threshold_low <= threshold_high:
        raise ValueError("threshold_low must not exceed threshold_high")
    H = lrd.hurst
    sqrt_k = math.sqrt(k)
    if H <= 0.5:
        return RegimeReport(n, k, H, q, 0.0, 0.0, "iid", sqrt_k, False,
                            "weakly dependent Gaussian sequence; " + SIGMA0_NOTE)
    rho_n = float(autocov(lrd, n)) if exact_rho else float(autocov_asymptotic(lrd, n))
    product = k * rho_n**q
    memory = q * (1.0 - H)
    borderline = abs(memory - 0.5) < BORDERLINE_TOL
    if borderline:
        warnings.warn("q(1-H) = 1/2: borderline case, no limit law is claimed", RuntimeWarning)
        return RegimeReport(n, k, H, q, rho_n, product, "borderline", sqrt_k, True, SIGMA0_NOTE)
    if memory > 0.5:
        return RegimeReport(n, k, H, q, rho_n, product, "iid", sqrt_k, False, SIGMA0_NOTE)
    if product < threshold_low:
        zone, w_n = "iid", sqrt_k
    elif product > threshold_high:
        zone, w_n = "lrd", rho_n ** (-q / 2.0)
    else:
        zone, w_n = "borderline", sqrt_k
    return RegimeReport(n, k, H, q, rho_n, product, zone, w_n, False, "")


def covariance_prediction(s: float, t: float, n: int, u_n: float, vol: VolatilitySpec,
                          noise: NoiseSpec, lrd: LrdSpec,
                          expansion: HermiteExpansion | None = None,
                          fbar_un: float | None = None) -> float:
    """Two-term approximation of ``cov(T~_n(s), T~_n(t))``.

    ``T(s v t) / (n F(u_n)) + T(s) T(t) J(q)^2 rho_n^q / (q! (1 - 2q(1-H)) E[sigma^a]^2)``.
    The second term is dropped (with a warning) outside the long-memory
    regime or when ``sigma**alpha`` has no detectable rank.
    """
    alpha = noise.alpha
    if fbar_un is None:
        fbar_un = float(survival_y(vol, noise, u_n))
    first = limit_tail(alpha, max(s, t)) / (n * fbar_un)
    if vol.is_constant:
        return float(first)
    if expansion is None:
        expansion = expand_sigma_alpha(vol, alpha)
    q = expansion.rank
    if q is None:
        return float(first)
    H = lrd.hurst
    expo = 1.0 - 2.0 * q * (1.0 - H)
    if H <= 0.5 or expo <= 0.0:
        warnings.warn("short-memory regime: covariance prediction keeps the first term only",
                      RuntimeWarning)
        return float(first)
    rho_n = autocov_asymptotic(lrd, n)
    EsA = breiman_constant(vol, alpha)
    second = (limit_tail(alpha, s) * limit_tail(alpha, t) * expansion.J(q) ** 2 * rho_n**q
              / (math.factorial(q) * expo * EsA**2))
    return float(first + second)


@dataclass(frozen=True)
class Feasibility:
    lrd_zone_possible: bool
    threshold_h: float
    k_window: tuple[float, float] | None


def feasibility(beta: float, H: float) -> Feasibility:
    """Whether the LRD zone is compatible with a rate-``beta`` second-order bias.

    Possible iff ``H > (1 + beta) / (2 beta + 1)``; then ``k ~ n**psi`` with
    ``2(1-H) < psi < 1 - (1-H)/beta``.
    """
    if not 0.5 < H < 1.0:
        raise ValueError("H must lie in (1/2, 1)")
    if beta < 0:
        raise ValueError("beta must be >= 0")
    if beta == 0:
        return Feasibility(False, 1.0, None)
    if math.isinf(beta):
        threshold = 0.5
        window = (2.0 * (1.0 - H), 1.0)
    else:
        threshold = (1.0 + beta) / (2.0 * beta + 1.0)
        window = (2.0 * (1.0 - H), 1.0 - (1.0 - H) / beta)
    possible = H > threshold
    return Feasibility(possible, threshold, window if possible else None)


def iid_zone_exponent_bound(beta: float, H: float) -> float:
    """``2(1-H) v 2 beta / (2 beta + 1)``."""
    if not 0.5 < H < 1.0:
        raise ValueError("H must lie in (1/2, 1)")
    if not beta > 0:
        raise ValueError("beta must be > 0")
    bias = 1.0 if math.isinf(beta) else 2.0 * beta / (2.0 * beta + 1.0)
    return max(2.0 * (1.0 - H), bias)


def covariance_exact(s: float, t: float, n: int, u_n: float, vol: VolatilitySpec,
                     noise: NoiseSpec, lrd: LrdSpec, M: int = 12) -> float:
    """Finite-n ``cov(T~_n(s), T~_n(t))`` with ``fbar = P(Y > u_n)``.

    Uses the exact lag covariances of ``x -> P(Z > u_n(1+s)/sigma(x))`` from
    their Hermite coefficients (truncated at order M) instead of the
    asymptotic two-term form; no Breiman approximation is involved.
    """
    fbar = float(survival_y(vol, noise, u_n))
    fs = float(survival_y(vol, noise, u_n * (1.0 + s)))
    ft = float(survival_y(vol, noise, u_n * (1.0 + t)))
    fmax = float(survival_y(vol, noise, u_n * (1.0 + max(s, t))))
    first = (fmax - fs * ft) / (n * fbar**2)
    if vol.is_constant:
        return float(first)
    pz = float(survival_z(noise, u_n))
    a_s = np.asarray(expand_Gn(vol, noise, u_n, s, M).coeffs[1:]) * pz
    a_t = np.asarray(expand_Gn(vol, noise, u_n, t, M).coeffs[1:]) * pz
    m = np.arange(1, M + 1)
    w = a_s * a_t / special_factorial(m)
    lags = np.arange(1, n)
    rho = np.asarray(autocov(lrd, lags))
    cross = (rho[:, None] ** m[None, :]) @ w
    second = 2.0 * np.sum((n - lags) * cross) / (n**2 * fbar**2)
    return float(first + second)
