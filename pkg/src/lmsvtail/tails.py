"""Heavy-tailed noise, volatility functions and the tails they induce.

Noise families (all with survival 1 below ``support_lower``):

``pareto``
    ``P(Z > z) = c z**-alpha``.
``pareto_second_order``
    ``P(Z > z) = c z**-alpha * (1 + z**(-alpha*beta)) / 2``.  Its
    representation function ``eta(z) = -alpha*beta z**(-ab) / (1 + z**(-ab))``
    is bounded by ``alpha*beta * z**(-alpha*beta)``, so the rate function is
    ``power`` with index ``alpha*beta`` and constant ``alpha*beta``.
``log_perturbed``
    ``P(Z > z) = c z**-alpha log z`` on ``z >= support_lower``; the default
    ``c = alpha * e`` makes the survival equal 1 exactly at
    ``z = e**(1/alpha)``, where ``z**-alpha log z`` peaks.  Rate function
    ``1 / log z``.

``support_lower`` is derived: it is the point where the raw tail formula
reaches 1 on its decreasing branch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, special

from ._rng import substream
from .errors import QuadratureError, RootFindingError
from .quadrature import DEFAULT_POLICY, QuadPolicy, expect_normal

NOISE_FAMILIES = ("pareto", "pareto_second_order", "log_perturbed")


@dataclass(frozen=True)
class NoiseSpec:
    alpha: float
    family: str = "pareto"
    c: float | None = None
    beta: float | None = None

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.family not in NOISE_FAMILIES:
            raise ValueError(f"family must be one of {NOISE_FAMILIES}, got {self.family!r}")
        if self.family == "pareto_second_order":
            if self.beta is None or not self.beta > 0:
                raise ValueError("pareto_second_order needs beta > 0")
        if self.c is not None and not self.c > 0:
            raise ValueError("c must be > 0")
        if self.family == "log_perturbed" and self.scale < self.alpha * math.e:
            raise ValueError("log_perturbed needs c >= alpha * e for a proper survival function")

    @property
    def scale(self) -> float:
        if self.c is not None:
            return float(self.c)
        return self.alpha * math.e if self.family == "log_perturbed" else 1.0

    @property
    def gamma(self) -> float:
        return 1.0 / self.alpha

    def _raw(self, z):
        a, c = self.alpha, self.scale
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            if self.family == "pareto":
                return c * z ** (-a)
            if self.family == "pareto_second_order":
                return c * z ** (-a) * (1.0 + z ** (-a * self.beta)) * 0.5
            return c * z ** (-a) * np.log(z)

    @property
    def support_lower(self) -> float:
        return _support_lower(self)

    def rate_function(self) -> "RateFunction":
        if self.family == "pareto":
            return RateFunction("power", 0.0, 0.0)
        if self.family == "pareto_second_order":
            ab = self.alpha * self.beta
            return RateFunction("power", ab, ab)
        return RateFunction("inverse_log", 0.0, 1.0)


_SUPPORT_CACHE: dict = {}


def _support_lower(noise: NoiseSpec) -> float:
    key = (noise.alpha, noise.family, noise.scale, noise.beta)
    if key in _SUPPORT_CACHE:
        return _SUPPORT_CACHE[key]
    a, c = noise.alpha, noise.scale
    if noise.family == "pareto":
        z0 = c ** (1.0 / a)
    elif noise.family == "pareto_second_order" and c == 1.0:
        z0 = 1.0
    else:
        # decreasing branch starts at z_peak (log family) or 0 (power family)
        lo = math.exp(1.0 / a) if noise.family == "log_perturbed" else 1e-300
        if noise._raw(np.float64(lo)) <= 1.0 + 1e-12:
            z0 = lo
        else:
            hi = max(lo, 1.0) * 2.0
            while noise._raw(np.float64(hi)) > 1.0:
                hi *= 2.0
            z0 = optimize.brentq(
                lambda lz: math.log(noise._raw(np.float64(math.exp(lz)))),
                math.log(max(lo, hi / 2.0 ** 60)), math.log(hi), xtol=1e-15, rtol=1e-15,
            )
            z0 = math.exp(z0)
    _SUPPORT_CACHE[key] = z0
    return z0


VOL_FAMILIES = ("exp_scaled", "tabulated")


@dataclass(frozen=True)
class VolatilitySpec:
    """Deterministic volatility ``sigma``; ``exp_scaled`` is ``exp(tau * x)``.

    ``tabulated`` interpolates linearly between ``table_x`` and clamps to the
    end values outside the table.
    """

    family: str = "exp_scaled"
    tau: float = 1.0
    table_x: tuple = field(default=())
    table_sigma: tuple = field(default=())

    def __post_init__(self):
        if self.family not in VOL_FAMILIES:
            raise ValueError(f"family must be one of {VOL_FAMILIES}")
        if self.family == "exp_scaled":
            if self.tau < 0:
                raise ValueError("tau must be >= 0")
        else:
            xs, ss = np.asarray(self.table_x, float), np.asarray(self.table_sigma, float)
            if xs.ndim != 1 or len(xs) < 2 or xs.shape != ss.shape:
                raise ValueError("tabulated sigma needs matching 1-d grids of length >= 2")
            if np.any(np.diff(xs) <= 0):
                raise ValueError("table_x must be strictly increasing")
            if np.any(ss < 0):
                raise ValueError("sigma must be nonnegative")

    @classmethod
    def exp(cls, tau: float) -> "VolatilitySpec":
        return cls("exp_scaled", float(tau))

    @classmethod
    def table(cls, xs, sigmas) -> "VolatilitySpec":
        return cls("tabulated", 0.0, tuple(float(v) for v in xs), tuple(float(v) for v in sigmas))

    @property
    def is_constant(self) -> bool:
        if self.family == "exp_scaled":
            return self.tau == 0.0
        return len(set(self.table_sigma)) == 1

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.family == "exp_scaled":
            return np.exp(self.tau * x)
        return np.interp(x, self.table_x, self.table_sigma)

    def kinks(self) -> tuple:
        return tuple(self.table_x) if self.family == "tabulated" else ()

    def crossings(self, level: float) -> tuple:
        """Points x where sigma(x) = level (transversal crossings only)."""
        if level <= 0:
            return ()
        if self.family == "exp_scaled":
            return (math.log(level) / self.tau,) if self.tau > 0 else ()
        xs, ss = self.table_x, self.table_sigma
        out = []
        for i in range(len(xs) - 1):
            s0, s1 = ss[i], ss[i + 1]
            if s0 != s1 and min(s0, s1) < level < max(s0, s1):
                out.append(xs[i] + (level - s0) * (xs[i + 1] - xs[i]) / (s1 - s0))
        return tuple(out)


@dataclass(frozen=True)
class RateFunction:
    """Second-order rate ``eta*``: ``C t**-alpha_beta`` or ``1 / log t``."""

    form: str
    alpha_beta: float = 0.0
    C: float = 1.0

    def __post_init__(self):
        if self.form not in ("power", "inverse_log"):
            raise ValueError("form must be 'power' or 'inverse_log'")
        if self.alpha_beta < 0:
            raise ValueError("alpha_beta must be >= 0")


def eta_star(rate: RateFunction, t):
    """Evaluate the rate function; ``inverse_log`` is defined for ``t >= e``."""
    t = np.asarray(t, dtype=float)
    if rate.form == "power":
        out = rate.C * np.maximum(t, 1.0) ** (-rate.alpha_beta)
    else:
        if np.any(t < math.e):
            raise ValueError("inverse_log rate is defined for t >= e")
        out = 1.0 / np.log(t)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TailGrid:
    s_values: np.ndarray
    layout: str = "log"

    def __post_init__(self):
        s = np.asarray(self.s_values, dtype=float)
        if s.ndim != 1 or len(s) < 1 or s[0] != 0.0:
            raise ValueError("grid must start at s = 0")
        if np.any(np.diff(s) <= 0):
            raise ValueError("grid must be strictly increasing")
        object.__setattr__(self, "s_values", s)

    @property
    def s_max(self) -> float:
        return float(self.s_values[-1])

    def __len__(self):
        return len(self.s_values)

    @classmethod
    def linear(cls, s_max: float, size: int) -> "TailGrid":
        return cls(np.linspace(0.0, s_max, size), "linear")

    @classmethod
    def log_spaced(cls, s_max: float, size: int = 512, s_min: float = 1e-3) -> "TailGrid":
        return cls(np.concatenate([[0.0], np.geomspace(s_min, s_max, size - 1)]), "log")

    @classmethod
    def default(cls, alpha: float, size: int = 512) -> "TailGrid":
        """512 log-spaced points with ``(1 + s_max)**-alpha < 1e-6``."""
        s_max = 2.0 * 1e6 ** (1.0 / alpha)
        return cls.log_spaced(s_max, size)


# -- noise ---------------------------------------------------------------


def survival_z(noise: NoiseSpec, z):
    """``P(Z > z)``; vectorized."""
    z = np.asarray(z, dtype=float)
    z0 = noise.support_lower
    out = np.where(z <= z0, 1.0, noise._raw(np.where(z <= z0, z0, z)))
    out = np.minimum(out, 1.0)
    return float(out) if out.ndim == 0 else out


def inverse_survival_z(noise: NoiseSpec, u):
    """The z with ``P(Z > z) = u`` for u in (0, 1]; vectorized."""
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u > 1)):
        raise ValueError("u must lie in (0, 1]")
    a, c = noise.alpha, noise.scale
    if noise.family == "pareto":
        out = (c / u) ** (1.0 / a)
        return float(out) if out.ndim == 0 else out
    if noise.family == "pareto_second_order" and noise.beta == 1.0:
        # c w (1 + w) / 2 = u with w = z**-alpha
        w = (-1.0 + np.sqrt(1.0 + 8.0 * u / c)) / 2.0
        out = w ** (-1.0 / a)
        return float(out) if out.ndim == 0 else out
    return _bisect_inverse(noise, u)


def _bisect_inverse(noise: NoiseSpec, u: np.ndarray):
    z0 = noise.support_lower
    flat = np.atleast_1d(u).astype(float)
    lo = np.full(flat.shape, math.log(z0))
    # the raw tails are bounded above by c z**-alpha * max(1, log z), so this bracket suffices
    hi = np.log(z0) + (np.log(noise.scale / flat) + 50.0) / noise.alpha + 50.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        above = survival_z(noise, np.exp(mid)) > flat
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    out = np.exp(0.5 * (lo + hi))
    resid = np.abs(np.atleast_1d(survival_z(noise, out)) - flat) / flat
    bad = (resid > 1e-9) & (flat < 1.0)
    if np.any(bad):
        raise RootFindingError(f"inverse survival did not converge (max rel residual {resid.max():.2e})")
    out = np.where(flat >= 1.0, z0, out)
    return float(out[0]) if np.ndim(u) == 0 else out.reshape(np.shape(u))


def sample_z(noise: NoiseSpec, n: int, seed) -> np.ndarray:
    """i.i.d. draws by inverse transform of uniforms in (0, 1]."""
    rng = substream(seed)
    u = 1.0 - rng.random(n)  # (0, 1]
    return np.asarray(inverse_survival_z(noise, u), dtype=float)


def limit_tail(alpha: float, s):
    """``T(s) = (1 + s)**-alpha``."""
    s = np.asarray(s, dtype=float)
    out = (1.0 + s) ** (-alpha)
    return float(out) if out.ndim == 0 else out


# -- Y = sigma(X) Z ------------------------------------------------------


def breiman_constant(vol: VolatilitySpec, alpha: float, policy: QuadPolicy = DEFAULT_POLICY) -> float:
    """``E[sigma(X)**alpha]`` for X standard normal."""
    if vol.is_constant:
        return float(vol(0.0)) ** alpha
    return float(expect_normal(lambda x: vol(x) ** alpha, breakpoints=vol.kinks(), policy=policy))


def _survival_y_scalar(vol, noise, y, policy):
    if vol.is_constant:
        sig = float(vol(0.0))
        return survival_z(noise, y / sig) if sig > 0 else 0.0
    z0 = noise.support_lower
    bps = vol.kinks() + vol.crossings(y / z0)

    def integrand(x):
        sig = vol(x)
        with np.errstate(divide="ignore"):
            z = np.where(sig > 0, y / np.where(sig > 0, sig, 1.0), np.inf)
        return survival_z(noise, z)

    return float(expect_normal(integrand, breakpoints=bps, policy=policy))


def survival_y(vol: VolatilitySpec, noise: NoiseSpec, y, policy: QuadPolicy = DEFAULT_POLICY):
    """Exact ``P(sigma(X) Z > y) = E[P(Z > y / sigma(X))]`` by quadrature."""
    if np.ndim(y) == 0:
        if y <= 0:
            raise ValueError("y must be > 0")
        return _survival_y_scalar(vol, noise, float(y), policy)
    ys = np.asarray(y, dtype=float)
    if np.any(ys <= 0):
        raise ValueError("y must be > 0")
    return np.array([_survival_y_scalar(vol, noise, float(v), policy) for v in ys.ravel()]).reshape(ys.shape)


def quantile_u(vol: VolatilitySpec, noise: NoiseSpec, t: float, policy: QuadPolicy = DEFAULT_POLICY) -> float:
    """``U(t) = F^{<-}(1 - 1/t)``: the level with ``P(Y > U(t)) = 1/t``."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if vol.is_constant:
        sig = float(vol(0.0))
        return sig * inverse_survival_z(noise, 1.0 / t)
    if t == 1.0:
        return 0.0
    target = -math.log(t)

    def g(v):
        return math.log(_survival_y_scalar(vol, noise, math.exp(v), policy)) - target

    # initial guess from the Breiman approximation, then widen the bracket
    try:
        scale = breiman_constant(vol, noise.alpha, policy) ** (1.0 / noise.alpha)
    except QuadratureError:
        scale = 1.0
    v0 = math.log(max(scale * inverse_survival_z(noise, min(1.0, 1.0 / t)), 1e-300))
    lo, hi = v0 - 1.0, v0 + 1.0
    for _ in range(200):
        if g(lo) > 0:
            break
        lo -= 2.0
    else:
        raise RootFindingError(f"could not bracket U({t}) from below")
    for _ in range(200):
        if g(hi) < 0:
            break
        hi += 2.0
    else:
        raise RootFindingError(f"could not bracket U({t}) from above")
    v = optimize.brentq(g, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)
    u = math.exp(v)
    resid = abs(_survival_y_scalar(vol, noise, u, policy) * t - 1.0)
    if resid > 1e-10:
        raise RootFindingError(f"U({t}) root residual {resid:.2e} exceeds 1e-10")
    return u


def conditional_tail_Tn(vol, noise, u_n: float, s, policy: QuadPolicy = DEFAULT_POLICY):
    """``T_n(s) = P(Y > u_n (1 + s)) / P(Y > u_n)``; vectorized over ``s``."""
    if u_n <= 0:
        raise ValueError("u_n must be > 0")
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0):
        raise ValueError("s must be >= 0")
    base = survival_y(vol, noise, u_n, policy)
    out = np.asarray(survival_y(vol, noise, u_n * (1.0 + s_arr), policy)) / base
    out = np.where(s_arr == 0.0, 1.0, out)
    return float(out) if out.ndim == 0 else out


def sup_norm_Tn_minus_T(vol, noise, u_n: float, grid: TailGrid | None = None,
                        policy: QuadPolicy = DEFAULT_POLICY) -> float:
    """``max_s |T_n(s) - T(s)|`` over ``grid`` (default :meth:`TailGrid.default`)."""
    if grid is None:
        grid = TailGrid.default(noise.alpha)
    tn = conditional_tail_Tn(vol, noise, u_n, grid.s_values, policy)
    return float(np.max(np.abs(tn - limit_tail(noise.alpha, grid.s_values))))


def normal_sf(x):
    return special.ndtr(-np.asarray(x, dtype=float))
