"""Monte Carlo harness: Hill MSE curves, Hill plots and limit-law checks.

Every replication ``r`` draws its Gaussian sequence and its noise from the
substreams ``(master_seed, r, 0)`` and ``(master_seed, r, 1)``.  The same
replication index is used for every ``(alpha, d)`` cell, so cells are
compared on common random numbers, and results do not depend on the number
of workers because per-replication outputs are reduced in index order.

Statistic rows carry a Monte Carlo standard error.  For means it is
``sd / sqrt(reps)``; for variances and covariances it is the same formula
applied to the centered squares / cross products; correlations use
``(1 - r**2) / sqrt(reps)`` and medians ``1.2533 * (IQR / 1.349) / sqrt(reps)``.
"""
from __future__ import annotations

import csv
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import svg
from .config import ExperimentConfig
from .errors import NumericalError, RegimeError
from ._rng import STREAM_GAUSS, substream
from .gauss_lrd import LrdSpec, autocov_asymptotic, simulate_values
from .hermite import (
    exact_variance_sum,
    expand,
    expand_sigma_alpha,
    sigma0_squared,
    variance_sum_prediction,
)
from .regimes import classify, covariance_exact, covariance_prediction
from .tails import NoiseSpec, VolatilitySpec, conditional_tail_Tn, limit_tail, quantile_u
from .tep import hill_path, random_level_tep, simulate_sample, tail_empirical

log = logging.getLogger(__name__)

CSV_COLUMNS = ("experiment", "alpha", "d", "tau", "n", "k", "stat", "value", "se", "reps")
MAX_FAILURE_FRACTION = 0.01
D_COLORS = ("black", "blue", "red", "green", "orange", "purple", "brown", "gray")


class ExperimentError(NumericalError):
    """Too many replications failed numerically."""
    pass


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    alpha: float
    d: float
    tau: float
    n: int
    k: int
    stat: str
    value: float
    se: float
    reps: int

    def same_as(self, other: "ResultRow") -> bool:
        for name in CSV_COLUMNS:
            a, b = getattr(self, name), getattr(other, name)
            if isinstance(a, float) and math.isnan(a):
                if not (isinstance(b, float) and math.isnan(b)):
                    return False
            elif a != b:
                return False
        return True


@dataclass
class ResultTable:
    rows: list = field(default_factory=list)

    def add(self, *args, **kwargs) -> None:
        self.rows.append(ResultRow(*args, **kwargs))

    def extend(self, other: "ResultTable") -> None:
        self.rows.extend(other.rows)

    def select(self, **criteria) -> list:
        out = []
        for r in self.rows:
            if all(_match(getattr(r, k), v) for k, v in criteria.items()):
                out.append(r)
        return out

    def value(self, **criteria) -> float:
        rows = self.select(**criteria)
        if len(rows) != 1:
            raise KeyError(f"{len(rows)} rows match {criteria}")
        return rows[0].value

    def row(self, **criteria) -> ResultRow:
        rows = self.select(**criteria)
        if len(rows) != 1:
            raise KeyError(f"{len(rows)} rows match {criteria}")
        return rows[0]

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def equals(self, other: "ResultTable") -> bool:
        return len(self) == len(other) and all(a.same_as(b) for a, b in zip(self, other))


def _match(a, b) -> bool:
    if isinstance(a, float) and isinstance(b, (int, float)):
        return math.isclose(a, b, rel_tol=0, abs_tol=1e-12)
    return a == b


def stat_name(base: str, **params) -> str:
    if not params:
        return base
    inner = ",".join(f"{k}={_fmt_param(v)}" for k, v in params.items())
    return f"{base}[{inner}]"


def _fmt_param(v) -> str:
    return f"{v:g}" if isinstance(v, float) else str(v)


# -- Monte Carlo summaries ----------------------------------------------------


def mean_se(x, axis=0):
    x = np.asarray(x, dtype=float)
    R = x.shape[axis]
    return x.mean(axis=axis), x.std(axis=axis, ddof=1) / math.sqrt(R) if R > 1 else np.nan


def var_se(x, axis=0):
    x = np.asarray(x, dtype=float)
    R = x.shape[axis]
    dev2 = (x - x.mean(axis=axis, keepdims=True)) ** 2
    val = dev2.sum(axis=axis) / (R - 1) if R > 1 else np.zeros(dev2.shape[1:])
    se = dev2.std(axis=axis, ddof=1) / math.sqrt(R) if R > 1 else np.nan
    return val, se


def cov_se(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    R = len(a)
    prod = (a - a.mean()) * (b - b.mean())
    return float(prod.sum() / (R - 1)), float(prod.std(ddof=1) / math.sqrt(R))


def corr_se(a, b):
    r = float(np.corrcoef(a, b)[0, 1])
    return r, (1.0 - r * r) / math.sqrt(len(a))


def median_se(x):
    x = np.asarray(x, dtype=float)
    q1, med, q3 = np.percentile(x, [25, 50, 75])
    return float(med), 1.2533 * (q3 - q1) / 1.349 / math.sqrt(len(x))


# -- replication driver -------------------------------------------------------


def _run_replications(func, cfg: ExperimentConfig, payload) -> list:
    """Evaluate ``func(payload, rep)`` for every replication, in index order.

    Failed replications are logged and returned as None; more than 1% failures
    abort the run.
    """
    reps = range(cfg.replications)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_guarded, [func] * len(reps), [payload] * len(reps), reps,
                                    chunksize=max(1, len(reps) // (4 * cfg.workers))))
    else:
        results = [_guarded(func, payload, r) for r in reps]
    failures = [r for r, res in zip(reps, results) if isinstance(res, _Failure)]
    for r in failures:
        log.warning("replication %d failed: %s", r, results[r].message)
    if len(failures) > MAX_FAILURE_FRACTION * cfg.replications:
        raise ExperimentError(
            f"{len(failures)} of {cfg.replications} replications failed (limit 1%); "
            f"first error: {results[failures[0]].message}"
        )
    return [None if isinstance(res, _Failure) else res for res in results]


@dataclass
class _Failure:
    message: str


def _guarded(func, payload, rep):
    try:
        return func(payload, rep)
    except (NumericalError, ValueError, FloatingPointError, ArithmeticError) as exc:
        return _Failure(f"{type(exc).__name__}: {exc}")


def _stack(results):
    ok = [r for r in results if r is not None]
    return np.stack(ok), len(results) - len(ok)


def _lrd(cfg: ExperimentConfig, d: float) -> LrdSpec:
    return LrdSpec.from_d(d, cfg.generator)


def _noise(cfg: ExperimentConfig, alpha: float) -> NoiseSpec:
    beta = cfg.beta if cfg.noise_family == "pareto_second_order" else None
    return NoiseSpec(alpha, cfg.noise_family, beta=beta)


# -- MSE of the Hill estimator ------------------------------------------------


def _mse_rep(payload, rep):
    cfg, kmax = payload
    vol = VolatilitySpec.exp(cfg.tau)
    k_idx = np.asarray(cfg.k_grid) - 1
    out = np.empty((len(cfg.alpha_grid), len(cfg.d_grid), len(cfg.k_grid)))
    for i, a in enumerate(cfg.alpha_grid):
        noise = _noise(cfg, a)
        for j, d in enumerate(cfg.d_grid):
            sample = simulate_sample(_lrd(cfg, d), noise, vol, cfg.n, cfg.master_seed, rep)
            out[i, j] = hill_path(sample.y, kmax)[k_idx]
    return out


def run_mse(cfg: ExperimentConfig) -> ResultTable:
    """MSE of the Hill estimator around ``1/alpha`` as a function of k."""
    cfg = cfg.validated()
    results = _run_replications(_mse_rep, cfg, (cfg, max(cfg.k_grid)))
    hills, failed = _stack(results)
    R = hills.shape[0]
    table = ResultTable()
    for i, a in enumerate(cfg.alpha_grid):
        for j, d in enumerate(cfg.d_grid):
            err2 = (hills[:, i, j, :] - 1.0 / a) ** 2
            mse, mse_se = mean_se(err2)
            mh, mh_se = mean_se(hills[:, i, j, :])
            for kk, k in enumerate(cfg.k_grid):
                table.add("mse", a, d, cfg.tau, cfg.n, k, "mse", float(mse[kk]), float(mse_se[kk]), R)
                table.add("mse", a, d, cfg.tau, cfg.n, k, "mean_hill", float(mh[kk]), float(mh_se[kk]), R)
            table.add("mse", a, d, cfg.tau, cfg.n, 0, "failed_reps", float(failed), 0.0, cfg.replications)
    return table


# -- Hill plots ---------------------------------------------------------------


def run_hill_plot(cfg: ExperimentConfig) -> ResultTable:
    """Single-path Hill traces for the noise alone and for Y, per d."""
    cfg = cfg.validated()
    vol = VolatilitySpec.exp(cfg.tau)
    kmax = max(cfg.k_grid)
    k_idx = np.asarray(cfg.k_grid) - 1
    table = ResultTable()
    nan = float("nan")
    for a in cfg.alpha_grid:
        noise = _noise(cfg, a)
        for d in cfg.d_grid:
            sample = simulate_sample(_lrd(cfg, d), noise, vol, cfg.n, cfg.master_seed, 0)
            hz = hill_path(sample.latent_z, kmax)[k_idx]
            hy = hill_path(sample.y, kmax)[k_idx]
            for kk, k in enumerate(cfg.k_grid):
                table.add("hill_plot", a, d, cfg.tau, cfg.n, k, "hill_z", float(hz[kk]), nan, 1)
                table.add("hill_plot", a, d, cfg.tau, cfg.n, k, "hill_y", float(hy[kk]), nan, 1)
    return table


# -- variance of subordinated sums --------------------------------------------


def _g_function(cfg: ExperimentConfig):
    tau = cfg.tau
    if cfg.g_family == "exp":
        return lambda x: np.exp(tau * x)
    return lambda x: np.cosh(tau * x)


def _variance_rep(payload, rep):
    cfg, d = payload
    x = simulate_values(_lrd(cfg, d), cfg.n, substream(cfg.master_seed, rep, STREAM_GAUSS))
    csum = np.cumsum(_g_function(cfg)(x))
    return csum[np.asarray(cfg.n_grid) - 1]


def run_variance_scaling(cfg: ExperimentConfig) -> ResultTable:
    """Measured ``var(sum_{j<=n} G(X_j))`` against the long-memory prediction.

    Partial sums for every n in ``n_grid`` come from prefixes of one path of
    length ``n``.  Outside the long-memory regime the prediction is refused
    and ``var / n`` is compared with the long-run variance ``Sigma_0^2``.
    """
    cfg = cfg.validated()
    table = ResultTable()
    expansion = expand(_g_function(cfg))
    q = expansion.rank
    if q is None:
        raise ExperimentError("G has no detectable Hermite rank")
    for d in cfg.d_grid:
        lrd = _lrd(cfg, d)
        sums, failed = _stack(_run_replications(_variance_rep, cfg, (cfg, d)))
        R = sums.shape[0]
        var, se = var_se(sums)
        try:
            variance_sum_prediction(lrd, expansion.J(q), q, cfg.n)
            long_memory = True
        except RegimeError as exc:
            log.info("prediction refused for d=%g: %s", d, exc)
            long_memory = False
        sig0 = None if long_memory else sigma0_squared(expansion, lrd, max_lag=10**6)
        for i, m in enumerate(cfg.n_grid):
            row = dict(experiment="variance_scaling", alpha=float("nan"), d=d, tau=cfg.tau, n=m, k=0, reps=R)
            table.add(**row, stat="var_sum", value=float(var[i]), se=float(se[i]))
            table.add(**row, stat="exact_var_sum", value=exact_variance_sum(expansion, lrd, m), se=0.0)
            if long_memory:
                pred = variance_sum_prediction(lrd, expansion.J(q), q, m)
                tri = variance_sum_prediction(lrd, expansion.J(q), q, m, triangular=True)
                table.add(**row, stat="pred_var_sum", value=pred, se=0.0)
                table.add(**row, stat="ratio", value=float(var[i] / pred), se=float(se[i] / pred))
                table.add(**row, stat="ratio_triangular", value=float(var[i] / tri), se=float(se[i] / tri))
            else:
                table.add(**row, stat="var_over_n", value=float(var[i] / m), se=float(se[i] / m))
                table.add(**row, stat="sigma0_sq", value=sig0, se=0.0)
        table.add("variance_scaling", float("nan"), d, cfg.tau, cfg.n, 0, "failed_reps",
                  float(failed), 0.0, cfg.replications)
    return table


# -- tail empirical process limits ----------------------------------------------


def _tep_rep(payload, rep):
    cfg, lrd, noise, vol, k, u_n, Tn = payload
    sample = simulate_sample(lrd, noise, vol, cfg.n, cfg.master_seed, rep)
    s = np.asarray(cfg.s_grid, dtype=float)
    det = tail_empirical(sample, u_n, k / cfg.n, s, Tn=Tn)
    rnd = random_level_tep(sample, k, s, alpha=noise.alpha)
    return np.stack([det.tilde_T, det.centered, rnd.centered])


def _tep_cell(cfg, alpha, d, k):
    lrd = _lrd(cfg, d)
    noise = _noise(cfg, alpha)
    vol = VolatilitySpec.exp(cfg.tau)
    u_n = quantile_u(vol, noise, cfg.n / k)
    Tn = conditional_tail_Tn(vol, noise, u_n, np.asarray(cfg.s_grid, dtype=float))
    stacked, failed = _stack(_run_replications(_tep_rep, cfg, (cfg, lrd, noise, vol, k, u_n, Tn)))
    return lrd, noise, vol, u_n, stacked, failed


def _zone(cfg, lrd: LrdSpec, k: int, alpha: float, n: int | None = None):
    # sigma^alpha = exp(alpha tau x) has rank 1 for tau > 0; tau = 0 has no
    # subordinated part, so q = 1 is a harmless placeholder there.
    q = expand_sigma_alpha(VolatilitySpec.exp(cfg.tau), alpha).rank or 1
    return classify(n or cfg.n, k, lrd, q)


def run_tep_limit(cfg: ExperimentConfig) -> ResultTable:
    """Moments of the scaled deterministic- and random-level processes."""
    cfg = cfg.validated()
    table = ResultTable()
    s_grid = [float(s) for s in cfg.s_grid]
    for a in cfg.alpha_grid:
        for d in cfg.d_grid:
            for k in cfg.k_grid:
                lrd, noise, vol, u_n, st, failed = _tep_cell(cfg, a, d, k)
                R = st.shape[0]
                rep = _zone(cfg, lrd, k, a)
                base = dict(experiment="tep_limit", alpha=a, d=d, tau=cfg.tau, n=cfg.n, k=k, reps=R)
                table.add(**base, stat="product", value=rep.product, se=0.0)
                table.add(**base, stat="zone_lrd", value=float(rep.zone == "lrd"), se=0.0)
                table.add(**base, stat="w_n", value=rep.w_n, se=0.0)
                e_n, e_hat = st[:, 1, :], st[:, 2, :]
                sk = math.sqrt(k)
                for i, s in enumerate(s_grid):
                    v, se = var_se(rep.w_n * e_n[:, i])
                    table.add(**base, stat=stat_name("var_wn_en", s=s), value=float(v), se=float(se))
                    v, se = var_se(sk * e_n[:, i])
                    table.add(**base, stat=stat_name("var_sqrtk_en", s=s), value=float(v), se=float(se))
                    v, se = var_se(sk * e_hat[:, i])
                    table.add(**base, stat=stat_name("var_sqrtk_ehat", s=s), value=float(v), se=float(se))
                    m, se = mean_se(e_n[:, i])
                    table.add(**base, stat=stat_name("mean_en", s=s), value=float(m), se=float(se))
                    table.add(**base, stat=stat_name("T", s=s), value=limit_tail(a, s), se=0.0)
                i0 = s_grid.index(0.0) if 0.0 in s_grid else None
                if i0 is not None:
                    for i, s in enumerate(s_grid):
                        if s == 0.0:
                            continue
                        r, se = corr_se(e_n[:, i], e_n[:, i0])
                        table.add(**base, stat=stat_name("corr_en_en0", s=s), value=r, se=se)
                        with np.errstate(divide="ignore", invalid="ignore"):
                            ratio = e_n[:, i] / e_n[:, i0]
                        ratio = ratio[np.isfinite(ratio)]
                        med, se = median_se(ratio)
                        table.add(**base, stat=stat_name("median_ratio_en_en0", s=s), value=med, se=se)
                table.add(**base, stat="failed_reps", value=float(failed), se=0.0)
    return table


# -- covariance heuristic -------------------------------------------------------


def run_covariance_check(cfg: ExperimentConfig) -> ResultTable:
    """MC covariance of ``(T~_n(s), T~_n(t))`` on ``s_grid x s_grid`` vs predictions."""
    cfg = cfg.validated()
    table = ResultTable()
    s_grid = [float(s) for s in cfg.s_grid]
    for a in cfg.alpha_grid:
        for d in cfg.d_grid:
            for k in cfg.k_grid:
                lrd, noise, vol, u_n, st, failed = _tep_cell(cfg, a, d, k)
                R = st.shape[0]
                tilde = st[:, 0, :]
                base = dict(experiment="covariance_check", alpha=a, d=d, tau=cfg.tau, n=cfg.n, k=k, reps=R)
                for i, s in enumerate(s_grid):
                    for j, t in enumerate(s_grid):
                        c, se = cov_se(tilde[:, i], tilde[:, j])
                        pred = covariance_prediction(s, t, cfg.n, u_n, vol, noise, lrd, fbar_un=k / cfg.n)
                        exact = covariance_exact(s, t, cfg.n, u_n, vol, noise, lrd)
                        table.add(**base, stat=stat_name("cov_mc", s=s, t=t), value=c, se=se)
                        table.add(**base, stat=stat_name("cov_pred", s=s, t=t), value=pred, se=0.0)
                        table.add(**base, stat=stat_name("cov_exact", s=s, t=t), value=exact, se=0.0)
                table.add(**base, stat="failed_reps", value=float(failed), se=0.0)
    return table


# -- random versus deterministic levels -----------------------------------------


def _rate_rep(payload, rep):
    cfg, lrd, noise, vol, n, k, u_n, Tn = payload
    sample = simulate_sample(lrd, noise, vol, n, cfg.master_seed, rep)
    s = np.asarray(cfg.s_grid, dtype=float)
    det = tail_empirical(sample, u_n, k / n, s, Tn=Tn)
    rnd = random_level_tep(sample, k, s, alpha=noise.alpha)
    return np.stack([det.centered, rnd.centered])


def run_random_level_rate(cfg: ExperimentConfig) -> ResultTable:
    """Deterministic versus random levels across d, plus the LRD-zone n sweep.

    The first part uses ``(n, k)`` from the config.  The sweep keeps ``k/n``
    fixed along ``n_grid`` and reports ``var(rho_n^{-q/2} e^*_n(s))``.
    """
    cfg = cfg.validated()
    table = ResultTable()
    s_grid = [float(s) for s in cfg.s_grid]
    k0 = cfg.k_grid[0]
    for a in cfg.alpha_grid:
        noise = _noise(cfg, a)
        vol = VolatilitySpec.exp(cfg.tau)
        for d in cfg.d_grid:
            lrd = _lrd(cfg, d)
            sizes = {cfg.n: k0}
            if d > 0:
                sizes.update({m: max(1, round(k0 * m / cfg.n)) for m in cfg.n_grid})
            sizes = sorted(sizes.items())
            for n, k in sizes:
                u_n = quantile_u(vol, noise, n / k)
                Tn = conditional_tail_Tn(vol, noise, u_n, np.asarray(s_grid))
                st, failed = _stack(_run_replications(
                    _rate_rep, cfg, (cfg, lrd, noise, vol, n, k, u_n, Tn)))
                R = st.shape[0]
                rep = _zone(cfg, lrd, k, a, n)
                base = dict(experiment="random_level_rate", alpha=a, d=d, tau=cfg.tau, n=n, k=k, reps=R)
                table.add(**base, stat="product", value=rep.product, se=0.0)
                for i, s in enumerate(s_grid):
                    v, se = var_se(math.sqrt(k) * st[:, 1, i])
                    table.add(**base, stat=stat_name("var_sqrtk_ehat", s=s), value=float(v), se=float(se))
                    v, se = var_se(math.sqrt(k) * st[:, 0, i])
                    table.add(**base, stat=stat_name("var_sqrtk_en", s=s), value=float(v), se=float(se))
                    v, se = var_se(rep.w_n * st[:, 0, i])
                    table.add(**base, stat=stat_name("var_wn_en", s=s), value=float(v), se=float(se))
                    if d > 0:
                        scale = autocov_asymptotic(lrd, n) ** (-rep.q / 2.0)
                        v, se = var_se(scale * st[:, 1, i])
                        table.add(**base, stat=stat_name("var_rho_ehat", s=s), value=float(v), se=float(se))
                table.add(**base, stat="failed_reps", value=float(failed), se=0.0)
    return table


RUNNERS = {
    "mse": run_mse,
    "hill_plot": run_hill_plot,
    "variance_scaling": run_variance_scaling,
    "tep_limit": run_tep_limit,
    "covariance_check": run_covariance_check,
    "random_level_rate": run_random_level_rate,
}


def run(cfg: ExperimentConfig) -> ResultTable:
    return RUNNERS[cfg.experiment_kind](cfg)


# -- output -----------------------------------------------------------------------


def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


def write_csv(table: ResultTable, path) -> None:
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for r in table:
                w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def read_csv(path) -> ResultTable:
    table = ResultTable()
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected header {header}")
        for rec in reader:
            e, a, d, tau, n, k, stat, value, se, reps = rec
            table.add(e, float(a), float(d), float(tau), int(n), int(k), stat,
                      float(value), float(se), int(reps))
    return table


def _svg_panels(table: ResultTable):
    """Group plottable rows into panels ``(experiment, alpha, tau, label) -> series``."""
    panels: dict = {}
    for r in table:
        if r.experiment == "mse" and r.stat == "mse":
            key = (r.experiment, r.alpha, r.tau, "")
        elif r.experiment == "hill_plot" and r.stat == "hill_y":
            key = (r.experiment, r.alpha, r.tau, "")
        elif r.experiment == "hill_plot" and r.stat == "hill_z":
            key = (r.experiment, r.alpha, "iid", "")
        else:
            continue
        series = panels.setdefault(key, {})
        series.setdefault(r.d, []).append((r.k, r.value))
    return panels


def emit(table: ResultTable, fmt: str, output_dir, name: str | None = None) -> list:
    """Write the table as CSV or as SVG line charts; returns written paths."""
    os.makedirs(output_dir, exist_ok=True)
    written = []
    if fmt == "csv":
        stem = name or (table.rows[0].experiment if len(table) else "results")
        path = os.path.join(output_dir, f"{stem}.csv")
        write_csv(table, path)
        written.append(path)
    elif fmt == "svg":
        for (exp, alpha, tau, _), series in sorted(_svg_panels(table).items(), key=lambda kv: str(kv[0])):
            if exp == "hill_plot" and tau == "iid":
                # the noise trace does not depend on d; plot it once
                first = sorted(series)[0]
                series = {first: series[first]}
                labels = {first: "Pareto i.i.d."}
                fname = f"{exp}_{alpha:g}_iid.svg"
                ylabel = "Hill estimate (noise)"
            else:
                labels = {d: f"d={d:g}" for d in series}
                fname = f"{exp}_{alpha:g}_{tau:g}.svg"
                ylabel = "MSE" if exp == "mse" else "Hill estimate"
            ordered = sorted(series)
            lines = [
                svg.Series(labels[d], sorted(series[d]), D_COLORS[i % len(D_COLORS)])
                for i, d in enumerate(ordered)
            ]
            title = f"{exp}: alpha={alpha:g}" + ("" if tau == "iid" else f", tau={tau:g}")
            path = os.path.join(output_dir, fname)
            svg.write_line_chart(path, lines, title=title, xlabel="k", ylabel=ylabel)
            written.append(path)
    else:
        raise ValueError("format must be 'csv' or 'svg'")
    return written
