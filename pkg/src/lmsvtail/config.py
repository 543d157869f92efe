"""Experiment configuration and its plain-text ``key = value`` file format.

One setting per line, ``#`` starts a comment, lists are comma separated::

    experiment_kind = mse
    n = 1000
    alpha_grid = 1, 2
    d_grid = 0, 0.2, 0.4, 0.45

:func:`dump_config` writes every field in declaration order, so feeding the
echoed effective configuration back in reproduces the same run.
"""
from __future__ import annotations

import dataclasses
import os
import warnings
from dataclasses import dataclass, field

from .errors import ConfigError

EXPERIMENT_KINDS = ("mse", "hill_plot", "variance_scaling", "tep_limit",
                    "covariance_check", "random_level_rate")
OUTPUT_DIR_ENV = "LMSVTAIL_OUTPUT_DIR"


def default_output_dir() -> str:
    return os.environ.get(OUTPUT_DIR_ENV, "lmsvtail-out")


@dataclass
class ExperimentConfig:
    experiment_kind: str = "mse"
    n: int = 1000
    replications: int = 2000
    master_seed: int = 12345
    d_grid: list = field(default_factory=lambda: [0.0, 0.2, 0.4, 0.45])
    alpha_grid: list = field(default_factory=lambda: [1.0, 2.0])
    tau: float = 1.0
    k_grid: list = field(default_factory=list)
    output_dir: str = field(default_factory=default_output_dir)
    generator: str = "fgn"
    noise_family: str = "pareto"
    beta: float = 1.0
    s_grid: list = field(default_factory=lambda: [0.0, 0.5, 1.0])
    n_grid: list = field(default_factory=list)
    g_family: str = "exp"
    workers: int = 1

    def validated(self) -> "ExperimentConfig":
        """Return a copy with derived defaults filled in; raise on violations."""
        cfg = dataclasses.replace(self)
        if cfg.experiment_kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"must be one of {', '.join(EXPERIMENT_KINDS)}", key="experiment_kind")
        if cfg.n < 2:
            raise ConfigError("n >= 2 required", key="n")
        if cfg.replications < 1:
            raise ConfigError("replications >= 1 required", key="replications")
        if cfg.master_seed < 0:
            raise ConfigError("master_seed must be an unsigned integer", key="master_seed")
        if not cfg.d_grid:
            raise ConfigError("at least one d required", key="d_grid")
        for d in cfg.d_grid:
            if not 0.0 <= d < 0.5:
                raise ConfigError(f"every d must satisfy 0 <= d < 0.5 (got {d})", key="d_grid")
        if not cfg.alpha_grid or any(a <= 0 for a in cfg.alpha_grid):
            raise ConfigError("every alpha must be > 0", key="alpha_grid")
        if cfg.tau < 0:
            raise ConfigError("tau >= 0 required", key="tau")
        if not cfg.k_grid:
            cfg.k_grid = _default_k_grid(cfg)
        for k in cfg.k_grid:
            if not 1 <= k < cfg.n:
                raise ConfigError(f"every k must satisfy 1 <= k and k < n (k={k}, n={cfg.n})",
                                  key="k_grid")
        if cfg.generator not in ("fgn", "arfima"):
            raise ConfigError("must be 'fgn' or 'arfima'", key="generator")
        if cfg.noise_family not in ("pareto", "pareto_second_order", "log_perturbed"):
            raise ConfigError("unknown noise family", key="noise_family")
        if cfg.beta <= 0:
            raise ConfigError("beta > 0 required", key="beta")
        if not cfg.s_grid or any(s < 0 for s in cfg.s_grid):
            raise ConfigError("s values must be >= 0", key="s_grid")
        if not cfg.n_grid and cfg.experiment_kind in ("variance_scaling", "random_level_rate"):
            cfg.n_grid = _default_n_grid(cfg.n)
        for m in cfg.n_grid:
            if m < 2 or m > cfg.n:
                raise ConfigError(f"every entry must satisfy 2 <= n_i <= n (got {m})", key="n_grid")
        if cfg.g_family not in ("exp", "cosh"):
            raise ConfigError("must be 'exp' or 'cosh'", key="g_family")
        if cfg.workers < 1:
            raise ConfigError("workers >= 1 required", key="workers")
        return cfg


def _default_k_grid(cfg: ExperimentConfig) -> list:
    n = cfg.n
    if cfg.experiment_kind == "hill_plot":
        return list(range(1, n))
    if cfg.experiment_kind == "mse":
        step = max(1, n // 200)
        return list(range(step, n // 2 + 1, step))
    return [max(1, min(n - 1, n // 100))]


def _default_n_grid(n: int) -> list:
    out = []
    m = 1024
    while m < n:
        out.append(m)
        m *= 2
    out.append(n)
    return out


_FIELDS = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
_LIST_TYPES = {"d_grid": float, "alpha_grid": float, "k_grid": int, "s_grid": float, "n_grid": int}
_SCALAR_TYPES = {"experiment_kind": str, "n": int, "replications": int, "master_seed": int,
                 "tau": float, "output_dir": str, "generator": str, "noise_family": str,
                 "beta": float, "g_family": str, "workers": int}
ALIASES = {"alpha": "alpha_grid", "d": "d_grid", "k": "k_grid", "reps": "replications",
           "seed": "master_seed", "kind": "experiment_kind", "experiment": "experiment_kind"}


def _convert_scalar(typ, raw: str, key: str, line=None):
    raw = raw.strip()
    try:
        if typ is int:
            val = float(raw)
            if not val.is_integer():
                raise ValueError
            return int(val)
        if typ is float:
            return float(raw)
        return raw
    except ValueError:
        raise ConfigError(f"expected {typ.__name__}, got {raw!r}", key=key, line=line) from None


def convert_value(key: str, raw, line=None):
    """Convert a raw string (or already-typed value) for field ``key``."""
    key = ALIASES.get(key, key)
    if key not in _FIELDS:
        raise ConfigError("unknown setting", key=key, line=line)
    if key in _LIST_TYPES:
        if isinstance(raw, (list, tuple)):
            items = list(raw)
        else:
            items = [p for p in str(raw).split(",") if p.strip()]
        return key, [_convert_scalar(_LIST_TYPES[key], str(p), key, line) for p in items]
    if not isinstance(raw, str):
        raw = str(raw)
    return key, _convert_scalar(_SCALAR_TYPES[key], raw, key, line)


def parse_config_text(text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    cfg = dataclasses.replace(base) if base is not None else ExperimentConfig()
    seen = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, raw = (p.strip() for p in stripped.split("=", 1))
        if not key:
            raise ConfigError("missing key before '='", line=lineno)
        name, value = convert_value(key, raw, line=lineno)
        if name in seen:
            raise ConfigError("duplicate setting", key=name, line=lineno)
        seen.add(name)
        setattr(cfg, name, value)
    return cfg


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    """Read, apply overrides (they win over the file) and validate."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    cfg = parse_config_text(text)
    return apply_overrides(cfg, overrides or {}).validated()


def apply_overrides(cfg: ExperimentConfig, overrides: dict) -> ExperimentConfig:
    cfg = dataclasses.replace(cfg)
    for key, raw in overrides.items():
        name, value = convert_value(key, raw)
        setattr(cfg, name, value)
    return cfg


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return ", ".join(_fmt(x) for x in v)
    return str(v)


def dump_config(cfg: ExperimentConfig) -> str:
    return "".join(f"{f} = {_fmt(getattr(cfg, f))}\n" for f in _FIELDS)


PRESETS = {
    "figure1": {"experiment_kind": "mse", "n": 1000, "alpha_grid": [1.0, 2.0],
                "d_grid": [0.0, 0.2, 0.4, 0.45], "tau": 1.0, "replications": 10000},
    "figure2": {"experiment_kind": "hill_plot", "n": 1000, "alpha_grid": [2.0],
                "d_grid": [0.0, 0.2, 0.4, 0.45], "tau": 0.05, "replications": 1},
    "figure3": {"experiment_kind": "hill_plot", "n": 1000, "alpha_grid": [2.0],
                "d_grid": [0.0, 0.2, 0.4, 0.45], "tau": 1.0, "replications": 1},
}
PRESET_NOTES = {
    "figure3": "figure3 uses tau = 1 as in the figure caption; the protocol text mentions "
               "tau = 0.05 or 2 (presets with tau = 2 can be made with --tau 2)",
}


def preset_config(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}", key="preset")
    if name in PRESET_NOTES:
        warnings.warn(PRESET_NOTES[name], UserWarning)
    return apply_overrides(ExperimentConfig(), PRESETS[name])
