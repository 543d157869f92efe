"""Command-line interface: ``lmsvtail <subcommand> [flags]``.

Exit status 0 on success, 1 on usage or input errors, 2 on numerical failure
(quadrature, root finding, covariance embedding, too many failed replications).
"""
from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
import warnings

import numpy as np

from .config import (
    ExperimentConfig,
    apply_overrides,
    dump_config,
    load_config,
    preset_config,
)
from .errors import ConfigError, LmsvError, NumericalError
from .experiments import emit, run
from .gauss_lrd import LrdSpec, simulate
from .hermite import expand
from .regimes import RegimeReport, classify
from .tails import NoiseSpec, VolatilitySpec, conditional_tail_Tn, survival_y
from .tep import Sample, decompose, hill, random_level_tep, simulate_sample, tail_empirical

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2

G_FUNCTIONS = {
    "exp": lambda a: (lambda x: np.exp(a * x)),
    "cosh": lambda a: (lambda x: np.cosh(a * x)),
    "power": lambda a: (lambda x: np.asarray(x, dtype=float) ** int(a)),
    "abs": lambda a: (lambda x: np.abs(x) ** a),
}


class UsageError(LmsvError):
    pass


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so main() owns exit codes."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_config(path) -> ExperimentConfig:
    """Read and validate an experiment config file."""
    return load_config(path)


def read_sample(path, *, need_latent: bool = False) -> Sample:
    """Read a CSV sample: one column with a header, or columns ``y,x,z``."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    if not rows:
        raise UsageError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise UsageError(f"{path}: non-numeric value ({exc})") from None
    if data.size == 0:
        raise UsageError(f"{path}: no data rows")
    if data.ndim != 2 or data.shape[1] != len(header):
        raise UsageError(f"{path}: every row must have {len(header)} column(s)")
    if len(header) == 1:
        if need_latent:
            raise UsageError(f"{path}: decomposition needs columns y,x,z")
        return Sample(data[:, 0])
    if header != ["y", "x", "z"]:
        raise UsageError(f"{path}: expected a single column or the header y,x,z")
    return Sample(data[:, 0], data[:, 1], data[:, 2])


def _open_output(path):
    if path in (None, "-"):
        return sys.stdout, False
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent):
        raise UsageError(f"output directory {parent} does not exist")
    return open(path, "w", newline=""), True


def _write(path, writer) -> None:
    fh, own = _open_output(path)
    try:
        writer(fh)
    finally:
        if own:
            fh.close()


def _floats(text: str) -> list:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _noise_from(args) -> NoiseSpec:
    beta = args.beta if args.noise_family == "pareto_second_order" else None
    return NoiseSpec(args.alpha, args.noise_family, beta=beta)


def _lrd_from(args) -> LrdSpec:
    generator = "iid" if args.h == 0.5 and args.generator == "fgn" else args.generator
    return LrdSpec(args.h, generator)


# -- subcommands ------------------------------------------------------------------


def cmd_simulate(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    lrd = _lrd_from(args)
    if args.alpha is None:
        path = simulate(lrd, args.n, args.seed)
        _write(args.output, path.to_csv)
        return EXIT_OK
    sample = simulate_sample(lrd, _noise_from(args), VolatilitySpec.exp(args.tau), args.n, args.seed)

    def writer(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["y", "x", "z"])
        for row in zip(sample.y, sample.latent_x, sample.latent_z):
            w.writerow([repr(float(v)) for v in row])

    _write(args.output, writer)
    return EXIT_OK


def cmd_hermite(args) -> int:
    G = G_FUNCTIONS[args.function](args.a)
    expansion = expand(G, args.M)

    def writer(fh):
        fh.write(f"# function = {args.function}\n# a = {args.a!r}\n# M = {args.M}\n")
        fh.write(f"# rank = {expansion.rank if expansion.rank is not None else 'none'}\n")
        expansion.to_csv(fh)

    _write(args.output, writer)
    return EXIT_OK


def cmd_tep(args) -> int:
    sample = read_sample(args.input, need_latent=args.decompose)
    s = np.asarray(_floats(args.s), dtype=float)
    if args.decompose:
        if args.u is None or args.alpha is None:
            raise UsageError("--decompose needs --u and --alpha")
        vol, noise = VolatilitySpec.exp(args.tau), _noise_from(args)
        fbar = args.fbar if args.fbar is not None else float(survival_y(vol, noise, args.u))
        result = decompose(sample, args.u, fbar, s, vol, noise)
    elif args.k is not None:
        result = random_level_tep(sample, args.k, s, alpha=args.alpha)
    elif args.u is not None:
        if args.fbar is None and args.alpha is None:
            raise UsageError("deterministic levels need --fbar or --alpha (to compute it)")
        Tn = None
        fbar = args.fbar
        if args.alpha is not None:
            vol, noise = VolatilitySpec.exp(args.tau), _noise_from(args)
            if fbar is None:
                fbar = float(survival_y(vol, noise, args.u))
            Tn = conditional_tail_Tn(vol, noise, args.u, s)
        result = tail_empirical(sample, args.u, fbar, s, Tn=Tn)
    else:
        raise UsageError("give --k (random level) or --u (deterministic level)")
    _write(args.output, result.to_csv)
    return EXIT_OK


def cmd_hill(args) -> int:
    sample = read_sample(args.input)
    value = hill(sample, args.k)
    _write(args.output, lambda fh: fh.write(f"{value:.6f}\n"))
    return EXIT_OK


def cmd_regime(args) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = classify(args.n, args.k, LrdSpec(args.h, "fgn" if args.h != 0.5 else "iid"), args.q,
                          threshold_low=args.threshold_low, threshold_high=args.threshold_high)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.format == "csv":
        text = ",".join(RegimeReport.csv_header()) + "\n" + report.to_csv_row()
    else:
        text = report.to_kv()
    _write(args.output, lambda fh: fh.write(text))
    return EXIT_OK


OVERRIDE_FLAGS = {
    "n": "n", "reps": "replications", "seed": "master_seed", "d": "d_grid",
    "alpha": "alpha_grid", "tau": "tau", "k": "k_grid", "kind": "experiment_kind",
    "output_dir": "output_dir", "generator": "generator", "noise_family": "noise_family",
    "beta": "beta", "s": "s_grid", "n_grid": "n_grid", "g_family": "g_family",
    "workers": "workers",
}


def cmd_experiment(args) -> int:
    overrides = {field: getattr(args, flag) for flag, field in OVERRIDE_FLAGS.items()
                 if getattr(args, flag) is not None}
    if args.config and args.preset:
        raise UsageError("--config and --preset are mutually exclusive")
    if args.config:
        cfg = load_config(args.config, overrides)
    else:
        base = preset_config(args.preset) if args.preset else ExperimentConfig()
        cfg = apply_overrides(base, overrides).validated()
    echo = dump_config(cfg)
    sys.stdout.write("".join(f"# {line}\n" for line in echo.splitlines()))
    table = run(cfg)
    os.makedirs(cfg.output_dir, exist_ok=True)
    with open(os.path.join(cfg.output_dir, f"{cfg.experiment_kind}.config"), "w") as fh:
        fh.write(echo)
    paths = emit(table, "csv", cfg.output_dir, name=cfg.experiment_kind)
    if args.format == "svg":
        paths += emit(table, "svg", cfg.output_dir)
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


# -- parser -----------------------------------------------------------------------


def _add_noise_flags(p, *, alpha_required=False):
    p.add_argument("--alpha", type=float, required=alpha_required, help="tail index of Z")
    p.add_argument("--tau", type=float, default=1.0, help="sigma(x) = exp(tau x)")
    p.add_argument("--noise-family", default="pareto",
                   choices=["pareto", "pareto_second_order", "log_perturbed"])
    p.add_argument("--beta", type=float, default=1.0, help="second-order parameter")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lmsvtail", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="simulate a Gaussian path or an LMSV sample")
    p.add_argument("--h", type=float, required=True, help="Hurst exponent")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--generator", default="fgn", choices=["fgn", "arfima", "iid"])
    _add_noise_flags(p)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("hermite", help="Hermite coefficients of G")
    p.add_argument("--function", default="exp", choices=sorted(G_FUNCTIONS))
    p.add_argument("--a", type=float, default=1.0, help="parameter of G")
    p.add_argument("--M", type=int, default=12, help="maximal order")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_hermite)

    p = sub.add_parser("tep", help="tail empirical process of a sample")
    p.add_argument("--input", required=True)
    p.add_argument("--s", default="0,0.5,1", help="comma-separated s grid")
    p.add_argument("--k", type=int, help="random level Y_{n-k:n}")
    p.add_argument("--u", type=float, help="deterministic level u_n")
    p.add_argument("--fbar", type=float, help="P(Y > u_n); computed from the model if omitted")
    p.add_argument("--decompose", action="store_true", help="split e_n into R_n and S_n")
    _add_noise_flags(p)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_tep)

    p = sub.add_parser("hill", help="Hill estimate of a sample")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_hill)

    p = sub.add_parser("regime", help="i.i.d./LRD zone of (n, k, H, q)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--threshold-low", type=float, default=0.1)
    p.add_argument("--threshold-high", type=float, default=10.0)
    p.add_argument("--format", choices=["kv", "csv"], default="kv")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_regime)

    p = sub.add_parser("experiment", help="run a Monte Carlo experiment")
    p.add_argument("--config")
    p.add_argument("--preset", choices=["figure1", "figure2", "figure3"])
    p.add_argument("--format", choices=["csv", "svg"], default="csv",
                   help="svg also writes line charts next to the CSV")
    for flag in OVERRIDE_FLAGS:
        p.add_argument("--" + flag.replace("_", "-"), dest=flag, default=None)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
