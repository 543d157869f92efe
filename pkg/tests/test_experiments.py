import math
import re

import numpy as np
import pytest

from lmsvtail.config import ExperimentConfig
from lmsvtail.experiments import (
    CSV_COLUMNS,
    ResultTable,
    emit,
    read_csv,
    run_covariance_check,
    run_hill_plot,
    run_mse,
    run_random_level_rate,
    run_tep_limit,
    run_variance_scaling,
    stat_name,
)
from lmsvtail.tails import limit_tail


def small_mse(**kw):
    base = dict(n=300, replications=40, alpha_grid=[1.0, 2.0], d_grid=[0.0, 0.2, 0.4, 0.45],
                k_grid=[5, 20, 60])
    base.update(kw)
    return ExperimentConfig(**base)


class TestMse:
    def test_deterministic(self):
        assert run_mse(small_mse()).equals(run_mse(small_mse()))

    def test_worker_count_irrelevant(self):
        assert run_mse(small_mse(workers=2)).equals(run_mse(small_mse(workers=1)))

    def test_se_consistency(self):
        cfg = small_mse()
        table = run_mse(cfg)
        from lmsvtail.tep import hill_path, simulate_sample
        from lmsvtail.gauss_lrd import LrdSpec
        from lmsvtail.tails import NoiseSpec, VolatilitySpec
        err2 = np.array([
            (hill_path(simulate_sample(LrdSpec.from_d(0.2), NoiseSpec(2.0), VolatilitySpec.exp(1.0),
                                       cfg.n, cfg.master_seed, r).y, 20)[19] - 0.5) ** 2
            for r in range(cfg.replications)
        ])
        row = table.row(alpha=2.0, d=0.2, k=20, stat="mse")
        assert row.value == pytest.approx(err2.mean(), rel=1e-12)
        assert row.se == pytest.approx(err2.std(ddof=1) / math.sqrt(cfg.replications), rel=1e-12)
        assert row.reps == cfg.replications

    def test_finite_se(self):
        for r in run_mse(small_mse()):
            assert math.isfinite(r.se)

    def test_iid_anchor(self):
        cfg = ExperimentConfig(n=1000, replications=2000, alpha_grid=[2.0], d_grid=[0.0], tau=0.0,
                               k_grid=[100])
        assert 0.002 <= run_mse(cfg).value(stat="mse") <= 0.004


class TestHillPlot:
    @staticmethod
    def _proximity(k_values):
        cfg = ExperimentConfig(experiment_kind="hill_plot", n=1000, alpha_grid=[2.0], d_grid=[0.0],
                               tau=0.05, replications=1)
        t = run_hill_plot(cfg)
        return max(abs(t.value(k=k, stat="hill_y") - t.value(k=k, stat="hill_z")) for k in k_values)

    @pytest.mark.xfail(strict=True, reason="for k below about 20 a factor e^{0.05 x} can reorder the "
                                           "top order statistics and move the Hill value by more than 0.1")
    def test_small_volatility_proximity_all_k(self):
        assert self._proximity(range(1, 201)) < 0.1

    def test_small_volatility_proximity(self):
        assert self._proximity(range(25, 201)) < 0.1

    def test_full_sample_k(self):
        cfg = ExperimentConfig(experiment_kind="hill_plot", n=1000, alpha_grid=[2.0], d_grid=[0.0],
                               tau=0.0, replications=1, k_grid=[999])
        v = run_hill_plot(cfg).value(stat="hill_z")
        assert math.isfinite(v) and v > 0


class TestVarianceScaling:
    def test_short_memory_branch(self):
        cfg = ExperimentConfig(experiment_kind="variance_scaling", n=2**14, replications=500,
                               d_grid=[0.05], g_family="cosh", n_grid=[2**10, 2**12, 2**14])
        t = run_variance_scaling(cfg)
        assert not t.select(stat="pred_var_sum")
        sig0 = t.value(n=2**14, stat="sigma0_sq")
        for m in cfg.n_grid:
            row = t.row(n=m, stat="var_over_n")
            assert abs(row.value - sig0) < 3 * row.se

    def test_long_memory_rows(self):
        cfg = ExperimentConfig(experiment_kind="variance_scaling", n=2048, replications=50,
                               d_grid=[0.3], n_grid=[1024, 2048])
        t = run_variance_scaling(cfg)
        row = t.row(n=2048, stat="ratio")
        assert row.value == pytest.approx(t.value(n=2048, stat="var_sum") / t.value(n=2048, stat="pred_var_sum"))


class TestTepLimit:
    def test_random_level_bridge_variance(self):
        cfg = ExperimentConfig(experiment_kind="tep_limit", n=10**4, replications=2000, alpha_grid=[2.0],
                               d_grid=[0.0], k_grid=[100], s_grid=[0.0, 0.5])
        t = run_tep_limit(cfg)
        T = limit_tail(2.0, 0.5)
        assert t.value(stat=stat_name("var_sqrtk_ehat", s=0.5)) == pytest.approx(T * (1 - T), rel=0.2)
        assert t.value(stat="zone_lrd") == 0.0


class TestCovarianceCheck:
    def test_no_volatility_first_term(self):
        cfg = ExperimentConfig(experiment_kind="covariance_check", n=2**12, replications=1000,
                               alpha_grid=[1.0], d_grid=[0.4], tau=0.0, k_grid=[64])
        t = run_covariance_check(cfg)
        for s in (0.0, 0.5, 1.0):
            for u in (0.0, 0.5, 1.0):
                mc = t.row(stat=stat_name("cov_mc", s=s, t=u))
                pred = t.value(stat=stat_name("cov_pred", s=s, t=u))
                assert abs(mc.value - pred) < 3 * mc.se


class TestRandomLevelRate:
    def test_lrd_scaled_variance_shrinks(self):
        cfg = ExperimentConfig(experiment_kind="random_level_rate", n=2**16, replications=200,
                               alpha_grid=[1.0], d_grid=[0.45], k_grid=[2**10],
                               n_grid=[2**12, 2**14, 2**16], s_grid=[0.5])
        t = run_random_level_rate(cfg)
        v = [t.value(n=m, stat=stat_name("var_rho_ehat", s=0.5)) for m in cfg.n_grid]
        assert v[0] > v[1] > v[2]


class TestEmit:
    def test_empty(self, tmp_path):
        paths = emit(ResultTable(), "csv", tmp_path)
        assert (tmp_path / "results.csv").read_text() == ",".join(CSV_COLUMNS) + "\n"
        assert emit(ResultTable(), "svg", tmp_path) == []
        assert len(paths) == 1

    def test_round_trip(self, tmp_path):
        table = run_mse(small_mse(replications=5))
        table.add("mse", 1.0, 0.0, 1.0, 300, 0, "extra", float("nan"), float("nan"), 1)
        (path,) = emit(table, "csv", tmp_path)
        assert read_csv(path).equals(table)

    def test_bytes_deterministic(self, tmp_path):
        a = emit(run_mse(small_mse()), "csv", tmp_path / "a")[0]
        b = emit(run_mse(small_mse(workers=2)), "csv", tmp_path / "b")[0]
        assert open(a, "rb").read() == open(b, "rb").read()

    def test_mse_svg(self, tmp_path):
        paths = emit(run_mse(small_mse()), "svg", tmp_path)
        names = sorted(p.rsplit("/", 1)[-1] for p in paths)
        assert names == ["mse_1_1.svg", "mse_2_1.svg"]
        text = open(paths[0]).read()
        assert text.count("<polyline") == 4
        for colour in ("black", "blue", "red", "green"):
            assert f'stroke="{colour}"' in text

    def test_hill_plot_svg(self, tmp_path):
        cfg = ExperimentConfig(experiment_kind="hill_plot", n=200, alpha_grid=[2.0], tau=0.05,
                               replications=1)
        paths = emit(run_hill_plot(cfg), "svg", tmp_path)
        assert any(re.search(r"hill_plot_2_0.05\.svg$", p) for p in paths)

    def test_bad_format(self, tmp_path):
        with pytest.raises(ValueError):
            emit(ResultTable(), "png", tmp_path)

    def test_unwritable(self, tmp_path):
        target = tmp_path / "file"
        target.write_text("")
        with pytest.raises(OSError):
            emit(ResultTable(), "csv", target / "sub")
