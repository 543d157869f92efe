import pytest

from lmsvtail.config import (
    ExperimentConfig,
    apply_overrides,
    dump_config,
    load_config,
    parse_config_text,
    preset_config,
)
from lmsvtail.errors import ConfigError


class TestParse:
    def test_minimal(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("n = 500\nalpha = 1.5\n")
        cfg = load_config(path)
        assert cfg.n == 500 and cfg.alpha_grid == [1.5]
        assert cfg.replications == 2000 and cfg.d_grid == [0.0, 0.2, 0.4, 0.45]
        assert cfg.k_grid == list(range(2, 251, 2))

    def test_k_not_below_n(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("n = 1000\nk_grid = 1500\n")
        with pytest.raises(ConfigError, match="k < n") as err:
            load_config(path)
        assert err.value.key == "k_grid"

    def test_d_range(self):
        with pytest.raises(ConfigError, match="d_grid"):
            ExperimentConfig(d_grid=[0.5]).validated()

    def test_line_numbers(self):
        with pytest.raises(ConfigError, match="line 3"):
            parse_config_text("n = 10\n# comment\nreps = many\n")

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown"):
            parse_config_text("colour = red\n")

    def test_duplicate(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config_text("n = 10\nn = 20\n")

    def test_missing_equals(self):
        with pytest.raises(ConfigError, match="line 1"):
            parse_config_text("n 10\n")

    def test_non_integer(self):
        with pytest.raises(ConfigError, match="n"):
            parse_config_text("n = 10.5\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "nope.cfg")


class TestRoundTrip:
    def test_dump_parse(self):
        cfg = ExperimentConfig(n=777, tau=0.05, alpha_grid=[1.0, 2.5], k_grid=[3, 9],
                               output_dir="somewhere").validated()
        again = parse_config_text(dump_config(cfg)).validated()
        assert again == cfg

    def test_overrides_win(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("n = 500\ntau = 0.5\n")
        cfg = load_config(path, {"tau": "2", "reps": 7})
        assert cfg.tau == 2.0 and cfg.replications == 7 and cfg.n == 500


class TestPresets:
    def test_figure1(self):
        cfg = preset_config("figure1").validated()
        assert (cfg.n, cfg.alpha_grid, cfg.d_grid, cfg.replications) == \
            (1000, [1.0, 2.0], [0.0, 0.2, 0.4, 0.45], 10000)
        assert cfg.experiment_kind == "mse" and cfg.tau == 1.0

    def test_figure2(self):
        cfg = preset_config("figure2")
        assert cfg.experiment_kind == "hill_plot" and cfg.tau == 0.05

    def test_figure3_warns(self):
        with pytest.warns(UserWarning, match="tau"):
            cfg = preset_config("figure3")
        assert cfg.tau == 1.0

    def test_unknown(self):
        with pytest.raises(ConfigError):
            preset_config("figure9")


def test_default_grids():
    cfg = ExperimentConfig(experiment_kind="variance_scaling", n=5000).validated()
    assert cfg.n_grid == [1024, 2048, 4096, 5000]
    hp = ExperimentConfig(experiment_kind="hill_plot", n=50).validated()
    assert hp.k_grid == list(range(1, 50))


def test_override_alias_list():
    cfg = apply_overrides(ExperimentConfig(), {"d": "0, 0.3"})
    assert cfg.d_grid == [0.0, 0.3]
