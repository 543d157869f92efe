import os

import pytest

from lmsvtail.cli import main, parse_config
from lmsvtail.errors import ConfigError


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def sample_file(tmp_path):
    path = tmp_path / "sample.csv"
    path.write_text("y\n1\n2\n4\n8\n")
    return str(path)


class TestSimulate:
    def test_byte_identical(self, capsys):
        _, a, _ = run_cli(capsys, "simulate", "--h", "0.9", "--n", "1024", "--seed", "7")
        _, b, _ = run_cli(capsys, "simulate", "--h", "0.9", "--n", "1024", "--seed", "7")
        assert a == b and a.startswith("x\n") and len(a.splitlines()) == 1025

    def test_lmsv_sample_to_file(self, capsys, tmp_path):
        out = tmp_path / "s.csv"
        code, _, _ = run_cli(capsys, "simulate", "--h", "0.8", "--n", "50", "--alpha", "2", "-o", str(out))
        assert code == 0 and out.read_text().splitlines()[0] == "y,x,z"

    def test_missing_output_dir(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "simulate", "--h", "0.8", "--n", "5", "-o", str(tmp_path / "no" / "x.csv"))
        assert code == 1 and "does not exist" in err


class TestHill:
    def test_hand_example(self, capsys, sample_file):
        code, out, _ = run_cli(capsys, "hill", "--input", sample_file, "--k", "3")
        assert code == 0 and out.strip() == "1.386294"

    def test_bad_k(self, capsys, sample_file):
        code, _, err = run_cli(capsys, "hill", "--input", sample_file, "--k", "4")
        assert code == 1 and "k" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "hill", "--input", str(tmp_path / "nope.csv"), "--k", "1")
        assert code == 1 and "cannot read" in err


class TestRegime:
    def test_lrd(self, capsys):
        code, out, _ = run_cli(capsys, "regime", "--n", "10000", "--k", "100", "--h", "0.9", "--q", "1")
        kv = dict(line.split(" = ", 1) for line in out.splitlines())
        assert code == 0 and kv["zone"] == "lrd"
        assert float(kv["product"]) == pytest.approx(11.41, abs=0.01)

    def test_csv(self, capsys):
        code, out, _ = run_cli(capsys, "regime", "--n", "1000000", "--k", "10", "--h", "0.75", "--format", "csv")
        header, row = out.splitlines()
        assert header.startswith("n,k,hurst") and ",iid," in row


class TestTep:
    def test_random_level(self, capsys, sample_file):
        code, out, _ = run_cli(capsys, "tep", "--input", sample_file, "--k", "2", "--s", "1", "--alpha", "2")
        assert code == 0 and out.splitlines()[1] == "1.0,0.5,0.25"

    def test_deterministic_level(self, capsys, sample_file):
        code, out, _ = run_cli(capsys, "tep", "--input", sample_file, "--u", "2", "--fbar", "0.5", "--s", "0")
        assert code == 0 and out.splitlines()[1].split(",")[1] == "1.0"

    def test_decompose_needs_latent(self, capsys, sample_file):
        code, _, err = run_cli(capsys, "tep", "--input", sample_file, "--decompose", "--u", "2", "--alpha", "2")
        assert code == 1 and "y,x,z" in err

    def test_decompose(self, capsys, tmp_path):
        path = tmp_path / "lm.csv"
        run_cli(capsys, "simulate", "--h", "0.9", "--n", "800", "--alpha", "1", "-o", str(path))
        code, out, _ = run_cli(capsys, "tep", "--input", str(path), "--decompose", "--u", "20", "--alpha", "1")
        assert code == 0 and out.splitlines()[0] == "s,r_n,s_n"

    def test_level_required(self, capsys, sample_file):
        code, _, _ = run_cli(capsys, "tep", "--input", sample_file)
        assert code == 1


class TestHermite:
    def test_rank_header(self, capsys):
        code, out, _ = run_cli(capsys, "hermite", "--function", "power", "--a", "2", "--M", "4")
        assert code == 0 and "# rank = 2" in out and "m,c_m" in out


class TestExperiment:
    def test_config_echo_round_trip(self, capsys, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text(f"n = 200\nalpha = 2\nreps = 5\nk = 10, 20\noutput_dir = {tmp_path / 'o1'}\n")
        code, out, _ = run_cli(capsys, "experiment", "--config", str(cfg))
        assert code == 0
        echo = tmp_path / "o1" / "mse.config"
        first = (tmp_path / "o1" / "mse.csv").read_bytes()
        # the echoed configuration reproduces the run
        assert "# replications = 5" in out
        code, _, _ = run_cli(capsys, "experiment", "--config", str(echo))
        assert code == 0 and (tmp_path / "o1" / "mse.csv").read_bytes() == first

    def test_flags_override_file(self, capsys, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("n = 200\nalpha = 2\nreps = 5\nk = 10\n")
        code, out, _ = run_cli(capsys, "experiment", "--config", str(cfg), "--reps", "3",
                               "--output-dir", str(tmp_path / "o"))
        assert code == 0 and "# replications = 3" in out

    def test_malformed_config(self, capsys, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("n = 1000\nk_grid = 1500\n")
        code, _, err = run_cli(capsys, "experiment", "--config", str(cfg))
        assert code == 1 and "k_grid" in err and "k < n" in err

    def test_preset_svg(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "experiment", "--preset", "figure2", "--n", "200",
                               "--output-dir", str(tmp_path), "--format", "svg")
        assert code == 0 and "# tau = 0.05" in out
        assert any(name.endswith(".svg") for name in os.listdir(tmp_path))

    def test_env_output_dir(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("LMSVTAIL_OUTPUT_DIR", str(tmp_path / "env"))
        code, _, _ = run_cli(capsys, "experiment", "--n", "100", "--reps", "2", "--alpha", "2", "--k", "5")
        assert code == 0 and (tmp_path / "env" / "mse.csv").exists()


class TestExitCodes:
    def test_unknown_flag(self, capsys):
        code, _, err = run_cli(capsys, "simulate", "--h", "0.9", "--n", "10", "--bogus", "1")
        assert code == 1 and "unrecognized" in err

    def test_unknown_subcommand(self, capsys):
        assert run_cli(capsys, "frobnicate")[0] == 1

    def test_numerical_failure(self, capsys, monkeypatch):
        from lmsvtail import cli
        from lmsvtail.errors import QuadratureError

        def boom(*a, **k):
            raise QuadratureError("did not converge")

        monkeypatch.setattr(cli, "expand", boom)
        code, _, err = run_cli(capsys, "hermite")
        assert code == 2 and "QuadratureError" in err


def test_parse_config(tmp_path):
    path = tmp_path / "c.cfg"
    path.write_text("n = 100\nalpha = 1\n")
    assert parse_config(path).k_grid == list(range(1, 51))
    path.write_text("n = 100\nk = 100\n")
    with pytest.raises(ConfigError):
        parse_config(path)
