import json
import time

import pytest

from metarec.cli import main


def run_cli(*argv):
    return main(list(argv))


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory, ml100k_dir):
    out = tmp_path_factory.mktemp("out")
    code = run_cli("run", "--dataset", "ml100k", "--data-dir", str(ml100k_dir),
                   "--experiment", "oracle", "--seed", "42",
                   "--out", str(out))
    assert code == 0
    return out


class TestRun:
    def test_outputs_exist(self, run_dir):
        for name in ("report.json", "fig3.csv", "fig4.csv", "fig5.csv",
                     "errors.csv"):
            assert (run_dir / name).exists(), name

    def test_report_contents(self, run_dir):
        payload = json.loads((run_dir / "report.json").read_text())
        assert payload["experiment"] == "oracle"
        assert payload["seed"] == 42
        assert len(payload["algorithm_rmse"]) == 9

    def test_rerun_byte_identical_modulo_timings(self, ml100k_dir, run_dir,
                                                 tmp_path):
        out2 = tmp_path / "out2"
        assert run_cli("run", "--dataset", "ml100k",
                       "--data-dir", str(ml100k_dir),
                       "--experiment", "oracle", "--seed", "42",
                       "--out", str(out2)) == 0
        a = json.loads((run_dir / "report.json").read_text())
        b = json.loads((out2 / "report.json").read_text())
        for key in ("fit_seconds", "eval_seconds"):
            a.pop(key), b.pop(key)
        assert a == b
        for name in ("fig3.csv", "fig4.csv", "fig5.csv", "errors.csv"):
            assert (run_dir / name).read_bytes() == (out2 / name).read_bytes()

    def test_meta_experiment_runs(self, ml100k_dir, tmp_path):
        out = tmp_path / "meta_out"
        assert run_cli("run", "--dataset", "ml100k",
                       "--data-dir", str(ml100k_dir),
                       "--experiment", "meta", "--seed", "7", "--folds", "3",
                       "--out", str(out)) == 0
        payload = json.loads((out / "report.json").read_text())
        assert len(payload["meta_rmse_per_fold"]) == 3

    def test_cache_warm_run_matches(self, ml100k_dir, tmp_path, capsys):
        cache = tmp_path / "cache"
        outs = []
        elapsed = []
        for k in range(2):
            out = tmp_path / f"o{k}"
            t0 = time.perf_counter()
            assert run_cli("run", "--dataset", "ml100k",
                           "--data-dir", str(ml100k_dir),
                           "--experiment", "oracle", "--seed", "5",
                           "--cache-dir", str(cache),
                           "--out", str(out)) == 0
            elapsed.append(time.perf_counter() - t0)
            outs.append(json.loads((out / "report.json").read_text()))
        captured = capsys.readouterr().out
        assert "9 hit(s)" in captured
        for key in ("fit_seconds", "eval_seconds"):
            outs[0].pop(key), outs[1].pop(key)
        assert outs[0] == outs[1]
        assert outs[1] is not None and json.loads(
            (tmp_path / "o0" / "report.json").read_text())["seed"] == 5

    def test_algorithm_subset(self, ml100k_dir, tmp_path):
        out = tmp_path / "sub"
        assert run_cli("run", "--dataset", "ml100k",
                       "--data-dir", str(ml100k_dir),
                       "--experiment", "oracle", "--seed", "1",
                       "--algorithms", "svd,slope_one",
                       "--out", str(out)) == 0
        payload = json.loads((out / "report.json").read_text())
        assert set(payload["algorithm_rmse"]) == {"svd", "slope_one"}

    def test_config_file_and_flag_precedence(self, ml100k_dir, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text(f'experiment = "meta"\nseed = 30\nfolds = 3\n'
                       f'data_dir = "{ml100k_dir}"\n')
        out = tmp_path / "cfg_out"
        assert run_cli("run", "--config", str(cfg), "--seed", "31",
                       "--out", str(out)) == 0
        payload = json.loads((out / "report.json").read_text())
        assert payload["experiment"] == "meta"   # from file
        assert payload["seed"] == 31             # flag wins

    def test_unknown_config_key(self, ml100k_dir, tmp_path):
        cfg = tmp_path / "bad.toml"
        cfg.write_text('sede = 30\n')
        assert run_cli("run", "--config", str(cfg),
                       "--data-dir", str(ml100k_dir)) == 1


class TestExitCodes:
    def test_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            run_cli("run", "--dataset", "ml20m")
        assert exc.value.code == 1

    def test_unknown_algorithm_is_usage_error(self, ml100k_dir):
        assert run_cli("run", "--data-dir", str(ml100k_dir),
                       "--algorithms", "svd3") == 1

    def test_ml1m_needs_allow_long(self, ml100k_dir):
        assert run_cli("run", "--dataset", "ml1m",
                       "--data-dir", str(ml100k_dir)) == 1

    def test_data_error(self, tmp_path):
        assert run_cli("run", "--dataset", "ml100k",
                       "--data-dir", str(tmp_path / "nope"),
                       "--out", str(tmp_path / "o")) == 2


class TestInspect:
    def test_prints_rows_with_best_marked(self, run_dir, capsys):
        assert run_cli("inspect", str(run_dir / "errors.csv")) == 0
        out = capsys.readouterr().out
        lines = [l for l in out.splitlines()
                 if l and not l.startswith("(") and "user" not in l]
        assert len(lines) == 10               # default selector
        assert out.count("*") >= 10
        assert "svdpp" in out                 # header carries algorithms

    def test_row_selector(self, run_dir, capsys):
        assert run_cli("inspect", str(run_dir / "errors.csv"),
                       "--rows", "0:3") == 0
        body = [l for l in capsys.readouterr().out.splitlines()
                if l and not l.startswith("(") and "user" not in l]
        assert len(body) == 3
        assert run_cli("inspect", str(run_dir / "errors.csv"),
                       "--rows", "1,4") == 0

    def test_missing_file(self, tmp_path):
        assert run_cli("inspect", str(tmp_path / "none.csv")) == 2

    def test_garbled_file(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("user,item\n1,2\n")
        assert run_cli("inspect", str(bad)) == 2
