import json
import subprocess
import sys
from pathlib import Path

import pytest

from qpaths.cli import main

DATA = Path(__file__).parent / "data"


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out


class TestPartition:
    def test_closed_form_output(self, capsys):
        code, out = run_cli(["partition", "--n", "2", "--m", "1"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["result"]["polynomial"] == [[6, "1"], [8, "1"], [10, "1"]]
        assert payload["command"] == "partition"
        assert payload["library_version"]
        assert payload["config"]["method"] == "closed"

    def test_methods_agree(self, capsys):
        outputs = []
        for flag in ("--closed", "--recursive", "--oracle"):
            code, out = run_cli(["partition", "--n", "3", "--m", "2", flag], capsys)
            assert code == 0
            outputs.append(json.loads(out)["result"]["polynomial"])
        assert outputs[0] == outputs[1] == outputs[2]

    def test_exact_evaluation(self, capsys):
        code, out = run_cli(["partition", "--n", "1", "--m", "1", "--eval", "1/2"], capsys)
        payload = json.loads(out)
        assert payload["result"]["value"] == "5/16"
        assert payload["q_mode"] == "exact"

    def test_float_evaluation(self, capsys):
        code, out = run_cli(
            ["partition", "--n", "1", "--m", "1", "--eval", "0.5", "--float"], capsys
        )
        payload = json.loads(out)
        assert payload["result"]["value"] == 0.3125
        assert payload["q_mode"] == "float"

    def test_csv_table(self, capsys):
        code, out = run_cli(["partition", "--n", "2", "--m", "1", "--format", "csv"], capsys)
        assert code == 0
        assert out == "exponent,coefficient\n6,1\n8,1\n10,1\n"

    def test_oracle_cap(self, capsys):
        code, _ = run_cli(
            ["partition", "--n", "12", "--m", "12", "--oracle", "--cap", "100"], capsys
        )
        assert code == 2

    def test_usage_error_exit_2(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["partition", "--n", "2"])
        assert err.value.code == 2

    def test_bad_q_is_a_diagnostic(self, capsys):
        code = main(["partition", "--n", "1", "--m", "1", "--eval", "3/2"])
        assert code == 2
        assert "q must lie strictly in (0, 1)" in capsys.readouterr().err


class TestCorrelate:
    def test_eval_mode(self, capsys):
        code, out = run_cli(
            ["correlate", "--n", "1", "--m", "1", "--sites", "2:down", "--eval", "1/2"], capsys
        )
        assert code == 0
        payload = json.loads(out)
        check = payload["result"]["checks"][0]
        assert check["probability"] == "1/5"
        assert check["bound"] == "1/4"
        assert payload["result"]["bound_holds"] is True
        assert payload["result"]["in_regime"] is True

    def test_exact_mode_uses_default_grid(self, capsys):
        code, out = run_cli(
            ["correlate", "--n", "2", "--m", "2", "--sites", "3:down,4:down", "--exact"], capsys
        )
        payload = json.loads(out)
        assert payload["result"]["probability"]["num"] == [[14, "1"]]
        assert [c["q"] for c in payload["result"]["checks"]] == ["1/5", "1/2", "4/5"]
        assert payload["result"]["bound_exponent"] == 8

    def test_bad_sites_spec(self, capsys):
        code, _ = run_cli(["correlate", "--n", "1", "--m", "1", "--sites", "2:diag"], capsys)
        assert code == 2

    def test_inconsistent_query_is_exit_2(self, capsys):
        code, _ = run_cli(
            ["correlate", "--n", "1", "--m", "1", "--sites", "1:down,2:down"], capsys
        )
        assert code == 2


class TestFluctuations:
    def test_distribution_table(self, capsys):
        code, out = run_cli(["fluctuations", "--N", "4", "--L", "2", "--q", "1/2"], capsys)
        assert code == 0
        payload = json.loads(out)
        rows = {r["l"]: r for r in payload["result"]["distribution"]}
        assert set(rows) == {-1, 0, 1}
        assert rows[1]["probability"] == rows[-1]["probability"]
        assert rows[0]["tail_bound"] is None
        assert rows[1]["tail_bound"] > rows[1]["probability_float"]
        assert payload["result"]["window"] == [2, 3]

    def test_csv(self, capsys):
        code, out = run_cli(
            ["fluctuations", "--N", "4", "--L", "2", "--q", "1/2", "--format", "csv"], capsys
        )
        lines = out.splitlines()
        assert lines[0] == "l,probability,probability_float,tail_bound"
        assert len(lines) == 4

    def test_odd_window_rejected(self, capsys):
        code, _ = run_cli(["fluctuations", "--N", "4", "--L", "3", "--q", "1/2"], capsys)
        assert code == 2


class TestSample:
    def test_text_lines(self, capsys):
        code, out = run_cli(
            ["sample", "--n", "2", "--m", "2", "--q", "1/2", "--count", "3", "--seed", "7"],
            capsys,
        )
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 3
        assert all(line.startswith("(0,0):") for line in lines)
        assert all(sorted(line.split(":")[1]) == ["H", "H", "V", "V"] for line in lines)

    def test_deterministic(self, capsys):
        argv = ["sample", "--n", "3", "--m", "3", "--q", "1/3", "--count", "5", "--seed", "11"]
        _, first = run_cli(argv, capsys)
        _, second = run_cli(argv, capsys)
        assert first == second

    def test_json_envelope(self, capsys):
        code, out = run_cli(
            [
                "sample", "--n", "1", "--m", "1", "--q", "1/2",
                "--count", "2", "--seed", "0", "--format", "json",
            ],
            capsys,
        )
        payload = json.loads(out)
        assert len(payload["result"]["paths"]) == 2


class TestReduce2d:
    def test_check_passes(self, capsys):
        code, out = run_cli(["reduce2d", "--N", "3", "--M", "3", "--k", "3", "--check"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["result"]["check_passed"] is True
        term = payload["result"]["terms"][0]
        assert term["compositions"] == [[2, 0, 0, 1], [1, 1, 1, 0], [0, 3, 0, 0]]
        assert term["polynomial"][0] == [18, "1"]

    def test_all_k(self, capsys):
        code, out = run_cli(["reduce2d", "--N", "2", "--M", "2", "--all", "--check"], capsys)
        payload = json.loads(out)
        assert len(payload["result"]["terms"]) == 5
        assert payload["result"]["check_passed"] is True

    def test_requires_k_or_all(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["reduce2d", "--N", "2", "--M", "2"])
        assert err.value.code == 2


class TestVerify:
    def test_identities_pass(self, capsys):
        code, out = run_cli(
            ["verify", "identities", "--max-nm", "5", "--enum-limit", "5", "--count", "20"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["result"]["passed"] is True
        names = [r["name"] for r in payload["result"]["records"]]
        assert "pascal-upper-corner" in names and "markov-cut-factorization" in names

    def test_csv_report(self, capsys):
        code, out = run_cli(
            [
                "verify", "identities", "--max-nm", "4", "--enum-limit", "4",
                "--count", "10", "--format", "csv",
            ],
            capsys,
        )
        assert code == 0
        assert out.splitlines()[0] == "name,instances,failure_count,informational,passed"


class TestSweep:
    def test_grid_over_sectors(self, tmp_path, capsys):
        grid = tmp_path / "grid.cfg"
        grid.write_text("n = 1, 2\nm = 1, 2  # endpoint\n", encoding="utf-8")
        argv = ["partition", "--n", "0", "--m", "0", "--sweep", str(grid), "--jobs", "2"]
        code, out = run_cli(argv, capsys)
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 4
        configs = [json.loads(line)["config"] for line in lines]
        assert [(c["n"], c["m"]) for c in configs] == [(1, 1), (1, 2), (2, 1), (2, 2)]

    def test_sweep_deterministic(self, tmp_path, capsys):
        grid = tmp_path / "grid.cfg"
        grid.write_text("L = 2, 4\n", encoding="utf-8")
        argv = ["fluctuations", "--N", "8", "--L", "2", "--q", "1/2", "--sweep", str(grid)]
        _, first = run_cli(argv, capsys)
        _, second = run_cli(argv, capsys)
        assert first == second

    def test_empty_grid_rejected(self, tmp_path, capsys):
        grid = tmp_path / "grid.cfg"
        grid.write_text("# nothing here\n", encoding="utf-8")
        code, _ = run_cli(["partition", "--n", "1", "--m", "1", "--sweep", str(grid)], capsys)
        assert code == 2


class TestGoldenFiles:
    @pytest.mark.parametrize(
        "name,argv",
        [
            ("partition_n2_m1.json", ["partition", "--n", "2", "--m", "1"]),
            ("fluctuations_N4_L2.json", ["fluctuations", "--N", "4", "--L", "2", "--q", "1/2"]),
            (
                "correlate_n2_m2_34down.json",
                ["correlate", "--n", "2", "--m", "2", "--sites", "3:down,4:down"],
            ),
            ("reduce2d_N2_M2.json", ["reduce2d", "--N", "2", "--M", "2", "--all", "--check"]),
            (
                "sample_n3_m3.txt",
                ["sample", "--n", "3", "--m", "3", "--q", "1/2", "--count", "4", "--seed", "5"],
            ),
            ("partition_n2_m1.csv", ["partition", "--n", "2", "--m", "1", "--format", "csv"]),
        ],
    )
    def test_byte_identical(self, name, argv, capsys):
        code, out = run_cli(argv, capsys)
        assert code == 0
        assert out == (DATA / name).read_text(encoding="utf-8")


def test_cache_size_env_var(monkeypatch, capsys):
    monkeypatch.setenv("QPATHS_CACHE_SIZE", "2")
    code, out = run_cli(["partition", "--n", "4", "--m", "4"], capsys)
    assert code == 0
    assert json.loads(out)["result"]["polynomial"][0] == [20, "1"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qpaths", "partition", "--n", "1", "--m", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["polynomial"] == [[2, "1"], [4, "1"]]
