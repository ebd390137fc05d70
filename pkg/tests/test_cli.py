import csv
import io
import json
import subprocess
import sys

import pytest

from boldplay.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestTail:
    @pytest.mark.parametrize(
        "stakes, p, t, exact",
        [
            ("1/2,1/4,1/4", "1/3", "1/2", "11/27"),
            ("1", "0.37", "0.8", "37/100"),
            ("1/3,1/3,1/3", "2/3", "2/3", "20/27"),
        ],
    )
    def test_examples(self, capsys, stakes, p, t, exact):
        code, out, _ = run(capsys, "tail", "--stakes", stakes, "--p", p, "--t", t)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == exact

    def test_decimal_line(self, capsys):
        _, out, _ = run(capsys, "tail", "--stakes", "1", "--p", "1/3", "--t", "1/2", "--decimals", "4")
        assert out.splitlines() == ["1/3", "0.3333"]

    def test_engines_agree(self, capsys):
        outs = [
            run(capsys, "tail", "--stakes", "1/2,1/3,1/6", "--p", "2/5", "--t", "1/2", "--method", m)[1]
            for m in ("enum", "dp")
        ]
        assert outs[0] == outs[1]

    def test_monte_carlo(self, capsys):
        code, out, _ = run(
            capsys, "tail", "--stakes", "1/2,1/2", "--p", "1/2", "--t", "1/2",
            "--method", "mc", "--samples", "20000", "--seed", "3",
        )
        assert code == 0 and out.splitlines()[2].startswith("stderr")
        assert abs(float(out.splitlines()[1]) - 0.75) < 0.02

    def test_json(self, capsys):
        _, out, _ = run(capsys, "tail", "--stakes", "1/2,1/4,1/4", "--p", "1/3", "--t", "1/2", "--format", "json")
        data = json.loads(out)
        assert data["value"] == "11/27" and data["method"] == "enumeration"

    def test_sum_not_one(self, capsys):
        code, _, err = run(capsys, "tail", "--stakes", "1/2,1/4", "--p", "1/3", "--t", "1/2")
        assert code == 2 and "error" in err

    def test_normalize(self, capsys):
        code, out, _ = run(capsys, "tail", "--stakes", "2,1,1", "--p", "1/3", "--t", "1/2", "--normalize")
        assert code == 0 and out.splitlines()[0] == "11/27"

    def test_malformed_rational(self, capsys):
        code, _, _ = run(capsys, "tail", "--stakes", "1", "--p", "one third", "--t", "1/2")
        assert code == 2

    def test_regime(self, capsys):
        code, _, err = run(capsys, "tail", "--stakes", "1", "--p", "3/2", "--t", "1/2")
        assert code in (2, 3) and err


class TestFigures:
    def test_region_csv(self, capsys, tmp_path):
        path = tmp_path / "region.csv"
        code, out, _ = run(capsys, "region", "--resolution", "100", "--out", str(path))
        assert code == 0 and out == ""
        rows = {(r["p"], r["t"]): r for r in csv.DictReader(path.open())}
        assert rows[("3/10", "3/5")]["status"] == "bold_optimal"
        assert rows[("11/20", "3/5")]["status"] == "bold_not_optimal"
        assert rows[("9/20", "12/25")]["status"] == "unknown"
        assert b"\r\n" not in path.read_bytes()

    def test_region_json(self, capsys):
        _, out, _ = run(capsys, "region", "--resolution", "4", "--format", "json")
        data = json.loads(out)
        assert data["resolution"] == 4 and len(data["points"]) == 15

    def test_bounds(self, capsys):
        _, out, _ = run(capsys, "bounds", "--resolution", "1000")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 999
        assert rows[0]["p"] == "1/1000"
        half = next(r for r in rows if r["p"] == "1/2")
        assert float(half["lower"]) == 0.75
        for r in rows:
            assert float(r["lower"]) <= min(float(r["upper_pz"]), float(r["upper_feige"])) + 1e-12

    def test_unwritable(self, capsys, tmp_path):
        code, _, err = run(capsys, "region", "--resolution", "4", "--out", str(tmp_path / "missing" / "x.csv"))
        assert code == 1 and err


class TestConjecture:
    @pytest.mark.parametrize("p, t, n_max, k", [("2/3", "2/3", "4", 3), ("1/2", "1/2", "5", 2)])
    def test_point(self, capsys, p, t, n_max, k):
        code, out, _ = run(capsys, "conjecture", "--p", p, "--t", t, "--n-max", n_max)
        data = json.loads(out)
        assert code == 0 and data["confirmed"] and data["optimal_k"] == k

    def test_scan(self, capsys, tmp_path):
        cx = tmp_path / "counterexamples.json"
        code, out, _ = run(capsys, "scan", "--grid", "10", "--n-max", "3", "--counterexample-out", str(cx))
        data = json.loads(out)
        assert code == 0
        assert data["points"] == 55 == data["confirmed"]
        assert data["counterexamples"] == []
        assert not cx.exists()

    def test_cap(self, capsys):
        code, _, err = run(capsys, "scan", "--grid", "2", "--n-max", "9")
        assert code == 4 and "cap" in err

    def test_regime(self, capsys):
        code, _, _ = run(capsys, "conjecture", "--p", "3/4", "--t", "1/2")
        assert code == 3


class TestOtherCommands:
    def test_classify(self, capsys):
        _, out, _ = run(capsys, "classify", "--p", "11/20", "--t", "3/5")
        data = json.loads(out)
        assert data["status"] == "bold_not_optimal" and data["witness"]["value"] == "949003/1600000"

    def test_optimize(self, capsys):
        _, out, _ = run(capsys, "optimize", "--p", "2/3", "--t", "2/3", "--n", "3")
        assert json.loads(out)["best"]["value"] == "20/27"

    def test_optimize_local(self, capsys):
        _, out, _ = run(capsys, "optimize", "--p", "2/3", "--t", "2/3", "--n", "3", "--mode", "local", "--restarts", "0")
        assert json.loads(out)["method"] == "local_search"

    def test_families(self, capsys):
        _, out, _ = run(capsys, "families", "--n", "2", "--t", "2/3")
        data = json.loads(out)
        assert {tuple(map(tuple, f["members"])) for f in data["families"]} == {((1, 2),), ((1,), (1, 2))}

    def test_families_cap(self, capsys):
        assert run(capsys, "families", "--n", "7", "--t", "1/2")[0] == 4


class TestPepys:
    def test_dice(self, capsys):
        code, out, err = run(capsys, "pepys", "--a", "6", "--p", "1/6")
        lines = out.splitlines()
        assert code == 0 and err == ""
        assert lines[0] == "k,bets,probability,decimal"
        assert [round(float(line.split(",")[3]), 4) for line in lines[1:4]] == [0.6651, 0.6187, 0.5973]
        assert lines[-1] == "# strictly decreasing: yes"

    def test_coins(self, capsys):
        _, out, _ = run(capsys, "pepys", "--a", "2", "--p", "1/2", "--k-max", "5")
        assert out.splitlines()[-1].endswith("yes")

    def test_single_row(self, capsys):
        _, out, _ = run(capsys, "pepys", "--a", "6", "--p", "1/6", "--k-max", "1")
        assert len(out.splitlines()) == 3 and out.splitlines()[-1].endswith("yes")

    def test_warning_above_regime(self, capsys):
        code, _, err = run(capsys, "pepys", "--a", "3", "--p", "1/2")
        assert code == 0 and "warning" in err


class TestReproducibility:
    @pytest.mark.parametrize(
        "argv",
        [
            ["tail", "--stakes", "1/2,1/4,1/4", "--p", "1/3", "--t", "1/2", "--method", "mc", "--samples", "5000", "--seed", "9"],
            ["region", "--resolution", "12"],
            ["bounds", "--resolution", "50", "--decimals", "20"],
            ["optimize", "--p", "3/10", "--t", "9/20", "--n", "4", "--mode", "local", "--seed", "5", "--restarts", "3"],
            ["pepys", "--a", "4", "--p", "1/5", "--k-max", "6"],
        ],
    )
    def test_config_round_trip(self, capsys, tmp_path, argv):
        out_path, cfg = tmp_path / "out.txt", tmp_path / "run.json"
        assert run(capsys, *argv, "--out", str(out_path), "--save-config", str(cfg))[0] == 0
        first = out_path.read_bytes()
        out_path.unlink()
        assert run(capsys, "--config", str(cfg))[0] == 0
        assert out_path.read_bytes() == first

    def test_bad_config(self, capsys, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text("{}")
        assert run(capsys, "--config", str(cfg))[0] == 2

    def test_no_command(self, capsys):
        assert run(capsys)[0] == 2

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "boldplay", "tail", "--stakes", "1", "--p", "1/4", "--t", "1"],
            capture_output=True, text=True, check=False,
        )
        assert proc.returncode == 0 and proc.stdout.splitlines()[0] == "1/4"
