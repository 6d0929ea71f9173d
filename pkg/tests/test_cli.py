import csv
import io
import json
import math
import subprocess
import sys

import pytest

from pivot_buffon.cli import main, render_json

PI = math.pi
SIM = ["--a", "0.3", "--b", "0.5", "--d", "1", "--n", "200000", "--seed", "42"]


def run_cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def as_json(*argv):
    code, text = run_cli(*argv)
    assert code == 0, text
    return json.loads(text)


class TestExact:
    def test_equal_arms(self):
        doc = as_json("exact", "--a", "0.5", "--b", "0.5", "--d", "1")
        assert doc["exact"]["p1"] == pytest.approx(4 / PI**2, abs=1e-15)
        assert set(doc) == {"params", "exact"}
        assert set(doc["exact"]) >= {"p0", "p1", "p2", "E_k", "k_squared", "mean_chord", "expected_n"}

    def test_classical(self):
        doc = as_json("exact", "--a", "0.5", "--b", "0", "--d", "1")
        assert doc["exact"]["p2"] == 0
        assert doc["exact"]["p_union"] == pytest.approx(1 / PI, abs=1e-15)

    def test_fixed_angle(self):
        doc = as_json("exact", "--a", "0.5", "--b", "0.5", "--d", "1", "--phi", str(PI / 2))
        assert doc["exact"]["source"] == "fixed_angle_exact"
        assert doc["exact"]["p1"] == pytest.approx(math.sqrt(2) / PI, abs=1e-15)

    @pytest.mark.parametrize(
        "argv",
        [
            ["--a", "0.6", "--b", "0.6", "--d", "1"],
            ["--a", "0.1", "--b", "0.1", "--d", "0"],
            ["--a", "0.1", "--b", "0.1", "--d", "-1"],
            ["--a", "0", "--b", "0", "--d", "1"],
            ["--a", "nan", "--b", "0", "--d", "1"],
            ["--a", "x", "--b", "0", "--d", "1"],
        ],
    )
    def test_constraint_errors(self, argv, capsys):
        code, text = run_cli("exact", *argv)
        assert code == 2
        assert text == ""
        assert capsys.readouterr().err

    def test_hypothesis_is_cited(self, capsys):
        run_cli("exact", "--a", "0.6", "--b", "0.6", "--d", "1")
        assert "a + b <= d" in capsys.readouterr().err

    def test_csv(self):
        code, text = run_cli("exact", "--a", "0.5", "--b", "0.5", "--d", "1", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(text)))
        assert len(rows) == 1
        assert float(rows[0]["exact.p1"]) == pytest.approx(4 / PI**2, abs=1e-15)


class TestSimulate:
    def test_report(self):
        doc = as_json("simulate", *SIM)
        est = doc["estimate"]
        assert est["counts"]["c0"] + est["counts"]["c1"] + est["counts"]["c2"] == 200_000
        assert doc["params"]["seed"] == 42
        assert est["p0"] + est["p1"] + est["p2"] == pytest.approx(1.0, abs=1e-15)

    def test_byte_identical(self):
        outs = {run_cli("simulate", *SIM, "--chunks", str(c))[1] for c in (1, 2, 8)}
        outs.add(run_cli("simulate", *SIM, "--chunks", "8", "--workers", "4")[1])
        assert len(outs) == 1

    @pytest.mark.parametrize("bad", [["--n", "0"], ["--n", "-5"], ["--n", "1.5"], ["--chunks", "0"]])
    def test_bad_config(self, bad):
        argv = ["simulate", "--a", "0.3", "--b", "0.5", "--d", "1", "--seed", "1"]
        if bad[0] != "--n":
            argv += ["--n", "100"]
        assert run_cli(*argv, *bad) == (2, "")

    def test_seed_from_environment(self, monkeypatch):
        argv = ["simulate", "--a", "0.3", "--b", "0.5", "--d", "1", "--n", "1000"]
        monkeypatch.delenv("PIVOT_BUFFON_SEED", raising=False)
        assert run_cli(*argv)[0] == 2
        monkeypatch.setenv("PIVOT_BUFFON_SEED", "42")
        assert run_cli(*argv) == run_cli(*argv, "--seed", "42")
        monkeypatch.setenv("PIVOT_BUFFON_SEED", "banana")
        assert run_cli(*argv)[0] == 2

    def test_csv_and_exponent_counts(self):
        code, text = run_cli("simulate", "--a", "0.3", "--b", "0.5", "--d", "1", "--n", "1e4", "--seed", "3",
                             "--format", "csv")
        assert code == 0
        row = next(csv.DictReader(io.StringIO(text)))
        assert row["params.n"] == "10000"
        assert "estimate.wilson_95.2.1" in row


class TestValidate:
    def test_pass(self, capsys):
        code, text = run_cli("validate", "--a", "0.3", "--b", "0.5", "--d", "1", "--n", "1000000", "--seed", "42")
        assert code == 0
        doc = json.loads(text)
        assert doc["tests"]["verdict"] == "PASS"
        assert set(doc) == {"params", "exact", "estimate", "tests"}
        assert capsys.readouterr().err.startswith("PASS")

    def test_injected_bug_fails(self, capsys):
        code, text = run_cli("validate", "--a", "0.3", "--b", "0.5", "--d", "1", "--n", "1000000", "--seed", "42",
                             "--inject-p1-scale", "1.05")
        assert code == 1
        doc = json.loads(text)
        assert doc["tests"]["verdict"] == "FAIL"
        assert max(abs(z) for z in doc["tests"]["z"]) > 4
        assert capsys.readouterr().err.startswith("FAIL")

    def test_single_segment_collapses(self):
        code, text = run_cli("validate", "--a", "0.5", "--b", "0", "--d", "1", "--n", "1000000", "--seed", "7")
        assert code == 0
        tests = json.loads(text)["tests"]
        assert tests["chi_square"]["categories"] == 2
        assert tests["chi_square"]["dof"] == 1
        assert tests["z"][2] == 0

    def test_fixed_angle(self):
        code, _ = run_cli("validate", "--a", "0.4", "--b", "0.4", "--d", "1", "--phi", str(PI),
                          "--n", "200000", "--seed", "5")
        assert code == 0


class TestSweep:
    def rows(self, *extra):
        return as_json("sweep", "--d", "1", "--total", "1", "--steps", "10", "--format", "json", *extra)["exact"]

    def test_endpoints_symmetric(self):
        rows = self.rows()
        assert len(rows) == 11
        assert [r["r"] for r in rows] == sorted(r["r"] for r in rows)
        first, last = rows[0], rows[-1]
        assert (first["p0"], first["p1"], first["p2"]) == (last["p0"], last["p1"], last["p2"])

    def test_midpoint_matches_exact(self):
        mid = self.rows()[5]
        exact = as_json("exact", "--a", "0.5", "--b", "0.5", "--d", "1")["exact"]
        assert (mid["p0"], mid["p1"], mid["p2"], mid["E_k"]) == (exact["p0"], exact["p1"], exact["p2"], exact["E_k"])

    def test_p2_peaks_at_equal_arms(self):
        rows = self.rows()
        assert max(range(len(rows)), key=lambda i: rows[i]["p2"]) == 5

    def test_csv_default(self):
        code, text = run_cli("sweep", "--d", "2", "--total", "1.5", "--steps", "4")
        lines = text.splitlines()
        assert lines[0] == "r,a,b,p0,p1,p2,k_squared,E_k,mean_chord"
        assert len(lines) == 6

    @pytest.mark.parametrize("argv", [["--total", "1.5", "--steps", "4"], ["--total", "0.5", "--steps", "0"]])
    def test_errors(self, argv):
        assert run_cli("sweep", "--d", "1", *argv) == (2, "")


def test_json_rendering_is_round_trip_safe():
    values = [0.1, 1 / 3, PI, 1e-300, 2.0**-1074, 123456789.123456789]
    text = render_json({"v": values, "n": {"inf": math.inf, "i": 3, "s": "x"}})
    doc = json.loads(text)
    assert doc["v"] == values
    assert doc["n"] == {"inf": None, "i": 3, "s": "x"}


def test_module_entry_point():
    argv = [sys.executable, "-m", "pivot_buffon", "exact", "--a", "0.6", "--b", "0.6", "--d", "1"]
    proc = subprocess.run(argv, capture_output=True, text=True)
    assert proc.returncode == 2
    assert proc.stdout == ""
    proc = subprocess.run(argv[:4] + ["--a", "0.5", "--b", "0.5", "--d", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["exact"]["p1"] == pytest.approx(4 / PI**2)
