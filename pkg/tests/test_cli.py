import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qent import cli, states


def write(tmp_path, obj, name="state.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(path)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return rows[:-1], rows[-1]


class TestAnalyze:
    def test_werner_half(self, tmp_path, capsys):
        code, out, _ = run(capsys, "analyze", write(tmp_path, {"family": "werner", "p": 0.5}))
        assert code == cli.EXIT_DETECTED
        verdicts = {c["name"]: c["verdict"] for c in json.loads(out)["criteria"]}
        assert verdicts["trace_norm"] == "entangled"
        assert verdicts["chsh"] == "not_detected"

    def test_maximally_mixed(self, tmp_path, capsys):
        density = states.density_to_json(np.eye(4) / 4)
        code, out, _ = run(capsys, "analyze", write(tmp_path, {"density": density}))
        assert code == cli.EXIT_NOT_DETECTED
        assert json.loads(out)["summary"]["concurrence"] == 0.0

    def test_truncated_file(self, tmp_path, capsys):
        code, _, err = run(capsys, "analyze", write(tmp_path, '{"family": "wer'))
        assert code == cli.EXIT_INPUT_ERROR
        assert "error" in err

    def test_missing_file(self, tmp_path, capsys):
        assert run(capsys, "analyze", str(tmp_path / "nope.json"))[0] == cli.EXIT_INPUT_ERROR

    def test_non_physical_density(self, tmp_path, capsys):
        rho = np.diag([1.5, -0.5, 0, 0])
        code, _, err = run(capsys, "analyze", write(tmp_path, {"density": states.density_to_json(rho)}))
        assert code == cli.EXIT_INPUT_ERROR
        assert "min_eigenvalue" in err

    def test_report_keys_and_order(self, tmp_path, capsys):
        _, out, _ = run(capsys, "analyze", write(tmp_path, {"family": "werner", "p": 0.9}))
        report = json.loads(out)
        assert set(report) == {"state", "density", "correlation", "criteria", "summary", "timing"}
        assert [c["name"] for c in report["criteria"]] == [
            "trace_norm",
            "chsh",
            "ppt",
            "witness",
            "concurrence_lower_bound",
        ]

    def test_round_trip(self, tmp_path, capsys):
        rho = states.random_mixed(12)
        _, first, _ = run(capsys, "analyze", write(tmp_path, {"density": states.density_to_json(rho)}))
        first = json.loads(first)
        _, second, _ = run(capsys, "analyze", write(tmp_path, {"density": first["density"]}, "again.json"))
        second = json.loads(second)
        np.testing.assert_allclose(second["correlation"], first["correlation"], atol=1e-12)
        for a, b in zip(first["criteria"], second["criteria"]):
            assert a["verdict"] == b["verdict"]
            assert a["statistic"] == pytest.approx(b["statistic"], abs=1e-12)
        for key in ("concurrence", "eof", "lower_bound"):
            assert first["summary"][key] == pytest.approx(second["summary"][key], abs=1e-12)

    @pytest.mark.parametrize("p", [0.0, 0.2, 0.5, 1.0])
    def test_exit_code_independent_of_format(self, tmp_path, capsys, p):
        path = write(tmp_path, {"family": "werner", "p": p})
        code_json, _, _ = run(capsys, "analyze", path)
        code_table, table, _ = run(capsys, "analyze", path, "--format", "table")
        assert code_json == code_table
        assert "trace_norm" in table

    def test_tolerance_variable(self, tmp_path, capsys, monkeypatch):
        path = write(tmp_path, {"family": "werner", "p": 0.34})
        assert run(capsys, "analyze", path)[0] == cli.EXIT_DETECTED
        monkeypatch.setenv("QENT_TOLERANCE", "0.1")
        assert run(capsys, "analyze", path)[0] == cli.EXIT_NOT_DETECTED
        monkeypatch.setenv("QENT_TOLERANCE", "abc")
        assert run(capsys, "analyze", path)[0] == cli.EXIT_INPUT_ERROR


class TestSimulate:
    def test_bell_full9(self, tmp_path, capsys):
        path = write(tmp_path, {"pure": [[s, 0] for s in (math.sqrt(0.5), 0, 0, math.sqrt(0.5))]})
        code, out, _ = run(capsys, "simulate", path, "--strategy", "full9", "--shots", "10000", "--seed", "42")
        assert code == cli.EXIT_DETECTED
        assert "entangled" in out
        assert "90000" in out and "81" in out

    def test_werner_schmidt2(self, tmp_path, capsys):
        path = write(tmp_path, {"family": "werner", "p": 0.2})
        code, out, _ = run(
            capsys, "simulate", path, "--strategy", "schmidt2", "--shots", "10000", "--format", "json"
        )
        data = json.loads(out)
        assert code == cli.EXIT_NOT_DETECTED
        assert data["verdict"]["verdict"] == "not_detected"
        assert data["f_cost"] == 4 and data["total_shots"] == 20000

    def test_missing_shots_is_usage_error(self, tmp_path, capsys):
        path = write(tmp_path, {"family": "werner", "p": 0.2})
        with pytest.raises(SystemExit) as exc:
            cli.main(["simulate", path, "--strategy", "full9"])
        assert exc.value.code == 2

    def test_record_input(self, tmp_path, capsys):
        state = write(tmp_path, {"family": "werner", "p": 0.9})
        record = str(tmp_path / "record.json")
        first = run(capsys, "simulate", state, "--strategy", "full9", "--shots", "2000", "--record-out", record)
        second = run(capsys, "simulate", record, "--strategy", "full9")
        assert first[0] == second[0] == cli.EXIT_DETECTED
        assert first[1] == second[1]

    def test_record_missing_settings(self, tmp_path, capsys):
        state = write(tmp_path, {"family": "werner", "p": 0.9})
        record = str(tmp_path / "record.json")
        run(capsys, "simulate", state, "--strategy", "schmidt2", "--shots", "100", "--record-out", record)
        assert run(capsys, "simulate", record, "--strategy", "full9")[0] == cli.EXIT_INPUT_ERROR

    def test_pure3(self, tmp_path, capsys):
        path = write(tmp_path, {"pure": [[0.8, 0], [0, 0], [0, 0], [0.6, 0]]})
        code, out, _ = run(capsys, "simulate", path, "--strategy", "pure3", "--shots", "100000", "--format", "json")
        assert code == cli.EXIT_DETECTED
        assert json.loads(out)["verdict"]["statistic"] == pytest.approx(0.96, abs=0.01)

    def test_deterministic(self, tmp_path, capsys):
        path = write(tmp_path, {"family": "werner", "p": 0.4})
        argv = ("simulate", path, "--strategy", "full9", "--shots", "500", "--seed", "3", "--format", "json")
        assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


class TestStudy:
    def test_werner_grid(self, tmp_path, capsys):
        out = str(tmp_path / "w.csv")
        assert run(capsys, "study", "--ensemble", "werner", "--count", "21", "--out", out)[0] == 0
        rows, summary = read_csv(out)
        assert summary["index"] == "detection_rate"
        p = np.array([float(r["param"]) for r in rows])
        np.testing.assert_allclose(p, np.linspace(0, 1, 21))
        for r, pk in zip(rows, p):
            assert r["trace_norm_verdict"] == ("entangled" if pk > 1 / 3 + 1e-6 else "not_detected")
            assert r["ppt_verdict"] == r["trace_norm_verdict"]
            assert r["chsh_verdict"] == ("entangled" if pk > 1 / math.sqrt(2) else "not_detected")
        assert float(summary["trace_norm_verdict"]) == pytest.approx(14 / 21)
        assert float(summary["chsh_verdict"]) == pytest.approx(6 / 21)

    def test_pure_lower_bound_equals_concurrence(self, tmp_path, capsys):
        out = str(tmp_path / "p.csv")
        run(capsys, "study", "--ensemble", "pure", "--count", "500", "--seed", "1", "--out", out)
        rows, _ = read_csv(out)
        for r in rows:
            assert float(r["lower_bound"]) == pytest.approx(float(r["concurrence"]), abs=1e-8)

    def test_mixed_inclusion(self, tmp_path, capsys):
        out = str(tmp_path / "m.csv")
        code, stdout, _ = run(capsys, "study", "--ensemble", "mixed", "--count", "2000", "--seed", "2", "--out", out)
        assert code == 0
        assert "no violations" in stdout

    def test_byte_reproducible(self, tmp_path, capsys):
        a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
        run(capsys, "study", "--ensemble", "mixed", "--count", "200", "--seed", "5", "--out", a)
        run(capsys, "study", "--ensemble", "mixed", "--count", "200", "--seed", "5", "--out", b)
        with open(a, "rb") as fa, open(b, "rb") as fb:
            assert fa.read() == fb.read()

    def test_rows_keyed_by_index(self):
        rhos, params = cli.study_ensemble("mixed", 40, 9)
        rows = cli.study_rows(rhos, params)
        single = [cli.study_rows(rhos[k : k + 1], params[k : k + 1])[0] for k in range(40)]
        for k, (r, s) in enumerate(zip(rows, single)):
            s["index"] = k
            assert r["trace_norm_verdict"] == s["trace_norm_verdict"]
            assert r["trace_norm"] == pytest.approx(s["trace_norm"], abs=1e-12)

    def test_inclusion_violation_exit_code(self):
        rows = [{"index": 0, "chsh_verdict": "entangled", "trace_norm_verdict": "not_detected"}]
        assert cli.inclusion_violations(rows) == [0]

    def test_bad_count(self, tmp_path, capsys):
        out = str(tmp_path / "x.csv")
        assert run(capsys, "study", "--ensemble", "pure", "--count", "0", "--out", out)[0] == cli.EXIT_INPUT_ERROR


def test_module_entry_point(tmp_path):
    path = write(tmp_path, {"family": "werner", "p": 0.0})
    proc = subprocess.run([sys.executable, "-m", "qent", "analyze", path], capture_output=True, text=True)
    assert proc.returncode == cli.EXIT_NOT_DETECTED
    assert json.loads(proc.stdout)["summary"]["concurrence"] == 0.0
