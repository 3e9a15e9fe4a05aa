"""End-to-end CLI behavior: commands, formats, exit codes, determinism."""

import json
import math

import numpy as np
import pytest

from unsharpjoint import ValidationError, matrix_to_json, singlet, optimal_settings
from unsharpjoint.cli import RunConfig, main

INV_SQRT2 = 0.7071067811865475


@pytest.fixture
def fixtures(tmp_path):
    z = np.array([[1, 0], [0, 0]], dtype=complex)
    plus = np.full((2, 2), 0.5, dtype=complex)
    paths = {}

    def dump(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        paths[name] = str(p)

    dump("p.json", matrix_to_json(z))
    dump("q.json", matrix_to_json(plus))
    dump("singlet.json", matrix_to_json(singlet().matrix))
    a1, a2, b1, b2 = optimal_settings()
    dump(
        "settings.json",
        {
            key: matrix_to_json(o.yes_effect.matrix)
            for key, o in zip(("a1", "a2", "b1", "b2"), (a1, a2, b1, b2))
        },
    )
    dump(
        "pr.json",
        {
            "p": {
                "11": [[0.5, 0], [0, 0.5]],
                "12": [[0.5, 0], [0, 0.5]],
                "21": [[0.5, 0], [0, 0.5]],
                "22": [[0, 0.5], [0.5, 0]],
            }
        },
    )
    paths["dir"] = str(tmp_path)
    return paths


def _run(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


class TestSmear:
    def test_matches_library(self, fixtures, capsys):
        code, out = _run(
            ["smear", "--obs", fixtures["p.json"], "--lambda", str(INV_SQRT2)], capsys
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["schema"] == "uj/1"
        yes = np.array(payload["yes"]["re"])
        np.testing.assert_allclose(
            np.diag(yes), [(2 + math.sqrt(2)) / 4, (2 - math.sqrt(2)) / 4], atol=1e-12
        )


class TestBlocks:
    def test_structure(self, fixtures, capsys):
        code, out = _run(
            ["blocks", "--p", fixtures["p.json"], "--q", fixtures["q.json"]], capsys
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["blocks"] == [
            {
                "dim": 2,
                "basis_columns": [0, 1],
                "rank_p": 1,
                "rank_q": 1,
                "overlap": pytest.approx(INV_SQRT2, abs=1e-12),
            }
        ]


class TestDilate:
    def test_convention_tag(self, fixtures, capsys):
        code, out = _run(["dilate", "--obs", fixtures["p.json"]], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["rank"] == 2
        assert "ancilla" in payload["convention"]


class TestJointlyMeasurable:
    def test_feasible(self, fixtures, capsys):
        code, out = _run(
            [
                "jointly-measurable",
                "--o1", fixtures["p.json"],
                "--o2", fixtures["q.json"],
                "--lambda", "0.70",
            ],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["feasible"] == "yes"
        assert payload["witness"] is not None

    def test_expect_feasible_exit_code(self, fixtures, capsys):
        code, _ = _run(
            [
                "jointly-measurable",
                "--o1", fixtures["p.json"],
                "--o2", fixtures["q.json"],
                "--lambda", "0.72",
                "--expect-feasible",
            ],
            capsys,
        )
        assert code == 2

    def test_oracle_flag(self, fixtures, capsys):
        code, out = _run(
            [
                "jointly-measurable",
                "--o1", fixtures["p.json"],
                "--o2", fixtures["q.json"],
                "--lambda", "0.72",
                "--oracle",
            ],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["feasible"] == "no"
        assert payload["iterations"] > 0


class TestLambdaOpt:
    def test_pair_mode(self, fixtures, capsys):
        code, out = _run(
            ["lambda-opt", "--mode", "pair", "--m", "0,0,1", "--n", "1,0,0",
             "--tol", "1e-4"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["lambda_opt"] - INV_SQRT2) <= 1e-3

    def test_worst_case_deterministic(self, fixtures, capsys):
        args = ["lambda-opt", "--mode", "worst-case", "--tol", "1e-4"]
        code1, out1 = _run(args, capsys)
        code2, out2 = _run(args, capsys)
        assert code1 == code2 == 0
        assert out1 == out2
        payload = json.loads(out1)
        assert abs(payload["lambda_opt"] - INV_SQRT2) <= 1e-3


class TestChsh:
    def test_sharp(self, fixtures, capsys):
        code, out = _run(
            ["chsh", "--state", fixtures["singlet.json"],
             "--settings", fixtures["settings.json"]],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["value"] - 2.828427) <= 1e-6
        assert set(payload["terms"]) == {"t11", "t12", "t21", "t22"}

    def test_smeared(self, fixtures, capsys):
        code, out = _run(
            ["chsh", "--state", fixtures["singlet.json"],
             "--settings", fixtures["settings.json"],
             "--lambda", str(INV_SQRT2)],
            capsys,
        )
        payload = json.loads(out)
        assert abs(payload["value"] - 2.0) <= 1e-9
        assert payload["bound_lambda"] == 2.0


class TestBoxChsh:
    def test_pr_exact(self, fixtures, capsys):
        code, out = _run(["box-chsh", "--box", fixtures["pr.json"]], capsys)
        assert code == 0
        assert json.loads(out)["value"] == 4.0


class TestSweep:
    def test_verdict_flip_and_columns(self, fixtures, capsys):
        code, out = _run(
            ["sweep", "--start", "0.5", "--stop", "1.0", "--step", "0.05"], capsys
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "lambda,feasible,smeared_chsh,bound"
        rows = [line.split(",") for line in lines[1:]]
        verdicts = {float(r[0]): r[1] for r in rows}
        assert verdicts[0.7] == "yes"
        assert verdicts[0.75] == "no"
        for r in rows:
            lam, value, bound = float(r[0]), float(r[2]), float(r[3])
            assert bound == pytest.approx(2.0 / lam, rel=1e-12)
            # Smeared value is lam times 2*sqrt(2) for the default z/x
            # pair with matched Bob settings.
            assert value == pytest.approx(lam * 2 * math.sqrt(2), abs=1e-9)
        last = rows[-1]
        assert float(last[0]) == 1.0
        assert float(last[2]) == pytest.approx(2 * math.sqrt(2), abs=1e-9)

    def test_thread_cap_preserves_output(self, fixtures, capsys, monkeypatch):
        args = ["sweep", "--start", "0.5", "--stop", "0.9", "--step", "0.1"]
        _, serial = _run(args, capsys)
        monkeypatch.setenv("UJ_THREADS", "4")
        _, threaded = _run(args, capsys)
        assert serial == threaded


class TestErrors:
    def test_malformed_json_exits_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code = main(["smear", "--obs", str(bad), "--lambda", "0.5"])
        err = capsys.readouterr().err
        assert code == 1
        assert "line" in err

    def test_missing_file_exits_one(self, capsys):
        code = main(["smear", "--obs", "/nonexistent.json", "--lambda", "0.5"])
        assert code == 1

    def test_povm_above_gate_suggests_oracle(self, tmp_path, capsys):
        unsharp = tmp_path / "unsharp.json"
        unsharp.write_text(json.dumps(matrix_to_json(np.diag([0.9, 0.2]))))
        tilted = tmp_path / "tilted.json"
        tilted.write_text(
            json.dumps(matrix_to_json(np.array([[0.7, 0.2], [0.2, 0.4]])))
        )
        code = main(
            ["jointly-measurable", "--o1", str(unsharp), "--o2", str(tilted),
             "--lambda", "0.9"]
        )
        err = capsys.readouterr().err
        assert code == 1
        assert "--oracle" in err


class TestRunConfig:
    def test_tol_window(self):
        with pytest.raises(ValidationError):
            RunConfig(command="smear", tol=1.0)
        with pytest.raises(ValidationError):
            RunConfig(command="smear", tol=1e-13)

    def test_seed_window(self):
        with pytest.raises(ValidationError):
            RunConfig(command="smear", seed=-1)
        with pytest.raises(ValidationError):
            RunConfig(command="smear", seed=2**64)

    def test_format_vocabulary(self):
        with pytest.raises(ValidationError):
            RunConfig(command="smear", fmt="xml")


class TestOutputFile:
    def test_report_written(self, fixtures, tmp_path, capsys):
        out_path = tmp_path / "report.json"
        code, _ = _run(
            ["box-chsh", "--box", fixtures["pr.json"], "--out", str(out_path)], capsys
        )
        assert code == 0
        assert json.loads(out_path.read_text())["value"] == 4.0
