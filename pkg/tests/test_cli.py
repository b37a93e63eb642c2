"""Tests for the command-line interface."""

import importlib
import json
import math
from pathlib import Path

import pytest

from normattain.cli import _parse_family, build_parser, main
from normattain.errors import ValidationError

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _json(capsys, *argv):
    code, out, err = _run(capsys, *argv, "--json")
    assert code == 0, err
    return json.loads(out)


class TestAnalyze:
    def test_golden_ratio(self, capsys):
        report = _json(capsys, "analyze", str(PROBLEMS / "golden.json"))
        assert report["kind"] == "verdict"
        assert report["attained"] is True
        assert report["norm"] == pytest.approx((1 + math.sqrt(5)) / 2, rel=1e-12)

    def test_skew_file(self, capsys):
        report = _json(capsys, "analyze", str(PROBLEMS / "t2x2.json"))
        assert report["subject"] == "T"
        assert report["norm"] == pytest.approx(math.sqrt(5))
        assert report["kernel_nontrivial"] is True

    def test_two_blocks(self, capsys):
        report = _json(capsys, "analyze", str(PROBLEMS / "t_two_blocks.json"))
        assert report["norm"] == pytest.approx(2.0)
        assert report["sigma"] == [{"kind": "atom", "x": pytest.approx(0.25)}]

    def test_example3_text(self, capsys):
        code, out, _ = _run(capsys, "analyze", str(PROBLEMS / "ex3_one_over_n.json"))
        assert code == 0
        assert "attained: false" in out
        assert "lambda_max: 1\n" in out
        assert "Sigma: limit point 1" in out

    def test_example3_attained(self, capsys):
        report = _json(capsys, "analyze", str(PROBLEMS / "ex3_two_over_n.json"))
        assert report["attained"] is True
        assert report["lambda_max"] == pytest.approx(9.0)
        assert report["norm"] == pytest.approx(3.0)

    def test_interval_endpoint(self, capsys):
        report = _json(capsys, "analyze", str(PROBLEMS / "interval_ac.json"))
        assert report["attained"] is False
        assert report["clause"] == "sigma_null"

    def test_plateau(self, capsys):
        report = _json(capsys, "analyze", str(PROBLEMS / "plateau_ac.json"))
        assert report["attained"] is True
        assert report["sigma"][0]["kind"] == "interval_plateau"

    def test_unspecified_plateau_exits_three(self, capsys):
        code, out, err = _run(capsys, "analyze", str(PROBLEMS / "plateau_unspecified.json"))
        assert code == 3
        assert out == ""
        assert err.startswith("Error:")

    def test_options_after_subcommand(self, capsys):
        report = _json(capsys, "analyze", str(PROBLEMS / "interval_ac.json"), "--grid", "512", "--refine", "10")
        assert report["norm"] == pytest.approx(math.sqrt(1 / 0.3))

    def test_json_is_byte_identical(self, capsys):
        _, first, _ = _run(capsys, "analyze", str(PROBLEMS / "buckholtz.json"), "--json")
        _, second, _ = _run(capsys, "analyze", str(PROBLEMS / "buckholtz.json"), "--json")
        assert first == second

    def test_output_file(self, capsys, tmp_path):
        dest = tmp_path / "report.json"
        code, out, _ = _run(capsys, "--json", "--output", str(dest), "analyze", str(PROBLEMS / "buckholtz.json"))
        assert code == 0
        assert out == ""
        assert json.loads(dest.read_text(encoding="utf-8"))["norm"] == pytest.approx(math.sqrt(5))

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = _run(capsys, "analyze", str(tmp_path / "missing.json"))
        assert code == 1
        assert "Cannot read" in err

    def test_syntax_error_exit_code(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(
            json.dumps({"kind": "element", "model": {"atoms": [0.5]}, "symbol": [["sqrt(", 0], [0, 1]]}),
            encoding="utf-8",
        )
        code, _, err = _run(capsys, "analyze", str(path))
        assert code == 1
        assert "$.symbol[0][0]" in err


class TestDecompose:
    def test_pair(self, capsys):
        report = _json(capsys, "decompose", str(PROBLEMS / "pair2x2.json"))
        assert report["sizes"] == {"m00": 0, "m01": 0, "m10": 0, "m11": 0, "generic": 1}
        assert report["h_values"] == pytest.approx([0.36])
        assert report["reconstruct_residual"] < 1e-12

    def test_wrong_kind(self, capsys):
        code, _, err = _run(capsys, "decompose", str(PROBLEMS / "t2x2.json"))
        assert code == 1
        assert "projection_pair" in err


class TestSkew:
    def test_analysis(self, capsys):
        report = _json(capsys, "skew", str(PROBLEMS / "t2x2.json"))
        assert report["analysis"]["pq_norm"] == pytest.approx(2 / math.sqrt(5))
        assert report["analysis"]["h_atoms"] == pytest.approx([0.2])
        assert report["verdict"]["attained"] is True
        assert report["family"] is None

    def test_linear_family(self, capsys):
        report = _json(capsys, "skew", str(PROBLEMS / "t2x2.json"), "--family", "lin:0,-1")
        assert report["family"]["norm"] == pytest.approx(math.sqrt(5))

    def test_buckholtz_family(self, capsys):
        report = _json(capsys, "skew", str(PROBLEMS / "t2x2.json"), "--family", "lin:1,-1")
        assert report["family"]["norm"] == pytest.approx(math.sqrt(5))
        assert report["family"]["attained"] is True

    def test_alternating_family(self, capsys):
        report = _json(capsys, "skew", str(PROBLEMS / "t2x2.json"), "--family", "alt:4")
        assert report["family"]["norm"] == pytest.approx(25.0)

    def test_example3_without_file(self, capsys):
        report = _json(capsys, "skew", "--family", "ex3:two_over_n,32")
        assert report["analysis"] is None
        assert report["verdict"]["norm"] == pytest.approx(math.sqrt(5))
        assert report["family"]["lambda_max"] == pytest.approx(9.0)

    def test_needs_model(self, capsys):
        code, _, err = _run(capsys, "skew", "--family", "alt:2")
        assert code == 1
        assert err.startswith("Error:")

    def test_bad_family(self, capsys):
        code, _, _ = _run(capsys, "skew", str(PROBLEMS / "t2x2.json"), "--family", "cube:3")
        assert code == 1


class TestVerifyAndTruncate:
    def test_kernel_suite(self, capsys):
        report = _json(capsys, "verify", "--kernel", "--trials", "20", "--seed", "4")
        assert report["passed"] is True
        assert [s["name"] for s in report["suites"]] == ["kernel"]

    def test_random_suite(self, capsys):
        report = _json(capsys, "verify", "--n", "6", "--trials", "5", "--seed", "2")
        assert report["passed"] is True
        assert report["suites"][0]["dimension"] == 6

    def test_truncate(self, capsys):
        report = _json(capsys, "truncate", str(PROBLEMS / "ex3_one_over_n.json"), "--dims", "1", "2", "4")
        assert report["norms"] == pytest.approx([0.0, 0.75, 0.9375], abs=1e-12)

    def test_truncate_operator_override(self, capsys):
        report = _json(
            capsys, "truncate", str(PROBLEMS / "ex3_two_over_n.json"), "--dims", "2", "--operator", "T"
        )
        assert report["operator"] == "T"
        assert report["norms"] == pytest.approx([math.sqrt(5)])


class TestParser:
    def test_no_command_prints_help(self, capsys):
        code, out, _ = _run(capsys)
        assert code == 0
        assert "usage" in out

    def test_config_get(self, capsys):
        code, out, _ = _run(capsys, "config", "get", "maximize.grid")
        assert code == 0
        assert out.strip() == "4096"

    def test_config_get_missing(self, capsys):
        code, _, err = _run(capsys, "config", "get", "no.such.key")
        assert code == 1
        assert "Key not found" in err

    def test_common_options_parse_on_both_sides(self):
        args = build_parser().parse_args(["--tol", "1e-9", "analyze", "f.json", "--grid", "64"])
        assert args.tol == 1e-9
        assert args.grid == 64

    def test_parse_family(self):
        assert _parse_family("lin:1,-1") == ("lin", ["1", "-1"])
        assert _parse_family("ex3:one_over_n") == ("ex3", ["one_over_n"])
        with pytest.raises(ValidationError):
            _parse_family("alt:two")
        with pytest.raises(ValidationError):
            _parse_family("lin:1")
        with pytest.raises(ValidationError):
            _parse_family("ex3:one_over_m")


class TestEntryPoint:
    def test_fresh_import_runs_analyze(self, capsys):
        cli = importlib.import_module("normattain.cli")
        code = cli.main(["analyze", str(PROBLEMS / "t2x2.json")])
        out, err = capsys.readouterr()
        assert code == 0, err
        assert "attained: true" in out

    def test_expression_nodes_are_exported(self):
        expr = importlib.import_module("normattain.expr")
        for name in expr.__all__:
            assert hasattr(expr, name), name
        assert "Var" in expr.__all__
