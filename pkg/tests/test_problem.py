"""Tests for problem loading and report rendering."""

import json
from pathlib import Path

import numpy as np
import pytest

from normattain.attain import decide_attainment, norming_vector
from normattain.errors import ExprSyntaxError, ValidationError
from normattain.halmos import decompose
from normattain.problem import load, parse_problem, render_text, to_json, validate_report
from normattain.problem.loader import FamilyProblem, PairProblem, SkewProblem, schema_validator
from normattain.problem.report import decomposition_report, truncation_report, verdict_report
from normattain.skew import Ex3Variant
from normattain.symbol import MeasureClass, WStarElement

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


class TestLoad:
    def test_all_bundled_problems_validate(self):
        files = sorted(PROBLEMS.glob("*.json"))
        assert files
        for path in files:
            load(path)

    def test_pair(self):
        problem = load(PROBLEMS / "pair2x2.json")
        assert problem.kind == "projection_pair"
        assert isinstance(problem.payload, PairProblem)
        assert problem.payload.q[0, 1] == pytest.approx(0.48)
        assert problem.payload.symbol is None

    def test_pair_with_element(self):
        payload = load(PROBLEMS / "golden.json").payload
        assert payload.scalars == {}
        assert np.allclose(payload.symbol.at([0.36])[0], [[1, 1], [1, 0]])

    def test_skew(self):
        payload = load(PROBLEMS / "t2x2.json").payload
        assert isinstance(payload, SkewProblem)
        assert payload.t.shape == (2, 2)

    def test_element(self):
        payload = load(PROBLEMS / "interval_ac.json").payload
        assert isinstance(payload, WStarElement)
        assert payload.model.intervals[0].measure_class is MeasureClass.ABSOLUTELY_CONTINUOUS

    def test_family(self):
        payload = load(PROBLEMS / "ex3_t_one_over_n.json").payload
        assert payload == FamilyProblem(Ex3Variant.ONE_OVER_N, None, "T")

    def test_complex_pairs(self):
        problem = parse_problem(
            {"kind": "element", "model": {"atoms": [0.5]}, "scalars": {"00": [1, -2]}, "symbol": [[[0, 1], 0], [0, 1]]}
        )
        assert problem.payload.scalars[(0, 0)] == 1 - 2j
        assert problem.payload.symbol.at([0.5])[0, 0, 0] == pytest.approx(1j)

    def test_labelled_atoms(self):
        problem = parse_problem(
            {"kind": "element", "model": {"atoms": [{"value": 0.4, "label": "a"}]}, "symbol": [[1, 0], [0, 1]]}
        )
        assert problem.payload.model.atoms[0].label == "a"


class TestLoadErrors:
    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationError, match="Cannot read"):
            load(tmp_path / "nope.json")

    def test_invalid_json_reports_position(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"kind": "skew",\n  "t": [[1, 2]\n}', encoding="utf-8")
        with pytest.raises(ValidationError, match="line 3"):
            load(path)

    def test_schema_violation_has_field_path(self):
        with pytest.raises(ValidationError, match=r"\$\.t"):
            parse_problem({"kind": "skew", "t": [["a"]]})

    def test_unknown_kind(self):
        with pytest.raises(ValidationError):
            parse_problem({"kind": "pair"})

    def test_a_and_element_are_exclusive(self):
        with pytest.raises(ValidationError):
            parse_problem(
                {
                    "kind": "projection_pair",
                    "p": [[1, 0], [0, 0]],
                    "q": [[1, 0], [0, 0]],
                    "a": [[1, 0], [0, 1]],
                    "element": {"symbol": [[1, 0], [0, 1]]},
                }
            )

    def test_ragged_matrix(self):
        with pytest.raises(ValidationError, match="rows have different lengths"):
            parse_problem({"kind": "skew", "t": [[1, 2], [3]]})

    def test_expression_error_carries_field(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse_problem({"kind": "element", "model": {"atoms": [0.5]}, "symbol": [["1 +", 0], [0, 1]]})
        assert "$.symbol[0][0]" in str(info.value)
        assert info.value.offset == 3

    def test_invalid_model_value(self):
        with pytest.raises(ValidationError, match=r"\$\.model"):
            parse_problem({"kind": "element", "model": {"atoms": [1.5]}, "symbol": [[1, 0], [0, 1]]})

    def test_only_known_measure_classes(self):
        interval = {"lo": 0.2, "hi": 0.4, "measure_class": "singular_continuous"}
        with pytest.raises(ValidationError, match=r"\$\.model"):
            parse_problem({"kind": "element", "model": {"intervals": [interval]}, "symbol": [[1, 0], [0, 1]]})
        assert {m.value for m in MeasureClass} == {"absolutely_continuous", "unspecified"}


class TestReports:
    def _verdict(self, name):
        element = load(PROBLEMS / name).payload
        verdict = decide_attainment(element)
        return verdict_report(verdict, "A", element.scalar_max, norming_vector(element, verdict))

    def test_verdict_report_validates(self):
        report = self._verdict("buckholtz.json")
        validate_report(report)
        assert report["attained"] is True
        assert report["norm"] == pytest.approx(5**0.5)
        assert report["sigma"] == [{"kind": "atom", "x": 0.2}]

    def test_json_is_deterministic(self):
        first = to_json(self._verdict("interval_ac.json"))
        second = to_json(self._verdict("interval_ac.json"))
        assert first == second
        assert first.endswith("\n")
        assert json.loads(first)["norming_vector"] is None

    def test_json_round_trips_through_schema(self):
        report = self._verdict("plateau_ac.json")
        assert not list(schema_validator("report").iter_errors(json.loads(to_json(report))))

    def test_text_rendering(self):
        text = render_text(self._verdict("interval_ac.json"))
        assert "attained: false" in text
        assert "clause: sigma_null" in text
        assert "Sigma: essential interior 0.3" in text

    def test_decomposition_report(self):
        pair = load(PROBLEMS / "pair2x2.json").payload
        report = decomposition_report(decompose(pair.p, pair.q), 0.0)
        validate_report(report)
        assert report["sizes"]["generic"] == 1
        assert "h: 0.36" in render_text(report)

    def test_truncation_report(self):
        report = truncation_report("one_over_n", "A", [1, 2], [0.0, 0.75])
        validate_report(report)
        assert render_text(report).splitlines() == ["one_over_n A", "n=1: 0", "n=2: 0.75"]

    def test_invalid_report_rejected(self):
        with pytest.raises(ValidationError):
            validate_report({"kind": "truncation"})
