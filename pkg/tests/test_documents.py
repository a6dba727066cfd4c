"""Tests for JSON Document rendering and parsing."""

import json
from fractions import Fraction

import pytest

from qm_jeopardy.documents import (
    CheckReport,
    Document,
    DocumentKind,
    expect_kind,
    parse,
    render,
)
from qm_jeopardy.errors import DocumentParseError
from qm_jeopardy.jeopardy import EnergyReport, expectations, roundtrip_check
from qm_jeopardy.model import (
    DeltaPotential,
    PiecewiseLinearState,
    make_state,
    validate_state,
)
from qm_jeopardy.probgen import Problem, generate, grade
from qm_jeopardy.spectrum import find_eigenvalues

TENT_DOCUMENT = {
    "kind": "state",
    "version": "1",
    "payload": {"wall": ["-1", "1"], "gamma": "1", "knots": [["-1", "0"], ["0", "1"], ["1", "0"]]},
}


def _state_text(knots: list) -> str:
    document = json.loads(json.dumps(TENT_DOCUMENT))
    document["payload"]["knots"] = knots
    return json.dumps(document)


class TestRender:
    def test_tent_state(self, tent: PiecewiseLinearState) -> None:
        text = render(Document(DocumentKind.STATE, tent))
        assert json.loads(text) == TENT_DOCUMENT
        assert text.endswith("\n")

    def test_v2_coefficients_are_rational_strings(self, v2: DeltaPotential) -> None:
        payload = json.loads(render(Document(DocumentKind.POTENTIAL, v2)))["payload"]
        assert [s["c"] for s in payload["spikes"]] == ["-9/4", "9/2", "-9/2"]
        assert [s["x"] for s in payload["spikes"]] == ["-1/3", "1/3", "2/3"]

    def test_floats_are_numbers(self) -> None:
        state = make_state([(-1, 0), (0, 0.5), (1, 0)])
        payload = json.loads(render(Document(DocumentKind.STATE, state)))["payload"]
        assert payload["knots"][1] == ["0", 0.5]

    def test_deterministic(self) -> None:
        problem = generate(42, 3, 6)
        assert render(Document(DocumentKind.PROBLEM, problem)) == render(
            Document(DocumentKind.PROBLEM, generate(42, 3, 6))
        )


class TestParse:
    def test_tent_state(self, tent: PiecewiseLinearState) -> None:
        document = parse(json.dumps(TENT_DOCUMENT))
        assert document.kind is DocumentKind.STATE
        assert document.payload == tent

    def test_json_integers_are_float_mode(self) -> None:
        state = parse(_state_text([[-1, 0], [0, 1], [1, 0]])).payload
        assert all(isinstance(x, float) for x in state.positions)

    def test_non_canonical_rational_has_location(self) -> None:
        with pytest.raises(DocumentParseError) as exc_info:
            parse(_state_text([["-1", "0"], ["0", "2/4"], ["1", "0"]]))
        assert exc_info.value.location == "$.payload.knots[1][1]"

    def test_negative_denominator_rejected(self) -> None:
        with pytest.raises(DocumentParseError):
            parse(_state_text([["-1", "0"], ["0", "1/-3"], ["1", "0"]]))

    def test_unknown_field_rejected(self) -> None:
        document = json.loads(json.dumps(TENT_DOCUMENT))
        document["payload"]["colour"] = "red"
        with pytest.raises(DocumentParseError, match="colour"):
            parse(json.dumps(document))

    def test_missing_field_rejected(self) -> None:
        document = json.loads(json.dumps(TENT_DOCUMENT))
        del document["payload"]["gamma"]
        with pytest.raises(DocumentParseError, match="gamma"):
            parse(json.dumps(document))

    def test_unknown_kind(self) -> None:
        document = dict(TENT_DOCUMENT, kind="hamiltonian")
        with pytest.raises(DocumentParseError) as exc_info:
            parse(json.dumps(document))
        assert exc_info.value.location == "$.kind"

    def test_unknown_version(self) -> None:
        with pytest.raises(DocumentParseError):
            parse(json.dumps(dict(TENT_DOCUMENT, version="2")))

    def test_malformed_json_reports_line_and_column(self) -> None:
        with pytest.raises(DocumentParseError) as exc_info:
            parse('{"kind": "state",\n  "version": }')
        assert exc_info.value.location.startswith("line 2 column")

    def test_huge_integer_has_location(self) -> None:
        with pytest.raises(DocumentParseError) as exc_info:
            parse(_state_text([[-1, 0], [0, 10**400], [1, 0]]))
        assert exc_info.value.location == "$.payload.knots[1][1]"

    def test_huge_spectrum_number_has_location(self, tuned_spike: DeltaPotential) -> None:
        result = find_eigenvalues(tuned_spike, -5.0, 15.0, node_intervals=8)
        document = json.loads(render(Document(DocumentKind.SPECTRUM, result)))
        document["payload"]["tol"] = 10**400
        with pytest.raises(DocumentParseError) as exc_info:
            parse(json.dumps(document))
        assert exc_info.value.location == "$.payload.tol"

    def test_domain_errors_become_parse_errors(self) -> None:
        with pytest.raises(DocumentParseError) as exc_info:
            parse(_state_text([["-1", "0"], ["2", "1"], ["1", "0"]]))
        assert exc_info.value.location == "$.payload"

    def test_expect_kind(self, tent: PiecewiseLinearState) -> None:
        document = Document(DocumentKind.STATE, tent)
        assert expect_kind(document, DocumentKind.STATE, DocumentKind.PROBLEM) is tent
        with pytest.raises(DocumentParseError, match="potential"):
            expect_kind(document, DocumentKind.POTENTIAL)


class TestRoundTrip:
    """parse(render(d)) == d, scalar modes included."""

    def _round_trip(self, kind: DocumentKind, payload) -> object:
        return parse(render(Document(kind, payload))).payload

    def test_problem(self) -> None:
        problem = generate(7, 4, 9)
        assert self._round_trip(DocumentKind.PROBLEM, problem) == problem

    def test_mixed_mode_state(self) -> None:
        state = make_state([(-1, 0), ("1/3", 0.25), (1, 0)])
        parsed = self._round_trip(DocumentKind.STATE, state)
        assert parsed == state
        assert isinstance(parsed.knots[1].x, Fraction)
        assert isinstance(parsed.knots[1].psi, float)

    def test_spectrum(self, tuned_spike: DeltaPotential) -> None:
        result = find_eigenvalues(tuned_spike, -5.0, 15.0, node_intervals=64)
        assert self._round_trip(DocumentKind.SPECTRUM, result) == result

    def test_grade_report(self) -> None:
        problem = generate(42, 3, 6)
        answer = DeltaPotential(problem.solution.spikes[1:], problem.config)
        report = grade(problem, answer)
        assert self._round_trip(DocumentKind.GRADE_REPORT, report) == report

    def test_energy_report(self, m_state: PiecewiseLinearState, v2: DeltaPotential) -> None:
        report = expectations(m_state, v2, require_normalized=False)
        assert self._round_trip(DocumentKind.ENERGY_REPORT, report) == report

    def test_validation_report(self, m_state: PiecewiseLinearState) -> None:
        report = CheckReport(validate_state(m_state), roundtrip_check(m_state).deviation)
        assert self._round_trip(DocumentKind.VALIDATION_REPORT, report) == report
        invalid = CheckReport(validate_state(make_state([(-1, 0), (0, 0), (1, 0)])))
        assert self._round_trip(DocumentKind.VALIDATION_REPORT, invalid) == invalid

    def test_generated_problems_parse_back(self, generated_problems: list[Problem]) -> None:
        for problem in generated_problems[:100]:
            assert self._round_trip(DocumentKind.PROBLEM, problem) == problem


class TestConsistencyChecks:
    def test_energy_total_must_match(self) -> None:
        text = json.dumps(
            {"kind": "energy-report", "version": "1", "payload": {"t": "3", "v": "-3", "e": "1"}}
        )
        with pytest.raises(DocumentParseError) as exc_info:
            parse(text)
        assert exc_info.value.location == "$.payload.e"

    def test_energy_report_parses(self) -> None:
        text = json.dumps(
            {"kind": "energy-report", "version": "1", "payload": {"t": "3", "v": "-3", "e": "0"}}
        )
        assert parse(text).payload == EnergyReport(Fraction(3), Fraction(-3))

    def test_problem_wells_must_match(self) -> None:
        document = json.loads(render(Document(DocumentKind.PROBLEM, generate(42, 3, 6))))
        document["payload"]["solution"]["gamma"] = "2"
        with pytest.raises(DocumentParseError) as exc_info:
            parse(json.dumps(document))
        assert exc_info.value.location == "$.payload.solution"
