"""JSON Documents: the single interchange format of the CLI.

Every file read or written by qm-jeopardy is a Document::

    {"kind": "state", "version": "1", "payload": {...}}

Exact scalars are written as canonical ``"p/q"`` strings and float scalars
as JSON numbers, so the mode of every value survives a round trip. Unknown
fields are rejected, and parse errors name the JSON path of the offending
value.
"""

import json
import logging
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
from typing import Any

from .errors import DocumentParseError, JeopardyError
from .jeopardy import EnergyReport
from .model import (
    DeltaPotential,
    DeltaSpike,
    PiecewiseLinearState,
    ValidationReport,
    Violation,
    ViolationRule,
    WellConfig,
)
from .probgen import Difficulty, GradeReport, Problem, SpikeGrade, Verdict
from .scalar import Scalar, format_scalar, parse_scalar
from .spectrum import BracketFailure, Eigenvalue, ScanWindow, SpectrumResult

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"


class DocumentKind(Enum):
    PROBLEM = "problem"
    STATE = "state"
    POTENTIAL = "potential"
    SPECTRUM = "spectrum"
    GRADE_REPORT = "grade-report"
    ENERGY_REPORT = "energy-report"
    VALIDATION_REPORT = "validation-report"


@dataclass(frozen=True)
class CheckReport:
    """Validation of a state plus, when valid, its round-trip deviation."""

    validation: ValidationReport
    roundtrip_deviation: Scalar | None = None


@dataclass(frozen=True)
class Document:
    kind: DocumentKind
    payload: Any
    version: str = SCHEMA_VERSION


# ---- rendering ----------------------------------------------------------


def _well(config: WellConfig) -> dict[str, Any]:
    return {
        "wall": [format_scalar(config.wall_left), format_scalar(config.wall_right)],
        "gamma": format_scalar(config.gamma),
    }


def _spike(spike: DeltaSpike) -> dict[str, Any]:
    return {"x": format_scalar(spike.position), "c": format_scalar(spike.coefficient)}


def _optional(value: Scalar | None) -> Any:
    return None if value is None else format_scalar(value)


def _render_state(state: PiecewiseLinearState) -> dict[str, Any]:
    return {
        **_well(state.config),
        "knots": [[format_scalar(k.x), format_scalar(k.psi)] for k in state.knots],
    }


def _render_potential(potential: DeltaPotential) -> dict[str, Any]:
    return {**_well(potential.config), "spikes": [_spike(s) for s in potential.spikes]}


def _render_problem(problem: Problem) -> dict[str, Any]:
    return {
        "id": problem.id,
        "seed": problem.seed,
        "difficulty": {
            "kinks": problem.difficulty.kinks,
            "denom_bound": problem.difficulty.denom_bound,
        },
        "state": _render_state(problem.state),
        "solution": _render_potential(problem.solution),
    }


def _render_spectrum(result: SpectrumResult) -> dict[str, Any]:
    return {
        "potential": _render_potential(result.potential),
        "scan": {"emin": result.scan.e_min, "emax": result.scan.e_max, "grid": result.scan.grid_n},
        "tol": result.tol,
        "eigenvalues": [
            {
                "energy": e.energy,
                "nodes": e.nodes,
                "residual": e.residual,
                "samples": [[x, psi] for x, psi in e.samples],
            }
            for e in result.eigenvalues
        ],
        "failures": [
            {"bracket": [f.lower, f.upper], "reason": f.reason} for f in result.failures
        ],
    }


def _render_grade(report: GradeReport) -> dict[str, Any]:
    return {
        "problem_id": report.problem_id,
        "verdict": report.verdict.value,
        "rel_tol": format_scalar(report.rel_tol),
        "pos_tol": format_scalar(report.pos_tol),
        "spikes": [
            {
                "x": format_scalar(g.position),
                "matched": g.matched,
                "expected": format_scalar(g.expected),
                "proposed": _optional(g.proposed),
                "relative_error": _optional(g.relative_error),
            }
            for g in report.per_spike
        ],
        "extras": [_spike(s) for s in report.extras],
        "missing": [_spike(s) for s in report.missing],
    }


def _render_energy(report: EnergyReport) -> dict[str, Any]:
    return {
        "t": format_scalar(report.t_expect),
        "v": format_scalar(report.v_expect),
        "e": format_scalar(report.e_expect),
    }


def _render_check(report: CheckReport) -> dict[str, Any]:
    return {
        "valid": report.validation.valid,
        "violations": [
            {"rule": v.rule.value, "index": v.index, "message": v.message}
            for v in report.validation.violations
        ],
        "roundtrip_deviation": _optional(report.roundtrip_deviation),
    }


_RENDERERS: dict[DocumentKind, Callable[[Any], dict[str, Any]]] = {
    DocumentKind.PROBLEM: _render_problem,
    DocumentKind.STATE: _render_state,
    DocumentKind.POTENTIAL: _render_potential,
    DocumentKind.SPECTRUM: _render_spectrum,
    DocumentKind.GRADE_REPORT: _render_grade,
    DocumentKind.ENERGY_REPORT: _render_energy,
    DocumentKind.VALIDATION_REPORT: _render_check,
}


def render(document: Document) -> str:
    """Serialize a Document to deterministic, indented JSON text."""
    body = {
        "kind": document.kind.value,
        "version": document.version,
        "payload": _RENDERERS[document.kind](document.payload),
    }
    return json.dumps(body, indent=2, allow_nan=False) + "\n"


# ---- parsing ------------------------------------------------------------


class _Reader:
    """Typed accessors over decoded JSON that remember where they are."""

    def __init__(self, value: Any, path: str) -> None:
        self.value = value
        self.path = path

    def fail(self, message: str) -> DocumentParseError:
        return DocumentParseError(message, self.path)

    def obj(self, required: set[str]) -> dict[str, Any]:
        if not isinstance(self.value, dict):
            raise self.fail("expected an object")
        unknown = set(self.value) - required
        if unknown:
            raise self.fail(f"unknown field(s): {', '.join(sorted(unknown))}")
        absent = required - set(self.value)
        if absent:
            raise self.fail(f"missing field(s): {', '.join(sorted(absent))}")
        return self.value

    def field(self, name: str) -> "_Reader":
        return _Reader(self.value.get(name), f"{self.path}.{name}")

    def items(self, length: int | None = None) -> list["_Reader"]:
        if not isinstance(self.value, list):
            raise self.fail("expected an array")
        if length is not None and len(self.value) != length:
            raise self.fail(f"expected {length} elements, got {len(self.value)}")
        return [_Reader(v, f"{self.path}[{i}]") for i, v in enumerate(self.value)]

    def scalar(self) -> Scalar:
        value = self.value
        if isinstance(value, bool):
            raise self.fail("expected a scalar, got a boolean")
        if isinstance(value, str):
            try:
                return parse_scalar(value)
            except JeopardyError as e:
                raise self.fail(str(e)) from e
        if isinstance(value, int | float):
            return self._float(value)
        raise self.fail("expected a scalar")

    def optional_scalar(self) -> Scalar | None:
        return None if self.value is None else self.scalar()

    def number(self) -> float:
        if isinstance(self.value, bool) or not isinstance(self.value, int | float):
            raise self.fail("expected a number")
        return self._float(self.value)

    def _float(self, value: int | float) -> float:
        try:
            return float(value)
        except OverflowError as e:
            raise self.fail("number too large for a float") from e

    def integer(self) -> int:
        if isinstance(self.value, bool) or not isinstance(self.value, int):
            raise self.fail("expected an integer")
        return self.value

    def string(self) -> str:
        if not isinstance(self.value, str):
            raise self.fail("expected a string")
        return self.value

    def boolean(self) -> bool:
        if not isinstance(self.value, bool):
            raise self.fail("expected a boolean")
        return self.value


def _guard(reader: _Reader, build: Callable[[], Any]) -> Any:
    """Run a constructor, turning domain errors into parse errors at ``reader``."""
    try:
        return build()
    except DocumentParseError:
        raise
    except JeopardyError as e:
        raise reader.fail(str(e)) from e


def _parse_well(reader: _Reader) -> WellConfig:
    walls = reader.field("wall").items(2)
    gamma = reader.field("gamma").scalar()
    left, right = walls[0].scalar(), walls[1].scalar()
    return _guard(reader, lambda: WellConfig(left, right, gamma))


def _parse_state(reader: _Reader) -> PiecewiseLinearState:
    reader.obj({"wall", "gamma", "knots"})
    config = _parse_well(reader)
    knots = []
    for item in reader.field("knots").items():
        x, psi = item.items(2)
        knots.append((x.scalar(), psi.scalar()))
    return _guard(reader, lambda: PiecewiseLinearState(tuple(knots), config))


def _parse_spike(reader: _Reader) -> DeltaSpike:
    reader.obj({"x", "c"})
    x, c = reader.field("x").scalar(), reader.field("c").scalar()
    return _guard(reader, lambda: DeltaSpike(x, c))


def _parse_potential(reader: _Reader) -> DeltaPotential:
    reader.obj({"wall", "gamma", "spikes"})
    config = _parse_well(reader)
    spikes = tuple(_parse_spike(item) for item in reader.field("spikes").items())
    return _guard(reader, lambda: DeltaPotential(spikes, config))


def _parse_problem(reader: _Reader) -> Problem:
    reader.obj({"id", "seed", "difficulty", "state", "solution"})
    difficulty = reader.field("difficulty")
    difficulty.obj({"kinks", "denom_bound"})
    state = _parse_state(reader.field("state"))
    solution = _parse_potential(reader.field("solution"))
    if state.config != solution.config:
        raise reader.field("solution").fail("solution well differs from the state well")
    return Problem(
        id=reader.field("id").string(),
        seed=reader.field("seed").integer(),
        difficulty=Difficulty(
            difficulty.field("kinks").integer(), difficulty.field("denom_bound").integer()
        ),
        state=state,
        solution=solution,
    )


def _parse_spectrum(reader: _Reader) -> SpectrumResult:
    reader.obj({"potential", "scan", "tol", "eigenvalues", "failures"})
    scan = reader.field("scan")
    scan.obj({"emin", "emax", "grid"})
    eigenvalues = []
    for item in reader.field("eigenvalues").items():
        item.obj({"energy", "nodes", "residual", "samples"})
        samples = []
        for pair in item.field("samples").items():
            x, psi = pair.items(2)
            samples.append((x.number(), psi.number()))
        eigenvalues.append(
            Eigenvalue(
                energy=item.field("energy").number(),
                nodes=item.field("nodes").integer(),
                residual=item.field("residual").number(),
                samples=samples,
            )
        )
    failures = []
    for item in reader.field("failures").items():
        item.obj({"bracket", "reason"})
        lower, upper = item.field("bracket").items(2)
        failures.append(
            BracketFailure(lower.number(), upper.number(), item.field("reason").string())
        )
    return SpectrumResult(
        potential=_parse_potential(reader.field("potential")),
        eigenvalues=eigenvalues,
        scan=ScanWindow(
            scan.field("emin").number(), scan.field("emax").number(), scan.field("grid").integer()
        ),
        tol=reader.field("tol").number(),
        failures=failures,
    )


def _parse_spike_list(reader: _Reader) -> list[DeltaSpike]:
    return [_parse_spike(item) for item in reader.items()]


def _parse_grade(reader: _Reader) -> GradeReport:
    reader.obj({"problem_id", "verdict", "rel_tol", "pos_tol", "spikes", "extras", "missing"})
    verdict = reader.field("verdict")
    try:
        verdict_value = Verdict(verdict.string())
    except ValueError as e:
        raise verdict.fail(f"unknown verdict {verdict.value!r}") from e
    per_spike = []
    for item in reader.field("spikes").items():
        item.obj({"x", "matched", "expected", "proposed", "relative_error"})
        per_spike.append(
            SpikeGrade(
                position=item.field("x").scalar(),
                matched=item.field("matched").boolean(),
                expected=item.field("expected").scalar(),
                proposed=item.field("proposed").optional_scalar(),
                relative_error=item.field("relative_error").optional_scalar(),
            )
        )
    return GradeReport(
        problem_id=reader.field("problem_id").string(),
        verdict=verdict_value,
        rel_tol=reader.field("rel_tol").scalar(),
        pos_tol=reader.field("pos_tol").scalar(),
        per_spike=per_spike,
        extras=_parse_spike_list(reader.field("extras")),
        missing=_parse_spike_list(reader.field("missing")),
    )


def _parse_energy(reader: _Reader) -> EnergyReport:
    reader.obj({"t", "v", "e"})
    report = EnergyReport(reader.field("t").scalar(), reader.field("v").scalar())
    if reader.field("e").scalar() != report.e_expect:
        raise reader.field("e").fail("total does not equal t + v")
    return report


def _parse_check(reader: _Reader) -> CheckReport:
    reader.obj({"valid", "violations", "roundtrip_deviation"})
    violations = []
    for item in reader.field("violations").items():
        item.obj({"rule", "index", "message"})
        rule = item.field("rule")
        try:
            rule_value = ViolationRule(rule.string())
        except ValueError as e:
            raise rule.fail(f"unknown rule {rule.value!r}") from e
        index = item.field("index")
        violations.append(
            Violation(
                rule_value,
                None if index.value is None else index.integer(),
                item.field("message").string(),
            )
        )
    report = CheckReport(
        ValidationReport(tuple(violations)),
        reader.field("roundtrip_deviation").optional_scalar(),
    )
    if reader.field("valid").boolean() != report.validation.valid:
        raise reader.field("valid").fail("valid flag contradicts the violations")
    return report


_PARSERS: dict[DocumentKind, Callable[[_Reader], Any]] = {
    DocumentKind.PROBLEM: _parse_problem,
    DocumentKind.STATE: _parse_state,
    DocumentKind.POTENTIAL: _parse_potential,
    DocumentKind.SPECTRUM: _parse_spectrum,
    DocumentKind.GRADE_REPORT: _parse_grade,
    DocumentKind.ENERGY_REPORT: _parse_energy,
    DocumentKind.VALIDATION_REPORT: _parse_check,
}


def parse(text: str) -> Document:
    """Parse Document text.

    Raises:
        DocumentParseError: malformed JSON (with line and column), unknown
            kind or version, unknown fields, non-canonical rationals or
            invalid domain values (with the JSON path)
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentParseError(e.msg, f"line {e.lineno} column {e.colno}") from e

    root = _Reader(data, "$")
    root.obj({"kind", "version", "payload"})
    kind_reader = root.field("kind")
    try:
        kind = DocumentKind(kind_reader.string())
    except ValueError as e:
        raise kind_reader.fail(f"unknown kind {kind_reader.value!r}") from e
    version = root.field("version").string()
    if version != SCHEMA_VERSION:
        raise root.field("version").fail(f"unsupported version {version!r}")
    payload = _PARSERS[kind](root.field("payload"))
    logger.debug("Parsed %s document", kind.value)
    return Document(kind, payload, version)


def expect_kind(document: Document, *kinds: DocumentKind) -> Any:
    """Return the payload, or raise if the document is of another kind."""
    if document.kind not in kinds:
        wanted = " or ".join(k.value for k in kinds)
        raise DocumentParseError(f"expected a {wanted} document, got {document.kind.value}", "$.kind")
    return document.payload
