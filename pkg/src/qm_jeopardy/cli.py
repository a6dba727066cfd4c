#!/usr/bin/env python3
"""
Command-line interface for qm-jeopardy with subcommand structure.

Every subcommand reads and writes Documents; ``-`` means stdin or stdout.
Standard output carries only the machine result, messages go to stderr.
"""

import argparse
import logging
import sys
import traceback
from collections.abc import Callable
from pathlib import Path
from typing import Any

from .config import load_custom_config, well_config
from .config_validation import validate_config
from .documents import CheckReport, Document, DocumentKind, expect_kind, parse, render
from .errors import DomainError, JeopardyError
from .jeopardy import expectations, invert, require_forward, roundtrip_check
from .model import DeltaPotential, PiecewiseLinearState, validate_state
from .output import setup_logging, user_output
from .plot import PlotData, emit_plot, from_eigenvalue, from_samples, from_state
from .probgen import Problem, generate, grade, render_worksheet
from .spectrum import default_scan_window, eigenstate_samples, find_eigenvalues

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_IO = 3

LOG_LEVELS = ["NONE", "DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


def _seed(text: str) -> int:
    """Seeds may be written in decimal or with a 0x prefix."""
    return int(text, 0)


def create_parser() -> argparse.ArgumentParser:
    """Create and configure the argument parser with subcommands."""
    parser = argparse.ArgumentParser(
        prog="qm-jeopardy",
        description="Zero-energy eigenstates of the infinite square well with delta spikes",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Subcommands:
  generate   Draw a random worksheet problem
  invert     Find the delta potential behind a piecewise-linear state
  forward    Construct the zero-energy state of a delta potential
  expect     Kinetic and potential energy expectation values
  spectrum   Eigenvalues of the well plus spikes by shooting
  grade      Grade a proposed potential against a problem
  plot       Emit CSV or SVG plot data
  check      Validate a state and run the invert/forward round trip
  worksheet  Render a problem as a plain-text worksheet
  validate   Validate configuration file

Examples:
  # A reproducible problem and its worksheet
  %(prog)s generate --seed 42 --kinks 3 --denom-bound 6 --out p.json
  %(prog)s worksheet --problem p.json

  # Solve it and draw the state
  %(prog)s invert --state p.json --out answer.json
  %(prog)s forward --potential answer.json | %(prog)s plot --in - --format svg --out m.svg

  # Grade an answer
  %(prog)s grade --problem p.json --answer answer.json

  # Is E = 0 in the spectrum?
  %(prog)s spectrum --potential answer.json --emin -5 --emax 15
        """,
    )

    # Global options (available for all subcommands)
    parser.add_argument(
        "--config",
        metavar="FILE",
        type=Path,
        help="Path to a TOML configuration file overriding the built-in defaults",
    )
    parser.add_argument(
        "--log-level",
        choices=LOG_LEVELS,
        default="DEBUG",
        help="Set log file level (default: DEBUG, only used with --log-file)",
    )
    parser.add_argument(
        "--console-log-level",
        choices=LOG_LEVELS,
        default="WARNING",
        help="Set console (stderr) logging level (default: WARNING)",
    )
    parser.add_argument("--log-file", metavar="FILE", type=Path, help="Also write logs to FILE")
    parser.add_argument(
        "--no-log-json", action="store_true", help="Do not write the log file in JSON format"
    )
    parser.add_argument(
        "--verbose", "-v", action="store_true", help="Show debug logging on the console"
    )

    subparsers = parser.add_subparsers(dest="subcommand", help="Subcommand to run")

    # ===== GENERATE subcommand =====
    generate_parser = subparsers.add_parser(
        "generate",
        help="Draw a random worksheet problem",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Same seed, same problem, on every machine
  %(prog)s --seed 42 --kinks 3 --denom-bound 6
        """,
    )
    generate_parser.add_argument("--seed", type=_seed, required=True, help="64-bit seed")
    generate_parser.add_argument(
        "--kinks", type=int, help="Number of kinks, 1 to 8 (default: from config)"
    )
    generate_parser.add_argument(
        "--denom-bound",
        type=int,
        help="Largest denominator of positions and amplitudes (default: from config)",
    )
    _add_out(generate_parser)

    # ===== INVERT subcommand =====
    invert_parser = subparsers.add_parser(
        "invert", help="Find the delta potential behind a piecewise-linear state"
    )
    invert_parser.add_argument(
        "--state", metavar="FILE", required=True, help="State or problem document"
    )
    _add_out(invert_parser)

    # ===== FORWARD subcommand =====
    forward_parser = subparsers.add_parser(
        "forward", help="Construct the zero-energy state of a delta potential"
    )
    forward_parser.add_argument(
        "--potential", metavar="FILE", required=True, help="Potential document"
    )
    _add_out(forward_parser)

    # ===== EXPECT subcommand =====
    expect_parser = subparsers.add_parser(
        "expect", help="Kinetic and potential energy expectation values"
    )
    expect_parser.add_argument(
        "--state", metavar="FILE", required=True, help="State or problem document"
    )
    expect_parser.add_argument(
        "--potential", metavar="FILE", required=True, help="Potential or problem document"
    )
    expect_parser.add_argument(
        "--normalize",
        action="store_true",
        help="Divide by the norm instead of requiring a normalized state",
    )
    _add_out(expect_parser)

    # ===== SPECTRUM subcommand =====
    spectrum_parser = subparsers.add_parser(
        "spectrum",
        help="Eigenvalues of the well plus spikes by shooting",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
The default window is [energy_min, energy_max] from the [spectrum] config
section, in units of gamma / L^2 where L is the half width of the well.
        """,
    )
    spectrum_parser.add_argument(
        "--potential", metavar="FILE", required=True, help="Potential or problem document"
    )
    spectrum_parser.add_argument("--emin", type=float, help="Lower end of the scan window")
    spectrum_parser.add_argument("--emax", type=float, help="Upper end of the scan window")
    spectrum_parser.add_argument("--grid", type=int, help="Number of grid energies")
    spectrum_parser.add_argument("--tol", type=float, help="Bisection tolerance")
    _add_out(spectrum_parser)

    # ===== GRADE subcommand =====
    grade_parser = subparsers.add_parser(
        "grade",
        help="Grade a proposed potential against a problem",
        epilog="A wrong answer is still a successful run: the verdict is in the report.",
    )
    grade_parser.add_argument("--problem", metavar="FILE", required=True, help="Problem document")
    grade_parser.add_argument(
        "--answer", metavar="FILE", required=True, help="Proposed potential document"
    )
    grade_parser.add_argument("--rel-tol", type=float, help="Relative coefficient tolerance")
    grade_parser.add_argument(
        "--pos-tol", help='Position tolerance, a rational such as "1/100" (default: exact)'
    )
    _add_out(grade_parser)

    # ===== PLOT subcommand =====
    plot_parser = subparsers.add_parser(
        "plot",
        help="Emit CSV or SVG plot data",
        epilog="Potentials are plotted through their forward-constructed zero-energy state.",
    )
    plot_parser.add_argument(
        "--in",
        dest="input",
        metavar="FILE",
        required=True,
        help="State, problem, potential or spectrum document",
    )
    plot_parser.add_argument("--format", choices=["csv", "svg"], required=True)
    plot_parser.add_argument(
        "--level", type=int, default=0, help="Eigenvalue index for spectrum documents (default: 0)"
    )
    plot_parser.add_argument(
        "--energy",
        type=float,
        help="Draw the eigenfunction of a potential or problem at this eigenvalue",
    )
    _add_out(plot_parser)

    # ===== CHECK subcommand =====
    check_parser = subparsers.add_parser(
        "check", help="Validate a state and run the invert/forward round trip"
    )
    check_parser.add_argument(
        "--state", metavar="FILE", required=True, help="State or problem document"
    )
    _add_out(check_parser)

    # ===== WORKSHEET subcommand =====
    worksheet_parser = subparsers.add_parser(
        "worksheet", help="Render a problem as a plain-text worksheet"
    )
    worksheet_parser.add_argument(
        "--problem", metavar="FILE", required=True, help="Problem document"
    )
    worksheet_parser.add_argument(
        "--solution", action="store_true", help="Append the answer key"
    )
    _add_out(worksheet_parser)

    # ===== VALIDATE subcommand =====
    subparsers.add_parser(
        "validate",
        help="Validate configuration file",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Validate the built-in defaults
  %(prog)s

  # Validate custom config
  qm-jeopardy --config my_config.toml validate
        """,
    )

    return parser


def _add_out(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--out", "-o", metavar="FILE", default="-", help='Output file (default: "-" for stdout)'
    )


def configure_logging(args: argparse.Namespace, subcommand: str) -> None:
    """
    Configure logging based on command-line arguments.

    Args:
        args: Parsed command-line arguments
        subcommand: The subcommand being executed
    """
    log_level = getattr(logging, args.log_level, 0)
    console_log_level = getattr(logging, args.console_log_level, 0)

    if args.verbose:
        console_log_level = logging.DEBUG

    run_mode = {"subcommand": subcommand}
    if getattr(args, "seed", None) is not None:
        run_mode["seed"] = args.seed

    setup_logging(
        json_format=not args.no_log_json,
        log_level=log_level if args.log_file else 0,
        console_log_level=console_log_level,
        log_file=args.log_file,
        run_mode=run_mode,
    )


# ---- document I/O -------------------------------------------------------


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(path).write_text(text, encoding="utf-8")
        logger.info("Wrote %s", path)


def _load(path: str, *kinds: DocumentKind) -> Document:
    document = parse(_read_text(path))
    expect_kind(document, *kinds)
    return document


def _write_document(path: str, kind: DocumentKind, payload: Any) -> None:
    _write_text(path, render(Document(kind, payload)))


def _load_state(path: str) -> PiecewiseLinearState:
    """A state document, or the state of a problem document."""
    document = _load(path, DocumentKind.STATE, DocumentKind.PROBLEM)
    if document.kind is DocumentKind.PROBLEM:
        return document.payload.state
    return document.payload


def _load_potential(path: str) -> DeltaPotential:
    """A potential document, or the solution of a problem document."""
    document = _load(path, DocumentKind.POTENTIAL, DocumentKind.PROBLEM)
    if document.kind is DocumentKind.PROBLEM:
        return document.payload.solution
    return document.payload


def _load_potential_only(path: str) -> DeltaPotential:
    return _load(path, DocumentKind.POTENTIAL).payload


# ---- argument validation ------------------------------------------------


def validate_spectrum_args(args: argparse.Namespace) -> str | None:
    """Validate arguments for spectrum subcommand."""
    if args.emin is not None and args.emax is not None and args.emin >= args.emax:
        return "Error: --emin must be less than --emax"
    if args.grid is not None and args.grid < 2:
        return "Error: --grid needs at least 2 points"
    if args.tol is not None and args.tol <= 0:
        return "Error: --tol must be positive"
    return None


def validate_grade_args(args: argparse.Namespace) -> str | None:
    """Validate arguments for grade subcommand."""
    if args.rel_tol is not None and args.rel_tol < 0:
        return "Error: --rel-tol must not be negative"
    return None


def validate_plot_args(args: argparse.Namespace) -> str | None:
    """Validate arguments for plot subcommand."""
    if args.level < 0:
        return "Error: --level must not be negative"
    return None


# ---- subcommands --------------------------------------------------------


def run_generate(args: argparse.Namespace, config: dict) -> int:
    """Execute the generate subcommand."""
    settings = config["generator"]
    problem = generate(
        args.seed,
        args.kinks if args.kinks is not None else settings["kinks"],
        args.denom_bound if args.denom_bound is not None else settings["denom_bound"],
        well_config(config),
        max_attempts=settings["max_attempts"],
    )
    _write_document(args.out, DocumentKind.PROBLEM, problem)
    logger.info("Generated %s", problem.id, extra={"seed": args.seed})
    return EXIT_OK


def run_invert(args: argparse.Namespace, config: dict) -> int:
    """Execute the invert subcommand."""
    potential = invert(_load_state(args.state))
    _write_document(args.out, DocumentKind.POTENTIAL, potential)
    return EXIT_OK


def run_forward(args: argparse.Namespace, config: dict) -> int:
    """Execute the forward subcommand."""
    state = require_forward(_load_potential(args.potential))
    _write_document(args.out, DocumentKind.STATE, state)
    return EXIT_OK


def run_expect(args: argparse.Namespace, config: dict) -> int:
    """Execute the expect subcommand."""
    report = expectations(
        _load_state(args.state),
        _load_potential(args.potential),
        require_normalized=not args.normalize,
    )
    _write_document(args.out, DocumentKind.ENERGY_REPORT, report)
    return EXIT_OK


def run_spectrum(args: argparse.Namespace, config: dict) -> int:
    """Execute the spectrum subcommand."""
    settings = config["spectrum"]
    potential = _load_potential(args.potential)
    default_min, default_max = default_scan_window(
        potential.config, settings["energy_min"], settings["energy_max"]
    )
    e_min = args.emin if args.emin is not None else default_min
    e_max = args.emax if args.emax is not None else default_max
    if e_min >= e_max:
        raise DomainError(f"empty scan window [{e_min}, {e_max}]")
    result = find_eigenvalues(
        potential,
        e_min,
        e_max,
        args.grid if args.grid is not None else settings["grid_points"],
        args.tol if args.tol is not None else settings["tolerance"],
        node_intervals=settings["node_samples"],
        max_bisections=settings["max_bisections"],
    )
    _write_document(args.out, DocumentKind.SPECTRUM, result)
    user_output(f"{len(result.eigenvalues)} eigenvalue(s) in [{e_min:g}, {e_max:g}]")
    return EXIT_OK


def run_grade(args: argparse.Namespace, config: dict) -> int:
    """Execute the grade subcommand."""
    settings = config["grading"]
    problem: Problem = _load(args.problem, DocumentKind.PROBLEM).payload
    answer = _load_potential_only(args.answer)
    report = grade(
        problem,
        answer,
        args.rel_tol if args.rel_tol is not None else settings["rel_tol"],
        args.pos_tol if args.pos_tol is not None else settings["pos_tol"],
    )
    _write_document(args.out, DocumentKind.GRADE_REPORT, report)
    if report.passed:
        user_output(f"{problem.id}: PASS", color="green", attrs=["bold"])
    else:
        user_output(
            f"{problem.id}: FAIL ({len(report.extras)} extra, {len(report.missing)} missing)",
            color="red",
            attrs=["bold"],
        )
    return EXIT_OK


def _eigenstate_plot(document: Document, energy: float, settings: dict) -> PlotData:
    if document.kind is DocumentKind.PROBLEM:
        potential = document.payload.solution
    elif document.kind is DocumentKind.POTENTIAL:
        potential = document.payload
    else:
        raise DomainError(
            f"--energy needs a potential or problem document, got {document.kind.value}"
        )
    samples = eigenstate_samples(
        potential, energy, settings["node_samples"] + 1, settings["accept_tolerance"]
    )
    return from_samples(samples, potential, title=f"E = {energy:.10g}")


def _plot_data(document: Document, level: int) -> PlotData:
    if document.kind is DocumentKind.STATE:
        return from_state(document.payload)
    if document.kind is DocumentKind.PROBLEM:
        problem = document.payload
        return from_state(problem.state, problem.solution, title=problem.id)
    if document.kind is DocumentKind.POTENTIAL:
        return from_state(require_forward(document.payload), document.payload)
    result = document.payload
    if level >= len(result.eigenvalues):
        raise DomainError(
            f"--level {level} requested but the spectrum has {len(result.eigenvalues)} eigenvalue(s)"
        )
    return from_eigenvalue(result.eigenvalues[level], result.potential)


def run_plot(args: argparse.Namespace, config: dict) -> int:
    """Execute the plot subcommand."""
    document = _load(
        args.input,
        DocumentKind.STATE,
        DocumentKind.PROBLEM,
        DocumentKind.POTENTIAL,
        DocumentKind.SPECTRUM,
    )
    if args.energy is not None:
        data = _eigenstate_plot(document, args.energy, config["spectrum"])
    else:
        data = _plot_data(document, args.level)
    settings = config["plot"]
    emit_plot(
        data,
        args.format,
        args.out,
        width=settings["width"],
        height=settings["height"],
    )
    return EXIT_OK


def run_check(args: argparse.Namespace, config: dict) -> int:
    """Execute the check subcommand."""
    state = _load_state(args.state)
    validation = validate_state(state)
    deviation = roundtrip_check(state).deviation if validation.valid else None
    _write_document(args.out, DocumentKind.VALIDATION_REPORT, CheckReport(validation, deviation))
    if validation.valid:
        user_output(f"State is valid, round-trip deviation {deviation}", color="green")
    else:
        user_output(f"State is invalid: {validation.summary()}", color="red")
    return EXIT_OK


def run_worksheet(args: argparse.Namespace, config: dict) -> int:
    """Execute the worksheet subcommand."""
    problem = _load(args.problem, DocumentKind.PROBLEM).payload
    _write_text(args.out, render_worksheet(problem, with_solution=args.solution))
    return EXIT_OK


def run_validate(args: argparse.Namespace, config: dict) -> int:
    """Execute the validate subcommand."""
    errors, warnings = validate_config(config)

    for warning in warnings:
        print(f"Warning: {warning}", file=sys.stderr)

    for error in errors:
        print(f"Error: {error}", file=sys.stderr)

    if errors:
        print(
            f"\nConfiguration has {len(errors)} error(s) and {len(warnings)} warning(s)",
            file=sys.stderr,
        )
        return EXIT_DOMAIN
    elif warnings:
        print(f"\nConfiguration is valid with {len(warnings)} warning(s)", file=sys.stderr)
        return EXIT_OK
    else:
        print("Configuration is valid", file=sys.stderr)
        return EXIT_OK


COMMANDS: dict[str, Callable[[argparse.Namespace, dict], int]] = {
    "generate": run_generate,
    "invert": run_invert,
    "forward": run_forward,
    "expect": run_expect,
    "spectrum": run_spectrum,
    "grade": run_grade,
    "plot": run_plot,
    "check": run_check,
    "worksheet": run_worksheet,
    "validate": run_validate,
}

VALIDATORS: dict[str, Callable[[argparse.Namespace], str | None]] = {
    "spectrum": validate_spectrum_args,
    "grade": validate_grade_args,
    "plot": validate_plot_args,
}


def main(argv: list[str] | None = None) -> int:
    """
    Main CLI entry point.

    Args:
        argv: Command-line arguments (defaults to sys.argv)

    Returns:
        Exit code: 0 success, 1 domain or validation error, 2 usage error,
        3 I/O error
    """
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 for --help and 2 for usage errors
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    subcommand = args.subcommand
    if not subcommand:
        parser.print_usage(sys.stderr)
        print("Error: a subcommand is required", file=sys.stderr)
        return EXIT_USAGE

    validator = VALIDATORS.get(subcommand)
    error = validator(args) if validator else None
    if error:
        print(error, file=sys.stderr)
        return EXIT_USAGE

    try:
        configure_logging(args, subcommand)
        config = load_custom_config(args.config, validate=subcommand != "validate")
        return COMMANDS[subcommand](args, config)

    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        return 130
    except JeopardyError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_IO
    except Exception as e:
        print(f"Error: {e}", file=sys.stderr)
        if args.verbose:
            traceback.print_exc()
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
