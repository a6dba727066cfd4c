"""Logging and user-facing output for qm-jeopardy.

Standard output is reserved for machine-readable results (documents, CSV,
SVG). Everything meant for a human, log records and verdicts alike, goes to
standard error.
"""

import json
import logging
import sys
from datetime import UTC, datetime

from termcolor import cprint

# Extra fields a record may carry, e.g. ``logger.info(..., extra={"seed": 7})``
CONTEXT_FIELDS = ("subcommand", "seed", "kinks", "spikes", "energy")


class StructuredFormatter(logging.Formatter):
    """
    Formatter that outputs structured logs with the computational context.
    Can output in JSON format for later analysis of batch runs.
    """

    def __init__(self, use_json: bool = False, run_mode: dict | None = None) -> None:
        super().__init__()
        self.use_json = use_json
        self.run_mode = run_mode or {}

    def format(self, record: logging.LogRecord) -> str:
        log_data = {
            "timestamp": datetime.fromtimestamp(record.created, tz=UTC).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        if self.run_mode:
            log_data["run_mode"] = self.run_mode

        for key in CONTEXT_FIELDS:
            if hasattr(record, key):
                val = getattr(record, key)
                # Floats keep full precision, everything else is shown as text
                log_data[key] = val if isinstance(val, int | float) else str(val)

        if self.use_json:
            return json.dumps(log_data)
        return self._format_human(log_data)

    def _format_human(self, log_data: dict) -> str:
        now = datetime.now().strftime("%H:%M:%S")
        context = ", ".join(f"{key}={log_data[key]}" for key in CONTEXT_FIELDS if key in log_data)
        msg = f"{now} {log_data['level']:<7} {log_data['logger']}: {log_data['message']}"
        if context:
            msg = f"{msg} ({context})"
        return msg


class ColoredConsoleHandler(logging.StreamHandler):
    """
    Console handler that adds colors based on log level.
    Warnings are bold yellow, errors are bold red.
    """

    def emit(self, record: logging.LogRecord) -> None:
        try:
            msg = self.format(record)
            attrs = []
            color = None

            if record.levelno > logging.ERROR:
                attrs = ["bold", "blink"]
                color = "red"
            elif record.levelno > logging.WARNING:
                attrs = ["bold"]
                color = "red"
            elif record.levelno > logging.INFO:
                attrs = ["bold"]
                color = "yellow"

            if color or attrs:
                cprint(msg, color=color, attrs=attrs, file=self.stream)
            else:
                self.stream.write(msg + self.terminator)
            self.flush()
        except Exception:
            self.handleError(record)


def setup_logging(
    json_format: bool = False,
    log_level: int = logging.DEBUG,
    console_log_level: int = logging.WARNING,
    log_file: str | None = None,
    run_mode: dict | None = None,
) -> None:
    """
    Set up the logging system.

    Args:
        json_format: If True, write the log file in JSON lines
        log_level: Level of the root logger and the log file
        console_log_level: Level of the console handler on stderr; 0 disables it
        log_file: Optional file path to write logs to
        run_mode: Optional dict describing the invocation (subcommand and
            its main parameters), attached to every record
    """
    root_logger = logging.getLogger()
    root_logger.setLevel(
        min((level for level in (log_level, console_log_level) if level), default=logging.WARNING)
    )

    root_logger.handlers.clear()

    if log_file and log_level:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(log_level)
        file_handler.setFormatter(StructuredFormatter(use_json=json_format, run_mode=run_mode))
        root_logger.addHandler(file_handler)
    if console_log_level:
        console_handler = ColoredConsoleHandler(sys.stderr)
        console_handler.setLevel(console_log_level)
        console_handler.setFormatter(StructuredFormatter(run_mode=run_mode))
        root_logger.addHandler(console_handler)


def user_output(msg: str, color: str | None = None, attrs: list | None = None) -> None:
    """
    Output a message for the human at the terminal (never part of a result).

    Args:
        msg: Message to display
        color: Optional color (e.g., 'green', 'red')
        attrs: Optional attributes (e.g., ['bold'])
    """
    if color or attrs:
        cprint(msg, color=color, attrs=attrs, file=sys.stderr)
    else:
        print(msg, file=sys.stderr)
