"""Configuration validation for qm-jeopardy.

Validates the loaded TOML configuration and warns about potential issues.
"""

import logging
from typing import Any

from .errors import DomainError
from .scalar import to_scalar

logger = logging.getLogger(__name__)

NUMBER = (int, float)


class ConfigValidator:
    """Validates configuration dictionaries."""

    # Known sections and their parameters, with types and optional ranges
    SECTIONS: dict[str, dict[str, dict[str, Any]]] = {
        "well": {
            "wall_left": {"type": (str, int, float), "rational": True},
            "wall_right": {"type": (str, int, float), "rational": True},
            "gamma": {"type": (str, int, float), "rational": True, "positive": True},
        },
        "spectrum": {
            "energy_min": {"type": NUMBER},
            "energy_max": {"type": NUMBER},
            "grid_points": {"type": int, "min": 2},
            "tolerance": {"type": NUMBER, "positive": True},
            "node_samples": {"type": int, "min": 2},
            "max_bisections": {"type": int, "min": 1},
            "accept_tolerance": {"type": NUMBER, "positive": True},
        },
        "generator": {
            "kinks": {"type": int, "min": 1, "max": 8},
            "denom_bound": {"type": int, "min": 2},
            "max_attempts": {"type": int, "min": 1},
        },
        "grading": {
            "rel_tol": {"type": NUMBER, "min": 0},
            "pos_tol": {"type": (str, int, float), "rational": True, "min": 0},
        },
        "plot": {
            "width": {"type": int, "min": 100},
            "height": {"type": int, "min": 100},
        },
    }

    def __init__(self) -> None:
        self.errors: list[str] = []
        self.warnings: list[str] = []

    def validate(self, config: dict[str, Any]) -> tuple[list[str], list[str]]:
        """Validate the configuration.

        Args:
            config: The configuration dictionary to validate

        Returns:
            Tuple of (errors, warnings) lists
        """
        self.errors = []
        self.warnings = []

        for key, section in config.items():
            if key not in self.SECTIONS:
                self.warnings.append(f"Unknown top-level config key: '{key}'")
            elif not isinstance(section, dict):
                self.errors.append(f"'{key}' section must be a table")
            else:
                self._validate_section(key, section)

        self._validate_well(config.get("well", {}))
        self._validate_spectrum(config.get("spectrum", {}))
        self._validate_generator(config.get("generator", {}))
        return self.errors, self.warnings

    def _validate_section(self, name: str, section: dict) -> None:
        params = self.SECTIONS[name]
        for key, value in section.items():
            if key not in params:
                self.warnings.append(f"Unknown parameter: '{name}.{key}'")
                continue
            self._validate_value(f"{name}.{key}", value, params[key])

    def _validate_value(self, name: str, value: Any, rules: dict[str, Any]) -> None:
        expected = rules["type"]
        # bool is an int to isinstance, but never a sensible setting here
        if isinstance(value, bool) or not isinstance(value, expected):
            types = expected if isinstance(expected, tuple) else (expected,)
            names = " or ".join(t.__name__ for t in types)
            self.errors.append(f"{name} must be {names}, got {type(value).__name__}")
            return

        if rules.get("rational"):
            try:
                value = to_scalar(value)
            except DomainError as e:
                self.errors.append(f"{name} is not a valid number: {e}")
                return

        if rules.get("positive") and value <= 0:
            self.errors.append(f"{name} must be > 0, got {value}")
        if "min" in rules and value < rules["min"]:
            self.errors.append(f"{name} must be >= {rules['min']}, got {value}")
        if "max" in rules and value > rules["max"]:
            self.errors.append(f"{name} must be <= {rules['max']}, got {value}")

    def _validate_well(self, well: Any) -> None:
        if not isinstance(well, dict) or not {"wall_left", "wall_right"} <= well.keys():
            return
        try:
            left, right = to_scalar(well["wall_left"]), to_scalar(well["wall_right"])
        except (DomainError, TypeError):
            return
        if left >= right:
            self.errors.append(f"well.wall_left ({left}) must be less than well.wall_right ({right})")

    def _validate_spectrum(self, spectrum: Any) -> None:
        if not isinstance(spectrum, dict):
            return
        low, high = spectrum.get("energy_min"), spectrum.get("energy_max")
        if isinstance(low, NUMBER) and isinstance(high, NUMBER) and low >= high:
            self.errors.append(
                f"spectrum.energy_min ({low}) must be less than spectrum.energy_max ({high})"
            )
        tolerance = spectrum.get("tolerance")
        if isinstance(tolerance, NUMBER) and tolerance > 1e-6:
            self.warnings.append(
                f"spectrum.tolerance {tolerance} is coarse - eigenvalues will be imprecise"
            )

    def _validate_generator(self, generator: Any) -> None:
        if not isinstance(generator, dict):
            return
        kinks, bound = generator.get("kinks"), generator.get("denom_bound")
        if isinstance(kinks, int) and isinstance(bound, int) and bound < kinks + 1:
            self.errors.append(
                f"generator.denom_bound ({bound}) must be at least generator.kinks + 1 "
                f"({kinks + 1}) to place distinct kinks"
            )


def validate_config(config: dict[str, Any]) -> tuple[list[str], list[str]]:
    """Validate configuration and return errors and warnings.

    Args:
        config: The configuration dictionary to validate

    Returns:
        Tuple of (errors, warnings) lists
    """
    validator = ConfigValidator()
    return validator.validate(config)


def log_validation_results(errors: list[str], warnings: list[str]) -> None:
    for warning in warnings:
        logger.warning(f"Config warning: {warning}")
    for error in errors:
        logger.error(f"Config error: {error}")


def validate_and_warn(config: dict[str, Any]) -> bool:
    """Validate configuration and log warnings/errors.

    Returns:
        True if configuration is valid (no errors), False otherwise
    """
    errors, warnings = validate_config(config)
    log_validation_results(errors, warnings)
    return len(errors) == 0
