import copy
import logging
import tomllib
from pathlib import Path
from typing import Any

from .config_validation import validate_and_warn, validate_config
from .errors import ConfigValidationError
from .model import WellConfig

logger = logging.getLogger(__name__)

default_config = """
# The infinite square well every state and potential lives in.
# Exact values are written as strings ("p" or "p/q"); a TOML float
# switches the well to floating-point mode.
[well]
wall_left = "-1"
wall_right = "1"
# hbar^2 / 2m in the chosen units
gamma = "1"

# Shooting eigenvalue solver
[spectrum]
# Energy window scanned for sign changes of psi(b; E)
energy_min = -10.0
energy_max = 40.0
# Number of energies sampled in the window
grid_points = 2000
# Bisection stops when the bracket is narrower than this
tolerance = 1e-12
# Number of intervals used to count nodes and sample each eigenfunction
node_samples = 4096
max_bisections = 200
# plot --energy accepts E when psi(b) changes sign within +- this
accept_tolerance = 1e-8

# Random worksheet problems
[generator]
kinks = 3
# Largest denominator of knot positions (in units of the well width) and amplitudes
denom_bound = 6
# Give up after this many rejected draws
max_attempts = 10000

[grading]
# Coefficients pass when |proposed - expected| / |expected| <= rel_tol
rel_tol = 1e-6
# Spike positions must match within pos_tol (exact by default)
pos_tol = "0"

[plot]
width = 640
height = 400
""".strip()


def default_settings() -> dict[str, Any]:
    return tomllib.loads(default_config)


def _merge(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_custom_config(config_path: str | Path | None, validate: bool = True) -> dict[str, Any]:
    """Load the configuration, overlaying a custom file on the defaults.

    Args:
        config_path: Path to a TOML file, or None for the defaults alone
        validate: Whether to validate the merged config (default True)

    Raises:
        FileNotFoundError: the file does not exist
        ConfigValidationError: the file is not TOML or fails validation
    """
    config = default_settings()
    if config_path:
        config_path = Path(config_path)
        if not config_path.exists():
            raise FileNotFoundError(f"Config file not found: {config_path}")
        try:
            with open(config_path, "rb") as f:
                custom = tomllib.load(f)
        except tomllib.TOMLDecodeError as e:
            raise ConfigValidationError(f"{config_path}: {e}") from e
        config = _merge(config, custom)
        logger.debug("Loaded config from %s", config_path)
    if validate and not validate_and_warn(config):
        errors, _ = validate_config(config)
        raise ConfigValidationError("invalid configuration: " + "; ".join(errors))
    return config


def well_config(config: dict[str, Any]) -> WellConfig:
    return WellConfig.from_mapping(config.get("well", {}))
