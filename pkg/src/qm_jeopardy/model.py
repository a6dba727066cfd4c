"""Piecewise-linear states and delta potentials inside an infinite well.

This module provides the exact data model shared by the rest of the package:

- WellConfig for the walls and the energy scale gamma = hbar^2/2m
- PiecewiseLinearState, an ordered knot list on [a, b]
- DeltaSpike and DeltaPotential for the spikes added to the well
- validate_state and ValidationReport for the Jeopardy input rules
- evaluate / slopes / kinks / norm_squared / normalize / scaled

All types are frozen dataclasses and every operation is a pure function.
"""

import bisect
import logging
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, NamedTuple

from .errors import DomainError, StateValidationError
from .scalar import Scalar, checked, is_exact, to_scalar

logger = logging.getLogger(__name__)

# Relative threshold below which two float-mode slopes count as equal.
# Exact-mode slopes are always compared exactly.
FLOAT_KINK_TOLERANCE = 1e-12


@dataclass(frozen=True)
class WellConfig:
    """Infinite walls at ``wall_left`` < ``wall_right`` and the scale gamma.

    The default is the symmetric well [-1, 1] in natural units (gamma = 1).
    """

    wall_left: Scalar = Fraction(-1)
    wall_right: Scalar = Fraction(1)
    gamma: Scalar = Fraction(1)

    def __post_init__(self) -> None:
        for name in ("wall_left", "wall_right", "gamma"):
            object.__setattr__(self, name, to_scalar(getattr(self, name)))
        if not self.wall_left < self.wall_right:
            raise DomainError(
                f"wall_left must be below wall_right, got [{self.wall_left}, {self.wall_right}]"
            )
        if not self.gamma > 0:
            raise DomainError(f"gamma must be positive, got {self.gamma}")

    @property
    def width(self) -> Scalar:
        return checked(self.wall_right - self.wall_left)

    @property
    def half_width(self) -> Scalar:
        """L in the symmetric well [-L, L]."""
        return checked(self.width / 2)

    @classmethod
    def from_mapping(cls, section: Mapping[str, Any]) -> "WellConfig":
        """Build a config from the ``[well]`` section of the TOML configuration."""
        defaults = cls()
        return cls(
            wall_left=section.get("wall_left", defaults.wall_left),
            wall_right=section.get("wall_right", defaults.wall_right),
            gamma=section.get("gamma", defaults.gamma),
        )

    def contains(self, x: Scalar, *, open_interval: bool = False) -> bool:
        if open_interval:
            return self.wall_left < x < self.wall_right
        return self.wall_left <= x <= self.wall_right


class Knot(NamedTuple):
    x: Scalar
    psi: Scalar


@dataclass(frozen=True)
class PiecewiseLinearState:
    """A candidate zero-energy eigenstate: psi is linear between knots.

    Construction only requires the knots to be sorted and inside the well;
    the eigenstate rules are checked by :func:`validate_state`.
    """

    knots: tuple[Knot, ...]
    config: WellConfig = field(default_factory=WellConfig)

    def __post_init__(self) -> None:
        knots = tuple(Knot(to_scalar(x), to_scalar(psi)) for x, psi in self.knots)
        for i, knot in enumerate(knots):
            if not self.config.contains(knot.x):
                raise DomainError(f"knot {i} at x={knot.x} lies outside the well")
            if i and knot.x < knots[i - 1].x:
                raise DomainError(f"knot {i} at x={knot.x} is out of order")
        object.__setattr__(self, "knots", knots)

    @property
    def positions(self) -> list[Scalar]:
        return [k.x for k in self.knots]

    @property
    def amplitudes(self) -> list[Scalar]:
        return [k.psi for k in self.knots]

    @property
    def is_exact(self) -> bool:
        return all(is_exact(k.x) and is_exact(k.psi) for k in self.knots)


@dataclass(frozen=True)
class DeltaSpike:
    """The term ``coefficient * delta(x - position)``; negative is attractive."""

    position: Scalar
    coefficient: Scalar

    def __post_init__(self) -> None:
        object.__setattr__(self, "position", to_scalar(self.position))
        object.__setattr__(self, "coefficient", to_scalar(self.coefficient))
        if self.coefficient == 0:
            raise DomainError(f"spike at x={self.position} has zero coefficient")

    @property
    def alpha(self) -> Scalar:
        """Strength in the attractive convention ``-alpha * delta(x - x0)``."""
        return -self.coefficient


@dataclass(frozen=True)
class DeltaPotential:
    """Delta spikes inside the well, strictly ordered by position.

    An empty spike list is the bare infinite well.
    """

    spikes: tuple[DeltaSpike, ...] = ()
    config: WellConfig = field(default_factory=WellConfig)

    def __post_init__(self) -> None:
        spikes = tuple(
            s if isinstance(s, DeltaSpike) else DeltaSpike(*s) for s in self.spikes
        )
        for i, spike in enumerate(spikes):
            if not self.config.contains(spike.position, open_interval=True):
                raise DomainError(
                    f"spike {i} at x={spike.position} is not strictly inside "
                    f"({self.config.wall_left}, {self.config.wall_right})"
                )
            if i and not spike.position > spikes[i - 1].position:
                raise DomainError(f"spike positions must be strictly increasing (spike {i})")
        object.__setattr__(self, "spikes", spikes)

    @property
    def positions(self) -> list[Scalar]:
        return [s.position for s in self.spikes]

    @property
    def is_exact(self) -> bool:
        return all(is_exact(s.position) and is_exact(s.coefficient) for s in self.spikes)


class ViolationRule(Enum):
    """Rules a Jeopardy input state must satisfy."""

    TOO_FEW_KNOTS = "too-few-knots"
    ENDPOINT_NOT_AT_WALL = "endpoint-not-at-wall"
    NONZERO_WALL_VALUE = "nonzero-wall-value"
    DUPLICATE_POSITION = "duplicate-position"
    IDENTICALLY_ZERO = "identically-zero"
    ZERO_AT_KINK = "zero-at-kink"


# Violations that make interpolation itself meaningless
STRUCTURAL_RULES = frozenset(
    {
        ViolationRule.TOO_FEW_KNOTS,
        ViolationRule.ENDPOINT_NOT_AT_WALL,
        ViolationRule.DUPLICATE_POSITION,
    }
)


@dataclass(frozen=True)
class Violation:
    rule: ViolationRule
    index: int | None
    message: str


@dataclass(frozen=True)
class ValidationReport:
    """Violations found by :func:`validate_state`; empty means a valid input."""

    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def well_formed(self) -> bool:
        return not any(v.rule in STRUCTURAL_RULES for v in self.violations)

    @property
    def rules(self) -> set[ViolationRule]:
        return {v.rule for v in self.violations}

    def summary(self) -> str:
        return "; ".join(v.message for v in self.violations) or "valid"


def _segment_slopes(knots: tuple[Knot, ...]) -> list[Scalar]:
    return [
        checked((right.psi - left.psi) / (right.x - left.x))
        for left, right in zip(knots, knots[1:], strict=False)
    ]


def _slope_changes(left: Scalar, right: Scalar) -> bool:
    if is_exact(left) and is_exact(right):
        return left != right
    scale = max(abs(left), abs(right), 1.0)
    return abs(right - left) > FLOAT_KINK_TOLERANCE * scale


def validate_state(state: PiecewiseLinearState) -> ValidationReport:
    """Check a state against the Jeopardy input rules.

    Violations are returned as data, each naming the offending knot index
    when there is one. Never raises.
    """
    knots = state.knots
    config = state.config
    violations: list[Violation] = []

    if len(knots) < 3:
        violations.append(
            Violation(
                ViolationRule.TOO_FEW_KNOTS,
                None,
                f"need at least 3 knots, got {len(knots)}",
            )
        )
    if not knots:
        return ValidationReport(tuple(violations))

    for index, wall in ((0, config.wall_left), (len(knots) - 1, config.wall_right)):
        knot = knots[index]
        if knot.x != wall:
            violations.append(
                Violation(
                    ViolationRule.ENDPOINT_NOT_AT_WALL,
                    index,
                    f"knot {index} at x={knot.x} should sit on the wall x={wall}",
                )
            )
        elif knot.psi != 0:
            violations.append(
                Violation(
                    ViolationRule.NONZERO_WALL_VALUE,
                    index,
                    f"psi must vanish at the wall x={wall}, got {knot.psi}",
                )
            )

    duplicates = [i for i in range(1, len(knots)) if knots[i].x == knots[i - 1].x]
    violations.extend(
        Violation(
            ViolationRule.DUPLICATE_POSITION,
            i,
            f"knot {i} repeats position x={knots[i].x}",
        )
        for i in duplicates
    )

    if all(k.psi == 0 for k in knots[1:-1]):
        violations.append(
            Violation(ViolationRule.IDENTICALLY_ZERO, None, "state is identically zero")
        )

    if not duplicates and len(knots) >= 3:
        segment_slopes = _segment_slopes(knots)
        for i in range(1, len(knots) - 1):
            if knots[i].psi == 0 and _slope_changes(segment_slopes[i - 1], segment_slopes[i]):
                violations.append(
                    Violation(
                        ViolationRule.ZERO_AT_KINK,
                        i,
                        f"slope changes at knot {i} (x={knots[i].x}) where psi = 0",
                    )
                )

    return ValidationReport(tuple(violations))


def require_well_formed(state: PiecewiseLinearState) -> None:
    report = validate_state(state)
    if not report.well_formed:
        raise StateValidationError(f"malformed state: {report.summary()}", report)


def evaluate(state: PiecewiseLinearState, x: object) -> Scalar:
    """Linear interpolation of psi at ``x``; exact in rational mode.

    Raises:
        DomainError: if ``x`` lies outside the walls
    """
    x = to_scalar(x)
    if not state.config.contains(x):
        raise DomainError(
            f"x={x} outside the well [{state.config.wall_left}, {state.config.wall_right}]"
        )
    require_well_formed(state)
    positions = state.positions
    i = bisect.bisect_left(positions, x)
    if i < len(positions) and positions[i] == x:
        return state.knots[i].psi
    left, right = state.knots[i - 1], state.knots[i]
    return checked(left.psi + (right.psi - left.psi) * (x - left.x) / (right.x - left.x))


def slopes(state: PiecewiseLinearState) -> list[tuple[int, Scalar]]:
    """Per-segment slopes as ``(segment index, slope)`` pairs."""
    require_well_formed(state)
    return list(enumerate(_segment_slopes(state.knots)))


def kinks(state: PiecewiseLinearState) -> list[int]:
    """Indices of interior knots where the slope changes."""
    require_well_formed(state)
    segment_slopes = _segment_slopes(state.knots)
    return [
        i
        for i in range(1, len(state.knots) - 1)
        if _slope_changes(segment_slopes[i - 1], segment_slopes[i])
    ]


def norm_squared(state: PiecewiseLinearState) -> Scalar:
    """Integral of psi^2 over the well from the exact per-segment closed form."""
    require_well_formed(state)
    total: Scalar = Fraction(0) if state.is_exact else 0.0
    for left, right in zip(state.knots, state.knots[1:], strict=False):
        width = right.x - left.x
        total += width * (left.psi**2 + left.psi * right.psi + right.psi**2) / 3
    return checked(total)


def scaled(state: PiecewiseLinearState, factor: object) -> PiecewiseLinearState:
    """Multiply every amplitude by a non-zero ``factor``."""
    factor = to_scalar(factor)
    if factor == 0:
        raise DomainError("scale factor must be non-zero")
    return PiecewiseLinearState(
        tuple(Knot(k.x, checked(k.psi * factor)) for k in state.knots), state.config
    )


def normalize(state: PiecewiseLinearState) -> tuple[PiecewiseLinearState, float]:
    """Scale a state to unit norm.

    The result carries float amplitudes (1/sqrt of a rational is generally
    irrational); knot positions keep their mode.

    Returns:
        The unit-norm state and the original norm

    Raises:
        StateValidationError: the state is malformed
        DomainError: the state is identically zero
    """
    require_well_formed(state)
    n2 = norm_squared(state)
    if n2 == 0:
        raise DomainError("cannot normalize a state with zero norm")
    norm = math.sqrt(float(n2))
    knots = tuple(Knot(k.x, float(k.psi) / norm) for k in state.knots)
    logger.debug("Normalized state with %d knots, norm %.17g", len(knots), norm)
    return PiecewiseLinearState(knots, state.config), norm


def make_state(
    pairs: Iterable[tuple[object, object]], config: WellConfig | None = None
) -> PiecewiseLinearState:
    """Convenience constructor from ``(x, psi)`` pairs of ints, strings or Fractions."""
    return PiecewiseLinearState(tuple(pairs), config or WellConfig())


def make_potential(
    pairs: Iterable[tuple[object, object]], config: WellConfig | None = None
) -> DeltaPotential:
    """Convenience constructor from ``(position, coefficient)`` pairs."""
    return DeltaPotential(tuple(DeltaSpike(x, c) for x, c in pairs), config or WellConfig())
