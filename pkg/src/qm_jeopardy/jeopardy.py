"""The Jeopardy maps between zero-energy states and delta potentials.

Between spikes a zero-energy eigenstate has zero curvature, so it is linear.
At a spike ``c * delta(x - x0)`` the slope jumps by::

    psi'(x0+) - psi'(x0-) = (c / gamma) * psi(x0)

which is the attractive-convention condition with c = -alpha. Reading the
rule one way gives :func:`invert` (state to potential), the other way gives
:func:`forward_construct` (potential to state, by shooting from the left
wall).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DomainError,
    NoZeroEnergyStateError,
    NotNormalizedError,
    StateValidationError,
    UnsolvableKinkError,
)
from .model import (
    DeltaPotential,
    DeltaSpike,
    Knot,
    PiecewiseLinearState,
    ViolationRule,
    evaluate,
    kinks,
    norm_squared,
    require_well_formed,
    slopes,
    validate_state,
)
from .scalar import Scalar, checked, is_exact, to_scalar

logger = logging.getLogger(__name__)

# Float-mode acceptance: |psi(b)| <= this * max |psi| over the knots
FORWARD_ACCEPT_TOLERANCE = 1e-12

# How far from unit norm a state may be and still count as normalized
NORMALIZATION_TOLERANCE = 1e-10


@dataclass(frozen=True)
class EnergyReport:
    """Expectation values of the kinetic and delta-potential energy."""

    t_expect: Scalar
    v_expect: Scalar

    @property
    def e_expect(self) -> Scalar:
        return self.t_expect + self.v_expect


@dataclass(frozen=True)
class RoundTripReport:
    """Outcome of invert followed by forward_construct.

    Attributes:
        deviation: max |state - scale * reconstructed| over all knots
        scale: factor applied to the reconstruction to match the input
        reconstructed: the forward-constructed state before scaling
    """

    deviation: Scalar
    scale: Scalar
    reconstructed: PiecewiseLinearState


def invert(state: PiecewiseLinearState) -> DeltaPotential:
    """Find the delta potential for which ``state`` is a zero-energy eigenstate.

    One spike is placed at every kink with coefficient
    ``gamma * (slope_right - slope_left) / psi(x)``; collinear knots give no
    spike. The result is exact for exact input and does not depend on the
    overall scale of the state.

    Raises:
        UnsolvableKinkError: a kink sits where psi = 0
        StateValidationError: the state breaks any other input rule
    """
    report = validate_state(state)
    for violation in report.violations:
        if violation.rule is ViolationRule.ZERO_AT_KINK:
            raise UnsolvableKinkError(violation.index, state.knots[violation.index].x)
    if not report.valid:
        raise StateValidationError(f"invalid state: {report.summary()}", report)

    gamma = state.config.gamma
    segment_slopes = [s for _, s in slopes(state)]
    spikes = []
    for i in kinks(state):
        knot = state.knots[i]
        jump = segment_slopes[i] - segment_slopes[i - 1]
        spikes.append(DeltaSpike(knot.x, checked(gamma * jump / knot.psi)))
    logger.debug(
        "Inverted state with %d knots into %d spikes",
        len(state.knots),
        len(spikes),
        extra={"spikes": len(spikes)},
    )
    return DeltaPotential(tuple(spikes), state.config)


def forward_construct(
    potential: DeltaPotential, initial_slope: object = 1
) -> PiecewiseLinearState | None:
    """Shoot from the left wall at E = 0 and return the state if it closes.

    psi starts at 0 with ``initial_slope``, runs linearly between spikes and
    picks up the slope jump at each spike. The state is returned when psi
    vanishes at the right wall (exactly for exact input, relative to the
    largest knot amplitude otherwise), else None.
    """
    slope = to_scalar(initial_slope)
    if slope == 0:
        raise DomainError("initial slope must be non-zero")
    config = potential.config
    gamma = config.gamma

    x = config.wall_left
    psi: Scalar = Fraction(0) if is_exact(slope) and potential.is_exact else 0.0
    knots = [Knot(x, psi)]
    for spike in potential.spikes:
        psi = checked(psi + slope * (spike.position - x))
        knots.append(Knot(spike.position, psi))
        slope = checked(slope + spike.coefficient / gamma * psi)
        x = spike.position
    psi_end = checked(psi + slope * (config.wall_right - x))

    if is_exact(psi_end):
        closes = psi_end == 0
    else:
        peak = max(abs(k.psi) for k in knots)
        closes = abs(psi_end) <= FORWARD_ACCEPT_TOLERANCE * peak
    if not closes:
        logger.debug(
            "No zero-energy eigenstate: psi(b) = %s", psi_end, extra={"spikes": len(knots) - 1}
        )
        return None

    zero = Fraction(0) if is_exact(psi_end) else 0.0
    knots.append(Knot(config.wall_right, zero))
    return PiecewiseLinearState(tuple(knots), config)


def require_forward(potential: DeltaPotential) -> PiecewiseLinearState:
    """Like :func:`forward_construct` but raising when no state exists."""
    state = forward_construct(potential)
    if state is None:
        raise NoZeroEnergyStateError("no zero-energy eigenstate for this potential")
    return state


def _check_same_well(state: PiecewiseLinearState, potential: DeltaPotential) -> None:
    if state.config != potential.config:
        raise DomainError(
            f"state and potential live in different wells: {state.config} vs {potential.config}"
        )


def expectations(
    state: PiecewiseLinearState,
    potential: DeltaPotential,
    *,
    require_normalized: bool = True,
) -> EnergyReport:
    """Kinetic and delta-potential expectation values of ``state``.

    The kinetic term uses the first-derivative form gamma * integral(psi'^2),
    which is well defined for piecewise-linear states. Spikes away from the
    kinks are allowed and contribute ``c * psi(x)^2`` like any other.

    Args:
        require_normalized: when False, divide by the norm instead of
            insisting on a unit-norm state (exact for exact input)

    Raises:
        NotNormalizedError: the state is not normalized and
            ``require_normalized`` is set
    """
    _check_same_well(state, potential)
    require_well_formed(state)
    n2 = norm_squared(state)
    if require_normalized and abs(n2 - 1) > NORMALIZATION_TOLERANCE:
        raise NotNormalizedError(f"state is not normalized (norm^2 = {n2})")
    if n2 == 0:
        raise DomainError("identically zero state has no expectation values")

    gamma = state.config.gamma
    kinetic = sum(
        (
            slope**2 * (state.knots[i + 1].x - state.knots[i].x)
            for i, slope in slopes(state)
        ),
        start=Fraction(0),
    )
    kinetic = gamma * kinetic
    potential_energy = sum(
        (s.coefficient * evaluate(state, s.position) ** 2 for s in potential.spikes),
        start=Fraction(0),
    )

    kink_positions = {state.knots[i].x for i in kinks(state)}
    off_kink = [s.position for s in potential.spikes if s.position not in kink_positions]
    if off_kink:
        logger.warning(
            "Spikes away from the kinks of the state at %s",
            off_kink,
        )

    if not require_normalized:
        kinetic = kinetic / n2
        potential_energy = potential_energy / n2
    return EnergyReport(checked(kinetic), checked(potential_energy))


def energy_sharing(
    state: PiecewiseLinearState, potential: DeltaPotential
) -> list[tuple[Scalar, Scalar]]:
    """Each spike's share ``c * psi(x)^2 / norm^2`` of the potential energy."""
    _check_same_well(state, potential)
    n2 = norm_squared(state)
    if n2 == 0:
        raise DomainError("identically zero state has no energy sharing")
    return [
        (s.position, checked(s.coefficient * evaluate(state, s.position) ** 2 / n2))
        for s in potential.spikes
    ]


def roundtrip_check(state: PiecewiseLinearState) -> RoundTripReport:
    """Compare ``state`` with ``forward_construct(invert(state))`` up to scale.

    The scale is matched at the first interior knot with non-zero psi; the
    deviation is the largest pointwise difference over both knot sets and is
    exactly zero for exact input.
    """
    potential = invert(state)
    reconstructed = forward_construct(potential)
    if reconstructed is None:
        raise NoZeroEnergyStateError("inverted potential has no zero-energy eigenstate")

    pivot = next(k for k in state.knots[1:-1] if k.psi != 0)
    reference = evaluate(reconstructed, pivot.x)
    if reference == 0:
        raise DomainError(f"reconstruction vanishes at x={pivot.x}; cannot match scale")
    scale = checked(pivot.psi / reference)

    positions = sorted(set(state.positions) | set(reconstructed.positions))
    deviation = max(
        abs(evaluate(state, x) - scale * evaluate(reconstructed, x)) for x in positions
    )
    return RoundTripReport(checked(deviation), scale, reconstructed)
