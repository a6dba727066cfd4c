"""Randomized Jeopardy problems and the grader for proposed answers.

A problem is a ruler-drawable, piecewise-linear zero-energy eigenstate with
rational knots (the "answer"); the student supplies the delta potential
(the "question"). Generation is a pure function of the seed and parameters:
the random stream comes from SplitMix64 (see docs/GENERATOR.md), never from
a platform generator, so worksheets are identical everywhere.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .errors import DomainError, GenerationError
from .jeopardy import invert
from .model import (
    DeltaPotential,
    DeltaSpike,
    Knot,
    PiecewiseLinearState,
    WellConfig,
    kinks as kink_indices,
    slopes,
    validate_state,
)
from .scalar import Scalar, checked, to_scalar

logger = logging.getLogger(__name__)

MAX_KINKS = 8
MAX_ATTEMPTS = 10_000
UINT64_MASK = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 pseudo-random generator over unsigned 64-bit integers.

    state <- state + 0x9E3779B97F4A7C15, then two xor-shift-multiply rounds
    and a final xor-shift; all arithmetic modulo 2**64.
    """

    GOLDEN_GAMMA = 0x9E3779B97F4A7C15

    def __init__(self, seed: int) -> None:
        if not 0 <= seed <= UINT64_MASK:
            raise DomainError(f"seed must fit in 64 unsigned bits, got {seed}")
        self.state = seed

    def next_u64(self) -> int:
        self.state = (self.state + self.GOLDEN_GAMMA) & UINT64_MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & UINT64_MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & UINT64_MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection, without modulo bias."""
        if n <= 0:
            raise DomainError(f"range must be positive, got {n}")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            value = self.next_u64()
            if value < limit:
                return value % n

    def randint(self, low: int, high: int) -> int:
        """Uniform integer in [low, high], both inclusive."""
        return low + self.below(high - low + 1)

    def sample(self, population: list, k: int) -> list:
        """k distinct items by a partial Fisher-Yates shuffle, in draw order."""
        pool = list(population)
        for i in range(k):
            j = i + self.below(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]


@dataclass(frozen=True)
class Difficulty:
    kinks: int
    denom_bound: int


@dataclass(frozen=True)
class Problem:
    """A worksheet instance: the state to draw and the exact potential behind it."""

    id: str
    seed: int
    difficulty: Difficulty
    state: PiecewiseLinearState
    solution: DeltaPotential

    @property
    def config(self) -> WellConfig:
        return self.state.config


class Verdict(Enum):
    PASS = "pass"
    FAIL = "fail"


@dataclass(frozen=True)
class SpikeGrade:
    """How one expected spike fared against the proposal."""

    position: Scalar
    matched: bool
    expected: Scalar
    proposed: Scalar | None = None
    relative_error: Scalar | None = None


@dataclass(frozen=True)
class GradeReport:
    problem_id: str
    verdict: Verdict
    rel_tol: Scalar
    pos_tol: Scalar
    per_spike: list[SpikeGrade] = field(default_factory=list)
    extras: list[DeltaSpike] = field(default_factory=list)
    missing: list[DeltaSpike] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS


def _check_parameters(seed: int, kinks: int, denom_bound: int) -> None:
    if not 0 <= seed <= UINT64_MASK:
        raise DomainError(f"seed must fit in 64 unsigned bits, got {seed}")
    if not 1 <= kinks <= MAX_KINKS:
        raise DomainError(f"kinks must be between 1 and {MAX_KINKS}, got {kinks}")
    if denom_bound < 2:
        raise DomainError(f"denom_bound must be at least 2, got {denom_bound}")
    if denom_bound < kinks + 1:
        raise DomainError(
            f"denom_bound {denom_bound} leaves no room for {kinks} distinct kinks "
            f"(need at least {kinks + 1})"
        )


def _draw_state(
    rng: SplitMix64, kinks: int, denom_bound: int, config: WellConfig
) -> PiecewiseLinearState:
    a, width = config.wall_left, config.width
    q = rng.randint(kinks + 1, denom_bound)
    grid = sorted(rng.sample(list(range(1, q)), kinks))
    knots = [Knot(a, Fraction(0))]
    for j in grid:
        numerator = rng.randint(1, denom_bound) * (1 if rng.below(2) else -1)
        amplitude = Fraction(numerator, rng.randint(1, denom_bound))
        knots.append(Knot(checked(a + width * Fraction(j, q)), amplitude))
    knots.append(Knot(config.wall_right, Fraction(0)))
    return PiecewiseLinearState(tuple(knots), config)


def generate(
    seed: int,
    kinks: int,
    denom_bound: int,
    config: WellConfig | None = None,
    *,
    max_attempts: int = MAX_ATTEMPTS,
) -> Problem:
    """Draw a random ruler-drawable problem, deterministically from ``seed``.

    Kinks sit at distinct interior multiples of (b - a)/q with q <= denom_bound;
    amplitudes are non-zero rationals n/m with |n|, m <= denom_bound. Draws
    are rejected until the state is valid and every interior knot is a
    genuine kink.

    Raises:
        DomainError: a parameter is out of range
        GenerationError: ``max_attempts`` draws were all rejected
    """
    config = config or WellConfig()
    _check_parameters(seed, kinks, denom_bound)
    rng = SplitMix64(seed)
    for attempt in range(1, max_attempts + 1):
        state = _draw_state(rng, kinks, denom_bound, config)
        if not validate_state(state).valid or len(kink_indices(state)) != kinks:
            continue
        problem = Problem(
            id=f"jq-{seed:016x}-k{kinks}-q{denom_bound}",
            seed=seed,
            difficulty=Difficulty(kinks, denom_bound),
            state=state,
            solution=invert(state),
        )
        logger.debug(
            "Generated problem %s after %d attempt(s)",
            problem.id,
            attempt,
            extra={"seed": seed, "kinks": kinks},
        )
        return problem
    raise GenerationError(f"no valid problem after {max_attempts} attempts (seed {seed})")


def _relative_error(expected: Scalar, proposed: Scalar) -> Scalar:
    return checked(abs(proposed - expected) / abs(expected))


def grade(
    problem: Problem,
    proposed: DeltaPotential,
    rel_tol: object = 1e-6,
    pos_tol: object = 0,
) -> GradeReport:
    """Compare a proposed potential with the problem's exact solution.

    Spikes are paired by position (within ``pos_tol``, nearest first, each
    proposed spike used once) and their coefficients compared by relative
    error. The verdict passes only with no extras, nothing missing and every
    relative error within ``rel_tol``.

    Raises:
        DomainError: the proposal is for a different well
    """
    if proposed.config != problem.config:
        raise DomainError(
            f"answer is for the well {proposed.config}, problem uses {problem.config}"
        )
    rel_tol, pos_tol = to_scalar(rel_tol), to_scalar(pos_tol)
    unused = list(proposed.spikes)
    per_spike: list[SpikeGrade] = []
    missing: list[DeltaSpike] = []

    for expected in problem.solution.spikes:
        candidates = [
            s for s in unused if abs(s.position - expected.position) <= pos_tol
        ]
        if not candidates:
            missing.append(expected)
            per_spike.append(SpikeGrade(expected.position, False, expected.coefficient))
            continue
        best = min(candidates, key=lambda s: abs(s.position - expected.position))
        unused.remove(best)
        per_spike.append(
            SpikeGrade(
                expected.position,
                True,
                expected.coefficient,
                best.coefficient,
                _relative_error(expected.coefficient, best.coefficient),
            )
        )

    passed = (
        not unused
        and not missing
        and all(g.relative_error <= rel_tol for g in per_spike if g.matched)
    )
    report = GradeReport(
        problem_id=problem.id,
        verdict=Verdict.PASS if passed else Verdict.FAIL,
        rel_tol=rel_tol,
        pos_tol=pos_tol,
        per_spike=per_spike,
        extras=unused,
        missing=missing,
    )
    logger.info(
        "Graded %s: %s (%d extra, %d missing)",
        problem.id,
        report.verdict.value,
        len(unused),
        len(missing),
    )
    return report


def _fmt(value: Scalar) -> str:
    return str(value) if isinstance(value, Fraction) else f"{value:.12g}"


def render_worksheet(problem: Problem, with_solution: bool = False) -> str:
    """Plain-text worksheet for a problem, optionally with the answer key."""
    config = problem.config
    lines = [
        f"Jeopardy worksheet - problem {problem.id}",
        "",
        f"An infinite square well has walls at x = {config.wall_left} and x = {config.wall_right}",
        f"(gamma = hbar^2/2m = {config.gamma}). The zero-energy eigenstate below is",
        "piecewise linear. Find the Dirac delta function potential(s) that must be",
        "added to the well for it to be an energy eigenstate.",
        "",
        "Knots (x, psi):",
    ]
    lines += [
        f"  {i:>2}  x = {_fmt(k.x):>8}   psi = {_fmt(k.psi):>8}"
        for i, k in enumerate(problem.state.knots)
    ]
    lines += ["", "Slopes:"]
    knots = problem.state.knots
    lines += [
        f"  {_fmt(knots[i].x):>8} .. {_fmt(knots[i + 1].x):<8}  slope = {_fmt(s)}"
        for i, s in slopes(problem.state)
    ]
    lines += ["", "Your answer: V(x) = sum of c * delta(x - x0)"]
    lines += ["  x0 = ________   c = ________" for _ in problem.solution.spikes]
    if with_solution:
        lines += ["", "Solution:"]
        lines += [
            f"  x0 = {_fmt(s.position):>8}   c = {_fmt(s.coefficient)}"
            for s in problem.solution.spikes
        ]
    return "\n".join(lines) + "\n"
