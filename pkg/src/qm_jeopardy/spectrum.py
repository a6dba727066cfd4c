"""General-energy shooting solver for the well plus delta spikes.

Independent check on the Jeopardy results: the eigenvalues of the full
problem are found for any sign of E, so one can confirm that E = 0 is an
eigenvalue exactly when the spikes are tuned.

(psi, psi') is carried from the left wall across each spike-free region by
the transfer matrix::

    [[ C(E, d),            S(E, d) ],
     [ -(E/gamma) S(E, d), C(E, d) ]]

with C = cos(kd), S = sin(kd)/k above zero, the hyperbolic versions below
zero and a Taylor series near E = 0, so the mismatch f(E) = psi(b) is
smooth through zero. Spikes add (c/gamma) psi to psi'. All propagators are
vectorised over E with numpy, which is how the grid scan evaluates every
grid energy at once.
"""

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import DomainError, NotAnEigenvalueError
from .model import DeltaPotential, WellConfig

logger = logging.getLogger(__name__)

# |E| d^2 / gamma below this switches to the series form of C and S
SERIES_THRESHOLD = 1e-6

DEFAULT_GRID_POINTS = 2000
DEFAULT_TOLERANCE = 1e-12
DEFAULT_NODE_INTERVALS = 4096
DEFAULT_MAX_BISECTIONS = 200
DEFAULT_ACCEPT_TOLERANCE = 1e-8

# Default scan window in units of gamma / L^2
DEFAULT_SCAN_MIN = -10.0
DEFAULT_SCAN_MAX = 40.0

# Samples below this fraction of max |psi| are treated as zero when counting nodes
NODE_ZERO_FRACTION = 1e-8


@dataclass(frozen=True)
class PropagatorState:
    """Wavefunction value and derivative at a point during a shoot."""

    psi: float
    dpsi: float


@dataclass(frozen=True)
class ScanWindow:
    e_min: float
    e_max: float
    grid_n: int


@dataclass(frozen=True)
class Eigenvalue:
    energy: float
    nodes: int
    residual: float
    samples: list[tuple[float, float]] = field(default_factory=list, repr=False)


@dataclass(frozen=True)
class BracketFailure:
    """A sign-change bracket that bisection could not shrink to tolerance."""

    lower: float
    upper: float
    reason: str


@dataclass(frozen=True)
class SpectrumResult:
    potential: DeltaPotential
    eigenvalues: list[Eigenvalue]
    scan: ScanWindow
    tol: float
    failures: list[BracketFailure] = field(default_factory=list)

    @property
    def energies(self) -> list[float]:
        return [e.energy for e in self.eigenvalues]

    @property
    def residuals(self) -> list[float]:
        return [e.residual for e in self.eigenvalues]

    @property
    def sturm_ordered(self) -> bool:
        """Node counts run 0, 1, 2, ... over the found eigenvalues."""
        return [e.nodes for e in self.eigenvalues] == list(range(len(self.eigenvalues)))


def transfer_coefficients(
    energy: Any, width: Any, gamma: float
) -> tuple[np.ndarray, np.ndarray]:
    """C(E, d) and S(E, d) of the free propagator, broadcast over energy and width."""
    e = np.asarray(energy, dtype=float) / gamma
    z = e * width * width
    k = np.sqrt(np.abs(e))
    kd = k * width
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        c_osc, s_osc = np.cos(kd), np.sin(kd) / k
        c_tun, s_tun = np.cosh(kd), np.sinh(kd) / k
    c_ser = 1.0 - z / 2.0 + z * z / 24.0
    s_ser = width * (1.0 - z / 6.0 + z * z / 120.0)
    small = np.abs(z) < SERIES_THRESHOLD
    c = np.where(small, c_ser, np.where(z > 0, c_osc, c_tun))
    s = np.where(small, s_ser, np.where(z > 0, s_osc, s_tun))
    return c, s


def _breakpoints(potential: DeltaPotential) -> tuple[list[float], list[float]]:
    """Region edges (walls and spikes) and the coefficient at each inner edge."""
    config = potential.config
    edges = [float(config.wall_left)]
    edges += [float(s.position) for s in potential.spikes]
    edges.append(float(config.wall_right))
    return edges, [float(s.coefficient) for s in potential.spikes]


def shoot(energy: Any, potential: DeltaPotential) -> Any:
    """Mismatch f(E) = psi(b) for psi(a) = 0, psi'(a) = 1.

    Accepts a scalar energy (returns a float) or an array of energies
    (returns an array).
    """
    gamma = float(potential.config.gamma)
    energies = np.asarray(energy, dtype=float)
    edges, coefficients = _breakpoints(potential)
    psi = np.zeros_like(energies)
    dpsi = np.ones_like(energies)
    for i in range(len(edges) - 1):
        c, s = transfer_coefficients(energies, edges[i + 1] - edges[i], gamma)
        psi, dpsi = c * psi + s * dpsi, -(energies / gamma) * s * psi + c * dpsi
        if i < len(coefficients):
            dpsi = dpsi + coefficients[i] / gamma * psi
    if energies.ndim == 0:
        return float(psi)
    return psi


def propagate(energy: float, potential: DeltaPotential) -> list[PropagatorState]:
    """(psi, psi') just right of the left wall and of every spike, then at b."""
    gamma = float(potential.config.gamma)
    edges, coefficients = _breakpoints(potential)
    state = PropagatorState(0.0, 1.0)
    states = [state]
    for i in range(len(edges) - 1):
        c, s = (float(v) for v in transfer_coefficients(energy, edges[i + 1] - edges[i], gamma))
        psi = c * state.psi + s * state.dpsi
        dpsi = -(energy / gamma) * s * state.psi + c * state.dpsi
        if i < len(coefficients):
            dpsi += coefficients[i] / gamma * psi
        state = PropagatorState(psi, dpsi)
        states.append(state)
    return states


def default_scan_window(
    config: WellConfig,
    e_min_scale: float = DEFAULT_SCAN_MIN,
    e_max_scale: float = DEFAULT_SCAN_MAX,
) -> tuple[float, float]:
    """Scan limits as multiples of gamma / L^2 for the given well."""
    unit = float(config.gamma) / float(config.half_width) ** 2
    return e_min_scale * unit, e_max_scale * unit


def sample_shot(energy: float, potential: DeltaPotential, n_samples: int) -> np.ndarray:
    """Unscaled shooting solution on ``n_samples`` uniform points plus the spike positions.

    Returns:
        Array of shape (N, 2) with columns x and psi
    """
    gamma = float(potential.config.gamma)
    edges, _ = _breakpoints(potential)
    xs = np.union1d(np.linspace(edges[0], edges[-1], n_samples), np.asarray(edges[1:-1]))
    psi = np.empty_like(xs)
    starts = propagate(energy, potential)
    for i in range(len(edges) - 1):
        # Region i starts at edge i; later regions overwrite the shared edge,
        # where psi is continuous anyway.
        mask = (xs >= edges[i]) & (xs <= edges[i + 1])
        c, s = transfer_coefficients(energy, xs[mask] - edges[i], gamma)
        psi[mask] = c * starts[i].psi + s * starts[i].dpsi
    psi[-1] = 0.0
    return np.column_stack((xs, psi))


def count_nodes(samples: np.ndarray) -> int:
    """Sign changes of psi strictly between the walls.

    Samples within NODE_ZERO_FRACTION of max |psi| are skipped, so a node
    that lands exactly on a sample point is counted once.
    """
    psi = np.asarray(samples, dtype=float)[1:-1, 1]
    if psi.size == 0:
        return 0
    threshold = NODE_ZERO_FRACTION * np.max(np.abs(psi))
    signs = np.sign(psi[np.abs(psi) > threshold])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def _scaled_samples(samples: np.ndarray) -> list[tuple[float, float]]:
    peak = float(np.max(np.abs(samples[:, 1])))
    factor = 1.0 / peak if peak > 0 else 1.0
    return [(float(x), float(p) * factor) for x, p in samples]


def _bisect(
    potential: DeltaPotential,
    lower: float,
    upper: float,
    f_lower: float,
    tol: float,
    max_bisections: int,
) -> float | None:
    for _ in range(max_bisections):
        if upper - lower <= tol:
            return 0.5 * (lower + upper)
        mid = 0.5 * (lower + upper)
        # Adjacent floats: the bracket cannot shrink any further
        if mid <= lower or mid >= upper:
            return mid
        f_mid = shoot(mid, potential)
        if f_mid == 0:
            return mid
        if np.sign(f_mid) == np.sign(f_lower):
            lower, f_lower = mid, f_mid
        else:
            upper = mid
    if upper - lower <= tol:
        return 0.5 * (lower + upper)
    return None


def find_eigenvalues(
    potential: DeltaPotential,
    e_min: float | None = None,
    e_max: float | None = None,
    grid_n: int = DEFAULT_GRID_POINTS,
    tol: float = DEFAULT_TOLERANCE,
    *,
    node_intervals: int = DEFAULT_NODE_INTERVALS,
    max_bisections: int = DEFAULT_MAX_BISECTIONS,
) -> SpectrumResult:
    """Eigenvalues in [e_min, e_max] by grid scan, sign-change brackets and bisection.

    Missing limits default to :func:`default_scan_window`. Every root comes
    with its node count and samples scaled to max |psi| = 1. Brackets that
    do not converge within ``max_bisections`` are reported as failures and
    the remaining roots are still returned.
    """
    default_min, default_max = default_scan_window(potential.config)
    e_min = default_min if e_min is None else float(e_min)
    e_max = default_max if e_max is None else float(e_max)
    if not e_min < e_max:
        raise DomainError(f"empty scan window [{e_min}, {e_max}]")
    if grid_n < 2:
        raise DomainError(f"grid needs at least 2 points, got {grid_n}")
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")

    grid = np.linspace(e_min, e_max, grid_n)
    values = shoot(grid, potential)
    signs = np.sign(values)

    roots: list[float] = []
    failures: list[BracketFailure] = []
    for i in range(grid_n):
        if signs[i] == 0:
            roots.append(float(grid[i]))
            continue
        if i + 1 < grid_n and signs[i + 1] != 0 and signs[i + 1] != signs[i]:
            root = _bisect(
                potential, float(grid[i]), float(grid[i + 1]), float(values[i]), tol, max_bisections
            )
            if root is None:
                logger.warning(
                    "Bisection did not converge in [%.17g, %.17g]", grid[i], grid[i + 1]
                )
                failures.append(
                    BracketFailure(
                        float(grid[i]),
                        float(grid[i + 1]),
                        f"no convergence to {tol} within {max_bisections} bisections",
                    )
                )
            else:
                roots.append(root)

    eigenvalues = []
    for energy in roots:
        samples = sample_shot(energy, potential, node_intervals + 1)
        eigenvalues.append(
            Eigenvalue(
                energy=energy,
                nodes=count_nodes(samples),
                residual=abs(shoot(energy, potential)),
                samples=_scaled_samples(samples),
            )
        )
        logger.debug("Eigenvalue %.15g", energy, extra={"energy": energy})

    result = SpectrumResult(potential, eigenvalues, ScanWindow(e_min, e_max, grid_n), tol, failures)
    if eigenvalues and not result.sturm_ordered:
        logger.warning("Node counts %s are not in Sturm order", [e.nodes for e in eigenvalues])
    return result


def eigenstate_samples(
    potential: DeltaPotential,
    energy: float,
    n_samples: int = DEFAULT_NODE_INTERVALS + 1,
    tol: float = DEFAULT_ACCEPT_TOLERANCE,
) -> list[tuple[float, float]]:
    """Sampled eigenfunction at an accepted eigenvalue, scaled to max |psi| = 1.

    The spike positions are always among the sample points.

    Raises:
        NotAnEigenvalueError: f does not vanish or change sign within ``tol`` of ``energy``
    """
    if n_samples < 2:
        raise DomainError(f"need at least 2 samples, got {n_samples}")
    energy = float(energy)
    if shoot(energy, potential) != 0:
        below, above = shoot(energy - tol, potential), shoot(energy + tol, potential)
        if np.sign(below) * np.sign(above) > 0:
            raise NotAnEigenvalueError(f"E={energy} is not within {tol} of an eigenvalue")
    return _scaled_samples(sample_shot(energy, potential, n_samples))
