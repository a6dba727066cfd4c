"""Plot data emission: CSV tables and standalone SVG figures.

Both outputs are byte-for-byte deterministic for the same input and never
depend on the locale. The SVG markup is written directly, without a
plotting library.
"""

import csv
import io
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .errors import DomainError
from .jeopardy import invert
from .model import DeltaPotential, PiecewiseLinearState, validate_state
from .spectrum import Eigenvalue

logger = logging.getLogger(__name__)

ATTRACTIVE_COLOR = "#c0392b"
REPULSIVE_COLOR = "#2471a3"
CURVE_COLOR = "#111111"
MARGIN = 40


@dataclass(frozen=True)
class SpikeMarker:
    position: float
    coefficient: float | None = None


@dataclass(frozen=True)
class PlotData:
    """What a figure shows: the curve, the walls and where the spikes are."""

    points: list[tuple[float, float]]
    walls: tuple[float, float]
    spikes: list[SpikeMarker] = field(default_factory=list)
    title: str = ""


def _markers(potential: DeltaPotential) -> list[SpikeMarker]:
    return [SpikeMarker(float(s.position), float(s.coefficient)) for s in potential.spikes]


def from_state(
    state: PiecewiseLinearState, potential: DeltaPotential | None = None, title: str = ""
) -> PlotData:
    """Plot a piecewise-linear state through its knots only.

    Spike markers come from ``potential`` when given, otherwise from the
    inverted potential when the state is a valid Jeopardy input.
    """
    if potential is None and validate_state(state).valid:
        potential = invert(state)
    config = state.config
    return PlotData(
        points=[(float(k.x), float(k.psi)) for k in state.knots],
        walls=(float(config.wall_left), float(config.wall_right)),
        spikes=_markers(potential) if potential is not None else [],
        title=title,
    )


def from_samples(
    samples: list[tuple[float, float]], potential: DeltaPotential, title: str = ""
) -> PlotData:
    config = potential.config
    return PlotData(
        points=list(samples),
        walls=(float(config.wall_left), float(config.wall_right)),
        spikes=_markers(potential),
        title=title,
    )


def from_eigenvalue(eigenvalue: Eigenvalue, potential: DeltaPotential) -> PlotData:
    return from_samples(
        eigenvalue.samples,
        potential,
        title=f"E = {eigenvalue.energy:.10g}, {eigenvalue.nodes} node(s)",
    )


def render_csv(data: PlotData) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["x", "psi"])
    for x, psi in data.points:
        writer.writerow([repr(float(x)), repr(float(psi))])
    return buffer.getvalue()


def _fmt(value: float) -> str:
    return f"{value:.3f}"


def render_svg(data: PlotData, width: int = 640, height: int = 400) -> str:
    """A self-contained SVG: walls, the psi = 0 axis, the curve and spike markers."""
    if len(data.points) < 2:
        raise DomainError("need at least two points to draw a curve")
    xs = np.array([p[0] for p in data.points], dtype=float)
    ys = np.array([p[1] for p in data.points], dtype=float)
    left, right = data.walls
    low, high = min(0.0, float(ys.min())), max(0.0, float(ys.max()))
    pad = 0.1 * (high - low) or 1.0
    low, high = low - pad, high + pad
    plot_w, plot_h = width - 2 * MARGIN, height - 2 * MARGIN

    def px(x: float) -> float:
        return MARGIN + (x - left) / (right - left) * plot_w

    def py(y: float) -> float:
        return MARGIN + (high - y) / (high - low) * plot_h

    top, bottom = MARGIN, height - MARGIN
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    if data.title:
        parts.append(
            f'<text x="{width / 2:.1f}" y="{MARGIN / 2:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{escape(data.title)}</text>'
        )
    parts.append(
        f'<line class="axis" x1="{_fmt(px(left))}" y1="{_fmt(py(0.0))}" '
        f'x2="{_fmt(px(right))}" y2="{_fmt(py(0.0))}" stroke="#888888" stroke-width="1"/>'
    )
    for wall in (left, right):
        parts.append(
            f'<line class="wall" x1="{_fmt(px(wall))}" y1="{top}" x2="{_fmt(px(wall))}" '
            f'y2="{bottom}" stroke="#000000" stroke-width="4"/>'
        )
    for spike in data.spikes:
        if spike.coefficient is None:
            color = "#777777"
        else:
            color = ATTRACTIVE_COLOR if spike.coefficient < 0 else REPULSIVE_COLOR
        x = _fmt(px(spike.position))
        y = _fmt(py(float(np.interp(spike.position, xs, ys))))
        parts.append(
            f'<line class="spike" x1="{x}" y1="{top}" x2="{x}" y2="{bottom}" '
            f'stroke="{color}" stroke-width="1" stroke-dasharray="4 3"/>'
        )
        parts.append(f'<circle class="spike" cx="{x}" cy="{y}" r="4" fill="{color}"/>')
    polyline = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(xs, ys, strict=True))
    parts.append(
        f'<polyline class="psi" points="{polyline}" fill="none" '
        f'stroke="{CURVE_COLOR}" stroke-width="2"/>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_plot(
    data: PlotData, fmt: str, path: str | Path, *, width: int = 640, height: int = 400
) -> None:
    """Write ``data`` as ``csv`` or ``svg`` to ``path`` (``-`` for stdout).

    Raises:
        DomainError: unknown format
        OSError: the path cannot be written
    """
    if fmt == "csv":
        text = render_csv(data)
    elif fmt == "svg":
        text = render_svg(data, width, height)
    else:
        raise DomainError(f"unknown plot format {fmt!r} (expected csv or svg)")
    if str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")
        logger.info("Wrote %s plot with %d points to %s", fmt, len(data.points), path)
