"""qm-jeopardy: from a zero-energy eigenstate back to its delta potential."""

from .errors import JeopardyError
from .jeopardy import expectations, forward_construct, invert, roundtrip_check
from .model import DeltaPotential, DeltaSpike, PiecewiseLinearState, WellConfig

__all__ = [
    "DeltaPotential",
    "DeltaSpike",
    "JeopardyError",
    "PiecewiseLinearState",
    "WellConfig",
    "expectations",
    "forward_construct",
    "invert",
    "roundtrip_check",
]
