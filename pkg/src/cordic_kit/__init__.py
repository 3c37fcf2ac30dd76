"""Shift-add CORDIC kit: fixed-point arithmetic, the CORDIC iterations,
a cycle-level model of a small dedicated processor, and reference oracles."""

from .fixedpoint import Fx, QFormat, from_real, to_real
from .cordic import (
    AtanLut,
    CordicParams,
    CordicState,
    Correction,
    DomainError,
    GainInfo,
    Mode,
    atan2_magnitude,
    build_lut,
    gain,
    quadrant_reduce,
    rotate,
    sincos,
    vector,
)

__all__ = [
    "AtanLut", "CordicParams", "CordicState", "Correction", "DomainError",
    "Fx", "GainInfo", "Mode", "QFormat", "atan2_magnitude", "build_lut",
    "from_real", "gain", "quadrant_reduce", "rotate", "sincos", "to_real", "vector",
]
