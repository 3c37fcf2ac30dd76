"""Reference values and the angle/iteration error table."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import mpmath

from .cordic import CordicParams, CordicState, Mode, sincos
from .fixedpoint import QFormat, to_real

# (printed label, exact angle). The published "actual" column is the exact
# trigonometry of pi/6 and pi, not of their 6-decimal printouts.
TABLE5_ANGLES = (
    ("0.000000", 0.0),
    ("0.523599", math.pi / 6),
    ("1.000000", 1.0),
    ("3.141593", math.pi),
)
TABLE5_ROTATIONS = (5, 10, 15, 20)
CSV_HEADER = ("angle", "rotations", "kind", "actual", "testbench", "error")


@dataclass(frozen=True)
class ErrorRow:
    angle: float
    rotations: int
    kind: str
    actual: float
    testbench: float
    error: float

    def csv_fields(self) -> list[str]:
        return [f"{self.angle:.6f}", str(self.rotations), self.kind,
                f"{self.actual:.8f}", f"{self.testbench:.8f}", f"{self.error:.4e}"]


def ref_sincos(angle: float) -> tuple[float, float]:
    return math.cos(angle), math.sin(angle)


def table5(fmt: QFormat | None = None, prescale: bool | None = None) -> list[ErrorRow]:
    """Sine block then cosine block, angles outer, rotation counts inner.

    With doubles the default applies 1/An after the iterations; the two
    arrangements agree except in the last bit, which only shows in the
    ~1e-14 cosine errors at 20 rotations. Pass ``prescale=True`` to fold
    1/An into x0 instead. ``fmt`` switches to fixed point.
    """
    if prescale is None:
        prescale = fmt is not None
    sin_rows, cos_rows = [], []
    for _, angle in TABLE5_ANGLES:
        ref_c, ref_s = ref_sincos(angle)
        for n in TABLE5_ROTATIONS:
            c, s = sincos(angle, CordicParams(n, fmt, prescale=prescale))
            if fmt is not None:
                c, s = to_real(c), to_real(s)
            sin_rows.append(ErrorRow(angle, n, "sin", ref_s, s, ref_s - s))
            cos_rows.append(ErrorRow(angle, n, "cos", ref_c, c, ref_c - c))
    return sin_rows + cos_rows


def to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.csv_fields())
    return buf.getvalue()


def format_table(rows) -> str:
    lines = []
    for kind in ("sin", "cos"):
        block = [r for r in rows if r.kind == kind]
        if not block:
            continue
        lines.append(f"{'Angle (A)':<10} {'Rotation':>8} {kind + '(A) actual':>14} "
                     f"{kind + '(A) bench':>14} {'Error':>12}")
        for r in block:
            lines.append(f"{r.angle:<10.6f} {r.rotations:>8d} {r.actual:>14.8f} "
                         f"{r.testbench:>14.8f} {r.error:>12.4e}")
        lines.append("")
    return "\n".join(lines)


def brute_iterate(x0, y0, z0, n: int, mode: Mode | str = Mode.ROTATION, dps: int = 40) -> CordicState:
    """Naive extended-precision CORDIC loop, kept apart from the main code path.

    Recomputes atan(2**-i) every step and never forms a gain; used only as
    an independent check.
    """
    mode = Mode(mode)
    with mpmath.workdps(dps):
        x, y, z = mpmath.mpf(x0), mpmath.mpf(y0), mpmath.mpf(z0)
        two = mpmath.mpf(2)
        for i in range(n):
            p = two ** -i
            if mode is Mode.ROTATION:
                counterclockwise = not (z < 0)
            else:
                counterclockwise = y < 0
            if counterclockwise:
                x, y = x - y * p, y + x * p
                z = z - mpmath.atan(p)
            else:
                x, y = x + y * p, y - x * p
                z = z + mpmath.atan(p)
        return CordicState(float(x), float(y), float(z), n)
