"""Two's-complement Q-format values with hardware-style shifts.

Overflow is never wrapped or saturated: any result that does not fit the
word raises ``OverflowError``. In a correctly range-analysed CORDIC this
cannot happen, so an overflow always points at a bug.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math


@dataclass(frozen=True)
class QFormat:
    """Signed word of ``width`` bits, ``frac`` of them fractional."""

    width: int
    frac: int

    def __post_init__(self):
        if self.width < 4:
            raise ValueError(f"width must be >= 4, got {self.width}")
        if not 0 <= self.frac <= self.width - 3:
            raise ValueError(
                f"frac must be in [0, width-3] = [0, {self.width - 3}], got {self.frac}"
            )

    @classmethod
    def default(cls, width: int) -> QFormat:
        # 1 sign bit + 2 integer bits: covers |x|,|y| <= An*sqrt(2) ~ 2.33 and |z| <= pi
        return cls(width, width - 3)

    @property
    def min_raw(self) -> int:
        return -(1 << (self.width - 1))

    @property
    def max_raw(self) -> int:
        return (1 << (self.width - 1)) - 1

    @property
    def lsb(self) -> float:
        return math.ldexp(1.0, -self.frac)

    @property
    def hex_digits(self) -> int:
        return (self.width + 3) // 4

    def fits(self, raw: int) -> bool:
        return self.min_raw <= raw <= self.max_raw

    def __str__(self):
        return f"Q{self.width - self.frac - 1}.{self.frac}"


def _check(raw: int, fmt: QFormat) -> int:
    if not fmt.fits(raw):
        raise OverflowError(
            f"raw value {raw} does not fit {fmt} ({fmt.width}-bit, "
            f"range [{fmt.min_raw}, {fmt.max_raw}])"
        )
    return raw


@dataclass(frozen=True)
class Fx:
    raw: int
    fmt: QFormat

    def __post_init__(self):
        _check(self.raw, self.fmt)

    def __add__(self, other: Fx) -> Fx:
        return add(self, other)

    def __sub__(self, other: Fx) -> Fx:
        return sub(self, other)

    def __neg__(self) -> Fx:
        return neg(self)

    def __rshift__(self, k: int) -> Fx:
        return asr(self, k)

    def __float__(self):
        return to_real(self)

    def hex(self) -> str:
        """Two's-complement bit pattern, zero-padded to the word width."""
        mask = (1 << self.fmt.width) - 1
        return f"0x{self.raw & mask:0{self.fmt.hex_digits}X}"

    def __repr__(self):
        return f"Fx({self.raw}, {self.fmt})"


def from_real(v: float, fmt: QFormat) -> Fx:
    """Nearest representable value, ties to even."""
    if not math.isfinite(v):
        raise OverflowError(f"cannot represent {v} in {fmt}")
    # Fraction keeps the scaling exact even for frac beyond double range tricks
    raw = round(Fraction(v) * (1 << fmt.frac))
    return Fx(_check(raw, fmt), fmt)


def from_raw(raw: int, fmt: QFormat) -> Fx:
    return Fx(raw, fmt)


def to_real(a: Fx) -> float:
    return math.ldexp(a.raw, -a.fmt.frac)


def to_fraction(a: Fx) -> Fraction:
    return Fraction(a.raw, 1 << a.fmt.frac)


def _same_fmt(a: Fx, b: Fx) -> QFormat:
    if a.fmt != b.fmt:
        raise ValueError(f"format mismatch: {a.fmt} vs {b.fmt}")
    return a.fmt


def add(a: Fx, b: Fx) -> Fx:
    fmt = _same_fmt(a, b)
    return Fx(_check(a.raw + b.raw, fmt), fmt)


def sub(a: Fx, b: Fx) -> Fx:
    fmt = _same_fmt(a, b)
    return Fx(_check(a.raw - b.raw, fmt), fmt)


def neg(a: Fx) -> Fx:
    return Fx(_check(-a.raw, a.fmt), a.fmt)


def asr(a: Fx, k: int) -> Fx:
    """Arithmetic shift right by ``k``; rounds toward minus infinity.

    Shifts of ``width`` or more behave like a saturating barrel shifter and
    leave only the sign (0 or -1).
    """
    if k < 0:
        raise ValueError(f"shift amount must be >= 0, got {k}")
    return Fx(a.raw >> min(k, a.fmt.width - 1), a.fmt)


def zero(fmt: QFormat) -> Fx:
    return Fx(0, fmt)
