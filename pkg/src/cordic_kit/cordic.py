"""Circular CORDIC: rotation mode, vectoring mode, quadrant correction.

Every operation runs in one of two arithmetics chosen by
``CordicParams.fmt``: ``None`` means IEEE doubles, a ``QFormat`` means the
bit-exact shift-add recurrence on ``Fx`` words (shifts via ``asr``, so they
truncate toward minus infinity exactly like a hardware shifter).

Direction decisions use the literal tie rules: rotation mode takes
``d = +1`` when ``z == 0`` and vectoring mode takes ``d = -1`` when
``y == 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
import math
from typing import Union

import mpmath

from .fixedpoint import Fx, QFormat, from_real, neg, asr, to_real, zero

Number = Union[float, Fx]

_HP_DPS = 60


class DomainError(ValueError):
    """Input outside the region where the iteration converges."""


class Correction(Enum):
    NONE = "none"
    HALF_PI = "halfpi"
    PI = "pi"


class Mode(Enum):
    ROTATION = "rotation"
    VECTORING = "vectoring"


@dataclass(frozen=True)
class CordicParams:
    """Iteration count, arithmetic and quadrant policy.

    ``n`` defaults to 20 for doubles and ``frac + 1`` for fixed point.
    ``prescale`` selects where the 1/An compensation goes in ``sincos``:
    folded into the start vector (x0 = 1/An, the hardware arrangement) or,
    doubles only, applied as one multiply after the last iteration.
    """

    n: int | None = None
    fmt: QFormat | None = None
    correction: Correction = Correction.PI
    prescale: bool = True

    def __post_init__(self):
        if self.n is None:
            object.__setattr__(self, "n", 20 if self.fmt is None else self.fmt.frac + 1)
        if self.n < 1:
            raise ValueError(f"iteration count must be >= 1, got {self.n}")
        if not self.prescale and self.fmt is not None:
            raise ValueError("post-scaling needs a multiplier; fixed point requires prescale")

    @property
    def fixed(self) -> bool:
        return self.fmt is not None


@dataclass(frozen=True)
class CordicState:
    x: Number
    y: Number
    z: Number
    i: int = 0


@dataclass(frozen=True)
class AtanLut:
    entries: tuple

    def __getitem__(self, i):
        return self.entries[i]

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class GainInfo:
    n: int
    An: float
    inv_An: float
    inv_An_hp: mpmath.mpf = field(repr=False, compare=False, default=None)

    def inv_fx(self, fmt: QFormat) -> Fx:
        return _fx_from_hp(self.inv_An_hp, fmt)


def _fx_from_hp(v, fmt: QFormat) -> Fx:
    with mpmath.workdps(_HP_DPS):
        raw = int(mpmath.nint(v * mpmath.mpf(2) ** fmt.frac))
    return Fx(raw, fmt)


@lru_cache(maxsize=None)
def _atan_hp(i: int):
    with mpmath.workdps(_HP_DPS):
        return mpmath.atan(mpmath.mpf(2) ** -i)


@lru_cache(maxsize=None)
def _pi_fx(fmt: QFormat) -> Fx:
    with mpmath.workdps(_HP_DPS):
        return _fx_from_hp(+mpmath.pi, fmt)


@lru_cache(maxsize=None)
def _half_pi_fx(fmt: QFormat) -> Fx:
    with mpmath.workdps(_HP_DPS):
        return _fx_from_hp(mpmath.pi / 2, fmt)


def pi_const(fmt: QFormat | None) -> Number:
    return math.pi if fmt is None else _pi_fx(fmt)


def half_pi_const(fmt: QFormat | None) -> Number:
    return math.pi / 2 if fmt is None else _half_pi_fx(fmt)


@lru_cache(maxsize=None)
def _build_lut(n: int, fmt: QFormat | None) -> AtanLut:
    if fmt is None:
        entries = tuple(float(_atan_hp(i)) for i in range(n))
    else:
        entries = tuple(_fx_from_hp(_atan_hp(i), fmt) for i in range(n))
    return AtanLut(entries)


def build_lut(params: CordicParams) -> AtanLut:
    """atan(2**-i) for i = 0..n-1, rounded once into the configured arithmetic."""
    return _build_lut(params.n, params.fmt)


@lru_cache(maxsize=None)
def gain(n: int) -> GainInfo:
    """Rotation gain An = prod_{i<n} sqrt(1 + 2**-2i) and its reciprocal."""
    if n < 1:
        raise ValueError(f"iteration count must be >= 1, got {n}")
    # double-precision product in iteration order; inv_An is what a real-valued
    # test bench would compute, so Table-style reproductions depend on it
    an = 1.0
    for i in range(n):
        an *= math.sqrt(1.0 + 2.0 ** (-2 * i))
    with mpmath.workdps(_HP_DPS):
        an_hp = mpmath.mpf(1)
        for i in range(n):
            an_hp *= mpmath.sqrt(1 + mpmath.mpf(2) ** (-2 * i))
        inv_hp = 1 / an_hp
    return GainInfo(n, an, 1.0 / an, inv_hp)


@lru_cache(maxsize=None)
def convergence_bound(n: int) -> float:
    """Largest |z0| for which n steps still end with |z| <= atan(2**-(n-1)).

    That is the LUT sum plus its last entry; about 1.7433 for large n.
    """
    with mpmath.workdps(_HP_DPS):
        return float(mpmath.fsum(_atan_hp(i) for i in range(n)) + _atan_hp(n - 1))


def wrap_angle(a: float) -> float:
    """Map to [-pi, pi)."""
    if not math.isfinite(a):
        raise DomainError(f"angle must be finite, got {a}")
    w = math.fmod(a + math.pi, 2 * math.pi)
    if w < 0:
        w += 2 * math.pi
    w -= math.pi
    return -math.pi if w >= math.pi else w


def _coerce(v, fmt: QFormat | None) -> Number:
    if fmt is None:
        if isinstance(v, Fx):
            return to_real(v)
        return float(v)
    if isinstance(v, Fx):
        if v.fmt != fmt:
            raise ValueError(f"operand in {v.fmt}, params expect {fmt}")
        return v
    return from_real(float(v), fmt)


def _real(v: Number) -> float:
    return to_real(v) if isinstance(v, Fx) else v


def _is_neg(v: Number) -> bool:
    return v.raw < 0 if isinstance(v, Fx) else v < 0


def _iterate(x: Number, y: Number, z: Number, params: CordicParams, mode: Mode,
             start: int = 0) -> CordicState:
    lut = build_lut(params)
    n = params.n
    if params.fixed:
        for i in range(start, n):
            if mode is Mode.ROTATION:
                up = z.raw >= 0
            else:
                up = y.raw < 0
            dx = asr(y, i)
            dy = asr(x, i)
            if up:
                x, y, z = x - dx, y + dy, z - lut[i]
            else:
                x, y, z = x + dx, y - dy, z + lut[i]
        return CordicState(x, y, z, n)

    for i in range(start, n):
        if mode is Mode.ROTATION:
            d = -1.0 if z < 0 else 1.0
        else:
            d = 1.0 if y < 0 else -1.0
        t = math.ldexp(1.0, -i)
        x, y = x - y * d * t, y + x * d * t
        z = z - d * lut[i]
    return CordicState(x, y, z, n)


def step(state: CordicState, params: CordicParams, mode: Mode = Mode.ROTATION) -> CordicState:
    """Advance one micro-rotation (index ``state.i``)."""
    if state.i >= params.n:
        raise ValueError(f"state already at iteration {state.i} of {params.n}")
    one = replace(params, n=state.i + 1)
    return _iterate(state.x, state.y, state.z, one, mode, start=state.i)


def rotate(x0, y0, z0, params: CordicParams) -> CordicState:
    """Rotation mode: rotate (x0, y0) by z0, driving z to zero.

    The result carries the gain An; z0 must already be reduced into the
    convergence range (about +-1.7433 rad for large n).
    """
    fmt = params.fmt
    x, y, z = _coerce(x0, fmt), _coerce(y0, fmt), _coerce(z0, fmt)
    bound = convergence_bound(params.n)
    if abs(_real(z)) > bound:
        raise DomainError(f"|z0| = {abs(_real(z)):.6g} exceeds convergence bound {bound:.6g} for n={params.n}")
    return _iterate(x, y, z, params, Mode.ROTATION)


def vector(x0, y0, z0, params: CordicParams) -> CordicState:
    """Vectoring mode: rotate (x0, y0) onto the +x axis.

    Ends with x ~ An*hypot(x0, y0), y ~ 0 and z ~ z0 + atan(y0/x0).
    """
    fmt = params.fmt
    x, y, z = _coerce(x0, fmt), _coerce(y0, fmt), _coerce(z0, fmt)
    if _real(x) <= 0:
        raise DomainError(f"vectoring needs x0 > 0, got {_real(x)}; reduce the quadrant first")
    ang = abs(math.atan(_real(y) / _real(x)))
    bound = convergence_bound(params.n)
    if ang > bound:
        raise DomainError(f"|atan(y0/x0)| = {ang:.6g} exceeds convergence bound {bound:.6g}")
    return _iterate(x, y, z, params, Mode.VECTORING)


@dataclass(frozen=True)
class Flip:
    """What the correction rotation did: ``d`` and which policy applied it."""

    applied: bool
    policy: Correction = Correction.NONE
    d: int = 1


_NO_FLIP = Flip(False)


def quadrant_reduce(x, y, z, policy: Correction, mode: Mode, fmt: QFormat | None = None):
    """Initial +-pi/2 or pi rotation extending convergence to the full circle.

    Rotation mode keys on z: nothing happens for |z| <= pi/2; otherwise the
    vector is turned by d*pi/2 (HALF_PI, d = sign of z) or by pi (PI) and
    the same angle is removed from z. Vectoring mode keys on the signs of
    y (HALF_PI) or x (PI) and records the turn in z so that the final z
    still equals z0 + atan2(y0, x0). Neither rotation changes the length.

    Returns ``(x', y', z', Flip)``.
    """
    x, y, z = _coerce(x, fmt), _coerce(y, fmt), _coerce(z, fmt)
    pi = pi_const(fmt)
    half = half_pi_const(fmt)

    def negate(v):
        return neg(v) if isinstance(v, Fx) else -v

    if mode is Mode.ROTATION:
        zr = _real(z)
        if policy is Correction.NONE or abs(zr) <= _real(half):
            return x, y, z, _NO_FLIP
        if policy is Correction.PI:
            zz = z - pi if zr > 0 else z + pi
            return negate(x), negate(y), zz, Flip(True, policy, -1)
        d = 1 if zr > 0 else -1
        if d > 0:
            return negate(y), x, z - half, Flip(True, policy, 1)
        return y, negate(x), z + half, Flip(True, policy, -1)

    if _real(x) == 0 and _real(y) == 0:
        raise DomainError("vectoring of the zero vector is undefined")
    if policy is Correction.NONE:
        return x, y, z, _NO_FLIP
    if policy is Correction.PI:
        if not _is_neg(x):
            return x, y, z, _NO_FLIP
        # turning by +pi or -pi is the same move; pick the one that keeps
        # the accumulated angle inside (-pi, pi]
        zz = z + pi if not _is_neg(y) else z - pi
        return negate(x), negate(y), zz, Flip(True, policy, -1)
    d = 1 if _is_neg(y) else -1
    if d > 0:
        return negate(y), x, z - half, Flip(True, policy, 1)
    return y, negate(x), z + half, Flip(True, policy, -1)


def _reduced_start(angle: float | Fx, params: CordicParams):
    """Wrap, quantize, build (x0, 0, z0) and apply the correction rotation."""
    fmt = params.fmt
    g = gain(params.n)
    if isinstance(angle, Fx):
        z = _coerce(angle, fmt)
        if params.fixed and abs(z.raw) > _pi_fx(fmt).raw:
            raise DomainError(f"fixed-point angle {to_real(z):.6g} outside [-pi, pi]")
    else:
        z = _coerce(wrap_angle(float(angle)), fmt)
    if params.fixed:
        x0 = g.inv_fx(fmt)
    else:
        x0 = g.inv_An if params.prescale else 1.0
    x, y, z, flip = quadrant_reduce(x0, zero(fmt) if fmt else 0.0, z,
                                    params.correction, Mode.ROTATION, fmt)
    if params.correction is Correction.NONE:
        bound = convergence_bound(params.n)
        if abs(_real(z)) > bound:
            raise DomainError(
                f"angle {_real(z):.6g} beyond {bound:.6g} and quadrant correction is disabled")
    return x, y, z, flip


def sincos(angle: float | Fx, params: CordicParams | None = None):
    """(cos, sin) of ``angle`` via rotation of (1/An, 0).

    Accepts any finite angle; it is wrapped to [-pi, pi) and the quadrant
    correction brings it into range. Fixed-point params return ``Fx``
    results; an ``Fx`` angle is taken as already wrapped.
    """
    params = params or CordicParams()
    x, y, z, _ = _reduced_start(angle, params)
    s = _iterate(x, y, z, params, Mode.ROTATION)
    if params.fixed or params.prescale:
        return s.x, s.y
    inv = gain(params.n).inv_An
    return s.x * inv, s.y * inv


def sincos_trace(angle: float | Fx, params: CordicParams | None = None) -> list[CordicState]:
    """Every intermediate (x, y, z, i) of ``sincos``, starting after reduction."""
    params = params or CordicParams()
    x, y, z, _ = _reduced_start(angle, params)
    states = [CordicState(x, y, z, 0)]
    for _ in range(params.n):
        states.append(step(states[-1], params, Mode.ROTATION))
    return states


def atan2_magnitude(x, y, params: CordicParams | None = None):
    """Full-plane angle of (x, y) with its length.

    Returns ``(angle, magnitude_scaled, magnitude)``: the gain-carrying x
    register and its compensated value. In fixed mode the first two are
    ``Fx`` and the magnitude is a float (compensation needs a multiply).
    """
    params = params or CordicParams()
    fmt = params.fmt
    xs, ys = _coerce(x, fmt), _coerce(y, fmt)
    z0 = zero(fmt) if fmt else 0.0
    xr, yr, zr, _ = quadrant_reduce(xs, ys, z0, params.correction, Mode.VECTORING, fmt)
    if _real(xr) < 0 or (_real(xr) == 0 and _real(yr) == 0):
        raise DomainError(f"({_real(xs)}, {_real(ys)}) not reachable without quadrant correction")
    s = _iterate(xr, yr, zr, params, Mode.VECTORING)
    inv = gain(params.n).inv_An
    mag = _real(s.x) * inv
    if params.fixed:
        z, pi = s.z, _pi_fx(fmt)
        # 2*pi does not fit a Q2.f word, so step by pi twice
        if z.raw > pi.raw:
            z = z - pi - pi
        elif z.raw <= -pi.raw:
            z = z + pi + pi
        return z, s.x, mag
    # result range is (-pi, pi]
    return -wrap_angle(-s.z), s.x, mag
