"""Cycle-level model of the 8-bit dedicated processor.

Two machines share the control word, the S0-S5 state names and the trace
format:

* ``Table1Machine`` is the published datapath verbatim: registers X and Y,
  an input mux per register, a subtract-only ALU (X-Y or Y-X) and an
  equality/greater-than comparator, sequenced by the six-state FSM. It
  computes a repeated-subtraction GCD.
* ``CordicMachine`` widens the datapath with a Z register, an iteration
  counter, two barrel shifters, an arctangent ROM and three add/sub units,
  and performs one micro-rotation per clock.

ALU function codes (the ``alu`` field, written alu2 alu1 alu0):

====  =========================================================
101   SUB: X-Y when xy=1, Y-X when xy=0 (every Table I state)
001   ROT: one micro-rotation; xy=1 means d=+1, xy=0 means d=-1
010   RED: quadrant correction of X, Y, Z
====  =========================================================

Registers update only on the rising edge; muxes, ALU and comparators are
combinational. When oe=0 the output bus reads as zero.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Iterable

from .cordic import (
    CordicParams,
    Correction,
    DomainError,
    build_lut,
    convergence_bound,
    gain,
    pi_const,
    half_pi_const,
)
from .fixedpoint import Fx, QFormat, asr, neg, to_real, zero

ALU_SUB = 0b101
ALU_ROT = 0b001
ALU_RED = 0b010


class FsmState(Enum):
    S0 = 0
    S1 = 1
    S2 = 2
    S3 = 3
    S4 = 4
    S5 = 5

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class ControlWord:
    in_x: int = 0
    in_y: int = 0
    x_load: int = 0
    y_load: int = 0
    xy: int = 0
    clear: int = 0
    alu: int = ALU_SUB
    oe: int = 0
    done: int = 0

    def bits(self) -> str:
        """in_x in_y x_load y_load xy clear alu2 alu1 alu0 oe done"""
        return (f"{self.in_x}{self.in_y}{self.x_load}{self.y_load}{self.xy}{self.clear}"
                f"{self.alu:03b}{self.oe}{self.done}")


# Table I, row by row
CONTROL_TABLE = {
    FsmState.S0: ControlWord(in_x=1, in_y=1, x_load=1, y_load=1, xy=0, clear=0, alu=0b101, oe=0, done=0),
    FsmState.S1: ControlWord(in_x=0, in_y=0, x_load=0, y_load=0, xy=0, clear=0, alu=0b101, oe=0, done=0),
    FsmState.S2: ControlWord(in_x=0, in_y=0, x_load=1, y_load=0, xy=1, clear=0, alu=0b101, oe=0, done=0),
    FsmState.S3: ControlWord(in_x=0, in_y=0, x_load=0, y_load=1, xy=0, clear=0, alu=0b101, oe=0, done=0),
    FsmState.S4: ControlWord(in_x=0, in_y=0, x_load=0, y_load=0, xy=0, clear=0, alu=0b101, oe=1, done=1),
    FsmState.S5: ControlWord(in_x=1, in_y=1, x_load=0, y_load=0, xy=0, clear=1, alu=0b101, oe=0, done=0),
}


def control_word(state: FsmState) -> ControlWord:
    return CONTROL_TABLE[state]


def fsm_next(state: FsmState, reset: int, eq: int = 0, neq1: int = 0) -> FsmState:
    """Next state of the control unit.

    ``neq1`` is taken to be the comparator's X > Y output: it picks S2
    (X <- X-Y) over S3 (Y <- Y-X).
    """
    if reset:
        return FsmState.S5
    if state is FsmState.S5:
        return FsmState.S0
    if state is FsmState.S0:
        return FsmState.S1
    if state is FsmState.S1:
        if eq:
            return FsmState.S4
        return FsmState.S2 if neq1 else FsmState.S3
    if state in (FsmState.S2, FsmState.S3):
        return FsmState.S1
    return FsmState.S4


@dataclass(frozen=True)
class DatapathRegs:
    X: Fx
    Y: Fx
    Z: Fx
    iter: int = 0
    eq: int = 0
    gt: int = 0

    @classmethod
    def cleared(cls, fmt: QFormat) -> DatapathRegs:
        z = zero(fmt)
        return cls(z, z, z, 0, 1, 0)

    def with_compare(self) -> DatapathRegs:
        return replace(self, eq=int(self.X.raw == self.Y.raw), gt=int(self.X.raw > self.Y.raw))


@dataclass(frozen=True)
class TraceRecord:
    cycle: int
    state: FsmState
    ctrl: ControlWord
    X: Fx
    Y: Fx
    Z: Fx
    iter: int

    def line(self) -> str:
        return (f"cycle={self.cycle} state={self.state} ctrl={self.ctrl.bits()} "
                f"X={self.X.hex()} Y={self.Y.hex()} Z={self.Z.hex()} iter={self.iter}")

    def __str__(self):
        return self.line()


def _record(cycle, state, ctrl, regs: DatapathRegs) -> TraceRecord:
    return TraceRecord(cycle, state, ctrl, regs.X, regs.Y, regs.Z, regs.iter)


def output_bus(regs: DatapathRegs, ctrl: ControlWord) -> Fx:
    """Tri-state output: X when oe=1, zero otherwise."""
    return regs.X if ctrl.oe else zero(regs.X.fmt)


def step(regs: DatapathRegs, ctrl: ControlWord, ext_in: Fx, ext_y: Fx | None = None) -> DatapathRegs:
    """One rising edge of the two-register datapath.

    ``ext_in`` drives the X input port and, unless ``ext_y`` is given, the
    Y input port too.
    """
    ext_x = ext_in
    ext_y = ext_in if ext_y is None else ext_y
    if ctrl.clear:
        return DatapathRegs.cleared(regs.X.fmt)
    if not (ctrl.x_load or ctrl.y_load):
        return regs

    def alu() -> Fx:
        if ctrl.alu != ALU_SUB:
            raise ValueError(f"ALU code {ctrl.alu:03b} not implemented by this datapath")
        return regs.X - regs.Y if ctrl.xy else regs.Y - regs.X

    x, y = regs.X, regs.Y
    if ctrl.x_load:
        x = ext_x if ctrl.in_x else alu()
    if ctrl.y_load:
        y = ext_y if ctrl.in_y else alu()
    return replace(regs, X=x, Y=y).with_compare()


class Table1Machine:
    """The six-state controller driving the two-register datapath."""

    def __init__(self, a: Fx, b: Fx):
        if a.fmt != b.fmt:
            raise ValueError(f"format mismatch: {a.fmt} vs {b.fmt}")
        self.a, self.b = a, b
        self.state = FsmState.S5
        self.regs = DatapathRegs.cleared(a.fmt)
        self.cycle = 0
        self.reset = 0

    def assert_reset(self):
        """Drive Reset high for the next clock."""
        self.reset = 1
        self.state = fsm_next(self.state, 1)

    def clock(self) -> TraceRecord:
        ctrl = control_word(self.state)
        self.regs = step(self.regs, ctrl, self.a, self.b)
        rec = _record(self.cycle, self.state, ctrl, self.regs)
        self.reset = 0
        self.state = fsm_next(self.state, self.reset, self.regs.eq, self.regs.gt)
        self.cycle += 1
        return rec


def run_table1_machine(input_a: Fx, input_b: Fx, max_cycles: int = 1024,
                       trace_sink: Callable[[TraceRecord], None] | None = None):
    """Reset, load, subtract until X == Y; returns ``(trace, output)``."""
    if max_cycles < 1:
        raise ValueError("max_cycles must be >= 1")
    m = Table1Machine(input_a, input_b)
    trace = []
    for _ in range(max_cycles):
        rec = m.clock()
        trace.append(rec)
        if trace_sink is not None:
            trace_sink(rec)
        if rec.ctrl.done:
            return trace, output_bus(m.regs, rec.ctrl)
    raise TimeoutError(f"no done after {max_cycles} cycles (state {m.state})")


class _Phase(Enum):
    RESET = "reset"
    LOAD = "load"
    REDUCE = "reduce"
    ROTATE = "rotate"
    DONE = "done"


_RED_WORD = ControlWord(x_load=1, y_load=1, alu=ALU_RED)


class CordicMachine:
    """Sequencer for sine/cosine: reset, load, reduce, n rotations, done.

    After the reset clock the computation takes exactly n + 3 clocks.
    """

    PROLOGUE = 2
    EPILOGUE = 1

    def __init__(self, angle: Fx, params: CordicParams):
        if not params.fixed:
            raise ValueError("the processor model needs fixed-point params")
        fmt = params.fmt
        if angle.fmt != fmt:
            raise ValueError(f"angle in {angle.fmt}, params expect {fmt}")
        self.params = params
        self.fmt = fmt
        self.angle = angle
        # ROM contents
        self.atan_rom = build_lut(params).entries
        self.x0_rom = gain(params.n).inv_fx(fmt)
        self.pi = pi_const(fmt)
        self.half_pi = half_pi_const(fmt)
        if abs(angle.raw) > self.pi.raw:
            raise DomainError(f"fixed-point angle {to_real(angle):.6g} outside [-pi, pi]")
        self.regs = DatapathRegs.cleared(fmt)
        self.phase = _Phase.RESET
        self.cycle = 0

    @property
    def cycles_after_reset(self) -> int:
        return self.params.n + self.PROLOGUE + self.EPILOGUE

    def _control(self) -> tuple[FsmState, ControlWord]:
        p = self.phase
        if p is _Phase.RESET:
            return FsmState.S5, control_word(FsmState.S5)
        if p is _Phase.LOAD:
            return FsmState.S0, control_word(FsmState.S0)
        if p is _Phase.REDUCE:
            return FsmState.S1, _RED_WORD
        if p is _Phase.ROTATE:
            # status: sign bit of Z
            up = int(self.regs.Z.raw >= 0)
            ctrl = ControlWord(x_load=1, y_load=1, xy=up, alu=ALU_ROT)
            return (FsmState.S2 if up else FsmState.S3), ctrl
        return FsmState.S4, control_word(FsmState.S4)

    def _reduce(self, r: DatapathRegs) -> DatapathRegs:
        policy = self.params.correction
        z = r.Z
        above = z.raw > self.half_pi.raw
        below = z.raw < -self.half_pi.raw
        if policy is Correction.NONE:
            if abs(to_real(z)) > convergence_bound(self.params.n):
                raise DomainError(
                    f"angle {to_real(z):.6g} out of range and quadrant correction is disabled")
            return r
        if not (above or below):
            return r
        if policy is Correction.PI:
            z = z - self.pi if above else z + self.pi
            return replace(r, X=neg(r.X), Y=neg(r.Y), Z=z)
        if above:
            return replace(r, X=neg(r.Y), Y=r.X, Z=z - self.half_pi)
        return replace(r, X=r.Y, Y=neg(r.X), Z=z + self.half_pi)

    def _rotate(self, r: DatapathRegs, up: int) -> DatapathRegs:
        k = r.iter
        sx = asr(r.Y, k)
        sy = asr(r.X, k)
        a = self.atan_rom[k]
        if up:
            return replace(r, X=r.X - sx, Y=r.Y + sy, Z=r.Z - a, iter=k + 1)
        return replace(r, X=r.X + sx, Y=r.Y - sy, Z=r.Z + a, iter=k + 1)

    def clock(self) -> TraceRecord:
        state, ctrl = self._control()
        r = self.regs
        if ctrl.clear:
            r = DatapathRegs.cleared(self.fmt)
        elif self.phase is _Phase.LOAD:
            r = DatapathRegs(self.x0_rom, zero(self.fmt), self.angle, 0)
        elif ctrl.alu == ALU_RED:
            r = self._reduce(r)
        elif ctrl.alu == ALU_ROT:
            r = self._rotate(r, ctrl.xy)
        self.regs = r
        rec = _record(self.cycle, state, ctrl, r)
        self.cycle += 1
        self.phase = self._next_phase()
        return rec

    def _next_phase(self) -> _Phase:
        p = self.phase
        if p is _Phase.RESET:
            return _Phase.LOAD
        if p is _Phase.LOAD:
            return _Phase.REDUCE
        if p is _Phase.REDUCE or p is _Phase.ROTATE:
            return _Phase.ROTATE if self.regs.iter < self.params.n else _Phase.DONE
        return _Phase.DONE


def run_cordic_machine(angle: Fx, params: CordicParams,
                       trace_sink: Callable[[TraceRecord], None] | None = None):
    """Simulate one sine/cosine evaluation; returns ``(cos, sin, trace)``.

    The first trace record is the reset clock (cycle 0, state S5); the
    remaining n + 3 records cover load, reduce, the rotations and done.
    """
    m = CordicMachine(angle, params)
    trace = []
    while True:
        rec = m.clock()
        trace.append(rec)
        if trace_sink is not None:
            trace_sink(rec)
        if rec.ctrl.done:
            return m.regs.X, m.regs.Y, trace


def format_trace(trace: Iterable[TraceRecord]) -> str:
    return "".join(rec.line() + "\n" for rec in trace)
