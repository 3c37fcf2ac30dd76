"""Command-line entry point: ``cordic-kit <command> [flags]``.

Exit codes: 0 ok, 2 bad arguments or DomainError, 3 OverflowError,
4 simulation timeout.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys

from .cordic import (CordicParams, Correction, DomainError, atan2_magnitude, build_lut, sincos,
                     wrap_angle)
from .fixedpoint import Fx, QFormat, from_real, to_real
from . import microsim, oracle

EXIT_DOMAIN = 2
EXIT_OVERFLOW = 3
EXIT_TIMEOUT = 4


def _add_fixed_flags(p, always_fixed=False):
    if not always_fixed:
        p.add_argument("--fixed", action="store_true", help="use fixed-point arithmetic")
    p.add_argument("--width", type=int, default=None, help="word width in bits (default 16)")
    p.add_argument("--frac", type=int, default=None, help="fraction bits (default width-3)")


def _add_common(p):
    p.add_argument("--iters", type=int, default=None, help="iteration count n")
    p.add_argument("--correction", choices=[c.value for c in Correction], default="pi",
                   help="quadrant correction policy (default pi)")
    p.add_argument("--json", action="store_true", help="emit JSON")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cordic-kit", description=__doc__.splitlines()[0])
    ap.add_argument("-o", "--output", default=None, help="write results to this file instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sincos", help="cosine and sine of an angle")
    p.add_argument("--angle", type=float, required=True, help="angle in radians")
    p.add_argument("--deg", action="store_true", help="--angle is in degrees")
    _add_common(p)
    _add_fixed_flags(p)

    p = sub.add_parser("vector", help="angle and magnitude of (x, y)")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    _add_common(p)
    _add_fixed_flags(p)

    p = sub.add_parser("lut", help="print the arctangent table")
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--json", action="store_true")
    _add_fixed_flags(p)

    p = sub.add_parser("sim", help="run the processor model")
    p.add_argument("--machine", choices=["cordic", "table1"], default="cordic")
    p.add_argument("--angle", type=float, default=0.0, help="angle in radians (cordic machine)")
    p.add_argument("--deg", action="store_true")
    p.add_argument("--a", type=int, default=None, help="raw X input (table1 machine)")
    p.add_argument("--b", type=int, default=None, help="raw Y input (table1 machine)")
    p.add_argument("--max-cycles", type=int, default=1024)
    p.add_argument("--trace", default=None, help="write the cycle trace to this file")
    _add_common(p)
    _add_fixed_flags(p, always_fixed=True)

    p = sub.add_parser("table5", help="error vs angle and rotation count")
    p.add_argument("--csv", default=None, help="also write the rows as CSV to this file")
    p.add_argument("--prescale", action="store_true", help="fold 1/An into x0 instead of scaling at the end")
    p.add_argument("--json", action="store_true")
    _add_fixed_flags(p)
    return ap


def _fmt(args, force=False) -> QFormat | None:
    if not (force or getattr(args, "fixed", False)):
        if args.width is not None or args.frac is not None:
            raise SystemExit(_usage_error("--width/--frac need --fixed"))
        return None
    width = 16 if args.width is None else args.width
    frac = width - 3 if args.frac is None else args.frac
    try:
        return QFormat(width, frac)
    except ValueError as e:
        raise SystemExit(_usage_error(str(e)))


def _usage_error(msg: str) -> int:
    print(f"cordic-kit: error: {msg}", file=sys.stderr)
    return 2


def _params(args, fmt) -> CordicParams:
    try:
        return CordicParams(args.iters, fmt, Correction(args.correction))
    except ValueError as e:
        raise SystemExit(_usage_error(str(e)))


def _angle(args) -> float:
    return math.radians(args.angle) if args.deg else args.angle


def _num(v):
    if isinstance(v, Fx):
        return {"value": to_real(v), "raw": v.raw, "hex": v.hex()}
    return v


def _show(v) -> str:
    if isinstance(v, Fx):
        return f"{to_real(v):.8f} ({v.hex()})"
    return f"{v:.8f}"


def cmd_sincos(args, out):
    params = _params(args, _fmt(args))
    angle = _angle(args)
    c, s = sincos(angle, params)
    if args.json:
        doc = {"angle": angle, "n": params.n, "format": str(params.fmt) if params.fmt else "real",
               "cos": _num(c), "sin": _num(s)}
        print(json.dumps(doc), file=out)
    else:
        print(f"cos {_show(c)} sin {_show(s)}", file=out)


def cmd_vector(args, out):
    params = _params(args, _fmt(args))
    ang, scaled, mag = atan2_magnitude(args.x, args.y, params)
    if args.json:
        doc = {"x": args.x, "y": args.y, "n": params.n, "angle": _num(ang),
               "magnitude_scaled": _num(scaled), "magnitude": mag}
        print(json.dumps(doc), file=out)
    else:
        print(f"angle {_show(ang)} magnitude {mag:.8f}", file=out)


def cmd_lut(args, out):
    fmt = _fmt(args)
    params = CordicParams(args.iters, fmt)
    lut = build_lut(params)
    if args.json:
        print(json.dumps({"n": params.n, "entries": [_num(e) for e in lut.entries]}), file=out)
        return
    for i, e in enumerate(lut.entries):
        print(f"{i:3d} {_show(e)}", file=out)


def cmd_sim(args, out):
    fmt = _fmt(args, force=True)
    lines = []
    if args.machine == "table1":
        if args.a is None or args.b is None:
            raise SystemExit(_usage_error("--machine table1 needs --a and --b"))
        trace, result = microsim.run_table1_machine(
            Fx(args.a, fmt), Fx(args.b, fmt), args.max_cycles, lambda r: lines.append(r.line()))
        doc = {"machine": "table1", "output": _num(result), "cycles": len(trace)}
        text = f"output {result.raw} ({result.hex()}) after {len(trace)} cycles"
    else:
        params = _params(args, fmt)
        angle = from_real(wrap_angle(_angle(args)), fmt)
        c, s, trace = microsim.run_cordic_machine(angle, params, lambda r: lines.append(r.line()))
        doc = {"machine": "cordic", "n": params.n, "cos": _num(c), "sin": _num(s),
               "cycles": len(trace) - 1}
        text = f"cos {_show(c)} sin {_show(s)} after {len(trace) - 1} cycles (+1 reset)"
    if args.trace:
        with open(args.trace, "w") as f:
            f.write("".join(line + "\n" for line in lines))
    print(json.dumps(doc) if args.json else text, file=out)


def cmd_table5(args, out):
    fmt = _fmt(args)
    rows = oracle.table5(fmt, prescale=True if args.prescale else None)
    if args.csv:
        with open(args.csv, "w", newline="") as f:
            f.write(oracle.to_csv(rows))
    if args.json:
        for r in rows:
            print(json.dumps(r.__dict__), file=out)
    else:
        print(oracle.format_table(rows), file=out)


COMMANDS = {
    "sincos": cmd_sincos,
    "vector": cmd_vector,
    "lut": cmd_lut,
    "sim": cmd_sim,
    "table5": cmd_table5,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    with contextlib.ExitStack() as stack:
        out = sys.stdout if args.output is None else stack.enter_context(open(args.output, "w"))
        try:
            COMMANDS[args.command](args, out)
        except DomainError as e:
            print(f"cordic-kit: domain error: {e}", file=sys.stderr)
            return EXIT_DOMAIN
        except OverflowError as e:
            print(f"cordic-kit: overflow: {e}", file=sys.stderr)
            return EXIT_OVERFLOW
        except TimeoutError as e:
            print(f"cordic-kit: timeout: {e}", file=sys.stderr)
            return EXIT_TIMEOUT
        except SystemExit as e:
            return int(e.code or 0)
    return 0


if __name__ == "__main__":
    sys.exit(main())
