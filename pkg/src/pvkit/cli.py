"""``pvkit`` command-line interface.

Every subcommand prints one JSON envelope (or CSV) on success. Exit codes:
0 success, 2 usage or invalid input, 3 expression parse error,
4 non-convergence, 5 evaluation error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import math
import sys
import warnings

import numpy as np

from . import __version__
from ._numfmt import format_float
from .approxid import DEFAULT_RADII, arc_limit_estimate, convergence_table
from .errors import EvaluationError, NonConvergenceError, ParseError, PVKitError
from .expr import evaluate, parse
from .path import circle, lower_contour, upper_contour
from .pv import PVConfig, TailStrategy, pv_cauchy, verify_cauchy_goursat
from .quad import QuadratureConfig, integrate_line
from .transforms import (
    DegenerateFrequencyWarning,
    dirichlet_result,
    fourier_one_over_x,
    hilbert_grid,
    hilbert_point_result,
)

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_NONCONVERGENCE = 4
EXIT_EVALUATION = 5

_TAILS = {
    "auto": TailStrategy.AUTO,
    "osc": TailStrategy.OSCILLATORY_ACCELERATION,
    "exp": TailStrategy.EXPONENTIAL_BOUND,
    "pow": TailStrategy.POWER_ESTIMATE,
}


# -- serialization ------------------------------------------------------------------

def _num(x: float) -> str:
    s = format_float(x)
    return s if math.isfinite(x) else f'"{s}"'


def _plain(obj):
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON: insertion-ordered keys, floats at 17 significant digits."""
    obj = _plain(obj)
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{dumps(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _num(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for row in rows:
        wr.writerow([format_float(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


# -- argument parsing ---------------------------------------------------------------

class _UsageError(Exception):
    pass


class _Exit(Exception):
    def __init__(self, status):
        self.status = status


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}\n")

    def exit(self, status=0, message=None):
        if message:
            sys.stdout.write(message)
        raise _Exit(status)


def _real(text: str) -> float:
    """A float, or a constant expression such as ``pi/2``."""
    try:
        v = float(text)
    except ValueError:
        pass
    else:
        if not math.isfinite(v):
            raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
        return v
    try:
        ast = parse(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from exc
    if ast.variables():
        raise argparse.ArgumentTypeError(f"not a constant: {text!r}")
    v = evaluate(ast, 0.0)
    if v.imag != 0:
        raise argparse.ArgumentTypeError(f"not real: {text!r}")
    return float(v.real)


def _positive(text: str) -> float:
    v = _real(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _radii(text: str) -> list[float]:
    try:
        return [_positive(p) for p in text.split(",") if p.strip()]
    except argparse.ArgumentTypeError as exc:
        raise argparse.ArgumentTypeError(f"bad radius list {text!r}: {exc}") from exc


def _grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must be START:STEP:COUNT")
    try:
        count = int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"COUNT must be an integer: {parts[2]!r}") from exc
    if count < 1:
        raise argparse.ArgumentTypeError("COUNT must be >= 1")
    return _real(parts[0]), _positive(parts[1]), count


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--tol", type=_positive, default=None, help="target tolerance")
    common.add_argument("--out", default=None, help="output file (default: standard output)")

    parser = _Parser(prog="pvkit", description="Principal-value integrals, Hilbert transforms and contour checks.")
    parser.add_argument("--version", action="version", version=f"pvkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("arc", parents=[common], help="shrinking-arc limit of f(z)/(z-w)")
    p.add_argument("--expr", required=True)
    p.add_argument("--w", type=_real, required=True)
    p.add_argument("--theta1", type=_real, required=True)
    p.add_argument("--theta2", type=_real, required=True)
    p.add_argument("--radii", type=_radii, default=list(DEFAULT_RADII))

    p = sub.add_parser("pv", parents=[common], help="PV integral of f(x)/(x-w)")
    p.add_argument("--expr", required=True)
    p.add_argument("--w", type=_real, default=0.0)
    p.add_argument("--truncation", type=_positive, default=50.0)
    p.add_argument("--tail", choices=tuple(_TAILS), default="auto")

    p = sub.add_parser("hilbert", parents=[common], help="Hilbert transform at a point or on a grid")
    p.add_argument("--expr", required=True)
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--w", type=_real)
    where.add_argument("--grid", type=_grid, metavar="START:STEP:COUNT")

    p = sub.add_parser("fourier1x", parents=[common], help="PV Fourier transform of 1/x")
    p.add_argument("--omega", type=_real, required=True)
    p.add_argument("--numeric", action="store_true")

    p = sub.add_parser("goursat", parents=[common], help="closed-contour integral residual")
    p.add_argument("--expr", required=True)
    p.add_argument("--contour", choices=("upper", "lower", "circle"), required=True)
    p.add_argument("--w", type=_real, default=0.0)
    p.add_argument("--r", type=_positive, default=None, help="indentation radius (upper/lower)")
    p.add_argument("--R", type=_positive, required=True, dest="R_outer", metavar="R",
                   help="outer radius; the radius for --contour circle")

    sub.add_parser("dirichlet", parents=[common], help="integral of sin(x)/x over the real line")
    return parser


# -- configuration from flags ------------------------------------------------------

def _quad_cfg(tol):
    if tol is None:
        return QuadratureConfig()
    return QuadratureConfig(abs_tol=tol, rel_tol=tol)


def _pv_cfg(args, truncation=50.0, tail="auto") -> PVConfig:
    if args.tol is None:
        return PVConfig(truncation_R=truncation, tail_strategy=_TAILS[tail])
    q = min(1e-10, args.tol * 1e-2)
    return PVConfig(
        truncation_R=truncation,
        tail_strategy=_TAILS[tail],
        quad_cfg=QuadratureConfig(abs_tol=q, rel_tol=q),
        target_tol=args.tol,
    )


def _pv_diag(res) -> dict:
    return {
        "converged": res.converged,
        "error_estimate": res.error_estimate,
        "panels_used": res.panels_used,
        "tail_strategy": res.tail_strategy,
        "intervals_used": res.intervals_used,
        "notes": list(res.notes),
    }


# -- subcommands: each returns (result, diagnostics, csv_text, converged) -------------

def _cmd_arc(args):
    f = parse(args.expr)
    rep = arc_limit_estimate(f, args.w, args.theta1, args.theta2, args.radii, _quad_cfg(args.tol))
    result = {
        "closed_form": rep.closed_form,
        "extrapolated": rep.extrapolated,
        "extrapolation_error": rep.extrapolation_error,
        "estimates": [
            {"r": r, "re": v.real, "im": v.imag, "abs_deviation": d} for r, v, d in rep.estimates
        ],
    }
    diag = {
        "converged": True,
        "exponents": list(rep.exponents),
        "monotone": rep.monotone,
        "suspect": rep.suspect,
    }
    return result, diag, convergence_table(rep, "csv"), True


def _cmd_pv(args):
    f = parse(args.expr)
    res = pv_cauchy(f, args.w, _pv_cfg(args, args.truncation, args.tail))
    rep = res.report()
    rows = [[
        rep["value_re"], rep["value_im"], rep["error_estimate"],
        res.core_value.real, res.core_value.imag, res.tail_value.real, res.tail_value.imag,
        rep["tail_strategy"], rep["intervals_used"], str(rep["converged"]).lower(),
    ]]
    text = _csv(["value_re", "value_im", "error_estimate", "core_re", "core_im", "tail_re", "tail_im",
                 "tail_strategy", "intervals_used", "converged"], rows)
    return rep, _pv_diag(res), text, res.converged


def _cmd_hilbert(args):
    f = parse(args.expr)
    cfg = _pv_cfg(args)
    if args.grid is None:
        value, res = hilbert_point_result(f, args.w, cfg)
        return {"value": value}, _pv_diag(res), _csv(["w", "value"], [[args.w, value]]), True
    start, step, count = args.grid
    sig = hilbert_grid(f, start, step, count, cfg)
    result = {"x_start": sig.x_start, "dx": sig.dx, "values": list(sig.values)}
    return result, {"converged": True, "points": count}, sig.to_csv(), True


def _cmd_fourier1x(args):
    mode = "numeric" if args.numeric else "analytic"
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateFrequencyWarning)
        value = fourier_one_over_x(args.omega, mode, _pv_cfg(args))
    degenerate = any(issubclass(w.category, DegenerateFrequencyWarning) for w in caught)
    diag = {"converged": True, "mode": mode, "degenerate": degenerate}
    return value, diag, _csv(["re", "im"], [[value.real, value.imag]]), True


def _cmd_goursat(args):
    f = parse(args.expr)
    if args.contour == "circle":
        contour = circle(args.w, args.R_outer)
    else:
        if args.r is None:
            raise _UsageError(f"goursat --contour {args.contour} requires --r\n")
        build = upper_contour if args.contour == "upper" else lower_contour
        contour = build(args.w, args.r, args.R_outer)
    cfg = _quad_cfg(args.tol)
    res = integrate_line(f, contour, cfg)
    residual = verify_cauchy_goursat(f, contour, cfg)
    result = {"residual": residual, "value": res.value}
    diag = {"converged": res.converged, "error_estimate": res.error_estimate, "panels_used": res.panels_used}
    text = _csv(["residual", "re", "im"], [[residual, res.value.real, res.value.imag]])
    return result, diag, text, res.converged


def _cmd_dirichlet(args):
    res = dirichlet_result(_pv_cfg(args))
    value = res.value.imag
    result = {"value": value, "real_part": res.value.real}
    return result, _pv_diag(res), _csv(["value"], [[value]]), res.converged


_COMMANDS = {
    "arc": _cmd_arc,
    "pv": _cmd_pv,
    "hilbert": _cmd_hilbert,
    "fourier1x": _cmd_fourier1x,
    "goursat": _cmd_goursat,
    "dirichlet": _cmd_dirichlet,
}


def _error_doc(command, kind, code, message, **extra) -> str:
    err = {"kind": kind, "exit_code": code, "message": message}
    err.update(extra)
    return dumps({"command": command, "error": err, "schema_version": SCHEMA_VERSION}) + "\n"


def _execute(argv):
    """Returns (exit code, text, output path or None)."""
    parser = build_parser()
    help_buf = io.StringIO()
    try:
        with contextlib.redirect_stdout(help_buf):
            args = parser.parse_args(argv)
    except _UsageError as exc:
        return EXIT_USAGE, str(exc), None
    except _Exit as exc:
        return exc.status, help_buf.getvalue(), None

    command = args.command
    inputs = {k: v for k, v in vars(args).items() if k != "command"}
    if "R_outer" in inputs:
        inputs["R"] = inputs.pop("R_outer")
    if "grid" in inputs and inputs["grid"] is not None:
        start, step, count = inputs["grid"]
        inputs["grid"] = {"start": start, "step": step, "count": count}
    try:
        result, diag, csv_text, converged = _COMMANDS[command](args)
    except _UsageError as exc:
        return EXIT_USAGE, parser.format_usage() + "pvkit: error: " + str(exc), None
    except ParseError as exc:
        return EXIT_PARSE, _error_doc(command, "parse", EXIT_PARSE, exc.message, position=exc.position), None
    except NonConvergenceError as exc:
        diag = _pv_diag(exc.result) if hasattr(exc.result, "tail_strategy") else {}
        return EXIT_NONCONVERGENCE, _error_doc(command, "nonconvergence", EXIT_NONCONVERGENCE, str(exc),
                                               diagnostics=diag), None
    except EvaluationError as exc:
        return EXIT_EVALUATION, _error_doc(command, "evaluation", EXIT_EVALUATION, str(exc)), None
    except (PVKitError, ValueError) as exc:
        return EXIT_USAGE, _error_doc(command, "invalid_input", EXIT_USAGE, str(exc)), None

    if not converged:
        return EXIT_NONCONVERGENCE, _error_doc(command, "nonconvergence", EXIT_NONCONVERGENCE,
                                               "result did not reach the requested tolerance",
                                               diagnostics=diag), None
    if args.format == "csv":
        text = csv_text
    else:
        envelope = {
            "command": command,
            "inputs": inputs,
            "result": result,
            "diagnostics": diag,
            "schema_version": SCHEMA_VERSION,
        }
        text = dumps(envelope) + "\n"
    return EXIT_OK, text, args.out


def run(argv) -> tuple[int, str]:
    """Execute one command; writes ``--out`` if given and returns ``(exit code, text)``."""
    code, text, out = _execute(list(argv))
    if code == EXIT_OK and out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code, text


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, text, out = _execute(list(argv))
    if code == EXIT_OK:
        if out:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        sys.stderr.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
