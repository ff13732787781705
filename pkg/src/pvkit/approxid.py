"""Shrinking-arc limits of ``f(z)/(z - w)``.

For f continuous at a real point w, the integral of ``f(z)/(z - w)`` over
the arc ``w + r e^{it}``, t from theta1 to theta2, tends to
``i (theta2 - theta1) f(w)`` as r -> 0.  This module gives the closed form
and measures the limit numerically.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from ._numfmt import format_float
from .errors import NonConvergenceError
from .expr import as_function
from .path import ArcPath
from .quad import QuadratureConfig, integrate_line

__all__ = [
    "DEFAULT_RADII",
    "ArcLimitReport",
    "arc_identity_value",
    "arc_limit_estimate",
    "angular_moment",
    "richardson_exponents",
    "convergence_table",
]

DEFAULT_RADII = (0.4, 0.2, 0.1, 0.05, 0.025)

# extrapolation_error above this (relative to max(1, |closed form|)) marks the
# report as not behaving like an analytic expansion in r
SUSPECT_THRESHOLD = 1e-6


@dataclass(frozen=True)
class ArcLimitReport:
    closed_form: complex
    estimates: list[tuple[float, complex, float]]
    extrapolated: complex
    extrapolation_error: float
    exponents: tuple[int, ...] = ()
    monotone: bool = True
    suspect: bool = False
    orders: list[complex] = field(default_factory=list)


def arc_identity_value(f, w: float, theta1: float, theta2: float) -> complex:
    """``i (theta2 - theta1) f(w)``: one evaluation, no quadrature."""
    F = as_function(f)
    return 1j * (theta2 - theta1) * complex(np.ravel(F(np.array([complex(w)])))[0])


def angular_moment(n: int, theta1: float, theta2: float) -> complex:
    """``int_{theta1}^{theta2} e^{i n t} dt``."""
    if n == 0:
        return complex(theta2 - theta1)
    return (np.exp(1j * n * theta2) - np.exp(1j * n * theta1)) / (1j * n)


def richardson_exponents(theta1: float, theta2: float, count: int, max_power: int = 64) -> tuple[int, ...]:
    """Powers of r present in the small-radius expansion of the arc integral.

    Expanding f in its Taylor series at w, the r**n coefficient is
    proportional to the angular moment of order n, so powers whose moment
    vanishes (even n on a half arc, every n on a full circle) are skipped.
    """
    span = abs(theta2 - theta1)
    out = []
    for n in range(1, max_power + 1):
        if len(out) == count:
            break
        if abs(angular_moment(n, theta1, theta2)) > 1e-12 * max(1.0, span):
            out.append(n)
    return tuple(out)


def _extrapolate(radii, values, exponents):
    """Richardson table: order j fits ``L + sum_{k<j} c_k r^{p_k}`` to the last j+1 radii."""
    radii = np.asarray(radii, dtype=float)
    values = np.asarray(values, dtype=complex)
    orders = [values[-1]]
    for j in range(1, len(exponents) + 1):
        r = radii[-(j + 1):]
        cols = [np.ones_like(r)]
        for p in exponents[:j]:
            col = r**p
            cols.append(col / np.max(col))
        A = np.column_stack(cols).astype(complex)
        sol = np.linalg.solve(A, values[-(j + 1):])
        orders.append(complex(sol[0]))
    return orders


def arc_limit_estimate(
    f,
    w: float,
    theta1: float,
    theta2: float,
    radii=DEFAULT_RADII,
    cfg: QuadratureConfig | None = None,
) -> ArcLimitReport:
    """Integrate over arcs of decreasing radius and extrapolate to r = 0.

    Extrapolation eliminates the powers of r returned by
    :func:`richardson_exponents`, one order per additional radius;
    ``extrapolation_error`` is the gap between the last two orders.  A
    large gap sets ``suspect`` (f continuous but not analytic at w) without
    raising.

    Raises:
        ValueError: radii not strictly decreasing and positive.
        NonConvergenceError: an arc integral did not converge.
    """
    radii = [float(r) for r in radii]
    if any(r <= 0 for r in radii) or any(a <= b for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be positive and strictly decreasing")
    F = as_function(f)
    w = float(w)
    closed = arc_identity_value(F, w, theta1, theta2)

    def integrand(z):
        return F(z) / (z - w)

    estimates = []
    for r in radii:
        res = integrate_line(integrand, ArcPath(w, r, theta1, theta2), cfg)
        if not res.converged:
            raise NonConvergenceError(f"arc integral at r={r} did not converge", res)
        estimates.append((r, res.value, abs(res.value - closed)))

    if not estimates:
        return ArcLimitReport(closed, [], closed, math.inf, suspect=True)

    exps = richardson_exponents(theta1, theta2, len(radii) - 1)
    vals = [v for _, v, _ in estimates]
    if exps:
        orders = _extrapolate(radii, vals, exps)
        extrapolated = orders[-1]
        xerr = abs(orders[-1] - orders[-2])
    else:
        # no power of r survives: the arc integral is constant in r
        orders = [vals[-1]]
        extrapolated = vals[-1]
        xerr = float(max(abs(v - vals[-1]) for v in vals))

    devs = [d for _, _, d in estimates]
    monotone = all(a > b for a, b in zip(devs, devs[1:]))
    suspect = xerr > SUSPECT_THRESHOLD * max(1.0, abs(closed))
    return ArcLimitReport(closed, estimates, extrapolated, float(xerr), exps, monotone, suspect, orders)


def convergence_table(report: ArcLimitReport, fmt: str = "text") -> str:
    """Render ``(r, re, im, abs_deviation)`` rows as fixed-width text or CSV."""
    header = ("r", "re", "im", "abs_deviation")
    rows = [(r, v.real, v.imag, d) for r, v, d in report.estimates]
    if fmt == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(header)
        for row in rows:
            wr.writerow([format_float(x) for x in row])
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown table format {fmt!r}")
    lines = ["".join(f"{h:>24}" for h in header)]
    for row in rows:
        lines.append("".join(f"{x:>24.15e}" for x in row))
    return "\n".join(lines) + "\n"
