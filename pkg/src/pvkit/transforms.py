"""Hilbert transforms, the PV Fourier transform of 1/x, and the Dirichlet integral."""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass

import numpy as np

from ._numfmt import format_float
from .errors import EvaluationError, NonConvergenceError
from .expr import ExprAst, as_function, parse
from .pv import PVConfig, PVResult, pv_cauchy

__all__ = [
    "GridSignal",
    "ConjugatePairReport",
    "DegenerateFrequencyWarning",
    "hilbert_point",
    "hilbert_point_result",
    "hilbert_grid",
    "conjugate_pair_check",
    "fourier_one_over_x",
    "dirichlet_integral",
    "dirichlet_result",
]

REAL_TOL = 1e-12


class DegenerateFrequencyWarning(UserWarning):
    """omega = 0: the value returned is the PV of 1/x alone."""


@dataclass(frozen=True)
class GridSignal:
    x_start: float
    dx: float
    values: tuple[float, ...]

    def __post_init__(self):
        if not self.dx > 0:
            raise ValueError("dx must be positive")
        if len(self.values) == 0:
            raise ValueError("values must be non-empty")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @property
    def x(self) -> np.ndarray:
        return self.x_start + self.dx * np.arange(len(self.values))

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["w", "value"])
        for w, v in zip(self.x, self.values):
            wr.writerow([format_float(w), format_float(v)])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"x_start": self.x_start, "dx": self.dx, "values": list(self.values)})

    @classmethod
    def from_json(cls, text: str) -> "GridSignal":
        d = json.loads(text)
        return cls(float(d["x_start"]), float(d["dx"]), tuple(d["values"]))


@dataclass(frozen=True)
class ConjugatePairReport:
    sample_points: tuple[float, ...]
    residual_v: float
    residual_u: float
    degenerate: bool = False


def _check_real(F, w: float, cfg: PVConfig):
    xs = w + np.linspace(-cfg.truncation_R, cfg.truncation_R, 33)
    vals = np.asarray(F(xs + 0j))
    if np.max(np.abs(vals.imag)) >= REAL_TOL:
        raise ValueError("integrand is not real-valued on the real axis")


def hilbert_point_result(u, w: float, cfg: PVConfig | None = None) -> tuple[float, PVResult]:
    """``H{u}(w)`` together with the underlying PV diagnostics."""
    cfg = cfg or PVConfig()
    F = as_function(u)
    _check_real(F, float(w), cfg)
    res = pv_cauchy(F, w, cfg)
    if not res.converged:
        raise NonConvergenceError(f"PV integral at w={w} did not converge: {'; '.join(res.notes)}", res)
    return -res.value.real / np.pi, res


def hilbert_point(u, w: float, cfg: PVConfig | None = None) -> float:
    """``H{u}(w) = (1/pi) PV int u(x) / (w - x) dx`` for real u.

    Equals ``-pv_cauchy(u, w).real / pi``; any imaginary part of the PV
    result is roundoff and only enters the error estimate.
    """
    return hilbert_point_result(u, w, cfg)[0]


def hilbert_grid(u, w_start: float, dw: float, count: int, cfg: PVConfig | None = None) -> GridSignal:
    """Hilbert transform sampled at ``w_start + k*dw``, each point computed independently."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if not dw > 0:
        raise ValueError("dw must be positive")
    F = as_function(u)
    values = []
    for k in range(count):
        w = w_start + k * dw
        try:
            values.append(hilbert_point(F, w, cfg))
        except NonConvergenceError as exc:
            raise NonConvergenceError(f"hilbert_grid failed at w={w}: {exc}", exc.result) from exc
        except EvaluationError as exc:
            raise type(exc)(f"hilbert_grid failed at w={w}: {exc}") from exc
    return GridSignal(float(w_start), float(dw), tuple(values))


def conjugate_pair_check(u, v, sample_points, cfg: PVConfig | None = None) -> ConjugatePairReport:
    """Residuals of ``v = H{u}`` and ``u = -H{v}`` at the sample points.

    Whether u + iv really extends analytically with upper decay is the
    caller's claim; it is not checked.
    """
    pts = tuple(float(p) for p in sample_points)
    if not pts:
        return ConjugatePairReport((), 0.0, 0.0, degenerate=True)
    U, V = as_function(u), as_function(v)
    rv = max(abs(V(np.array([w + 0j]))[0].real - hilbert_point(U, w, cfg)) for w in pts)
    ru = max(abs(U(np.array([w + 0j]))[0].real + hilbert_point(V, w, cfg)) for w in pts)
    return ConjugatePairReport(pts, float(rv), float(ru))


def _fourier_integrand(omega: float) -> ExprAst:
    return parse(f"exp(-i*({float(omega)!r})*x)")


def fourier_one_over_x(omega: float, mode: str = "analytic", cfg: PVConfig | None = None) -> complex:
    """``PV int e^{-i omega x} / x dx``.

    ``analytic`` gives ``-i pi sign(omega)``; ``numeric`` runs the PV engine
    on the integrand with omega substituted as a literal.  At omega = 0 the
    result is 0 (PV of an odd integrand) and a
    :class:`DegenerateFrequencyWarning` is emitted.
    """
    if mode not in ("analytic", "numeric"):
        raise ValueError(f"unknown mode {mode!r}")
    omega = float(omega)
    if omega == 0.0:
        warnings.warn("omega = 0: returning PV of 1/x, which is 0", DegenerateFrequencyWarning, stacklevel=2)
        return 0j
    if mode == "analytic":
        return complex(0.0, -np.pi * np.sign(omega))
    res = pv_cauchy(_fourier_integrand(omega), 0.0, cfg)
    if not res.converged:
        raise NonConvergenceError(f"PV Fourier integral did not converge: {'; '.join(res.notes)}", res)
    return res.value


def dirichlet_result(cfg: PVConfig | None = None) -> PVResult:
    return pv_cauchy(parse("exp(i*x)"), 0.0, cfg)


def dirichlet_integral(cfg: PVConfig | None = None) -> float:
    """``int sin(x)/x dx`` over the real line, read off ``Im PV int e^{ix}/x dx``."""
    res = dirichlet_result(cfg)
    if not res.converged:
        raise NonConvergenceError("Dirichlet integral did not converge", res)
    return res.value.imag
