"""Principal-value Cauchy integrals on the real line.

``PV int f(x)/(x - w) dx`` is computed in folded form

    int_0^inf g(s) ds,   g(s) = [f(w + s) - f(w - s)] / s,

which is regular at s = 0 whenever f is smooth at w.  The core interval
(0, R] uses the open Gauss rule (s = 0 is never sampled); the tail beyond R
is handled by one of three strategies.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import DecayHypothesisError, EvaluationError, PathError
from .expr import as_function
from .path import is_closed
from .quad import IntegralResult, QuadratureConfig, integrate_line, integrate_pieces

__all__ = [
    "TailStrategy",
    "PVConfig",
    "PVResult",
    "DecayClass",
    "folded_integrand",
    "pv_cauchy",
    "choose_tail_strategy",
    "classify_decay",
    "analytic_pv",
    "verify_cauchy_goursat",
    "DEFAULT_DECAY_RADII",
]

DEFAULT_DECAY_RADII = (10.0, 20.0, 40.0, 80.0, 160.0)


class TailStrategy(str, enum.Enum):
    AUTO = "auto"
    EXPONENTIAL_BOUND = "exponential_bound"
    OSCILLATORY_ACCELERATION = "oscillatory_acceleration"
    POWER_ESTIMATE = "power_estimate"


@dataclass(frozen=True)
class PVConfig:
    truncation_R: float = 50.0
    tail_strategy: TailStrategy = TailStrategy.AUTO
    acceleration_terms: int = 20
    quad_cfg: QuadratureConfig = field(default_factory=QuadratureConfig)
    target_tol: float = 1e-8

    def __post_init__(self):
        if not self.truncation_R > 0:
            raise ValueError("truncation_R must be positive")
        if self.acceleration_terms < 4:
            raise ValueError("acceleration_terms must be >= 4")
        if not self.target_tol > 0:
            raise ValueError("target_tol must be positive")
        object.__setattr__(self, "tail_strategy", TailStrategy(self.tail_strategy))


@dataclass(frozen=True)
class PVResult(IntegralResult):
    core_value: complex = 0j
    tail_value: complex = 0j
    tail_strategy: str = ""
    intervals_used: int = 0
    notes: tuple[str, ...] = ()

    def report(self) -> dict:
        """Diagnostic record with stable key order."""
        return {
            "value_re": self.value.real,
            "value_im": self.value.imag,
            "error_estimate": self.error_estimate,
            "core_value": self.core_value,
            "tail_value": self.tail_value,
            "tail_strategy": self.tail_strategy,
            "intervals_used": self.intervals_used,
            "converged": self.converged,
        }


@dataclass(frozen=True)
class _Tail:
    value: complex
    error: float
    intervals: int
    converged: bool
    notes: tuple[str, ...] = ()


def folded_integrand(f, w: float):
    """Vectorized ``g(s) = [f(w+s) - f(w-s)] / s`` for s > 0."""
    F = as_function(f)
    w = float(w)

    def g(s):
        s = np.asarray(s, dtype=float)
        return (F(w + s + 0j) - F(w - s + 0j)) / s

    return g


# -- tail strategies ----------------------------------------------------------------

def _sample_window(g, R: float, width: float, count: int = 2048):
    s = np.linspace(R, R + width, count)
    return s, np.asarray(g(s), dtype=complex)


def _dominant(vals: np.ndarray):
    """Pick the real or imaginary part, whichever carries more magnitude."""
    return (lambda v: v.real) if np.max(np.abs(vals.real)) >= np.max(np.abs(vals.imag)) else (lambda v: v.imag)


def _crossings(s: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Interpolated sign-change positions of sampled y."""
    idx = np.nonzero((y[:-1] * y[1:] < 0))[0]
    return s[idx] - y[idx] * (s[idx + 1] - s[idx]) / (y[idx + 1] - y[idx])


def _oscillation(g, R: float):
    """Locate sign changes beyond R; returns (component, crossings) or None."""
    width = 4.0 * R
    for _ in range(4):
        s, vals = _sample_window(g, R, width)
        comp = _dominant(vals)
        y = comp(vals)
        cross = _crossings(s, y)
        if len(cross) > len(s) // 10:
            # aliasing risk: zoom in
            width /= 16.0
            continue
        return comp, cross
    return None


def _euler(partials: list[complex]) -> tuple[complex, float]:
    """Repeated averaging of partial sums (Euler transformation)."""
    row = np.asarray(partials, dtype=complex)
    prev = row
    while len(row) > 1:
        prev = row
        row = 0.5 * (row[:-1] + row[1:])
    return complex(row[0]), float(abs(prev[0] - row[0])) if len(prev) > 1 else math.inf


def _tail_oscillatory(g, R: float, cfg: PVConfig) -> _Tail:
    found = _oscillation(g, R)
    if found is None or len(found[1]) < 2:
        return _Tail(0j, math.inf, 0, False, ("no oscillation detected beyond truncation",))
    comp, cross = found
    half = float(np.mean(np.diff(cross)))

    def h(x):
        return float(comp(np.asarray(g(np.array([x])), dtype=complex))[0])

    def refine(lo, hi):
        try:
            return brentq(h, lo, hi, xtol=1e-14 * max(1.0, hi), rtol=4 * np.finfo(float).eps)
        except ValueError:
            return None

    z0 = refine(max(R, cross[0] - half / 2), cross[0] + half / 2) or float(cross[0])
    zeros = [z0]
    for _ in range(cfg.acceleration_terms):
        prev = zeros[-1]
        nxt = refine(prev + 0.5 * half, prev + 1.5 * half)
        zeros.append(nxt if nxt is not None else prev + half)

    qcfg = cfg.quad_cfg
    lead = integrate_pieces([(g, R, z0)], qcfg)
    terms = [integrate_pieces([(g, a, b)], qcfg) for a, b in zip(zeros, zeros[1:])]
    partials = np.cumsum([t.value for t in terms])
    accel, accel_err = _euler(list(partials))
    err = lead.error_estimate + sum(t.error_estimate for t in terms) + accel_err
    conv = lead.converged and all(t.converged for t in terms)
    notes = () if conv else ("between-zeros quadrature did not converge",)
    return _Tail(lead.value + accel, err, len(terms), conv, notes)


def _tail_exponential(g, R: float, cfg: PVConfig) -> _Tail:
    pts = np.array([R, 1.25 * R, 1.5 * R])
    mags = np.abs(np.asarray(g(pts), dtype=complex))
    if mags[0] == 0.0:
        return _Tail(0j, 0.0, 0, True, ("integrand vanishes at truncation",))
    tiny = np.finfo(float).tiny
    slope = (math.log(max(mags[2], tiny)) - math.log(mags[0])) / (0.5 * R)
    if slope >= 0:
        return _Tail(0j, math.inf, 0, False, ("tail is not decaying",))
    bound = float(mags[0] / -slope)
    return _Tail(0j, bound, 0, True, (f"tail bounded by {bound:.3e}, not added to value",))


def _tail_power(g, R: float, cfg: PVConfig, decades: float = 64.0) -> _Tail:
    far = decades * R
    body = integrate_pieces([(g, R * 2.0**k, R * 2.0 ** (k + 1)) for k in range(int(math.log2(decades)))], cfg.quad_cfg)
    mags = np.abs(np.asarray(g(np.array([far / 4, far / 2, far])), dtype=complex))
    notes = ["power-law tail fit, low confidence"]
    if np.any(mags == 0):
        return _Tail(body.value, body.error_estimate, 0, body.converged, tuple(notes))
    p = math.log(mags[1] / mags[2]) / math.log(2.0)
    p_prev = math.log(mags[0] / mags[1]) / math.log(2.0)
    if p <= 1.0:
        notes.append(f"fitted decay exponent {p:.3f} <= 1: tail diverges")
        return _Tail(body.value, math.inf, 0, False, tuple(notes))
    g_far = complex(np.asarray(g(np.array([far])), dtype=complex)[0])
    fit = g_far * far / (p - 1.0)
    fit_err = abs(fit) * abs(p - p_prev) / (p - 1.0)
    return _Tail(body.value + fit, body.error_estimate + fit_err, 0, body.converged, tuple(notes))


def choose_tail_strategy(g, R: float, target_tol: float) -> TailStrategy:
    """Oscillatory if sign changes appear beyond R, else exponential if its
    bound already meets the target, else power-law."""
    s, vals = _sample_window(g, R, 4.0 * R)
    peak = float(np.max(np.abs(vals)))
    if peak * 4.0 * R <= 1e-6 * target_tol:
        return TailStrategy.EXPONENTIAL_BOUND
    found = _oscillation(g, R)
    if found is not None and len(found[1]) >= 4:
        return TailStrategy.OSCILLATORY_ACCELERATION
    mags = np.abs(np.asarray(g(np.array([R, 1.5 * R])), dtype=complex))
    if mags[0] == 0 or (mags[1] < mags[0] and mags[0] * 0.5 * R / math.log(mags[0] / max(mags[1], 1e-300)) <= target_tol):
        return TailStrategy.EXPONENTIAL_BOUND
    return TailStrategy.POWER_ESTIMATE


_TAILS = {
    TailStrategy.OSCILLATORY_ACCELERATION: _tail_oscillatory,
    TailStrategy.EXPONENTIAL_BOUND: _tail_exponential,
    TailStrategy.POWER_ESTIMATE: _tail_power,
}


def _tail_at(g, R: float, cfg: PVConfig) -> tuple[TailStrategy, _Tail]:
    strategy = cfg.tail_strategy
    try:
        if strategy is TailStrategy.AUTO:
            strategy = choose_tail_strategy(g, R, cfg.target_tol)
        return strategy, _TAILS[strategy](g, R, cfg)
    except EvaluationError as exc:
        return strategy, _Tail(0j, math.inf, 0, False, (f"tail evaluation failed: {exc}",))


def pv_cauchy(f, w: float, cfg: PVConfig | None = None, max_doublings: int = 4) -> PVResult:
    """Numerical ``PV int_{-inf}^{inf} f(x) / (x - w) dx``.

    Never consults the closed form.  The folded integral is evaluated with
    truncation R and again with 2R; the gap between the two joins the
    error estimate, and R keeps doubling (``max_doublings`` times at most)
    until the estimate meets ``target_tol``.  This catches tail components
    the chosen strategy misses, e.g. a smooth non-alternating part under an
    oscillation.  Non-convergence is reported through ``converged=False``
    and ``notes``; evaluation errors propagate.
    """
    cfg = cfg or PVConfig()
    w = float(w)
    g = folded_integrand(f, w)
    R = cfg.truncation_R
    core = integrate_pieces([(g, 0.0, R)], cfg.quad_cfg)
    core_val, core_err, core_ok, panels = core.value, core.error_estimate, core.converged, core.panels_used

    strategy, tail = _tail_at(g, R, cfg)
    prev_value = core_val + tail.value
    best = None
    for _ in range(max_doublings):
        step = integrate_pieces([(g, R, 2 * R)], cfg.quad_cfg)
        core_val += step.value
        core_err += step.error_estimate
        core_ok = core_ok and step.converged
        panels += step.panels_used
        R *= 2
        strategy, tail = _tail_at(g, R, cfg)
        value = core_val + tail.value
        drift = abs(value - prev_value)
        err = core_err + tail.error + drift
        best = (value, err, strategy, tail, R)
        prev_value = value
        if core_ok and tail.converged and err <= max(cfg.target_tol, cfg.target_tol * abs(value)):
            break

    value, err, strategy, tail, R = best
    notes = list(tail.notes)
    if not core_ok:
        notes.append("core quadrature did not converge")
    ok = core_ok and tail.converged and err <= max(cfg.target_tol, cfg.target_tol * abs(value))
    if core_ok and tail.converged and not ok:
        notes.append(f"error estimate {err:.3e} exceeds target {cfg.target_tol:.1e} at truncation {R:g}")
    return PVResult(
        value=value,
        error_estimate=err,
        panels_used=panels,
        converged=ok,
        core_value=core_val,
        tail_value=tail.value,
        tail_strategy=strategy.value,
        intervals_used=tail.intervals,
        notes=tuple(notes),
    )


# -- half-plane decay ---------------------------------------------------------------

@dataclass(frozen=True)
class DecayClass:
    classification: str  # upper | lower | none | unknown
    witness: list[tuple[float, float, float]]


def _max_abs(F, z: np.ndarray) -> float:
    try:
        return float(np.max(np.abs(F(z))))
    except EvaluationError:
        pass
    worst = 0.0
    for p in z:
        try:
            worst = max(worst, float(np.max(np.abs(F(np.array([p]))))))
        except EvaluationError:
            return math.inf
    return worst


def _decays(seq: list[float]) -> bool:
    return all(b < a for a, b in zip(seq, seq[1:])) and seq[-1] < 1e-3


def _decreasing(seq: list[float]) -> bool:
    return all(b < a for a, b in zip(seq, seq[1:]))


def classify_decay(f, radii=DEFAULT_DECAY_RADII, samples_per_arc: int = 16) -> DecayClass:
    """Sample ``max |f|`` on growing upper and lower semicircles about 0.

    Angles are equally spaced with the real-axis endpoints excluded.
    ``upper`` needs strictly decreasing upper maxima ending below 1e-3 (and
    ``lower`` symmetrically); ``none`` means neither sequence decreases;
    anything else, including decay in both halves, is ``unknown``.
    """
    radii = [float(r) for r in radii]
    if len(radii) < 3 or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("need at least 3 strictly increasing radii")
    if samples_per_arc < 16:
        raise ValueError("samples_per_arc must be >= 16")
    F = as_function(f)
    k = np.arange(1, samples_per_arc + 1)
    t_up = np.pi * k / (samples_per_arc + 1)
    witness = []
    for R in radii:
        up = _max_abs(F, R * np.exp(1j * t_up))
        lo = _max_abs(F, R * np.exp(-1j * t_up))
        witness.append((R, up, lo))
    ups = [u for _, u, _ in witness]
    los = [l for _, _, l in witness]
    up_ok, lo_ok = _decays(ups), _decays(los)
    if up_ok and not lo_ok:
        cls = "upper"
    elif lo_ok and not up_ok:
        cls = "lower"
    elif not _decreasing(ups) and not _decreasing(los):
        cls = "none"
    else:
        cls = "unknown"
    return DecayClass(cls, witness)


def analytic_pv(f, w: float, decay: DecayClass) -> complex:
    """Closed form ``+i pi f(w)`` (upper decay) or ``-i pi f(w)`` (lower decay).

    Raises:
        DecayHypothesisError: classification is ``none`` or ``unknown``.
    """
    if decay.classification not in ("upper", "lower"):
        raise DecayHypothesisError(
            f"decay hypothesis violated: classification is {decay.classification!r}, "
            "the closed form needs |f| -> 0 on large semicircles in one half plane"
        )
    F = as_function(f)
    fw = complex(np.ravel(F(np.array([complex(float(w))])))[0])
    sign = 1.0 if decay.classification == "upper" else -1.0
    return sign * 1j * np.pi * fw


def verify_cauchy_goursat(f, contour, cfg: QuadratureConfig | None = None) -> float:
    """``|closed-contour integral of f dz|``; zero when f is analytic inside."""
    if not is_closed(contour):
        raise PathError("contour is not closed")
    return abs(integrate_line(f, contour, cfg).value)
