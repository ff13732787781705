"""Adaptive Gauss-Legendre quadrature for complex line integrals."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .expr import as_function

__all__ = [
    "QuadratureConfig",
    "IntegralResult",
    "integrate_line",
    "integrate_real_interval",
    "integrate_pieces",
]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureConfig:
    nodes_per_panel: int = 16
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000

    def __post_init__(self):
        if self.nodes_per_panel < 2:
            raise ValueError("nodes_per_panel must be >= 2")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")

    def tolerance_for(self, value: complex) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    error_estimate: float
    panels_used: int
    converged: bool


@lru_cache(maxsize=None)
def _rule(n: int):
    # Rule on [0, 1]
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1) / 2, w / 2


def _gauss(g, a: float, b: float, n: int) -> tuple[complex, float]:
    """One panel; returns (value, roundoff scale)."""
    x, w = _rule(n)
    h = b - a
    vals = np.asarray(g(a + h * x), dtype=complex)
    terms = w * vals
    return complex(h * terms.sum()), abs(h) * float(np.abs(terms).sum())


class _Panel:
    __slots__ = ("g", "a", "b", "halves", "value", "err", "key")

    def __init__(self, g, a, b, whole, n, key):
        m = 0.5 * (a + b)
        left, s1 = _gauss(g, a, m, n)
        right, s2 = _gauss(g, m, b, n)
        self.g, self.a, self.b = g, a, b
        self.halves = (left, right)
        self.value = left + right
        self.err = abs(whole - self.value) + 50 * _EPS * (s1 + s2)
        self.key = key

    def __lt__(self, other):
        # max-heap on error, insertion order breaks ties
        return (-self.err, self.key) < (-other.err, other.key)


def _fsum_complex(values) -> complex:
    values = list(values)
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def integrate_pieces(pieces, cfg: QuadratureConfig | None = None) -> IntegralResult:
    """Globally adaptive integration of ``sum_k int_{a_k}^{b_k} g_k(t) dt``.

    ``pieces`` is a sequence of ``(g, a, b)`` with ``g`` vectorized.  The
    panel with the largest error is bisected until the summed error meets
    ``cfg``'s tolerance or the subdivision budget runs out.  Each panel's
    error is the gap between its single-rule value and the sum of its two
    halves, plus a roundoff floor.
    """
    cfg = cfg or QuadratureConfig()
    n = cfg.nodes_per_panel
    counter = 0
    heap: list[_Panel] = []
    for g, a, b in pieces:
        a, b = float(a), float(b)
        if a == b:
            continue
        whole, _ = _gauss(g, a, b, n)
        heapq.heappush(heap, _Panel(g, a, b, whole, n, counter))
        counter += 1
    if not heap:
        return IntegralResult(0j, 0.0, 0, True)

    total_err = sum(p.err for p in heap)
    total_val = _fsum_complex(p.value for p in heap)
    splits = 0
    converged = total_err <= cfg.tolerance_for(total_val)
    while not converged and splits < cfg.max_subdivisions:
        worst = heapq.heappop(heap)
        m = 0.5 * (worst.a + worst.b)
        if not (min(worst.a, worst.b) < m < max(worst.a, worst.b)):
            heapq.heappush(heap, worst)
            break
        # halves of the parent become the "whole" estimates of the children
        lh, rh = worst.halves
        kids = (
            _Panel(worst.g, worst.a, m, lh, n, counter),
            _Panel(worst.g, m, worst.b, rh, n, counter + 1),
        )
        counter += 2
        for k in kids:
            heapq.heappush(heap, k)
        total_err += kids[0].err + kids[1].err - worst.err
        total_val += kids[0].value + kids[1].value - worst.value
        splits += 1
        converged = total_err <= cfg.tolerance_for(total_val)

    # recompute without drift before reporting
    value = _fsum_complex(p.value for p in sorted(heap, key=lambda p: p.key))
    err = math.fsum(p.err for p in heap)
    return IntegralResult(value, err, len(heap), err <= cfg.tolerance_for(value))


def _pullback(F, piece):
    def g(t):
        z, dz = piece.point_and_derivative(t)
        return F(z) * dz
    return g


def integrate_line(f, path, cfg: QuadratureConfig | None = None) -> IntegralResult:
    """Integrate ``f(z) dz`` along ``path`` by pulling back to the parameter.

    ``f`` may be an :class:`~pvkit.expr.ExprAst`, expression text, or a
    vectorized callable.  Evaluation errors (e.g. a pole on the path)
    propagate; an exhausted budget returns ``converged=False``.
    """
    F = as_function(f)
    pieces = [(_pullback(F, p), *p.domain) for p in path.pieces()]
    return integrate_pieces(pieces, cfg)


def integrate_real_interval(f, a: float, b: float, cfg: QuadratureConfig | None = None) -> IntegralResult:
    """Integrate ``f(x) dx`` over the real interval from ``a`` to ``b``."""
    F = as_function(f)
    return integrate_pieces([(lambda x: F(np.asarray(x, dtype=complex)), a, b)], cfg)
