"""Parametric contours: circular arcs, straight segments and their chains."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import PathError

__all__ = [
    "ArcPath",
    "SegmentPath",
    "CompositePath",
    "ParametricPath",
    "point_and_derivative",
    "reverse",
    "is_closed",
    "upper_contour",
    "lower_contour",
    "circle",
    "CHAIN_TOL",
]

CHAIN_TOL = 1e-12


def _check_domain(t, lo, hi):
    a, b = min(lo, hi), max(lo, hi)
    arr = np.asarray(t, dtype=float)
    slack = 1e-12 * max(1.0, abs(a), abs(b))
    if np.any(arr < a - slack) or np.any(arr > b + slack):
        raise PathError(f"parameter outside [{a}, {b}]")


@dataclass(frozen=True)
class ArcPath:
    """``center + radius * exp(i t)`` for t running from ``theta_start`` to ``theta_end``.

    ``theta_end < theta_start`` means clockwise traversal.
    """

    center: complex
    radius: float
    theta_start: float
    theta_end: float

    def __post_init__(self):
        if not self.radius > 0:
            raise PathError("arc radius must be positive")
        if self.theta_start == self.theta_end:
            raise PathError("arc needs theta_start != theta_end")
        object.__setattr__(self, "center", complex(self.center))

    @property
    def domain(self) -> tuple[float, float]:
        return self.theta_start, self.theta_end

    @property
    def start(self) -> complex:
        return self.center + self.radius * np.exp(1j * self.theta_start)

    @property
    def end(self) -> complex:
        return self.center + self.radius * np.exp(1j * self.theta_end)

    def point_and_derivative(self, t):
        _check_domain(t, *self.domain)
        e = self.radius * np.exp(1j * np.asarray(t, dtype=float))
        return self.center + e, 1j * e

    def pieces(self):
        return [self]

    def reversed(self) -> "ArcPath":
        return ArcPath(self.center, self.radius, self.theta_end, self.theta_start)


@dataclass(frozen=True)
class SegmentPath:
    """``start + t * (end - start)`` for t in [0, 1]."""

    start: complex
    end: complex

    def __post_init__(self):
        object.__setattr__(self, "start", complex(self.start))
        object.__setattr__(self, "end", complex(self.end))
        if self.start == self.end:
            raise PathError("segment endpoints coincide")

    @property
    def domain(self) -> tuple[float, float]:
        return 0.0, 1.0

    def point_and_derivative(self, t):
        _check_domain(t, 0.0, 1.0)
        t = np.asarray(t, dtype=float)
        d = self.end - self.start
        return self.start + t * d, np.full(t.shape, d, dtype=complex) if t.ndim else complex(d)

    def pieces(self):
        return [self]

    def reversed(self) -> "SegmentPath":
        return SegmentPath(self.end, self.start)


@dataclass(frozen=True)
class CompositePath:
    """
    Ordered chain of arcs and segments.

    The composite parameter runs over [0, n]; piece k occupies [k, k+1] and
    is mapped affinely onto the piece's own parameter domain.
    """

    paths: tuple

    def __post_init__(self):
        flat = []
        for p in self.paths:
            flat.extend(p.pieces())
        if not flat:
            raise PathError("composite path needs at least one piece")
        for a, b in zip(flat, flat[1:]):
            if abs(a.end - b.start) > CHAIN_TOL:
                raise PathError(f"pieces do not chain: {a.end} != {b.start}")
        object.__setattr__(self, "paths", tuple(flat))

    @property
    def domain(self) -> tuple[float, float]:
        return 0.0, float(len(self.paths))

    @property
    def start(self) -> complex:
        return self.paths[0].start

    @property
    def end(self) -> complex:
        return self.paths[-1].end

    def pieces(self):
        return list(self.paths)

    def point_and_derivative(self, t):
        _check_domain(t, *self.domain)
        t = np.atleast_1d(np.asarray(t, dtype=float))
        k = np.clip(np.floor(t).astype(int), 0, len(self.paths) - 1)
        z = np.empty(t.shape, dtype=complex)
        dz = np.empty(t.shape, dtype=complex)
        for idx in np.unique(k):
            piece = self.paths[idx]
            lo, hi = piece.domain
            sel = k == idx
            local = lo + (t[sel] - idx) * (hi - lo)
            pz, pdz = piece.point_and_derivative(local)
            z[sel] = pz
            dz[sel] = np.asarray(pdz) * (hi - lo)
        return z, dz

    def reversed(self) -> "CompositePath":
        return CompositePath(tuple(p.reversed() for p in reversed(self.paths)))


ParametricPath = Union[ArcPath, SegmentPath, CompositePath]


def point_and_derivative(path: ParametricPath, t):
    """Return ``(gamma(t), gamma'(t))``; ``t`` may be a scalar or array."""
    z, dz = path.point_and_derivative(t)
    if np.ndim(t) == 0:
        return complex(np.ravel(z)[0]), complex(np.ravel(dz)[0])
    return z, dz


def reverse(path: ParametricPath) -> ParametricPath:
    return path.reversed()


def is_closed(path: ParametricPath) -> bool:
    return abs(path.end - path.start) <= CHAIN_TOL


def _check_radii(r, R):
    if not 0 < r < R:
        raise PathError(f"need 0 < r < R, got r={r}, R={R}")


def upper_contour(w: float, r: float, R: float) -> CompositePath:
    """Big upper semicircle, left real segment, small clockwise indentation, right segment."""
    _check_radii(r, R)
    w = float(w)
    return CompositePath((
        ArcPath(w, R, 0.0, np.pi),
        SegmentPath(w - R, w - r),
        ArcPath(w, r, np.pi, 0.0),
        SegmentPath(w + r, w + R),
    ))


def lower_contour(w: float, r: float, R: float) -> CompositePath:
    """Mirror of :func:`upper_contour`, traversed clockwise through the lower half plane."""
    _check_radii(r, R)
    w = float(w)
    return CompositePath((
        ArcPath(w, R, 0.0, -np.pi),
        SegmentPath(w - R, w - r),
        ArcPath(w, r, np.pi, 2 * np.pi),
        SegmentPath(w + r, w + R),
    ))


def circle(center: complex, radius: float) -> CompositePath:
    return CompositePath((ArcPath(center, radius, 0.0, 2 * np.pi),))
