import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pvkit.errors import PathError
from pvkit.path import (
    ArcPath,
    CompositePath,
    SegmentPath,
    circle,
    is_closed,
    lower_contour,
    point_and_derivative,
    reverse,
    upper_contour,
)
from pvkit.quad import integrate_line


def test_unit_arc_at_zero():
    z, dz = point_and_derivative(ArcPath(0, 1, 0, np.pi), 0.0)
    assert z == 1 + 0j and dz == 1j


def test_unit_arc_at_pi():
    z, dz = point_and_derivative(ArcPath(0, 1, 0, np.pi), np.pi)
    assert abs(z - (-1)) < 1e-15 and abs(dz - (-1j)) < 1e-15


def test_segment_midpoint():
    z, dz = point_and_derivative(SegmentPath(0, 1), 0.5)
    assert z == 0.5 and dz == 1


def test_parameter_outside_domain():
    with pytest.raises(PathError):
        point_and_derivative(SegmentPath(0, 1), 1.5)
    with pytest.raises(PathError):
        point_and_derivative(ArcPath(0, 1, 0, np.pi), -0.1)


def test_invalid_geometry():
    with pytest.raises(PathError):
        ArcPath(0, 0, 0, 1)
    with pytest.raises(PathError):
        ArcPath(0, 1, 1, 1)
    with pytest.raises(PathError):
        SegmentPath(1, 1)
    with pytest.raises(PathError):
        CompositePath((SegmentPath(0, 1), SegmentPath(2, 3)))


def test_reverse_arc():
    assert reverse(ArcPath(0, 1, 0, np.pi)) == ArcPath(0, 1, np.pi, 0)


def test_reverse_is_involution():
    for p in [ArcPath(1, 2, 0.3, 2.0), SegmentPath(0, 1j), upper_contour(0, 0.5, 3)]:
        assert reverse(reverse(p)) == p


def test_reverse_negates_integral_of_one():
    rng = np.random.default_rng(7)
    arc = ArcPath(rng.normal(), 0.5 + rng.random(), rng.random(), 1 + 3 * rng.random())
    fwd = integrate_line("1", arc).value
    bwd = integrate_line("1", reverse(arc)).value
    assert abs(fwd + bwd) < 1e-14
    assert abs(fwd - (arc.end - arc.start)) < 1e-14


def test_is_closed():
    assert is_closed(upper_contour(0, 0.5, 2))
    assert not is_closed(CompositePath((SegmentPath(0, 1),)))
    assert is_closed(ArcPath(0, 1, 0, 2 * np.pi))
    assert is_closed(circle(0, 1))


def test_lower_contour_goes_through_lower_half_plane():
    c = lower_contour(0, 0.5, 3)
    z, _ = c.point_and_derivative(np.array([0.5, 2.5]))
    assert z[0].imag < 0 and z[1].imag < 0
    assert is_closed(c)


def test_composite_derivative_scaling():
    c = upper_contour(0, 0.5, 2)
    # segment piece 1 maps [1, 2] onto [0, 1]: derivative is end - start
    _, dz = c.point_and_derivative(np.array([1.5]))
    assert abs(dz[0] - 1.5) < 1e-15


@settings(max_examples=50, deadline=None)
@given(st.floats(-5, 5), st.floats(0.01, 10), st.floats(-6, 6), st.floats(0.1, 6), st.floats(0.01, 0.99))
def test_arc_points_on_circle_and_derivative(c, r, t1, span, frac):
    arc = ArcPath(c, r, t1, t1 + span)
    t = t1 + frac * span
    z, dz = point_and_derivative(arc, t)
    assert abs(abs(z - c) - r) <= 4e-15 * max(1, r + abs(c))
    h = 1e-6 * span
    fd = (point_and_derivative(arc, t + h)[0] - point_and_derivative(arc, t - h)[0]) / (2 * h)
    assert abs(dz - fd) < 1e-8 * max(1.0, r) / min(1.0, span) * 10


@settings(max_examples=50, deadline=None)
@given(st.floats(-10, 10), st.floats(1e-3, 10), st.floats(1.001, 100))
def test_fig2_and_fig3_contours_always_close(w, r, ratio):
    assert is_closed(upper_contour(w, r, r * ratio))
    assert is_closed(lower_contour(w, r, r * ratio))


def test_contour_radius_order():
    with pytest.raises(PathError):
        upper_contour(0, 2, 1)
