import math

import numpy as np
import pytest

from pvkit.errors import DecayHypothesisError, PathError
from pvkit.expr import parse
from pvkit.path import SegmentPath, CompositePath, circle, lower_contour, upper_contour, ArcPath
from pvkit.pv import (
    PVConfig,
    TailStrategy,
    analytic_pv,
    classify_decay,
    folded_integrand,
    pv_cauchy,
    verify_cauchy_goursat,
)
from pvkit.quad import integrate_line

# PV int e^{-x^2}/(x - 1/2) dx = -2 sqrt(pi) Dawson(1/2); mpmath at 30 digits
GAUSS_PV_HALF = -1.50458780480513969808737083584


def test_exp_ix_at_zero():
    res = pv_cauchy("exp(i*x)", 0)
    assert abs(res.value - 1j * np.pi) < 1e-6
    assert res.converged and res.tail_strategy == "oscillatory_acceleration"


def test_exp_minus_ix_at_zero():
    assert abs(pv_cauchy("exp(-i*x)", 0).value + 1j * np.pi) < 1e-6


def test_exp_ix_at_one():
    expected = complex(-np.pi * np.sin(1), np.pi * np.cos(1))
    assert abs(pv_cauchy("exp(i*x)", 1).value - expected) < 1e-6


def test_odd_rational_matches_arctan_oracle():
    # folded integrand 2/(1+s^2); int_0^inf = 2 * (pi/2)
    res = pv_cauchy("x/(1+x^2)", 0)
    assert abs(res.value - np.pi) < 1e-8
    assert res.tail_strategy == "power_estimate"
    assert any("low confidence" in n for n in res.notes)


def test_folded_integrand_is_explicit():
    g = folded_integrand("x/(1+x^2)", 0)
    s = np.array([0.5, 2.0, 10.0])
    assert np.allclose(g(s), 2 / (1 + s**2), rtol=0, atol=1e-15)


def test_gaussian_with_exponential_bound():
    res = pv_cauchy("exp(-x^2)", 0.5, PVConfig(tail_strategy="exponential_bound", truncation_R=8))
    assert abs(res.value - GAUSS_PV_HALF) < 1e-10
    assert res.converged and res.tail_value == 0


@pytest.mark.parametrize("w", [-2, 0, 1, 5])
@pytest.mark.parametrize("src", ["exp(i*x)", "exp(-i*x)"])
def test_numeric_matches_closed_form(src, w):
    f = parse(src)
    assert abs(pv_cauchy(f, w).value - analytic_pv(f, w, classify_decay(f))) < 1e-5


def test_parity_annihilation():
    res = pv_cauchy("cos(x-3)", 3)
    assert abs(res.value) < 1e-10


@pytest.mark.parametrize("w", [-1.5, 0.7, 2.0])
def test_translation_covariance(w):
    a = pv_cauchy("exp(i*x) + 1/(1+x^2)", w)
    b = pv_cauchy(f"exp(i*(x+{w!r})) + 1/(1+(x+{w!r})^2)", 0)
    assert abs(a.value - b.value) <= a.error_estimate + b.error_estimate + 1e-9


def test_explicit_tail_strategies_agree():
    f = "exp(i*x)"
    osc = pv_cauchy(f, 0, PVConfig(tail_strategy=TailStrategy.OSCILLATORY_ACCELERATION))
    assert abs(osc.value - 1j * np.pi) < 1e-8
    # plain exponential bound is honest: it cannot certify a 1/s oscillatory tail
    exp = pv_cauchy(f, 0, PVConfig(tail_strategy="exponential_bound"))
    assert not exp.converged


def test_divergent_tail_is_not_converged():
    res = pv_cauchy("x", 0.5)
    assert not res.converged
    assert res.notes


def test_report_fields():
    rep = pv_cauchy("exp(i*x)", 0).report()
    assert list(rep) == ["value_re", "value_im", "error_estimate", "core_value", "tail_value",
                         "tail_strategy", "intervals_used", "converged"]
    assert rep["intervals_used"] == 20


def test_config_validation():
    with pytest.raises(ValueError):
        PVConfig(truncation_R=0)
    with pytest.raises(ValueError):
        PVConfig(acceleration_terms=3)
    with pytest.raises(ValueError):
        PVConfig(tail_strategy="fancy")


def test_classify_decay_examples():
    assert classify_decay("exp(i*z)").classification == "upper"
    assert classify_decay("exp(-i*z)").classification == "lower"
    assert classify_decay("z").classification == "none"


def test_classify_decay_witness_and_overflow():
    d = classify_decay("exp(i*z)", radii=(100.0, 400.0, 800.0))
    assert [w[0] for w in d.witness] == [100.0, 400.0, 800.0]
    # e^{800 sin t} overflows in the lower half: recorded, not raised
    assert math.isinf(d.witness[-1][2])
    assert d.classification == "upper"


def test_classify_decay_ambiguous_is_unknown():
    assert classify_decay("1/(z+2*i)").classification == "unknown"


def test_classify_decay_validation():
    with pytest.raises(ValueError):
        classify_decay("z", radii=(1.0, 2.0))
    with pytest.raises(ValueError):
        classify_decay("z", samples_per_arc=8)


def test_analytic_pv_examples():
    assert analytic_pv("exp(i*z)", 0, classify_decay("exp(i*z)")) == pytest.approx(1j * np.pi)
    assert analytic_pv("exp(-i*z)", 0, classify_decay("exp(-i*z)")) == pytest.approx(-1j * np.pi)
    with pytest.raises(DecayHypothesisError, match="decay hypothesis violated"):
        analytic_pv("z", 1.0, classify_decay("z"))


def test_goursat_fig2_contour():
    assert verify_cauchy_goursat("exp(i*z)/z", upper_contour(0, 0.5, 3)) < 1e-8


def test_goursat_fig3_contour():
    assert verify_cauchy_goursat("exp(-i*z)/z", lower_contour(0, 0.5, 3)) < 1e-8


def test_goursat_entire_and_pole():
    assert verify_cauchy_goursat("z^2", circle(0, 1)) < 1e-10
    assert abs(verify_cauchy_goursat("1/z", circle(0, 1)) - 2 * np.pi) < 1e-8


def test_goursat_needs_closed_contour():
    with pytest.raises(PathError):
        verify_cauchy_goursat("z", CompositePath((SegmentPath(0, 1),)))


@pytest.mark.parametrize("src, contour", [
    ("exp(i*z)/z", upper_contour(0, 0.5, 3)),
    ("exp(-i*z)/(z-1)", lower_contour(1, 0.2, 4)),
    ("sin(z)*cosh(z)", circle(0.3, 2)),
    ("z^5 - 3*z", upper_contour(-1, 0.1, 2)),
])
def test_goursat_residual_within_error_estimate(src, contour):
    res = integrate_line(src, contour)
    assert abs(res.value) <= 10 * res.error_estimate


# |pi - 2 Si(R)| for R = 2, 5, 10 (mpmath): oscillates on its way to zero
BIG_ARC_EXACT = {2: 0.0692333000155965, 5: 0.041730163700445, 10: 0.175102534847955}


@pytest.mark.parametrize("R", [2, 5, 10])
def test_upper_semicircle_contribution(R):
    mag = abs(integrate_line("exp(i*z)/z", ArcPath(0, R, 0, np.pi)).value)
    assert abs(mag - BIG_ARC_EXACT[R]) < 1e-12
    # |i int_0^pi e^{iR e^{it}} dt| <= int_0^pi e^{-R sin t} dt < pi / R
    assert mag < np.pi / R


def test_upper_semicircle_max_modulus_shrinks():
    F = lambda z: np.abs(np.exp(1j * z) / z)
    t = np.linspace(0.05, np.pi - 0.05, 200)
    peaks = [F(R * np.exp(1j * t)).max() for R in (2, 5, 10)]
    assert peaks[0] > peaks[1] > peaks[2]


def test_fig2_pieces_reconstruct_pv():
    # big arc + indentation + segments sum to zero; the segments approach the PV
    r, R = 1e-4, 200.0
    f = "exp(i*z)/z"
    c = upper_contour(0, r, R)
    big, left, small, right = (integrate_line(f, p).value for p in c.pieces())
    assert abs(big + left + small + right) < 1e-8
    assert abs(small + 1j * np.pi) < 1e-3
    assert abs((left + right) - 1j * np.pi) < 2e-2
