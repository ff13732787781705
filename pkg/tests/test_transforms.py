import json

import numpy as np
import pytest

from pvkit.errors import NonConvergenceError
from pvkit.pv import PVConfig, pv_cauchy
from pvkit.transforms import (
    ConjugatePairReport,
    DegenerateFrequencyWarning,
    GridSignal,
    conjugate_pair_check,
    dirichlet_integral,
    fourier_one_over_x,
    hilbert_grid,
    hilbert_point,
)


def test_hilbert_cos_is_sin():
    assert abs(hilbert_point("cos(x)", np.pi / 6) - 0.5) < 1e-6


def test_hilbert_sin_is_minus_cos():
    assert abs(hilbert_point("sin(x)", 0) + 1) < 1e-6


def test_hilbert_parity_zero():
    assert abs(hilbert_point("cos(x - 3)", 3)) < 1e-10


def test_hilbert_rejects_complex_input():
    with pytest.raises(ValueError):
        hilbert_point("exp(i*x)", 0)


def test_hilbert_rational_pair():
    # 1/(1+x^2) and x/(1+x^2) are the boundary values of i/(z+i)
    for w in [-1.0, 0.0, 0.5, 3.0]:
        assert abs(hilbert_point("1/(1+x^2)", w) - w / (1 + w**2)) < 1e-7


def test_grid_over_period():
    g = hilbert_grid("cos(x)", 0, 2 * np.pi / 8, 9)
    assert len(g.values) == 9
    assert np.max(np.abs(np.array(g.values) - np.sin(g.x))) < 1e-5
    g = hilbert_grid("sin(x)", 0, 2 * np.pi / 8, 9)
    assert np.max(np.abs(np.array(g.values) + np.cos(g.x))) < 1e-5


def test_grid_of_one_is_point():
    assert hilbert_grid("cos(x)", 0.3, 1.0, 1).values[0] == hilbert_point("cos(x)", 0.3)


def test_grid_validation():
    with pytest.raises(ValueError):
        hilbert_grid("cos(x)", 0, 0.1, 0)
    with pytest.raises(ValueError):
        hilbert_grid("cos(x)", 0, -0.1, 3)


def test_grid_failure_names_the_point():
    with pytest.raises(NonConvergenceError, match="w="):
        hilbert_grid("x", 0, 1, 2)


def test_grid_signal_serialization():
    g = GridSignal(0.5, 0.25, (1.0, -2.0, 3.5))
    assert GridSignal.from_json(g.to_json()) == g
    assert json.loads(g.to_json()) == {"x_start": 0.5, "dx": 0.25, "values": [1.0, -2.0, 3.5]}
    lines = g.to_csv().splitlines()
    assert lines[0] == "w,value" and lines[2] == "0.75,-2"
    with pytest.raises(ValueError):
        GridSignal(0, 0, (1.0,))
    with pytest.raises(ValueError):
        GridSignal(0, 1, ())


def test_conjugate_pair():
    rep = conjugate_pair_check("cos(x)", "sin(x)", [0, 1, 2.5])
    assert rep.residual_v < 1e-5 and rep.residual_u < 1e-5


def test_wrong_pair_detected():
    rep = conjugate_pair_check("cos(x)", "cos(x)", [0, 1, 2.5])
    assert rep.residual_v >= 0.4


def test_empty_pair_check_is_degenerate():
    assert conjugate_pair_check("cos(x)", "sin(x)", []) == ConjugatePairReport((), 0.0, 0.0, True)


def test_antisymmetry_with_conjugate_pair():
    rep = conjugate_pair_check("cos(x)", "sin(x)", [0, 0.7, 2, 4.5])
    assert rep.residual_v < 1e-5 and rep.residual_u < 1e-5


def test_hilbert_linearity():
    w = 0.9
    combo = hilbert_point("2.5*cos(x) + 1/(1+x^2)", w)
    parts = 2.5 * hilbert_point("cos(x)", w) + hilbert_point("1/(1+x^2)", w)
    assert abs(combo - parts) < 1e-7


def test_fourier_analytic():
    assert fourier_one_over_x(1) == -1j * np.pi
    assert fourier_one_over_x(-2) == 1j * np.pi


@pytest.mark.parametrize("omega", [1, 3, -2, 0.5])
def test_fourier_numeric_matches_analytic(omega):
    assert abs(fourier_one_over_x(omega, "numeric") - fourier_one_over_x(omega)) < 1e-5


@pytest.mark.parametrize("omega", [0.1, 1, 7.5])
def test_fourier_sign_split_is_odd(omega):
    a, b = fourier_one_over_x(omega), fourier_one_over_x(-omega)
    assert a == -b and a.real == 0


def test_fourier_zero_frequency_flagged():
    with pytest.warns(DegenerateFrequencyWarning):
        assert fourier_one_over_x(0) == 0


def test_fourier_bad_mode():
    with pytest.raises(ValueError):
        fourier_one_over_x(1, "fft")


def test_dirichlet():
    assert abs(dirichlet_integral() - np.pi) < 1e-6
    assert abs(pv_cauchy("exp(i*x)", 0).value.real) < 1e-6


def test_dirichlet_with_halved_truncation():
    assert abs(dirichlet_integral(PVConfig(truncation_R=25)) - np.pi) < 1e-5


def test_consistency_chain():
    a = pv_cauchy("exp(i*x)", 0).value.imag
    b = dirichlet_integral()
    c = -np.pi * hilbert_point("sin(x)", 0)  # PV int sin(x)/x dx = -pi H{sin}(0)
    assert max(abs(a - np.pi), abs(b - np.pi), abs(c - np.pi)) < 1e-6
