import warnings

import numpy as np
import pytest
from scipy.integrate import quad

from giant_wqed.geometry import build_separate
from giant_wqed.model import (
    WaveguideSetup,
    dirichlet_factor,
    jc_coupling,
    markovian_rate,
    plane_wave_amplitudes,
    static_integral,
    zeno_time_array,
    zeno_time_single,
)


def test_setup_validation_and_warnings():
    with pytest.raises(ValueError):
        WaveguideSetup("quadratic")
    with pytest.raises(ValueError):
        WaveguideSetup(cutoff_ratio=1.0)
    with pytest.raises(ValueError):
        WaveguideSetup(omega0=0.0)
    with pytest.warns(UserWarning):
        WaveguideSetup("lin", gamma0=1e-2, cutoff_ratio=1e4)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        WaveguideSetup("const", gamma0=1e-4)


@pytest.mark.filterwarnings("ignore:weak-coupling")
def test_jc_coupling_values():
    setup = WaveguideSetup("const", gamma0=2.0, omega0=1.0, cutoff_ratio=10.0)
    # Gamma0 v_g / 2 = 1
    assert jc_coupling(setup, 1.0) == pytest.approx(1.0)
    assert jc_coupling(setup, 3.0) == pytest.approx(0.5)
    lin = setup.with_(model="lin")
    assert jc_coupling(lin, 0.0) == 0.0
    with pytest.raises(ValueError):
        jc_coupling(setup, 11.0)


def test_markovian_rate():
    assert markovian_rate(1.0, 1, 0.37) == pytest.approx(1.0)
    assert markovian_rate(1.0, 2, 0.1 * np.pi) == pytest.approx(4 * np.cos(0.05 * np.pi) ** 2)
    assert markovian_rate(1.0, 2, 0.1 * np.pi) == pytest.approx(3.90211, abs=1e-5)
    assert markovian_rate(1.0, 2, np.pi) == pytest.approx(0.0, abs=1e-15)
    assert markovian_rate(1.0, 3, 2 * np.pi) == pytest.approx(9.0)
    assert dirichlet_factor(4, 0.0) == pytest.approx(16.0)


def _quad_static(model, phase, cutoff):
    w = (lambda z: 1 / (1 + z) ** 2) if model == "const" else (lambda z: z / (1 + z) ** 2)
    pts = np.linspace(0, cutoff, 200)
    return sum(quad(lambda z: w(z) * np.cos(phase * z), a, b, limit=200)[0] for a, b in zip(pts[:-1], pts[1:]))


@pytest.mark.parametrize("model", ["const", "lin"])
@pytest.mark.parametrize("phase", [0.0, 0.3, 2.0])
def test_static_integral_against_quadrature(model, phase):
    assert static_integral(model, phase, 50.0) == pytest.approx(_quad_static(model, phase, 50.0), rel=1e-9)


def test_zeno_time_single_values():
    const = WaveguideSetup("const", 1e-4, 1.0, 1e4)
    # mpmath quadrature of the k-integral
    assert zeno_time_single(const, 2, 0.1 * np.pi) == pytest.approx(68.319438060198, rel=1e-12)
    lin = const.with_(model="lin")
    assert zeno_time_single(lin, 2, 0.1 * np.pi) == pytest.approx(29.205, rel=2e-4)
    assert zeno_time_single(lin, 2, 0.1 * np.pi, exact=True) == pytest.approx(30.4112801178856, rel=1e-12)
    # M = 1: 2 Gamma0 omega0 / pi times int_0^L (1+z)^-2 dz = 1 - 1/(L+1)
    small = zeno_time_single(const, 1)
    assert small ** -2 == pytest.approx(2e-4 / np.pi * (1 - 1 / (1e4 + 1)), rel=1e-12)


def test_lin_zeno_rate_grows_with_cutoff_const_converges():
    d = 0.1 * np.pi
    inv = lambda model, cut: zeno_time_single(WaveguideSetup(model, 1e-4, 1.0, cut), 2, d, exact=True) ** -2
    assert inv("lin", 1e6) > 1.4 * inv("lin", 1e4)
    assert inv("const", 1e6) == pytest.approx(inv("const", 1e4), rel=1e-3)


def test_zeno_time_array_against_quadrature():
    setup = WaveguideSetup("const", 1e-4, 1.0, 50.0)
    d = 0.1 * np.pi
    lay = build_separate(2, 2, d)
    c = plane_wave_amplitudes(lay, 1.0)
    x = lay.positions
    total = 0.0
    for n in range(2):
        for n2 in range(2):
            for m in range(2):
                for m2 in range(2):
                    phase = abs(x[n, m] - x[n2, m2])
                    total += (np.conj(c[n]) * c[n2]).real * _quad_static("const", phase, 50.0)
    expected = (2e-4 / np.pi * total) ** -0.5
    assert zeno_time_array(setup, lay, 1.0) == pytest.approx(expected, rel=1e-6)


def test_zeno_time_array_reduces_to_single_atom():
    setup = WaveguideSetup("const", 1e-4, 1.0, 1e4)
    lay = build_separate(1, 3, 0.2)
    assert zeno_time_array(setup, lay, 1.0) == pytest.approx(zeno_time_single(setup, 3, 0.2), rel=1e-12)


def test_dirichlet_bounds():
    for q in np.linspace(0.01, 7, 50):
        assert 0 <= dirichlet_factor(5, q) <= 25 + 1e-9
