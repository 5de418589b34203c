import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from giant_wqed.geometry import CouplingLayout, build_separate
from giant_wqed.model import WaveguideSetup
from giant_wqed.states import (
    AmplitudeVector,
    custom_state,
    effective_hamiltonian,
    excited_single,
    subradiant_state,
    timed_dicke,
)

SETUP = WaveguideSetup("const", 1e-4, 1.0, 1e4)


def test_timed_dicke_single_small_atom():
    c = timed_dicke(CouplingLayout([[0.3]]), SETUP).amplitudes
    assert abs(c[0]) == pytest.approx(1.0)


def test_timed_dicke_two_separate_atoms():
    d = 0.1 * np.pi
    c = timed_dicke(build_separate(2, 2, d), SETUP, +1).amplitudes
    np.testing.assert_allclose(np.abs(c), [2 ** -0.5] * 2, atol=1e-12)
    assert c[1] / c[0] == pytest.approx(np.exp(2j * d))
    assert np.linalg.norm(c) == pytest.approx(1.0, abs=1e-12)


def test_timed_dicke_direction_flip_conjugates_on_symmetric_layout():
    lay = build_separate(3, 2, 0.3, centered=True)
    plus = timed_dicke(lay, SETUP, +1).amplitudes
    minus = timed_dicke(lay, SETUP, -1).amplitudes
    np.testing.assert_allclose(minus, np.conj(plus), atol=1e-14)
    with pytest.raises(ValueError):
        timed_dicke(lay, SETUP, 0)


def test_timed_dicke_dark_spacing_is_an_error():
    with pytest.raises(ValueError):
        timed_dicke(build_separate(2, 2, np.pi), SETUP)


def test_effective_hamiltonian_entries():
    h = effective_hamiltonian(CouplingLayout([[0.0]]), SETUP)
    assert h[0, 0] == pytest.approx(1.0 - 1e-4j)
    h = effective_hamiltonian(CouplingLayout([[0.0], [np.pi]]), SETUP)
    assert h[0, 1] == pytest.approx(1e-4j)
    lay = build_separate(3, 2, 0.37)
    h = effective_hamiltonian(lay, SETUP)
    np.testing.assert_allclose(h, h.T)


def test_subradiant_two_small_atoms():
    # eigenvalues omega0 - i Gamma0 (1 +/- e^{i pi}): the antisymmetric state is dark
    h = effective_hamiltonian(CouplingLayout([[0.0], [np.pi]]), SETUP)
    v = subradiant_state(h).amplitudes
    np.testing.assert_allclose(np.abs(v), [2 ** -0.5] * 2, atol=1e-12)
    lam = np.vdot(v, h @ v)
    assert -lam.imag == pytest.approx(0.0, abs=1e-15)


def test_subradiant_residual_and_ordering():
    h = effective_hamiltonian(build_separate(4, 2, 0.1 * np.pi), SETUP)
    v = subradiant_state(h).amplitudes
    evals = np.linalg.eigvals(h)
    lam = np.vdot(v, h @ v) / np.vdot(v, v)
    assert np.linalg.norm(h @ v - lam * v) <= 1e-10 * np.linalg.norm(h)
    assert -lam.imag <= np.min(-evals.imag) + 1e-15


def test_subradiant_size_limit():
    with pytest.raises(ValueError):
        subradiant_state(np.eye(65))
    assert subradiant_state(np.array([[1.0 - 1j]])).amplitudes[0] == pytest.approx(1.0)


def test_amplitude_vector_norm_invariant():
    with pytest.raises(ValueError):
        AmplitudeVector(np.array([1.0, 1.0]))
    assert np.linalg.norm(custom_state([3, 4j]).amplitudes) == pytest.approx(1.0)
    assert excited_single(build_separate(3, 1, 1.0), 2).amplitudes.tolist() == [0, 0, 1]


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=-20, max_value=20), st.floats(min_value=0.05, max_value=2.0))
def test_spectrum_is_translation_invariant(shift, d):
    lay = build_separate(3, 2, d)
    a = np.sort_complex(np.linalg.eigvals(effective_hamiltonian(lay, SETUP)))
    b = np.sort_complex(np.linalg.eigvals(effective_hamiltonian(lay.shifted(shift), SETUP)))
    np.testing.assert_allclose(a, b, atol=1e-12)
