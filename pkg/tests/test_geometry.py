import numpy as np
import pytest
from hypothesis import given, strategies as st

from giant_wqed.geometry import CouplingLayout, build_braided, build_separate, delay_matrix, phase_matrix


def test_separate_centered_two_atoms():
    d = 0.7
    lay = build_separate(2, 2, d, centered=True)
    np.testing.assert_allclose(lay.positions, [[-1.5 * d, -0.5 * d], [0.5 * d, 1.5 * d]], atol=1e-15)
    assert lay.is_mirror_symmetric()


def test_separate_small_atom_and_indexing():
    assert build_separate(1, 1, 1.0).positions.tolist() == [[0.0]]
    lay = build_separate(3, 2, 1.0)
    assert lay.positions.ravel().tolist() == [0, 1, 2, 3, 4, 5]
    assert lay.positions[1].tolist() == [2.0, 3.0]
    assert lay.min_spacing == 1.0


@pytest.mark.parametrize("args", [(0, 2, 1.0), (2, 0, 1.0), (2, 2, 0.0), (2, 2, -1.0)])
def test_separate_rejects_bad_arguments(args):
    with pytest.raises(ValueError):
        build_separate(*args)


def test_braided_pair():
    d = 0.25
    lay = build_braided(2, d)
    np.testing.assert_allclose(lay.positions, [[0, 3 * d], [2 * d, 5 * d]])
    np.testing.assert_allclose(lay.within_atom_gaps(), [[3 * d], [3 * d]])
    x = lay.positions
    assert x[0, 0] < x[1, 0] < x[0, 1] < x[1, 1]
    assert lay.min_spacing == pytest.approx(d)
    with pytest.raises(ValueError):
        build_braided(1, d)


def test_layout_validation():
    with pytest.raises(ValueError):
        CouplingLayout([[1.0, 0.0]])
    with pytest.raises(ValueError):
        CouplingLayout([[0.0, 1.0], [1.0, 2.0]])
    with pytest.raises(ValueError):
        CouplingLayout([[0.0, np.nan]])


def test_phase_matrix_entries():
    d = 0.1 * np.pi
    pm = phase_matrix(build_separate(2, 2, d), k0=1.0)
    assert pm.values[0, 0, 0, 0] == 0.0
    assert pm.values[0, 0, 1, 1] == pytest.approx(0.3 * np.pi)
    assert pm.values[0, 0, 1, 1] == pm.values[1, 1, 0, 0]
    np.testing.assert_allclose(pm.distinct, [0, d, 2 * d, 3 * d], atol=1e-14)
    counts = pm.pair_counts()
    # every leg pair is counted once
    assert counts.sum() == 16
    np.testing.assert_array_equal(pm.distinct[pm.index], pm.values)


def test_phase_matrix_scales_with_k0():
    lay = build_braided(3, 1.0)
    np.testing.assert_allclose(phase_matrix(lay, 2.5).values, 2.5 * delay_matrix(lay))
    with pytest.raises(ValueError):
        phase_matrix(lay, 0.0)


@given(
    st.integers(min_value=1, max_value=4),
    st.integers(min_value=1, max_value=4),
    st.floats(min_value=0.05, max_value=3.0),
    st.floats(min_value=-50, max_value=50),
)
def test_phases_are_symmetric_and_translation_invariant(n, m, d, shift):
    lay = build_separate(n, m, d)
    v = phase_matrix(lay).values
    np.testing.assert_array_equal(v, v.transpose(2, 3, 0, 1))
    np.testing.assert_allclose(phase_matrix(lay.shifted(shift)).values, v, atol=1e-9)
