import math

import numpy as np
import pytest

from giant_wqed.dde import DelaySet, aligned_step, solve_retard
from giant_wqed.geometry import build_braided, build_separate
from giant_wqed.trajectory import ConfigurationError


def exact_two_leg(t, gamma, phi):
    """Method-of-steps series for one atom with two legs a phase phi apart."""
    out = np.zeros_like(t, dtype=complex)
    k_max = int(t.max() / phi) + 1
    for k in range(k_max + 1):
        lag = t - k * phi
        on = lag >= 0
        x = np.where(on, lag, 0.0)
        with np.errstate(divide="ignore"):
            mag = np.where(
                x > 0, np.exp(k * np.log(np.maximum(gamma * x, 1e-300)) - math.lgamma(k + 1)), float(k == 0)
            )
        out += np.where(on, (-np.exp(1j * phi)) ** k * mag * np.exp(-gamma * x), 0.0)
    return out


def test_delay_set_of_small_atom():
    lay = build_separate(1, 2, 1.5)
    ds = DelaySet.from_layout(lay)
    assert np.allclose(ds.delays, [0.0, 1.5])
    assert ds.couplings[0, 0, 0] == 2
    assert ds.couplings[1, 0, 0] == pytest.approx(2 * np.exp(1.5j))
    assert ds.min_delay() == pytest.approx(1.5)


def test_aligned_step_divides_smallest_delay():
    lay = build_separate(3, 2, 0.1 * np.pi)
    dt = aligned_step(lay, 1.0, 0.01)
    assert dt <= 0.01
    ratio = 0.1 * np.pi / dt
    assert ratio == pytest.approx(round(ratio), abs=1e-9)


def test_matches_method_of_steps_series():
    gamma, phi = 0.05, 2.0
    lay = build_separate(1, 2, phi)
    traj = solve_retard(lay, gamma, 1.0, [1.0], 20.0, 0.01)
    ref = exact_two_leg(traj.time, gamma, phi)
    assert np.max(np.abs(traj.amplitudes[:, 0] - ref)) < 1e-9


def test_single_leg_decays_exponentially():
    lay = build_separate(1, 1, 1.0)
    traj = solve_retard(lay, 0.1, 1.0, [1.0], 10.0, 0.01)
    assert np.allclose(traj.amplitudes[:, 0], np.exp(-0.05 * traj.time), atol=1e-10)


def test_population_decays_at_m_gamma_before_first_echo():
    lay = build_separate(1, 2, 3.0)
    traj = solve_retard(lay, 0.1, 1.0, [1.0], 3.0, 0.01)
    assert np.allclose(traj.populations()[:, 0], np.exp(-0.2 * traj.time), atol=1e-12)


def test_strict_rejects_misaligned_grid():
    lay = build_separate(1, 2, 1.0)
    with pytest.raises(ConfigurationError, match="does not divide"):
        solve_retard(lay, 0.1, 1.0, [1.0], 5.0, 0.03)


def test_misaligned_grid_accepted_when_not_strict():
    gamma, phi = 0.05, 1.0
    lay = build_separate(1, 2, phi)
    traj = solve_retard(lay, gamma, 1.0, [1.0], 10.0, 0.03, strict=False)
    assert traj.metadata["grid_aligned"] is False
    ref = exact_two_leg(traj.time, gamma, phi)
    err = np.max(np.abs(traj.amplitudes[:, 0] - ref))
    assert err < 1e-3
    finer = solve_retard(lay, gamma, 1.0, [1.0], 10.0, 0.003, strict=False)
    err_fine = np.max(np.abs(finer.amplitudes[:, 0] - exact_two_leg(finer.time, gamma, phi)))
    assert err_fine < 0.2 * err


def test_step_halving():
    lay = build_braided(2, 0.25 * np.pi)
    dt = aligned_step(lay, 1.0, 0.02)
    coarse = solve_retard(lay, 0.02, 1.0, [1.0, 0.0], 30.0, dt)
    fine = solve_retard(lay, 0.02, 1.0, [1.0, 0.0], 30.0, dt / 2)
    assert np.max(np.abs(coarse.amplitudes - fine.amplitudes[::2])) < 1e-6


def test_derivative_jumps_only_at_delay_arrivals():
    lay = build_separate(1, 2, 2.0)
    traj = solve_retard(lay, 0.1, 1.0, [1.0], 6.0, 0.01)
    slope = np.diff(traj.amplitudes[:, 0]) / traj.dt
    kink = np.abs(np.diff(slope))
    big = traj.time[1:-1][kink > 1e-3]
    # the echo switches on at t = 2 and t = 4
    assert big.size > 0
    assert np.all(np.min(np.abs(big[:, None] - np.array([2.0, 4.0])[None, :]), axis=1) < 0.011)


def test_closure_and_validation():
    lay = build_separate(2, 2, 0.5)
    traj = solve_retard(lay, 0.1, 1.0, [1.0, 0.0], 4.0, 0.01)
    assert np.allclose(traj.total_probability(), 1.0)
    with pytest.raises(ValueError):
        solve_retard(lay, 0.1, 1.0, [1.0], 4.0, 0.01)
    with pytest.raises(ValueError):
        solve_retard(lay, 0.1, 1.0, [1.0, 1.0], 4.0, 0.01)
    with pytest.raises(ValueError):
        solve_retard(lay, -0.1, 1.0, [1.0, 0.0], 4.0, 0.01)
