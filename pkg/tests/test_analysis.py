import numpy as np
import pytest

from giant_wqed.analysis import (
    RateSeries,
    framework_agreement,
    instantaneous_rate,
    population_change,
)
from giant_wqed.trajectory import AmplitudeTrajectory


def _traj(amps, t, gamma=1e-3, framework="retard"):
    amps = np.asarray(amps, complex)
    if amps.ndim == 1:
        amps = amps[:, None]
    return AmplitudeTrajectory(
        t, amps, 1 - np.sum(np.abs(amps) ** 2, axis=1), framework, metadata={"gamma0_over_omega0": gamma}
    )


def test_exponential_gives_constant_rate():
    t = np.linspace(0, 100, 5001)
    gamma = 1e-3
    traj = _traj(np.exp(-1.5 * gamma * t), t, gamma)
    rate = instantaneous_rate(traj)
    assert np.allclose(rate.rates, 3.0, atol=1e-8)
    assert rate.scope == "total"
    assert rate.plateau() == pytest.approx(3.0)


def test_per_atom_rates_combine_into_total():
    t = np.linspace(0, 10, 2001)
    a = np.exp(-0.01 * t) * np.sqrt(0.7)
    b = np.exp(-0.03 * t) * np.sqrt(0.3)
    traj = _traj(np.stack([a, b], axis=1), t, 0.01)
    r1 = instantaneous_rate(traj, 0).rates
    r2 = instantaneous_rate(traj, 1).rates
    total = instantaneous_rate(traj).rates
    pops = traj.populations()
    weighted = (pops[:, 0] * r1 + pops[:, 1] * r2) / pops.sum(axis=1)
    assert np.allclose(total, weighted, atol=1e-6)
    assert np.allclose(r1, 2.0, atol=1e-8)
    assert np.allclose(r2, 6.0, atol=1e-8)


def test_smoothing_window_preserves_clean_rates():
    t = np.linspace(0, 50, 2001)
    traj = _traj(np.exp(-0.002 * t), t, 1e-3)
    rate = instantaneous_rate(traj, smooth_window=21)
    assert np.allclose(rate.rates, 4.0, atol=1e-6)


def test_low_population_is_masked(tmp_path):
    t = np.linspace(0, 10, 101)
    amps = np.where(t < 5, np.exp(-0.1 * t), 0.0)
    rate = instantaneous_rate(_traj(amps, t, 0.1))
    assert rate.masked[t > 5.2].all()
    assert not rate.masked[t < 4.8].any()
    rate.to_csv(tmp_path / "r.csv")
    lines = (tmp_path / "r.csv").read_text().splitlines()
    assert lines[0] == "t*omega0,rate_over_gamma0,masked"
    assert lines[-1].endswith(",,1")


def test_sign_changes_and_peak():
    t = np.linspace(0, 10, 1001)
    series = RateSeries(t, np.sin(t), "total", "const")
    assert series.sign_changes() == 3
    assert series.sign_changes(t_max=5.0) == 1
    tp, vp = series.peak()
    assert tp == pytest.approx(np.pi / 2, abs=0.01)
    assert vp == pytest.approx(1.0, abs=1e-4)


def test_rate_ratio_required():
    t = np.linspace(0, 1, 11)
    traj = AmplitudeTrajectory(t, np.ones((11, 1), complex), np.zeros(11), "const")
    with pytest.raises(ValueError):
        instantaneous_rate(traj)
    assert np.allclose(instantaneous_rate(traj, rate_ratio=0.1).rates, 0.0)
    with pytest.raises(ValueError):
        instantaneous_rate(traj, 3, rate_ratio=0.1)


def test_population_change():
    t = np.linspace(0, 10, 11)
    traj = _traj(np.stack([np.full(11, 0.6), 0.8 * np.exp(-0.05 * t)], axis=1), t, 0.1)
    change = population_change(traj, 1)
    assert change[0] == 0
    assert change[-1] == pytest.approx((0.64 * np.exp(-1.0) - 0.64) / 0.1)
    assert np.allclose(population_change(traj, 0), 0)


def test_framework_agreement():
    t = np.linspace(0, 10, 101)
    a = RateSeries(t, np.ones(101), "total", "const")
    b = RateSeries(t, np.where(t < 3, 5.0, 1.25), "total", "retard")
    assert framework_agreement(a, b, 3.0) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        framework_agreement(a, RateSeries(t[:50], np.ones(50), "total", "retard"), 1.0)
    with pytest.raises(ValueError):
        framework_agreement(a, b, 20.0)
