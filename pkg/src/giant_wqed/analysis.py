"""Observables derived from trajectories: instantaneous decay rates and population changes."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.signal import savgol_filter

from .trajectory import AmplitudeTrajectory

POPULATION_FLOOR = 1e-12


@dataclass(frozen=True)
class RateSeries:
    """Gamma_ins / Gamma0 on the trajectory grid; masked points hold NaN."""

    time: np.ndarray
    rates: np.ndarray
    scope: str
    framework: str

    @property
    def masked(self) -> np.ndarray:
        return np.isnan(self.rates)

    def peak(self) -> tuple[float, float]:
        """(time, value) of the largest unmasked rate."""
        j = int(np.nanargmax(self.rates))
        return float(self.time[j]), float(self.rates[j])

    def plateau(self, tail: float = 0.1) -> float:
        """Median rate over the last ``tail`` fraction of the window."""
        start = self.time[0] + (1.0 - tail) * (self.time[-1] - self.time[0])
        window = self.rates[self.time >= start]
        window = window[~np.isnan(window)]
        if window.size == 0:
            raise ValueError("no unmasked points in the plateau window")
        return float(np.median(window))

    def sign_changes(self, t_max: float | None = None, atol: float = 0.0) -> int:
        """Number of sign changes, ignoring masked points and |rate| <= atol."""
        r = self.rates if t_max is None else self.rates[self.time <= t_max]
        r = r[~np.isnan(r)]
        s = np.sign(r[np.abs(r) > atol])
        return int(np.count_nonzero(s[1:] != s[:-1]))

    def to_csv(self, path) -> None:
        with Path(path).open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t*omega0", "rate_over_gamma0", "masked"])
            for t, r in zip(self.time, self.rates):
                masked = bool(np.isnan(r))
                writer.writerow([repr(float(t)), "" if masked else repr(float(r)), int(masked)])


def _rate_ratio(trajectory: AmplitudeTrajectory, rate_ratio: float | None) -> float:
    if rate_ratio is None:
        rate_ratio = trajectory.metadata.get("gamma0_over_omega0")
    if rate_ratio is None or not rate_ratio > 0:
        raise ValueError("Gamma0/omega0 is needed to express rates in units of Gamma0")
    return float(rate_ratio)


def _scoped_population(trajectory: AmplitudeTrajectory, scope) -> tuple[np.ndarray, str]:
    if scope in (None, "total"):
        return trajectory.survival(), "total"
    n = int(scope)
    if not 0 <= n < trajectory.n_atoms:
        raise ValueError(f"atom index {n} out of range for {trajectory.n_atoms} emitters")
    return trajectory.populations()[:, n], f"atom_{n + 1}"


def instantaneous_rate(
    trajectory: AmplitudeTrajectory,
    scope="total",
    rate_ratio: float | None = None,
    smooth_window: int | None = None,
) -> RateSeries:
    """Gamma_ins = -d ln P_e / dt in units of Gamma0.

    ``scope`` is "total" or a zero-based atom index.  Central differences in
    the interior and second-order one-sided differences at the ends.  Points
    with P_e below the floor, and their stencil neighbours, come out masked.
    ``smooth_window`` switches to a cubic Savitzky-Golay derivative.
    """
    if trajectory.time.size < 3:
        raise ValueError("need at least three grid points")
    gamma = _rate_ratio(trajectory, rate_ratio)
    pop, label = _scoped_population(trajectory, scope)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_p = np.where(pop > POPULATION_FLOOR, np.log(np.maximum(pop, POPULATION_FLOOR)), np.nan)
    if smooth_window:
        deriv = savgol_filter(log_p, smooth_window, 3, deriv=1, delta=trajectory.dt)
    else:
        deriv = np.gradient(log_p, trajectory.time, edge_order=2)
    return RateSeries(trajectory.time.copy(), -deriv / gamma, label, trajectory.framework)


def population_change(
    trajectory: AmplitudeTrajectory, n: int, rate_ratio: float | None = None
) -> np.ndarray:
    """(|c_n(t)|^2 - |c_n(0)|^2) * omega0 / Gamma0."""
    gamma = _rate_ratio(trajectory, rate_ratio)
    pop, _ = _scoped_population(trajectory, n)
    return (pop - pop[0]) / gamma


def framework_agreement(series_a: RateSeries, series_b: RateSeries, t_star: float) -> float:
    """max_{t >= t_star} |rate_a - rate_b| over points unmasked in both series."""
    if series_a.time.shape != series_b.time.shape or not np.allclose(
        series_a.time, series_b.time, rtol=0, atol=1e-9 * max(1.0, abs(series_a.time[-1]))
    ):
        raise ValueError("rate series must share one time grid")
    keep = (series_a.time >= t_star) & ~series_a.masked & ~series_b.masked
    if not np.any(keep):
        raise ValueError("no overlapping unmasked points after t_star")
    return float(np.max(np.abs(series_a.rates[keep] - series_b.rates[keep])))
