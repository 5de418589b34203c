"""Space-time intensity of the emitted field for the retarded and const pictures."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .geometry import CouplingLayout
from .kernels import field_primitive
from .model import WaveguideSetup
from .trajectory import AmplitudeTrajectory, ConfigurationError
from .volterra import lagged_convolution, product_weights

GRID_TOL = 1e-9


@dataclass(frozen=True)
class FieldIntensityMap:
    """``values[j, i]`` = I(x_i, t_j), max-normalised.

    Positions are in units of 1/k0 and times in units of 1/omega0.
    ``spacing`` (the layout's leg spacing d) is kept so outputs can also
    report x/d.
    """

    x_grid: np.ndarray
    t_grid: np.ndarray
    values: np.ndarray
    framework: str
    spacing: float = 1.0
    metadata: dict = field(default_factory=dict)

    def normalized(self) -> FieldIntensityMap:
        peak = float(np.max(self.values)) if self.values.size else 0.0
        if peak == 0.0:
            return self
        return replace(self, values=self.values / peak)

    def mirrored(self, center: float = 0.0) -> FieldIntensityMap:
        """The map reflected about x = center; needs a grid symmetric about it."""
        if not np.allclose(self.x_grid[::-1], 2 * center - self.x_grid, atol=1e-12):
            raise ValueError("x grid is not symmetric about the mirror point")
        return replace(self, values=self.values[:, ::-1])

    def to_csv(self, path) -> None:
        """Long form: x*k0, x/d, t*omega0, I."""
        with Path(path).open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x*k0", "x/d", "t*omega0", "I"])
            for j, t in enumerate(self.t_grid):
                for i, x in enumerate(self.x_grid):
                    writer.writerow(
                        [repr(float(x)), repr(float(x / self.spacing)), repr(float(t)), repr(float(self.values[j, i]))]
                    )

    def to_gnuplot_matrix(self, path) -> None:
        """gnuplot ``nonuniform matrix`` text: first row "n x_1 ... x_n" (x/d),
        then one row "t_j I(x_1, t_j) ... I(x_n, t_j)" per time."""
        with Path(path).open("w") as fh:
            fh.write(" ".join([str(self.x_grid.size)] + [repr(float(x / self.spacing)) for x in self.x_grid]) + "\n")
            for j, t in enumerate(self.t_grid):
                fh.write(" ".join([repr(float(t))] + [repr(float(v)) for v in self.values[j]]) + "\n")


def default_x_grid(layout: CouplingLayout, points_per_spacing: int = 4, margin: float = 2.0) -> np.ndarray:
    """Uniform grid covering the array plus ``margin`` spacings on each side."""
    d = layout.min_spacing if np.isfinite(layout.min_spacing) else 1.0
    lo = layout.positions.min() - margin * d
    hi = layout.positions.max() + margin * d
    n = int(round((hi - lo) / d * points_per_spacing)) + 1
    return np.linspace(lo, hi, n)


def default_t_grid(trajectory: AmplitudeTrajectory, decimate: int = 10) -> np.ndarray:
    return trajectory.time[::decimate].copy()


def _spacing(layout: CouplingLayout) -> float:
    return float(layout.min_spacing) if np.isfinite(layout.min_spacing) else 1.0


def intensity_retard(
    trajectory: AmplitudeTrajectory,
    layout: CouplingLayout,
    x_grid,
    t_grid,
    omega0: float = 1.0,
) -> FieldIntensityMap:
    """Field of the retarded picture: every leg radiates c_n at the retarded time.

    I(x, t) ~ |sum_{n m} c_n(t - |x - x_nm|) exp(i omega0 |x - x_nm|)|^2 over
    legs whose light cone 0 < |x - x_nm| < t contains (x, t).  Off-grid
    amplitudes come from a cubic spline through the trajectory.
    """
    if trajectory.framework != "retard":
        raise ValueError("intensity_retard needs a retard trajectory")
    x_grid = np.asarray(x_grid, float)
    t_grid = np.asarray(t_grid, float)
    if t_grid.max() > trajectory.time[-1] * (1 + GRID_TOL) + GRID_TOL:
        raise ConfigurationError("trajectory does not cover the requested times")
    spline = CubicSpline(trajectory.time, trajectory.amplitudes, axis=0)

    legs = layout.positions.ravel()
    owner = np.repeat(np.arange(layout.n_atoms), layout.n_legs)
    # phase distance k0 |x - x_nm| doubles as the travel time in units of 1/omega0
    dist = omega0 * np.abs(x_grid[:, None] - legs[None, :])
    amp = np.zeros((t_grid.size, x_grid.size), complex)
    for j, t in enumerate(t_grid):
        ret = t - dist
        inside = (dist > 0) & (ret >= 0)
        if not np.any(inside):
            continue
        vals = spline(np.where(inside, ret, 0.0).ravel()).reshape(dist.shape + (layout.n_atoms,))
        picked = np.take_along_axis(vals, np.broadcast_to(owner[None, :, None], dist.shape + (1,)), axis=2)[..., 0]
        amp[j] = np.sum(np.where(inside, picked * np.exp(1j * dist), 0.0), axis=1)
    values = np.abs(amp) ** 2
    return FieldIntensityMap(
        x_grid, t_grid, values, "retard", _spacing(layout), {"framework": "retard"}
    ).normalized()


def _grid_indices(trajectory: AmplitudeTrajectory, t_grid: np.ndarray) -> np.ndarray:
    idx = np.rint(t_grid / trajectory.dt).astype(int)
    if np.any(idx < 0) or np.any(idx >= trajectory.time.size):
        raise ConfigurationError("trajectory does not cover the requested times")
    if np.any(np.abs(trajectory.time[idx] - t_grid) > GRID_TOL * max(1.0, trajectory.time[-1])):
        raise ConfigurationError("const field maps need times on the trajectory grid")
    return idx


def intensity_const(
    trajectory: AmplitudeTrajectory,
    layout: CouplingLayout,
    setup: WaveguideSetup,
    x_grid,
    t_grid,
) -> FieldIntensityMap:
    """Field of the const model: I(x, t) ~ |sum_{n m} int_0^t c_n(tau) S(r_nm, t - tau) dtau|^2.

    r_nm = k0 (x - x_nm).  The tau-integral treats c as piecewise linear on
    the trajectory grid and integrates the kernel exactly through its
    closed-form antiderivative, which resolves the sharp structure of width
    1/cutoff at the light cone that plain trapezoid sampling would alias.
    """
    if trajectory.framework != "const":
        raise ValueError("intensity_const needs a const trajectory")
    x_grid = np.asarray(x_grid, float)
    t_grid = np.asarray(t_grid, float)
    idx = _grid_indices(trajectory, t_grid)
    n_used = int(idx.max()) + 1
    c = trajectory.amplitudes[:n_used]
    h = trajectory.dt * setup.omega0
    half_lags = 0.5 * h * np.arange(2 * n_used + 1)

    cache: dict[float, tuple[np.ndarray, np.ndarray]] = {}

    def weights(r: float):
        key = round(abs(r), 12)
        if key not in cache:
            g = field_primitive(key, half_lags, setup.cutoff_ratio)
            g[0] = 0.0
            cells = h / 6.0 * (g[0:-2:2] + 4.0 * g[1::2] + g[2::2])
            cache[key] = product_weights(g[::2], cells, h)
        return cache[key]

    legs = layout.positions
    amp = np.zeros((t_grid.size, x_grid.size), complex)
    for i, x in enumerate(x_grid):
        acc = np.zeros(n_used, complex)
        for n in range(layout.n_atoms):
            for m in range(layout.n_legs):
                u_w, v_w = weights(setup.k0 * (x - legs[n, m]))
                acc += lagged_convolution(u_w, v_w, c[:, n])
        amp[:, i] = acc[idx]
    values = np.abs(amp) ** 2
    return FieldIntensityMap(
        x_grid, t_grid, values, "const", _spacing(layout), {"framework": "const"}
    ).normalized()


def chirality(intensity: FieldIntensityMap, layout: CouplingLayout, time_index: int = -1) -> float:
    """Share of the exterior intensity lying right of the rightmost leg, at one time slice."""
    row = intensity.values[time_index]
    x = intensity.x_grid
    right = row[x > layout.positions.max()].sum()
    left = row[x < layout.positions.min()].sum()
    total = right + left
    if total <= 0:
        raise ValueError("no intensity outside the array at this time")
    return float(right / total)
