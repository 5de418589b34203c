"""Retardation-only dynamics: a multi-delay linear DDE with Heaviside-gated history.

    dc_n/dt = -(Gamma0/2) sum_{n' m m'} exp(i phi) c_n'(t - tau) Theta(t - tau)

with tau = |x_nm - x_n'm'| / v_g and phi = k0 v_g tau.  The zero-delay
self pairs give the Markovian term -(M/2) Gamma0 c_n.  Time runs in units of
1/omega0, as in the exact solver.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import CouplingLayout, phase_matrix
from .trajectory import AmplitudeTrajectory, ConfigurationError, NumericalError

ALIGN_RTOL = 1e-9


@dataclass(frozen=True)
class DelaySet:
    """Distinct delays (in 1/omega0) and the matrices that act on each.

    ``couplings[p, n, n']`` = (number of leg pairs with delay p) * exp(i phi_p).
    Entry 0 is the zero delay of the self pairs.
    """

    delays: np.ndarray
    phases: np.ndarray
    couplings: np.ndarray

    @classmethod
    def from_layout(cls, layout: CouplingLayout, omega0: float = 1.0) -> DelaySet:
        pm = phase_matrix(layout, omega0)
        counts = np.moveaxis(pm.pair_counts(), 2, 0)
        couplings = counts * np.exp(1j * pm.distinct)[:, None, None]
        return cls(pm.distinct / omega0, pm.distinct.copy(), couplings)

    @property
    def nonzero(self) -> np.ndarray:
        return self.delays[self.delays > 0]

    def min_delay(self) -> float:
        nz = self.nonzero
        return float(nz.min()) if nz.size else np.inf


def aligned_step(layout: CouplingLayout, omega0: float, target_dt: float) -> float:
    """Largest dt <= target_dt dividing the smallest nonzero delay."""
    tau = DelaySet.from_layout(layout, omega0).min_delay()
    if not np.isfinite(tau):
        return target_dt
    return tau / np.ceil(tau / target_dt - 1e-12)


def _grid_offsets(delays: np.ndarray, dt: float, strict: bool) -> tuple[np.ndarray, bool]:
    offsets = delays / dt
    rounded = np.round(offsets)
    misaligned = np.abs(offsets - rounded) > ALIGN_RTOL * np.maximum(rounded, 1.0)
    if not np.any(misaligned):
        return rounded, True
    if strict:
        bad = delays[np.argmax(misaligned)]
        raise ConfigurationError(
            f"dt={dt:.6g} does not divide delay {bad:.12g}; use aligned_step() or strict=False"
        )
    if np.any(offsets[delays > 0] < 1.0 - 1e-12):
        raise ConfigurationError("dt must not exceed the smallest nonzero delay")
    return offsets, False


def _hermite(frac):
    f2 = frac * frac
    f3 = f2 * frac
    return 2 * f3 - 3 * f2 + 1, f3 - 2 * f2 + frac, -2 * f3 + 3 * f2, f3 - f2


def solve_retard(
    layout: CouplingLayout,
    gamma0: float,
    omega0: float,
    c0,
    t_end: float,
    dt: float,
    strict: bool = True,
) -> AmplitudeTrajectory:
    """Classical RK4 for the delayed equations with cubic Hermite history.

    Each cell [t_j, t_j+1] stores the amplitudes and one-sided derivatives at
    both ends, so gate openings (derivative jumps at delay arrivals) never
    smear across a cell when the grid is aligned with the delays.  With
    ``strict=False`` unaligned delays are accepted and gates are evaluated
    pointwise.
    """
    c0 = np.asarray(c0, dtype=complex).ravel()
    if c0.size != layout.n_atoms:
        raise ValueError("initial amplitudes must have one entry per emitter")
    if abs(np.vdot(c0, c0).real - 1.0) > 1e-9:
        raise ValueError("initial amplitudes must have unit norm")
    if not (gamma0 > 0 and omega0 > 0 and dt > 0 and t_end > 0):
        raise ValueError("gamma0, omega0, dt and t_end must be positive")

    ds = DelaySet.from_layout(layout, omega0)
    offsets, aligned = _grid_offsets(ds.delays, dt, strict)
    h = dt * omega0
    gamma = gamma0 / omega0
    n_steps = int(round(t_end / dt))
    n_atoms = layout.n_atoms
    mats = -0.5 * gamma * ds.couplings  # (P, N, N)
    if aligned:
        offsets = offsets.astype(int)

    c = np.zeros((n_steps + 1, n_atoms), complex)
    f_start = np.zeros_like(c)  # derivative at t_j as seen from cell j
    f_end = np.zeros_like(c)  # derivative at t_j as seen from cell j-1
    c[0] = c0

    zero_lag = offsets == 0
    lagged = np.flatnonzero(~zero_lag)
    lag_off = offsets[lagged]
    local = mats[zero_lag].sum(axis=0)
    # delayed matrices laid side by side so one matvec sums every delay
    wide = np.ascontiguousarray(mats[lagged].transpose(1, 0, 2).reshape(n_atoms, -1))

    def history(i, frac):
        """sum_p mats_p c(t - tau_p) over nonzero delays at t = (i + frac) h."""
        pos = (i - lag_off) + frac
        # a gate opening exactly at a node belongs to the cell that starts there
        open_ = pos > 1e-12 if frac == 1.0 else pos >= -1e-12
        vals = np.zeros((lag_off.size, n_atoms), complex)
        if np.any(open_):
            pos = np.maximum(pos[open_], 0.0)
            cell = np.minimum(np.floor(pos + 1e-12).astype(int), i)
            fr = np.clip(pos - cell, 0.0, 1.0)
            # a query landing exactly on a node never reads past the grid
            nxt = np.minimum(cell + 1, n_steps)
            a, b, d, e = (w[:, None] for w in _hermite(fr))
            vals[open_] = a * c[cell] + b * h * f_start[cell] + d * c[nxt] + e * h * f_end[nxt]
        return wide @ vals.ravel()

    def aligned_history(i):
        # distinct delays are sorted, so the open gates form a prefix
        n_open = int(np.searchsorted(lag_off, i, side="right"))
        if n_open == 0:
            return {0.0: 0.0, 0.5: 0.0, 1.0: 0.0}
        cell = i - lag_off[:n_open]
        left, right = c[cell], c[cell + 1]
        mid = 0.5 * (left + right) + 0.125 * h * (f_start[cell] - f_end[cell + 1])
        w = wide[:, : n_open * n_atoms]
        return {0.0: w @ left.ravel(), 0.5: w @ mid.ravel(), 1.0: w @ right.ravel()}

    for i in range(n_steps):
        y = c[i]
        if aligned:
            past = aligned_history(i)
        else:
            past = {frac: history(i, frac) for frac in (0.0, 0.5, 1.0)}
        k1 = local @ y + past[0.0]
        f_start[i] = k1
        k2 = local @ (y + 0.5 * h * k1) + past[0.5]
        k3 = local @ (y + 0.5 * h * k2) + past[0.5]
        k4 = local @ (y + h * k3) + past[1.0]
        c[i + 1] = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        f_end[i + 1] = local @ c[i + 1] + past[1.0]
        if not np.all(np.isfinite(c[i + 1])):
            raise NumericalError(f"non-finite amplitude at step {i + 1}")

    time = h * np.arange(n_steps + 1)
    return AmplitudeTrajectory(
        time=time,
        amplitudes=c,
        n_b=1.0 - np.sum(np.abs(c) ** 2, axis=1),
        framework="retard",
        metadata={"gamma0_over_omega0": gamma, "n_b": "closure 1 - sum|c|^2", "grid_aligned": aligned},
    )
