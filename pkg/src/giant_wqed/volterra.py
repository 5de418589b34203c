"""Exact non-Markovian dynamics: product-trapezoid Volterra stepping and N_B(t).

Time is measured in units of 1/omega0 and rates in units of omega0, so a
run is fixed by ``gamma = Gamma0/omega0``, the cutoff ratio and the layout
phases k0|x - x'|.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .geometry import CouplingLayout, phase_matrix
from .kernels import kernel_K
from .model import WaveguideSetup
from .trajectory import AmplitudeTrajectory, NumericalError

MAX_DT = 0.02
MAX_T_END = 1e3


@dataclass(frozen=True)
class KernelTable:
    """Combined kernel sampled on the half-integer lag grid ``s = k h / 2``.

    ``values[p, 2 l]`` is K(phase_p, l h); odd columns are the cell midpoints
    used for cell integrals.
    """

    phases: np.ndarray
    step: float
    values: np.ndarray
    model: str

    @classmethod
    def build(cls, model: str, phases, n_lags: int, step: float, cutoff: float) -> KernelTable:
        phases = np.asarray(phases, dtype=float)
        lags = 0.5 * step * np.arange(2 * n_lags + 1)
        values = np.empty((phases.size, lags.size), complex)
        for p, phase in enumerate(phases):
            values[p] = kernel_K(model, phase, lags, cutoff)
        values[:, 0] = 0.0
        return cls(phases, step, values, model)

    @property
    def grid(self) -> np.ndarray:
        """Samples at integer lags, shape (P, n_lags + 1)."""
        return self.values[:, ::2]

    def cell_integrals(self) -> np.ndarray:
        """Simpson integrals of K over each lag cell, shape (P, n_lags)."""
        v = self.values
        return self.step / 6.0 * (v[:, 0:-2:2] + 4.0 * v[:, 1::2] + v[:, 2::2])


def _check_inputs(setup, layout, c0, t_end, dt):
    c0 = np.asarray(c0, dtype=complex).ravel()
    if c0.size != layout.n_atoms:
        raise ValueError("initial amplitudes must have one entry per emitter")
    if abs(np.vdot(c0, c0).real - 1.0) > 1e-9:
        raise ValueError("initial amplitudes must have unit norm")
    h = dt * setup.omega0
    if not 0 < h <= MAX_DT + 1e-15:
        raise ValueError(f"dt*omega0 must lie in (0, {MAX_DT}]")
    if not 0 < t_end * setup.omega0 <= MAX_T_END:
        raise ValueError(f"t_end*omega0 must lie in (0, {MAX_T_END:g}]")
    n_steps = int(round(t_end / dt))
    return c0, h, n_steps


def _kernel_matrices(table_grid: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Sum leg pairs: out[a, l, b] = sum_p counts[a, b, p] * table[p, l]."""
    return np.einsum("abp,pl->alb", counts, table_grid)


def solve(
    setup: WaveguideSetup,
    layout: CouplingLayout,
    c0,
    t_end: float,
    dt: float,
    with_excitation: bool = True,
) -> AmplitudeTrajectory:
    """Integrate the exact amplitude equation for the setup's coupling model.

    Product-trapezoid rule on the uniform grid.  The kernel vanishes at zero
    lag, so the end-point term of the trapezoid drops and every step is
    explicit.  Cost is O(T^2 N^2) with T = t_end/dt.
    """
    c0, h, n_steps = _check_inputs(setup, layout, c0, t_end, dt)
    n_atoms = layout.n_atoms
    pm = phase_matrix(layout, setup.k0)
    table = KernelTable.build(setup.model, pm.distinct, n_steps + 1, h, setup.cutoff_ratio)
    counts = pm.pair_counts()
    kmat = _kernel_matrices(table.grid[:, : n_steps + 1], counts)  # (N, T+1, N)
    # lag-reversed copy so each history sum is one contiguous matrix-vector product
    krev = np.ascontiguousarray(kmat[:, ::-1, :])

    pref = 2j * setup.rate_ratio / np.pi * h
    c = np.zeros((n_steps + 1, n_atoms), complex)
    c[0] = c0
    last = n_steps
    for i in range(1, n_steps + 1):
        acc = 0.5 * (kmat[:, i, :] @ c0)
        if i > 1:
            block = krev[:, last - i + 1 : last, :].reshape(n_atoms, -1)
            acc = acc + block @ c[1:i].reshape(-1)
        c[i] = c0 + pref * acc
        if not np.all(np.isfinite(c[i])):
            raise NumericalError(f"non-finite amplitude at step {i}")

    time = dt * np.arange(n_steps + 1) * setup.omega0
    traj = AmplitudeTrajectory(
        time=time,
        amplitudes=c,
        n_b=np.zeros(n_steps + 1),
        framework=setup.model,
        metadata={"gamma0_over_omega0": setup.rate_ratio, "cutoff_ratio": setup.cutoff_ratio},
    )
    if with_excitation:
        traj = traj.with_(n_b=waveguide_excitation(setup, layout, traj, table=table))
    return traj


def product_weights(antideriv: np.ndarray, cell_integrals: np.ndarray, h: float):
    """Weights for int_0^t c(tau) S(t - tau) dtau with c piecewise linear.

    ``antideriv[..., k]`` is G(k h) with G' = S and G(0) = 0, and
    ``cell_integrals[..., k]`` is the integral of G over lag cell k.  Lag
    cell k contributes U_k c(t - k h) + V_k c(t - (k + 1) h).
    """
    u_w = cell_integrals / h - antideriv[..., :-1]
    v_w = antideriv[..., 1:] - cell_integrals / h
    return u_w, v_w


def lagged_convolution(u_w: np.ndarray, v_w: np.ndarray, c: np.ndarray) -> np.ndarray:
    """out[i] = sum_{k < i} (U_k c[i - k] + V_k c[i - k - 1]) for every grid index i."""
    n = c.shape[0]
    out = fftconvolve(u_w[:n], c)[:n] - u_w[:n] * c[0]
    out[1:] += fftconvolve(v_w[: n - 1], c)[: n - 1]
    return out


def waveguide_excitation(
    setup: WaveguideSetup,
    layout: CouplingLayout,
    trajectory: AmplitudeTrajectory,
    table: KernelTable | None = None,
) -> np.ndarray:
    """Number of excitations in the waveguide, N_B(t).

    N_B is the double time integral of c*(tau) g(tau - tau') c(tau') with the
    memory kernel g = -(2 i gamma / pi) dK/ds.  The lower triangle is
    computed as R(tau) = int_0^tau g(tau - tau') c(tau') dtau' by product
    integration over piecewise-linear c.  The cell moments of g follow from K
    and its Simpson cell integrals, so the log-singular small-lag behaviour
    of the lin kernel is integrated exactly.  Then
    N_B(t) = 2 Re int_0^t c^H R dtau.
    """
    c = trajectory.amplitudes
    n_steps = c.shape[0] - 1
    h = trajectory.dt * setup.omega0
    pm = phase_matrix(layout, setup.k0)
    if table is None or table.grid.shape[1] < n_steps + 2:
        table = KernelTable.build(setup.model, pm.distinct, n_steps + 1, h, setup.cutoff_ratio)
    grid = table.grid[:, : n_steps + 2]
    cells = table.cell_integrals()[:, : n_steps + 1]
    pref = 2j * setup.rate_ratio / np.pi
    # g = -pref dK/ds, so K (scaled) is the antiderivative the weights need
    u_w, v_w = product_weights(-pref * grid, -pref * cells, h)

    counts = pm.pair_counts()
    n_atoms = c.shape[1]
    resp = np.zeros((n_steps + 1, n_atoms), complex)
    for p in range(pm.distinct.size):
        mix = counts[:, :, p]
        if not np.any(mix):
            continue
        for b in range(n_atoms):
            if not np.any(mix[:, b]):
                continue
            resp += np.outer(lagged_convolution(u_w[p], v_w[p], c[:, b]), mix[:, b])

    integrand = np.einsum("jn,jn->j", np.conj(c), resp)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * h * (integrand[1:] + integrand[:-1]))])
    n_b = 2.0 * cum.real
    # the upper triangle is the conjugate of the lower one, so the full
    # double integral is 2 Re of the lower triangle and carries no imaginary residue
    if not np.all(np.isfinite(n_b)):
        raise NumericalError("non-finite waveguide excitation number")
    return n_b


def normalize(trajectory: AmplitudeTrajectory) -> AmplitudeTrajectory:
    """Rescale c(t) by 1/sqrt(sum_n |c_n|^2 + N_B) at every time."""
    total = trajectory.total_probability()
    if np.any(total <= 0):
        raise NumericalError("non-positive total probability")
    scale = 1.0 / np.sqrt(total)
    amps = trajectory.amplitudes * scale[:, None]
    n_b = trajectory.n_b * scale**2
    return trajectory.with_(amplitudes=amps, n_b=n_b, normalized=True)
