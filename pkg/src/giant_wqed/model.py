"""Waveguide setup, Jaynes-Cummings coupling profile, Markovian rate and Zeno times.

Natural units throughout: v_g = 1, so k0 = omega0 and the cutoff ratio
Lambda/k0 equals Lambda/omega0.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ._moments import weight_transform
from .geometry import CouplingLayout, phase_matrix

MODELS = ("const", "lin")


@dataclass(frozen=True)
class WaveguideSetup:
    """Coupling model plus the rates that fix the kernels.

    ``gamma0`` is the relaxation rate per coupling point, ``omega0`` the
    emitter frequency and ``cutoff_ratio`` the dimensionless Lambda/k0.
    """

    model: str = "const"
    gamma0: float = 1e-4
    omega0: float = 1.0
    cutoff_ratio: float = 1e4

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown coupling model {self.model!r}; expected one of {MODELS}")
        if not self.gamma0 >= 0:
            raise ValueError("gamma0 must be non-negative")
        if not self.omega0 > 0:
            raise ValueError("omega0 must be positive")
        if not self.cutoff_ratio > 1:
            raise ValueError("cutoff_ratio Lambda/k0 must exceed 1")
        for msg in self.validity_warnings():
            warnings.warn(msg, stacklevel=3)

    @property
    def group_velocity(self) -> float:
        return 1.0

    @property
    def k0(self) -> float:
        return self.omega0 / self.group_velocity

    @property
    def cutoff(self) -> float:
        """Absolute wavenumber cutoff Lambda."""
        return self.cutoff_ratio * self.k0

    @property
    def rate_ratio(self) -> float:
        """Gamma0 / omega0."""
        return self.gamma0 / self.omega0

    def validity_warnings(self) -> list[str]:
        if self.gamma0 == 0:
            return []
        ratio = self.omega0 / self.gamma0
        need = np.log(self.cutoff_ratio) if self.model == "lin" else 1.0
        if ratio < 100 * need:
            return [
                f"weak-coupling condition violated for {self.model}-wQED: "
                f"omega0/gamma0 = {ratio:.3g} < 100 x {need:.3g}"
            ]
        return []

    def with_(self, **changes) -> WaveguideSetup:
        params = dict(model=self.model, gamma0=self.gamma0, omega0=self.omega0,
                      cutoff_ratio=self.cutoff_ratio)
        params.update(changes)
        return WaveguideSetup(**params)


def bare_coupling(setup: WaveguideSetup, k) -> np.ndarray:
    k = np.abs(np.asarray(k, dtype=float))
    v = setup.group_velocity
    if setup.model == "const":
        return np.sqrt(setup.gamma0 * v / 2.0) * np.ones_like(k)
    return np.sqrt(setup.gamma0 * v * k / (2.0 * setup.k0))


def jc_coupling(setup: WaveguideSetup, k):
    """Polaron-scaled coupling g_JC = 2 omega0 g_k / (omega0 + omega_k)."""
    k_arr = np.asarray(k, dtype=float)
    if np.any(np.abs(k_arr) > setup.cutoff):
        raise ValueError("|k| exceeds the cutoff")
    omega_k = np.abs(k_arr) * setup.group_velocity
    out = 2.0 * setup.omega0 * bare_coupling(setup, k_arr) / (setup.omega0 + omega_k)
    return out[()] if out.ndim == 0 else out


def markovian_rate(gamma0: float, n_legs: int, phi: float) -> float:
    """Gamma0 sin^2(M phi/2) / sin^2(phi/2), evaluated as |sum_m exp(i m phi)|^2.

    The sum form is identical away from phi = 2 pi j and returns the limit
    M^2 Gamma0 there.
    """
    if n_legs < 1:
        raise ValueError("need at least one leg")
    amp = np.sum(np.exp(1j * phi * np.arange(n_legs)))
    return float(gamma0 * abs(amp) ** 2)


def static_integral(model: str, phase, cutoff_ratio: float):
    """int_0^L w(z) cos(z phase) dz, real."""
    return np.real(weight_transform(model, phase, 0.0, cutoff_ratio))


def zeno_rate_matrix(setup: WaveguideSetup, layout: CouplingLayout) -> np.ndarray:
    """Second moment of the coupling Hamiltonian between emitters.

    ``Z[n, n'] = (2 Gamma0 omega0 / pi) sum_{m m'} int_0^L w cos(z phi) dz``; the
    survival probability of a state c starts as ``1 - (c^H Z c) t^2``.
    """
    pm = phase_matrix(layout, setup.k0)
    table = static_integral(setup.model, pm.distinct, setup.cutoff_ratio)
    counts = pm.pair_counts()
    return 2.0 * setup.gamma0 * setup.omega0 / np.pi * counts @ table


def zeno_time_single(
    setup: WaveguideSetup, n_legs: int, within_atom_spacing: float = 1.0, exact: bool = False
) -> float:
    """Zeno time of one M-legged emitter with uniform leg spacing.

    const: the k-integral is evaluated in closed form without truncation.
    lin: by default the large-cutoff form (2 Gamma0 omega0/pi) M ln(L + 1);
    ``exact=True`` evaluates the full k-integral instead.
    """
    if n_legs < 1:
        raise ValueError("need at least one leg")
    if setup.model == "lin" and not exact:
        inv_sq = 2.0 * setup.gamma0 * setup.omega0 / np.pi * n_legs * np.log(setup.cutoff_ratio + 1.0)
    else:
        if n_legs > 1 and not within_atom_spacing > 0:
            raise ValueError("leg spacing must be positive")
        spacing = within_atom_spacing if n_legs > 1 else 1.0
        layout = CouplingLayout(spacing * np.arange(n_legs)[None, :])
        inv_sq = float(zeno_rate_matrix(setup, layout)[0, 0])
    return float(1.0 / np.sqrt(inv_sq)) if inv_sq > 0 else float("inf")


def plane_wave_amplitudes(layout: CouplingLayout, q: float) -> np.ndarray:
    """Unit-norm amplitudes c_n proportional to sum_m exp(i q x_nm)."""
    amps = np.exp(1j * q * layout.positions).sum(axis=1)
    norm = np.linalg.norm(amps)
    if norm < 1e-12 * np.sqrt(layout.positions.size):
        raise ValueError("plane-wave amplitudes vanish for this layout and wavenumber")
    return amps / norm


def dirichlet_factor(n_legs: int, phase: float) -> float:
    """F = sin^2(M phase/2) / sin^2(phase/2), with its limit M^2."""
    return markovian_rate(1.0, n_legs, phase)


def zeno_time_array(setup: WaveguideSetup, layout: CouplingLayout, q: float) -> float:
    """Zeno time of the N-emitter state with amplitudes sum_m exp(i q x_nm).

    Computes the variance of the coupling Hamiltonian in that state with the
    amplitude phases and the field phases carried by independent leg pairs.
    The free-energy variance vanishes because the state is normalised
    exactly, so no omega0^2 term survives.
    """
    c = plane_wave_amplitudes(layout, q)
    z = zeno_rate_matrix(setup, layout)
    inv_sq = float(np.real(np.conj(c) @ z @ c))
    return float(1.0 / np.sqrt(inv_sq)) if inv_sq > 0 else float("inf")
