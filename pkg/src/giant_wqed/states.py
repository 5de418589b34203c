"""Initial single-excitation states: timed-Dicke and Markovian subradiant."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import CouplingLayout
from .model import WaveguideSetup, markovian_rate

NORM_TOL = 1e-12


@dataclass(frozen=True)
class AmplitudeVector:
    amplitudes: np.ndarray
    label: str = "custom"

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        if abs(np.vdot(amps, amps).real - 1.0) > NORM_TOL:
            raise ValueError("amplitudes must have unit norm")
        object.__setattr__(self, "amplitudes", amps)

    def __array__(self, dtype=None, copy=None):
        return self.amplitudes if dtype is None else self.amplitudes.astype(dtype)

    def __len__(self):
        return self.amplitudes.size


def custom_state(amplitudes, normalize: bool = True) -> AmplitudeVector:
    amps = np.asarray(amplitudes, dtype=complex).ravel()
    if normalize:
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("zero amplitude vector")
        amps = amps / norm
    return AmplitudeVector(amps, "custom")


def excited_single(layout: CouplingLayout, atom: int = 0) -> AmplitudeVector:
    amps = np.zeros(layout.n_atoms, complex)
    amps[atom] = 1.0
    return AmplitudeVector(amps, f"excited_{atom + 1}")


def timed_dicke(layout: CouplingLayout, setup: WaveguideSetup, direction: int = +1) -> AmplitudeVector:
    """Amplitudes imprinted by a resonant photon moving in ``direction`` (+1 or -1).

    c_n = (Gamma0 / (Gamma_Mar N))^{1/2} sum_m exp(i direction k0 x_nm), then
    renormalised as a numerical guard.  The prefactor is exact for uniform leg
    spacing.
    """
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    x = layout.positions
    if layout.n_legs > 1:
        spacing = float(np.mean(np.diff(x, axis=1)))
        gamma_mar = markovian_rate(1.0, layout.n_legs, setup.k0 * spacing)
    else:
        gamma_mar = 1.0
    if gamma_mar < 1e-12:
        raise ValueError(
            "timed-Dicke normalisation undefined: the leg spacing makes the Markovian rate vanish"
        )
    amps = np.sqrt(1.0 / (gamma_mar * layout.n_atoms)) * np.exp(1j * direction * setup.k0 * x).sum(axis=1)
    norm = np.linalg.norm(amps)
    if norm < 1e-12:
        raise ValueError("timed-Dicke amplitudes vanish for this layout")
    label = "timed_dicke_plus" if direction > 0 else "timed_dicke_minus"
    return AmplitudeVector(amps / norm, label)


def effective_hamiltonian(layout: CouplingLayout, setup: WaveguideSetup) -> np.ndarray:
    """H[n, n'] = omega0 delta_nn' - i Gamma0 sum_{m, m'} exp(i k0 |x_nm - x_n'm'|).

    Complex symmetric, not Hermitian.
    """
    x = layout.positions
    dist = np.abs(x[:, :, None, None] - x[None, None, :, :])
    coupling = np.exp(1j * setup.k0 * dist).sum(axis=(1, 3))
    return setup.omega0 * np.eye(layout.n_atoms) - 1j * setup.gamma0 * coupling


class EigenSolverError(RuntimeError):
    pass


def subradiant_state(hamiltonian: np.ndarray, tie_tol: float | None = None) -> AmplitudeVector:
    """Eigenvector of the effective Hamiltonian with the smallest decay -Im(lambda).

    Near-ties (within ``tie_tol``, default 1e-10 times the largest decay)
    go to the smallest Re(lambda).
    """
    h = np.asarray(hamiltonian, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("Hamiltonian must be square")
    if h.shape[0] > 64:
        raise ValueError("dense eigensolve limited to N <= 64")
    try:
        evals, evecs = np.linalg.eig(h)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"eigensolver did not converge: {exc}") from exc
    decay = -evals.imag
    if tie_tol is None:
        tie_tol = 1e-10 * max(np.max(np.abs(decay)), np.finfo(float).tiny)
    candidates = np.flatnonzero(decay <= decay.min() + tie_tol)
    best = candidates[np.argmin(evals.real[candidates])]
    vec = evecs[:, best]
    vec = vec / np.linalg.norm(vec)
    # fix the global phase so the largest component is real and positive
    k = np.argmax(np.abs(vec))
    vec = vec * np.exp(-1j * np.angle(vec[k]))
    residual = np.linalg.norm(h @ vec - evals[best] * vec)
    if residual > 1e-10 * max(np.linalg.norm(h), 1.0):
        raise EigenSolverError(f"eigenpair residual {residual:.3e} too large")
    return AmplitudeVector(vec, "subradiant")


def subradiant_eigenvalue(hamiltonian: np.ndarray) -> complex:
    vec = subradiant_state(hamiltonian).amplitudes
    h = np.asarray(hamiltonian, dtype=complex)
    return complex(np.vdot(vec, h @ vec))
