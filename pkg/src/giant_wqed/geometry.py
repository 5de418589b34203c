"""Coupling-point layouts and the phase/delay matrices derived from them.

Layouts store plain coordinates.  With v_g = 1 a length is also a travel
time; multiplying by k0 gives the acquired field phase.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CouplingLayout:
    """Positions ``x[n][m]`` of the M legs of each of N emitters."""

    positions: np.ndarray
    topology: str = "custom"

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float)
        if pos.ndim == 1:
            pos = pos[:, None]
        if pos.ndim != 2 or pos.size == 0:
            raise ValueError("positions must be an N x M array")
        if not np.all(np.isfinite(pos)):
            raise ValueError("positions must be finite")
        if pos.shape[1] > 1 and np.any(np.diff(pos, axis=1) <= 0):
            raise ValueError("legs of each emitter must be strictly increasing")
        flat = np.sort(pos.ravel())
        if flat.size > 1 and np.min(np.diff(flat)) <= 0:
            raise ValueError("coupling points must not coincide")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def n_atoms(self) -> int:
        return self.positions.shape[0]

    @property
    def n_legs(self) -> int:
        return self.positions.shape[1]

    @property
    def min_spacing(self) -> float:
        flat = np.sort(self.positions.ravel())
        return float(np.min(np.diff(flat))) if flat.size > 1 else float("inf")

    def within_atom_gaps(self) -> np.ndarray:
        return np.diff(self.positions, axis=1)

    def shifted(self, offset: float) -> CouplingLayout:
        return CouplingLayout(self.positions + offset, self.topology)

    def mirrored(self) -> CouplingLayout:
        """Layout under x -> -x with atoms and legs re-sorted."""
        return CouplingLayout(-self.positions[::-1, ::-1], self.topology)

    def is_mirror_symmetric(self, tol: float = 1e-12) -> bool:
        return bool(np.allclose(self.mirrored().positions, self.positions, atol=tol))


def build_separate(n_atoms: int, n_legs: int, d: float, centered: bool = False) -> CouplingLayout:
    """Atoms side by side; every adjacent pair of points is ``d`` apart."""
    if n_atoms < 1 or n_legs < 1 or not d > 0:
        raise ValueError("separate layout needs N >= 1, M >= 1 and d > 0")
    pos = d * np.arange(n_atoms * n_legs, dtype=float).reshape(n_atoms, n_legs)
    if centered:
        pos = pos - 0.5 * (pos.max() + pos.min())
    return CouplingLayout(pos, "separate")


def build_braided(n_atoms: int, d: float, centered: bool = False) -> CouplingLayout:
    """Two-legged braided chain with x1 = 2(n-1)d and x2 = x1 + 3d.

    Within-atom spacing is 3d, the smallest gap is d, and neighbours
    interleave as x1[n] < x1[n+1] < x2[n] < x2[n+1].
    """
    if n_atoms < 2:
        raise ValueError("braided layout needs at least two atoms")
    if not d > 0:
        raise ValueError("d must be positive")
    first = 2.0 * d * np.arange(n_atoms)
    pos = np.column_stack([first, first + 3.0 * d])
    if centered:
        pos = pos - 0.5 * (pos.max() + pos.min())
    return CouplingLayout(pos, "braided")


@dataclass(frozen=True)
class PhaseMatrix:
    """Phases k0|x - x'| indexed as ``values[n, m, n', m']``.

    ``distinct`` holds the deduplicated sorted phases and ``index`` maps each
    entry onto it, so kernels are tabulated once per distinct value.
    """

    values: np.ndarray
    distinct: np.ndarray
    index: np.ndarray
    k0: float = 1.0

    def pair_counts(self) -> np.ndarray:
        """``counts[n, n', p]``: leg pairs (m, m') of emitters n, n' sharing phase p."""
        n_atoms = self.values.shape[0]
        n_p = self.distinct.size
        counts = np.zeros((n_atoms, n_atoms, n_p))
        for n in range(n_atoms):
            for n2 in range(n_atoms):
                counts[n, n2] = np.bincount(self.index[n, :, n2, :].ravel(), minlength=n_p)
        return counts


def phase_matrix(layout: CouplingLayout, k0: float = 1.0) -> PhaseMatrix:
    if not k0 > 0:
        raise ValueError("k0 must be positive")
    values = k0 * delay_matrix(layout)
    spacing = layout.min_spacing if np.isfinite(layout.min_spacing) else 1.0
    tol = 1e-12 * k0 * spacing
    flat = np.sort(values.ravel())
    distinct = flat[np.concatenate([[True], np.diff(flat) > tol])]
    index = np.searchsorted(distinct, values.ravel() + tol, side="right") - 1
    index = index.reshape(values.shape)
    return PhaseMatrix(values=distinct[index], distinct=distinct, index=index, k0=k0)


def delay_matrix(layout: CouplingLayout) -> np.ndarray:
    """Travel times |x - x'| (v_g = 1), indexed like :class:`PhaseMatrix`."""
    x = layout.positions
    return np.abs(x[:, :, None, None] - x[None, None, :, :])
