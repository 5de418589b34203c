"""Amplitude trajectories shared by the exact and retarded solvers."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

FRAMEWORKS = ("const", "lin", "retard")


class NumericalError(RuntimeError):
    """Raised when a solver produces non-finite or inconsistent numbers."""


class ConfigurationError(ValueError):
    """Raised when run parameters are inconsistent with the solver's requirements."""


@dataclass(frozen=True)
class AmplitudeTrajectory:
    """Amplitudes ``c[j, n]`` on the uniform grid ``t[j] = j * dt``.

    Times are in units of 1/omega0.  ``n_b`` is the waveguide excitation
    number; for the retarded framework it is the closure 1 - sum |c|^2.
    """

    time: np.ndarray
    amplitudes: np.ndarray
    n_b: np.ndarray
    framework: str
    normalized: bool = False
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.framework not in FRAMEWORKS:
            raise ValueError(f"unknown framework {self.framework!r}")
        if self.amplitudes.ndim != 2 or self.amplitudes.shape[0] != self.time.size:
            raise ValueError("amplitudes must be shaped (len(time), N)")

    @property
    def dt(self) -> float:
        return float(self.time[1] - self.time[0])

    @property
    def n_atoms(self) -> int:
        return self.amplitudes.shape[1]

    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def survival(self) -> np.ndarray:
        """P_e(t) = sum_n |c_n(t)|^2."""
        return self.populations().sum(axis=1)

    def total_probability(self) -> np.ndarray:
        return self.survival() + self.n_b

    def with_(self, **changes) -> AmplitudeTrajectory:
        return replace(self, **changes)

    def to_csv(self, path) -> None:
        """Columns: t*omega0, re/im of each c_n, N_B, P_total."""
        path = Path(path)
        header = ["t*omega0"]
        for n in range(1, self.n_atoms + 1):
            header += [f"re(c_{n})", f"im(c_{n})"]
        header += ["N_B", "P_total"]
        total = self.total_probability()
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for j, t in enumerate(self.time):
                row = [repr(float(t))]
                for c in self.amplitudes[j]:
                    row += [repr(float(c.real)), repr(float(c.imag))]
                row += [repr(float(self.n_b[j])), repr(float(total[j]))]
                writer.writerow(row)


def read_trajectory_csv(path, framework: str) -> AmplitudeTrajectory:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    n_atoms = (data.shape[1] - 3) // 2
    amps = data[:, 1 : 1 + 2 * n_atoms : 2] + 1j * data[:, 2 : 2 + 2 * n_atoms : 2]
    return AmplitudeTrajectory(data[:, 0], amps, data[:, -2], framework)
