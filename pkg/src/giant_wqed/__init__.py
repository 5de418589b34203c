"""Collective emission of giant atoms in a 1D waveguide beyond the Markov limit.

Three descriptions of the same single-excitation dynamics are provided:
exact Volterra solvers for k-independent (``const``) and linear-in-|k|
(``lin``) couplings, and a retardation-only delay-differential picture
(``retard``).  Times are in units of 1/omega0, rates in units of Gamma0 and
lengths in units of 1/k0.
"""
from __future__ import annotations

from .analysis import RateSeries, framework_agreement, instantaneous_rate, population_change
from .dde import DelaySet, aligned_step, solve_retard
from .field import FieldIntensityMap, chirality, intensity_const, intensity_retard
from .geometry import CouplingLayout, build_braided, build_separate, phase_matrix
from .kernels import kernel_K, oracle_kernel
from .model import WaveguideSetup, markovian_rate, zeno_time_array, zeno_time_single
from .states import effective_hamiltonian, subradiant_state, timed_dicke
from .trajectory import AmplitudeTrajectory, ConfigurationError, NumericalError
from .volterra import normalize, solve

__version__ = "0.1.0"

__all__ = [
    "AmplitudeTrajectory",
    "ConfigurationError",
    "CouplingLayout",
    "DelaySet",
    "FieldIntensityMap",
    "NumericalError",
    "RateSeries",
    "WaveguideSetup",
    "aligned_step",
    "build_braided",
    "build_separate",
    "chirality",
    "effective_hamiltonian",
    "framework_agreement",
    "instantaneous_rate",
    "intensity_const",
    "intensity_retard",
    "kernel_K",
    "markovian_rate",
    "normalize",
    "oracle_kernel",
    "phase_matrix",
    "population_change",
    "solve",
    "solve_retard",
    "subradiant_state",
    "timed_dicke",
    "zeno_time_array",
    "zeno_time_single",
]
