# %% [markdown]
# # A single two-legged giant atom
#
# One atom touches the waveguide at two points a phase 0.1 pi apart.  Early
# on it decays far faster than the Markovian rate; later it settles on
# Gamma0 |1 + e^{i phi}|^2.  We compare the exact const and lin models with
# the retarded picture.

# %%
from __future__ import annotations

import numpy as np

from giant_wqed import (
    WaveguideSetup,
    aligned_step,
    build_separate,
    instantaneous_rate,
    markovian_rate,
    solve,
    solve_retard,
)

phi = 0.1 * np.pi
layout = build_separate(1, 2, phi)
gamma0 = 1e-4

# %% Exact models
rates = {}
for model in ("const", "lin"):
    setup = WaveguideSetup(model, gamma0, 1.0, 1e4)
    traj = solve(setup, layout, [1.0], 300.0, 0.01)
    rates[model] = instantaneous_rate(traj)
    print(model, "worst probability leak", np.abs(traj.total_probability() - 1).max())

# %% Retarded picture on a grid that divides the delay
dt = aligned_step(layout, 1.0, 0.01)
rates["retard"] = instantaneous_rate(solve_retard(layout, gamma0, 1.0, [1.0], 300.0, dt))

# %% Peak and plateau against the Markovian value
print("Markovian rate:", markovian_rate(1.0, 2, phi))
for name, r in rates.items():
    t_peak, peak = r.peak()
    print(f"{name:7s} peak {peak:.3f} at omega0 t = {t_peak:.2f}, plateau {r.plateau():.4f}")
