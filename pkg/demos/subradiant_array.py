# %% [markdown]
# # A subradiant state of four giant atoms
#
# The most weakly decaying eigenvector of the effective Hamiltonian hardly
# radiates.  Its total decay rate swings through zero: the atoms emit and
# reabsorb before the slow decay sets in.

# %%
from __future__ import annotations

import numpy as np

from giant_wqed import (
    WaveguideSetup,
    aligned_step,
    build_separate,
    effective_hamiltonian,
    instantaneous_rate,
    solve,
    subradiant_state,
)

layout = build_separate(4, 2, 0.1 * np.pi)
setup = WaveguideSetup("const", 1e-6, 1.0, 1e4)
state = subradiant_state(effective_hamiltonian(layout, setup))
print("initial amplitudes:", np.round(state.amplitudes, 4))

# %%
traj = solve(setup, layout, state.amplitudes, 100.0, aligned_step(layout, 1.0, 0.01))
rate = instantaneous_rate(traj)
print("sign changes of the total rate:", rate.sign_changes())
print("rate every 10/omega0:", np.round(rate.rates[:: int(round(10 / traj.dt))], 3))

# %% Per-atom exchange
for n in range(layout.n_atoms):
    p = traj.populations()[:, n]
    print(f"atom {n + 1}: population {p[0]:.4f} -> {p[-1]:.4f}")
