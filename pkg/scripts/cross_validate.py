"""Trapped-particle variance from three independent routes.

Closed form, Crank-Nicolson Fokker-Planck, and a Langevin ensemble, all in
units where kM = 1 and sigma0 = 1. Prints one row per time.

    python scripts/cross_validate.py [n_trajectories]
"""

import sys

import numpy as np

from brownwave.analytic import ou_state
from brownwave.core import NATURAL, TrapParameters
from brownwave.grid import GridSpec
from brownwave.langevin import SimConfig, ensemble_stats, simulate_trapped
from brownwave.solvers import field_moments, solve_fokker_planck

n_traj = int(sys.argv[1]) if len(sys.argv) > 1 else 50_000
trap = TrapParameters.nondimensional()
x0 = 2.0
times = [0.1, 0.5, 1.0, 2.0, 5.0]

grid = GridSpec(-12.0, 12.0, 1025)
fp = solve_fokker_planck(trap, 1.0, x0, times[-1], 0.25 * grid.dx**2, grid, times, NATURAL)
fp_var = {t: field_moments(f)[2] for t, f in fp.snapshots}

dt = 1e-3
cfg = SimConfig(dt, int(round(times[-1] / dt)), n_traj, seed=2024, x0=x0, record_every=100)
stats = ensemble_stats(simulate_trapped(trap, 1.0, cfg, method="exact", constants=NATURAL))

print(f"{'t*kM':>6} {'closed form':>12} {'Fokker-Planck':>14} {'ensemble':>10} {'ens. 2*SE':>10}")
for t in times:
    exact = ou_state(trap, 1.0, x0, t, NATURAL).variance
    i = int(np.argmin(np.abs(stats.times - t)))
    v = stats.variance_t[i]
    print(f"{t:6.2f} {exact:12.6f} {fp_var[t]:14.6f} {v:10.6f} {2 * v * np.sqrt(2 / (n_traj - 1)):10.6f}")
print(f"Fokker-Planck mass drift: {fp.mass_drift:.2e}")
