"""
Fine-tuning versus independent training on the J1-J2 chain
===========================================================

A reduced version of the frustrated-chain experiment (N = 8 and a coarse
grid) so it finishes in about a minute. The full setting is N = 12 and 101
points; run it with ``nqsweights sweep --model j1j2``.
"""

import numpy as np

from nqsweights import SweepGrid, TrainingConfig, run_adiabatic, run_independent

grid = SweepGrid.from_range("j1j2", 0.0, 1.0, 0.05, n_sites=8)
cfg = TrainingConfig()

tuned = run_adiabatic(grid, cfg, "forward", alpha=2, field="complex")
fresh = run_independent(grid, cfg, alpha=2, field="complex")

###############################################################################
# Warm starts begin close to the previous final energy; random starts do not.

print(" J2/J1   initial error (tuned, fresh)   final error (tuned, fresh)")
for a, b in zip(tuned.records, fresh.records):
    print(f"{a.coupling:6.2f}   {a.error_history[0]:9.3e} {b.error_history[0]:9.3e}"
          f"          {a.energy_error:9.3e} {b.energy_error:9.3e}")

###############################################################################
# Consecutive fine-tuned weight vectors stay close; independent ones jump.

for name, res in (("tuned", tuned), ("fresh", fresh)):
    steps = np.linalg.norm(np.diff(res.flat_weights, axis=0), axis=1)
    print(name, "mean step between neighbouring weight vectors", steps.mean())
