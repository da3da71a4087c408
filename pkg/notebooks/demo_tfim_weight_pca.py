"""
Weight-space trajectory of the transverse field Ising chain
===========================================================

Train one real RBM per field value, warm-starting each run from the previous
field, then look at the principal components of the trained weights.
Runs in well under a minute for N = 8.
"""

import numpy as np

from nqsweights import (
    NoInteriorExtremumError,
    SweepGrid,
    TrainingConfig,
    detect_transition,
    pca,
    run_adiabatic,
)

grid = SweepGrid.from_range("tfim")  # N = 8, J = -1, h in [0, 3] step 0.025
result = run_adiabatic(grid, TrainingConfig(), "forward")

errors = np.array([r.energy_error for r in result.records])
infid = np.array([r.infidelity for r in result.records])
h = np.array(grid.couplings)
for k in range(0, len(h), 10):
    print(f"h={h[k]:5.3f}  energy error {errors[k]:.2e}  infidelity {infid[k]:.3f}")

###############################################################################
# PCA of the 121 x 72 weight matrix (W then hidden biases).

weights_pca = pca(result.flat_weights, 3)
print("explained variance", weights_pca.explained_variance)
for k in range(0, len(h), 10):
    print(f"h={h[k]:5.3f}  " + "  ".join(f"{v:+.3f}" for v in weights_pca.projections[k]))

###############################################################################
# Look for an interior minimum on each component. The margin says how far
# the minimum sits below the next lowest local value.

for index in (1, 2, 3):
    try:
        est = detect_transition(weights_pca, h, index)
        print(f"PC{index}: h = {est.coupling_at_extremum:.3f} ({est.orientation}, margin {est.margin:.3g})")
    except NoInteriorExtremumError as exc:
        print(f"PC{index}: {exc}")
