"""
Exact ground states of the two spin chains
==========================================

Full-basis diagonalization is the reference every trained network is
measured against. Here we check it on the cases with closed-form answers.
"""

import numpy as np

from nqsweights import build_j1j2, build_tfim, exact_ground_state

# Classical Ising limit: no transverse field, every bond satisfied, E = -N.
for n in (4, 8, 12):
    print(n, exact_ground_state(build_tfim(n, 1.0, 0.0)).energy)

# The two aligned states are degenerate, so the ground level is two-dimensional.
print("degeneracy at h=0:", exact_ground_state(build_tfim(8, 1.0, 0.0)).degeneracy)

# Critical field h = |J|: the energy per site approaches -4/pi as N grows.
for n in (6, 8, 10, 12, 14):
    e = exact_ground_state(build_tfim(n, -1.0, 1.0)).energy
    print(f"N={n:2d}  E/N={e / n:.6f}")
print("thermodynamic limit", -4 / np.pi)

# Majumdar-Ghosh point J2/J1 = 1/2: the dimer product states are exact,
# with E = -3 N J1 / 8 and a twofold degenerate ground level.
gs = exact_ground_state(build_j1j2(12, 1.0, 0.5))
print("Majumdar-Ghosh", gs.energy, -3 * 12 / 8, "degeneracy", gs.degeneracy)
