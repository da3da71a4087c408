"""Restricted Boltzmann machine wavefunctions trained across spin-chain phase diagrams.

The weights of RBMs fine-tuned from one coupling to the next form a smooth
trajectory; its principal components locate the phase transition.
"""

from .analysis import PcaResult, TransitionEstimate, detect_transition, export_projection_tracks, pca
from .exceptions import (
    CapacityError,
    DegenerateStateError,
    DimensionError,
    IncompleteSweepError,
    InvalidSystemError,
    NoInteriorExtremumError,
    NqsError,
    NumericOverflowError,
    ParameterError,
    SolverError,
)
from .rbm import FlatWeightVector, RbmParameters, flatten, grad_log_psi, init_random, log_psi, unflatten
from .spin_systems import (
    GroundStateSolution,
    HamiltonianOperator,
    HilbertBasis,
    SpinConfiguration,
    apply,
    build_j1j2,
    build_tfim,
    exact_ground_state,
)
from .sweep import SweepGrid, SweepResult, collect_flat_weights, run_adiabatic, run_independent, run_sweep
from .trainer import TrainingConfig, TrainingRecord, energy_error, energy_gradient, infidelity, train, variational_energy

__version__ = "0.1.0"
