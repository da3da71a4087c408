"""Exact full-basis variational energy, its gradient, and the training loop."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateStateError, DimensionError, NumericOverflowError, ParameterError
from .rbm import RbmParameters, logcosh_and_tanh, psi_vector
from .spin_systems import GroundStateSolution, HamiltonianOperator, HilbertBasis, spin_matrix

log = logging.getLogger(__name__)

IMAG_RESIDUE_TOL = 1e-12
WEIGHT_FLOOR = 1e-300
OPTIMIZERS = ("adam", "sgd")


@dataclass(frozen=True)
class TrainingConfig:
    learning_rate: float = 0.01
    steps: int = 200
    optimizer: str = "adam"
    seed: int = 0
    init_scale: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ParameterError("learning_rate must be positive")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ParameterError("steps must be a positive integer")
        if not self.init_scale >= 0:
            raise ParameterError("init_scale must be nonnegative")
        if self.optimizer not in OPTIMIZERS:
            raise ParameterError(f"unknown optimizer {self.optimizer!r}")


@dataclass
class TrainingRecord:
    coupling: float
    energy_history: np.ndarray
    final_params: RbmParameters | None
    exact_energy: float
    energy_error: float = float("nan")
    infidelity: float = float("nan")
    status: str = "ok"  # ok | failed | not-run
    failed_step: int | None = None
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    @property
    def error_history(self) -> np.ndarray:
        return np.abs(self.energy_history - self.exact_energy)


class _Evaluator:
    """Caches the sparse Hamiltonian and spin table for repeated evaluations."""

    def __init__(self, op: HamiltonianOperator):
        self.op = op
        self.matrix = op.to_sparse()
        self.spins = spin_matrix(op.n_sites)
        self.basis = HilbertBasis(op.n_sites)

    def check(self, params):
        if params.n_visible != self.op.n_sites:
            raise DimensionError(f"RBM has {params.n_visible} visible units, Hamiltonian has {self.op.n_sites} sites")

    def amplitudes(self, params):
        """Max-shifted amplitudes and tanh of the pre-activations over the basis."""
        self.check(params)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            theta = self.spins @ params.weights.T + params.hidden_bias
            log_abs, phase, t = logcosh_and_tanh(theta)
            log_abs = log_abs.sum(axis=1)
            if not (np.all(np.isfinite(log_abs)) and np.all(np.isfinite(t))):
                raise NumericOverflowError("log amplitude is not finite")
            psi = np.exp(log_abs - log_abs.max())
        if phase is not None:
            phase = phase.sum(axis=1)
            psi = psi * (np.cos(phase) + 1j * np.sin(phase))
        return psi, t

    def energy(self, params):
        return self._energy(self.amplitudes(params)[0])[0]

    def _energy(self, psi):
        h_psi = self.matrix @ psi
        norm = np.vdot(psi, psi).real
        if not norm > 0:
            raise DegenerateStateError("wavefunction vector is zero")
        e = np.vdot(psi, h_psi) / norm
        if abs(e.imag) > IMAG_RESIDUE_TOL * max(1.0, abs(e.real)):
            raise ArithmeticError(f"energy has imaginary residue {e.imag:.3e}")
        if not np.isfinite(e.real):
            raise NumericOverflowError("variational energy is not finite")
        return float(e.real), psi, h_psi, norm

    def energy_and_gradient(self, params):
        """Energy and G_k = <O_k^* (E_loc - E)>, the derivative w.r.t. conj(theta_k)."""
        psi, t = self.amplitudes(params)
        e, psi, h_psi, norm = self._energy(psi)
        weight = np.abs(psi) ** 2
        keep = weight > WEIGHT_FLOOR * weight.max()
        # p(x) E_loc(x) = conj(psi) H psi / norm, so no division by psi is needed
        centred = np.where(keep, np.conj(psi) * h_psi - e * weight, 0.0) / norm
        tc = np.conj(t)
        g_b = centred @ tc
        g_w = (tc * centred[:, None]).T @ self.spins
        return e, g_w, g_b


def variational_energy(params: RbmParameters, op: HamiltonianOperator) -> float:
    """Re <psi|H|psi> / <psi|psi>, summed exactly over the basis."""
    return _Evaluator(op).energy(params)


def energy_gradient(params: RbmParameters, op: HamiltonianOperator) -> RbmParameters:
    """Gradient of the variational energy, shaped like the parameters.

    Real field: dE/dtheta = 2 Re[<O* E_loc> - <O*><E_loc>].
    Complex field: G = <O* E_loc> - <O*><E_loc> = dE/d(conj theta); the real
    and imaginary parts of G are half the partial derivatives with respect to
    Re(theta) and Im(theta).
    """
    _, g_w, g_b = _Evaluator(op).energy_and_gradient(params)
    if params.field == "real":
        return RbmParameters(2.0 * g_w.real, 2.0 * g_b.real, "real")
    return RbmParameters(g_w, g_b, "complex")


class _Adam:
    def __init__(self, size, cfg):
        self.cfg = cfg
        self.m = np.zeros(size)
        self.v = np.zeros(size)
        self.t = 0

    def step(self, grad):
        c = self.cfg
        self.t += 1
        self.m = c.beta1 * self.m + (1 - c.beta1) * grad
        self.v = c.beta2 * self.v + (1 - c.beta2) * grad**2
        m_hat = self.m / (1 - c.beta1**self.t)
        v_hat = self.v / (1 - c.beta2**self.t)
        return c.learning_rate * m_hat / (np.sqrt(v_hat) + c.eps)


class _Sgd:
    def __init__(self, size, cfg):
        self.lr = cfg.learning_rate

    def step(self, grad):
        return self.lr * grad


def _to_real(vec, field):
    return vec if field == "real" else np.concatenate([vec.real, vec.imag])


def _from_real(vec, field):
    if field == "real":
        return vec
    half = vec.size // 2
    return vec[:half] + 1j * vec[half:]


def train(
    params: RbmParameters,
    op: HamiltonianOperator,
    cfg: TrainingConfig,
    exact: GroundStateSolution,
    coupling: float = float("nan"),
) -> TrainingRecord:
    """Run ``cfg.steps`` optimizer updates on the exact variational energy.

    ``energy_history[0]`` is the energy before any update; entry ``t`` is the
    energy after ``t`` updates. The optimizer works on the real coordinates
    (Re, Im for complex parameters), so the complex descent direction is the
    conjugate of the holomorphic energy derivative.
    """
    ev = _Evaluator(op)
    ev.check(params)
    n_visible, field_ = params.n_visible, params.field
    theta = _to_real(params.vector(), field_).astype(float)
    opt = (_Adam if cfg.optimizer == "adam" else _Sgd)(theta.size, cfg)
    history = np.full(cfg.steps + 1, np.nan)
    current = params
    try:
        for step in range(cfg.steps + 1):
            if step == cfg.steps:
                history[step] = ev.energy(current)
                break
            e, g_w, g_b = ev.energy_and_gradient(current)
            history[step] = e
            grad = 2.0 * np.concatenate([g_w.ravel(), g_b])
            theta = theta - opt.step(_to_real(grad.real if field_ == "real" else grad, field_))
            current = RbmParameters.from_vector(_from_real(theta, field_), n_visible, field_)
    except (NumericOverflowError, DegenerateStateError, FloatingPointError) as exc:
        log.warning("training failed at step %d (coupling %s): %s", step, coupling, exc)
        return TrainingRecord(
            coupling, history, None, exact.energy, status="failed", failed_step=step, message=str(exc)
        )

    psi, _ = psi_vector(current, ev.basis)
    return TrainingRecord(
        coupling=coupling,
        energy_history=history,
        final_params=current,
        exact_energy=exact.energy,
        energy_error=energy_error(history[-1], exact.energy),
        infidelity=infidelity(psi, exact),
    )


def energy_error(e_nqs: float, e_exact: float) -> float:
    return abs(e_nqs - e_exact)


def infidelity(psi_nqs, exact: GroundStateSolution) -> float:
    """1 - ||P_gs psi||^2 for normalized psi, P_gs the ground-subspace projector."""
    psi = np.asarray(psi_nqs)
    norm = np.linalg.norm(psi)
    if not norm > 0:
        raise DegenerateStateError("cannot compute infidelity of a zero vector")
    overlaps = exact.subspace.conj().T @ (psi / norm)
    return max(0.0, float(1.0 - np.vdot(overlaps, overlaps).real))
