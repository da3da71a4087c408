"""Restricted Boltzmann machine wavefunction with logcosh hidden units.

    log psi(x) = sum_i logcosh(W_i . x + b_i),   x in {+1, -1}^N

No visible bias. Weights are real or complex; complex parameters are treated
holomorphically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import CapacityError, DimensionError, NumericOverflowError, ParameterError
from .spin_systems import MAX_SITES, HilbertBasis, SpinConfiguration, spin_matrix

FIELDS = ("real", "complex")
INIT_SCALE = 0.01
LN2 = np.log(2.0)


@dataclass(frozen=True)
class RbmParameters:
    weights: np.ndarray  # (M, N)
    hidden_bias: np.ndarray  # (M,)
    field: str = "real"

    def __post_init__(self):
        if self.field not in FIELDS:
            raise ParameterError(f"unknown field {self.field!r}")
        dtype = float if self.field == "real" else complex
        w = np.array(self.weights, dtype=dtype)
        b = np.array(self.hidden_bias, dtype=dtype)
        if w.ndim != 2 or b.shape != (w.shape[0],):
            raise DimensionError(f"inconsistent shapes W{w.shape}, b{b.shape}")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
            raise NumericOverflowError("RBM parameters contain non-finite entries")
        w.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "hidden_bias", b)

    @property
    def n_visible(self) -> int:
        return self.weights.shape[1]

    @property
    def n_hidden(self) -> int:
        return self.weights.shape[0]

    @property
    def alpha(self) -> float:
        return self.n_hidden / self.n_visible

    @property
    def n_params(self) -> int:
        return self.weights.size + self.hidden_bias.size

    def vector(self) -> np.ndarray:
        """All parameters as one vector (W row-major, then b), in the parameter field."""
        return np.concatenate([self.weights.ravel(), self.hidden_bias])

    @classmethod
    def from_vector(cls, vec, n_visible: int, field: str) -> "RbmParameters":
        vec = np.asarray(vec)
        n_hidden = vec.size // (n_visible + 1)
        w = vec[: n_hidden * n_visible].reshape(n_hidden, n_visible)
        return cls(w, vec[n_hidden * n_visible :], field)


def init_random(
    n_visible: int, alpha: int, field: str = "real", seed: int = 0, scale: float = INIT_SCALE
) -> RbmParameters:
    """I.i.d. Gaussian initialization, std ``scale`` per real component."""
    if n_visible < 1 or alpha < 1 or int(alpha) != alpha:
        raise ParameterError("need n_visible >= 1 and a positive integer alpha")
    if field not in FIELDS:
        raise ParameterError(f"unknown field {field!r}")
    rng = np.random.default_rng(seed)
    m = int(alpha) * n_visible
    shape = (m * n_visible + m,)
    vec = rng.normal(0.0, scale, size=shape)
    if field == "complex":
        vec = vec + 1j * rng.normal(0.0, scale, size=shape)
    return RbmParameters.from_vector(vec, n_visible, field)


def logcosh(z):
    """Overflow-safe log(cosh(z)) for real or complex input.

    Uses z' + log((1 + exp(-2 z')) / 2) with z' = z * sign(Re z), so the
    exponential never grows. The complex branch is the principal log.
    """
    z = np.asarray(z)
    sign = np.where(np.real(z) < 0, -1.0, 1.0)
    zp = z * sign
    return zp + np.log1p(np.exp(-2.0 * zp)) - LN2


def logcosh_and_tanh(z):
    """Real part of logcosh, phase of cosh, and tanh, in real arithmetic.

    Training hot path. Returns ``(log_abs, phase, tanh)``; ``phase`` is None for
    real input. With q = exp(-2|x|) for z = x + iy:

        log|cosh z| = |x| - ln 2 + log(1 + q^2 + 2q cos 2y) / 2
        arg cosh z  = atan2(tanh(x) sin y, cos y)
        tanh z      = (sgn(x)(1 - q^2) + 2iq sin 2y) / (1 + q^2 + 2q cos 2y)

    ``log_abs + 1j * phase`` equals ``logcosh(z)`` modulo 2*pi*i.
    """
    x = np.real(z)
    ax = np.abs(x)
    q = np.exp(-2.0 * ax)
    sgn = np.where(x < 0, -1.0, 1.0)
    if not np.iscomplexobj(z):
        return ax - LN2 + np.log1p(q), None, sgn * (1.0 - q) / (1.0 + q)
    y = np.imag(z)
    sy, cy = np.sin(y), np.cos(y)
    den = (1.0 - q) ** 2 + 4.0 * q * cy * cy
    log_abs = ax - LN2 + 0.5 * np.log(den)
    phase = np.arctan2(sgn * (1.0 - q) * sy, (1.0 + q) * cy)
    t = (sgn * (1.0 - q * q) + 4j * q * sy * cy) / den
    return log_abs, phase, t


def _as_spins(params, config):
    if isinstance(config, SpinConfiguration):
        x = config.spins
    else:
        x = np.asarray(config, dtype=float)
    if x.shape[-1] != params.n_visible:
        raise DimensionError(f"configuration has {x.shape[-1]} sites, RBM expects {params.n_visible}")
    return x


def preactivations(params: RbmParameters, spins: np.ndarray) -> np.ndarray:
    return spins @ params.weights.T + params.hidden_bias


def log_psi(params: RbmParameters, config) -> complex | float:
    with np.errstate(all="ignore"):
        theta = preactivations(params, _as_spins(params, config))
        value = logcosh(theta).sum(axis=-1)
    if not np.all(np.isfinite(value)):
        raise NumericOverflowError("log_psi is not finite")
    return value if np.ndim(value) else value.item()


def log_psi_batch(params: RbmParameters, spins: np.ndarray) -> np.ndarray:
    """log psi for each row of a (K, N) array of +-1 spins."""
    return np.asarray(log_psi(params, spins))


def psi_vector(params: RbmParameters, basis: HilbertBasis) -> tuple[np.ndarray, float]:
    """Unnormalized amplitudes over the whole basis, shifted by the max real log.

    Returns ``(psi, c)`` with ``psi[x] = exp(log_psi(x) - c)``.
    """
    if basis.n_sites > MAX_SITES:
        raise CapacityError(f"{basis.n_sites} sites exceeds the full-basis limit of {MAX_SITES}")
    if basis.n_sites != params.n_visible:
        raise DimensionError("basis and RBM disagree on the number of sites")
    logs = log_psi_batch(params, basis.configurations())
    c = float(np.max(logs.real))
    return np.exp(logs - c), c


def grad_log_psi(params: RbmParameters, config) -> RbmParameters:
    """d log psi / d theta, shaped like the parameters (holomorphic for complex)."""
    x = _as_spins(params, config)
    t = np.tanh(preactivations(params, x))
    if not np.all(np.isfinite(t)):
        raise NumericOverflowError("tanh of pre-activation is not finite")
    return RbmParameters(np.outer(t, x), t, params.field)


@dataclass(frozen=True)
class FlatWeightVector:
    values: np.ndarray
    n_visible: int
    n_hidden: int
    field: str
    ordering: str = "W row-major (hidden outer, visible inner), then b"

    @property
    def column_names(self) -> list[str]:
        return weight_column_names(self.n_hidden, self.n_visible)


def weight_column_names(n_hidden: int, n_visible: int) -> list[str]:
    names = [f"W_{i}_{j}" for i in range(n_hidden) for j in range(n_visible)]
    return names + [f"b_{i}" for i in range(n_hidden)]


def flatten(params: RbmParameters) -> FlatWeightVector:
    """Real weight vector for weight-space analysis (real parts only for complex RBMs)."""
    values = np.ascontiguousarray(params.vector().real, dtype=float)
    return FlatWeightVector(values, params.n_visible, params.n_hidden, params.field)


def unflatten(flat: FlatWeightVector) -> RbmParameters:
    """Inverse of ``flatten``; for complex RBMs the imaginary parts are zero."""
    return RbmParameters.from_vector(flat.values, flat.n_visible, flat.field)
