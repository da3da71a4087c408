"""Training across a coupling grid: independent runs and adiabatic fine-tuning chains."""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from .exceptions import IncompleteSweepError, InvalidSystemError, ParameterError
from .rbm import RbmParameters, flatten, init_random
from .spin_systems import HamiltonianOperator, build_j1j2, build_tfim, exact_ground_state
from .trainer import TrainingConfig, TrainingRecord, train

log = logging.getLogger(__name__)

MODELS = ("tfim", "j1j2")
STRATEGIES = ("independent", "adiabatic-forward", "adiabatic-backward")

# Architecture and grid defaults per model.
MODEL_DEFAULTS = {
    "tfim": dict(n_sites=8, fixed=-1.0, alpha=1, field="real", init_scale=0.01, start=0.0, stop=3.0, step=0.025),
    "j1j2": dict(n_sites=12, fixed=1.0, alpha=2, field="complex", init_scale=0.01, start=0.0, stop=1.0, step=0.01),
}


@dataclass(frozen=True)
class SweepGrid:
    """Coupling grid for one model.

    For ``tfim`` the couplings are fields h and ``fixed`` is J; for ``j1j2``
    the couplings are ratios J2/J1 and ``fixed`` is J1.
    """

    model: str
    couplings: tuple
    n_sites: int
    fixed: float
    boundary: str = "periodic"

    def __post_init__(self):
        if self.model not in MODELS:
            raise InvalidSystemError(f"unknown model {self.model!r}")
        c = tuple(float(x) for x in self.couplings)
        if not c:
            raise ParameterError("grid is empty")
        diffs = np.diff(c)
        if len(c) > 1 and (np.any(diffs <= 0) or np.ptp(diffs) > 1e-12):
            raise ParameterError("grid must be strictly increasing with a uniform step")
        object.__setattr__(self, "couplings", c)

    @classmethod
    def from_range(cls, model, start=None, stop=None, step=None, *, n_sites=None, fixed=None, boundary="periodic"):
        d = MODEL_DEFAULTS[model]
        start = d["start"] if start is None else start
        stop = d["stop"] if stop is None else stop
        step = d["step"] if step is None else step
        if stop < start or step <= 0:
            raise ParameterError("need start <= stop and step > 0")
        n = int(round((stop - start) / step)) + 1
        couplings = start + step * np.arange(n)
        return cls(
            model,
            tuple(couplings),
            d["n_sites"] if n_sites is None else n_sites,
            d["fixed"] if fixed is None else fixed,
            boundary,
        )

    def __len__(self):
        return len(self.couplings)

    def hamiltonian(self, coupling: float) -> HamiltonianOperator:
        if self.model == "tfim":
            return build_tfim(self.n_sites, self.fixed, coupling, self.boundary)
        return build_j1j2(self.n_sites, self.fixed, coupling * self.fixed, self.boundary)


@dataclass
class SweepResult:
    grid: SweepGrid
    strategy: str
    records: list
    flat_weights: np.ndarray | None
    manifest: dict = field(default_factory=dict)
    chain_order: list = field(default_factory=list)

    @property
    def failed_couplings(self):
        return [r.coupling for r in self.records if not r.ok]


def _manifest(grid, strategy, cfg, base_seed, alpha, field_):
    inputs = {
        "model": grid.model,
        "n_sites": grid.n_sites,
        "fixed_coupling": grid.fixed,
        "boundary": grid.boundary,
        "couplings": list(grid.couplings),
        "strategy": strategy,
        "alpha": alpha,
        "field": field_,
        "training": asdict(cfg),
        "base_seed": base_seed,
    }
    blob = json.dumps(inputs, sort_keys=True, separators=(",", ":")).encode()
    return {"inputs": inputs, "content_hash": hashlib.sha256(blob).hexdigest()}


def _architecture(grid, alpha, field_):
    d = MODEL_DEFAULTS[grid.model]
    return (d["alpha"] if alpha is None else alpha), (d["field"] if field_ is None else field_)


def _not_run(coupling, exact_energy=float("nan"), steps=0):
    return TrainingRecord(coupling, np.full(steps + 1, np.nan), None, exact_energy, status="not-run")


def _finish(grid, strategy, records, manifest, order):
    result = SweepResult(grid, strategy, records, None, manifest, order)
    if not result.failed_couplings:
        result.flat_weights = collect_flat_weights(result)
    return result


def run_independent(grid: SweepGrid, cfg: TrainingConfig, base_seed: int = 0, *, alpha=None, field=None) -> SweepResult:
    """Train every grid point from its own random initialization (seed base_seed + k)."""
    alpha, field_ = _architecture(grid, alpha, field)
    records = []
    for k, coupling in enumerate(grid.couplings):
        op = grid.hamiltonian(coupling)
        exact = exact_ground_state(op)
        params = init_random(grid.n_sites, alpha, field_, base_seed + k, cfg.init_scale)
        rec = train(params, op, cfg, exact, coupling)
        log.info("independent h=%.4f error=%.3e infid=%.3e", coupling, rec.energy_error, rec.infidelity)
        records.append(rec)
    manifest = _manifest(grid, "independent", cfg, base_seed, alpha, field_)
    return _finish(grid, "independent", records, manifest, list(range(len(grid))))


def run_adiabatic(
    grid: SweepGrid,
    cfg: TrainingConfig,
    start: str = "forward",
    base_seed: int = 0,
    *,
    alpha=None,
    field=None,
    initial: RbmParameters | None = None,
) -> SweepResult:
    """Fine-tune along the grid, warm-starting each point from its neighbour.

    ``start="forward"`` begins at the smallest coupling, ``"backward"`` at the
    largest. The first point is randomly initialized with ``base_seed`` unless
    ``initial`` is given. A failure truncates the chain.
    """
    if start not in ("forward", "backward"):
        raise ParameterError(f"start must be 'forward' or 'backward', got {start!r}")
    alpha, field_ = _architecture(grid, alpha, field)
    strategy = f"adiabatic-{start}"
    order = list(range(len(grid)))
    if start == "backward":
        order.reverse()

    params = initial if initial is not None else init_random(grid.n_sites, alpha, field_, base_seed, cfg.init_scale)
    records: list = [None] * len(grid)
    broken = False
    for k in order:
        coupling = grid.couplings[k]
        if broken:
            records[k] = _not_run(coupling, steps=cfg.steps)
            continue
        op = grid.hamiltonian(coupling)
        rec = train(params, op, cfg, exact_ground_state(op), coupling)
        records[k] = rec
        if rec.ok:
            params = rec.final_params
            log.debug("%s h=%.4f error=%.3e", strategy, coupling, rec.energy_error)
        else:
            log.warning("%s chain broken at coupling %s", strategy, coupling)
            broken = True
    manifest = _manifest(grid, strategy, cfg, base_seed, alpha, field_)
    return _finish(grid, strategy, records, manifest, order)


def run_sweep(grid: SweepGrid, cfg: TrainingConfig, strategy: str, base_seed: int = 0, **kw) -> SweepResult:
    if strategy == "independent":
        return run_independent(grid, cfg, base_seed, **kw)
    if strategy in ("adiabatic-forward", "adiabatic-backward"):
        return run_adiabatic(grid, cfg, strategy.split("-")[1], base_seed, **kw)
    raise ParameterError(f"unknown strategy {strategy!r}")


def collect_flat_weights(result: SweepResult) -> np.ndarray:
    """(grid points x P) matrix of flattened final weights, grid order."""
    missing = result.failed_couplings
    if missing:
        raise IncompleteSweepError(missing)
    return np.vstack([flatten(r.final_params).values for r in result.records])
