"""Run configuration and the on-disk file set (CSV with 17 significant digits, JSON)."""

from __future__ import annotations

import csv
import hashlib
import json
import os
import tempfile
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .exceptions import NqsError
from .rbm import weight_column_names
from .sweep import MODEL_DEFAULTS, MODELS, STRATEGIES, SweepGrid, SweepResult
from .trainer import OPTIMIZERS, TrainingConfig

FLOAT_FORMAT = "{:.17g}"


class ConfigError(NqsError, ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved sweep configuration. ``None`` fields take the model default."""

    model: str = "tfim"
    n_sites: int | None = None
    fixed_coupling: float | None = None  # J for tfim, J1 for j1j2
    boundary: str = "periodic"
    grid_min: float | None = None
    grid_max: float | None = None
    grid_step: float | None = None
    alpha: int | None = None
    field: str | None = None
    init_scale: float | None = None
    optimizer: str = "adam"
    learning_rate: float = 0.01
    steps: int = 200
    strategy: str = "adiabatic-forward"
    seed: int = 0
    out: str = "runs/sweep"

    def resolved(self) -> "RunConfig":
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got {self.model!r}")
        d = MODEL_DEFAULTS[self.model]
        filled = replace(
            self,
            n_sites=d["n_sites"] if self.n_sites is None else int(self.n_sites),
            fixed_coupling=d["fixed"] if self.fixed_coupling is None else float(self.fixed_coupling),
            grid_min=d["start"] if self.grid_min is None else float(self.grid_min),
            grid_max=d["stop"] if self.grid_max is None else float(self.grid_max),
            grid_step=d["step"] if self.grid_step is None else float(self.grid_step),
            alpha=d["alpha"] if self.alpha is None else int(self.alpha),
            field=d["field"] if self.field is None else self.field,
            init_scale=d["init_scale"] if self.init_scale is None else float(self.init_scale),
        )
        filled.validate()
        return filled

    def validate(self):
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.optimizer not in OPTIMIZERS:
            raise ConfigError(f"optimizer must be one of {OPTIMIZERS}, got {self.optimizer!r}")
        if self.boundary not in ("periodic", "open"):
            raise ConfigError(f"boundary must be periodic or open, got {self.boundary!r}")
        if self.field not in ("real", "complex"):
            raise ConfigError(f"field must be real or complex, got {self.field!r}")
        if self.grid_step <= 0 or self.grid_max < self.grid_min:
            raise ConfigError("grid needs step > 0 and max >= min")
        if self.learning_rate <= 0 or self.steps < 1 or self.alpha < 1:
            raise ConfigError("learning rate, steps and alpha must be positive")
        if not self.init_scale >= 0:
            raise ConfigError("init_scale must be nonnegative")

    def grid(self) -> SweepGrid:
        return SweepGrid.from_range(
            self.model, self.grid_min, self.grid_max, self.grid_step,
            n_sites=self.n_sites, fixed=self.fixed_coupling, boundary=self.boundary,
        )

    def training(self) -> TrainingConfig:
        return TrainingConfig(self.learning_rate, self.steps, self.optimizer, self.seed, self.init_scale)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if "config" in data and isinstance(data["config"], dict):
            data = data["config"]  # a manifest.json
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)


def fmt(x) -> str:
    return FLOAT_FORMAT.format(float(x))


def coupling_label(c: float) -> str:
    return f"{c:.10g}"


def _atomic_write(path: Path, write):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            write(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, header, rows):
    def write(fh):
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])

    _atomic_write(path, write)


def write_matrix_csv(path, header, matrix):
    write_csv(path, header, ([float(v) for v in row] for row in np.asarray(matrix)))


def write_json(path, obj):
    _atomic_write(path, lambda fh: (json.dump(obj, fh, indent=2, sort_keys=True), fh.write("\n")))


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise NqsError(f"{path} is empty")
    return rows[0], rows[1:]


def read_matrix_csv(path) -> tuple[list[str], np.ndarray]:
    header, rows = read_csv(path)
    if not rows:
        raise NqsError(f"{path} has no data rows")
    if any(len(r) != len(header) for r in rows):
        raise NqsError(f"{path} is ragged")
    try:
        return header, np.array([[float(v) for v in r] for r in rows])
    except ValueError as exc:
        raise NqsError(f"{path} has non-numeric entries: {exc}") from exc


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


RESULTS_HEADER = [
    "coupling", "exact_energy", "initial_energy", "final_energy", "energy_error",
    "infidelity", "status", "failed_step",
]


def write_sweep(result: SweepResult, config: RunConfig, out_dir) -> dict:
    """Write results.csv, weights.csv, history_<coupling>.csv and manifest.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for r in result.records:
        h = r.energy_history
        rows.append([
            float(r.coupling), float(r.exact_energy), float(h[0]), float(h[-1]),
            float(r.energy_error), float(r.infidelity), r.status,
            "" if r.failed_step is None else r.failed_step,
        ])
    write_csv(out / "results.csv", RESULTS_HEADER, rows)

    for r in result.records:
        if r.status == "not-run":
            continue
        hist = [[i, float(e), float(abs(e - r.exact_energy))] for i, e in enumerate(r.energy_history)]
        write_csv(out / f"history_{coupling_label(r.coupling)}.csv", ["step", "energy", "energy_error"], hist)

    files = ["results.csv"]
    if result.flat_weights is not None:
        n = result.grid.n_sites
        m = result.flat_weights.shape[1] // (n + 1)
        write_matrix_csv(out / "weights.csv", weight_column_names(m, n), result.flat_weights)
        files.append("weights.csv")

    manifest = {
        "config": asdict(config),
        "inputs": result.manifest["inputs"],
        "content_hash": result.manifest["content_hash"],
        "strategy": result.strategy,
        "chain_order": [float(result.grid.couplings[k]) for k in result.chain_order],
        "failed_couplings": [float(c) for c in result.failed_couplings],
        "outputs_sha256": {name: file_sha256(out / name) for name in files},
    }
    write_json(out / "manifest.json", manifest)
    return manifest


def read_sweep_couplings(sweep_dir) -> np.ndarray:
    header, rows = read_csv(Path(sweep_dir) / "results.csv")
    return np.array([float(r[header.index("coupling")]) for r in rows])
