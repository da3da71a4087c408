"""PCA of sweep weight matrices and phase-transition localization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import NoInteriorExtremumError, ParameterError


@dataclass(frozen=True)
class PcaResult:
    mean: np.ndarray
    components: np.ndarray  # (k, P), orthonormal rows
    explained_variance: np.ndarray
    projections: np.ndarray  # (n, k)

    @property
    def k(self) -> int:
        return self.components.shape[0]


@dataclass(frozen=True)
class TransitionEstimate:
    coupling_at_extremum: float
    component_index: int
    extremum_kind: str
    curve: np.ndarray
    margin: float
    orientation: str = "as-computed"  # or "negated"
    grid_index: int = -1

    def to_dict(self) -> dict:
        return {
            "coupling_at_extremum": self.coupling_at_extremum,
            "component_index": self.component_index,
            "extremum_kind": self.extremum_kind,
            "margin": self.margin,
            "orientation": self.orientation,
            "grid_index": self.grid_index,
        }


def pca(weights, k: int = 3) -> PcaResult:
    """Mean-centred PCA via SVD.

    Component signs are fixed so the first row projects nonnegatively onto
    every component (falling back to the second row when the first projection
    is zero).
    """
    x = np.asarray(weights, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ParameterError("need a 2-D weight matrix with at least two rows")
    n, p = x.shape
    if not 1 <= k <= min(n - 1, p):
        raise ParameterError(f"k={k} outside [1, {min(n - 1, p)}]")
    mean = x.mean(axis=0)
    centred = x - mean
    _, s, vt = np.linalg.svd(centred, full_matrices=False)
    components = vt[:k].copy()
    variance = s[:k] ** 2 / (n - 1)
    proj = centred @ components.T
    scale = np.abs(centred).max() if centred.size else 0.0
    tiny = 1e-12 * max(scale, 1e-300)
    for j in range(k):
        ref = proj[0, j] if abs(proj[0, j]) > tiny else proj[1, j]
        if ref < 0:
            components[j] *= -1
            proj[:, j] *= -1
    return PcaResult(mean, components, variance, proj)


def _interior_minimum(curve):
    i = int(np.argmin(curve))
    if i in (0, len(curve) - 1):
        return None
    others = [curve[0], curve[-1]]
    others += [curve[j] for j in range(1, len(curve) - 1)
               if j != i and curve[j] <= curve[j - 1] and curve[j] <= curve[j + 1]]
    return i, float(min(others) - curve[i])


def detect_transition(result: PcaResult, couplings, component_index: int = 1) -> TransitionEstimate:
    """Locate the interior global minimum of one principal-component curve.

    If the minimum of the sign-fixed curve sits at an endpoint, the negated
    curve is tried too; the orientation used is reported. Raises
    ``NoInteriorExtremumError`` if neither orientation has an interior minimum.
    """
    couplings = np.asarray(getattr(couplings, "couplings", couplings), dtype=float)
    if not 1 <= component_index <= result.k:
        raise ParameterError(f"component_index {component_index} outside [1, {result.k}]")
    curve = result.projections[:, component_index - 1]
    if len(curve) != len(couplings):
        raise ParameterError("curve and grid lengths differ")
    if len(curve) >= 3:
        for orientation, c in (("as-computed", curve), ("negated", -curve)):
            found = _interior_minimum(c)
            if found is not None:
                i, margin = found
                return TransitionEstimate(
                    float(couplings[i]), component_index, "minimum", c.copy(), margin, orientation, i
                )
    raise NoInteriorExtremumError(f"no interior extremum in PC{component_index}")


def export_projection_tracks(result: PcaResult, couplings) -> tuple[list[str], np.ndarray]:
    """Header and (n, 1 + k) table: coupling, PC1..PCk."""
    couplings = np.asarray(getattr(couplings, "couplings", couplings), dtype=float)
    header = ["coupling"] + [f"pc{j + 1}" for j in range(result.k)]
    return header, np.column_stack([couplings, result.projections])


def select_weight_columns(header, weights, include_bias: bool = True):
    """Drop the hidden-bias columns (``b_*``) when ``include_bias`` is false."""
    weights = np.asarray(weights, dtype=float)
    if include_bias:
        return list(header), weights
    keep = [i for i, name in enumerate(header) if not name.startswith("b_")]
    if not keep:
        raise ParameterError("no weight columns left after dropping biases")
    return [header[i] for i in keep], weights[:, keep]
