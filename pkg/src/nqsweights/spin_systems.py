"""Spin-1/2 chains: basis conventions, Pauli-string Hamiltonians, exact ground states.

Basis convention: configuration index ``bits`` encodes site ``i`` in bit ``i``
(site 0 is the least significant bit). Bit 1 is spin up (s_i = +1, the +1
eigenstate of Z), bit 0 is spin down (s_i = -1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .exceptions import CapacityError, DimensionError, InvalidSystemError, SolverError

MAX_SITES = 16
DEGENERACY_TOL = 1e-10
DENSE_MAX_SITES = 10
BOUNDARIES = ("periodic", "open")


@dataclass(frozen=True)
class SpinConfiguration:
    n_sites: int
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < 2**self.n_sites:
            raise DimensionError(f"bits={self.bits} out of range for {self.n_sites} sites")

    @classmethod
    def from_spins(cls, spins):
        spins = np.asarray(spins)
        bits = int(sum(1 << i for i, s in enumerate(spins) if s > 0))
        return cls(len(spins), bits)

    @property
    def spins(self) -> np.ndarray:
        return np.array([1.0 if (self.bits >> i) & 1 else -1.0 for i in range(self.n_sites)])


@dataclass(frozen=True)
class HilbertBasis:
    n_sites: int

    def __post_init__(self):
        if self.n_sites < 1:
            raise InvalidSystemError("n_sites must be positive")

    @property
    def dimension(self) -> int:
        return 2**self.n_sites

    def configurations(self) -> np.ndarray:
        """All spin configurations as a (2^N, N) array of +-1, ascending index order."""
        return spin_matrix(self.n_sites)


def spin_matrix(n_sites: int) -> np.ndarray:
    idx = np.arange(2**n_sites)
    bits = (idx[:, None] >> np.arange(n_sites)[None, :]) & 1
    return 2.0 * bits - 1.0


@dataclass(frozen=True)
class HamiltonianOperator:
    """Weighted sum of Pauli strings on ``n_sites`` spins.

    ``terms`` holds ``(coefficient, string)`` pairs where ``string[i]`` is the
    Pauli symbol acting on site ``i``.
    """

    n_sites: int
    terms: tuple = ()
    boundary: str = "periodic"
    _cache: dict = field(default_factory=dict, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.boundary not in BOUNDARIES:
            raise InvalidSystemError(f"unknown boundary {self.boundary!r}")
        terms = tuple((float(c), str(s)) for c, s in self.terms)
        for _, s in terms:
            if len(s) != self.n_sites or set(s) - set("IXYZ"):
                raise InvalidSystemError(f"bad operator string {s!r}")
        object.__setattr__(self, "terms", terms)

    @property
    def dimension(self) -> int:
        return 2**self.n_sites

    def _term_action(self, string):
        """Return (target index, amplitude) arrays: H_term|x> = amp(x) |target(x)>."""
        idx = np.arange(self.dimension)
        flip = 0
        amp = np.ones(self.dimension, dtype=complex)
        for site, p in enumerate(string):
            if p == "I":
                continue
            up = (idx >> site) & 1
            if p == "Z":
                amp *= 2 * up - 1
            elif p == "X":
                flip |= 1 << site
            else:  # Y|up> = i|down>, Y|down> = -i|up>
                flip |= 1 << site
                amp *= 1j * (2 * up - 1)
        return idx ^ flip, amp

    def to_sparse(self) -> sp.csr_matrix:
        """Matrix in the computational basis (real, since Y counts are even here)."""
        if "sparse" not in self._cache:
            _check_capacity(self.n_sites)
            dim = self.dimension
            rows, cols, data = [], [], []
            for coeff, string in self.terms:
                if coeff == 0.0:
                    continue
                target, amp = self._term_action(string)
                rows.append(target)
                cols.append(np.arange(dim))
                data.append(coeff * amp)
            if rows:
                data = np.concatenate(data)
                if np.abs(data.imag).max() > 0:
                    mat = sp.coo_matrix((data, (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim))
                else:
                    mat = sp.coo_matrix(
                        (data.real, (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
                    )
                mat = mat.tocsr()
                mat.sum_duplicates()
                mat.eliminate_zeros()
            else:
                mat = sp.csr_matrix((dim, dim))
            self._cache["sparse"] = mat
        return self._cache["sparse"]

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()


def _check_capacity(n_sites):
    if n_sites > MAX_SITES:
        raise CapacityError(f"{n_sites} sites exceeds the full-basis limit of {MAX_SITES}")


def _bonds(n_sites, distance, boundary):
    last = n_sites if boundary == "periodic" else n_sites - distance
    return [(i, (i + distance) % n_sites) for i in range(last)]


def _pauli_string(n_sites, ops):
    s = ["I"] * n_sites
    for site, p in ops.items():
        s[site] = p
    return "".join(s)


def build_tfim(n_sites: int, j: float, h: float, boundary: str = "periodic") -> HamiltonianOperator:
    """H = -J sum_i Z_i Z_{i+1} - h sum_i X_i."""
    if n_sites < 2:
        raise InvalidSystemError("TFIM needs at least 2 sites")
    if boundary not in BOUNDARIES:
        raise InvalidSystemError(f"unknown boundary {boundary!r}")
    terms = [(-j, _pauli_string(n_sites, {a: "Z", b: "Z"})) for a, b in _bonds(n_sites, 1, boundary)]
    terms += [(-h, _pauli_string(n_sites, {i: "X"})) for i in range(n_sites)]
    return HamiltonianOperator(n_sites, tuple(terms), boundary)


def build_j1j2(n_sites: int, j1: float, j2: float, boundary: str = "periodic") -> HamiltonianOperator:
    """H = J1 sum S_i.S_{i+1} + J2 sum S_i.S_{i+2} with S = sigma/2."""
    if n_sites < 4:
        raise InvalidSystemError("J1-J2 chain needs at least 4 sites")
    if boundary not in BOUNDARIES:
        raise InvalidSystemError(f"unknown boundary {boundary!r}")
    terms = []
    for coupling, distance in ((j1, 1), (j2, 2)):
        for a, b in _bonds(n_sites, distance, boundary):
            for p in "XYZ":
                terms.append((0.25 * coupling, _pauli_string(n_sites, {a: p, b: p})))
    return HamiltonianOperator(n_sites, tuple(terms), boundary)


def apply(op: HamiltonianOperator, state) -> np.ndarray:
    """H @ state, evaluated term by term without assembling a matrix."""
    state = np.asarray(state)
    if state.shape != (op.dimension,):
        raise DimensionError(f"state has shape {state.shape}, expected ({op.dimension},)")
    out = np.zeros(op.dimension, dtype=complex)
    for coeff, string in op.terms:
        target, amp = op._term_action(string)
        # target is a permutation of the basis, so fancy-index accumulation is safe
        out[target] += coeff * amp * state
    if not np.iscomplexobj(state) and not np.any(out.imag):
        return out.real
    return out


@dataclass(frozen=True)
class GroundStateSolution:
    energy: float
    amplitudes: np.ndarray
    subspace: np.ndarray  # (dim, d) orthonormal basis of the ground level
    residual: float = 0.0

    @property
    def degeneracy(self) -> int:
        return self.subspace.shape[1]


def exact_ground_state(op: HamiltonianOperator, method: str = "auto", n_eigs: int = 6) -> GroundStateSolution:
    """Lowest eigenpair of ``op`` plus the full (tolerance 1e-10) ground subspace.

    ``method`` is ``"dense"``, ``"lanczos"`` or ``"auto"`` (dense up to 10 sites).
    """
    _check_capacity(op.n_sites)
    dim = op.dimension
    if method == "auto":
        method = "dense" if op.n_sites <= DENSE_MAX_SITES else "lanczos"
    mat = op.to_sparse()
    if method == "dense":
        evals, evecs = np.linalg.eigh(mat.toarray())
    elif method == "lanczos":
        k = min(n_eigs, dim - 1)
        v0 = np.random.default_rng(0).standard_normal(dim)
        try:
            evals, evecs = spla.eigsh(mat, k=k, which="SA", v0=v0, tol=1e-13, maxiter=20 * dim)
        except spla.ArpackNoConvergence as exc:
            raise SolverError("Lanczos solve did not converge", residual=np.nan) from exc
        order = np.argsort(evals)
        evals, evecs = evals[order], evecs[:, order]
    else:
        raise ValueError(f"unknown method {method!r}")

    e0 = float(evals[0])
    in_ground = np.abs(evals - e0) <= DEGENERACY_TOL * max(1.0, abs(e0))
    subspace = np.array(evecs[:, in_ground])
    if np.isrealobj(mat.data):
        subspace = subspace.real
    subspace, _ = np.linalg.qr(subspace)
    ground = subspace[:, 0] / np.linalg.norm(subspace[:, 0])
    h_ground = mat @ ground
    # Rayleigh quotient: quadratic in the eigenvector error, tighter than the Ritz value
    e0 = float(np.vdot(ground, h_ground).real / np.vdot(ground, ground).real)
    residual = float(np.linalg.norm(h_ground - e0 * ground))
    if residual > 1e-9:
        raise SolverError(f"ground-state residual {residual:.3e} above 1e-9", residual=residual)
    return GroundStateSolution(e0, ground, subspace, residual)


def dense_ground_energy(op: HamiltonianOperator) -> float:
    return float(np.linalg.eigvalsh(op.to_dense())[0])
