"""Small dense complex-matrix layer: spin projectors, states and
Goldstein-Page quasi-probabilities ``Re Tr(P_n ... P_1 rho)``.

Matrices are plain ``numpy`` complex arrays. Validation happens once, when
a :class:`DensityState` or :class:`ProjectiveDecomposition` is built.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadSign, DimMismatch, NotHermitian, NotProjector, NotUnit, QuasiError
from .qdist import POS_TOL, OutcomeSpace, QuasiDistribution, Variable, make_distribution

MAX_DIM = 64

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def _as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimMismatch(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise DimMismatch(f"dimension {m.shape[0]} exceeds {MAX_DIM}")
    if not np.all(np.isfinite(m)):
        raise QuasiError("matrix entries must be finite")
    return m


def _unit(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != (3,) or abs(np.linalg.norm(a) - 1.0) > 1e-12:
        raise NotUnit(f"{a} is not a unit 3-vector")
    return a


def pauli_dot(a) -> np.ndarray:
    a = _unit(a)
    return a[0] * SIGMA_X + a[1] * SIGMA_Y + a[2] * SIGMA_Z


def spin_projector(a, s: int) -> np.ndarray:
    """``(1 + s a.sigma) / 2`` for ``s`` in {+1, -1}."""
    if s not in (1, -1):
        raise BadSign(f"spin sign must be +1 or -1, got {s}")
    return 0.5 * (np.eye(2) + s * pauli_dot(a))


def tensor(*ms) -> np.ndarray:
    """Kronecker product; row index of ``A (x) B`` is ``i_A * dim_B + i_B``."""
    out = np.eye(1, dtype=complex)
    for m in ms:
        m = np.asarray(m, dtype=complex)
        d0, d1 = out.shape[0] * m.shape[0], out.shape[1] * m.shape[1]
        out = (out[:, None, :, None] * m[None, :, None, :]).reshape(d0, d1)
    return out


def direction(polar: float, azimuth: float = 0.0) -> np.ndarray:
    return np.array(
        [np.sin(polar) * np.cos(azimuth), np.sin(polar) * np.sin(azimuth), np.cos(polar)]
    )


@dataclass(frozen=True, eq=False)
class DensityState:
    matrix: np.ndarray

    def __post_init__(self):
        m = _as_matrix(self.matrix)
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise NotHermitian("density matrix is not hermitian")
        if abs(np.trace(m) - 1.0) > 1e-12:
            raise QuasiError(f"density matrix has trace {np.trace(m)}")
        if np.min(np.linalg.eigvalsh(m)) < -1e-9:
            raise QuasiError("density matrix has a negative eigenvalue")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, psi) -> "DensityState":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))


def singlet() -> DensityState:
    """``(|up,down> - |down,up>) / sqrt(2)`` with ``|up>`` the +z eigenvector first in each factor."""
    return DensityState.pure(np.array([0, 1, -1, 0]) / np.sqrt(2))


def spin_up() -> DensityState:
    return DensityState.pure([1, 0])


def _check_projector(p: np.ndarray, tol: float = 1e-10) -> None:
    if np.max(np.abs(p - p.conj().T)) > tol:
        raise NotProjector("projector is not hermitian")
    if np.max(np.abs(p @ p - p)) > tol:
        raise NotProjector("projector is not idempotent")


@dataclass(frozen=True, eq=False)
class ProjectiveDecomposition:
    """Orthogonal projectors resolving the identity, one per alternative."""

    projectors: tuple[np.ndarray, ...]
    label: str = "x"

    def __post_init__(self):
        ps = tuple(_as_matrix(p) for p in self.projectors)
        if len(ps) < 2:
            raise QuasiError("a decomposition needs at least two alternatives")
        dim = ps[0].shape[0]
        for p in ps:
            if p.shape[0] != dim:
                raise DimMismatch("projectors in one decomposition differ in dimension")
            _check_projector(p)
        if np.max(np.abs(sum(ps) - np.eye(dim))) > 1e-12:
            raise NotProjector("projectors do not sum to the identity")
        object.__setattr__(self, "projectors", ps)

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def __len__(self):
        return len(self.projectors)


def spin_decomposition(a, label: str = "s") -> ProjectiveDecomposition:
    """Spin along ``a``: alternative 0 is s=+1, alternative 1 is s=-1."""
    return ProjectiveDecomposition((spin_projector(a, 1), spin_projector(a, -1)), label)


def local(decomp: ProjectiveDecomposition, site: int, dims: Sequence[int]) -> ProjectiveDecomposition:
    """Lift a decomposition on factor ``site`` to the full tensor product."""
    if decomp.dim != dims[site]:
        raise DimMismatch(f"factor {site} has dimension {dims[site]}, decomposition {decomp.dim}")
    before = np.eye(int(np.prod(dims[:site], dtype=int)))
    after = np.eye(int(np.prod(dims[site + 1 :], dtype=int)))
    return ProjectiveDecomposition(
        tuple(tensor(before, p, after) for p in decomp.projectors), decomp.label
    )


@dataclass(frozen=True, eq=False)
class ProjectorString:
    """Class operator ``C = P_n ... P_1``; ``factors[0]`` is ``P_1`` and acts first on the state."""

    factors: tuple[np.ndarray, ...]

    def __post_init__(self):
        fs = tuple(_as_matrix(f) for f in self.factors)
        if not fs:
            raise QuasiError("empty projector string")
        for f in fs:
            if f.shape != fs[0].shape:
                raise DimMismatch("string factors differ in dimension")
            _check_projector(f)
        object.__setattr__(self, "factors", fs)

    @property
    def dim(self) -> int:
        return self.factors[0].shape[0]

    def operator(self) -> np.ndarray:
        out = np.eye(self.dim, dtype=complex)
        for f in self.factors:
            out = f @ out
        return out


def class_trace(c: ProjectorString, rho: DensityState) -> complex:
    """``Tr(C rho)`` as a complex number; its real part is the quasi-probability."""
    if c.dim != rho.dim:
        raise DimMismatch(f"string acts on dimension {c.dim}, state has {rho.dim}")
    return complex(np.trace(c.operator() @ rho.matrix))


def gp_quasiprob(
    decomps: Sequence[ProjectiveDecomposition],
    rho: DensityState,
    order: Sequence[int] | None = None,
) -> QuasiDistribution:
    """Quasi-probability ``Re Tr(P^{o(n)} ... P^{o(1)} rho)`` over all outcome tuples.

    Variables of the result follow ``decomps``. ``order`` lists
    decomposition indices in the order they act on the state, so
    ``order[0]`` sits next to ``rho``. Defaults to ``decomps`` order.
    """
    decomps = list(decomps)
    n = len(decomps)
    if order is None:
        order = list(range(n))
    order = [int(k) for k in order]
    if sorted(order) != list(range(n)):
        raise QuasiError(f"order {order} is not a permutation of {n} decompositions")
    for d in decomps:
        if d.dim != rho.dim:
            raise DimMismatch(f"decomposition of dimension {d.dim} against state of dimension {rho.dim}")

    labels = [d.label for d in decomps]
    if len(set(labels)) < n:
        labels = [f"{l}{k + 1}" for k, l in enumerate(labels)]
    space = OutcomeSpace(tuple(Variable(l, len(d)) for l, d in zip(labels, decomps)))
    # walk outcomes of the factors nearest rho in the outer loops and reuse partial products
    shape = [len(decomps[k]) for k in order]
    partial = {(): rho.matrix}
    out = np.empty(shape)
    for idx in itertools.product(*(range(d) for d in shape)):
        for depth in range(1, n + 1):
            key = idx[:depth]
            if key not in partial:
                partial[key] = decomps[order[depth - 1]].projectors[idx[depth - 1]] @ partial[idx[: depth - 1]]
        out[idx] = np.trace(partial[idx]).real
    values = np.transpose(out, np.argsort(order)).ravel()
    return make_distribution(space, values)


def linear_positivity(q: QuasiDistribution, tol: float = POS_TOL) -> bool:
    """Goldstein-Page condition: every cell is nonnegative."""
    return bool(np.all(q.values >= -tol))
