"""Parity (correlation-function) expansion of binary quasi-distributions.

For n spin variables the distribution is written as

    q(s) = 2**-n * sum_S K_S * prod_{i in S} s_i

where ``K_S`` is the expectation of the product of the spins in ``S``.
Singletons are the means, pairs the two-point correlators, and so on.
The transform is a Walsh-Hadamard transform applied along every axis.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import BadIndex, MissingCoefficient, NotBinary, NotNormalized, QuasiError
from .qdist import Marginal, OutcomeSpace, QuasiDistribution, make_distribution

MAX_N = 16

_H = np.array([[1.0, 1.0], [1.0, -1.0]])


def _mask_index(n: int, subset: Iterable[int]) -> int:
    idx = 0
    for i in subset:
        idx |= 1 << (n - 1 - i)
    return idx


def _hadamard(t: np.ndarray) -> np.ndarray:
    for axis in range(t.ndim):
        t = np.moveaxis(np.tensordot(_H, t, axes=([1], [axis])), 0, axis)
    return t


@dataclass(frozen=True, eq=False)
class ParityCoefficients:
    """Dense coefficients ``K_S`` for every subset ``S`` of ``n`` spins.

    Storage order matches a row-major ``(2,)*n`` tensor whose axis ``i`` is
    1 when variable ``i`` belongs to ``S``. Indexing uses 0-based variables.
    """

    n: int
    coeff: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise QuasiError(f"n must be in [1, {MAX_N}], got {self.n}")
        c = np.array(self.coeff, dtype=float).ravel()
        if c.size != 2**self.n:
            raise QuasiError(f"expected {2**self.n} coefficients, got {c.size}")
        c.setflags(write=False)
        object.__setattr__(self, "coeff", c)

    def __getitem__(self, subset) -> float:
        if isinstance(subset, int):
            subset = (subset,)
        return float(self.coeff[_mask_index(self.n, subset)])

    @classmethod
    def from_mapping(cls, n: int, values: Mapping[tuple[int, ...], float]) -> "ParityCoefficients":
        """Build from ``{subset: K_S}``; subsets left out are zero and K_empty defaults to 1."""
        c = np.zeros(2**n)
        c[0] = 1.0
        for subset, v in values.items():
            subset = tuple(subset)
            if any(not 0 <= i < n for i in subset) or len(set(subset)) != len(subset):
                raise BadIndex(f"bad subset {subset} for n={n}")
            c[_mask_index(n, subset)] = v
        return cls(n, c)

    def items(self):
        for k in range(self.n + 1):
            for s in itertools.combinations(range(self.n), k):
                yield s, self[s]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "coeffs": [
                {"subset": [i + 1 for i in s], "value": v} for s, v in self.items() if v != 0.0
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "ParityCoefficients":
        n = int(obj["n"])
        values = {}
        for entry in obj["coeffs"]:
            s = tuple(int(i) - 1 for i in entry["subset"])
            values[s] = float(entry["value"])
        if () not in values:
            raise MissingCoefficient("the empty-subset (normalization) coefficient is required")
        return cls.from_mapping(n, values)


def load_coefficients(path) -> ParityCoefficients:
    with open(path) as fh:
        return ParityCoefficients.from_json(json.load(fh))


def expand(q: QuasiDistribution) -> ParityCoefficients:
    if not q.space.is_binary():
        raise NotBinary(f"parity expansion needs binary variables, got arities {q.space.shape}")
    n = q.space.n
    if n > MAX_N:
        raise QuasiError(f"n={n} exceeds {MAX_N}")
    return ParityCoefficients(n, _hadamard(q.table.copy()).ravel())


def reconstruct(c: ParityCoefficients, norm_tol: float = 1e-12) -> QuasiDistribution:
    if abs(c.coeff[0] - 1.0) > norm_tol:
        raise NotNormalized(c.coeff[0], norm_tol)
    t = _hadamard(c.coeff.reshape((2,) * c.n)) / 2**c.n
    return make_distribution(OutcomeSpace.binary(c.n), t.ravel(), norm_tol)


def pair_marginal(c: ParityCoefficients, i: int, j: int) -> Marginal:
    """Two-variable marginal  (1 + B_i s_i + B_j s_j + C_ij s_i s_j) / 4."""
    if i == j or not (0 <= i < c.n and 0 <= j < c.n):
        raise BadIndex(f"need two distinct indices below {c.n}, got {i}, {j}")
    lo, hi = sorted((i, j))
    b_lo, b_hi, cc = c[lo], c[hi], c[(lo, hi)]
    s = np.array([1.0, -1.0])
    table = (1 + b_lo * s[:, None] + b_hi * s[None, :] + cc * np.outer(s, s)) / 4
    space = OutcomeSpace.binary(c.n).sub((lo, hi))
    return Marginal((lo, hi), make_distribution(space, table.ravel()))


def correlator(q: QuasiDistribution, subset: Iterable[int]) -> float:
    """Expectation of the product of the spins in ``subset``."""
    if not q.space.is_binary():
        raise NotBinary("correlators need binary variables")
    subset = tuple(subset)
    signs = np.ones(q.space.shape)
    s = np.array([1.0, -1.0])
    for i in subset:
        shape = [1] * q.space.n
        shape[i] = 2
        signs = signs * s.reshape(shape)
    return float(np.sum(signs * q.table))
