"""Quasi-probability distributions over finite product outcome spaces.

Values are stored densely, one entry per outcome tuple, in row-major order
with the last variable varying fastest. For binary spin variables, alphabet
index 0 stands for sigma = +1 and index 1 for sigma = -1.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BadPartition,
    BadSubset,
    CapExceeded,
    LengthMismatch,
    NegativeSingle,
    NotNormalized,
    QuasiError,
    SpaceMismatch,
)

CELL_CAP = 2**20
SUBSET_BUDGET = 2**16
NORM_TOL = 1e-12
POS_TOL = 1e-9

SPIN = (1, -1)


@dataclass(frozen=True)
class Variable:
    label: str
    arity: int


@dataclass(frozen=True)
class OutcomeSpace:
    variables: tuple[Variable, ...]
    cap: int = field(default=CELL_CAP, compare=False, repr=False)

    def __post_init__(self):
        vs = tuple(
            v if isinstance(v, Variable) else Variable(str(v[0]), int(v[1]))
            for v in self.variables
        )
        object.__setattr__(self, "variables", vs)
        if not vs:
            raise QuasiError("outcome space needs at least one variable")
        for v in vs:
            if v.arity < 2:
                raise QuasiError(f"variable {v.label!r} has arity {v.arity} < 2")
        if self.size > self.cap:
            raise CapExceeded(f"{self.size} cells exceeds cap {self.cap}")

    @classmethod
    def binary(cls, n: int, prefix: str = "s") -> "OutcomeSpace":
        return cls(tuple(Variable(f"{prefix}{k + 1}", 2) for k in range(n)))

    @classmethod
    def of(cls, arities: Iterable[int], labels: Sequence[str] | None = None) -> "OutcomeSpace":
        arities = list(arities)
        if labels is None:
            labels = [f"x{k + 1}" for k in range(len(arities))]
        return cls(tuple(Variable(l, int(d)) for l, d in zip(labels, arities)))

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(v.arity for v in self.variables)

    @property
    def size(self) -> int:
        return math.prod(self.shape)

    def is_binary(self) -> bool:
        return all(d == 2 for d in self.shape)

    def sub(self, subset: Sequence[int]) -> "OutcomeSpace":
        return OutcomeSpace(tuple(self.variables[i] for i in subset))

    def outcomes(self):
        """Iterate outcome index tuples in storage order."""
        return itertools.product(*(range(d) for d in self.shape))

    def to_json(self) -> dict:
        return {"variables": [{"label": v.label, "arity": v.arity} for v in self.variables]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "OutcomeSpace":
        return cls(tuple(Variable(str(v["label"]), int(v["arity"])) for v in obj["variables"]))


@dataclass(frozen=True, eq=False)
class QuasiDistribution:
    """A normalized real assignment over ``space``; entries may be negative."""

    space: OutcomeSpace
    values: np.ndarray
    norm_tol: float = field(default=NORM_TOL, repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=float).ravel()
        if vals.size != self.space.size:
            raise LengthMismatch(f"got {vals.size} values for {self.space.size} cells")
        if not np.all(np.isfinite(vals)):
            raise QuasiError("distribution values must be finite")
        total = math.fsum(vals)
        if abs(total - 1.0) > self.norm_tol:
            raise NotNormalized(total, self.norm_tol)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def table(self) -> np.ndarray:
        return self.values.reshape(self.space.shape)

    def __getitem__(self, outcome: Sequence[int]) -> float:
        return float(self.table[tuple(outcome)])

    def __len__(self):
        return self.values.size

    def to_json(self) -> dict:
        out = self.space.to_json()
        out["values"] = [float(v) for v in self.values]
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "QuasiDistribution":
        space = OutcomeSpace.from_json(obj)
        values = obj["values"]
        if not all(isinstance(v, (int, float)) for v in values):
            raise QuasiError("distribution values must be numbers")
        return make_distribution(space, values)


def make_distribution(space: OutcomeSpace, values, norm_tol: float = NORM_TOL) -> QuasiDistribution:
    return QuasiDistribution(space, np.asarray(values, dtype=float), norm_tol)


def uniform(space: OutcomeSpace) -> QuasiDistribution:
    return make_distribution(space, np.full(space.size, 1.0 / space.size))


def point_mass(space: OutcomeSpace, outcome: Sequence[int]) -> QuasiDistribution:
    vals = np.zeros(space.shape)
    vals[tuple(outcome)] = 1.0
    return make_distribution(space, vals.ravel())


def load_distribution(path) -> QuasiDistribution:
    with open(path) as fh:
        obj = json.load(fh, parse_constant=_reject_constant)
    return QuasiDistribution.from_json(obj)


def _reject_constant(name):
    raise QuasiError(f"non-finite number {name} in JSON input")


@dataclass(frozen=True)
class Marginal:
    subset: tuple[int, ...]
    dist: QuasiDistribution

    @property
    def table(self) -> np.ndarray:
        return self.dist.table


def check_subset(space: OutcomeSpace, subset: Iterable[int]) -> tuple[int, ...]:
    try:
        idx = tuple(sorted(int(i) for i in subset))
    except (TypeError, ValueError):
        raise BadSubset(f"subset {subset!r} is not a list of indices") from None
    if not idx:
        raise BadSubset("subset must be nonempty")
    if len(set(idx)) != len(idx):
        raise BadSubset(f"subset {idx} has repeated indices")
    if idx[0] < 0 or idx[-1] >= space.n:
        raise BadSubset(f"subset {idx} out of range for {space.n} variables")
    return idx


def marginal_table(q: QuasiDistribution, subset: tuple[int, ...]) -> np.ndarray:
    drop = tuple(k for k in range(q.space.n) if k not in subset)
    return q.table.sum(axis=drop) if drop else q.table.copy()


def marginalize(q: QuasiDistribution, subset: Iterable[int]) -> Marginal:
    idx = check_subset(q.space, subset)
    table = marginal_table(q, idx)
    # sums of many terms can drift a few ulps; tolerance scales with cell count
    tol = max(NORM_TOL, 4 * np.finfo(float).eps * q.space.size)
    return Marginal(idx, make_distribution(q.space.sub(idx), table.ravel(), tol))


def is_probability(q: QuasiDistribution, tol: float = POS_TOL) -> bool:
    if tol < 0:
        raise QuasiError("tol must be nonnegative")
    v = q.values
    return bool(np.all(v >= -tol) and np.all(v <= 1 + tol))


def _table_is_probability(t: np.ndarray, tol: float) -> bool:
    return bool(np.all(t >= -tol) and np.all(t <= 1 + tol))


def positive_marginals(
    q: QuasiDistribution,
    tol: float = POS_TOL,
    max_subset_size: int | None = None,
    budget: int = SUBSET_BUDGET,
) -> list[tuple[int, ...]]:
    """Maximal variable subsets whose marginals are probabilities.

    Every subset of a positive marginal is itself positive, so the full
    positive family is the downward closure of the returned list. Subsets
    are enumerated level by level; a k-subset is only tested when all of
    its (k-1)-subsets passed.
    """
    n = q.space.n
    top = n if max_subset_size is None else min(n, max_subset_size)
    total = sum(math.comb(n, k) for k in range(1, top + 1))
    if total > budget:
        raise CapExceeded(f"{total} subsets to enumerate exceeds budget {budget}")

    positive: list[set[tuple[int, ...]]] = [set()]
    for k in range(1, top + 1):
        level = set()
        for s in itertools.combinations(range(n), k):
            if k > 1 and not all(
                s[:j] + s[j + 1 :] in positive[k - 1] for j in range(k)
            ):
                continue
            if _table_is_probability(marginal_table(q, s), tol):
                level.add(s)
        positive.append(level)
        if not level:
            break

    maximal = []
    for k in range(len(positive) - 1, 0, -1):
        for s in positive[k]:
            if not any(set(s) <= set(m) for m in maximal):
                maximal.append(s)
    return sorted(maximal)


def product_of_singles(q: QuasiDistribution, tol: float = POS_TOL) -> QuasiDistribution:
    out = np.ones(())
    for k in range(q.space.n):
        single = marginal_table(q, (k,))
        if not _table_is_probability(single, tol):
            raise NegativeSingle(f"marginal of variable {k} is not a probability: {single}")
        out = np.multiply.outer(out, single)
    return make_distribution(q.space, out.ravel(), max(NORM_TOL, 1e-14 * q.space.size))


def coarse_grain(
    q: QuasiDistribution,
    plan: Mapping[int, Sequence[Sequence[int]]] | None = None,
    drop: Iterable[int] = (),
) -> QuasiDistribution:
    """Merge alphabet symbols into blocks and sum out ``drop`` entirely.

    ``plan`` maps a variable index to its blocks (each a list of symbols);
    variables absent from ``plan`` keep their alphabet. Block ``j`` becomes
    symbol ``j`` of the coarse-grained variable.
    """
    plan = dict(plan or {})
    drop = set(drop)
    n = q.space.n
    for k in list(plan) + list(drop):
        if not 0 <= k < n:
            raise BadPartition(f"variable index {k} out of range")
    keep = [k for k in range(n) if k not in drop]
    if not keep:
        raise BadPartition("cannot drop every variable")

    table = marginal_table(q, tuple(keep))
    variables = []
    for axis, k in enumerate(keep):
        var = q.space.variables[k]
        blocks = plan.get(k)
        if blocks is None:
            variables.append(var)
            continue
        blocks = [tuple(int(s) for s in b) for b in blocks]
        flat = sorted(s for b in blocks for s in b)
        if flat != list(range(var.arity)) or any(len(b) == 0 for b in blocks):
            raise BadPartition(f"blocks {blocks} do not partition {var.arity} symbols of {var.label!r}")
        if len(blocks) < 2:
            raise BadPartition(f"variable {var.label!r} needs at least two blocks")
        table = np.stack([table.take(b, axis=axis).sum(axis=axis) for b in blocks], axis=axis)
        variables.append(Variable(var.label, len(blocks)))
    space = OutcomeSpace(tuple(variables))
    return make_distribution(space, table.ravel(), max(NORM_TOL, 4 * np.finfo(float).eps * q.space.size))


@dataclass(frozen=True)
class ModificationReport:
    d: np.ndarray
    total: float
    sums_to_zero: bool
    subsets: tuple[tuple[int, ...], ...]
    marginals_preserved: bool
    max_marginal_diff: float


def modification(
    p: QuasiDistribution,
    q: QuasiDistribution,
    tol: float = POS_TOL,
    subsets: Iterable[Iterable[int]] | None = None,
) -> ModificationReport:
    """Difference ``d = p - q`` and whether ``p`` keeps ``q``'s positive marginals.

    By default the marginals compared are the maximal positive subsets of
    ``q``; pass ``subsets`` to compare a designated family instead.
    """
    if p.space != q.space:
        raise SpaceMismatch("p and q live on different outcome spaces")
    d = p.values - q.values
    total = math.fsum(d)
    if subsets is None:
        subs = tuple(positive_marginals(q, tol))
    else:
        subs = tuple(check_subset(q.space, s) for s in subsets)
    diff = 0.0
    for s in subs:
        diff = max(diff, float(np.max(np.abs(marginal_table(p, s) - marginal_table(q, s)))))
    return ModificationReport(
        d=d,
        total=total,
        sums_to_zero=abs(total) <= tol,
        subsets=subs,
        marginals_preserved=diff <= tol,
        max_marginal_diff=diff,
    )
