"""Find a probability distribution with prescribed marginals.

The unknowns are the cell probabilities of the full outcome space. Each
target contributes one equation per cell of its marginal table, plus one
normalization row. Redundant rows are kept; the phase-1 simplex copes with
the rank deficiency through artificials that stay basic at level zero.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ..errors import CapExceeded, InconsistentTargets, QuasiError, SpaceMismatch
from ..qdist import (
    POS_TOL,
    Marginal,
    OutcomeSpace,
    QuasiDistribution,
    check_subset,
    make_distribution,
    marginal_table,
)
from . import simplex

EXACT_CELL_CAP = 2**12
LP_CELL_CAP = 2**14
NOISE_FLOOR = 1e-12


class Verdict(enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True, eq=False)
class MatchingProblem:
    space: OutcomeSpace
    targets: tuple[tuple[tuple[int, ...], np.ndarray], ...]
    zero_support: frozenset[tuple[int, ...]] = frozenset()

    def __post_init__(self):
        targets = []
        for subset, table in self.targets:
            idx = check_subset(self.space, subset)
            shape = tuple(self.space.shape[i] for i in idx)
            t = np.array(table, dtype=float)
            if t.size != math.prod(shape):
                raise QuasiError(f"target on {idx} has {t.size} entries, expected {math.prod(shape)}")
            t = t.reshape(shape)
            t.setflags(write=False)
            targets.append((idx, t))
        object.__setattr__(self, "targets", tuple(targets))
        zs = frozenset(tuple(int(a) for a in cell) for cell in self.zero_support)
        for cell in zs:
            if len(cell) != self.space.n or any(not 0 <= a < d for a, d in zip(cell, self.space.shape)):
                raise QuasiError(f"zero-support outcome {cell} is not in the outcome space")
        object.__setattr__(self, "zero_support", zs)

    @property
    def subsets(self) -> tuple[tuple[int, ...], ...]:
        return tuple(s for s, _ in self.targets)

    def validate(self, tol: float = POS_TOL) -> None:
        """Raise :class:`InconsistentTargets` unless every target is a probability
        and overlapping targets agree on their shared variables."""
        for s, t in self.targets:
            if np.any(t < -tol) or np.any(t > 1 + tol) or abs(math.fsum(t.ravel()) - 1) > tol:
                raise InconsistentTargets(f"target on {s} is not a probability table", (s, None))
        for (s1, t1), (s2, t2) in itertools.combinations(self.targets, 2):
            common = tuple(sorted(set(s1) & set(s2)))
            if not common:
                continue
            m1 = _project(t1, s1, common)
            m2 = _project(t2, s2, common)
            diff = float(np.max(np.abs(m1 - m2)))
            if diff > tol:
                raise InconsistentTargets(
                    f"targets on {s1} and {s2} disagree on {common} by {diff:.3g}", (s1, s2)
                )

    def to_json(self) -> dict:
        return {
            "space": self.space.to_json(),
            "targets": [
                {"subset": [i + 1 for i in s], "values": [float(v) for v in t.ravel()]}
                for s, t in self.targets
            ],
            "zero_support": [list(c) for c in sorted(self.zero_support)],
        }

    @classmethod
    def from_json(cls, obj) -> "MatchingProblem":
        space = OutcomeSpace.from_json(obj["space"])
        targets = []
        for entry in obj["targets"]:
            values = entry["values"]
            if not all(isinstance(v, (int, float)) and math.isfinite(v) for v in values):
                raise QuasiError("target values must be finite numbers")
            targets.append((tuple(int(i) - 1 for i in entry["subset"]), values))
        zs = [tuple(c) for c in obj.get("zero_support", [])]
        return cls(space, tuple(targets), frozenset(zs))


def _project(table: np.ndarray, subset: Sequence[int], onto: Sequence[int]) -> np.ndarray:
    drop = tuple(k for k, i in enumerate(subset) if i not in onto)
    return table.sum(axis=drop) if drop else table


def load_problem(path) -> MatchingProblem:
    with open(path) as fh:
        return MatchingProblem.from_json(json.load(fh))


def problem_from_marginals(
    q: QuasiDistribution, subsets: Iterable[Iterable[int]], zero_support=frozenset()
) -> MatchingProblem:
    targets = []
    for s in subsets:
        idx = check_subset(q.space, s)
        targets.append((idx, marginal_table(q, idx)))
    return MatchingProblem(q.space, tuple(targets), frozenset(zero_support))


def constraint_system(prob: MatchingProblem):
    """Return ``(A, b, keep)``: equality rows over the cells not forced to zero.

    Row 0 is normalization; then each target's cells in row-major order.
    ``keep`` is a boolean mask over all cells of the space.
    """
    space = prob.space
    coords = np.indices(space.shape).reshape(space.n, -1)
    rows = [np.ones((1, space.size))]
    rhs = [np.ones(1)]
    for s, t in prob.targets:
        proj = np.ravel_multi_index(tuple(coords[list(s)]), t.shape)
        block = np.zeros((t.size, space.size))
        block[proj, np.arange(space.size)] = 1.0
        rows.append(block)
        rhs.append(t.ravel())
    A = np.vstack(rows)
    b = np.concatenate(rhs)
    keep = np.ones(space.size, dtype=bool)
    if prob.zero_support:
        zs = np.ravel_multi_index(tuple(np.array(sorted(prob.zero_support)).T), space.shape)
        keep[zs] = False
    return A[:, keep], b, keep


@dataclass(frozen=True)
class LpCertificate:
    """Farkas evidence of infeasibility: ``y @ A <= slack`` while ``y @ b`` exceeds it."""

    phase1_objective: float
    farkas: np.ndarray
    gap: float

    def to_json(self) -> dict:
        return {
            "type": "lp",
            "phase1_objective": float(self.phase1_objective),
            "farkas": [float(v) for v in self.farkas],
            "gap": float(self.gap),
        }


def farkas_gap(prob: MatchingProblem, y) -> float:
    """``y @ b - max(0, max_j y @ A_j)``.

    Any distribution p satisfies ``y @ A p <= max_j y @ A_j`` because its
    cells are nonnegative and sum to one, so a positive gap proves that no
    feasible p exists.
    """
    A, b, _ = constraint_system(prob)
    y = np.asarray(y, dtype=float)
    if y.size != b.size:
        raise QuasiError(f"Farkas vector has {y.size} entries for {b.size} rows")
    top = float(np.max(y @ A)) if A.shape[1] else 0.0
    return float(y @ b) - max(0.0, top)


@dataclass(frozen=True)
class MatchingResult:
    verdict: Verdict
    witness: QuasiDistribution | None
    residual: float
    phase1_objective: float
    numerically_marginal: bool = False
    certificate: LpCertificate | None = None
    iterations: int = 0
    backend: str = ""

    @property
    def feasible(self) -> bool:
        return self.verdict is Verdict.FEASIBLE

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "residual": float(self.residual),
            "phase1_objective": float(self.phase1_objective),
            "numerically_marginal": bool(self.numerically_marginal),
            "witness": self.witness.to_json() if self.witness is not None else None,
            "certificate": self.certificate.to_json() if self.certificate is not None else None,
        }


@dataclass(frozen=True)
class VerifyReport:
    negativity: float
    normalization: float
    target_residuals: tuple[float, ...]
    zero_support_residual: float
    ok: bool

    @property
    def max_residual(self) -> float:
        return max((self.negativity, self.normalization, self.zero_support_residual, *self.target_residuals))


def verify(witness: QuasiDistribution, prob: MatchingProblem, tol: float = POS_TOL) -> VerifyReport:
    if witness.space != prob.space:
        raise SpaceMismatch("witness and problem live on different outcome spaces")
    v = witness.values
    negativity = max(0.0, -float(v.min()))
    normalization = abs(math.fsum(v) - 1.0)
    residuals = tuple(
        float(np.max(np.abs(marginal_table(witness, s) - t))) for s, t in prob.targets
    )
    zs = max((abs(witness[c]) for c in prob.zero_support), default=0.0)
    worst = max((negativity, normalization, zs, *residuals))
    return VerifyReport(negativity, normalization, residuals, zs, worst <= tol)


def solve(
    prob: MatchingProblem,
    tol: float = POS_TOL,
    exact: bool = False,
    backend: str | None = None,
) -> MatchingResult:
    """Decide whether a probability matching ``prob`` exists.

    Feasible results carry a vertex witness (the first one the simplex
    reaches; no preference among the matching family). Infeasible results
    carry a Farkas certificate. ``exact=True`` runs the same pivoting in
    rational arithmetic on the float inputs taken at face value.
    """
    cap = EXACT_CELL_CAP if exact else LP_CELL_CAP
    if prob.space.size > cap:
        raise CapExceeded(f"{prob.space.size} cells exceeds LP cap {cap}")
    prob.validate(tol)
    A, b, keep = constraint_system(prob)

    if exact:
        obj_q, x_q, y_q = simplex.phase1_exact(A, b)
        objective = float(obj_q)
        x = np.array([float(v) for v in x_q])
        y = np.array([float(v) for v in y_q])
        feasible = obj_q == 0
        marginal = False
        iterations, name = 0, "exact"
    else:
        res = simplex.phase1(A, b, backend=backend)
        if res.status != "optimal":
            raise QuasiError(f"phase 1 ended with status {res.status}")
        objective, x, y = res.objective, res.x, res.farkas
        feasible = bool(objective <= tol)
        marginal = bool(feasible and objective > NOISE_FLOOR)
        iterations, name = res.iterations, res.backend

    if not feasible:
        cert = LpCertificate(objective, y, farkas_gap(prob, y))
        return MatchingResult(
            Verdict.INFEASIBLE, None, objective, objective, False, cert, iterations, name
        )

    full = np.zeros(prob.space.size)
    full[keep] = np.clip(x, 0.0, None)
    full /= math.fsum(full)
    witness = make_distribution(prob.space, full)
    residual = verify(witness, prob, tol).max_residual
    return MatchingResult(
        Verdict.FEASIBLE, witness, residual, objective, marginal, None, iterations, name
    )


def _as_targets(q: QuasiDistribution, targets) -> list:
    out = []
    for t in targets:
        if isinstance(t, Marginal):
            out.append((t.subset, t.table))
        elif len(t) == 2 and isinstance(t[1], np.ndarray):
            out.append((tuple(t[0]), t[1]))
        else:
            idx = check_subset(q.space, t)
            out.append((idx, marginal_table(q, idx)))
    return out


def zero_support_of(q: QuasiDistribution, tol: float = POS_TOL) -> frozenset:
    cells = np.argwhere(np.abs(q.table) <= tol)
    return frozenset(tuple(int(a) for a in c) for c in cells)


def solve_with_zero_support(
    q: QuasiDistribution, targets, tol: float = POS_TOL, **kwargs
) -> MatchingResult:
    """Like :func:`solve`, but cells where ``q`` vanishes are pinned to zero.

    ``targets`` may mix subsets (marginals taken from ``q``), ``Marginal``
    objects and ``(subset, table)`` pairs.
    """
    prob = MatchingProblem(q.space, tuple(_as_targets(q, targets)), zero_support_of(q, tol))
    return solve(prob, tol, **kwargs)
