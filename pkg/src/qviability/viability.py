"""Viability test for quasi-probabilities and coarse-grained non-viability search.

A quasi-probability is viable when some true probability reproduces the
chosen family of its positive marginals. ``viability_test`` decides this
with the LP. ``coarse_grain_search`` looks for a cheaper, human-readable
obstruction: a binarization of a few variables whose induced correlators
break a CHSH or Bell inequality. Coarse grainings of a viable
quasi-probability are viable, so any such violation proves non-viability;
finding none proves nothing.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import lpmatch
from .correl import expand
from .errors import CapExceeded, NonPositiveSpecifiedMarginal
from .fine import (
    BELL_NAMES,
    CHSH_NAMES,
    BellInput,
    ChshInput,
    bell_values,
    chsh_values,
)
from .qdist import (
    POS_TOL,
    QuasiDistribution,
    _table_is_probability,
    check_subset,
    coarse_grain,
    marginal_table,
    positive_marginals,
)

SEARCH_BUDGET = 10**5


class Status(enum.Enum):
    VIABLE = "viable"
    NON_VIABLE = "non-viable"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class CoarseGrainCertificate:
    """A violated CHSH or Bell combination on a binarized selection of variables.

    ``variables`` lists the selected variables in role order (1, 2, 3[, 4]
    of the inequality) and ``blocks`` gives, per selected variable, the
    symbols mapped to spin +1; the rest map to -1.
    """

    kind: str
    variables: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    combination: str
    value: float
    bound: float

    def to_json(self) -> dict:
        return {
            "type": "coarse-grain",
            "kind": self.kind,
            "variables": [v + 1 for v in self.variables],
            "plus_blocks": [list(b) for b in self.blocks],
            "combination": self.combination,
            "value": float(self.value),
            "bound": float(self.bound),
        }

    @classmethod
    def from_json(cls, obj) -> "CoarseGrainCertificate":
        return cls(
            obj["kind"],
            tuple(int(v) - 1 for v in obj["variables"]),
            tuple(tuple(int(s) for s in b) for b in obj["plus_blocks"]),
            obj["combination"],
            float(obj["value"]),
            float(obj["bound"]),
        )


@dataclass(frozen=True)
class ViabilityReport:
    status: Status
    mode: str
    subsets: tuple[tuple[int, ...], ...]
    witness: QuasiDistribution | None = None
    certificate: lpmatch.LpCertificate | CoarseGrainCertificate | None = None
    tol: float = POS_TOL
    note: str = ""

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "mode": self.mode,
            "subsets": [[i + 1 for i in s] for s in self.subsets],
            "tol": self.tol,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "certificate": self.certificate.to_json() if self.certificate is not None else None,
            "note": self.note,
        }


def viability_test(
    q: QuasiDistribution,
    subsets: Iterable[Iterable[int]] | None = None,
    tol: float = POS_TOL,
) -> ViabilityReport:
    """Match a probability to the positive marginals of ``q``.

    With ``subsets=None`` every positive marginal is matched (via the
    maximal positive subsets); otherwise only the listed marginals, each
    of which must itself be a probability.
    """
    if subsets is None:
        mode = "all-positive"
        try:
            family = tuple(positive_marginals(q, tol))
        except CapExceeded as exc:
            return ViabilityReport(Status.UNKNOWN, mode, (), tol=tol, note=str(exc))
    else:
        mode = "specified"
        family = tuple(check_subset(q.space, s) for s in subsets)
        for s in family:
            if not _table_is_probability(marginal_table(q, s), tol):
                raise NonPositiveSpecifiedMarginal(f"marginal on {s} is not a probability")

    prob = lpmatch.problem_from_marginals(q, family)
    try:
        res = lpmatch.solve(prob, tol)
    except CapExceeded as exc:
        return ViabilityReport(Status.UNKNOWN, mode, family, tol=tol, note=str(exc))
    if res.feasible:
        note = "numerically marginal" if res.numerically_marginal else ""
        return ViabilityReport(Status.VIABLE, mode, family, res.witness, tol=tol, note=note)
    return ViabilityReport(Status.NON_VIABLE, mode, family, certificate=res.certificate, tol=tol)


def recheck(q: QuasiDistribution, report: ViabilityReport, tol: float = POS_TOL) -> bool:
    """Independently re-validate a report's witness or certificate against ``q``."""
    prob = lpmatch.problem_from_marginals(q, report.subsets)
    if report.status is Status.VIABLE:
        return lpmatch.verify(report.witness, prob, tol).ok
    if report.status is Status.NON_VIABLE:
        cert = report.certificate
        if isinstance(cert, CoarseGrainCertificate):
            return recheck_coarse_grain(q, cert, tol)
        return lpmatch.farkas_gap(prob, cert.farkas) > tol
    return True


def binarizations(arity: int) -> list[tuple[int, ...]]:
    """Two-block partitions of ``range(arity)``, named by the block holding symbol 0.

    Sorted lexicographically, so ``{0} | rest`` comes first.
    """
    rest = range(1, arity)
    out = []
    for k in range(0, arity - 1):
        for extra in itertools.combinations(rest, k):
            out.append((0, *extra))
    return sorted(out)


def _binary_correlator(pair_table: np.ndarray, plus_i, plus_j) -> float:
    si = np.full(pair_table.shape[0], -1.0)
    si[list(plus_i)] = 1.0
    sj = np.full(pair_table.shape[1], -1.0)
    sj[list(plus_j)] = 1.0
    return float(si @ pair_table @ sj)


def _pair_in(family: Sequence[frozenset], i: int, j: int) -> bool:
    return any(i in s and j in s for s in family)


def _selections(n: int, family):
    """Candidate (kind, role-ordered variables) in deterministic search order."""
    for trio in itertools.combinations(range(n), 3):
        if all(_pair_in(family, i, j) for i, j in itertools.combinations(trio, 2)):
            yield "bell", trio
    for quad in itertools.combinations(range(n), 4):
        w = quad[0]
        for partner in quad[1:]:
            side_a = (w, partner)
            side_b = tuple(v for v in quad if v not in side_a)
            if all(_pair_in(family, i, j) for i in side_a for j in side_b):
                yield "chsh", side_a + side_b


def _evaluate(kind, roles, blocks, pair_tables, tol):
    def corr(x, y):
        i, j = roles[x], roles[y]
        if i < j:
            return _binary_correlator(pair_tables[i, j], blocks[x], blocks[y])
        return _binary_correlator(pair_tables[j, i], blocks[y], blocks[x])

    if kind == "bell":
        vals = bell_values(BellInput(corr(0, 1), corr(0, 2), corr(1, 2), tol=np.inf))
        for name, v in zip(BELL_NAMES, vals):
            if v > 1 + tol:
                return name, v, 1.0
    else:
        vals = chsh_values(ChshInput(corr(0, 2), corr(0, 3), corr(1, 2), corr(1, 3), tol=np.inf))
        for name, v in zip(CHSH_NAMES, vals):
            if abs(v) > 2 + tol:
                return name, v, 2.0
    return None


def coarse_grain_search(
    q: QuasiDistribution,
    marginal_family: Iterable[Iterable[int]],
    budget: int = SEARCH_BUDGET,
    tol: float = POS_TOL,
) -> CoarseGrainCertificate | None:
    """First CHSH/Bell violation among binarized selections of variables.

    Three-variable (Bell) selections are tried before four-variable (CHSH)
    ones; within a size, variable tuples and binarizations go in
    lexicographic order. Only pairs contained in ``marginal_family`` are
    used. Each inequality-set evaluation counts against ``budget``.
    """
    family = [frozenset(check_subset(q.space, s)) for s in marginal_family]
    pair_tables = {}
    for i, j in itertools.combinations(range(q.space.n), 2):
        if _pair_in(family, i, j):
            pair_tables[i, j] = marginal_table(q, (i, j))

    spent = 0
    for kind, roles in _selections(q.space.n, family):
        options = [binarizations(q.space.shape[v]) for v in roles]
        for blocks in itertools.product(*options):
            if spent >= budget:
                return None
            spent += 1
            hit = _evaluate(kind, roles, blocks, pair_tables, tol)
            if hit is not None:
                name, value, bound = hit
                return CoarseGrainCertificate(kind, tuple(roles), tuple(blocks), name, value, bound)
    return None


def recheck_coarse_grain(q: QuasiDistribution, cert: CoarseGrainCertificate, tol: float = POS_TOL) -> bool:
    """Rebuild the coarse-grained distribution and re-evaluate the named combination."""
    plan = {}
    for v, plus in zip(cert.variables, cert.blocks):
        minus = [s for s in range(q.space.shape[v]) if s not in plus]
        plan[v] = [list(plus), minus]
    keep = sorted(cert.variables)
    drop = [k for k in range(q.space.n) if k not in keep]
    coarse = coarse_grain(q, plan, drop)
    coeffs = expand(coarse)
    pos = {v: keep.index(v) for v in cert.variables}

    def corr(x, y):
        return coeffs[tuple(sorted((pos[cert.variables[x]], pos[cert.variables[y]])))]

    if cert.kind == "bell":
        vals = dict(zip(BELL_NAMES, bell_values(BellInput(corr(0, 1), corr(0, 2), corr(1, 2), tol=np.inf))))
        value = vals[cert.combination]
        violated = value > cert.bound + tol
    else:
        vals = dict(
            zip(CHSH_NAMES, chsh_values(ChshInput(corr(0, 2), corr(0, 3), corr(1, 2), corr(1, 3), tol=np.inf)))
        )
        value = vals[cert.combination]
        violated = abs(value) > cert.bound + tol
    return violated and abs(value - cert.value) <= 1e-9
