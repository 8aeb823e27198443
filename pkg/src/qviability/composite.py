"""Uncorrelated composite systems.

Marginal matching assigns the product of the subsystem witnesses to a
product of subsystem problems, so subsystem independence is kept. Linear
positivity does not have this property: ``Re(z_A z_B)`` can be negative
while ``Re z_A`` and ``Re z_B`` are both nonnegative, because
``Re(z_A z_B) = Re z_A Re z_B - Im z_A Im z_B``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import lpmatch
from .errors import ComponentInfeasible
from .qdist import POS_TOL, OutcomeSpace, QuasiDistribution, make_distribution, marginal_table
from .quantum import DensityState, ProjectorString, class_trace, direction, spin_projector, spin_up


@dataclass(frozen=True)
class CompositeProblem:
    problem_a: lpmatch.MatchingProblem
    problem_b: lpmatch.MatchingProblem


def product_distribution(pa: QuasiDistribution, pb: QuasiDistribution) -> QuasiDistribution:
    """``p_AB(alpha, beta) = p_A(alpha) p_B(beta)``; A's variables come first."""
    space = OutcomeSpace(pa.space.variables + pb.space.variables)
    return make_distribution(space, np.outer(pa.values, pb.values).ravel())


@dataclass(frozen=True)
class DiosiReport:
    witness: QuasiDistribution
    witness_a: QuasiDistribution
    witness_b: QuasiDistribution
    n_targets: int
    residual: float
    factor_error: float
    ok: bool


def product_targets(prob_a: lpmatch.MatchingProblem, prob_b: lpmatch.MatchingProblem):
    """Every product of an A target with a B target, on the joined space."""
    shift = prob_a.space.n
    out = []
    for (sa, ta), (sb, tb) in itertools.product(prob_a.targets, prob_b.targets):
        subset = sa + tuple(shift + i for i in sb)
        out.append((subset, np.multiply.outer(ta, tb)))
    return out


def diosi_check(
    prob_a: lpmatch.MatchingProblem, prob_b: lpmatch.MatchingProblem, tol: float = POS_TOL
) -> DiosiReport:
    """Solve each subsystem, then confirm the product witness solves the joint problem."""
    ra = lpmatch.solve(prob_a, tol)
    rb = lpmatch.solve(prob_b, tol)
    for name, r in (("A", ra), ("B", rb)):
        if not r.feasible:
            raise ComponentInfeasible(f"subsystem {name} has no matching probability")
    joint = product_distribution(ra.witness, rb.witness)
    targets = product_targets(prob_a, prob_b)
    prob = lpmatch.MatchingProblem(joint.space, tuple(targets))
    check = lpmatch.verify(joint, prob, tol)

    na = prob_a.space.n
    on_a = marginal_table(joint, tuple(range(na))).ravel()
    on_b = marginal_table(joint, tuple(range(na, joint.space.n))).ravel()
    factor_error = max(
        float(np.max(np.abs(on_a - ra.witness.values))),
        float(np.max(np.abs(on_b - rb.witness.values))),
    )
    return DiosiReport(
        joint, ra.witness, rb.witness, len(targets), check.max_residual, factor_error, check.ok
    )


@dataclass(frozen=True)
class Lp2Counterexample:
    string_a: ProjectorString
    string_b: ProjectorString
    z_a: complex
    z_b: complex
    directions_a: tuple | None = None
    directions_b: tuple | None = None

    @property
    def re_a(self) -> float:
        return self.z_a.real

    @property
    def re_b(self) -> float:
        return self.z_b.real

    @property
    def re_ab(self) -> float:
        return (self.z_a * self.z_b).real


def direction_grid(n_azimuth: int = 24, n_polar: int = 12) -> np.ndarray:
    """Unit vectors on a polar x azimuth grid, polar angles offset from the poles."""
    out = []
    for k in range(n_polar):
        polar = (k + 0.5) * math.pi / n_polar
        for j in range(n_azimuth):
            out.append(direction(polar, 2 * math.pi * j / n_azimuth))
    return np.array(out)


def _two_projector_traces(dirs: np.ndarray, rho: DensityState) -> np.ndarray:
    """``Tr(P^m_+ P^n_+ rho)`` for all grid pairs; row = m (applied last), column = n."""
    projs = np.array([spin_projector(d, 1) for d in dirs])
    right = np.einsum("nij,jk->nik", projs, rho.matrix)
    return np.einsum("mij,nji->mn", projs, right)


def _hull_vertices(z: np.ndarray, idx: np.ndarray) -> list[int]:
    """Indices (into ``z``) of the convex-hull vertices of the points ``z[idx]`` in the plane."""
    pts = sorted((z[i].real, z[i].imag, int(i)) for i in idx)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def chain(points):
        out = []
        for p in points:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    if len(pts) <= 2:
        return sorted(p[2] for p in pts)
    hull = chain(pts)[:-1] + chain(pts[::-1])[:-1]
    return sorted({p[2] for p in hull})


def _best_pair(za: np.ndarray, zb: np.ndarray, min_violation: float):
    """Most negative ``Re(z_A z_B)`` over nonnegative-real-part entries.

    The objective is bilinear in (Re z, Im z), so the minimum is attained
    on hull vertices of each family. Ties go to the lowest indices.
    """
    ca = _hull_vertices(za, np.flatnonzero(za.real >= 0))
    cb = _hull_vertices(zb, np.flatnonzero(zb.real >= 0))
    if not ca or not cb:
        return None
    vals = (za[ca][:, None] * zb[cb][None, :]).real
    best = vals.min()
    if not best < -min_violation:
        return None
    i, k = np.argwhere(vals == best)[0]
    return ca[i], cb[k]


def lp2_failure_demo(
    rho_a: DensityState | None = None,
    rho_b: DensityState | None = None,
    strings_a: Sequence[ProjectorString] | None = None,
    strings_b: Sequence[ProjectorString] | None = None,
    grid: tuple[int, int] = (24, 12),
    min_violation: float = 1e-6,
) -> Lp2Counterexample | None:
    """Search for class operators with ``Re z_A, Re z_B >= 0`` but ``Re(z_A z_B) < 0``.

    Without explicit string families each subsystem scans the strings
    ``P^m_+ P^n_+`` with ``n`` applied first and ``m``, ``n`` drawn from a
    direction grid. The pair with the most negative ``Re(z_A z_B)`` is
    returned; violations smaller than ``min_violation`` are treated as
    rounding noise.
    """
    rho_a = rho_a or spin_up()
    rho_b = rho_b or spin_up()
    dirs = direction_grid(*grid)

    def family(strings, rho):
        if strings is not None:
            z = np.array([class_trace(s, rho) for s in strings])
            return z, list(strings), None
        z = _two_projector_traces(dirs, rho).ravel()
        return z, None, len(dirs)

    za, sa, nd_a = family(strings_a, rho_a)
    zb, sb, nd_b = family(strings_b, rho_b)
    hit = _best_pair(za, zb, min_violation)
    if hit is None:
        return None
    i, k = hit

    def resolve(idx, strings, nd):
        if strings is not None:
            return strings[idx], None
        m, n = divmod(idx, nd)
        s = ProjectorString((spin_projector(dirs[n], 1), spin_projector(dirs[m], 1)))
        return s, (tuple(map(float, dirs[n])), tuple(map(float, dirs[m])))

    string_a, dir_a = resolve(i, sa, nd_a)
    string_b, dir_b = resolve(k, sb, nd_b)
    return Lp2Counterexample(
        string_a,
        string_b,
        class_trace(string_a, rho_a),
        class_trace(string_b, rho_b),
        dir_a,
        dir_b,
    )
