"""Singlet-state example where linear positivity fails but a matching
probability exists.

Spins 1, 2 are measured on particle A along ``a``, ``a'``; spins 3, 4 on
particle B along ``b``, ``b'``. All four directions lie in the x-z plane at
in-plane angles ``a = 0``, ``b = theta``, ``b' = -theta``, ``a' = 2 theta``,
which gives ``a.b = a.b' = a'.b = cos(theta)`` and ``a'.b' = cos(3 theta)``.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import lpmatch
from .fine import CYCLE_PAIRS, ChshInput, chsh_satisfied
from .qdist import POS_TOL, OutcomeSpace, QuasiDistribution, make_distribution
from .quantum import DensityState, gp_quasiprob, linear_positivity, local, singlet, spin_decomposition

# a' and b' act on the state first: Re Tr(P^a P^a' (x) P^b P^b' rho)
EPRB_ORDER = (1, 3, 0, 2)

CSV_HEADER = ("theta", "q_pppp", "q_pppp_x4", "g1", "g2", "chsh_ok", "lin_pos_ok", "lp_feasible")

SPACE = OutcomeSpace.binary(4)


def _in_plane(phi: float) -> np.ndarray:
    return np.array([math.sin(phi), 0.0, math.cos(phi)])


@dataclass(frozen=True, eq=False)
class PlanarConfig:
    theta: float
    a: np.ndarray
    ap: np.ndarray
    b: np.ndarray
    bp: np.ndarray


def make_config(theta: float) -> PlanarConfig:
    theta = float(theta)
    if not math.isfinite(theta):
        raise ValueError("theta must be finite")
    cfg = PlanarConfig(theta, _in_plane(0.0), _in_plane(2 * theta), _in_plane(theta), _in_plane(-theta))
    c, c3 = math.cos(theta), math.cos(3 * theta)
    dots = (cfg.a @ cfg.b, cfg.a @ cfg.bp, cfg.ap @ cfg.b, cfg.ap @ cfg.bp)
    assert np.allclose(dots, (c, c, c, c3), rtol=0, atol=1e-12), dots
    return cfg


def closed_form_q(cfg: PlanarConfig, s1: int, s2: int, s3: int, s4: int) -> float:
    a, ap, b, bp = cfg.a, cfg.ap, cfg.b, cfg.bp
    val = (
        (1 + s1 * s2 * (a @ ap)) * (1 + s3 * s4 * (b @ bp))
        - (s1 * a + s2 * ap) @ (s3 * b + s4 * bp)
        + s1 * s2 * s3 * s4 * ((a @ b) * (ap @ bp) - (a @ bp) * (ap @ b))
    )
    return float(val) / 16


def closed_form_distribution(cfg: PlanarConfig) -> QuasiDistribution:
    vals = [closed_form_q(cfg, *s) for s in itertools.product((1, -1), repeat=4)]
    return make_distribution(SPACE, vals)


def decompositions(cfg: PlanarConfig):
    dims = (2, 2)
    return [
        local(spin_decomposition(cfg.a, "s1"), 0, dims),
        local(spin_decomposition(cfg.ap, "s2"), 0, dims),
        local(spin_decomposition(cfg.b, "s3"), 1, dims),
        local(spin_decomposition(cfg.bp, "s4"), 1, dims),
    ]


def trace_distribution(
    theta: float, order=EPRB_ORDER, rho: DensityState | None = None
) -> QuasiDistribution:
    cfg = make_config(theta)
    return gp_quasiprob(decompositions(cfg), rho or singlet(), order)


def q_pppp(theta: float) -> float:
    """The all-up cell, ``cos^2(t) (2 cos^2(t) - cos(t) - 1) / 4``."""
    c = math.cos(theta)
    return 0.25 * c * c * (2 * c * c - c - 1)


def chsh_reduced(theta: float) -> tuple[float, float]:
    """``(2c^3 - 3c, 2c^3 - c)`` with ``c = cos(theta)``; CHSH holds iff both lie in [-1, 1]."""
    c = math.cos(theta)
    return 2 * c**3 - 3 * c, 2 * c**3 - c


def cycle_correlators(theta: float) -> ChshInput:
    c = math.cos(theta)
    return ChshInput(-c, -c, -c, -math.cos(3 * theta))


@dataclass(frozen=True)
class SweepRow:
    theta: float
    q_pppp: float
    q_pppp_x4: float
    g1: float
    g2: float
    chsh_ok: bool
    lin_pos_ok: bool
    lp_feasible: bool

    def csv_fields(self) -> list[str]:
        out = []
        for name in CSV_HEADER:
            v = getattr(self, name)
            out.append(str(int(v)) if isinstance(v, bool) else format(v, ".12g"))
        return out


def sweep_row(theta: float, tol: float = POS_TOL) -> SweepRow:
    q = trace_distribution(theta)
    qp = q_pppp(theta)
    g1, g2 = chsh_reduced(theta)
    prob = lpmatch.problem_from_marginals(q, CYCLE_PAIRS)
    return SweepRow(
        theta=float(theta),
        q_pppp=qp,
        q_pppp_x4=4 * qp,
        g1=g1,
        g2=g2,
        chsh_ok=chsh_satisfied(cycle_correlators(theta), tol),
        lin_pos_ok=linear_positivity(q, tol),
        lp_feasible=lpmatch.solve(prob, tol).feasible,
    )


def sweep(
    theta_min: float = 0.0, theta_max: float = 2 * math.pi, steps: int = 1000, tol: float = POS_TOL
) -> list[SweepRow]:
    if steps < 2:
        raise ValueError("steps must be at least 2")
    return [sweep_row(t, tol) for t in np.linspace(theta_min, theta_max, steps)]


def write_csv(rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.csv_fields())


def ordering_variants(theta: float) -> list[tuple[str, QuasiDistribution]]:
    """The four inequivalent operator orderings of (P^a, P^a') (x) (P^b, P^b').

    Orderings interleaving the two particles collapse onto these because
    operators on different particles commute. Labels name the operator
    product left to right.
    """
    cfg = make_config(theta)
    decs = decompositions(cfg)
    rho = singlet()
    out = []
    for a_first, b_first in itertools.product((1, 0), (3, 2)):
        a_last, b_last = 1 - a_first, 5 - b_first
        order = (a_first, b_first, a_last, b_last)
        names = {0: "a", 1: "a'", 2: "b", 3: "b'"}
        label = f"P^{names[a_last]} P^{names[a_first]} (x) P^{names[b_last]} P^{names[b_first]}"
        out.append((label, gp_quasiprob(decs, rho, order)))
    return out
