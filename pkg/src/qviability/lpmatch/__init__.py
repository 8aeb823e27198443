"""Marginal matching by phase-1 linear programming."""

from ._kernel import BACKEND, BACKENDS
from .matching import (
    LpCertificate,
    MatchingProblem,
    MatchingResult,
    Verdict,
    VerifyReport,
    constraint_system,
    farkas_gap,
    load_problem,
    problem_from_marginals,
    solve,
    solve_with_zero_support,
    verify,
    zero_support_of,
)

__all__ = [
    "BACKEND",
    "BACKENDS",
    "LpCertificate",
    "MatchingProblem",
    "MatchingResult",
    "Verdict",
    "VerifyReport",
    "constraint_system",
    "farkas_gap",
    "load_problem",
    "problem_from_marginals",
    "solve",
    "solve_with_zero_support",
    "verify",
    "zero_support_of",
]
