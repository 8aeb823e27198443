"""Viability of quasi-probabilities.

Build quasi-probabilities from non-commuting projector strings, collect
their positive marginals, and decide whether a genuine probability
distribution reproduces them (CHSH/Bell criteria and LP matching).
"""

from .errors import QuasiError
from .lpmatch import BACKEND as LP_BACKEND
from .qdist import (
    Marginal,
    OutcomeSpace,
    QuasiDistribution,
    Variable,
    coarse_grain,
    is_probability,
    make_distribution,
    marginalize,
    modification,
    positive_marginals,
    product_of_singles,
)
from .viability import Status, ViabilityReport, coarse_grain_search, viability_test

__version__ = "0.1.0"

__all__ = [
    "LP_BACKEND",
    "Marginal",
    "OutcomeSpace",
    "QuasiDistribution",
    "QuasiError",
    "Status",
    "Variable",
    "ViabilityReport",
    "coarse_grain",
    "coarse_grain_search",
    "is_probability",
    "make_distribution",
    "marginalize",
    "modification",
    "positive_marginals",
    "product_of_singles",
    "viability_test",
]
