import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import admissible_pair_correlator, pair_table  # noqa: E402

from qviability import lpmatch  # noqa: E402
from qviability.fine import CYCLE_PAIRS, TRIANGLE_PAIRS  # noqa: E402
from qviability.qdist import OutcomeSpace  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture(params=sorted(lpmatch.BACKENDS))
def backend(request):
    return request.param


def random_cycle_instance(rng, nonzero_singles=None):
    """Consistent pair tables on the CHSH cycle; returns (problem, correlators).

    Singles are zero or random; each correlator is drawn uniformly from the
    range that keeps its pair table nonnegative, so both CHSH-satisfying
    and CHSH-violating instances occur.
    """
    if nonzero_singles is None:
        nonzero_singles = rng.random() < 0.5
    B = rng.uniform(-0.6, 0.6, 4) if nonzero_singles else np.zeros(4)
    corr = {}
    targets = []
    for i, j in CYCLE_PAIRS:
        c = admissible_pair_correlator(B[i], B[j], rng.random())
        corr[i, j] = c
        targets.append(((i, j), pair_table(B[i], B[j], c)))
    return lpmatch.MatchingProblem(OutcomeSpace.binary(4), tuple(targets)), corr


def random_triangle_instance(rng, nonzero_singles):
    B = rng.uniform(-0.6, 0.6, 3) if nonzero_singles else np.zeros(3)
    corr = {}
    targets = []
    for i, j in TRIANGLE_PAIRS:
        c = admissible_pair_correlator(B[i], B[j], rng.random())
        corr[i, j] = c
        targets.append(((i, j), pair_table(B[i], B[j], c)))
    return lpmatch.MatchingProblem(OutcomeSpace.binary(3), tuple(targets)), corr


THETAS_SPECIAL = {"pi/3": math.pi / 3, "pi/2": math.pi / 2, "pi/4": math.pi / 4, "pi": math.pi}
