"""CHSH and Bell inequalities as existence criteria for joint distributions.

Variables follow the numbering 1..4: spins 1, 2 belong to one
side and 3, 4 to the other, so the measurable cycle pairs are (1,3), (1,4),
(2,3), (2,4). For the three-variable problem the pairs are (1,2), (1,3),
(2,3).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import OutOfRange

TOL = 1e-9

CHSH_NAMES = ("S1", "S2", "S3", "S4")
BELL_NAMES = ("B1", "B2", "B3", "B4")

# cycle pairs as 0-based variable indices, in the order c13, c14, c23, c24
CYCLE_PAIRS = ((0, 2), (0, 3), (1, 2), (1, 3))
TRIANGLE_PAIRS = ((0, 1), (0, 2), (1, 2))


def _check_range(values, tol):
    for name, v in values.items():
        if not abs(v) <= 1 + tol:
            raise OutOfRange(f"correlator {name}={v} outside [-1, 1]")


@dataclass(frozen=True)
class ChshInput:
    c13: float
    c14: float
    c23: float
    c24: float
    tol: float = TOL

    def __post_init__(self):
        _check_range({"C13": self.c13, "C14": self.c14, "C23": self.c23, "C24": self.c24}, self.tol)

    def as_tuple(self):
        return (self.c13, self.c14, self.c23, self.c24)


@dataclass(frozen=True)
class BellInput:
    c12: float
    c13: float
    c23: float
    tol: float = TOL

    def __post_init__(self):
        _check_range({"C12": self.c12, "C13": self.c13, "C23": self.c23}, self.tol)

    def as_tuple(self):
        return (self.c12, self.c13, self.c23)


def chsh_values(c: ChshInput) -> tuple[float, float, float, float]:
    """The four CHSH combinations; the eight inequalities read |S_k| <= 2."""
    c13, c14, c23, c24 = c.as_tuple()
    return (
        c13 + c14 + c23 - c24,
        c13 + c14 - c23 + c24,
        c13 - c14 + c23 + c24,
        -c13 + c14 + c23 + c24,
    )


def chsh_satisfied(c: ChshInput, tol: float = TOL) -> bool:
    return max(abs(s) for s in chsh_values(c)) <= 2 + tol


def bell_values(b: BellInput) -> tuple[float, float, float, float]:
    """The four Bell combinations; each must be at most 1."""
    c12, c13, c23 = b.as_tuple()
    return (
        c12 + c13 - c23,
        c12 - c13 + c23,
        -c12 + c13 + c23,
        -c12 - c13 - c23,
    )


def bell_satisfied(b: BellInput, tol: float = TOL) -> bool:
    return max(bell_values(b)) <= 1 + tol


def chsh_from_coefficients(coeffs, pairs=CYCLE_PAIRS, tol: float = TOL) -> ChshInput:
    """Read the four cycle correlators out of anything indexable by pair."""
    return ChshInput(*(coeffs[p] for p in pairs), tol=tol)


def bell_from_coefficients(coeffs, pairs=TRIANGLE_PAIRS, tol: float = TOL) -> BellInput:
    return BellInput(*(coeffs[p] for p in pairs), tol=tol)
