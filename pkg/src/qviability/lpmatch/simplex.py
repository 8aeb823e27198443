"""Phase-1 simplex for ``{x >= 0 : A x = b}`` on a dense tableau.

One artificial variable per row; the phase-1 objective is their sum. A
zero optimum gives a basic feasible ``x``. A positive optimum comes with a
Farkas vector ``y`` (``y @ A <= 0`` and ``y @ b > 0``) read off the reduced
costs of the artificial columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernel

COST_TOL = 1e-12
PIVOT_TOL = 1e-11
RATIO_TOL = 1e-12
MAX_ITER = 100_000

STATUS = {0: "optimal", 1: "unbounded", 2: "iteration-limit"}


@dataclass(frozen=True)
class Phase1Result:
    status: str
    x: np.ndarray
    objective: float
    farkas: np.ndarray
    iterations: int
    backend: str


def prepare(A: np.ndarray, b: np.ndarray):
    m, n = A.shape
    sign = np.where(b < 0, -1.0, 1.0)
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A * sign[:, None]
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b * sign
    for i in range(m):  # sequential accumulation, identical for every backend
        T[m, :n] -= T[i, :n]
        T[m, -1] -= T[i, -1]
    basis = np.arange(n, n + m, dtype=np.int64)
    return T, basis, sign


def phase1(A, b, backend: str | None = None, max_iter: int = MAX_ITER) -> Phase1Result:
    A = np.ascontiguousarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    name = backend or _kernel.BACKEND
    kernel = _kernel.BACKENDS[name]
    T, basis, sign = prepare(A, b)
    code, it = kernel(T, basis, COST_TOL, PIVOT_TOL, RATIO_TOL, max_iter)
    x = np.zeros(n)
    for i, var in enumerate(basis):
        if var < n:
            x[var] = T[i, -1]
    farkas = (1.0 - T[m, n : n + m]) * sign
    return Phase1Result(STATUS[int(code)], x, -T[m, -1], farkas, int(it), name)


def phase1_exact(A, b, max_denominator: int | None = 10**8, max_iter: int = MAX_ITER):
    """Rational-arithmetic twin of :func:`phase1`; returns ``(objective, x, farkas)`` as Fractions.

    Float inputs are snapped to the nearest fraction with denominator at most
    ``max_denominator`` (``None`` keeps the exact binary value).
    """

    def rat(v):
        f = Fraction(v)
        return f if max_denominator is None else f.limit_denominator(max_denominator)

    A = [[rat(v) for v in row] for row in np.asarray(A).tolist()]
    b = [rat(v) for v in np.asarray(b, dtype=float).tolist()]
    m, n = len(A), len(A[0]) if A else 0
    sign = [-1 if v < 0 else 1 for v in b]
    T = []
    for i in range(m):
        row = [a * sign[i] for a in A[i]] + [Fraction(int(k == i)) for k in range(m)] + [b[i] * sign[i]]
        T.append(row)
    obj = [Fraction(0)] * (n + m + 1)
    for row in T:
        for k in range(n):
            obj[k] -= row[k]
        obj[-1] -= row[-1]
    T.append(obj)
    basis = list(range(n, n + m))
    ncol = n + m

    for _ in range(max_iter):
        j = next((k for k in range(ncol) if T[m][k] < 0), None)
        if j is None:
            break
        best = None
        for i in range(m):
            if T[i][j] > 0:
                ratio = T[i][-1] / T[i][j]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        r = best[1]
        piv = T[r][j]
        T[r] = [v / piv for v in T[r]]
        for i in range(m + 1):
            f = T[i][j]
            if i != r and f:
                T[i] = [v - f * w for v, w in zip(T[i], T[r])]
        basis[r] = j
    else:
        raise RuntimeError("exact phase 1 hit the iteration limit")

    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = T[i][-1]
    farkas = [(1 - T[m][n + i]) * sign[i] for i in range(m)]
    return -T[m][-1], x, farkas
