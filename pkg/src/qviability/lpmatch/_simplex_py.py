"""Pure-numpy phase-1 pivot loop; reference and fallback for the compiled kernel.

Operates in place on a tableau prepared by :func:`qviability.lpmatch.simplex.prepare`:
rows ``0..m-1`` are constraints, row ``m`` holds reduced costs, the last
column is the right-hand side. Entering column by Bland's rule (lowest
index with a negative reduced cost); leaving row by minimum ratio, ties to
the lowest basic variable index.
"""

import numpy as np

OPTIMAL, UNBOUNDED, ITERATION_LIMIT = 0, 1, 2


def run_phase1(T, basis, cost_tol, pivot_tol, ratio_tol, max_iter):
    m = T.shape[0] - 1
    ncol = T.shape[1] - 1
    it = 0
    while True:
        cand = np.flatnonzero(T[m, :ncol] < -cost_tol)
        if cand.size == 0:
            return OPTIMAL, it
        if it >= max_iter:
            return ITERATION_LIMIT, it
        j = cand[0]
        col = T[:m, j]
        rows = np.flatnonzero(col > pivot_tol)
        if rows.size == 0:
            return UNBOUNDED, it
        ratios = T[rows, ncol] / col[rows]
        ties = rows[ratios <= ratios.min() + ratio_tol]
        r = ties[np.argmin(basis[ties])]

        T[r] = T[r] / T[r, j]
        f = T[:, j].copy()
        f[r] = 0.0
        nz = np.flatnonzero(f)
        T[nz] -= f[nz, None] * T[r]
        basis[r] = j
        it += 1
