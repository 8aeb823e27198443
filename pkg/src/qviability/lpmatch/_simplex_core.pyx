"""Compiled phase-1 pivot loop. Same contract and operation order as _simplex_py."""

cimport cython
from libc.math cimport INFINITY


@cython.boundscheck(False)
@cython.wraparound(False)
def run_phase1(double[:, ::1] T, long[::1] basis, double cost_tol,
               double pivot_tol, double ratio_tol, long max_iter):
    cdef Py_ssize_t m = T.shape[0] - 1
    cdef Py_ssize_t ncol = T.shape[1] - 1
    cdef Py_ssize_t i, j, k, r
    cdef double piv, f, ratio, rmin
    cdef long it = 0

    while True:
        j = -1
        for k in range(ncol):
            if T[m, k] < -cost_tol:
                j = k
                break
        if j < 0:
            return 0, it
        if it >= max_iter:
            return 2, it

        rmin = INFINITY
        for i in range(m):
            if T[i, j] > pivot_tol:
                ratio = T[i, ncol] / T[i, j]
                if ratio < rmin:
                    rmin = ratio
        if rmin == INFINITY:
            return 1, it
        r = -1
        for i in range(m):
            if T[i, j] > pivot_tol:
                ratio = T[i, ncol] / T[i, j]
                if ratio <= rmin + ratio_tol and (r < 0 or basis[i] < basis[r]):
                    r = i

        piv = T[r, j]
        for k in range(ncol + 1):
            T[r, k] = T[r, k] / piv
        for i in range(m + 1):
            if i == r:
                continue
            f = T[i, j]
            if f != 0.0:
                for k in range(ncol + 1):
                    T[i, k] = T[i, k] - f * T[r, k]
        basis[r] = j
        it += 1
