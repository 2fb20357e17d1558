# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice kernels: Fincke-Pohst enumeration and phase residue counting."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, ceil, floor
from libc.stdlib cimport malloc, realloc, free
from libc.stdint cimport int64_t

cnp.import_array()

cdef double _WIDEN = 1e-7


cdef int _grow(int64_t **buf, Py_ssize_t *cap, Py_ssize_t need) noexcept nogil:
    cdef Py_ssize_t newcap = cap[0]
    cdef int64_t *p
    while newcap < need:
        newcap *= 2
    if newcap == cap[0]:
        return 0
    p = <int64_t *> realloc(buf[0], newcap * sizeof(int64_t))
    if p == NULL:
        return -1
    buf[0] = p
    cap[0] = newcap
    return 0


def short_vectors(q, long long bound):
    """All integer x with x^T q x <= bound, for an integer positive definite q."""
    cdef cnp.int64_t[:, ::1] Q = np.ascontiguousarray(q, dtype=np.int64)
    cdef Py_ssize_t n = Q.shape[0]
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64), np.zeros(1, dtype=np.int64)
    cdef double[:, ::1] c = np.array(Q, dtype=np.float64)
    cdef Py_ssize_t i, j, k, l
    for i in range(n):
        if c[i, i] <= 0:
            raise ValueError("quadratic form is not positive definite")
        for j in range(i + 1, n):
            c[j, i] = c[i, j]
            c[i, j] /= c[i, i]
        for k in range(i + 1, n):
            for l in range(k, n):
                c[k, l] -= c[k, i] * c[i, l]

    cdef double tol = _WIDEN * (abs(bound) + 1)
    cdef int64_t[::1] x = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] hi = np.zeros(n, dtype=np.int64)
    cdef double[::1] centre = np.zeros(n, dtype=np.float64)
    cdef double[::1] remaining = np.zeros(n + 1, dtype=np.float64)
    cdef Py_ssize_t cap = 1024, npts = 0
    cdef int64_t *pts = <int64_t *> malloc(cap * n * sizeof(int64_t))
    cdef Py_ssize_t ncap = 1024
    cdef int64_t *nrm = <int64_t *> malloc(ncap * sizeof(int64_t))
    cdef double s, rem, radius
    cdef int64_t exact
    cdef int failed = 0
    if pts == NULL or nrm == NULL:
        free(pts); free(nrm)
        raise MemoryError()

    with nogil:
        remaining[n] = <double> bound
        i = n - 1
        # start level i
        s = 0.0
        centre[i] = 0.0
        rem = remaining[i + 1]
        radius = sqrt((rem if rem > 0 else 0.0) / c[i, i] + tol)
        x[i] = <int64_t> ceil(-radius)
        hi[i] = <int64_t> floor(radius)
        while True:
            if x[i] > hi[i]:
                # level exhausted: go up
                i += 1
                if i >= n:
                    break
                x[i] += 1
                continue
            remaining[i] = remaining[i + 1] - c[i, i] * (x[i] - centre[i]) * (x[i] - centre[i])
            if remaining[i] < -tol:
                x[i] += 1
                continue
            if i == 0:
                exact = 0
                for k in range(n):
                    for l in range(n):
                        exact += Q[k, l] * x[k] * x[l]
                if exact <= bound:
                    if _grow(&pts, &cap, (npts + 1) * n) != 0 or _grow(&nrm, &ncap, npts + 1) != 0:
                        failed = 1
                        break
                    for k in range(n):
                        pts[npts * n + k] = x[k]
                    nrm[npts] = exact
                    npts += 1
                x[0] += 1
                continue
            # descend to level i - 1
            i -= 1
            s = 0.0
            for j in range(i + 1, n):
                s += c[i, j] * x[j]
            centre[i] = -s
            rem = remaining[i + 1]
            radius = sqrt((rem if rem > 0 else 0.0) / c[i, i] + tol)
            x[i] = <int64_t> ceil(centre[i] - radius)
            hi[i] = <int64_t> floor(centre[i] + radius)

    if failed:
        free(pts); free(nrm)
        raise MemoryError()
    points = np.empty((npts, n), dtype=np.int64)
    norms = np.empty(npts, dtype=np.int64)
    cdef int64_t[:, ::1] P = points
    cdef int64_t[::1] N = norms
    for i in range(npts):
        N[i] = nrm[i]
        for k in range(n):
            P[i, k] = pts[i * n + k]
    free(pts); free(nrm)
    return points, norms


def residue_counts(points, shell, Py_ssize_t nshells, bt, anum, long long den):
    """counts[s, r] = #{points p in shell s : bt p = p and p . anum = r mod den}."""
    cdef int64_t[:, ::1] P = np.ascontiguousarray(points, dtype=np.int64)
    cdef int64_t[::1] S = np.ascontiguousarray(shell, dtype=np.int64)
    cdef int64_t[:, ::1] B = np.ascontiguousarray(bt, dtype=np.int64)
    cdef int64_t[::1] A = np.ascontiguousarray(anum, dtype=np.int64)
    counts = np.zeros((nshells, den), dtype=np.int64)
    cdef int64_t[:, ::1] C = counts
    cdef Py_ssize_t npts = P.shape[0], n = P.shape[1], p, i, j
    cdef int64_t acc, r
    cdef bint fixed
    with nogil:
        for p in range(npts):
            fixed = True
            for i in range(n):
                acc = 0
                for j in range(n):
                    acc += B[i, j] * P[p, j]
                if acc != P[p, i]:
                    fixed = False
                    break
            if not fixed:
                continue
            r = 0
            for i in range(n):
                r += A[i] * P[p, i]
            r %= den
            if r < 0:
                r += den
            C[S[p], r] += 1
    return counts
