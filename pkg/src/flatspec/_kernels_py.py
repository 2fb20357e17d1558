"""Pure-Python versions of the lattice kernels (same contract as _kernels.pyx)."""
from __future__ import annotations

import math

import numpy as np

# slack on the floating bounds; the exact integer filter removes false hits
_WIDEN = 1e-7


def _fp_form(q):
    """Fincke-Pohst coefficients: Q(x) = sum_i c[i][i] (x_i + sum_{j>i} c[i][j] x_j)^2."""
    n = len(q)
    c = [[float(x) for x in row] for row in q]
    for i in range(n):
        if c[i][i] <= 0:
            raise ValueError("quadratic form is not positive definite")
        for j in range(i + 1, n):
            c[j][i] = c[i][j]
            c[i][j] /= c[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                c[k][l] -= c[k][i] * c[i][l]
    return c


def short_vectors(q, bound: int):
    """All integer x with x^T q x <= bound, for an integer positive definite q.

    Returns (points, norms) as int64 arrays, in enumeration order.
    """
    n = len(q)
    q = [[int(x) for x in row] for row in q]
    c = _fp_form(q)
    tol = _WIDEN * (abs(bound) + 1)
    pts, norms = [], []
    x = [0] * n
    remaining = [0.0] * (n + 1)
    remaining[n] = float(bound)

    def exact_norm():
        return sum(q[i][j] * x[i] * x[j] for i in range(n) for j in range(n))

    def descend(i):
        if i < 0:
            nm = exact_norm()
            if nm <= bound:
                pts.append(tuple(x))
                norms.append(nm)
            return
        centre = -sum(c[i][j] * x[j] for j in range(i + 1, n))
        rem = remaining[i + 1]
        if rem < -tol:
            return
        radius = math.sqrt(max(rem, 0.0) / c[i][i] + tol)
        for v in range(math.ceil(centre - radius), math.floor(centre + radius) + 1):
            x[i] = v
            remaining[i] = rem - c[i][i] * (v - centre) ** 2
            descend(i - 1)
        x[i] = 0

    if n == 0:
        return np.zeros((1, 0), dtype=np.int64), np.zeros(1, dtype=np.int64)
    descend(n - 1)
    return (np.array(pts, dtype=np.int64).reshape(len(pts), n),
            np.array(norms, dtype=np.int64))


def residue_counts(points, shell, nshells: int, bt, anum, den: int):
    """counts[s, r] = #{points p in shell s : bt p = p and p . anum = r mod den}."""
    n = len(anum)
    bt = [[int(v) for v in row] for row in bt]
    anum = [int(v) for v in anum]
    counts = [[0] * den for _ in range(nshells)]
    for p, s in zip(points.tolist(), shell.tolist()):
        fixed = True
        for i in range(n):
            if sum(bt[i][j] * p[j] for j in range(n)) != p[i]:
                fixed = False
                break
        if fixed:
            counts[s][sum(a * v for a, v in zip(anum, p)) % den] += 1
    return np.array(counts, dtype=np.int64).reshape(nshells, den)
