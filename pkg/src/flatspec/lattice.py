"""Exact enumeration of dual-lattice vectors by norm.

A Bieberbach group with lattice matrix L has dual lattice L^{-T} Z^n. In
those coordinates the squared norm of L^{-T} k is k^T G^{-1} k (G = L^T L),
a rational quadratic form. It is scaled by the common denominator D to an
integer form, so every shell is an exact integer N and nu = N / D.

The kernels come from the compiled extension when it is importable, and from
:mod:`flatspec._kernels_py` otherwise (or when FLATSPEC_PURE_PYTHON=1).
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels_py
from . import rational as rq

if os.environ.get("FLATSPEC_PURE_PYTHON", "") not in ("", "0"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"
MAX_POINTS = 20_000_000
_INT64_SAFE = 2 ** 62


class EnumerationOverflowError(OverflowError):
    pass


def kernels(backend: str | None = None):
    """The kernel module for ``backend`` ("compiled", "python" or None for the default)."""
    backend = backend or BACKEND
    if backend == "python":
        return _kernels_py
    if backend == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown backend {backend!r}")


def integer_form(gram_inverse) -> tuple[list[list[int]], int]:
    """(D * Q, D) for a rational form Q, D the least common denominator."""
    D = rq.common_denominator(x for row in gram_inverse for x in row)
    return [[int(x * D) for x in row] for row in gram_inverse], D


def _guard(q: list[list[int]], bound: int):
    """Refuse forms whose enumeration could overflow int64 arithmetic."""
    n = len(q)
    if n == 0:
        return
    qf = np.array(q, dtype=float)
    if not np.allclose(qf, qf.T) or np.linalg.eigvalsh(qf).min() <= 0:
        raise ValueError("quadratic form is not positive definite")
    qinv = np.linalg.inv(qf)
    kmax = max(math.sqrt(max(bound, 0) * max(qinv[i, i], 0.0)) for i in range(n)) + 1
    qmax = max(abs(x) for row in q for x in row)
    if n * n * qmax * kmax * kmax >= _INT64_SAFE or bound >= _INT64_SAFE:
        raise EnumerationOverflowError("norm bound too large for 64-bit enumeration")
    volume = math.pi ** (n / 2) / math.gamma(n / 2 + 1) * (bound + 1) ** (n / 2)
    volume /= math.sqrt(max(np.linalg.det(np.array(q, dtype=float)), 1e-300))
    if volume > MAX_POINTS:
        raise EnumerationOverflowError(f"about {volume:.3g} lattice points requested, cap is {MAX_POINTS}")


@dataclass(frozen=True)
class Shells:
    """Dual vectors (integer coordinates) with norm <= bound, grouped by shell."""
    points: np.ndarray  # (N, n) int64
    shell: np.ndarray  # (N,) index into values
    values: tuple[Fraction, ...]  # distinct nu, ascending
    scale: int  # D

    @property
    def count(self) -> int:
        return len(self.shell)

    def shell_sizes(self) -> list[int]:
        return np.bincount(self.shell, minlength=len(self.values)).tolist()


def enumerate_shells(gram_inverse, nu_max, backend: str | None = None) -> Shells:
    q, D = integer_form(gram_inverse)
    nu_max = Fraction(nu_max)
    if nu_max < 0:
        raise ValueError("nu_max must be nonnegative")
    bound = math.floor(nu_max * D)
    _guard(q, bound)
    pts, norms = kernels(backend).short_vectors(q, bound)
    order = np.lexsort(tuple(pts[:, j] for j in reversed(range(pts.shape[1]))) + (norms,))
    pts, norms = pts[order], norms[order]
    distinct, shell = np.unique(norms, return_inverse=True)
    values = tuple(Fraction(int(v), D) for v in distinct)
    return Shells(np.ascontiguousarray(pts), shell.astype(np.int64), values, D)


def phase_counts(shells: Shells, bt, anum, den: int, backend: str | None = None,
                 threads: int = 1) -> np.ndarray:
    """counts[s, r]: fixed points of bt in shell s with phase numerator r (mod den).

    Work is split into contiguous shell ranges; the integer counts are summed,
    so the result does not depend on ``threads``.
    """
    mod = kernels(backend)
    nshells = len(shells.values)
    if threads <= 1 or shells.count < 2048 or mod is _kernels_py:
        return mod.residue_counts(shells.points, shells.shell, nshells, bt, anum, den)
    cuts = np.linspace(0, shells.count, threads + 1).astype(int)
    chunks = [(shells.points[a:b], shells.shell[a:b]) for a, b in zip(cuts, cuts[1:]) if b > a]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda c: mod.residue_counts(c[0], c[1], nshells, bt, anum, den), chunks))
    return sum(parts[1:], parts[0])
