"""Characters of O(n) irreducibles at finite-order orthogonal elements.

Conjugacy classes of O(n) are determined by eigenvalues, so every element is
reduced to an :class:`EigenData`: the multiplicities of +1 and -1 and the
rotation angles in (0, 1/2) turns (one entry per pair e^{+-2 pi i t}).

Evaluation routes:

* det = +1: Weyl character formula as a ratio of alternants when the angles
  are well separated, otherwise the determinantal formula
  det(h_{l_i-i+j} - h_{l_i-i-j}) in the eigenvalues, which has no confluence
  singularities.
* det = -1, n odd: g0 = -Id is central and acts by delta.
* det = -1, n even: the element fixes a unit vector; it is conjugated into
  diag(C, 1) and the character is summed over the branching to O(n-1).
"""
from __future__ import annotations

import cmath
import json
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence, Union

import numpy as np
import scipy.linalg

from .orthogonal import OIrrep, branch
from .weights import EVEN, ODD

CONFLUENCE_TOL = 1e-10
ORTHOGONALITY_TOL = 1e-9
WEYL_MIN_GAP = 1e-3
MAX_ORDER = 1000

Turn = Union[Fraction, float]


class NotOrthogonalError(ValueError):
    pass


class OrderNotCertifiedError(ValueError):
    pass


@dataclass(frozen=True)
class EigenData:
    """Eigenvalue multiset of an element of O(n)."""

    n: int
    plus: int
    minus: int
    turns: tuple  # sorted, each strictly inside (0, 1/2)

    def __post_init__(self):
        if self.plus + self.minus + 2 * len(self.turns) != self.n:
            raise ValueError("eigenvalue count does not match n")

    @property
    def det(self) -> int:
        return -1 if self.minus % 2 else 1

    def eigenvalues(self) -> list[complex]:
        vals = [1.0 + 0j] * self.plus + [-1.0 + 0j] * self.minus
        for t in self.turns:
            z = cmath.exp(2j * math.pi * float(t))
            vals += [z, z.conjugate()]
        return vals

    def negated(self) -> "EigenData":
        turns = tuple(sorted(Fraction(1, 2) - t if isinstance(t, Fraction) else 0.5 - t
                             for t in self.turns))
        return EigenData(self.n, self.minus, self.plus, turns)

    def drop_fixed(self) -> "EigenData":
        """Eigen data of C where this element is conjugate to diag(C, 1)."""
        if self.plus < 1:
            raise ValueError("element has no fixed vector")
        return EigenData(self.n - 1, self.plus - 1, self.minus, self.turns)

    def torus_turns(self) -> list[Turn]:
        """Angles of the maximal-torus element conjugate to this det +1 element."""
        if self.det != 1:
            raise ValueError("torus angles need det = +1")
        turns = list(self.turns)
        turns += [Fraction(0)] * (self.plus // 2) + [Fraction(1, 2)] * (self.minus // 2)
        return sorted(turns)


def _snap(turn: float, order: int | None) -> Turn:
    if order:
        j = round(turn * order)
        if abs(turn * order - j) < 1e-6:
            return Fraction(j, order)
    return turn


def eigen_data_from_matrix(matrix, order: int | None = None) -> EigenData:
    """Eigen data of a real orthogonal matrix via its real Schur form."""
    a = np.asarray(matrix, dtype=float)
    n = a.shape[0]
    if n == 0:
        return EigenData(0, 0, 0, ())
    t, _ = scipy.linalg.schur(a, output="real")
    plus = minus = 0
    turns = []
    i = 0
    while i < n:
        if i + 1 < n and abs(t[i + 1, i]) > CONFLUENCE_TOL:
            blk = t[i:i + 2, i:i + 2]
            c = 0.5 * (blk[0, 0] + blk[1, 1])
            s = math.sqrt(max(-blk[0, 1] * blk[1, 0], 0.0))
            theta = math.atan2(s, c)
            if theta < CONFLUENCE_TOL:
                plus += 2
            elif math.pi - theta < CONFLUENCE_TOL:
                minus += 2
            else:
                turns.append(_snap(theta / (2 * math.pi), order))
            i += 2
        else:
            if t[i, i] > 0:
                plus += 1
            else:
                minus += 1
            i += 1
    return EigenData(n, plus, minus, tuple(sorted(turns)))


def matrix_order(matrix, exact: bool, limit: int = MAX_ORDER) -> int:
    """Multiplicative order of a matrix, certified up to ``limit``."""
    if exact:
        m = [list(row) for row in matrix]
        n = len(m)
        ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        p = m
        for k in range(1, limit + 1):
            if p == ident:
                return k
            p = [[sum(p[i][l] * m[l][j] for l in range(n)) for j in range(n)]
                 for i in range(n)]
    else:
        a = np.asarray(matrix, dtype=float)
        p = a.copy()
        ident = np.eye(a.shape[0])
        for k in range(1, limit + 1):
            if np.allclose(p, ident, atol=1e-8):
                return k
            p = p @ a
    raise OrderNotCertifiedError(f"order not certified within {limit}")


def eigen_data_from_integer_matrix(matrix) -> EigenData:
    """Exact eigen data of an integer matrix of finite order.

    The multiplicity of each k-th root of unity is a discrete Fourier
    transform of the traces tr(B^j), which are exact integers.
    """
    m = [[int(x) for x in row] for row in matrix]
    n = len(m)
    k = matrix_order(m, exact=True)
    traces = []
    p = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(k):
        traces.append(sum(p[i][i] for i in range(n)))
        p = [[sum(p[i][l] * m[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
    mult = []
    for s in range(k):
        v = sum(tr * cmath.exp(-2j * math.pi * j * s / k) for j, tr in enumerate(traces)) / k
        r = round(v.real)
        if abs(v - r) > 1e-6 or r < 0:
            raise ValueError("matrix is not diagonalizable over roots of unity")
        mult.append(r)
    plus = mult[0]
    minus = mult[k // 2] if k % 2 == 0 else 0
    turns = []
    for s in range(1, (k + 1) // 2):
        if mult[s] != mult[k - s]:
            raise ValueError("eigenvalues are not closed under conjugation")
        turns += [Fraction(s, k)] * mult[s]
    return EigenData(n, plus, minus, tuple(sorted(turns)))


class OrthogonalElement:
    """A finite-order element of O(n)."""

    def __init__(self, matrix, order: int | None = None, exact: bool | None = None):
        rows = [list(r) for r in matrix]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise NotOrthogonalError("matrix must be square")
        if exact is None:
            exact = all(isinstance(x, (int, Fraction)) for r in rows for x in r)
        self.n = n
        self.exact = exact
        if exact:
            rows = [[Fraction(x) for x in r] for r in rows]
            gram = [[sum(rows[k][i] * rows[k][j] for k in range(n)) for j in range(n)]
                    for i in range(n)]
            if any(gram[i][j] != (1 if i == j else 0) for i in range(n) for j in range(n)):
                raise NotOrthogonalError("matrix is not orthogonal")
            self.rows = rows
            self.matrix = np.array([[float(x) for x in r] for r in rows]).reshape(n, n)
        else:
            self.rows = None
            self.matrix = np.asarray(rows, dtype=float).reshape(n, n)
            if not np.allclose(self.matrix.T @ self.matrix, np.eye(n), atol=ORTHOGONALITY_TOL):
                raise NotOrthogonalError("matrix is not orthogonal")
        self.order = order if order is not None else matrix_order(
            self.rows if exact else self.matrix, exact)
        self.det = 1 if n == 0 else int(round(np.linalg.det(self.matrix)))

    def eigen_data(self) -> EigenData:
        return eigen_data_from_matrix(self.matrix, self.order)

    def inverse(self) -> "OrthogonalElement":
        if self.exact:
            return OrthogonalElement([list(c) for c in zip(*self.rows)], self.order, True)
        return OrthogonalElement(self.matrix.T, self.order, False)

    def fixed_vectors(self) -> np.ndarray:
        """Orthonormal basis (columns) of the +1 eigenspace."""
        _, s, vt = np.linalg.svd(self.matrix - np.eye(self.n))
        return vt[s < 1e-8].T

    def restrict_to_complement(self, v) -> "OrthogonalElement":
        """C with Q^T B Q = diag(C, 1) for an orthonormal Q whose last column is v."""
        v = np.asarray(v, dtype=float)
        v = v / np.linalg.norm(v)
        q = _complete_basis(v)
        conj = q.T @ self.matrix @ q
        if not np.allclose(conj[-1], np.eye(self.n)[-1], atol=1e-8):
            raise ValueError("vector is not fixed by the element")
        return OrthogonalElement(conj[:-1, :-1], self.order, False)


def _complete_basis(v: np.ndarray) -> np.ndarray:
    """Orthogonal matrix with last column v (Householder reflection)."""
    n = v.size
    e = np.zeros(n)
    e[-1] = 1.0
    w = v - e
    if np.linalg.norm(w) < 1e-14:
        return np.eye(n)
    w /= np.linalg.norm(w)
    return np.eye(n) - 2.0 * np.outer(w, w)


# -- symmetric-function evaluation ------------------------------------------

def complete_homogeneous(values: Sequence[complex], degree: int) -> list[complex]:
    """h_0..h_degree of the given variables."""
    h = [0j] * (degree + 1)
    h[0] = 1.0 + 0j
    for x in values:
        for k in range(1, degree + 1):
            h[k] += x * h[k - 1]
    return h


def orthogonal_schur(partition: Sequence[int], values: Sequence[complex]) -> complex:
    """det(h_{l_i-i+j} - h_{l_i-i-j}), the O(N) character of a partition label."""
    parts = [p for p in partition if p > 0]
    ell = len(parts)
    if not ell:
        return 1.0 + 0j
    h = complete_homogeneous(values, parts[0] + ell)

    def hk(k):
        return h[k] if 0 <= k < len(h) else 0j

    mat = np.array([[hk(parts[i] - i + j) - hk(parts[i] - i - j - 2)
                     for j in range(ell)] for i in range(ell)], dtype=complex)
    return complex(np.linalg.det(mat))


def associate(partition: Sequence[int], n: int) -> tuple[int, ...]:
    """Partition of tau (x) det: first column of length c replaced by n - c."""
    parts = [p for p in partition if p > 0]
    c = len(parts)
    if c <= n - c:
        return tuple(parts + [1] * (n - 2 * c))
    keep = parts[: n - c]
    return tuple(keep)


def partition_label(tau: OIrrep) -> tuple[int, ...]:
    """Partition labelling ``tau`` as a traceless tensor representation."""
    lam = tuple(a for a in tau.weight if a > 0)
    size = sum(lam)
    if tau.n % 2:
        return lam if tau.delta == (-1) ** size else associate(lam, tau.n)
    return associate(lam, tau.n) if tau.delta == -1 else lam


# -- Weyl character formula ---------------------------------------------------

def _well_separated(turns: Sequence[float], odd: bool) -> bool:
    pts = sorted(float(t) for t in turns)
    if odd and pts and pts[0] < WEYL_MIN_GAP:
        return False
    return all(b - a > WEYL_MIN_GAP for a, b in zip(pts, pts[1:]))


def weyl_ratio(coords: Sequence[int], odd: bool, turns: Sequence[Turn]) -> float:
    """Alternant ratio; for even rank with a_m != 0 returns chi_L + chi_bar(L)."""
    m = len(coords)
    if m == 0:
        return 1.0
    theta = np.array([2 * math.pi * float(t) for t in turns])
    if odd:
        rho = np.array([m - i - 0.5 for i in range(m)])
        ell = np.array(coords, dtype=float) + rho
        num = np.linalg.det(np.sin(np.outer(ell, theta)))
        den = np.linalg.det(np.sin(np.outer(rho, theta)))
        return float(num / den)
    rho = np.array([m - i - 1.0 for i in range(m)])
    ell = np.array(coords, dtype=float) + rho
    num = np.linalg.det(np.cos(np.outer(ell, theta)))
    den = np.linalg.det(np.cos(np.outer(rho, theta)))
    factor = 2.0 if coords[-1] != 0 else 1.0
    return float(factor * num / den)


def so_character(coords: Sequence[int], n: int, turns: Sequence[Turn]) -> float:
    """Character of V_L (plus V_bar(L) when n is even and a_m > 0) at a torus element."""
    odd = bool(n % 2)
    if _well_separated(turns, odd):
        return weyl_ratio(coords, odd, turns)
    vals = []
    for t in turns:
        z = cmath.exp(2j * math.pi * float(t))
        vals += [z, z.conjugate()]
    if odd:
        vals.append(1.0 + 0j)
    return orthogonal_schur(coords, vals).real


@lru_cache(maxsize=65536)
def character_from_eigen(tau: OIrrep, data: EigenData) -> complex:
    if data.n != tau.n:
        raise ValueError(f"element of O({data.n}) for a representation of O({tau.n})")
    coords = tau.weight
    if data.det == 1:
        return complex(so_character(coords, tau.n, data.torus_turns()))
    if tau.n % 2:
        return complex(tau.delta * so_character(coords, tau.n, data.negated().torus_turns()))
    if tau.delta == 0:
        # g0 swaps V_L and V_bar(L); the det -1 component is traceless
        return 0j
    reduced = data.drop_fixed()
    return sum((character_from_eigen(s, reduced) for s in branch(tau)), 0j)


def character(tau: OIrrep, element, fixed_vector=None) -> complex:
    """tr tau(B) for an OrthogonalElement, EigenData, or square matrix."""
    if isinstance(element, EigenData):
        return character_from_eigen(tau, element)
    if not isinstance(element, OrthogonalElement):
        element = OrthogonalElement(element)
    if element.n != tau.n:
        raise ValueError(f"element of O({element.n}) for a representation of O({tau.n})")
    if tau.n % 2 == 0 and element.det == -1 and tau.delta != 0:
        if fixed_vector is None:
            fixed_vector = element.fixed_vectors()[:, 0]
        sub = element.restrict_to_complement(fixed_vector)
        return sum((character(s, sub) for s in branch(tau)), 0j)
    return character_from_eigen(tau, element.eigen_data())


# -- persistent memo --------------------------------------------------------------
# Characters at exact eigen data (rational angles) can be kept on disk between
# runs. Values are stored with repr(), so reloading reproduces them bit for bit.

MEMO_FILE = "characters.json"
_memo: dict = {}
_memo_lock = threading.Lock()


def memo_character(tau: OIrrep, data: EigenData) -> complex:
    key = (tau, data)
    with _memo_lock:
        hit = _memo.get(key)
    if hit is None:
        hit = character_from_eigen(tau, data)
        with _memo_lock:
            _memo[key] = hit
    return hit


def _exact(data: EigenData) -> bool:
    return all(isinstance(t, Fraction) for t in data.turns)


def save_memo(directory) -> int:
    """Write exact-angle entries of the memo to ``directory``; returns the entry count."""
    with _memo_lock:
        items = [(k, v) for k, v in _memo.items() if _exact(k[1])]
    rows = sorted(
        ([tau.to_json(), [d.n, d.plus, d.minus, [str(t) for t in d.turns]], repr(v.real), repr(v.imag)]
         for (tau, d), v in items),
        key=json.dumps,
    )
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    tmp = path / (MEMO_FILE + ".tmp")
    tmp.write_text(json.dumps(rows))
    tmp.replace(path / MEMO_FILE)
    return len(rows)


def load_memo(directory) -> int:
    path = Path(directory) / MEMO_FILE
    if not path.exists():
        return 0
    rows = json.loads(path.read_text())
    with _memo_lock:
        for tau, (n, plus, minus, turns), re_, im_ in rows:
            data = EigenData(n, plus, minus, tuple(Fraction(t) for t in turns))
            _memo[(OIrrep.from_json(tau), data)] = complex(float(re_), float(im_))
    return len(rows)
