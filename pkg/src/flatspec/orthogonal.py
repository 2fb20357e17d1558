"""Irreducible representations of O(n) and their branching to O(n-1).

An irreducible of O(n) is labelled ``tau(Lambda, delta)`` with ``Lambda`` a
highest weight of SO(n) normalized to a_m >= 0:

* n odd: delta = +1 or -1 is the scalar by which -Id acts.
* n even, a_m = 0: delta = +1 or -1 is the sign by which
  g0 = diag(1, ..., 1, -1) acts on the highest weight line (convention A).
* n even, a_m > 0: delta = 0, the representation lives on V_Lambda + V_bar(Lambda).

Two embeddings of O(n-1) in O(n) are supported by :func:`branch`:

``"standard"``
    B -> diag(B, 1), the stabilizer of e_n. The bundle spectra use this one.
``"M"``
    B -> diag(B, det B). Restriction along it is *not* multiplicity free in
    general (Lambda^2 C^4 restricts to twice the same O(3) irreducible), so
    constituents are returned with repetition.

Labels of O(n-1) constituents carry a sign convention: ``"A"`` is the one
described above, ``"B"`` negates every nonzero kappa. Labels of O(n) itself
(the argument ``tau``) are always read in convention A.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .weights import EVEN, ODD, Weight, enumerate_weights, for_group, processing_key, zero

CONVENTIONS = ("A", "B")
EMBEDDINGS = ("standard", "M")


class InvalidIrrepError(ValueError):
    pass


@dataclass(frozen=True)
class OIrrep:
    n: int
    highest: Weight
    delta: int

    def __post_init__(self):
        w = self.highest
        if w.n != self.n:
            raise InvalidIrrepError(f"weight {w} does not belong to SO({self.n})")
        if w.last < 0:
            raise InvalidIrrepError("highest weight must be normalized to a_m >= 0")
        if self.n % 2 == 0 and w.rank and w.last > 0:
            if self.delta != 0:
                raise InvalidIrrepError(f"a_m > 0 forces delta = 0 in O({self.n})")
        elif self.delta not in (1, -1):
            raise InvalidIrrepError(f"delta must be +1 or -1 for {w} in O({self.n})")

    @property
    def weight(self) -> tuple[int, ...]:
        return self.highest.coords

    def sort_key(self) -> tuple:
        return (self.n, processing_key(self.highest), -self.delta if self.delta else 2)

    def __lt__(self, other: "OIrrep") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        sign = {1: "+1", -1: "-1", 0: "0"}[self.delta]
        return f"O({self.n})[{','.join(map(str, self.weight))};{sign}]"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "weight": list(self.weight),
            "parity": self.highest.parity,
            "delta": self.delta,
        }

    @classmethod
    def from_json(cls, data: dict) -> "OIrrep":
        return irrep(int(data["n"]), data["weight"], int(data["delta"]))


def irrep(n: int, coords, delta: int) -> OIrrep:
    return OIrrep(n, for_group(n, coords), int(delta))


def trivial(n: int) -> OIrrep:
    return OIrrep(n, zero(n // 2, ODD if n % 2 else EVEN), 1)


def determinant(n: int) -> OIrrep:
    return OIrrep(n, zero(n // 2, ODD if n % 2 else EVEN), -1)


def _allowed_deltas(n: int, weight: Weight) -> tuple[int, ...]:
    if n % 2 == 0 and weight.rank and weight.last > 0:
        return (0,)
    return (1, -1)


def catalog(n: int, bound: int) -> list[OIrrep]:
    if n < 1:
        raise ValueError("n must be at least 1")
    parity = ODD if n % 2 else EVEN
    out = []
    for w in enumerate_weights(n // 2, parity, bound):
        if w.last < 0:
            continue
        out.extend(OIrrep(n, w, d) for d in _allowed_deltas(n, w))
    return sorted(out)


def so_dimension(weight: Weight) -> int:
    """Weyl dimension formula for SO(2m+1) (type B) and SO(2m) (type D)."""
    m = weight.rank
    if weight.parity == ODD:
        rho = [Fraction(2 * (m - i) - 1, 2) for i in range(m)]
    else:
        rho = [Fraction(m - i - 1) for i in range(m)]
    ell = [a + r for a, r in zip(weight.coords, rho)]
    dim = Fraction(1)
    for i in range(m):
        for j in range(i + 1, m):
            dim *= (ell[i] ** 2 - ell[j] ** 2) / (rho[i] ** 2 - rho[j] ** 2)
    if weight.parity == ODD:
        for li, ri in zip(ell, rho):
            dim *= li / ri
    assert dim.denominator == 1
    return int(dim)


def dim(tau: OIrrep) -> int:
    d = so_dimension(tau.highest)
    return 2 * d if tau.delta == 0 else d


def det_twist(tau: OIrrep) -> OIrrep:
    return OIrrep(tau.n, tau.highest, -tau.delta)


def dual(tau: OIrrep) -> OIrrep:
    # every irreducible of O(n) is self-dual
    return tau


def _with_kappa(n: int, weight: Weight, kappa: int) -> OIrrep:
    return OIrrep(n, weight, kappa)


def _interlacing(coords: tuple[int, ...], length: int):
    """All b with a1 >= b1 >= a2 >= b2 >= ..., of the given length."""
    padded = coords + (0,)
    ranges = [range(padded[i + 1], padded[i] + 1) for i in range(length)]
    return product(*ranges)


@lru_cache(maxsize=None)
def _branch(tau: OIrrep, embedding: str, convention: str) -> tuple[OIrrep, ...]:
    n = tau.n
    if n < 2:
        raise ValueError("branching needs n >= 2")
    a = tau.weight
    size = sum(a)
    flip = -1 if convention == "B" else 1
    out = []
    if n % 2:
        # O(2m+1) -> O(2m): a1 >= b1 >= ... >= am >= bm >= 0
        m = len(a)
        for b in _interlacing(a, m):
            w = Weight(m, tuple(b), EVEN)
            if m and b[-1] > 0:
                out.append(_with_kappa(n - 1, w, 0))
                continue
            if embedding == "standard":
                kappa = tau.delta * (-1) ** size
            else:
                kappa = (-1) ** (size + sum(b))
            out.append(_with_kappa(n - 1, w, flip * kappa))
    else:
        # O(2m) -> O(2m-1): a1 >= b1 >= ... >= a_{m-1} >= b_{m-1} >= am
        m = len(a)
        for b in _interlacing(a, m - 1):
            w = Weight(m - 1, tuple(b), ODD)
            if embedding == "M":
                kappas = [(-1) ** size] * (2 if tau.delta == 0 else 1)
            elif tau.delta == 0:
                kappas = [1, -1]
            else:
                kappas = [tau.delta * (-1) ** sum(b)]
            out.extend(_with_kappa(n - 1, w, flip * k) for k in kappas)
    return tuple(sorted(out))


def branch(tau: OIrrep, embedding: str = "standard", convention: str = "A") -> list[OIrrep]:
    """Constituents of the restriction of ``tau`` to O(n-1), one entry per copy."""
    if embedding not in EMBEDDINGS:
        raise ValueError(f"unknown embedding {embedding!r}")
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    return list(_branch(tau, embedding, convention))


def restriction_mult(sigma: OIrrep, tau: OIrrep, embedding: str = "standard",
                     convention: str = "A") -> int:
    """[sigma : tau|O(n-1)]; 0 or 1 for the standard embedding."""
    if sigma.n != tau.n - 1:
        return 0
    return branch(tau, embedding, convention).count(sigma)


def relabel(sigma: OIrrep, convention: str) -> OIrrep:
    """Convert a label between conventions A and B (an involution)."""
    if convention == "A" or sigma.delta == 0:
        return sigma
    return det_twist(sigma)
