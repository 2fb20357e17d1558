"""Dominant integral weights of SO(n).

A weight of SO(2m+1) ("odd" parity) is an integer tuple a1 >= ... >= am >= 0;
a weight of SO(2m) ("even" parity) satisfies a1 >= ... >= a_{m-1} >= |am|.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

ODD = "odd"
EVEN = "even"


class InvalidWeightError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Weight:
    rank: int
    coords: tuple[int, ...]
    parity: str

    @property
    def n(self) -> int:
        """Dimension of the orthogonal group this weight parameterizes."""
        return 2 * self.rank + (1 if self.parity == ODD else 0)

    @property
    def size(self) -> int:
        return sum(abs(a) for a in self.coords)

    @property
    def last(self) -> int:
        return self.coords[-1] if self.coords else 0

    def __str__(self) -> str:
        return "(" + ",".join(str(a) for a in self.coords) + ")"

    def to_json(self) -> dict:
        return {"coords": list(self.coords), "parity": self.parity}

    @classmethod
    def from_json(cls, data: dict) -> "Weight":
        coords = [int(a) for a in data["coords"]]
        return validate(coords, len(coords), data["parity"])


def validate(coords: Iterable[int], rank: int, parity: str) -> Weight:
    coords = tuple(int(a) for a in coords)
    if parity not in (ODD, EVEN):
        raise InvalidWeightError(f"parity must be 'odd' or 'even', got {parity!r}")
    if len(coords) != rank:
        raise InvalidWeightError(f"expected {rank} coordinates, got {len(coords)}")
    for i in range(rank - 1):
        if coords[i] < coords[i + 1]:
            raise InvalidWeightError(
                f"a{i + 1} >= a{i + 2} violated: {coords[i]} < {coords[i + 1]}"
            )
    if rank:
        if parity == ODD and coords[-1] < 0:
            raise InvalidWeightError(f"a{rank} >= 0 violated: {coords[-1]} < 0")
        if parity == EVEN and rank > 1 and coords[-2] < abs(coords[-1]):
            raise InvalidWeightError(
                f"a{rank - 1} >= |a{rank}| violated: {coords[-2]} < {abs(coords[-1])}"
            )
    return Weight(rank, coords, parity)


def zero(rank: int, parity: str) -> Weight:
    return Weight(rank, (0,) * rank, parity)


def for_group(n: int, coords: Iterable[int]) -> Weight:
    """Validate ``coords`` as a highest weight of SO(n)."""
    coords = tuple(coords)
    return validate(coords, n // 2, ODD if n % 2 else EVEN)


def bar(weight: Weight) -> Weight:
    if weight.parity != EVEN:
        raise InvalidWeightError("bar is only defined for SO(2m) weights")
    if not weight.rank:
        return weight
    return Weight(weight.rank, weight.coords[:-1] + (-weight.coords[-1],), EVEN)


def less(mu1: Weight, mu2: Weight) -> bool:
    """Order on weights with nonnegative last coordinate.

    ``less(mu1, mu2)`` holds when the differences c_i - b_i (mu1 = b, mu2 = c)
    form a weakly decreasing chain of nonnegative integers. Equal weights
    satisfy it; use :func:`strictly_less` for the strict relation.
    """
    if (mu1.rank, mu1.parity) != (mu2.rank, mu2.parity):
        raise InvalidWeightError("weights must have equal rank and parity")
    if mu1.last < 0 or mu2.last < 0:
        raise InvalidWeightError("order is only defined for nonnegative last coordinate")
    diffs = [c - b for b, c in zip(mu1.coords, mu2.coords)]
    return all(x >= y for x, y in zip(diffs, diffs[1:])) and (not diffs or diffs[-1] >= 0)


def strictly_less(mu1: Weight, mu2: Weight) -> bool:
    return mu1 != mu2 and less(mu1, mu2)


def ell(weight: Weight) -> int:
    for p in range(weight.rank, 0, -1):
        if weight.coords[p - 1] != 0:
            return p
    return 0


def processing_key(weight: Weight) -> tuple:
    """Sort key driving the reconstruction induction.

    Groups by level, then by the last nonzero coordinate, then by total size.
    Every interlacing partner mu != mu0 of a lift of mu0 is componentwise
    below mu0, hence sorts strictly earlier.
    """
    p = ell(weight)
    lead = abs(weight.coords[p - 1]) if p else 0
    negative_tail = weight.parity == EVEN and weight.last < 0
    return (p, lead, weight.size, tuple(abs(a) for a in weight.coords), negative_tail)


def enumerate_weights(rank: int, parity: str, bound: int) -> list[Weight]:
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    found = []
    for coords in itertools.product(range(bound, -1, -1), repeat=rank):
        if any(coords[i] < coords[i + 1] for i in range(rank - 1)):
            continue
        found.append(Weight(rank, coords, parity))
        if parity == EVEN and rank and coords[-1] > 0:
            found.append(bar(Weight(rank, coords, parity)))
    return sorted(found, key=processing_key)
