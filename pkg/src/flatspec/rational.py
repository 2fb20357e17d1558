"""Exact rational and integer linear algebra on lists of lists."""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Sequence

Matrix = list  # list of rows

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$|^\s*[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?\s*$")


def parse_rational(value) -> Fraction:
    """Exact parse of ints, Fractions and strings like "3", "-1/2", "0.25"."""
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL.match(value):
        return Fraction(value.replace(" ", ""))
    raise ValueError(f"not a rational number: {value!r}")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def to_fractions(m) -> Matrix:
    return [[parse_rational(x) for x in row] for row in m]


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Matrix, v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def is_integral(m) -> bool:
    return all(Fraction(x).denominator == 1 for row in m for x in row)


def inverse(m: Matrix) -> Matrix:
    """Gauss-Jordan inverse over Q."""
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def determinant(m: Matrix) -> Fraction:
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def common_denominator(values) -> int:
    d = 1
    for x in values:
        d = math.lcm(d, Fraction(x).denominator)
    return d


def column_hnf(gens: list[list[int]]) -> list[list[int]]:
    """Echelon basis (as vectors) of the Z-span of integer vectors ``gens``."""
    vecs = [list(v) for v in gens if any(v)]
    basis = []
    if not vecs:
        return basis
    n = len(vecs[0])
    for i in range(n):
        with_pivot = [v for v in vecs if v[i] != 0]
        rest = [v for v in vecs if v[i] == 0]
        # Euclid on coordinate i across the generators
        while len(with_pivot) > 1:
            with_pivot.sort(key=lambda v: abs(v[i]))
            head = with_pivot[0]
            nxt = []
            for v in with_pivot[1:]:
                q = v[i] // head[i]
                w = [x - q * y for x, y in zip(v, head)]
                if w[i] != 0:
                    nxt.append(w)
                elif any(w):
                    rest.append(w)
            with_pivot = [head] + nxt
        if with_pivot:
            basis.append(with_pivot[0])
        vecs = [v for v in rest if any(v)]
    return basis


def in_integer_span(vector: Sequence[int], gens: list[list[int]]) -> bool:
    """Exact test v in Z-span(gens)."""
    basis = column_hnf(gens)
    v = list(vector)
    for b in basis:
        i = next(k for k, x in enumerate(b) if x)
        if v[i] % b[i]:
            return False
        q = v[i] // b[i]
        v = [x - q * y for x, y in zip(v, b)]
    return not any(v)
