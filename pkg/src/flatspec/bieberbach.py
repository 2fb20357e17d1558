"""Bieberbach groups with rational lattices, stored exactly in lattice coordinates.

A group element g = B L_b (translate by b, then apply B) acts as the affine map
x -> Bx + a with a = Bb. Coset representatives are stored in that affine form
with B an integer matrix in lattice coordinates and a reduced to [0, 1)^n.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from . import rational as rq

MAX_GROUP_ORDER = 1152

NON_CRYSTALLOGRAPHIC = "non-crystallographic"
NON_GROUP = "non-group"
NON_FREE = "non-free"


class InvalidGroupError(ValueError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("; ".join(f"{k}: {m}" for k, m in report.violations))


class FamilyTooLargeError(RuntimeError):
    pass


def _mod1(v: Iterable[Fraction]) -> tuple[Fraction, ...]:
    return tuple(x - math.floor(x) for x in v)


def _freeze(m) -> tuple[tuple[int, ...], ...]:
    """Integer matrix as nested tuples; rejects non-integral entries."""
    out = []
    for row in m:
        r = []
        for x in row:
            x = Fraction(x)
            if x.denominator != 1:
                report = ValidationReport()
                report.add(NON_CRYSTALLOGRAPHIC, "rotation part does not preserve the lattice")
                raise InvalidGroupError(report)
            r.append(x.numerator)
        out.append(tuple(r))
    return tuple(out)


def _imatmul(a, b):
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def _imatvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def affine_translation(rotation, translation) -> list[Fraction]:
    """Translation a of x -> Bx + a for the element B L_b with b = ``translation``."""
    return rq.matvec(rotation, translation)


def element_translation(rotation, affine) -> list[Fraction]:
    """Inverse of :func:`affine_translation`: b = B^{-1} a."""
    return rq.matvec(rq.inverse(rotation), affine)


@dataclass(frozen=True)
class Coset:
    rotation: tuple  # integer matrix in lattice coordinates (rows)
    translation: tuple  # affine translation a in lattice coordinates, in [0,1)

    @property
    def is_identity(self) -> bool:
        n = len(self.rotation)
        return all(self.rotation[i][j] == (i == j) for i in range(n) for j in range(n))

    def compose(self, other: "Coset") -> "Coset":
        rot = _imatmul(self.rotation, other.rotation)
        tr = [x + y for x, y in zip(_imatvec(self.rotation, other.translation), self.translation)]
        return Coset(rot, _mod1(tr))

    def key(self):
        return (self.rotation, self.translation)


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def kinds(self) -> set:
        return {k for k, _ in self.violations}

    def add(self, kind: str, message: str):
        self.violations.append((kind, message))


@dataclass(frozen=True)
class BieberbachGroup:
    n: int
    basis: tuple  # basis vectors (columns of the lattice matrix), rational
    cosets: tuple  # Coset, identity first
    name: str = ""

    @property
    def lattice_matrix(self) -> list[list[Fraction]]:
        return rq.transpose([list(v) for v in self.basis])

    @cached_property
    def gram(self) -> list[list[Fraction]]:
        return [[sum(x * y for x, y in zip(u, v)) for v in self.basis] for u in self.basis]

    @cached_property
    def gram_inverse(self) -> list[list[Fraction]]:
        """Gram matrix of the dual basis."""
        return rq.inverse(self.gram)

    @property
    def order(self) -> int:
        return len(self.cosets)

    @property
    def is_torus(self) -> bool:
        return all(c.is_identity for c in self.cosets)

    @property
    def orientable(self) -> bool:
        return all(rq.determinant(c.rotation) == 1 for c in self.cosets)

    def ambient_rotation(self, coset: Coset) -> list[list[Fraction]]:
        L = self.lattice_matrix
        return rq.matmul(rq.matmul(L, coset.rotation), rq.inverse(L))

    def ambient_translation(self, coset: Coset) -> list[Fraction]:
        return rq.matvec(self.lattice_matrix, coset.translation)

    def with_name(self, name: str) -> "BieberbachGroup":
        return BieberbachGroup(self.n, self.basis, self.cosets, name)

    def canonical_key(self) -> tuple:
        return (self.basis, tuple(sorted(c.key() for c in self.cosets)))

    def to_json(self) -> dict:
        """Manifest group entry; every coset is listed as a generator."""
        gens = []
        for c in self.cosets[1:]:
            b = element_translation(c.rotation, c.translation)
            gens.append({
                "coords": "lattice",
                "matrix": [[int(x) for x in row] for row in c.rotation],
                "translation": [rq.format_rational(x) for x in b],
            })
        return {
            "n": self.n,
            "basis": [[rq.format_rational(x) for x in v] for v in self.basis],
            "generators": gens,
        }


def _canonical_cosets(cosets: Iterable[Coset]) -> tuple:
    cosets = sorted(cosets, key=lambda c: (not c.is_identity, c.key()))
    return tuple(cosets)


def _numerators(cosets, den: int):
    return [(c.rotation, tuple(int(x * den) % den for x in c.translation)) for c in cosets]


def _compose_int(c1, c2, den: int):
    (r1, t1), (r2, t2) = c1, c2
    rot = _imatmul(r1, r2)
    tr = tuple((x + y) % den for x, y in zip(_imatvec(r1, t2), t1))
    return rot, tr


def close_generators(n: int, generators: Sequence[Coset], limit: int = MAX_GROUP_ORDER) -> list[Coset]:
    den = rq.common_denominator(x for g in generators for x in g.translation)
    gens = _numerators(generators, den)
    ident = (_ident(n), (0,) * n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for c in frontier:
            for g in gens:
                p = _compose_int(c, g, den)
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
                    if len(seen) > limit:
                        raise InvalidGroupError(ValidationReport(
                            [(NON_GROUP, f"closure exceeds {limit} cosets")]))
        frontier = nxt
    return [Coset(r, tuple(Fraction(x, den) for x in t)) for r, t in seen]


def from_generators(basis, generators, coords: str = "lattice", name: str = "",
                    check: bool = True) -> BieberbachGroup:
    """Build a group from generators (matrix, translation) in the B L_b convention.

    ``coords="lattice"``: matrix and translation are in lattice coordinates.
    ``coords="ambient"``: both are in the ambient orthonormal frame.
    """
    basis = tuple(tuple(rq.parse_rational(x) for x in v) for v in basis)
    n = len(basis)
    if any(len(v) != n for v in basis):
        raise ValueError("basis must consist of n vectors of length n")
    if coords not in ("lattice", "ambient"):
        raise ValueError(f"unknown coordinate flag {coords!r}")
    if coords == "ambient":
        L = rq.transpose([list(v) for v in basis])
        Linv = rq.inverse(L)
    gens = []
    for matrix, translation in generators:
        m = rq.to_fractions(matrix)
        b = [rq.parse_rational(x) for x in translation]
        if coords == "ambient":
            m = rq.matmul(rq.matmul(Linv, m), L)
            b = rq.matvec(Linv, b)
        m = _freeze(m)
        gens.append(Coset(m, _mod1(_imatvec(m, b))))
    gram = [[sum(x * y for x, y in zip(u, v)) for v in basis] for u in basis]
    for g in gens:
        # an integral map that is not an isometry would never close up
        if rq.matmul(rq.matmul(rq.transpose(g.rotation), gram), g.rotation) != gram:
            raise InvalidGroupError(ValidationReport(
                [(NON_CRYSTALLOGRAPHIC, f"generator {g.rotation} is not an isometry of the lattice")]))
    cosets = close_generators(n, gens)
    group = BieberbachGroup(n, basis, _canonical_cosets(cosets), name)
    if check:
        report = validate(group, check_closure=False)
        if not report.ok:
            raise InvalidGroupError(report)
    return group


def from_cosets(basis, cosets: Sequence[tuple], name: str = "") -> BieberbachGroup:
    """Group from an explicit (rotation, affine translation) list in lattice coordinates.

    No closure is performed; use :func:`validate` to check the list.
    """
    basis = tuple(tuple(rq.parse_rational(x) for x in v) for v in basis)
    cs = [Coset(_freeze(rq.to_fractions(m)), _mod1(rq.parse_rational(x) for x in a))
          for m, a in cosets]  # non-integral rotations raise here
    return BieberbachGroup(len(basis), basis, _canonical_cosets(cs), name)


def _ident(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _norm_map(rotation, order: int):
    """N = I + B + ... + B^{k-1}."""
    n = len(rotation)
    acc = _ident(n)
    p = _ident(n)
    for _ in range(order - 1):
        p = _imatmul(p, rotation)
        acc = tuple(tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(acc, p))
    return acc


def _order(rotation, limit: int = 64) -> int:
    ident = _ident(len(rotation))
    p = rotation
    for k in range(1, limit + 1):
        if p == ident:
            return k
        p = _imatmul(p, rotation)
    raise ValueError("rotation part has no finite order")


def has_fixed_point(coset: Coset) -> bool:
    """Whether some x -> Bx + a + lambda (lambda integral) fixes a point.

    With N = sum of powers of B, that element fixes a point iff N(a + lambda) = 0,
    i.e. iff N(a) lies in the lattice N(Z^n). Decided exactly.
    """
    rot = coset.rotation
    n = len(rot)
    N = _norm_map(rot, _order(rot))
    den = rq.common_denominator(coset.translation)
    target = _imatvec(N, [int(x * den) for x in coset.translation])
    gens = [[x * den for x in c] for c in zip(*N)]
    return rq.in_integer_span(target, gens)


def validate(group: BieberbachGroup, check_closure: bool = True) -> ValidationReport:
    report = ValidationReport()
    n = group.n
    G = group.gram
    if rq.determinant(G) == 0:
        report.add(NON_CRYSTALLOGRAPHIC, "lattice basis is singular")
        return report
    gden = rq.common_denominator(x for row in G for x in row)
    gint = tuple(tuple(int(x * gden) for x in row) for row in G)
    for c in group.cosets:
        if _imatmul(_imatmul(tuple(zip(*c.rotation)), gint), c.rotation) != gint:
            report.add(NON_CRYSTALLOGRAPHIC, f"rotation {c.rotation} is not orthogonal")
    if report.violations:
        return report
    rotations = [c.rotation for c in group.cosets]
    if len(set(rotations)) != len(rotations):
        report.add(NON_GROUP, "two cosets share a rotation part: translation lattice is not maximal")
    ident = [c for c in group.cosets if c.is_identity]
    if not ident or any(x != 0 for x in ident[0].translation):
        report.add(NON_GROUP, "identity coset missing or carries a nonzero translation")
    if check_closure:
        den = rq.common_denominator(x for c in group.cosets for x in c.translation)
        ints = _numerators(group.cosets, den)
        keys = set(ints)
        for c1, c2 in itertools.product(ints, repeat=2):
            if _compose_int(c1, c2, den) not in keys:
                report.add(NON_GROUP, "coset list is not closed under composition")
                break
    for c in group.cosets:
        if not c.is_identity and has_fixed_point(c):
            report.add(NON_FREE, f"element with rotation {c.rotation} has a fixed point")
    return report


def dual_lattice(group: BieberbachGroup) -> list[list[Fraction]]:
    """Dual basis as the columns of the inverse transpose of the lattice matrix."""
    return rq.transpose(rq.inverse(group.lattice_matrix))


def conjugate(group: BieberbachGroup, q, t) -> BieberbachGroup:
    """Conjugate by the rational isometry x -> Qx + t."""
    Q = rq.to_fractions(q)
    t = [rq.parse_rational(x) for x in t]
    if rq.matmul(rq.transpose(Q), Q) != rq.identity(group.n):
        raise ValueError("Q is not orthogonal")
    new_basis = [rq.matvec(Q, v) for v in group.basis]
    L2 = rq.transpose(new_basis)
    L2inv = rq.inverse(L2)
    gens = []
    for c in group.cosets[1:]:
        B = rq.matmul(rq.matmul(Q, group.ambient_rotation(c)), rq.transpose(Q))
        a = rq.matvec(Q, group.ambient_translation(c))
        a = [x + y - z for x, y, z in zip(a, t, rq.matvec(B, t))]
        gens.append((B, element_translation(B, a)))
    return from_generators(new_basis, gens, coords="ambient", name=group.name)


def change_basis(group: BieberbachGroup, u) -> BieberbachGroup:
    """Same group described in the lattice basis L U, U unimodular."""
    U = rq.to_fractions(u)
    if abs(rq.determinant(U)) != 1 or not rq.is_integral(U):
        raise ValueError("U must be unimodular")
    Uinv = rq.inverse(U)
    L2 = rq.matmul(group.lattice_matrix, U)
    cs = []
    for c in group.cosets:
        cs.append((rq.matmul(rq.matmul(Uinv, c.rotation), U), rq.matvec(Uinv, c.translation)))
    return from_cosets(rq.transpose(L2), cs, name=group.name)


# -- presets -------------------------------------------------------------------

def _diag(*entries):
    n = len(entries)
    return [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]


def _std_basis(n, scales=None):
    scales = scales or [1] * n
    return [[Fraction(scales[i]) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class FamilyDescriptor:
    """Diagonal-holonomy groups on diagonal lattices.

    Holonomy is a subgroup of diagonal sign matrices of order <= max_holonomy;
    translation parts have entries in (1/translation_denominator) Z.
    """

    n: int
    max_holonomy: int = 4
    translation_denominator: int = 2
    lattice_scales: tuple = (1,)
    include_torus: bool = True
    cap: int = 20000

    def __post_init__(self):
        if not (1 <= self.n <= 4):
            raise ValueError("family supports 1 <= n <= 4")
        if self.max_holonomy > 4 or self.translation_denominator > 2:
            raise ValueError("family supports |F| <= 4 and denominators <= 2")


def _sign_subgroups(n: int, max_order: int) -> list[list[tuple]]:
    """Generating sets (sign vectors) of the subgroups of {+-1}^n, one per subgroup."""
    nonid = [s for s in itertools.product((1, -1), repeat=n) if any(x == -1 for x in s)]
    found = {}
    for k in range(0, 3):
        if 2 ** k > max_order:
            break
        for gens in itertools.combinations(nonid, k):
            elems = {tuple([1] * n)}
            for g in gens:
                elems |= {tuple(x * y for x, y in zip(e, g)) for e in elems}
            if len(elems) != 2 ** k:
                continue
            found.setdefault(frozenset(elems), list(gens))
    return [found[key] for key in sorted(found, key=lambda s: (len(s), sorted(s)))]


def family_size(desc: FamilyDescriptor) -> int:
    d = desc.translation_denominator
    total = 0
    for gens in _sign_subgroups(desc.n, desc.max_holonomy):
        total += (d ** desc.n) ** len(gens)
    return total * len(desc.lattice_scales) ** desc.n


def _diagonal_elements(gens, shifts, d):
    """Close diagonal generators (sign vector, shift numerators mod d) into a group.

    Returns None when two elements share a sign vector (translation lattice
    not maximal) or some element has a fixed point: a diagonal element is
    free iff one of its +1 axes carries a non-integral shift.
    """
    n = len(gens[0]) if gens else 0
    ident = ((1,) * n, (0,) * n)
    elems = {ident[0]: ident[1]}
    frontier = [ident]
    while frontier:
        nxt = []
        for sv, tv in frontier:
            for g, sh in zip(gens, shifts):
                s2 = tuple(x * y for x, y in zip(sv, g))
                t2 = tuple((x * y + z) % d for x, y, z in zip(sv, sh, tv))
                if s2 in elems:
                    if elems[s2] != t2:
                        return None
                    continue
                elems[s2] = t2
                nxt.append((s2, t2))
        frontier = nxt
    for sv, tv in elems.items():
        if any(x == -1 for x in sv) and all(x == -1 or t == 0 for x, t in zip(sv, tv)):
            return None
    return elems


@lru_cache(maxsize=16)
def diagonal_family(desc: FamilyDescriptor) -> tuple[BieberbachGroup, ...]:
    """All valid, pairwise distinct groups of the family, deterministically named."""
    size = family_size(desc)
    if size > desc.cap:
        raise FamilyTooLargeError(f"family has {size} candidates, cap is {desc.cap}")
    n, d = desc.n, desc.translation_denominator
    shift_choices = list(itertools.product(range(d), repeat=n))
    subgroups = _sign_subgroups(n, desc.max_holonomy)
    out = {}
    for scales in itertools.product(sorted(desc.lattice_scales), repeat=n):
        basis = tuple(tuple(Fraction(v) for v in row) for row in _std_basis(n, scales))
        for gens in subgroups:
            if not gens and not desc.include_torus:
                continue
            for shifts in itertools.product(shift_choices, repeat=len(gens)):
                elems = _diagonal_elements(gens, shifts, d) if gens else {(1,) * n: (0,) * n}
                if elems is None:
                    continue
                cosets = [Coset(_freeze(_diag(*sv)), tuple(Fraction(t, d) for t in tv))
                          for sv, tv in elems.items()]
                grp = BieberbachGroup(n, basis, _canonical_cosets(cosets))
                out.setdefault(grp.canonical_key(), grp)
    groups = sorted(out.values(), key=lambda g: (g.order, g.canonical_key()))
    return tuple(g.with_name(f"diag{n}-{i:04d}") for i, g in enumerate(groups))


def _family_pick(desc, order, orientable):
    for g in diagonal_family(desc):
        if g.order == order and g.orientable == orientable:
            return g
    raise LookupError("no family member with the requested holonomy")


@lru_cache(maxsize=1)
def _presets() -> tuple:
    half = Fraction(1, 2)
    g = []
    g.append(from_generators(_std_basis(2), [], name="torus-Z2"))
    g.append(from_generators(_std_basis(2, [2, half]), [], name="torus-rect2"))
    g.append(from_generators([[1, 0], [half, 1]], [], name="torus-skew2"))
    g.append(from_generators(_std_basis(3), [], name="torus-Z3"))
    g.append(from_generators([[1, 0, 0], [half, 1, 0], [0, Fraction(1, 3), Fraction(3, 2)]], [],
                             name="torus-skew3"))
    g.append(from_generators(_std_basis(4, [1, 1, 2, 2]), [], name="torus-rect4"))
    g.append(from_generators(_std_basis(2), [(_diag(1, -1), [half, 0])], name="klein-bottle"))
    g.append(from_generators(_std_basis(3), [(_diag(1, -1, -1), [half, 0, 0])], name="half-turn"))
    quarter = [[1, 0, 0], [0, 0, -1], [0, 1, 0]]
    g.append(from_generators(_std_basis(3), [(quarter, [Fraction(1, 4), 0, 0])], name="quarter-turn"))
    hw_a = (_diag(1, -1, -1), element_translation(_diag(1, -1, -1), [half, half, 0]))
    hw_b = (_diag(-1, 1, -1), element_translation(_diag(-1, 1, -1), [0, half, half]))
    g.append(from_generators(_std_basis(3), [hw_a, hw_b], name="hantzsche-wendt"))
    g.append(from_generators(_std_basis(3), [(_diag(1, -1, 1), [half, 0, 0])], name="klein-x-circle"))
    small = FamilyDescriptor(n=4, max_holonomy=2)
    g.append(_family_pick(small, 2, True).with_name("diag4-orientable"))
    g.append(_family_pick(small, 2, False).with_name("diag4-nonorientable"))
    g.append(_family_pick(FamilyDescriptor(n=4, max_holonomy=4), 4, True).with_name("diag4-z2z2"))
    return tuple(g)


def presets() -> dict[str, BieberbachGroup]:
    return {grp.name: grp for grp in _presets()}
