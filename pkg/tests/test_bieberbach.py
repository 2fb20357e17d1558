import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flatspec import bieberbach as bb
from flatspec import rational as rq
from flatspec.bieberbach import (NON_CRYSTALLOGRAPHIC, NON_FREE, NON_GROUP, FamilyDescriptor,
                                 InvalidGroupError, from_cosets, from_generators, presets, validate)

from conftest import cayley_orthogonal, random_unimodular

half = Fraction(1, 2)


def has_fixed_point_brute(coset, box=2):
    """Oracle: some lattice translate of x -> Bx + a fixes a point (least squares over a box)."""
    b = np.array(coset.rotation, dtype=float)
    a = np.array([float(x) for x in coset.translation])
    n = len(a)
    m = np.eye(n) - b
    for lam in itertools.product(range(-box, box + 1), repeat=n):
        rhs = a + np.array(lam)
        x, *_ = np.linalg.lstsq(m, rhs, rcond=None)
        if np.allclose(m @ x, rhs, atol=1e-9):
            return True
    return False


def test_klein_bottle():
    g = presets()["klein-bottle"]
    assert g.order == 2 and not g.orientable
    assert validate(g).ok


def test_reflection_without_shift_is_not_free():
    with pytest.raises(InvalidGroupError) as err:
        from_generators(bb._std_basis(2), [(bb._diag(1, -1), [0, 0])])
    assert err.value.report.kinds == {NON_FREE}


def test_torus_with_any_basis():
    g = from_generators([[3, 1], [Fraction(1, 7), 2]], [])
    assert g.is_torus and validate(g).ok


def test_non_crystallographic():
    # a quarter turn does not preserve the rectangular lattice diag(1, 2)
    with pytest.raises(InvalidGroupError) as err:
        from_generators([[1, 0], [0, 2]], [([[0, -1], [1, 0]], [0, 0])], coords="ambient")
    assert NON_CRYSTALLOGRAPHIC in err.value.report.kinds


def test_non_orthogonal_lattice_map():
    # integral in lattice coordinates but not an isometry
    with pytest.raises(InvalidGroupError) as err:
        from_generators(bb._std_basis(2), [([[1, 1], [0, 1]], [0, 0])])
    assert NON_CRYSTALLOGRAPHIC in err.value.report.kinds


def test_non_group():
    # explicit coset list missing the square of the quarter turn
    q = [[0, -1, 0], [1, 0, 0], [0, 0, 1]]
    g = from_cosets(bb._std_basis(3), [(bb._ident(3), [0, 0, 0]), (q, [0, 0, Fraction(1, 4)])])
    assert NON_GROUP in validate(g).kinds
    # translation of the identity coset must be a lattice vector
    g = from_cosets(bb._std_basis(2), [(bb._ident(2), [half, 0])])
    assert NON_GROUP in validate(g).kinds


def test_presets_contents():
    p = presets()
    assert len(p) >= 8
    assert p["torus-Z2"].order == 1
    assert p["klein-bottle"].order == 2
    assert p["half-turn"].order == 2
    assert p["hantzsche-wendt"].order == 4
    assert {g.n for g in p.values()} == {2, 3, 4}
    tori = [g for g in p.values() if g.is_torus]
    assert {g.n for g in tori} == {2, 3, 4}


@pytest.mark.parametrize("name", sorted(presets()))
def test_every_preset_validates(name):
    g = presets()[name]
    assert validate(g).ok
    # freeness agrees with the brute-force oracle
    for c in g.cosets[1:]:
        assert not has_fixed_point_brute(c)


@pytest.mark.parametrize("name", sorted(presets()))
def test_rotation_parts_form_a_group(name):
    g = presets()[name]
    rots = {c.rotation for c in g.cosets}
    assert len(rots) == g.order
    for r1, r2 in itertools.product(rots, repeat=2):
        assert bb._imatmul(r1, r2) in rots


def test_torus_iff_trivial_rotations():
    for g in presets().values():
        assert g.is_torus == all(c.rotation == bb._ident(g.n) for c in g.cosets)


def test_dual_lattice():
    assert presets()["torus-Z2"] and bb.dual_lattice(presets()["torus-Z2"]) == rq.identity(2)
    d = bb.dual_lattice(presets()["torus-rect2"])
    assert d == [[Fraction(1, 2), 0], [0, 2]]
    g = presets()["torus-skew3"]
    d = bb.dual_lattice(g)
    for u in zip(*d):
        for v in g.basis:
            x = sum(a * b for a, b in zip(u, v))
            assert x.denominator == 1


def test_irrational_input_rejected():
    with pytest.raises(ValueError):
        from_generators([[1, 0], ["1/2", "sqrt(3)/2"]], [])


def test_translation_convention():
    # generator (B, b) acts as x -> B(x + b); the stored affine part is B b
    g = presets()["half-turn"]
    c = g.cosets[1]
    assert c.translation == (half, 0, 0)
    g2 = from_generators(bb._std_basis(2), [(bb._diag(-1, 1), [0, half])])
    assert g2.cosets[1].translation == (0, half)
    assert bb.affine_translation(bb._diag(-1, 1), [half, 0]) == [-half, 0]


def test_manifest_entry_round_trip():
    for g in presets().values():
        data = g.to_json()
        gens = [(e["matrix"], e["translation"]) for e in data["generators"]]
        again = from_generators(data["basis"], gens, name=g.name)
        assert again.canonical_key() == g.canonical_key()


@pytest.mark.parametrize("seed", range(5))
def test_conjugates_stay_valid(seed):
    rng = random.Random(seed)
    for g in presets().values():
        q = cayley_orthogonal(g.n, rng)
        t = [Fraction(rng.randint(-5, 5), rng.randint(1, 6)) for _ in range(g.n)]
        h = bb.conjugate(g, q, t)
        assert validate(h).ok and h.order == g.order
        u = random_unimodular(g.n, rng)
        k = bb.change_basis(h, u)
        assert validate(k).ok and k.order == g.order


def test_family_descriptor_bounds():
    with pytest.raises(ValueError):
        FamilyDescriptor(n=5)
    with pytest.raises(bb.FamilyTooLargeError):
        bb.diagonal_family(FamilyDescriptor(n=4, max_holonomy=4, cap=10))


def test_family_members_validate():
    fam = bb.diagonal_family(FamilyDescriptor(n=3))
    assert len(fam) > 1
    assert len({g.canonical_key() for g in fam}) == len(fam)
    for g in fam:
        assert validate(g).ok
        assert g.order <= 4


def test_family_matches_generic_construction():
    """The fast diagonal path finds exactly the groups the generic validator accepts."""
    n, d = 2, 2
    fam = {g.canonical_key() for g in bb.diagonal_family(FamilyDescriptor(n=n))}
    found = set()
    for gens in bb._sign_subgroups(n, 4):
        for shifts in itertools.product(itertools.product(range(d), repeat=n), repeat=len(gens)):
            cosets = []
            try:
                g = from_generators(bb._std_basis(n),
                                    [(bb._diag(*s), [Fraction(x, d) for x in sh]) for s, sh in zip(gens, shifts)])
            except InvalidGroupError:
                continue
            if g.order == 2 ** len(gens):
                found.add(g.canonical_key())
    assert fam == found


@settings(max_examples=40)
@given(st.lists(st.sampled_from([1, -1]), min_size=3, max_size=3),
       st.lists(st.sampled_from([0, half]), min_size=3, max_size=3))
def test_freeness_matches_oracle(signs, shift):
    r = bb._diag(*signs)
    c = bb.Coset(bb._freeze(r), bb._mod1(bb._imatvec(bb._freeze(r), shift)))
    if signs == [1, 1, 1]:
        return
    assert bb.has_fixed_point(c) == has_fixed_point_brute(c)
