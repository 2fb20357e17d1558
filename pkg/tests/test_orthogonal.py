import pytest
from hypothesis import given, strategies as st

from flatspec import orthogonal as od
from flatspec.orthogonal import InvalidIrrepError, branch, catalog, dim, irrep, restriction_mult


def labels(taus):
    return {(t.weight, t.delta) for t in taus}


def test_catalog_examples():
    assert labels(catalog(3, 1)) == {((1,), 1), ((1,), -1), ((0,), 1), ((0,), -1)}
    assert labels(catalog(2, 1)) == {((0,), 1), ((0,), -1), ((1,), 0)}
    assert labels(catalog(4, 1)) == {((0, 0), 1), ((0, 0), -1), ((1, 0), 1), ((1, 0), -1), ((1, 1), 0)}
    assert labels(catalog(1, 3)) == {((), 1), ((), -1)}


def test_catalog_lists_each_bar_pair_once():
    for n in (4, 6):
        cat = catalog(n, 3)
        assert len(set(cat)) == len(cat)
        assert all(t.weight[-1] >= 0 for t in cat)


def test_invalid_labels():
    with pytest.raises(InvalidIrrepError):
        irrep(4, (1, 1), 1)
    with pytest.raises(InvalidIrrepError):
        irrep(3, (1,), 0)
    with pytest.raises(InvalidIrrepError):
        irrep(4, (1, -1), 0)


@pytest.mark.parametrize("a", range(6))
def test_dim_o3(a):
    assert dim(irrep(3, (a,), 1)) == 2 * a + 1


def test_dim_examples():
    assert dim(irrep(4, (1, 1), 0)) == 6
    for n in range(1, 9):
        assert dim(od.trivial(n)) == 1


def test_dim_against_exterior_powers():
    # oracle: Lambda^p of the standard representation has dimension C(n, p)
    from math import comb
    for n in range(3, 9):
        for p in range(1, n // 2 + (n % 2)):
            coords = (1,) * p + (0,) * (n // 2 - p)
            delta = (-1) ** p if n % 2 else 1
            assert dim(irrep(n, coords, delta)) == comb(n, p)


def test_det_twist_and_dual():
    assert od.det_twist(irrep(3, (1,), 1)) == irrep(3, (1,), -1)
    assert od.det_twist(irrep(4, (1, 1), 0)) == irrep(4, (1, 1), 0)
    assert od.dual(irrep(5, (2, 0), -1)) == irrep(5, (2, 0), -1)


@pytest.mark.parametrize("delta", [1, -1])
def test_branch_o3(delta):
    parts = branch(irrep(3, (2,), delta))
    assert [(s.weight, s.delta) for s in parts[1:]] == [((1,), 0), ((2,), 0)]
    assert parts[0].weight == (0,) and parts[0].delta in (1, -1)
    assert sum(dim(s) for s in parts) == 5


def test_branch_o4_merged():
    assert labels(branch(irrep(4, (1, 1), 0))) == {((1,), 1), ((1,), -1)}


def test_restriction_mult_examples():
    tau = irrep(4, (1, 1), 0)
    assert restriction_mult(irrep(3, (1,), 1), tau) == 1
    assert restriction_mult(irrep(2, (3,), 0), irrep(3, (2,), 1)) == 0
    assert restriction_mult(od.trivial(2), od.trivial(3), "M") == 1


def test_m_embedding_has_repetition():
    # Lambda^2 C^4 restricted along B -> diag(B, det B) is twice the same irreducible
    assert branch(irrep(4, (1, 1), 0), "M") == [irrep(3, (1,), 1)] * 2


@pytest.mark.parametrize("n", range(2, 8))
@pytest.mark.parametrize("embedding", ["standard", "M"])
def test_dimension_bookkeeping(n, embedding):
    for tau in catalog(n, 4):
        assert sum(dim(s) for s in branch(tau, embedding)) == dim(tau)


@pytest.mark.parametrize("n", range(2, 8))
def test_standard_branching_multiplicity_free(n):
    for tau in catalog(n, 4):
        parts = branch(tau)
        assert len(parts) == len(set(parts))


@given(st.integers(2, 7), st.integers(0, 3), st.sampled_from(["standard", "M"]))
def test_convention_b_negates_kappa(n, bound, embedding):
    for tau in catalog(n, bound):
        a = branch(tau, embedding, "A")
        b = branch(tau, embedding, "B")
        assert sorted(od.relabel(s, "B") for s in a) == b
        assert all(od.relabel(od.relabel(s, "B"), "B") == s for s in a)


def test_json_round_trip():
    for tau in catalog(4, 2) + catalog(5, 2):
        assert od.OIrrep.from_json(tau.to_json()) == tau
