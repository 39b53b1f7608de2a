from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abelscert.exactla import Subspace, image_basis, kernel_basis
from abelscert.homology import (
    d2_column,
    d2_matrix,
    d3_column,
    d3_matrix,
    family_generators,
    h1,
    h2,
    kerd2_families,
    pair_index,
    pairs,
    slice_tasks,
    triples,
    ungraded_homology,
    verify_structure,
)
from abelscert.nilpotent import build_u
from abelscert.torus import WeightLattice, add, weight_table

from .conftest import SMALL_SIZES, all_sl, pat
from .oracles import commutator_ranks, dim_u, kostant_dim

U1331 = build_u(pat(1, 3, 3, 1))


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 30))
def test_pair_index_bijective(n):
    ps = pairs(n)
    assert len(ps) == comb(n, 2) and len(triples(n)) == comb(n, 3)
    assert [pair_index(a, b, n) for a, b in ps] == list(range(len(ps)))


def test_d2_examples():
    u, e = U1331, U1331.index_of
    for j in range(3):
        for k in range(3):
            assert d2_column(u, e(0, 1, 0, j), e(1, 2, j, k)) == {e(0, 2, 0, k): -1}
    assert d2_column(u, e(0, 1, 0, 0), e(0, 1, 0, 1)) == {}
    assert d2_column(u, e(0, 1, 0, 0), e(1, 2, 1, 0)) == {}
    assert image_basis(d2_matrix(u)).dim == 7


def test_d3_examples():
    u, e = U1331, U1331.index_of
    a, b, c = e(0, 1, 0, 0), e(1, 2, 0, 1), e(2, 3, 1, 0)
    got = d3_column(u, a, b, c)
    expect = {tuple(sorted((e(0, 2, 0, 1), c))): -1, tuple(sorted((a, e(1, 3, 0, 0)))): 1}
    assert got == expect
    # e_{i1 m2} ^ e_{k2 l3} ^ e_{m2 j4}, m2 != k2
    x, y, z = e(0, 1, 0, 0), e(1, 2, 1, 2), e(1, 3, 0, 0)
    corner = e(0, 3, 0, 0)
    assert x < y < z and corner < y
    assert d3_column(u, x, y, z) == {(corner, y): 1}


@pytest.mark.parametrize("sizes", [(1, 2), (1, 1, 1), (1, 2, 2, 1), (2, 2, 2), (1, 3, 3, 1)])
def test_chain_property_full_matrices(sizes):
    u = build_u(pat(*sizes))
    assert (d2_matrix(u) @ d3_matrix(u)).is_zero()


@pytest.mark.parametrize("sizes", SMALL_SIZES[::9])
def test_weight_homogeneity(sizes):
    # slice_tasks raises if a boundary map crosses weights; check directly too
    u = build_u(all_sl(sizes))
    table = weight_table(u)
    for a, b in pairs(u.dim):
        w = add(table[a], table[b])
        assert all(table[c] == w for c in d2_column(u, a, b))
    for a, b, c in triples(u.dim)[::3]:
        w = add(table[a], table[b], table[c])
        assert all(add(table[x], table[y]) == w for x, y in d3_column(u, a, b, c))
    slice_tasks(u)


def test_bookkeeping_1331():
    u = U1331
    res = h2(u)
    assert u.dim == 22 and res.wedge2_dim == 231 and comb(22, 3) == 1540
    assert res.rank_d2 == 7 and res.ker_d2_dim == 224 and res.h1_dim == 15
    # rank d3 and H2 as decided by two independent oracles
    r2, r3 = commutator_ranks((1, 3, 3, 1))
    assert (r2, r3) == (7, 125)
    assert kostant_dim((1, 3, 3, 1), 2) == 99
    assert res.rank_d3 == 125 and res.h2_dim == 99


def test_h1_weights_1331():
    lat = WeightLattice.of(pat(1, 3, 3, 1))
    dim, ws = h1(U1331)
    expect = [lat.unit(1, j, -1) for j in range(3)]
    expect += [add(lat.unit(1, j), lat.unit(2, k, -1)) for j in range(3) for k in range(3)]
    expect += [lat.unit(2, k) for k in range(3)]
    assert dim == 15 and ws == sorted(expect)
    assert list(h2(U1331).h1_weights) == sorted(expect)


def test_minus_v1_slice():
    lat = WeightLattice.of(pat(1, 3, 3, 1))
    res = h2(U1331)
    assert res.per_weight[lat.unit(2, 0, -1)][1] == 2


def test_small_examples():
    assert h1(build_u(pat(1, 2)))[0] == 2
    res = h2(build_u(pat(1, 1)))
    assert (res.h1_dim, res.h2_dim, res.wedge2_dim) == (1, 0, 0)


KOSTANT_CASES = [(1, 1), (1, 2), (2, 2), (1, 1, 1), (1, 2, 1), (1, 1, 1, 1), (1, 3, 1), (2, 1, 2), (1, 2, 2, 1)]


@pytest.mark.parametrize("sizes", KOSTANT_CASES)
def test_against_kostant(sizes):
    res = h2(build_u(pat(*sizes)))
    assert res.h1_dim == kostant_dim(sizes, 1)
    assert res.h2_dim == kostant_dim(sizes, 2)


@pytest.mark.parametrize("sizes", SMALL_SIZES[::11])
def test_against_commutator_rank_oracle(sizes):
    res = ungraded_homology(build_u(pat(*sizes)))
    assert (res.rank_d2, res.rank_d3) == commutator_ranks(sizes)


@pytest.mark.slow
def test_2332_against_oracles():
    res = h2(build_u(pat(2, 3, 3, 2)))
    assert (res.h1_dim, res.h2_dim) == (21, 198)
    assert kostant_dim((2, 3, 3, 2), 2) == 198


def test_slice_witnesses_1331():
    u = U1331
    d2 = d2_matrix(u)
    im3 = image_basis(d3_matrix(u))
    ker = kernel_basis(d2)
    m = u.dim * (u.dim - 1) // 2
    cycles = [w for s in h2(u).slices for w in s.h2_witness]
    for c in cycles:
        assert all(x == 0 for x in d2.matvec([c.get(i, 0) for i in range(m)]))
    assert im3 + Subspace.span([[c.get(i, 0) for i in range(m)] for c in cycles], m) == ker
    h1w = [a for s in h2(u).slices for a in s.h1_witness]
    assert len(h1w) == 15


def test_executors_are_deterministic():
    u = build_u(pat(1, 2, 3, 1))
    base = h2(u)
    with ThreadPoolExecutor(4) as ex:
        threaded = h2(u, executor=ex)
    with ProcessPoolExecutor(2) as ex:
        forked = h2(u, executor=ex)
    for other in (threaded, forked):
        assert other.per_weight == base.per_weight
        assert other.h2_weights == base.h2_weights
        assert [s.weight for s in other.slices] == [s.weight for s in base.slices]


def test_families_1331():
    fam = kerd2_families(U1331)
    assert [fam.family(k).dim for k in range(1, 7)] == [123, 36, 36, 12, 12, 5]
    assert fam.b.dim == 53 and fam.h.dim == 171


@pytest.mark.parametrize("sizes", [(1, 3, 3, 1), (2, 3, 3, 2), (1, 3, 4, 1), (1, 2, 2, 1)])
def test_family_generators_are_cycles(sizes):
    u = build_u(pat(*sizes))
    d2 = d2_matrix(u)
    m = u.dim * (u.dim - 1) // 2
    for fam in family_generators(u):
        for g in fam:
            assert all(x == 0 for x in d2.matvec([g.get(i, 0) for i in range(m)]))


def test_structure_1331():
    rep = verify_structure(U1331)
    assert rep.families_span_kernel and rep.kernel_is_direct_sum
    assert (rep.ker_d2_dim, rep.b_dim, rep.h_dim) == (224, 53, 171)
    # b sits inside Im d3, but Im d3 is strictly larger
    fam = kerd2_families(U1331)
    im3 = image_basis(d3_matrix(U1331))
    assert fam.b <= im3 and rep.im_d3_dim == 125
    assert not rep.image_d3_equals_b


def test_structure_requires_standard():
    for p in (pat(1, 3, 1), all_sl((1, 3, 3, 1))):
        with pytest.raises(ValueError):
            verify_structure(build_u(p))
        with pytest.raises(ValueError):
            kerd2_families(build_u(p))


def test_graded_matches_ungraded_1331():
    a, b = h2(U1331), ungraded_homology(U1331)
    assert (a.h1_dim, a.h2_dim, a.rank_d2, a.rank_d3) == (b.h1_dim, b.h2_dim, b.rank_d2, b.rank_d3)
    assert sum(h for _, h in a.per_weight.values()) == a.h2_dim


def test_dim_formula_sanity():
    assert all(build_u(pat(*s)).dim == dim_u(s) for s in SMALL_SIZES[:20])


def test_explicit_boundary_inside_h():
    # d3(e_12 ^ e_13 ^ e_35) = e_12 ^ [e_13, e_35] = e_12 ^ e_15 (global 1-based positions)
    u, e, n = U1331, U1331.index_of, U1331.dim
    a, b, c = e(0, 1, 0, 0), e(0, 1, 0, 1), e(1, 2, 1, 0)
    col = d3_column(u, a, b, c)
    assert col == {(a, e(0, 2, 0, 0)): 1}
    fam = kerd2_families(u)
    v = {pair_index(x, y, n): s for (x, y), s in col.items()}
    assert fam.family(1).contains(v) and not fam.b.contains(v)
