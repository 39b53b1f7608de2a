import itertools

import pytest

from abelscert.abelscheck import CERTIFIED, HOLDS_BY_CONSTRUCTION, NOT_ESTABLISHED, STRONG_FORM_NOTE, check
from abelscert.nilpotent import BlockPattern
from abelscert.torus import WeightLattice, is_zero_mod_P, segment_contains_zero

from .conftest import pat


def test_1331_certified():
    rep = check(pat(1, 3, 3, 1))
    assert rep.verdict == CERTIFIED and rep.certified
    assert rep.cond_i == HOLDS_BY_CONSTRUCTION
    assert rep.failed == ()
    assert rep.cond_ii_blocks == () and rep.cond_iii_pairs == () and rep.cond_iv_weights == ()
    assert rep.cond_iv_note is None


def test_rank_one_blocks():
    rep = check(pat(1, 2, 2, 1))
    assert rep.verdict == NOT_ESTABLISHED
    assert "ii" in rep.failed and rep.cond_ii_blocks == (1, 2)


def test_three_blocks_antipodal():
    rep = check(pat(1, 3, 1))
    lat = WeightLattice.of(pat(1, 3, 1))
    assert rep.verdict == NOT_ESTABLISHED and "iii" in rep.failed
    assert (lat.unit(1, 0, -1), lat.unit(1, 0)) in rep.cond_iii_pairs


@pytest.mark.parametrize("sizes", [(1, 1), (2, 3), (1, 2, 1), (2, 2, 2, 2)])
def test_all_identity_not_established(sizes):
    rep = check(BlockPattern(sizes, ("id",) * len(sizes)))
    assert rep.verdict == NOT_ESTABLISHED
    # d = 0: every weight is zero, so (iii) always fails and (iv) fails iff H2 != 0
    assert not rep.cond_iii_passed
    assert rep.cond_iv_passed == (rep.homology.h2_dim == 0)


def test_strong_form_note_when_zero_is_an_h2_weight():
    rep = check(BlockPattern((2, 2, 2, 2), ("id",) * 4))
    assert rep.cond_iv_weights == ((),)
    assert rep.cond_iv_note == STRONG_FORM_NOTE


SL_SIZES = [(a, b, c, d) for a, b, c, d in itertools.product((1, 2), (3, 4), (3, 4), (1, 2))
            if a * b + a * c + a * d + b * c + b * d + c * d <= 40]


@pytest.mark.parametrize("sizes", SL_SIZES)
def test_large_sl_blocks_certified(sizes):
    assert check(pat(*sizes)).verdict == CERTIFIED


@pytest.mark.parametrize("sizes", [(1, 3, 3, 1), (1, 2, 2, 1), (1, 3, 1), (1, 1, 1, 1), (2, 1, 3)])
def test_report_is_consistent_with_its_witnesses(sizes):
    p = pat(*sizes)
    rep = check(p)
    lat = WeightLattice.of(p)
    h1w, h2w = sorted(set(rep.homology.h1_weights)), sorted(set(rep.homology.h2_weights))
    brute_iii = [(a, b) for a, b in itertools.combinations_with_replacement(h1w, 2) if segment_contains_zero(a, b, lat)]
    brute_iv = [w for w in h2w if is_zero_mod_P(w, lat)]
    assert list(rep.cond_iii_pairs) == brute_iii
    assert list(rep.cond_iv_weights) == brute_iv
    assert (rep.verdict == CERTIFIED) == (not rep.cond_ii_blocks and not brute_iii and not brute_iv)
    if rep.certified:
        assert not rep.cond_ii_blocks and not rep.cond_iii_pairs and not rep.cond_iv_weights


def test_size_one_sl_blocks_impose_nothing_for_cond_ii():
    rep = check(pat(1, 1, 1, 1))
    assert rep.cond_ii_passed
