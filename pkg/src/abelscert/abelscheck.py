"""Abels' sufficient criterion for compact presentability, evaluated on a block pattern.

Conditions (iii) and (iv) are checked in a stronger form than the theorem
needs: (iii) over every pair of H1 weights instead of dominant ones, and
(iv) as "zero is not a weight of H2 at all".  A failed check therefore
means the criterion could not be established, never that the group is not
compactly presented.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .homology import HomologyResult, h2
from .nilpotent import BlockPattern, Kind, NilLie, build_u
from .torus import Weight, WeightLattice, is_zero_mod_P, segment_contains_zero

CERTIFIED = "Certified"
NOT_ESTABLISHED = "NotEstablished"
HOLDS_BY_CONSTRUCTION = "HoldsByConstruction"
STRONG_FORM_NOTE = "full dominant-weight form not evaluated"


@dataclass(frozen=True)
class ConditionReport:
    cond_i: str
    cond_ii_passed: bool
    cond_ii_blocks: tuple[int, ...]  # SL blocks of size 2
    cond_iii_passed: bool
    cond_iii_pairs: tuple[tuple[Weight, Weight], ...]
    cond_iv_passed: bool
    cond_iv_weights: tuple[Weight, ...]
    cond_iv_note: str | None = None
    homology: HomologyResult | None = field(default=None, repr=False, compare=False)

    @property
    def failed(self) -> tuple[str, ...]:
        names = (("ii", self.cond_ii_passed), ("iii", self.cond_iii_passed), ("iv", self.cond_iv_passed))
        return tuple(name for name, ok in names if not ok)

    @property
    def verdict(self) -> str:
        return CERTIFIED if not self.failed else NOT_ESTABLISHED

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED


def check(pattern: BlockPattern, u: NilLie | None = None, executor=None) -> ConditionReport:
    u = u or build_u(pattern)
    lat = WeightLattice.of(pattern)
    hom = h2(u, executor)

    rank_one = tuple(b for b, (n, kind) in enumerate(zip(pattern.sizes, pattern.kinds))
                     if kind is Kind.SL and n == 2)

    distinct_h1 = sorted(set(hom.h1_weights))
    bad_pairs = tuple((w1, w2) for w1, w2 in combinations_with_replacement(distinct_h1, 2)
                      if segment_contains_zero(w1, w2, lat))

    bad_h2 = tuple(w for w in sorted(set(hom.h2_weights)) if is_zero_mod_P(w, lat))

    return ConditionReport(
        cond_i=HOLDS_BY_CONSTRUCTION,
        cond_ii_passed=not rank_one,
        cond_ii_blocks=rank_one,
        cond_iii_passed=not bad_pairs,
        cond_iii_pairs=bad_pairs,
        cond_iv_passed=not bad_h2,
        cond_iv_weights=bad_h2,
        cond_iv_note=STRONG_FORM_NOTE if bad_h2 else None,
        homology=hom,
    )
