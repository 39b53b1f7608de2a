"""Weights of the diagonal torus of the SL blocks.

A weight is a tuple of integers in M = Z^d, one coordinate per row of each
SL-kind block, in block order.  P is spanned by the all-ones indicator of
each SL block; weights that differ by an element of P define the same
character of the torus.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactla import QMatrix, solve_affine
from .nilpotent import BlockPattern, Kind, NilLie, UBasisVector

Weight = tuple[int, ...]


@dataclass(frozen=True)
class WeightLattice:
    d: int
    p_basis: tuple[Weight, ...]
    # block index -> first coordinate of that block in M (SL blocks only)
    block_offsets: dict[int, int]

    @classmethod
    def of(cls, pattern: BlockPattern) -> WeightLattice:
        offsets: dict[int, int] = {}
        d = 0
        for b, (n, kind) in enumerate(zip(pattern.sizes, pattern.kinds)):
            if kind is Kind.SL:
                offsets[b] = d
                d += n
        p_basis = []
        for b, start in offsets.items():
            n = pattern.sizes[b]
            p_basis.append(tuple(1 if start <= i < start + n else 0 for i in range(d)))
        return cls(d, tuple(p_basis), offsets)

    def zero(self) -> Weight:
        return (0,) * self.d

    def unit(self, block: int, index: int, sign: int = 1) -> Weight:
        w = [0] * self.d
        w[self.block_offsets[block] + index] = sign
        return tuple(w)

    def _p_matrix(self) -> list[list[int]]:
        # d x len(p_basis), columns are the P generators
        return [[v[i] for v in self.p_basis] for i in range(self.d)]


def add(*ws: Weight) -> Weight:
    return tuple(map(sum, zip(*ws)))


def weight_of(v: UBasisVector, pattern: BlockPattern, lattice: WeightLattice | None = None) -> Weight:
    """Torus weight of a matrix unit: conjugation by diag(t) scales e_pq by t_p / t_q."""
    lattice = lattice or WeightLattice.of(pattern)
    w = [0] * lattice.d
    if v.i_block in lattice.block_offsets:
        w[lattice.block_offsets[v.i_block] + v.row] += 1
    if v.j_block in lattice.block_offsets:
        w[lattice.block_offsets[v.j_block] + v.col] -= 1
    return tuple(w)


def weight_table(u: NilLie) -> dict[int, Weight]:
    lat = WeightLattice.of(u.pattern)
    return {a: weight_of(v, u.pattern, lat) for a, v in enumerate(u.basis)}


def wedge_weight(table: dict[int, Weight], *indices: int) -> Weight:
    return add(*(table[a] for a in indices))


def is_zero_mod_P(w: Weight, lat: WeightLattice) -> bool:
    if len(w) != lat.d:
        raise ValueError("weight has the wrong length")
    m = QMatrix.from_dense(lat._p_matrix(), len(lat.p_basis))
    return not solve_affine(m, list(w)).is_empty


def segment_contains_zero(w1: Weight, w2: Weight, lat: WeightLattice) -> bool:
    """Whether some point (1-t) w1 + t w2 with t in [0, 1] lies in P (over Q).

    Unknowns are t followed by one coefficient per P generator:
    t (w2 - w1) - sum_b c_b s_b = -w1.
    """
    if len(w1) != lat.d or len(w2) != lat.d:
        raise ValueError("weights have the wrong length")
    rows = [[b - a] + [-v[i] for v in lat.p_basis] for i, (a, b) in enumerate(zip(w1, w2))]
    m = QMatrix.from_dense(rows, 1 + len(lat.p_basis))
    sol = solve_affine(m, [-a for a in w1])
    proj = sol.coordinate_range(0)
    if proj is None:
        return False
    t, unbounded = proj
    return unbounded or Fraction(0) <= t <= 1
