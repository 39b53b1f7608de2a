"""The nilpotent Lie algebra of strictly block-upper-triangular matrices.

Blocks are numbered from 0.  A basis vector is the matrix unit whose single
1 sits in block ``(i_block, j_block)`` at local position ``(row, col)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from itertools import accumulate

from sympy import isprime

from .exactla import Subspace


class Kind(str, enum.Enum):
    IDENTITY = "id"
    SL = "sl"


@dataclass(frozen=True)
class BlockPattern:
    sizes: tuple[int, ...]
    kinds: tuple[Kind, ...]
    prime: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(n) for n in self.sizes))
        object.__setattr__(self, "kinds", tuple(Kind(k) for k in self.kinds))
        if len(self.sizes) < 2:
            raise ValueError("a block pattern needs at least two blocks")
        if len(self.kinds) != len(self.sizes):
            raise ValueError(f"{len(self.sizes)} block sizes but {len(self.kinds)} kinds")
        if any(n < 1 for n in self.sizes):
            raise ValueError("block sizes must be positive")
        if self.prime is not None and not isprime(self.prime):
            raise ValueError(f"{self.prime} is not prime")

    @classmethod
    def standard(cls, sizes, prime: int | None = None) -> BlockPattern:
        """Identity blocks at both ends, SL blocks in between."""
        k = len(sizes)
        kinds = [Kind.IDENTITY] + [Kind.SL] * (k - 2) + [Kind.IDENTITY] if k > 2 else [Kind.IDENTITY, Kind.SL]
        return cls(tuple(sizes), tuple(kinds), prime)

    @property
    def nblocks(self) -> int:
        return len(self.sizes)

    @property
    def offsets(self) -> tuple[int, ...]:
        return (0,) + tuple(accumulate(self.sizes))[:-1]

    @property
    def size(self) -> int:
        return sum(self.sizes)

    @property
    def sl_blocks(self) -> tuple[int, ...]:
        return tuple(b for b, k in enumerate(self.kinds) if k is Kind.SL)

    def is_standard_four_block(self) -> bool:
        """Four blocks with kinds (Identity, SL, SL, Identity)."""
        return self.kinds == (Kind.IDENTITY, Kind.SL, Kind.SL, Kind.IDENTITY)


@dataclass(frozen=True, order=True)
class UBasisVector:
    i_block: int
    j_block: int
    row: int
    col: int


@dataclass(frozen=True, eq=False)
class NilLie:
    pattern: BlockPattern
    basis: tuple[UBasisVector, ...]
    # (a, b) -> (c, sign) meaning [e_a, e_b] = sign * e_c; absent pairs bracket to 0
    bracket_table: dict[tuple[int, int], tuple[int, int]] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def _index(self) -> dict[UBasisVector, int]:
        return {v: a for a, v in enumerate(self.basis)}

    def index_of(self, i_block: int, j_block: int, row: int, col: int) -> int:
        return self._index[UBasisVector(i_block, j_block, row, col)]

    def bracket(self, a: int, b: int) -> dict[int, int]:
        hit = self.bracket_table.get((a, b))
        return {hit[0]: hit[1]} if hit else {}

    def bracket_vec(self, x: dict[int, object], y: dict[int, object]) -> dict[int, object]:
        out: dict[int, object] = {}
        for a, s in x.items():
            for b, t in y.items():
                hit = self.bracket_table.get((a, b))
                if hit:
                    c, sign = hit
                    out[c] = out.get(c, 0) + sign * s * t
        return {c: v for c, v in out.items() if v != 0}

    def block_indices(self, i: int, j: int) -> list[int]:
        return [a for a, v in enumerate(self.basis) if (v.i_block, v.j_block) == (i, j)]

    def global_position(self, a: int) -> tuple[int, int]:
        """(row, col) of basis vector ``a`` inside the full N x N matrix."""
        v = self.basis[a]
        off = self.pattern.offsets
        return off[v.i_block] + v.row, off[v.j_block] + v.col


def build_u(pattern: BlockPattern, check_jacobi: bool | None = None) -> NilLie:
    sizes = pattern.sizes
    k = len(sizes)
    basis = tuple(
        UBasisVector(i, j, r, c)
        for i in range(k)
        for j in range(i + 1, k)
        for r in range(sizes[i])
        for c in range(sizes[j])
    )
    off = pattern.offsets
    pos = [(off[v.i_block] + v.row, off[v.j_block] + v.col) for v in basis]
    at = {pq: a for a, pq in enumerate(pos)}
    starting_at: dict[int, list[int]] = {}
    for a, (p, _) in enumerate(pos):
        starting_at.setdefault(p, []).append(a)

    # [e_pq, e_qs] = e_ps; the other commutator term never survives for
    # strictly block-upper matrix units
    table: dict[tuple[int, int], tuple[int, int]] = {}
    for a, (p, q) in enumerate(pos):
        for b in starting_at.get(q, ()):
            c = at[(p, pos[b][1])]
            table[(a, b)] = (c, 1)
            table[(b, a)] = (c, -1)

    u = NilLie(pattern, basis, table)
    if check_jacobi is None:
        check_jacobi = len(basis) <= 40
    if check_jacobi:
        bad = jacobi_violations(u)
        if bad:
            raise AssertionError(f"Jacobi identity fails on {len(bad)} triples, e.g. {bad[0]}")
    return u


def jacobi_violations(u: NilLie) -> list[tuple[int, int, int]]:
    """Basis triples on which the Jacobi identity fails.

    Every nonzero term [x, [y, z]] is accumulated under the cyclic class of
    (x, y, z); all triples with no nonzero term satisfy the identity trivially.
    """
    by_right: dict[int, list[tuple[int, int, int]]] = {}
    for (x, c), (d, t) in u.bracket_table.items():
        by_right.setdefault(c, []).append((x, d, t))
    acc: dict[tuple[int, int, int], dict[int, int]] = {}
    for (y, z), (c, s) in u.bracket_table.items():
        for x, d, t in by_right.get(c, ()):
            key = min((x, y, z), (y, z, x), (z, x, y))
            slot = acc.setdefault(key, {})
            slot[d] = slot.get(d, 0) + s * t
    return sorted(k for k, v in acc.items() if any(v.values()))


def derived_subalgebra(u: NilLie) -> Subspace:
    return Subspace.coordinate(sorted({c for c, _ in u.bracket_table.values()}), u.dim)


def block_span(u: NilLie, i: int, j: int) -> Subspace:
    k = u.pattern.nblocks
    if not (0 <= i < j < k):
        raise ValueError(f"invalid block pair ({i}, {j}) for {k} blocks")
    return Subspace.coordinate(u.block_indices(i, j), u.dim)
