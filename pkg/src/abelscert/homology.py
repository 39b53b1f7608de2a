"""Chevalley-Eilenberg boundary maps of u and its homology in degrees 1 and 2.

Wedge basis elements are index tuples ``a < b`` (resp. ``a < b < c``) in
lexicographic order; ``e_a ^ e_b`` with ``a < b`` is the positive basis
element.  H2 is computed one torus-weight slice at a time, since both
boundary maps preserve weights.  The ungraded path computes the same
numbers from the full matrices and exists to cross-check the graded one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable

from .exactla import QMatrix, Subspace, _Echelon, direct_sum_check, image_basis, kernel_basis
from .nilpotent import NilLie, derived_subalgebra
from .torus import Weight, add, weight_table


def pair_index(a: int, b: int, n: int) -> int:
    """Position of (a, b), a < b, in the lexicographic list of pairs of range(n)."""
    return a * n - a * (a + 1) // 2 + (b - a - 1)


def pairs(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


def triples(n: int) -> list[tuple[int, int, int]]:
    return list(combinations(range(n), 3))


def _wedge(x: int, y: int) -> tuple[tuple[int, int], int] | None:
    if x == y:
        return None
    return ((x, y), 1) if x < y else ((y, x), -1)


def d2_column(u: NilLie, a: int, b: int) -> dict[int, int]:
    """d2(e_a ^ e_b) = -[e_a, e_b] in u coordinates."""
    return {c: -s for c, s in u.bracket(a, b).items()}


def d3_column(u: NilLie, a: int, b: int, c: int) -> dict[tuple[int, int], int]:
    """d3(x1^x2^x3) = x3^[x1,x2] + x2^[x3,x1] + x1^[x2,x3], keyed by sorted pairs."""
    out: dict[tuple[int, int], int] = {}
    for x, (y, z) in ((c, (a, b)), (b, (c, a)), (a, (b, c))):
        hit = u.bracket_table.get((y, z))
        if not hit:
            continue
        w = _wedge(x, hit[0])
        if w is None:
            continue
        key, sign = w
        out[key] = out.get(key, 0) + sign * hit[1]
    return {k: v for k, v in out.items() if v}


def d2_matrix(u: NilLie) -> QMatrix:
    return QMatrix.from_columns(u.dim, [d2_column(u, a, b) for a, b in pairs(u.dim)])


def d3_matrix(u: NilLie) -> QMatrix:
    n = u.dim
    cols = []
    for a, b, c in triples(n):
        cols.append({pair_index(x, y, n): v for (x, y), v in d3_column(u, a, b, c).items()})
    return QMatrix.from_columns(n * (n - 1) // 2, cols)


def h1(u: NilLie) -> tuple[int, list[Weight]]:
    """Dimension of u/[u,u] and the weights of a weight-homogeneous complement."""
    comp = h1_complement(u)
    table = weight_table(u)
    return len(comp), sorted(table[a] for a in comp)


def h1_complement(u: NilLie) -> list[int]:
    """Basis indices spanning a coordinate complement of [u, u]."""
    derived = image_basis(d2_matrix(u))
    if u.pattern.is_standard_four_block():
        comp = [a for a, v in enumerate(u.basis) if v.j_block == v.i_block + 1]
        c = Subspace.coordinate(comp, u.dim)
        if not (direct_sum_check(c, derived) and c.dim + derived.dim == u.dim):
            raise AssertionError("adjacent blocks do not complement [u, u]")
        return comp
    piv = set(derived.pivots)
    return [a for a in range(u.dim) if a not in piv]


@dataclass(frozen=True)
class SliceResult:
    weight: Weight
    u_dim: int
    wedge2_dim: int
    wedge3_dim: int
    rank_d2: int
    rank_d3: int
    h1: int
    h2: int
    # basis indices of u completing Im d2 in this slice
    h1_witness: tuple[int, ...]
    # cycles (sparse over global pair indices) completing Im d3 inside Ker d2
    h2_witness: tuple[dict[int, Fraction], ...]


@dataclass(frozen=True)
class _SliceTask:
    weight: Weight
    u_rows: tuple[int, ...]
    pair_rows: tuple[int, ...]
    d2_cols: tuple[dict[int, int], ...]  # over u basis indices
    d3_cols: tuple[dict[int, int], ...]  # over global pair indices
    n_triples: int


def _solve_slice(task: _SliceTask) -> SliceResult:
    u_local = {a: i for i, a in enumerate(task.u_rows)}
    p_local = {g: i for i, g in enumerate(task.pair_rows)}

    im2 = _Echelon(len(task.u_rows))
    for col in task.d2_cols:
        im2.add({u_local[c]: v for c, v in col.items()})
    rank2 = im2.rank

    # kernel of d2 on this slice, one vector per free column of its rref
    kern: list[dict[int, Fraction]] = []
    if task.pair_rows:
        m2 = QMatrix.from_columns(len(task.u_rows), [{u_local[c]: v for c, v in col.items()} for col in task.d2_cols])
        kern = list(kernel_basis(m2).rows)

    im3 = _Echelon(len(task.pair_rows))
    for col in task.d3_cols:
        im3.add({p_local[g]: v for g, v in col.items()})
    rank3 = im3.rank

    witness2 = []
    for k in kern:
        if im3.add(k):
            witness2.append({task.pair_rows[j]: x for j, x in k.items()})
    h2 = len(task.pair_rows) - rank2 - rank3
    if len(witness2) != h2:
        raise AssertionError(f"Im d3 not contained in Ker d2 in slice {task.weight}")

    piv = set(im2.pivots())
    witness1 = tuple(task.u_rows[i] for i in range(len(task.u_rows)) if i not in piv)
    return SliceResult(
        weight=task.weight,
        u_dim=len(task.u_rows),
        wedge2_dim=len(task.pair_rows),
        wedge3_dim=task.n_triples,
        rank_d2=rank2,
        rank_d3=rank3,
        h1=len(task.u_rows) - rank2,
        h2=h2,
        h1_witness=witness1,
        h2_witness=tuple(witness2),
    )


def slice_tasks(u: NilLie) -> list[_SliceTask]:
    """Split u, Λ²u and Λ³u by weight and assemble the restricted boundary maps."""
    n = u.dim
    table = weight_table(u)
    u_by: dict[Weight, list[int]] = {}
    for a in range(n):
        u_by.setdefault(table[a], []).append(a)
    p_by: dict[Weight, list[tuple[int, int]]] = {}
    for a, b in pairs(n):
        p_by.setdefault(add(table[a], table[b]), []).append((a, b))
    t_by: dict[Weight, list[tuple[int, int, int]]] = {}
    pw = {ab: w for w, ps in p_by.items() for ab in ps}
    for a, b, c in triples(n):
        w = add(pw[(a, b)], table[c])
        if w in p_by:
            t_by.setdefault(w, []).append((a, b, c))

    tasks = []
    for w in sorted(set(u_by) | set(p_by)):
        ps = p_by.get(w, [])
        d2_cols = []
        for a, b in ps:
            col = d2_column(u, a, b)
            for c in col:
                if table[c] != w:
                    raise AssertionError(f"d2 does not preserve weight {w}")
            d2_cols.append(col)
        d3_cols = []
        for a, b, c in t_by.get(w, []):
            col = {}
            for (x, y), v in d3_column(u, a, b, c).items():
                if pw[(x, y)] != w:
                    raise AssertionError(f"d3 does not preserve weight {w}")
                col[pair_index(x, y, n)] = v
            d3_cols.append(col)
        tasks.append(_SliceTask(
            weight=w,
            u_rows=tuple(u_by.get(w, [])),
            pair_rows=tuple(pair_index(a, b, n) for a, b in ps),
            d2_cols=tuple(d2_cols),
            d3_cols=tuple(d3_cols),
            n_triples=len(t_by.get(w, [])),
        ))
    return tasks


@dataclass(frozen=True)
class HomologyResult:
    h1_dim: int
    h2_dim: int
    graded: bool = True
    # multisets, sorted lexicographically; None on the ungraded path
    h1_weights: tuple[Weight, ...] | None = None
    h2_weights: tuple[Weight, ...] | None = None
    per_weight: dict[Weight, tuple[int, int]] | None = None
    slices: tuple[SliceResult, ...] = field(default=(), repr=False)
    rank_d2: int = 0
    rank_d3: int = 0
    wedge2_dim: int = 0

    @property
    def ker_d2_dim(self) -> int:
        return self.wedge2_dim - self.rank_d2


def h2(u: NilLie, executor=None) -> HomologyResult:
    """Graded H1 and H2 of u.

    ``executor`` may be any object with a ``map`` method (e.g. a
    ``concurrent.futures`` executor); slices are independent and the merged
    result is ordered by weight regardless of completion order.
    """
    tasks = slice_tasks(u)
    mapper: Callable[..., Iterable[SliceResult]] = executor.map if executor is not None else map
    results = sorted(mapper(_solve_slice, tasks), key=lambda r: r.weight)
    per_weight = {r.weight: (r.h1, r.h2) for r in results if r.h1 or r.h2}
    h1w = tuple(r.weight for r in results for _ in range(r.h1))
    h2w = tuple(r.weight for r in results for _ in range(r.h2))
    return HomologyResult(
        h1_dim=len(h1w),
        h2_dim=len(h2w),
        graded=True,
        h1_weights=h1w,
        h2_weights=h2w,
        per_weight=per_weight,
        slices=tuple(results),
        rank_d2=sum(r.rank_d2 for r in results),
        rank_d3=sum(r.rank_d3 for r in results),
        wedge2_dim=sum(r.wedge2_dim for r in results),
    )


def ungraded_homology(u: NilLie) -> HomologyResult:
    """H1 and H2 dimensions from the full, unsliced boundary matrices."""
    n = u.dim
    r2 = image_basis(d2_matrix(u)).dim
    r3 = image_basis(d3_matrix(u)).dim
    w2 = n * (n - 1) // 2
    return HomologyResult(h1_dim=n - r2, h2_dim=w2 - r2 - r3, graded=False, rank_d2=r2, rank_d3=r3, wedge2_dim=w2)


def homology(u: NilLie, graded: bool = True, executor=None) -> HomologyResult:
    return h2(u, executor) if graded else ungraded_homology(u)


# -- the explicit generators of Ker d2 for the (Id, SL, SL, Id) shape -------

FAMILY_ONE_BLOCKS = (
    ((0, 1), (0, 1)), ((1, 2), (1, 2)), ((2, 3), (2, 3)), ((0, 2), (1, 2)),
    ((1, 2), (1, 3)), ((0, 1), (0, 2)), ((1, 3), (2, 3)), ((0, 1), (2, 3)),
)
FAMILY_TWO_BLOCKS = (((0, 2), (0, 2)), ((1, 3), (1, 3)), ((0, 2), (1, 3)))


@dataclass(frozen=True)
class FamilySpans:
    generators: tuple[tuple[dict[int, int], ...], ...]  # six families
    spans: tuple[Subspace, ...]
    b: Subspace
    h: Subspace

    def family(self, k: int) -> Subspace:
        """Span of family k, numbered 1..6."""
        return self.spans[k - 1]


def _require_standard_shape(u: NilLie) -> None:
    if not u.pattern.is_standard_four_block():
        raise ValueError("generator families are only defined for 4-block (id, sl, sl, id) patterns")


def family_generators(u: NilLie) -> tuple[list[dict[int, int]], ...]:
    _require_standard_shape(u)
    n = u.dim
    n1, n2, n3, n4 = u.pattern.sizes
    e = u.index_of

    def wedge(x: int, y: int) -> dict[int, int]:
        key, sign = _wedge(x, y)
        return {pair_index(*key, n): sign}

    def combo(*terms: tuple[int, tuple[int, int]]) -> dict[int, int]:
        out: dict[int, int] = {}
        for coef, (x, y) in terms:
            for k, v in wedge(x, y).items():
                out[k] = out.get(k, 0) + coef * v
        return {k: v for k, v in out.items() if v}

    def block_wedges(p: tuple[int, int], q: tuple[int, int]) -> list[dict[int, int]]:
        xs, ys = u.block_indices(*p), u.block_indices(*q)
        if p == q:
            return [wedge(x, y) for x, y in combinations(xs, 2)]
        return [wedge(x, y) for x in xs for y in ys]

    f1 = [g for p, q in FAMILY_ONE_BLOCKS for g in block_wedges(p, q)]

    corner = u.block_indices(0, 3)
    f2 = [wedge(z, x) for i, z in enumerate(corner) for x in range(n) if x not in corner[: i + 1]]
    f2 += [g for p, q in FAMILY_TWO_BLOCKS for g in block_wedges(p, q)]

    f3 = [wedge(e(0, 1, i, j), e(1, 2, k, l))
          for i in range(n1) for j in range(n2) for k in range(n2) for l in range(n3) if j != k]
    f3 += [wedge(e(1, 2, i, j), e(2, 3, k, l))
           for i in range(n2) for j in range(n3) for k in range(n3) for l in range(n4) if j != k]

    f4 = [wedge(e(0, 1, i, j), e(1, 3, k, l))
          for i in range(n1) for j in range(n2) for k in range(n2) for l in range(n4) if j != k]
    f4 += [wedge(e(0, 2, i, j), e(2, 3, k, l))
           for i in range(n1) for j in range(n3) for k in range(n3) for l in range(n4) if j != k]

    # zero-sum combinations are spanned by differences against the first term
    f5 = []
    for i in range(n1):
        for k in range(n3):
            t = [(e(0, 1, i, j), e(1, 2, j, k)) for j in range(n2)]
            f5 += [combo((1, t[j]), (-1, t[0])) for j in range(1, n2)]
    for i in range(n2):
        for k in range(n4):
            t = [(e(1, 2, i, j), e(2, 3, j, k)) for j in range(n3)]
            f5 += [combo((1, t[j]), (-1, t[0])) for j in range(1, n3)]

    f6 = []
    for i in range(n1):
        for k in range(n4):
            t = [(e(0, 1, i, j), e(1, 3, j, k)) for j in range(n2)]
            t += [(e(0, 2, i, j), e(2, 3, j, k)) for j in range(n3)]
            f6 += [combo((1, t[j]), (-1, t[0])) for j in range(1, len(t))]

    return f1, f2, f3, f4, f5, f6


def kerd2_families(u: NilLie) -> FamilySpans:
    gens = family_generators(u)
    m = u.dim * (u.dim - 1) // 2
    spans = tuple(Subspace.span(g, m) for g in gens)
    b = spans[1] + spans[3] + spans[5]
    h = spans[0] + spans[2] + spans[4]
    return FamilySpans(tuple(tuple(g) for g in gens), spans, b, h)


@dataclass(frozen=True)
class StructureReport:
    families_span_kernel: bool
    image_d3_equals_b: bool
    kernel_is_direct_sum: bool
    ker_d2_dim: int
    im_d3_dim: int
    b_dim: int
    h_dim: int

    @property
    def ok(self) -> bool:
        return self.families_span_kernel and self.image_d3_equals_b and self.kernel_is_direct_sum


def verify_structure(u: NilLie) -> StructureReport:
    _require_standard_shape(u)
    fam = kerd2_families(u)
    ker = kernel_basis(d2_matrix(u))
    im = image_basis(d3_matrix(u))
    everything = fam.b + fam.h
    return StructureReport(
        families_span_kernel=everything == ker,
        image_d3_equals_b=im == fam.b,
        kernel_is_direct_sum=direct_sum_check(fam.b, fam.h) and everything == ker,
        ker_d2_dim=ker.dim,
        im_d3_dim=im.dim,
        b_dim=fam.b.dim,
        h_dim=fam.h.dim,
    )


__all__ = [
    "FamilySpans", "HomologyResult", "SliceResult", "StructureReport",
    "d2_column", "d2_matrix", "d3_column", "d3_matrix", "derived_subalgebra",
    "family_generators", "h1", "h1_complement", "h2", "homology", "kerd2_families",
    "pair_index", "pairs", "slice_tasks", "triples", "ungraded_homology", "verify_structure",
]
