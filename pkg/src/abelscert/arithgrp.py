"""Exact matrix checks on the S-arithmetic group G(Z[1/p]) and on SL_n(Z) ⋉ Mat.

Elements of G(Z[1/p]) are stored as an integer matrix over a common
denominator ``p**exp``, normalized so that ``exp`` is minimal.  The central
lattice Z is the set of integer matrices that differ from the identity only
in the top-right block.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .exactla import PLocal, QMatrix, det, inverse, kernel_basis
from .nilpotent import BlockPattern, Kind

IntMatrix = tuple[tuple[int, ...], ...]


def _matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def _int_det(a: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant of an integer matrix."""
    m = [list(r) for r in a]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1] if n else 1


def _identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class GammaElement:
    pattern: BlockPattern
    p: int
    num: IntMatrix
    exp: int = 0

    def __post_init__(self):
        num, exp, p = self.num, self.exp, self.p
        while exp > 0 and all(x % p == 0 for row in num for x in row):
            num = tuple(tuple(x // p for x in row) for row in num)
            exp -= 1
        if exp < 0:
            num = tuple(tuple(x * p ** (-exp) for x in row) for row in num)
            exp = 0
        object.__setattr__(self, "num", tuple(tuple(r) for r in num))
        object.__setattr__(self, "exp", exp)
        n = self.pattern.size
        if len(self.num) != n or any(len(r) != n for r in self.num):
            raise ValueError(f"expected a {n}x{n} matrix")

    @classmethod
    def identity(cls, pattern: BlockPattern, p: int) -> GammaElement:
        return cls(pattern, p, _identity(pattern.size))

    @classmethod
    def from_fractions(cls, pattern: BlockPattern, p: int, rows: Sequence[Sequence[object]]) -> GammaElement:
        entries = [[PLocal.from_fraction(x, p) for x in r] for r in rows]
        exp = max((e.exponent for r in entries for e in r), default=0)
        num = tuple(tuple(e.unit * p ** (exp - e.exponent) for e in r) for r in entries)
        return cls(pattern, p, num, exp)

    def to_fractions(self) -> list[list[Fraction]]:
        q = self.p ** self.exp
        return [[Fraction(x, q) for x in r] for r in self.num]

    def entry(self, i: int, j: int) -> PLocal:
        return PLocal(self.num[i][j], self.exp, self.p)

    def block(self, i: int, j: int) -> list[list[PLocal]]:
        off, sizes = self.pattern.offsets, self.pattern.sizes
        return [[self.entry(off[i] + r, off[j] + c) for c in range(sizes[j])] for r in range(sizes[i])]

    def violations(self) -> list[str]:
        """Ways in which this matrix fails to lie in G(Z[1/p]); empty when it does."""
        out = []
        off, sizes, kinds = self.pattern.offsets, self.pattern.sizes, self.pattern.kinds
        q = self.p ** self.exp
        num = self.num
        for bi in range(len(sizes)):
            for bj in range(bi):
                if any(num[off[bi] + r][off[bj] + c] for r in range(sizes[bi]) for c in range(sizes[bj])):
                    out.append(f"block ({bi}, {bj}) below the diagonal is nonzero")
        for b, (n, kind) in enumerate(zip(sizes, kinds)):
            blk = [num[off[b] + r][off[b]:off[b] + n] for r in range(n)]
            if kind is Kind.IDENTITY:
                if any(blk[r][c] != (q if r == c else 0) for r in range(n) for c in range(n)):
                    out.append(f"identity block {b} is not the identity")
            elif _int_det(blk) != q ** n:
                out.append(f"SL block {b} does not have determinant 1")
        return out

    def __mul__(self, other: GammaElement) -> GammaElement:
        return mul(self, other)

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in r) for r in self.to_fractions())


def _same_group(g: GammaElement, h: GammaElement) -> None:
    if g.pattern.sizes != h.pattern.sizes or g.pattern.kinds != h.pattern.kinds or g.p != h.p:
        raise ValueError("elements belong to different groups")


def mul(g: GammaElement, h: GammaElement) -> GammaElement:
    _same_group(g, h)
    out = GammaElement(g.pattern, g.p, _matmul(g.num, h.num), g.exp + h.exp)
    bad = out.violations()
    if bad:
        raise ArithmeticError(f"product left the group: {bad[0]}")
    return out


def inv(g: GammaElement) -> GammaElement:
    m = inverse(QMatrix.from_dense(g.to_fractions()))
    out = GammaElement.from_fractions(g.pattern, g.p, m.to_dense())
    bad = out.violations()
    if bad:
        raise ArithmeticError(f"inverse left the group: {bad[0]}")
    return out


def _check_prime(g: GammaElement, p: int) -> None:
    if p != g.p:
        raise ValueError(f"element lives over Z[1/{g.p}], not Z[1/{p}]")
    if g.pattern.kinds[0] is not Kind.IDENTITY:
        raise ValueError("alpha needs an identity first block")


def alpha(g: GammaElement, p: int) -> GammaElement:
    """Conjugation by diag(p I_{n1}, I, ..., I): scales the blocks (0, j), j > 0, by p."""
    _check_prime(g, p)
    n1 = g.pattern.sizes[0]
    num = tuple(tuple(x * p if i < n1 and j >= n1 else x for j, x in enumerate(r)) for i, r in enumerate(g.num))
    return GammaElement(g.pattern, p, num, g.exp)


def alpha_inv(g: GammaElement, p: int) -> GammaElement:
    _check_prime(g, p)
    n1 = g.pattern.sizes[0]
    num = tuple(tuple(x if i < n1 and j >= n1 else x * p for j, x in enumerate(r)) for i, r in enumerate(g.num))
    return GammaElement(g.pattern, p, num, g.exp + 1)


# -- the central lattice and the quotient by it ----------------------------

def _require_coset_shape(pattern: BlockPattern) -> None:
    if pattern.kinds[0] is not Kind.IDENTITY or pattern.kinds[-1] is not Kind.IDENTITY:
        raise ValueError("quotient by Z needs identity blocks first and last")


def corner_positions(pattern: BlockPattern) -> list[tuple[int, int]]:
    """Global (row, col) positions of the top-right block."""
    k = pattern.nblocks - 1
    off = pattern.offsets
    return [(r, off[k] + c) for r in range(pattern.sizes[0]) for c in range(pattern.sizes[k])]


def center_element(pattern: BlockPattern, p: int, entries: Sequence[object]) -> GammaElement:
    """Identity plus the given top-right block entries (row-major)."""
    rows = [list(r) for r in _identity(pattern.size)]
    corner = corner_positions(pattern)
    if len(entries) != len(corner):
        raise ValueError(f"expected {len(corner)} corner entries")
    for (i, j), x in zip(corner, entries):
        rows[i][j] = x
    return GammaElement.from_fractions(pattern, p, rows)


def center_basis(pattern: BlockPattern, p: int) -> list[GammaElement]:
    k = len(corner_positions(pattern))
    return [center_element(pattern, p, [int(i == j) for j in range(k)]) for i in range(k)]


def corner_entries(g: GammaElement) -> list[Fraction]:
    q = g.p ** g.exp
    return [Fraction(g.num[i][j], q) for i, j in corner_positions(g.pattern)]


def in_center_lattice(g: GammaElement) -> bool:
    """Whether g lies in Z: integral, and the identity outside the top-right block."""
    corner = set(corner_positions(g.pattern))
    ident = _identity(g.pattern.size)
    return g.exp == 0 and all(
        g.num[i][j] == ident[i][j] for i in range(g.pattern.size) for j in range(g.pattern.size) if (i, j) not in corner
    )


def center_image_index(pattern: BlockPattern, p: int) -> int:
    """Index of alpha(Z) in Z, from the determinant of the images of a basis of Z.

    Raises if some image falls outside Z.
    """
    images = []
    for z in center_basis(pattern, p):
        az = alpha(z, p)
        if not in_center_lattice(az):
            raise ArithmeticError("alpha does not map Z into Z")
        images.append(corner_entries(az))
    return abs(int(det(QMatrix.from_dense(images))))


@dataclass(frozen=True)
class Coset:
    """g Z, represented by the element whose corner entries lie in [0, 1)."""

    rep: GammaElement

    def is_identity(self) -> bool:
        return self.rep == GammaElement.identity(self.rep.pattern, self.rep.p)


def coset_reduce(g: GammaElement) -> Coset:
    _require_coset_shape(g.pattern)
    q = g.p ** g.exp
    corner = set(corner_positions(g.pattern))
    num = tuple(
        tuple(x % q if (i, j) in corner else x for j, x in enumerate(r)) for i, r in enumerate(g.num)
    )
    return Coset(GammaElement(g.pattern, g.p, num, g.exp))


def induced_endo(c: Coset, p: int) -> Coset:
    return coset_reduce(alpha(c.rep, p))


def kernel_elements(pattern: BlockPattern, p: int) -> list[Coset]:
    """The cosets of alpha^{-1}(Z) / Z: corner entries in {0, 1/p, ..., (p-1)/p}."""
    _require_coset_shape(pattern)
    k = len(corner_positions(pattern))
    return [
        coset_reduce(center_element(pattern, p, [Fraction(a, p) for a in digits]))
        for digits in product(range(p), repeat=k)
    ]


# -- random words in the generators ----------------------------------------

def _generators(pattern: BlockPattern, p: int) -> tuple[list, list]:
    off, sizes = pattern.offsets, pattern.sizes
    scalars = [Fraction(1), Fraction(-1), Fraction(1, p), Fraction(-1, p), Fraction(p), Fraction(-p)]
    unip = [
        (off[bi] + r, off[bj] + c)
        for bi in range(len(sizes)) for bj in range(bi + 1, len(sizes))
        for r in range(sizes[bi]) for c in range(sizes[bj])
    ]
    sl = [
        (off[b] + r, off[b] + c)
        for b in pattern.sl_blocks for r in range(sizes[b]) for c in range(sizes[b]) if r != c
    ]
    return [(pos, lam) for pos in unip for lam in scalars], [(pos, lam) for pos in sl for lam in (1, -1)]


def elementary(pattern: BlockPattern, p: int, pos: tuple[int, int], lam) -> GammaElement:
    """The matrix I + lam * e_pos, for lam in Z[1/p]."""
    lam = PLocal.from_fraction(lam, p)
    q = p ** lam.exponent
    rows = [[q * x for x in r] for r in _identity(pattern.size)]
    rows[pos[0]][pos[1]] = lam.unit
    return GammaElement(pattern, p, rows, lam.exponent)


def random_element(pattern: BlockPattern, p: int, seed: int, word_length: int = 6) -> GammaElement:
    rng = random.Random(seed)
    unip, sl = _generators(pattern, p)
    g = GammaElement.identity(pattern, p)
    for _ in range(word_length):
        pool = sl if sl and rng.random() < 0.5 else unip
        pos, lam = rng.choice(pool)
        g = mul(g, elementary(pattern, p, pos, lam))
    return g


@dataclass(frozen=True)
class NonHopfReport:
    p: int
    samples: int
    automorphism: bool
    round_trip: bool
    closure: bool
    central: bool
    center_index: int
    expected_index: int
    kernel_size: int
    kernel_maps_to_identity: bool
    kernel_nontrivial: bool
    well_defined: bool
    surjective_on_samples: bool
    kernel_witness: tuple[Fraction, ...]
    # (coset representative, representative of a preimage coset)
    preimage_witness: tuple[GammaElement, GammaElement] | None

    @property
    def ok(self) -> bool:
        return (
            self.automorphism and self.round_trip and self.closure and self.central
            and self.center_index == self.expected_index and self.center_index > 1
            and self.kernel_size == self.expected_index and self.kernel_maps_to_identity
            and self.kernel_nontrivial and self.well_defined and self.surjective_on_samples
        )


def verify_nonhopf(pattern: BlockPattern, p: int, samples: int = 1000, seed: int = 0,
                   word_length: int = 6) -> NonHopfReport:
    """Check that alpha induces a surjective, non-injective endomorphism of Gamma / Z."""
    _require_coset_shape(pattern)
    rng = random.Random(seed)
    ident = Coset(GammaElement.identity(pattern, p))
    zbasis = center_basis(pattern, p)

    hom = trip = closed = central = wd = onto = True
    preimage_witness = None
    for _ in range(samples):
        g = random_element(pattern, p, rng.getrandbits(64), word_length)
        h = random_element(pattern, p, rng.getrandbits(64), word_length)
        ag, ah = alpha(g, p), alpha(h, p)
        hom &= alpha(g * h, p) == ag * ah
        trip &= alpha_inv(ag, p) == g and alpha(alpha_inv(g, p), p) == g
        closed &= not ag.violations() and not alpha_inv(g, p).violations()
        z = zbasis[rng.randrange(len(zbasis))]
        central &= g * z == z * g
        # two representatives of one coset must have the same image
        c = coset_reduce(g)
        wd &= induced_endo(coset_reduce(g * z), p) == induced_endo(c, p)
        pre = coset_reduce(alpha_inv(c.rep, p))
        hit = induced_endo(pre, p) == c
        onto &= hit
        if hit and preimage_witness is None and not c.is_identity():
            preimage_witness = (c.rep, pre.rep)

    kernel = kernel_elements(pattern, p)
    nontrivial = [c for c in kernel if not c.is_identity()]
    n1, nk = pattern.sizes[0], pattern.sizes[-1]
    return NonHopfReport(
        p=p,
        samples=samples,
        automorphism=hom,
        round_trip=trip,
        closure=closed,
        central=central,
        center_index=center_image_index(pattern, p),
        expected_index=p ** (n1 * nk),
        kernel_size=len(kernel),
        kernel_maps_to_identity=all(induced_endo(c, p) == ident for c in kernel),
        kernel_nontrivial=bool(nontrivial),
        well_defined=wd,
        surjective_on_samples=onto,
        kernel_witness=tuple(corner_entries(nontrivial[0].rep)) if nontrivial else (),
        preimage_witness=preimage_witness,
    )


# -- SL_n(Z) ⋉ Mat_{n x m}(Z) ----------------------------------------------

@dataclass(frozen=True)
class SDElement:
    """(s, A) with s in SL_n(Z) and A an n x m integer matrix; embeds as [[s, A], [0, I_m]]."""

    s: IntMatrix
    A: IntMatrix

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(tuple(r) for r in self.s))
        object.__setattr__(self, "A", tuple(tuple(r) for r in self.A))
        n = len(self.s)
        if any(len(r) != n for r in self.s) or len(self.A) != n:
            raise ValueError("s must be n x n and A must have n rows")
        if det(QMatrix.from_dense(self.s, n)) != 1:
            raise ValueError("s must have determinant 1")

    @property
    def n(self) -> int:
        return len(self.s)

    @property
    def m(self) -> int:
        return len(self.A[0]) if self.A else 0

    def __mul__(self, other: SDElement) -> SDElement:
        return sd_mul(self, other)


def sd_identity(n: int, m: int) -> SDElement:
    return SDElement(_identity(n), ((0,) * m,) * n)


def _mat_add(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return tuple(tuple(x + y for x, y in zip(r, t)) for r, t in zip(a, b))


def sd_mul(x: SDElement, y: SDElement) -> SDElement:
    if (x.n, x.m) != (y.n, y.m):
        raise ValueError("shape mismatch")
    return SDElement(_matmul(x.s, y.s), _mat_add(x.A, _matmul(x.s, y.A)))


def _int_inverse(s: IntMatrix) -> IntMatrix:
    inv_s = inverse(QMatrix.from_dense(s)).to_dense()
    if any(x.denominator != 1 for r in inv_s for x in r):
        raise ValueError("matrix is not invertible over Z")
    return tuple(tuple(int(x) for x in r) for r in inv_s)


def sd_inv(x: SDElement) -> SDElement:
    si = _int_inverse(x.s)
    return SDElement(si, tuple(tuple(-v for v in r) for r in _matmul(si, x.A)))


def sd_random(n: int, m: int, rng: random.Random, word_length: int = 8, entry_bound: int = 3) -> SDElement:
    s = _identity(n)
    for _ in range(word_length):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            break
        e = [list(r) for r in _identity(n)]
        e[i][j] = rng.choice((1, -1))
        s = _matmul(s, e)
    A = tuple(tuple(rng.randint(-entry_bound, entry_bound) for _ in range(m)) for _ in range(n))
    return SDElement(s, A)


def _check_unimodular(g: Sequence[Sequence[int]]) -> IntMatrix:
    g = tuple(tuple(int(x) for x in r) for r in g)
    if any(len(r) != len(g) for r in g):
        raise ValueError("g must be square")
    if abs(det(QMatrix.from_dense(g, len(g)))) != 1:
        raise ValueError("g is not invertible over Z")
    return g


def phi_g(x: SDElement, g: Sequence[Sequence[int]]) -> SDElement:
    """The automorphism (s, A) -> (s, A g) coming from right multiplication by GL_m(Z)."""
    g = _check_unimodular(g)
    if len(g) != x.m:
        raise ValueError("g must be m x m")
    return SDElement(x.s, _matmul(x.A, g))


def sd_conjugate(x: SDElement, by: SDElement) -> SDElement:
    return by * x * sd_inv(by)


def _elementary_generators(n: int) -> list[IntMatrix]:
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                e = [list(r) for r in _identity(n)]
                e[i][j] = 1
                gens.append(tuple(tuple(r) for r in e))
    return gens


@dataclass(frozen=True)
class InnerWitness:
    epsilon: int
    s: IntMatrix
    M: IntMatrix


def is_inner(g: Sequence[Sequence[int]], n: int, m: int) -> InnerWitness | None:
    """Decide whether phi_g is conjugation by some (s, M) with s in SL_n(Z).

    Such a conjugation sends (t, A) to (s t s^-1, M + s A - s t s^-1 M).  Matching
    it against (t, A g) for all t and A gives three linear systems, each solved
    exactly: s centralizes every elementary matrix, M is fixed by every
    elementary matrix, and s A = A g for every A.
    """
    g = _check_unimodular(g)
    if len(g) != m:
        raise ValueError("g must be m x m")
    gens = _elementary_generators(n)

    # centralizer: unknown s, index r * n + c; equations (s E - E s)_{rc} = 0
    rows = []
    for E in gens:
        for r in range(n):
            for c in range(n):
                eq: dict[int, int] = {}
                for k in range(n):
                    if E[k][c]:
                        eq[r * n + k] = eq.get(r * n + k, 0) + E[k][c]
                    if E[r][k]:
                        eq[k * n + c] = eq.get(k * n + c, 0) - E[r][k]
                rows.append(eq)
    cent = kernel_basis(QMatrix(len(rows), n * n, rows))
    scalar_only = all(
        all(v.get(r * n + c, 0) == (v.get(0, 0) if r == c else 0) for r in range(n) for c in range(n))
        for v in cent.rows
    )
    if not scalar_only:
        raise ArithmeticError("centralizer of the elementary matrices is not scalar")
    # s = eps I must be integral with det eps^n = 1
    candidates = [eps for eps in (1, -1) if eps ** n == 1]

    # translation part: unknown M, index r * m + c; equations ((E - I) M)_{rc} = 0
    rows = []
    for E in gens:
        for r in range(n):
            for c in range(m):
                eq = {k * m + c: E[r][k] - int(r == k) for k in range(n) if E[r][k] - int(r == k)}
                rows.append(eq)
    fixed = kernel_basis(QMatrix(len(rows), n * m, rows))
    if n > 1 and fixed.dim:
        raise ArithmeticError("nonzero M fixed by all elementary matrices")

    for eps in candidates:
        ok = True
        for a, b in product(range(n), range(m)):
            A = [[int((r, c) == (a, b)) for c in range(m)] for r in range(n)]
            lhs = [[eps * x for x in r] for r in A]
            if [list(r) for r in _matmul(A, g)] != lhs:
                ok = False
                break
        if ok:
            return InnerWitness(eps, tuple(tuple(eps * x for x in r) for r in _identity(n)), ((0,) * m,) * n)
    return None


@dataclass(frozen=True)
class CoHopfReport:
    k: int
    n: int
    m: int
    homomorphism: bool
    injective: bool
    index: int

    @property
    def ok(self) -> bool:
        return self.homomorphism and self.injective and self.index == self.k ** (self.n * self.m)


def scale_translation(x: SDElement, k: int) -> SDElement:
    return SDElement(x.s, tuple(tuple(k * v for v in r) for r in x.A))


def cohopf_embed(k: int, n: int, m: int, samples: int = 200, seed: int = 0) -> CoHopfReport:
    """Check that (s, A) -> (s, k A) embeds the group onto a subgroup of index k^(nm)."""
    if k <= 0:
        raise ValueError("k must be positive")
    rng = random.Random(seed)
    hom = inj = True
    for _ in range(samples):
        x, y = sd_random(n, m, rng), sd_random(n, m, rng)
        hom &= scale_translation(x * y, k) == scale_translation(x, k) * scale_translation(y, k)
        inj &= (scale_translation(x, k) == scale_translation(y, k)) == (x == y)
    # A -> kA has trivial kernel on Mat_{n x m}
    dim = n * m
    scaling = QMatrix(dim, dim, ({i: k} for i in range(dim)))
    inj &= kernel_basis(scaling).dim == 0
    index = abs(int(det(scaling)))
    return CoHopfReport(k, n, m, hom, inj, index)
