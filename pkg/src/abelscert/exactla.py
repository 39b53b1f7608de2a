"""Exact scalars and linear algebra over the rationals.

Matrices are stored as a tuple of sparse rows (``{col: Fraction}``); zero
entries are never stored.  Row reduction produces the canonical reduced row
echelon form, so two subspaces are equal exactly when their stored bases
are equal.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rat = Fraction

# above this fraction of nonzero entries rref switches to the dense path
DENSE_THRESHOLD = 0.25

SparseVec = dict  # col -> Fraction, no explicit zeros


def _clean(vec: Mapping[int, object]) -> dict[int, Fraction]:
    return {k: Fraction(v) for k, v in vec.items() if v != 0}


class PLocal:
    """An element ``unit * p**(-exponent)`` of Z[1/p].

    Kept normalized: when ``exponent > 0`` the unit is not divisible by p,
    and zero is always stored as ``0 * p**0``.
    """

    __slots__ = ("unit", "exponent", "p")

    def __init__(self, unit: int, exponent: int = 0, p: int = 2):
        if exponent < 0:
            unit *= p ** (-exponent)
            exponent = 0
        if unit == 0:
            exponent = 0
        while exponent > 0 and unit % p == 0:
            unit //= p
            exponent -= 1
        self.unit = unit
        self.exponent = exponent
        self.p = p

    @classmethod
    def from_fraction(cls, x, p: int) -> PLocal:
        x = Fraction(x)
        d, k = x.denominator, 0
        while d % p == 0:
            d //= p
            k += 1
        if d != 1:
            raise ValueError(f"{x} is not in Z[1/{p}]")
        return cls(x.numerator, k, p)

    def to_fraction(self) -> Fraction:
        return Fraction(self.unit, self.p ** self.exponent)

    def _coerce(self, other) -> PLocal:
        if isinstance(other, PLocal):
            if other.p != self.p:
                raise ValueError("mixing Z[1/p] elements for different primes")
            return other
        if isinstance(other, int):
            return PLocal(other, 0, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        k = max(self.exponent, other.exponent)
        u = self.unit * self.p ** (k - self.exponent) + other.unit * self.p ** (k - other.exponent)
        return PLocal(u, k, self.p)

    __radd__ = __add__

    def __neg__(self):
        return PLocal(-self.unit, self.exponent, self.p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PLocal(self.unit * other.unit, self.exponent + other.exponent, self.p)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        u = abs(self.unit)
        if u == 0:
            return False
        while u % self.p == 0:
            u //= self.p
        return u == 1

    def inverse(self) -> PLocal:
        """Inverse in Z[1/p]; only units ``±p**k`` are invertible."""
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit of Z[1/{self.p}]")
        u = abs(self.unit)
        k = 0
        while u % self.p == 0:
            u //= self.p
            k += 1
        sign = 1 if self.unit > 0 else -1
        # (sign * p^k * p^-e)^-1 = sign * p^(e-k)
        return PLocal(sign, k - self.exponent, self.p)

    def is_integer(self) -> bool:
        return self.exponent == 0

    def frac_part(self) -> PLocal:
        """Representative of self modulo Z lying in [0, 1)."""
        q = self.p ** self.exponent
        return PLocal(self.unit % q, self.exponent, self.p)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.exponent == 0 and self.unit == other
        if isinstance(other, PLocal):
            return (self.unit, self.exponent, self.p) == (other.unit, other.exponent, other.p)
        return NotImplemented

    def __hash__(self):
        return hash((self.unit, self.exponent, self.p))

    def __repr__(self):
        return f"PLocal({self.unit}, {self.exponent}, p={self.p})"

    def __str__(self):
        return str(self.to_fraction())


class QMatrix:
    """Immutable sparse rational matrix."""

    __slots__ = ("nrows", "ncols", "_rows", "_cols")

    def __init__(self, nrows: int, ncols: int, rows: Iterable[Mapping[int, object]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            self._rows = tuple({} for _ in range(nrows))
        else:
            self._rows = tuple(_clean(r) for r in rows)
            if len(self._rows) != nrows:
                raise ValueError("row count mismatch")
            for r in self._rows:
                if r and not (0 <= min(r) and max(r) < ncols):
                    raise ValueError("column index out of range")
        self._cols = None

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]], ncols: int | None = None) -> QMatrix:
        nrows = len(data)
        if ncols is None:
            ncols = len(data[0]) if nrows else 0
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix")
        return cls(nrows, ncols, ({j: x for j, x in enumerate(r) if x != 0} for r in data))

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Mapping[int, object]]) -> QMatrix:
        rows: list[dict] = [{} for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, x in col.items():
                if x != 0:
                    rows[i][j] = x
        return cls(nrows, len(columns), rows)

    @classmethod
    def identity(cls, n: int) -> QMatrix:
        return cls(n, n, ({i: 1} for i in range(n)))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> QMatrix:
        return cls(nrows, ncols)

    @property
    def rows(self) -> tuple[dict[int, Fraction], ...]:
        return self._rows

    def row(self, i: int) -> dict[int, Fraction]:
        return dict(self._rows[i])

    def columns(self) -> tuple[dict[int, Fraction], ...]:
        if self._cols is None:
            cols: list[dict] = [{} for _ in range(self.ncols)]
            for i, r in enumerate(self._rows):
                for j, x in r.items():
                    cols[j][i] = x
            self._cols = tuple(cols)
        return self._cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._rows[i].get(j, Fraction(0))

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._rows)

    @property
    def density(self) -> float:
        size = self.nrows * self.ncols
        return self.nnz / size if size else 0.0

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self._rows):
            for j, x in r.items():
                out[i][j] = x
        return out

    def transpose(self) -> QMatrix:
        return QMatrix(self.ncols, self.nrows, self.columns())

    def is_zero(self) -> bool:
        return not any(self._rows)

    def matvec(self, vec: Sequence[object] | Mapping[int, object]) -> list[Fraction]:
        if not isinstance(vec, Mapping):
            if len(vec) != self.ncols:
                raise ValueError("dimension mismatch")
            vec = {j: x for j, x in enumerate(vec) if x != 0}
        return [sum((x * vec[j] for j, x in r.items() if j in vec), Fraction(0)) for r in self._rows]

    def __matmul__(self, other: QMatrix) -> QMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        orows = other._rows
        for r in self._rows:
            acc: dict[int, Fraction] = defaultdict(Fraction)
            for k, x in r.items():
                for j, y in orows[k].items():
                    acc[j] += x * y
            out.append(acc)
        return QMatrix(self.nrows, other.ncols, out)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, tuple(tuple(sorted(r.items())) for r in self._rows)))

    def __repr__(self):
        return f"QMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


class _Echelon:
    """Incrementally maintained reduced row echelon basis of a row space.

    Every stored row has a 1 at its pivot and zeros at all other pivots, so a
    new vector is reduced in a single pass over its pivot columns.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, dict[int, Fraction]] = {}
        # non-pivot column -> pivots whose row is nonzero there
        self.occ: dict[int, set[int]] = defaultdict(set)

    def reduce(self, vec: Mapping[int, object]) -> dict[int, Fraction]:
        v = _clean(vec)
        for c in [c for c in v if c in self.rows]:
            coef = v.pop(c)
            for k, x in self.rows[c].items():
                if k == c:
                    continue
                nv = v.get(k, 0) - coef * x
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
        return v

    def add(self, vec: Mapping[int, object]) -> bool:
        r = self.reduce(vec)
        if not r:
            return False
        piv = min(r)
        inv = 1 / r[piv]
        if inv != 1:
            r = {k: x * inv for k, x in r.items()}
        for q in self.occ.pop(piv, ()):
            row = self.rows[q]
            coef = row.pop(piv)
            for k, x in r.items():
                if k == piv:
                    continue
                nv = row.get(k, 0) - coef * x
                if nv:
                    if k not in row:
                        self.occ[k].add(q)
                    row[k] = nv
                elif k in row:
                    del row[k]
                    self.occ[k].discard(q)
        self.rows[piv] = r
        for k in r:
            if k != piv:
                self.occ[k].add(piv)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> tuple[int, ...]:
        return tuple(sorted(self.rows))

    def basis_rows(self) -> tuple[dict[int, Fraction], ...]:
        return tuple(dict(self.rows[p]) for p in sorted(self.rows))


def _rref_dense(m: QMatrix) -> tuple[list[list[Fraction]], list[int]]:
    a = m.to_dense()
    nrows, ncols = m.nrows, m.ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        src = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if src is None:
            continue
        a[r], a[src] = a[src], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: QMatrix, method: str = "auto") -> tuple[QMatrix, list[int]]:
    """Canonical reduced row echelon form of ``m`` and its pivot columns.

    ``method`` is ``"sparse"``, ``"dense"`` or ``"auto"`` (dense once the
    density exceeds ``DENSE_THRESHOLD``).  Both paths give identical output.
    """
    if method == "auto":
        method = "dense" if m.density > DENSE_THRESHOLD else "sparse"
    if method == "dense":
        a, pivots = _rref_dense(m)
        return QMatrix.from_dense(a, m.ncols), pivots
    if method != "sparse":
        raise ValueError(f"unknown method {method!r}")
    ech = _Echelon(m.ncols)
    for r in m.rows:
        if r:
            ech.add(r)
    rows = list(ech.basis_rows())
    rows += [{}] * (m.nrows - len(rows))
    return QMatrix(m.nrows, m.ncols, rows), list(ech.pivots())


def rank(m: QMatrix) -> int:
    return len(rref(m)[1])


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of Q^ambient_dim held by its canonical RREF basis."""

    ambient_dim: int
    rows: tuple[dict[int, Fraction], ...] = ()
    pivots: tuple[int, ...] = ()

    @classmethod
    def span(cls, vectors: Iterable[Mapping[int, object] | Sequence[object]], ambient_dim: int) -> Subspace:
        ech = _Echelon(ambient_dim)
        for v in vectors:
            if not isinstance(v, Mapping):
                if len(v) != ambient_dim:
                    raise ValueError("vector length does not match ambient dimension")
                v = {j: x for j, x in enumerate(v) if x != 0}
            elif v and not (0 <= min(v) and max(v) < ambient_dim):
                raise ValueError("vector index out of range")
            ech.add(v)
        return cls._from_echelon(ech)

    @classmethod
    def _from_echelon(cls, ech: _Echelon) -> Subspace:
        return cls(ech.ncols, ech.basis_rows(), ech.pivots())

    @classmethod
    def zero(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim)

    @classmethod
    def full(cls, ambient_dim: int) -> Subspace:
        return cls.span(({i: 1} for i in range(ambient_dim)), ambient_dim)

    @classmethod
    def coordinate(cls, indices: Iterable[int], ambient_dim: int) -> Subspace:
        return cls.span(({i: 1} for i in indices), ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> QMatrix:
        return QMatrix(self.dim, self.ambient_dim, self.rows)

    def _echelon(self) -> _Echelon:
        ech = _Echelon(self.ambient_dim)
        for p, r in zip(self.pivots, self.rows):
            ech.rows[p] = dict(r)
            for k in r:
                if k != p:
                    ech.occ[k].add(p)
        return ech

    def contains(self, vec: Mapping[int, object]) -> bool:
        return not self._echelon().reduce(vec)

    def __add__(self, other: Subspace) -> Subspace:
        _check_ambient(self, other)
        ech = self._echelon()
        for r in other.rows:
            ech.add(r)
        return Subspace._from_echelon(ech)

    def __le__(self, other: Subspace) -> bool:
        _check_ambient(self, other)
        ech = other._echelon()
        return all(not ech.reduce(r) for r in self.rows)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return subspace_equal(self, other)

    __hash__ = None

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(f"ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")


def kernel_basis(m: QMatrix) -> Subspace:
    return Subspace.span(_kernel_vectors(m), m.ncols)


def _kernel_vectors(m: QMatrix) -> list[dict[int, Fraction]]:
    """One kernel vector per free column, with a 1 in that column."""
    red, pivots = rref(m)
    pivset = set(pivots)
    vecs: dict[int, dict[int, Fraction]] = {f: {f: Fraction(1)} for f in range(m.ncols) if f not in pivset}
    for p, r in zip(pivots, red.rows):
        for f, x in r.items():
            if f != p:
                vecs[f][p] = -x
    return [vecs[f] for f in sorted(vecs)]


def image_basis(m: QMatrix) -> Subspace:
    """Column span of ``m``."""
    return Subspace.span(m.columns(), m.nrows)


def subspace_equal(a: Subspace, b: Subspace) -> bool:
    _check_ambient(a, b)
    return a.pivots == b.pivots and a.rows == b.rows


def direct_sum_check(a: Subspace, b: Subspace) -> bool:
    """True iff ``a`` and ``b`` intersect trivially."""
    _check_ambient(a, b)
    return (a + b).dim == a.dim + b.dim


@dataclass(frozen=True)
class AffineSolution:
    """Solution set ``{point + sum_i t_i * directions[i]}`` of ``m x = rhs``.

    ``point`` is None when the system is inconsistent.  ``free`` lists the
    free variable belonging to each direction.
    """

    point: tuple[Fraction, ...] | None
    directions: tuple[tuple[Fraction, ...], ...] = ()
    free: tuple[int, ...] = field(default=())

    @property
    def kind(self) -> str:
        if self.point is None:
            return "empty"
        return "affine" if self.directions else "point"

    @property
    def is_empty(self) -> bool:
        return self.point is None

    def coordinate_range(self, i: int) -> tuple[Fraction, bool] | None:
        """Projection onto coordinate ``i``: (value, unbounded) or None if empty."""
        if self.point is None:
            return None
        return self.point[i], any(d[i] != 0 for d in self.directions)


def solve_affine(m: QMatrix, rhs: Sequence[object]) -> AffineSolution:
    if len(rhs) != m.nrows:
        raise ValueError("rhs length must equal the number of rows")
    n = m.ncols
    aug = QMatrix(m.nrows, n + 1, ({**r, n: b} if b != 0 else r for r, b in zip(m.rows, rhs)))
    red, pivots = rref(aug)
    if pivots and pivots[-1] == n:
        return AffineSolution(None)
    point = [Fraction(0)] * n
    for p, r in zip(pivots, red.rows):
        point[p] = r.get(n, Fraction(0))
    dirs = []
    for v in _kernel_vectors(m):
        d = [Fraction(0)] * n
        for j, x in v.items():
            d[j] = x
        dirs.append(tuple(d))
    pivset = set(pivots)
    free = tuple(f for f in range(n) if f not in pivset)
    return AffineSolution(tuple(point), tuple(dirs), free)


def det(m: QMatrix) -> Fraction:
    if m.nrows != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    a = m.to_dense()
    n = m.nrows
    result = Fraction(1)
    for c in range(n):
        src = next((i for i in range(c, n) if a[i][c] != 0), None)
        if src is None:
            return Fraction(0)
        if src != c:
            a[c], a[src] = a[src], a[c]
            result = -result
        piv = a[c][c]
        result *= piv
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / piv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result


def inverse(m: QMatrix) -> QMatrix:
    n = m.nrows
    if m.ncols != n:
        raise ValueError("inverse of a non-square matrix")
    aug = QMatrix(n, 2 * n, ({**r, n + i: 1} for i, r in enumerate(m.rows)))
    red, pivots = rref(aug, method="dense")
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return QMatrix(n, n, ({j - n: x for j, x in r.items() if j >= n} for r in red.rows))
