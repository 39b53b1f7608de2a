"""Independent reference computations used only by the tests.

Nothing here imports the package's linear algebra or bracket code.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

BIG_PRIME = 2147483647


def naive_rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Textbook Gauss-Jordan on a dense copy."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return a, []
    nr, nc = len(a), len(a[0])
    pivots = []
    lead = 0
    for c in range(nc):
        found = None
        for i in range(lead, nr):
            if a[i][c] != 0:
                found = i
                break
        if found is None:
            continue
        a[lead], a[found] = a[found], a[lead]
        pv = a[lead][c]
        a[lead] = [x / pv for x in a[lead]]
        for i in range(nr):
            if i != lead:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[lead])]
        pivots.append(c)
        lead += 1
        if lead == nr:
            break
    return a, pivots


def rank_mod_p(rows, p: int = BIG_PRIME) -> int:
    """Rank over F_p; a lower bound for the rank over Q."""
    a = np.array(rows, dtype=np.int64) % p
    if a.size == 0:
        return 0
    nr, nc = a.shape
    r = 0
    for c in range(nc):
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), p - 2, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        rows_nz = np.nonzero(col)[0]
        if rows_nz.size:
            a[rows_nz] = (a[rows_nz] - (col[rows_nz, None] * a[r]) % p) % p
        r += 1
        if r == nr:
            break
    return r


def dim_u(sizes) -> int:
    return sum(sizes[i] * sizes[j] for i in range(len(sizes)) for j in range(i + 1, len(sizes)))


def matrix_units(sizes) -> list[np.ndarray]:
    """Basis of u as explicit N x N integer matrices, lexicographic block order."""
    n = sum(sizes)
    off = [sum(sizes[:i]) for i in range(len(sizes))]
    out = []
    for i in range(len(sizes)):
        for j in range(i + 1, len(sizes)):
            for r in range(sizes[i]):
                for c in range(sizes[j]):
                    m = np.zeros((n, n), dtype=np.int64)
                    m[off[i] + r, off[j] + c] = 1
                    out.append(m)
    return out


def commutator_table(sizes) -> list[list[list[int]]]:
    """table[a][b] = coordinates of X_a X_b - X_b X_a, read off the matrix entries."""
    mats = matrix_units(sizes)
    pos = [tuple(np.argwhere(m)[0]) for m in mats]
    out = []
    for x in mats:
        row = []
        for y in mats:
            z = x @ y - y @ x
            row.append([int(z[i, j]) for i, j in pos])
        out.append(row)
    return out


def commutator_ranks(sizes, p: int = BIG_PRIME) -> tuple[int, int]:
    """(rank d2, rank d3) mod p with d2, d3 assembled from explicit matrix commutators."""
    br = commutator_table(sizes)
    n = len(br)
    pairs = list(itertools.combinations(range(n), 2))
    where = {pq: i for i, pq in enumerate(pairs)}
    d2 = np.zeros((n, len(pairs)), dtype=np.int64)
    for col, (a, b) in enumerate(pairs):
        d2[:, col] = [-x for x in br[a][b]]
    cols = []
    for a, b, c in itertools.combinations(range(n), 3):
        v = [0] * len(pairs)
        for x, (y, z) in ((c, (a, b)), (b, (c, a)), (a, (b, c))):
            for k, coef in enumerate(br[y][z]):
                if coef and k != x:
                    v[where[(min(x, k), max(x, k))]] += coef if x < k else -coef
        cols.append(v)
    d3 = np.array(cols, dtype=np.int64).T if cols else np.zeros((len(pairs), 0), dtype=np.int64)
    return rank_mod_p(d2, p), rank_mod_p(d3, p)


def _permutations_of_length(n: int, k: int):
    level = {tuple(range(n))}
    for _ in range(k):
        nxt = set()
        for w in level:
            for i in range(n - 1):
                if w[i] < w[i + 1]:
                    v = list(w)
                    v[i], v[i + 1] = v[i + 1], v[i]
                    nxt.add(tuple(v))
        level = nxt
    return level


def kostant_dim(sizes, k: int) -> int:
    """dim H_k(u) from Kostant's theorem for the nilradical of the parabolic with these blocks.

    Sum over permutations w of length k with w(rho) - rho dominant for the
    block-diagonal Levi of the Weyl dimension of that Levi representation.
    """
    n = sum(sizes)
    rho = list(range(n, 0, -1))
    off = [sum(sizes[:i]) for i in range(len(sizes))]
    total = Fraction(0)
    for w in _permutations_of_length(n, k):
        winv = [0] * n
        for i, x in enumerate(w):
            winv[x] = i
        mu = [rho[winv[i]] - rho[i] for i in range(n)]
        dim = Fraction(1)
        for b, o in enumerate(off):
            block = mu[o:o + sizes[b]]
            if any(block[i] < block[i + 1] for i in range(len(block) - 1)):
                dim = Fraction(0)
                break
            for i in range(len(block)):
                for j in range(i + 1, len(block)):
                    dim *= Fraction(block[i] - block[j] + j - i, j - i)
        total += dim
    assert total.denominator == 1
    return int(total)
