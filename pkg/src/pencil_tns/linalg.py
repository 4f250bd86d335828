"""Exact linear algebra over rationals and other exact fields.

Matrices are lists of row lists. Entries may be ints, Fractions, or any exact
field type supporting ``+ - * /`` and comparison with ``0`` (prime-field
elements, quotient-ring elements). Rational inputs take an integer
fraction-free path, everything else uses plain Gauss-Jordan elimination.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import List, Sequence

import numpy as np

Matrix = List[list]


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


def _all_rational(m: Sequence[Sequence]) -> bool:
    return all(_is_rational(x) for row in m for x in row)


def _integer_rows(m: Sequence[Sequence]) -> List[List[int]]:
    """Scale each row by the lcm of its denominators (rank-preserving)."""
    out = []
    for row in m:
        den = 1
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = lcm(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def _int_rank(rows: List[List[int]]) -> int:
    rows = [r[:] for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = None
        best = None
        for i in range(rank, len(rows)):
            v = rows[i][col]
            if v and (best is None or abs(v) < best):
                piv, best = i, abs(v)
                if best == 1:
                    break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank]
        pv = p[col]
        for i in range(rank + 1, len(rows)):
            r = rows[i]
            v = r[col]
            if v:
                g = gcd(pv, v)
                a, b = pv // g, v // g
                new = [a * x - b * y for x, y in zip(r, p)]
                c = 0
                for x in new:
                    if x:
                        c = gcd(c, x)
                        if c == 1:
                            break
                if c > 1:
                    new = [x // c for x in new]
                rows[i] = new
        rank += 1
        if rank == len(rows):
            break
    return rank


def rank(m: Sequence[Sequence]) -> int:
    if not m or not len(m[0]):
        return 0
    if _all_rational(m):
        return _int_rank(_integer_rows(m))
    return len(rref(m)[1])


def rref(m: Sequence[Sequence]):
    """Reduced row echelon form; returns ``(matrix, pivot_columns)``."""
    a = [list(r) for r in m]
    if not a:
        return a, []
    if _all_rational(a):
        a = [[Fraction(x) for x in r] for r in a]
    nrows, ncols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def nullspace(m: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    """Basis of the right kernel, as a list of vectors."""
    if not m:
        if ncols is None:
            raise ValueError("need ncols for an empty matrix")
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(m)
    n = len(m[0])
    zero = red[0][0] * 0 if red and red[0] else 0
    one = zero + 1
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for row, pc in enumerate(pivots):
            v[pc] = -red[row][f]
        basis.append(v)
    return basis


def det(m: Sequence[Sequence]):
    n = len(m)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in m):
        raise ValueError("determinant of a non-square matrix")
    if _all_rational(m):
        return _bareiss_det([[Fraction(x) for x in r] for r in m])
    a = [list(r) for r in m]
    d = a[0][0] * 0 + 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return d * 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        d = d * a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def _bareiss_det(a: List[List[Fraction]]) -> Fraction:
    n = len(a)
    den = 1
    for r in a:
        for x in r:
            den = lcm(den, x.denominator)
    b = [[int(x * den) for x in r] for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if b[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if b[i][k] != 0), None)
            if sw is None:
                return Fraction(0)
            b[k], b[sw] = b[sw], b[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                b[i][j] = (b[i][j] * b[k][k] - b[i][k] * b[k][j]) // prev
        prev = b[k][k]
    return Fraction(sign * b[n - 1][n - 1], den**n)


def solve(m: Sequence[Sequence], rhs: Sequence):
    """One solution of ``m x = rhs`` or ``None`` if inconsistent."""
    n = len(m[0])
    aug = [list(r) + [b] for r, b in zip(m, rhs)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    zero = red[0][0] * 0
    x = [zero] * n
    for row, pc in enumerate(pivots):
        x[pc] = red[row][n]
    return x


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), 0 * row[0] if row else 0) for col in bt] for row in a]


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(r) for r in zip(*a)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def inverse(m: Sequence[Sequence]) -> Matrix:
    n = len(m)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def rank_mod_p(m, p: int) -> int:
    """Rank over GF(p) of an integer matrix, vectorized with numpy.

    Requires ``p < 2**31`` so that products of reduced entries fit in int64.
    """
    if p >= 2**31:
        raise ValueError("modulus too large for int64 elimination")
    a = np.array(m, dtype=object) if not isinstance(m, np.ndarray) else m
    a = np.mod(a, p).astype(np.int64) if a.size else np.zeros((0, 0), dtype=np.int64)
    if a.ndim != 2 or a.size == 0:
        return 0
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        below = a[r + 1 :, c].copy()
        rows = np.nonzero(below)[0]
        if rows.size:
            idx = r + 1 + rows
            a[idx] = (a[idx] - np.outer(below[rows], a[r]) % p) % p
        r += 1
    return r
