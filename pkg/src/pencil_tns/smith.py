"""Invariant factors of polynomial matrices over Q[t]."""

from __future__ import annotations

from typing import List, Sequence

from .field import upoly


def _min_degree_entry(m, k):
    best = None
    for i in range(k, len(m)):
        for j in range(k, len(m[0])):
            e = m[i][j]
            if e and (best is None or len(e) < best[0]):
                best = (len(e), i, j)
                if len(e) == 1:
                    return best
    return best


def invariant_factors(matrix: Sequence[Sequence[upoly.Poly]]) -> List[upoly.Poly]:
    """Monic invariant factors ``i_1 | i_2 | ... | i_r`` via a Smith-form reduction."""
    m = [[upoly.trim(e) for e in row] for row in matrix]
    if not m or not m[0]:
        return []
    nrows, ncols = len(m), len(m[0])
    factors = []
    k = 0
    while k < min(nrows, ncols):
        best = _min_degree_entry(m, k)
        if best is None:
            break
        _, i, j = best
        m[k], m[i] = m[i], m[k]
        for row in m:
            row[k], row[j] = row[j], row[k]
        while True:
            piv = m[k][k]
            changed = False
            for i in range(k + 1, nrows):
                if m[i][k]:
                    q, r = upoly.divmod_(m[i][k], piv)
                    m[i] = [upoly.sub(a, upoly.mul(q, b)) for a, b in zip(m[i], m[k])]
                    changed |= bool(r)
            for j in range(k + 1, ncols):
                if m[k][j]:
                    q, r = upoly.divmod_(m[k][j], piv)
                    for row in m:
                        row[j] = upoly.sub(row[j], upoly.mul(q, row[k]))
                    changed |= bool(r)
            if changed:
                # a remainder of smaller degree now sits in row or column k
                cand = [(len(m[i][k]), i, k) for i in range(k + 1, nrows) if m[i][k]]
                cand += [(len(m[k][j]), k, j) for j in range(k + 1, ncols) if m[k][j]]
                _, i, j = min(cand)
                m[k], m[i] = m[i], m[k]
                for row in m:
                    row[k], row[j] = row[j], row[k]
                continue
            bad = None
            for i in range(k + 1, nrows):
                for j in range(k + 1, ncols):
                    if m[i][j] and upoly.rem(m[i][j], piv):
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            m[k] = [upoly.add(a, b) for a, b in zip(m[k], m[bad])]
        factors.append(upoly.monic(m[k][k]))
        k += 1
    return factors
