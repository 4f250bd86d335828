"""Dense univariate polynomials over an exact field.

A polynomial is a tuple of coefficients in ascending degree order with no
trailing zeros; the zero polynomial is the empty tuple. Coefficients are any
exact field elements (``Fraction`` in practice).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Tuple

Poly = Tuple


def trim(coeffs: Sequence) -> Poly:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def const(c) -> Poly:
    return trim((c,))


def deg(p: Poly) -> int:
    """Degree, with ``-1`` for the zero polynomial."""
    return len(p) - 1


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def neg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, neg(q))


def scale(p: Poly, c) -> Poly:
    if c == 0:
        return ()
    return tuple(a * c for a in p)


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def shift(p: Poly, k: int) -> Poly:
    """Multiply by ``t**k``."""
    if not p:
        return ()
    return (0,) * k + tuple(p)


def divmod_(p: Poly, q: Poly) -> Tuple[Poly, Poly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = len(q) - 1
    lead = q[-1]
    if len(r) <= dq:
        return (), tuple(r)
    quo = [0] * (len(r) - dq)
    for i in range(len(r) - 1, dq - 1, -1):
        c = r[i]
        if c == 0:
            continue
        f = Fraction(c) / lead if not isinstance(lead, Fraction) else c / lead
        quo[i - dq] = f
        for j in range(dq + 1):
            r[i - dq + j] -= f * q[j]
    return trim(quo), trim(r[:dq])


def rem(p: Poly, q: Poly) -> Poly:
    return divmod_(p, q)[1]


def exact_div(p: Poly, q: Poly) -> Poly:
    quo, r = divmod_(p, q)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return quo


def monic(p: Poly) -> Poly:
    if not p:
        return ()
    lead = p[-1]
    if lead == 1:
        return p
    return tuple(Fraction(c) / lead for c in p)


def gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd; ``gcd(0, 0) == 0``."""
    a, b = trim(p), trim(q)
    while b:
        a, b = b, rem(a, b)
    return monic(a)


def lcm(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    return monic(exact_div(mul(p, q), gcd(p, q)))


def deriv(p: Poly) -> Poly:
    return trim([i * p[i] for i in range(1, len(p))])


def evaluate(p: Poly, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def power(p: Poly, e: int) -> Poly:
    out: Poly = (1,)
    for _ in range(e):
        out = mul(out, p)
    return out


def yun(p: Poly) -> list[tuple[Poly, int]]:
    """Squarefree factorization over a field of characteristic zero.

    Returns ``[(g, e), ...]`` with monic, squarefree, pairwise coprime ``g`` of
    positive degree and strictly increasing ``e`` such that
    ``p == lead(p) * prod(g**e)``.
    """
    if not p:
        raise ValueError("zero-form")
    if len(p) == 1:
        return []
    dp = deriv(p)
    a = gcd(p, dp)
    b = exact_div(p, a)
    c = exact_div(dp, a)
    d = sub(c, deriv(b))
    out = []
    i = 1
    while deg(b) > 0:
        g = gcd(b, d)
        b = exact_div(b, g)
        c = exact_div(d, g)
        d = sub(c, deriv(b))
        if deg(g) > 0:
            out.append((g, i))
        i += 1
    return out


def interpolate(xs: Sequence, ys: Sequence) -> Poly:
    """Lagrange interpolation through distinct exact nodes."""
    result: Poly = ()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        basis: Poly = (1,)
        denom = 1
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = mul(basis, (-xj, 1))
            denom *= xi - xj
        result = add(result, scale(basis, Fraction(yi) / denom))
    return result


def xgcd(p: Poly, q: Poly) -> Tuple[Poly, Poly, Poly]:
    """``(g, s, t)`` with ``s*p + t*q == g`` and ``g`` the monic gcd."""
    r0, r1 = trim(p), trim(q)
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        quo, rr = divmod_(r0, r1)
        r0, r1 = r1, rr
        s0, s1 = s1, sub(s0, mul(quo, s1))
        t0, t1 = t1, sub(t0, mul(quo, t1))
    if not r0:
        return (), s0, t0
    lead = Fraction(r0[-1])
    return monic(r0), scale(s0, 1 / lead), scale(t0, 1 / lead)
