"""Simple algebraic extensions ``K[mu]/(mu**k - c)``."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class QuotientRingElement:
    """Element ``sum a_i mu**i`` (``i < k``) of ``K[mu]/(mu**k - c)``.

    The base field K is whatever exact scalar type the coefficients use; the
    relation constant ``c`` must live in the same field.
    """

    __slots__ = ("coeffs", "k", "c")

    def __init__(self, coeffs: Sequence, k: int, c):
        if k < 1:
            raise ValueError("relation degree must be positive")
        cs = list(coeffs)
        # fold higher powers with mu**k = c
        while len(cs) > k:
            top = cs.pop()
            cs[len(cs) - k] += top * c
        cs += [0] * (k - len(cs))
        self.coeffs = tuple(cs)
        self.k = k
        self.c = c

    @classmethod
    def generator(cls, k: int, c) -> "QuotientRingElement":
        return cls([0, 1], k, c) if k > 1 else cls([c], k, c)

    def _lift(self, x) -> "QuotientRingElement":
        if isinstance(x, QuotientRingElement):
            if x.k != self.k or x.c != self.c:
                raise ValueError("elements of different quotient rings")
            return x
        return QuotientRingElement([x], self.k, self.c)

    def __add__(self, other):
        o = self._lift(other)
        return QuotientRingElement([a + b for a, b in zip(self.coeffs, o.coeffs)], self.k, self.c)

    __radd__ = __add__

    def __neg__(self):
        return QuotientRingElement([-a for a in self.coeffs], self.k, self.c)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        prod = [0] * (2 * self.k - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                prod[i + j] += a * b
        return QuotientRingElement(prod, self.k, self.c)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = QuotientRingElement([1], self.k, self.c)
        for _ in range(e):
            out = out * self
        return out

    def inverse(self) -> "QuotientRingElement":
        """Solve ``self * y == 1`` as a k x k linear system over the base field."""
        from ..linalg import solve

        cols = []
        basis = QuotientRingElement([1], self.k, self.c)
        for _ in range(self.k):
            cols.append(list((self * basis).coeffs))
            basis = basis * QuotientRingElement.generator(self.k, self.c)
        mat = [[cols[j][i] for j in range(self.k)] for i in range(self.k)]
        rhs = [1] + [0] * (self.k - 1)
        y = solve(mat, rhs)
        if y is None:
            raise ZeroDivisionError("element is a zero divisor")
        return QuotientRingElement(y, self.k, self.c)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, QuotientRingElement):
            return self.k == other.k and self.c == other.c and self.coeffs == other.coeffs
        try:
            return self.coeffs == self._lift(other).coeffs
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.k, self.c))

    def __bool__(self):
        return any(a != 0 for a in self.coeffs)

    def __repr__(self):
        return " + ".join(f"({a})*mu^{i}" for i, a in enumerate(self.coeffs) if a != 0) or "0"
