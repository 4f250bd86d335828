"""Laurent polynomials in a formal parameter epsilon."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping


class PoleError(ArithmeticError):
    """Raised when taking the epsilon -> 0 limit of something with a pole."""

    def __init__(self, order: int):
        super().__init__(f"pole-at-zero of order {order}")
        self.order = order


class LaurentPoly:
    """Finite sum of ``c_k * eps**k`` with ``k`` any integer.

    Coefficients can be any exact ring elements supporting ``+``, ``*`` and
    comparison with ``0``. Zero coefficients are never stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        clean: Dict[int, object] = {}
        for k, c in (terms or {}).items():
            if c != 0:
                clean[int(k)] = c
        self._terms = clean

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def eps(cls, k: int = 1, c=1) -> "LaurentPoly":
        return cls({k: c})

    @property
    def terms(self) -> Dict[int, object]:
        return dict(self._terms)

    def coeff(self, k: int):
        return self._terms.get(k, 0)

    def min_exponent(self) -> int | None:
        return min(self._terms) if self._terms else None

    def max_exponent(self) -> int | None:
        return max(self._terms) if self._terms else None

    @staticmethod
    def _lift(x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        return LaurentPoly({0: x})

    def __add__(self, other):
        o = self._lift(other)
        out = dict(self._terms)
        for k, c in o._terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        out: Dict[int, object] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in o._terms.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + c1 * c2
        return LaurentPoly(out)

    def __rmul__(self, other):
        return self._lift(other) * self

    def __pow__(self, e: int):
        if e < 0:
            if len(self._terms) != 1:
                raise ArithmeticError("only monomials can be inverted")
            (k, c), = self._terms.items()
            return LaurentPoly({k * e: (Fraction(1) / c) ** (-e)})
        out = LaurentPoly({0: 1})
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        try:
            return self._terms == LaurentPoly({0: other})._terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self._terms.items())))

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"({c})*eps^{k}" for k, c in sorted(self._terms.items()))

    def substitute(self, value):
        """Evaluate at a nonzero exact value of epsilon."""
        acc = 0
        for k, c in self._terms.items():
            acc = acc + c * (Fraction(value) ** k if isinstance(value, int) else value ** k)
        return acc


def laurent_limit(p) -> object:
    """Limit as epsilon -> 0; raises ``PoleError`` on negative exponents."""
    if not isinstance(p, LaurentPoly):
        return p
    lo = p.min_exponent()
    if lo is None:
        return 0
    if lo < 0:
        raise PoleError(-lo)
    return p.coeff(0)
