"""Binary forms and their root-multiplicity structure."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Tuple

from . import upoly


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous ``sum_i coeffs[i] * v0**(d-i) * v1**i``."""

    degree: int
    coeffs: Tuple

    def __init__(self, degree: int, coeffs: Sequence):
        cs = tuple(Fraction(c) if isinstance(c, int) else c for c in coeffs)
        if degree < 0 or len(cs) != degree + 1:
            raise ValueError(f"degree {degree} needs {degree + 1} coefficients, got {len(cs)}")
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def linear(cls, a, b) -> "BinaryForm":
        """The form ``a*v0 + b*v1``."""
        return cls(1, (a, b))

    @classmethod
    def from_dehomogenized(cls, p: upoly.Poly, degree: int | None = None) -> "BinaryForm":
        """Homogenize ``p(t)`` (``t = v0/v1``) to the given degree."""
        d = upoly.deg(p) if degree is None else degree
        if d < upoly.deg(p):
            raise ValueError("degree smaller than polynomial degree")
        d = max(d, 0)
        coeffs = [Fraction(0)] * (d + 1)
        for j, c in enumerate(p):
            coeffs[d - j] = c
        return cls(d, coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def evaluate(self, v0, v1):
        d = self.degree
        return sum(c * v0 ** (d - i) * v1**i for i, c in enumerate(self.coeffs))

    def v1_valuation(self) -> int:
        """Multiplicity of ``v1`` as a factor (the root at ``v1 = 0``)."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        raise ValueError("zero-form")

    def dehomogenize(self) -> upoly.Poly:
        """``f(t, 1)`` as an ascending coefficient tuple."""
        return upoly.trim(self.coeffs[::-1])

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        out = [Fraction(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return BinaryForm(self.degree + other.degree, out)

    def __pow__(self, e: int) -> "BinaryForm":
        out = BinaryForm(0, (1,))
        for _ in range(e):
            out = out * self
        return out

    def scaled(self, c) -> "BinaryForm":
        return BinaryForm(self.degree, [a * c for a in self.coeffs])

    def normalized(self) -> "BinaryForm":
        """Scale so the first nonzero coefficient is 1."""
        if self.is_zero():
            return self
        lead = self.coeffs[self.v1_valuation()]
        return BinaryForm(self.degree, [Fraction(a) / lead for a in self.coeffs])

    def proportional_to(self, other: "BinaryForm") -> bool:
        return self.degree == other.degree and self.normalized() == other.normalized()

    def to_json(self) -> dict:
        from .rational import rational_to_str

        return {"degree": self.degree, "coeffs": [rational_to_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "BinaryForm":
        from .rational import to_rational

        return cls(int(obj["degree"]), [to_rational(c) for c in obj["coeffs"]])


def binary_gcd(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """Normalized gcd of two nonzero binary forms."""
    e = min(f.v1_valuation(), g.v1_valuation())
    h = upoly.gcd(f.dehomogenize(), g.dehomogenize())
    core = BinaryForm.from_dehomogenized(h)
    return (core * BinaryForm.linear(0, 1) ** e).normalized()


def binary_divides(g: BinaryForm, f: BinaryForm) -> bool:
    if g.is_zero():
        return f.is_zero()
    if f.is_zero():
        return True
    if g.v1_valuation() > f.v1_valuation():
        return False
    return not upoly.rem(f.dehomogenize(), g.dehomogenize())


@dataclass(frozen=True)
class MultiplicityProfile:
    """Squarefree structure ``f = scalar * prod(factor**mult)``.

    ``factors`` pairs each squarefree, pairwise coprime, normalized factor with
    its multiplicity, in increasing multiplicity. ``partition`` lists
    ``deg(factor)`` copies of each multiplicity, sorted decreasingly.
    """

    factors: Tuple[Tuple[BinaryForm, int], ...]
    scalar: Fraction = Fraction(1)
    partition: Tuple[int, ...] = field(init=False)
    root_counts: Tuple[Tuple[int, int], ...] = field(init=False)

    def __post_init__(self):
        parts = []
        counts = []
        for g, e in self.factors:
            parts += [e] * g.degree
            counts.append((e, g.degree))
        object.__setattr__(self, "partition", tuple(sorted(parts, reverse=True)))
        object.__setattr__(self, "root_counts", tuple(counts))

    @property
    def degree(self) -> int:
        return sum(self.partition)

    def reassemble(self) -> BinaryForm:
        out = BinaryForm(0, (self.scalar,))
        for g, e in self.factors:
            out = out * g**e
        return out

    def squarefree_part(self) -> BinaryForm:
        out = BinaryForm(0, (1,))
        for g, _ in self.factors:
            out = out * g
        return out


def squarefree_decompose(f: BinaryForm) -> MultiplicityProfile:
    if f.is_zero():
        raise ValueError("zero-form")
    e_inf = f.v1_valuation()
    p = f.dehomogenize()
    pieces = {e: BinaryForm.from_dehomogenized(g) for g, e in upoly.yun(p)}
    if e_inf:
        v1 = BinaryForm.linear(0, 1)
        pieces[e_inf] = pieces[e_inf] * v1 if e_inf in pieces else v1
    scalar = p[-1]
    factors = tuple((pieces[e].normalized(), e) for e in sorted(pieces))
    # normalization can rescale the pieces, so recompute the leftover scalar
    prod = BinaryForm(0, (1,))
    for g, e in factors:
        prod = prod * g**e
    i = prod.v1_valuation()
    scalar = Fraction(f.coeffs[i]) / prod.coeffs[i]
    return MultiplicityProfile(factors, scalar)


def _check_partition(parts: Sequence[int]) -> Tuple[int, ...]:
    if any((not isinstance(x, int)) or x <= 0 for x in parts):
        raise ValueError(f"not a partition: {tuple(parts)}")
    return tuple(sorted(parts, reverse=True))


def merge_coarsening(mu: Sequence[int], lam: Sequence[int]) -> bool:
    """True iff ``mu`` arises by grouping the parts of ``lam`` and summing groups."""
    mu_t, lam_t = _check_partition(mu), _check_partition(lam)
    if sum(mu_t) != sum(lam_t):
        raise ValueError(f"partitions of different totals: {sum(mu_t)} vs {sum(lam_t)}")
    return _fits(lam_t, mu_t)


@lru_cache(maxsize=None)
def _fits(items: Tuple[int, ...], bins: Tuple[int, ...]) -> bool:
    # items sorted decreasingly; bins are remaining capacities
    if not items:
        return all(b == 0 for b in bins)
    first, rest = items[0], items[1:]
    tried = set()
    for i, b in enumerate(bins):
        if b >= first and b not in tried:
            tried.add(b)
            nb = bins[:i] + (b - first,) + bins[i + 1 :]
            if _fits(rest, tuple(sorted(nb, reverse=True))):
                return True
    return False
