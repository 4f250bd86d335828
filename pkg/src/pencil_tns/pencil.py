"""Matrix pencils ``v0*A + v1*B`` and their Kronecker invariants."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .field import BinaryForm, binary_gcd, upoly
from .field.rational import rational_to_str, to_rational
from .smith import invariant_factors
from .tensor import DenseTensor


def _zeros(r: int, c: int) -> List[List[Fraction]]:
    return [[Fraction(0)] * c for _ in range(r)]


@dataclass(frozen=True)
class MatrixPencil:
    """The pencil ``v0*A + v1*B`` with ``A``, ``B`` of shape ``n1 x n2``.

    Either dimension may be zero (the blocks ``L_0`` and ``R_0`` are 0x1 and 1x0).
    """

    n1: int
    n2: int
    A: Tuple[Tuple[Fraction, ...], ...]
    B: Tuple[Tuple[Fraction, ...], ...]

    def __init__(self, A: Sequence[Sequence], B: Sequence[Sequence], n1: int | None = None, n2: int | None = None):
        A_ = tuple(tuple(to_rational(x) if not isinstance(x, Fraction) else x for x in r) for r in A)
        B_ = tuple(tuple(to_rational(x) if not isinstance(x, Fraction) else x for x in r) for r in B)
        n1 = len(A_) if n1 is None else n1
        n2 = (len(A_[0]) if A_ else 0) if n2 is None else n2
        for name, M in (("A", A_), ("B", B_)):
            if len(M) != n1 or any(len(r) != n2 for r in M):
                raise ValueError(f"{name} is not {n1}x{n2}")
        object.__setattr__(self, "n1", n1)
        object.__setattr__(self, "n2", n2)
        object.__setattr__(self, "A", A_)
        object.__setattr__(self, "B", B_)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.n1, self.n2

    def to_tensor(self) -> DenseTensor:
        if not self.n1 or not self.n2:
            raise ValueError("empty pencils have no tensor form")
        return DenseTensor([self.A, self.B], domain="rational")

    @classmethod
    def from_tensor(cls, t: DenseTensor) -> "MatrixPencil":
        if t.order != 3 or t.shape[0] != 2:
            raise ValueError(f"a pencil needs shape (2, n1, n2), got {t.shape}")
        return cls([list(r) for r in t.data[0]], [list(r) for r in t.data[1]])

    def evaluate(self, v0, v1) -> List[list]:
        return [[v0 * a + v1 * b for a, b in zip(ra, rb)] for ra, rb in zip(self.A, self.B)]

    def transpose(self) -> "MatrixPencil":
        At = [[self.A[i][j] for i in range(self.n1)] for j in range(self.n2)]
        Bt = [[self.B[i][j] for i in range(self.n1)] for j in range(self.n2)]
        return MatrixPencil(At, Bt, self.n2, self.n1)

    def conjugate(self, P: Sequence[Sequence], Q: Sequence[Sequence]) -> "MatrixPencil":
        """``P * (v0 A + v1 B) * Q``."""
        if not self.n1 or not self.n2:
            return self
        return MatrixPencil(linalg.matmul(linalg.matmul(P, self.A), Q), linalg.matmul(linalg.matmul(P, self.B), Q))

    def change_v0_basis(self, g: Sequence[Sequence]) -> "MatrixPencil":
        """Apply ``g`` in GL2 to the first tensor factor: new slice a is sum_b g[a][b] * slice b."""
        (a, b), (c, d) = g
        A = [[a * x + b * y for x, y in zip(ra, rb)] for ra, rb in zip(self.A, self.B)]
        B = [[c * x + d * y for x, y in zip(ra, rb)] for ra, rb in zip(self.A, self.B)]
        return MatrixPencil(A, B, self.n1, self.n2)

    def det_form(self) -> BinaryForm:
        """``det(v0 A + v1 B)`` as a binary form of degree n (square pencils only)."""
        if self.n1 != self.n2:
            raise ValueError("determinant of a non-square pencil")
        n = self.n1
        # f(1, t) = sum_i c_i t^i, interpolated from n+1 exact evaluations
        xs = [Fraction(i) for i in range(n + 1)]
        ys = [linalg.det(self.evaluate(Fraction(1), x)) for x in xs]
        p = upoly.interpolate(xs, ys)
        coeffs = [p[i] if i < len(p) else Fraction(0) for i in range(n + 1)]
        return BinaryForm(n, coeffs)

    def normal_rank(self) -> int:
        lim = min(self.n1, self.n2)
        best = 0
        for t in range(lim + 1):
            best = max(best, linalg.rank(self.evaluate(Fraction(t), Fraction(1))))
            if best == lim:
                break
        return best

    def to_json(self) -> dict:
        return {
            "n1": self.n1,
            "n2": self.n2,
            "A": [[rational_to_str(x) for x in r] for r in self.A],
            "B": [[rational_to_str(x) for x in r] for r in self.B],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MatrixPencil":
        if "A" in obj and "B" in obj:
            return cls(obj["A"], obj["B"], obj.get("n1"), obj.get("n2"))
        if "shape" in obj:
            return cls.from_tensor(DenseTensor.from_json(obj))
        raise ValueError("pencil JSON needs 'A' and 'B' (or a tensor with 'shape')")


EMPTY = MatrixPencil([], [], 0, 0)


def left_block(p: int) -> MatrixPencil:
    if p < 0:
        raise ValueError("singular blocks need p >= 0")
    A = _zeros(p, p + 1)
    B = _zeros(p, p + 1)
    for i in range(p):
        A[i][i] = Fraction(1)
        B[i][i + 1] = Fraction(1)
    return MatrixPencil(A, B, p, p + 1)


def right_block(p: int) -> MatrixPencil:
    return left_block(p).transpose()


def jordan_block(p: int, z: Sequence) -> MatrixPencil:
    """``J_p(z)`` for ``z = z0*v0 + z1*v1``: A = z0*I, B = z1*I + superdiagonal.

    When ``z`` is a multiple of ``v1`` the superdiagonal goes on ``A`` instead,
    otherwise the block would split into ``p`` blocks of size one.
    """
    if p < 1:
        raise ValueError("Jordan blocks need p >= 1")
    z0, z1 = (to_rational(x) if not isinstance(x, Fraction) else x for x in z)
    if z0 == 0 and z1 == 0:
        raise ValueError("eigenvalue vector must be nonzero")
    A = _zeros(p, p)
    B = _zeros(p, p)
    for i in range(p):
        A[i][i] = z0
        B[i][i] = z1
        if i + 1 < p:
            (B if z0 != 0 else A)[i][i + 1] = Fraction(1)
    return MatrixPencil(A, B)


def make_block(kind: str, p: int, z: Sequence | None = None) -> MatrixPencil:
    kind = kind.upper()
    if kind in ("L", "LEFT"):
        return left_block(p)
    if kind in ("R", "RIGHT"):
        return right_block(p)
    if kind in ("J", "JORDAN"):
        if z is None:
            raise ValueError("Jordan blocks need an eigenvalue")
        return jordan_block(p, z)
    raise ValueError(f"unknown block kind {kind!r}")


def block_sum(*pencils: MatrixPencil) -> MatrixPencil:
    n1 = sum(p.n1 for p in pencils)
    n2 = sum(p.n2 for p in pencils)
    A = _zeros(n1, n2)
    B = _zeros(n1, n2)
    r = c = 0
    for p in pencils:
        for i in range(p.n1):
            for j in range(p.n2):
                A[r + i][c + j] = p.A[i][j]
                B[r + i][c + j] = p.B[i][j]
        r += p.n1
        c += p.n2
    return MatrixPencil(A, B, n1, n2)


def box_times_identity(t: MatrixPencil, q: int) -> MatrixPencil:
    if q < 1:
        raise ValueError("q must be positive")
    return block_sum(*([t] * q))


def box_times(t: MatrixPencil, M: Sequence[Sequence]) -> MatrixPencil:
    """Kronecker product of the pencil with a constant matrix."""
    from .tensor import kron_matrices

    if not t.n1 or not t.n2:
        raise ValueError("empty pencil")
    return MatrixPencil(kron_matrices(t.A, M), kron_matrices(t.B, M))


# ---------------------------------------------------------------------------
# Kronecker invariants


@dataclass(frozen=True)
class JordanGroup:
    """Jordan blocks shared by every root of a squarefree certificate.

    ``certificate`` is a normalized squarefree binary form whose roots are the
    eigenvalues of this group, or ``None`` for a symbolic group of ``degree``
    distinct unspecified eigenvalues. Each root carries blocks of ``sizes``.
    """

    certificate: Optional[BinaryForm]
    sizes: Tuple[int, ...]
    degree: int

    def to_json(self) -> dict:
        return {
            "certificate": self.certificate.to_json() if self.certificate is not None else None,
            "sizes": list(self.sizes),
            "distinct_eigenvalues": self.degree,
        }


def _group_key(g: JordanGroup):
    cert = g.certificate.coeffs if g.certificate is not None else ()
    return (g.sizes, g.degree, g.certificate is None, cert)


@dataclass(frozen=True)
class KroneckerForm:
    left: Tuple[int, ...]
    right: Tuple[int, ...]
    jordan: Tuple[JordanGroup, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(sorted(self.left)))
        object.__setattr__(self, "right", tuple(sorted(self.right)))
        object.__setattr__(self, "jordan", _canonical_groups(self.jordan))

    @property
    def n1(self) -> int:
        return sum(self.left) + sum(p + 1 for p in self.right) + sum(g.degree * sum(g.sizes) for g in self.jordan)

    @property
    def n2(self) -> int:
        return sum(p + 1 for p in self.left) + sum(self.right) + sum(g.degree * sum(g.sizes) for g in self.jordan)

    def jordan_size_lists(self) -> Counter:
        """Multiset of per-eigenvalue block-size lists (certificates forgotten)."""
        return Counter({g.sizes: 0 for g in self.jordan}) + Counter(
            {g.sizes: sum(h.degree for h in self.jordan if h.sizes == g.sizes) for g in self.jordan}
        )

    def is_symbolic(self) -> bool:
        return any(g.certificate is None for g in self.jordan)

    def matches(self, other: "KroneckerForm") -> bool:
        """Equality, treating symbolic certificates as wildcards for distinct eigenvalues."""
        if self.left != other.left or self.right != other.right:
            return False
        if not self.is_symbolic() and not other.is_symbolic():
            return self == other
        return self.jordan_size_lists() == other.jordan_size_lists()

    def to_json(self) -> dict:
        blocks = [{"kind": "L", "p": p} for p in self.left]
        blocks += [{"kind": "R", "p": p} for p in self.right]
        for g in self.jordan:
            blocks.append({"kind": "J", **g.to_json()})
        return {"n1": self.n1, "n2": self.n2, "blocks": blocks}

    def realize(self) -> MatrixPencil:
        """A block sum with these invariants; needs rational (degree-1 factor) eigenvalues.

        Certificates of higher degree must split into rational linear factors.
        """
        parts = [left_block(p) for p in self.left] + [right_block(p) for p in self.right]
        for g in self.jordan:
            if g.certificate is None:
                raise ValueError("symbolic certificates cannot be realized")
            for z in rational_linear_factors(g.certificate):
                parts += [jordan_block(s, z) for s in g.sizes]
        return block_sum(*parts) if parts else EMPTY


def _canonical_groups(groups: Iterable[JordanGroup]) -> Tuple[JordanGroup, ...]:
    """Merge concrete groups with equal size lists into a product certificate."""
    merged: Dict[Tuple[int, ...], JordanGroup] = {}
    symbolic = []
    for g in groups:
        sizes = tuple(sorted(g.sizes, reverse=True))
        if g.certificate is None:
            symbolic.append(JordanGroup(None, sizes, g.degree))
            continue
        if sizes in merged:
            prev = merged[sizes]
            cert = (prev.certificate * g.certificate).normalized()
            merged[sizes] = JordanGroup(cert, sizes, prev.degree + g.degree)
        else:
            merged[sizes] = JordanGroup(g.certificate.normalized(), sizes, g.certificate.degree)
    return tuple(sorted(list(merged.values()) + symbolic, key=_group_key))


def rational_linear_factors(f: BinaryForm) -> List[Tuple[Fraction, Fraction]]:
    """Split a squarefree form into rational linear factors ``(z0, z1)``; error if impossible."""
    out = []
    e = f.v1_valuation()
    if e > 1:
        raise ValueError("certificate is not squarefree")
    if e:
        out.append((Fraction(0), Fraction(1)))
    p = f.dehomogenize()
    # rational root test on the integer-scaled polynomial
    from math import lcm as _lcm

    den = 1
    for c in p:
        den = _lcm(den, Fraction(c).denominator)
    ip = [int(c * den) for c in p]
    while len(ip) > 1:
        a0 = next(i for i, c in enumerate(ip) if c != 0)
        if a0:
            out.append((Fraction(1), Fraction(0)))
            ip = ip[a0:]
            continue
        found = None
        for num in _divisors(abs(ip[0])):
            for den_ in _divisors(abs(ip[-1])):
                for s in (1, -1):
                    x = Fraction(s * num, den_)
                    if upoly.evaluate(ip, x) == 0:
                        found = x
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            raise ValueError("certificate has irrational roots")
        # root t = x of f(t, 1) is the linear form v0 - x*v1
        out.append((Fraction(1), -found))
        q = upoly.exact_div(tuple(Fraction(c) for c in ip), (-found, Fraction(1)))
        den = 1
        for c in q:
            den = _lcm(den, Fraction(c).denominator)
        ip = [int(c * den) for c in q]
    return out


def _divisors(n: int) -> List[int]:
    if n == 0:
        return [0]
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _layered(A, B, n1: int, n2: int, k: int) -> List[list]:
    """Coefficient matrix for degree-k kernel vectors of ``v0 A + v1 B``."""
    rows = (k + 2) * n1
    cols = (k + 1) * n2
    M = _zeros(rows, cols)
    for j in range(k + 1):
        for i in range(n1):
            for c in range(n2):
                M[j * n1 + i][j * n2 + c] = A[i][c]
                M[(j + 1) * n1 + i][j * n2 + c] = B[i][c]
    return M


def _column_minimal_indices(t: MatrixPencil, count: int) -> List[int]:
    if count == 0:
        return []
    out: List[int] = []
    prev_nu = 0
    prev_c = 0
    k = 0
    while True:
        M = _layered(t.A, t.B, t.n1, t.n2, k)
        nu = (k + 1) * t.n2 - (linalg.rank(M) if t.n1 else 0)
        c = nu - prev_nu  # blocks L_p with p <= k
        out += [k] * (c - prev_c)
        if c >= count:
            return out
        prev_nu, prev_c = nu, c
        k += 1
        if k > t.n1 + 1:
            raise ArithmeticError("minimal index search did not terminate")


def _infinite_sizes(t: MatrixPencil, total_rank: int, max_size: int) -> List[int]:
    """Sizes of Jordan blocks at ``v1 = 0`` from block-Toeplitz ranks at s=0 of A + sB."""
    if max_size == 0:
        return []
    # rank of the j-layer Toeplitz matrix = j*r - sum_b min(j, size_b)
    deficits = [0]
    for j in range(1, max_size + 2):
        T = _zeros(j * t.n1, j * t.n2)
        for d in range(j):
            for i in range(t.n1):
                for c in range(t.n2):
                    T[d * t.n1 + i][d * t.n2 + c] = t.A[i][c]
                    if d + 1 < j:
                        T[(d + 1) * t.n1 + i][d * t.n2 + c] = t.B[i][c]
        deficits.append(j * total_rank - linalg.rank(T))
        if j >= 2 and deficits[-1] == deficits[-2]:
            break
    # deficits[j] - deficits[j-1] = number of blocks of size >= j
    ge = [deficits[j] - deficits[j - 1] for j in range(1, len(deficits))]
    sizes = []
    for j, cnt in enumerate(ge, start=1):
        nxt = ge[j] if j < len(ge) else 0
        sizes += [j] * (cnt - nxt)
    return sorted(sizes, reverse=True)


def _finite_groups(factors: List[upoly.Poly]) -> List[JordanGroup]:
    """Group roots of the invariant factors by their exponent vectors."""
    if not factors or upoly.deg(factors[-1]) <= 0:
        return []
    last = factors[-1]
    sq = upoly.exact_div(last, upoly.gcd(last, upoly.deriv(last)))
    groups: List[Tuple[upoly.Poly, List[int]]] = [(upoly.monic(sq), [])]
    for f in factors:
        pieces = upoly.yun(f) if upoly.deg(f) > 0 else []
        new = []
        for h, vec in groups:
            rest = h
            for g, e in pieces:
                common = upoly.gcd(rest, g)
                if upoly.deg(common) > 0:
                    new.append((common, vec + [e]))
                    rest = upoly.exact_div(rest, common)
            if upoly.deg(rest) > 0:
                new.append((upoly.monic(rest), vec + [0]))
        groups = new
    out = []
    for h, vec in groups:
        sizes = tuple(sorted((e for e in vec if e > 0), reverse=True))
        cert = BinaryForm.from_dehomogenized(h).normalized()
        out.append(JordanGroup(cert, sizes, cert.degree))
    return out


def kronecker_decompose(t: MatrixPencil) -> KroneckerForm:
    r = t.normal_rank() if t.n1 and t.n2 else 0
    left = _column_minimal_indices(t, t.n2 - r)
    right = _column_minimal_indices(t.transpose(), t.n1 - r)
    reg = t.n1 - sum(left) - sum(p + 1 for p in right)
    groups: List[JordanGroup] = []
    if reg > 0:
        # tA + B: roots t=x are the finite eigenvalues v0 - x v1
        poly = [[upoly.trim((b, a)) for a, b in zip(ra, rb)] for ra, rb in zip(t.A, t.B)]
        factors = invariant_factors(poly)
        groups = _finite_groups(factors)
        finite = sum(g.degree * sum(g.sizes) for g in groups)
        inf_sizes = _infinite_sizes(t, r, reg - finite)
        if inf_sizes:
            groups.append(JordanGroup(BinaryForm.linear(0, 1), tuple(inf_sizes), 1))
    form = KroneckerForm(tuple(left), tuple(right), tuple(groups))
    if form.n1 != t.n1 or form.n2 != t.n2:
        raise ArithmeticError(f"block accounting failed: {form.n1}x{form.n2} vs {t.n1}x{t.n2}")
    return form


def homogeneous_invariant_factors(t: MatrixPencil) -> List[BinaryForm]:
    """Invariant factors ``i_1 | ... | i_r`` of ``v0 A + v1 B`` as normalized binary forms.

    The part away from ``v1 = 0`` comes from the Smith form of ``tA + B``; the
    power of ``v1`` in each factor comes from the Smith form of ``A + sB``.
    """
    if not t.n1 or not t.n2:
        return []
    finite = invariant_factors([[upoly.trim((b, a)) for a, b in zip(ra, rb)] for ra, rb in zip(t.A, t.B)])
    at_inf = invariant_factors([[upoly.trim((a, b)) for a, b in zip(ra, rb)] for ra, rb in zip(t.A, t.B)])
    if len(finite) != len(at_inf):
        raise ArithmeticError("normal rank mismatch between the two charts")
    out = []
    for f, g in zip(finite, at_inf):
        e = next(i for i, c in enumerate(g) if c != 0)
        out.append((BinaryForm.from_dehomogenized(f) * BinaryForm.linear(0, 1) ** e).normalized())
    return out


def generic_structure(n1: int, n2: int) -> KroneckerForm:
    if n1 < 1 or n2 < 1:
        raise ValueError("dimensions must be positive")
    if n1 > 2 * n2 or n2 > 2 * n1:
        raise ValueError(f"no concise tensors in C^2 x C^{n1} x C^{n2}")
    if n1 == n2:
        return KroneckerForm((), (), (JordanGroup(None, (1,), n1),))
    small, big = min(n1, n2), max(n1, n2)
    blocks = big - small
    p = -(-small // blocks) - 1
    beta = small - p * blocks
    alpha = blocks - beta
    idx = (p,) * alpha + (p + 1,) * beta
    return KroneckerForm(idx, ()) if n1 < n2 else KroneckerForm((), idx)


@dataclass(frozen=True)
class PokrzywaInvariants:
    """Block counts: ``d[(p, certificate)]`` per root, ``ell[p]`` and ``r[p]``."""

    d: Tuple[Tuple[int, BinaryForm, int], ...]
    ell: Dict[int, int]
    r: Dict[int, int]

    def d_count(self, p: int, root: BinaryForm) -> int:
        """Number of size-p Jordan blocks at the eigenvalue given by a linear form."""
        total = 0
        for size, cert, cnt in self.d:
            if size == p and upoly.rem(cert.dehomogenize(), root.dehomogenize()) == () and _v1_ok(root, cert):
                total += cnt
        return total

    def to_json(self) -> dict:
        return {
            "d": [{"p": p, "certificate": c.to_json(), "count_per_root": n} for p, c, n in self.d],
            "ell": {str(k): v for k, v in sorted(self.ell.items())},
            "r": {str(k): v for k, v in sorted(self.r.items())},
        }


def _v1_ok(root: BinaryForm, cert: BinaryForm) -> bool:
    return root.v1_valuation() <= cert.v1_valuation()


def pokrzywa_invariants(t: MatrixPencil | KroneckerForm, ambient: Tuple[int, int] | None = None) -> PokrzywaInvariants:
    form = t if isinstance(t, KroneckerForm) else kronecker_decompose(t)
    N1, N2 = ambient if ambient is not None else (form.n1, form.n2)
    if N1 < form.n1 or N2 < form.n2:
        raise ValueError(f"ambient {N1}x{N2} smaller than pencil {form.n1}x{form.n2}")
    ell = Counter(form.left)
    r = Counter(form.right)
    ell[0] += N2 - form.n2
    r[0] += N1 - form.n1
    d = []
    for g in form.jordan:
        if g.certificate is None:
            raise ValueError("symbolic certificates have no per-root counts")
        for p, cnt in sorted(Counter(g.sizes).items()):
            d.append((p, g.certificate, cnt))
    return PokrzywaInvariants(tuple(d), {k: v for k, v in ell.items() if v}, {k: v for k, v in r.items() if v})


def block_degeneration_check(source: KroneckerForm, target: KroneckerForm, k1: int) -> bool:
    """Necessary size-1 Jordan count inequality for ``source`` to degenerate to ``target``.

    For every eigenvalue of ``source``: ``d_1(source) <= k1 + d_1(target)``.
    Only sources without singular blocks are supported; the general
    degeneration order on pencils is not implemented.
    """
    if source.left or source.right:
        raise ValueError("source has singular blocks; the general degeneration criterion is not implemented")
    if source.is_symbolic() or target.is_symbolic():
        raise ValueError("certificates must be concrete")
    for g in source.jordan:
        d_src = g.sizes.count(1)
        rest = g.certificate
        for h in target.jordan:
            common = binary_gcd(rest, h.certificate)
            if common.degree == 0:
                continue
            if d_src > k1 + h.sizes.count(1):
                return False
            rest = _divide_form(rest, common)
        if rest.degree > 0 and d_src > k1:
            return False
    return True


def _divide_form(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    e = f.v1_valuation() - g.v1_valuation()
    q = upoly.exact_div(f.dehomogenize(), g.dehomogenize())
    return (BinaryForm.from_dehomogenized(q) * BinaryForm.linear(0, 1) ** e).normalized()
