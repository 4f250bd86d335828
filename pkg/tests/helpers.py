"""Shared constructions for the test suite."""

from fractions import Fraction
from itertools import combinations

from pencil_tns.field import BinaryForm, binary_gcd
from pencil_tns.pencil import JordanGroup, KroneckerForm, MatrixPencil, block_sum, jordan_block, left_block, right_block
from pencil_tns.rng import make_rng, random_invertible

EIGEN_POOL = [(1, 0), (0, 1), (1, 1), (1, -2), (2, 3), (1, 5), (3, -1)]


def random_block_list(seed: int, max_size: int = 8):
    """Random blocks with rational eigenvalues whose block sum fits in ``max_size x max_size``."""
    rng = make_rng(seed, 0xB10C)
    blocks = []
    n1 = n2 = 0
    for _ in range(int(rng.integers(1, 7))):
        kind = ("L", "R", "J")[int(rng.integers(0, 3))]
        p = int(rng.integers(0 if kind != "J" else 1, 4))
        z = EIGEN_POOL[int(rng.integers(0, len(EIGEN_POOL)))]
        dn1, dn2 = {"L": (p, p + 1), "R": (p + 1, p), "J": (p, p)}[kind]
        if n1 + dn1 > max_size or n2 + dn2 > max_size:
            continue
        blocks.append((kind, p, z))
        n1 += dn1
        n2 += dn2
    if not blocks:
        blocks.append(("J", 1, (1, 0)))
    return blocks


def realize_blocks(blocks) -> MatrixPencil:
    parts = []
    for kind, p, z in blocks:
        parts.append({"L": lambda: left_block(p), "R": lambda: right_block(p), "J": lambda: jordan_block(p, z)}[kind]())
    return block_sum(*parts)


def expected_form(blocks) -> KroneckerForm:
    left = [p for k, p, _ in blocks if k == "L"]
    right = [p for k, p, _ in blocks if k == "R"]
    per_root = {}
    for k, p, z in blocks:
        if k == "J":
            cert = BinaryForm.linear(*z).normalized()
            per_root.setdefault(cert, []).append(p)
    groups = [JordanGroup(c, tuple(sorted(s, reverse=True)), 1) for c, s in per_root.items()]
    return KroneckerForm(tuple(left), tuple(right), tuple(groups))


def conjugated(t: MatrixPencil, seed: int) -> MatrixPencil:
    rng = make_rng(seed, 0xC0)
    return t.conjugate(random_invertible(rng, t.n1), random_invertible(rng, t.n2))


def sub_pencil(t: MatrixPencil, rows, cols) -> MatrixPencil:
    return MatrixPencil([[t.A[i][j] for j in cols] for i in rows], [[t.B[i][j] for j in cols] for i in rows])


def brute_minors_gcd(t: MatrixPencil, k: int) -> BinaryForm:
    """gcd of all k x k minors, each expanded as a binary form (zero form when all vanish)."""
    g = None
    for rows in combinations(range(t.n1), k):
        for cols in combinations(range(t.n2), k):
            m = sub_pencil(t, rows, cols).det_form()
            if m.is_zero():
                continue
            g = m if g is None else binary_gcd(g, m)
    return BinaryForm(0, (0,)) if g is None else g.normalized()


def substitute(f: BinaryForm, a, b, c, d) -> BinaryForm:
    """``f(a v0 + c v1, b v0 + d v1)``."""
    x = BinaryForm.linear(a, c)
    y = BinaryForm.linear(b, d)
    out = [Fraction(0)] * (f.degree + 1)
    for i, coef in enumerate(f.coeffs):
        term = (x ** (f.degree - i) * y**i).scaled(coef)
        out = [u + v for u, v in zip(out, term.coeffs)]
    return BinaryForm(f.degree, out)
