"""Membership tests for tensor network varieties of small format."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import linalg
from .field import BinaryForm, MultiplicityProfile, merge_coarsening, squarefree_decompose, upoly
from .network import TriangleConfig
from .pencil import MatrixPencil, homogeneous_invariant_factors, kronecker_decompose
from .rng import make_rng, random_matrix
from .tensor import DenseTensor, is_concise

PencilLike = Union[MatrixPencil, DenseTensor]


@dataclass(frozen=True)
class Verdict:
    """Outcome of a membership test; ``certificate`` carries the evidence."""

    test: str
    passed: bool
    certificate: Dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {"test": self.test, "verdict": "pass" if self.passed else "fail", "certificate": self.certificate}


def _as_pencil(t: PencilLike) -> MatrixPencil:
    return t if isinstance(t, MatrixPencil) else MatrixPencil.from_tensor(t)


def _profile_json(p: MultiplicityProfile) -> dict:
    return {
        "partition": list(p.partition),
        "factors": [{"form": g.to_json(), "multiplicity": e} for g, e in p.factors],
    }


# ---------------------------------------------------------------------------
# Coincident root loci


def crl_partition(cfg: TriangleConfig, kappa: int) -> Tuple[int, ...]:
    """``((m12 - kappa)^m, 1^((m-1) kappa))``."""
    return (cfg.m12 - kappa,) * cfg.m + (1,) * ((cfg.m - 1) * kappa)


def crl_profile_test(t: PencilLike, cfg: TriangleConfig, kappa: int, seed: int = 0, attempts: int = 3) -> Verdict:
    """Necessary condition: the determinant of a square projection has a coarsening of ``lambda(kappa)``.

    Inputs larger than ``n' = m*m12 - kappa`` are cut down by seeded random
    projections on both sides; a failure is only reported when every attempt fails.
    """
    if not cfg.k1 <= kappa <= cfg.m12 - 2:
        raise ValueError(f"kappa must lie in [{cfg.k1}, {cfg.m12 - 2}]")
    P = _as_pencil(t)
    n = cfg.m * cfg.m12 - kappa
    if n > min(P.n1, P.n2):
        raise ValueError(f"pencil {P.n1}x{P.n2} is smaller than the projection size {n}")
    lam = crl_partition(cfg, kappa)
    needs_projection = (P.n1, P.n2) != (n, n)
    rng = make_rng(seed, 0xC71)
    tries = attempts if needs_projection else 1
    seen = []
    for _ in range(tries):
        Q = P
        if needs_projection:
            Q = P.conjugate(random_matrix(rng, n, P.n1), random_matrix(rng, P.n2, n))
        f = Q.det_form()
        if f.is_zero():
            seen.append(None)
            continue
        prof = squarefree_decompose(f)
        ok = merge_coarsening(prof.partition, lam)
        seen.append(prof)
        if ok:
            return Verdict("crl", True, {"kappa": kappa, "lambda": list(lam), "profile": _profile_json(prof)})
    profiles = [p for p in seen if p is not None]
    if not profiles:
        raise ArithmeticError("degenerate projection, resample")
    return Verdict(
        "crl",
        False,
        {"kappa": kappa, "lambda": list(lam), "profiles": [list(p.partition) for p in profiles]},
    )


# ---------------------------------------------------------------------------
# Rank-drop loci


@dataclass(frozen=True)
class RankDrop:
    count: float
    gcd: Optional[BinaryForm]
    profile: Optional[MultiplicityProfile]

    def to_json(self) -> dict:
        return {
            "count": "infinite" if self.count == math.inf else int(self.count),
            "gcd_of_minors": self.gcd.to_json() if self.gcd is not None else None,
            "profile": _profile_json(self.profile) if self.profile is not None else None,
        }


def minors_gcd(t: MatrixPencil, k: int) -> BinaryForm:
    """gcd of all ``k x k`` minors of ``v0 A + v1 B`` (zero form when they all vanish)."""
    facs = homogeneous_invariant_factors(t)
    if k > len(facs):
        return BinaryForm(0, (0,))
    out = BinaryForm(0, (1,))
    for f in facs[:k]:
        out = out * f
    return out


def rank_drop_points(t: PencilLike, r: int) -> RankDrop:
    """Points of the projective line where the pencil has rank at most ``r``."""
    P = _as_pencil(t)
    if P.n1 > P.n2:
        P = P.transpose()
    if r >= min(P.n1, P.n2) or r < 0:
        raise ValueError(f"vacuous: every {P.n1}x{P.n2} matrix has rank <= {r}")
    g = minors_gcd(P, r + 1)
    if g.is_zero():
        return RankDrop(math.inf, None, None)
    prof = squarefree_decompose(g)
    return RankDrop(prof.squarefree_part().degree, g, prof)


class _Split(Exception):
    def __init__(self, factor):
        super().__init__("zero divisor")
        self.factor = factor


def _rank_mod(rows: List[List[upoly.Poly]], h: upoly.Poly) -> int:
    """Rank over Q[x]/(h); raises ``_Split`` on a zero divisor."""
    a = [[upoly.rem(e, h) for e in r] for r in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        g, s, _ = upoly.xgcd(a[piv][c], h)
        if upoly.deg(g) > 0:
            raise _Split(g)
        a[rank], a[piv] = a[piv], a[rank]
        inv = s
        prow = [upoly.rem(upoly.mul(e, inv), h) for e in a[rank]]
        a[rank] = prow
        for i in range(rank + 1, len(a)):
            f = a[i][c]
            if f:
                a[i] = [upoly.rem(upoly.sub(x, upoly.mul(f, y)), h) for x, y in zip(a[i], prow)]
        rank += 1
    return rank


def rank_at_roots(t: MatrixPencil, h: upoly.Poly) -> List[Tuple[upoly.Poly, int]]:
    """Rank of ``x A + B`` at the roots of squarefree ``h``, splitting ``h`` where it differs."""
    rows = [[upoly.trim((b, a)) for a, b in zip(ra, rb)] for ra, rb in zip(t.A, t.B)]
    todo = [upoly.monic(h)]
    out = []
    while todo:
        cur = todo.pop()
        try:
            out.append((cur, _rank_mod(rows, cur)))
        except _Split as sp:
            g = upoly.monic(sp.factor)
            todo += [g, upoly.monic(upoly.exact_div(cur, g))]
    return sorted(out, key=lambda x: (len(x[0]), x[0]))


def jordan_count_at_rank_drop(t: PencilLike, r: int) -> List[dict]:
    """Per rank-drop point: the drop ``n1 - rank`` and the exact number of Jordan blocks there.

    Points are grouped by squarefree certificates on which the rank is constant.
    The Jordan count is also cross-checked against the Kronecker decomposition.
    """
    P = _as_pencil(t)
    if not all(is_concise(P.to_tensor())[1:]):
        raise ValueError("pencil is not concise; restrict to the subspace where it is concise first")
    if P.n1 > P.n2:
        P = P.transpose()
    drop = rank_drop_points(P, r)
    if drop.profile is None:
        raise ValueError("rank drops everywhere")
    normal = P.normal_rank()
    form = kronecker_decompose(P)
    out = []
    for g, _ in drop.profile.factors:
        pieces: List[Tuple[BinaryForm, int]] = []
        if g.v1_valuation():
            pieces.append((BinaryForm.linear(0, 1), linalg.rank(P.A)))
        h = g.dehomogenize()
        if upoly.deg(h) > 0:
            for piece, rk in rank_at_roots(P, h):
                pieces.append((BinaryForm.from_dehomogenized(piece).normalized(), rk))
        for cert, rk in pieces:
            blocks = normal - rk
            decomposed = None
            for grp in form.jordan:
                if grp.certificate is not None and _shares_root(grp.certificate, cert):
                    decomposed = len(grp.sizes)
            out.append(
                {
                    "certificate": cert.to_json(),
                    "drop": P.n1 - rk,
                    "jordan_blocks": blocks,
                    "agrees_with_decomposition": decomposed == blocks,
                }
            )
    return out


def _shares_root(f: BinaryForm, g: BinaryForm) -> bool:
    from .field import binary_gcd

    return binary_gcd(f, g).degree > 0


# ---------------------------------------------------------------------------
# Plane cubics


CUBIC_MONOMIALS: Tuple[Tuple[int, int, int], ...] = tuple(
    (a, b, 3 - a - b) for a in range(3, -1, -1) for b in range(3 - a, -1, -1)
)
_MON_INDEX = {m: i for i, m in enumerate(CUBIC_MONOMIALS)}


def _traceless_basis() -> List[List[List[int]]]:
    basis = []
    for i in range(3):
        for j in range(3):
            if i != j:
                E = [[0] * 3 for _ in range(3)]
                E[i][j] = 1
                basis.append(E)
    for i in range(2):
        H = [[0] * 3 for _ in range(3)]
        H[i][i] = 1
        H[i + 1][i + 1] = -1
        basis.append(H)
    return basis


def _derivation(X, f: Sequence) -> List:
    """``sum_ij X[i][j] x_j d f / d x_i`` in the cubic monomial basis."""
    out = [Fraction(0)] * 10
    for mon, c in zip(CUBIC_MONOMIALS, f):
        if c == 0:
            continue
        for i in range(3):
            if mon[i] == 0:
                continue
            d = list(mon)
            d[i] -= 1
            for j in range(3):
                if X[i][j] == 0:
                    continue
                e = d.copy()
                e[j] += 1
                out[_MON_INDEX[tuple(e)]] += X[i][j] * mon[i] * c
    return out


def ruppert_matrix(f: Sequence) -> List[List[Fraction]]:
    """10 x 8 matrix of ``X -> X.f`` over a basis of traceless 3 x 3 matrices."""
    if len(f) != 10:
        raise ValueError("a plane cubic has 10 coefficients")
    cols = [_derivation(X, f) for X in _traceless_basis()]
    return [[cols[j][i] for j in range(8)] for i in range(10)]


def ruppert_rank(f: Sequence) -> int:
    return linalg.rank(ruppert_matrix(f))


def determinantal_cubic(T: DenseTensor, i: int) -> List[Fraction]:
    """``det(sum_k x_k T_k)`` where ``T_k`` are the slices of ``T`` along factor ``i``."""
    if T.shape != (3, 3, 3):
        raise ValueError("determinantal cubics need a 3x3x3 tensor")
    arr = np.moveaxis(T.data, i, 0)
    # entry (r, c) of the matrix is the linear form sum_k arr[k, r, c] x_k
    M = [[[arr[k, r, c] for k in range(3)] for c in range(3)] for r in range(3)]
    out = [Fraction(0)] * 10
    for perm in permutations(range(3)):
        sign = _perm_sign(perm)
        l0, l1, l2 = (M[r][perm[r]] for r in range(3))
        for a in range(3):
            if l0[a] == 0:
                continue
            for b in range(3):
                if l1[b] == 0:
                    continue
                for c in range(3):
                    if l2[c] == 0:
                        continue
                    e = [0, 0, 0]
                    e[a] += 1
                    e[b] += 1
                    e[c] += 1
                    out[_MON_INDEX[tuple(e)]] += sign * l0[a] * l1[b] * l2[c]
    return out


def _perm_sign(perm) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def tns_333_test(T: DenseTensor) -> Verdict:
    """All three determinantal cubics reducible (Ruppert rank < 8) or identically zero."""
    ranks = []
    zero = []
    ok = True
    for i in range(3):
        f = determinantal_cubic(T, i)
        if all(c == 0 for c in f):
            ranks.append(None)
            zero.append(True)
            continue
        rk = ruppert_rank(f)
        ranks.append(rk)
        zero.append(False)
        ok &= rk < 8
    return Verdict("tns333", ok, {"ruppert_ranks": ranks, "zero_cubics": zero})


# ---------------------------------------------------------------------------
# Annihilators


def annihilator_matrix(T: DenseTensor, acting: Sequence[int]) -> List[List]:
    """Columns: the action of each elementary matrix ``E_ab`` on slot ``i`` for ``i`` in ``acting``."""
    data = T.data
    cols = []
    for i in sorted(acting):
        n = T.shape[i]
        moved = np.moveaxis(data, i, 0)
        zero = np.zeros_like(moved)
        zero[...] = Fraction(0)
        for a in range(n):
            for b in range(n):
                img = zero.copy()
                img[a] = moved[b]
                cols.append(list(np.moveaxis(img, 0, i).reshape(-1)))
    if not cols:
        return [[] for _ in range(int(np.prod(T.shape)))]
    return [list(r) for r in zip(*cols)]


def annihilator_basis(T: DenseTensor, acting: Sequence[int]) -> List[List[Fraction]]:
    M = annihilator_matrix(T, acting)
    ncols = sum(T.shape[i] ** 2 for i in acting)
    if ncols == 0:
        return []
    return linalg.nullspace(M, ncols)


def annihilator_dim(T: DenseTensor, acting: Sequence[int]) -> int:
    M = annihilator_matrix(T, acting)
    ncols = sum(T.shape[i] ** 2 for i in acting)
    return ncols - linalg.rank(M)


@dataclass(frozen=True)
class BlockAnnReport:
    mode: str
    dim_ann: int
    dim_ann1: int
    dim_ann2: int
    dim_m1: int
    dim_m2: int
    dim_bound: int
    contained: bool

    @property
    def equal(self) -> bool:
        return self.contained and self.dim_ann == self.dim_bound

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "dim_ann": self.dim_ann,
            "dim_ann1": self.dim_ann1,
            "dim_ann2": self.dim_ann2,
            "dim_M1": self.dim_m1,
            "dim_M2": self.dim_m2,
            "dim_bound": self.dim_bound,
            "contained": self.contained,
            "equal": self.equal,
        }


def _as_tensor(t) -> DenseTensor:
    return t.to_tensor() if isinstance(t, MatrixPencil) else t


def _embed_gl(blocks: Dict[int, Tuple[int, int, List[List]]], sizes: Sequence[int]) -> List[Fraction]:
    """Flatten a tuple of square matrices, placing each given block at (row0, col0)."""
    vec = []
    for i, n in enumerate(sizes):
        M = [[Fraction(0)] * n for _ in range(n)]
        if i in blocks:
            r0, c0, B = blocks[i]
            for r, row in enumerate(B):
                for c, x in enumerate(row):
                    M[r0 + r][c0 + c] = x
        vec += [x for row in M for x in row]
    return vec


def _unflatten_gl(vec: Sequence, sizes: Sequence[int]) -> List[List[List]]:
    out = []
    pos = 0
    for n in sizes:
        out.append([list(vec[pos + r * n : pos + (r + 1) * n]) for r in range(n)])
        pos += n * n
    return out


def _offdiag_kernel(Ta: DenseTensor, Tb: DenseTensor) -> List[Tuple[List[List], List[List]]]:
    """Kernel of ``(X, Y) -> X.Ta + Y.Tb`` with ``X: V1(a) -> V1(b)`` and ``Y: V2(b) -> V2(a)``.

    The image lies in ``W x V1(b) x V2(a)``.
    """
    _, a1, b1 = Ta.shape
    _, a2, b2 = Tb.shape
    w = Ta.shape[0]
    cols = []
    for p in range(a2):
        for q in range(a1):
            # X = E_pq: (X.Ta)[k, p, c] = Ta[k, q, c]
            img = [[[Fraction(0)] * b1 for _ in range(a2)] for _ in range(w)]
            for k in range(w):
                for c in range(b1):
                    img[k][p][c] = Ta.data[k, q, c]
            cols.append([x for m in img for r in m for x in r])
    for p in range(b1):
        for q in range(b2):
            # Y = E_pq: (Y.Tb)[k, a, p] = Tb[k, a, q]
            img = [[[Fraction(0)] * b1 for _ in range(a2)] for _ in range(w)]
            for k in range(w):
                for a in range(a2):
                    img[k][a][p] = Tb.data[k, a, q]
            cols.append([x for m in img for r in m for x in r])
    M = [list(r) for r in zip(*cols)]
    kernel = linalg.nullspace(M, len(cols))
    out = []
    nx = a2 * a1
    for v in kernel:
        X = [v[p * a1 : (p + 1) * a1] for p in range(a2)]
        Y = [v[nx + p * b2 : nx + (p + 1) * b2] for p in range(b1)]
        out.append((X, Y))
    return out


def block_ann_bound_check(T1, T2, mode: str = "pencil-block-sum") -> BlockAnnReport:
    """Compare the annihilator of a block sum with the sum of block annihilators.

    ``pencil-block-sum``: pencils sharing their first factor; the first factor
    does not act. Off-diagonal kernels ``M1``, ``M2`` are added to the bound.
    ``three-factor-sum``: direct sum on every factor, all factors acting.
    """
    T1, T2 = _as_tensor(T1), _as_tensor(T2)
    if mode == "pencil-block-sum":
        if T1.order != 3 or T2.order != 3 or T1.shape[0] != T2.shape[0]:
            raise ValueError("pencil mode needs two pencils with the same first factor")
        for t in (T1, T2):
            if not all(is_concise(t)[1:]):
                raise ValueError("blocks must be concise on their own factors")
        w, a1, b1 = T1.shape
        _, a2, b2 = T2.shape
        arr = np.empty((w, a1 + a2, b1 + b2), dtype=object)
        arr[...] = Fraction(0)
        arr[:, :a1, :b1] = T1.data
        arr[:, a1:, b1:] = T2.data
        T = DenseTensor(arr)
        acting = [1, 2]
        sizes = [a1 + a2, b1 + b2]
        bound = []
        ann1 = annihilator_basis(T1, acting)
        ann2 = annihilator_basis(T2, acting)
        for v in ann1:
            X, Y = _unflatten_gl(v, [a1, b1])
            bound.append(_embed_gl({0: (0, 0, X), 1: (0, 0, Y)}, sizes))
        for v in ann2:
            X, Y = _unflatten_gl(v, [a2, b2])
            bound.append(_embed_gl({0: (a1, a1, X), 1: (b1, b1, Y)}, sizes))
        m1 = _offdiag_kernel(T1, T2)
        for X, Y in m1:
            bound.append(_embed_gl({0: (a1, 0, X), 1: (0, b1, Y)}, sizes))
        m2 = _offdiag_kernel(T2, T1)
        for X, Y in m2:
            bound.append(_embed_gl({0: (0, a1, X), 1: (b1, 0, Y)}, sizes))
        dims = (len(ann1), len(ann2), len(m1), len(m2))
    elif mode == "three-factor-sum":
        if T1.order != T2.order:
            raise ValueError("blocks must have the same order")
        for t in (T1, T2):
            if not all(is_concise(t)):
                raise ValueError("blocks must be concise on every factor")
        d = T1.order
        shape = tuple(x + y for x, y in zip(T1.shape, T2.shape))
        arr = np.empty(shape, dtype=object)
        arr[...] = Fraction(0)
        arr[tuple(slice(0, s) for s in T1.shape)] = T1.data
        arr[tuple(slice(s, None) for s in T1.shape)] = T2.data
        T = DenseTensor(arr)
        acting = list(range(d))
        sizes = list(shape)
        ann1 = annihilator_basis(T1, acting)
        ann2 = annihilator_basis(T2, acting)
        bound = []
        for v in ann1:
            mats = _unflatten_gl(v, T1.shape)
            bound.append(_embed_gl({i: (0, 0, mats[i]) for i in range(d)}, sizes))
        for v in ann2:
            mats = _unflatten_gl(v, T2.shape)
            bound.append(_embed_gl({i: (T1.shape[i], T1.shape[i], mats[i]) for i in range(d)}, sizes))
        dims = (len(ann1), len(ann2), 0, 0)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    ann = annihilator_basis(T, acting)
    r_bound = linalg.rank(bound) if bound else 0
    contained = (linalg.rank(bound + ann) if (bound or ann) else 0) == r_bound
    return BlockAnnReport(mode, len(ann), dims[0], dims[1], dims[2], dims[3], r_bound, contained)


# ---------------------------------------------------------------------------
# Bridge map for the (2, 3, 4) format


def bridge_matrix(S: DenseTensor, T: DenseTensor) -> List[List]:
    """``F(S,T)[(u2, v2), (u1, v1)] = sum_a S[a, u1, u2] T[a, v1, v2]``."""
    if S.shape[0] != T.shape[0]:
        raise ValueError("S and T must share the first factor")
    F = np.einsum("aij,akl->jlik", S.data, T.data)
    u2, v2, u1, v1 = F.shape
    return [list(r) for r in F.reshape(u2 * v2, u1 * v1)]


def schofield_bridge_rank(T: DenseTensor, q: int = 1, seed: int = 0) -> int:
    """Rank of the bridge map for a seeded random ``S`` of shape ``(2, 4q, 3q)``."""
    if q < 1:
        raise ValueError("q must be positive")
    if T.shape != (2, 3, 4):
        raise ValueError("bridge map is set up for tensors of shape (2, 3, 4)")
    rng = make_rng(seed, 0x5C0)
    S = DenseTensor(random_matrix(rng, 1, 2 * 4 * q * 3 * q)[0], (2, 4 * q, 3 * q))
    return linalg.rank(bridge_matrix(S, T))
