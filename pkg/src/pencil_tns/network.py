"""Tensor networks: graph tensors, the contraction map and dimension formulas."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .field.rational import DEFAULT_MODULUS, check_modulus
from .pencil import MatrixPencil, block_sum, box_times_identity, jordan_block
from .rng import make_rng, random_invertible, random_matrix
from .tensor import DenseTensor


@dataclass(frozen=True)
class Network:
    """Connected multigraph with physical dimensions ``dims`` and bonds ``(u, v, m)``."""

    dims: Tuple[int, ...]
    edges: Tuple[Tuple[int, int, int], ...]

    def __init__(self, dims: Sequence[int], edges: Sequence[Sequence[int]]):
        dims = tuple(int(n) for n in dims)
        edges = tuple((int(u), int(v), int(m)) for u, v, m in edges)
        if not dims or any(n < 1 for n in dims):
            raise ValueError("physical dimensions must be positive")
        for u, v, m in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < len(dims) and 0 <= v < len(dims)):
                raise ValueError(f"edge ({u}, {v}) has an unknown endpoint")
            if m < 1:
                raise ValueError("bond dimensions must be positive")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "edges", edges)
        if not self._connected():
            raise ValueError("network is disconnected")

    def _connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for u, v, _ in self.edges:
                for a, b in ((u, v), (v, u)):
                    if a == x and b not in seen:
                        seen.add(b)
                        stack.append(b)
        return len(seen) == len(self.dims)

    @property
    def order(self) -> int:
        return len(self.dims)

    def incident(self, i: int) -> List[int]:
        """Edge indices at vertex ``i`` in slot order (min endpoint, max endpoint, insertion)."""
        idx = [k for k, (u, v, _) in enumerate(self.edges) if i in (u, v)]
        return sorted(idx, key=lambda k: (min(self.edges[k][:2]), max(self.edges[k][:2]), k))

    def bond_dim(self, i: int) -> int:
        """``dim W_i``: product of incident bond dimensions."""
        return prod(self.edges[k][2] for k in self.incident(i))

    def bond_dims(self) -> Tuple[int, ...]:
        return tuple(self.bond_dim(i) for i in range(self.order))

    def with_dims(self, dims: Sequence[int]) -> "Network":
        return Network(dims, self.edges)

    def critical_dims(self) -> Tuple[int, ...]:
        return self.bond_dims()

    def to_json(self) -> dict:
        return {
            "vertices": [{"n": n} for n in self.dims],
            "edges": [{"u": u, "v": v, "m": m} for u, v, m in self.edges],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Network":
        try:
            dims = [int(x["n"]) for x in obj["vertices"]]
            edges = [(int(e["u"]), int(e["v"]), int(e["m"])) for e in obj["edges"]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed network JSON: {exc}") from exc
        return cls(dims, edges)


def triangle(m01: int, m12: int, m02: int, n: Sequence[int]) -> Network:
    """Triangle on vertices 0, 1, 2 with edges (0,1), (1,2), (0,2)."""
    return Network(n, [(0, 1, m01), (1, 2, m12), (0, 2, m02)])


def graph_tensor(net: Network) -> DenseTensor:
    """Tensor product of identities on every bond, grouped by vertex."""
    return DenseTensor(_graph_array(net), domain="rational")


def _graph_array(net: Network, one=Fraction(1), zero=Fraction(0)) -> np.ndarray:
    bonds = [m for _, _, m in net.edges]
    shape = net.bond_dims()
    arr = np.empty(shape, dtype=object)
    arr[...] = zero
    grid = np.indices(bonds).reshape(len(bonds), -1) if bonds else np.zeros((0, 1), dtype=int)
    coords = []
    for i in range(net.order):
        pos = np.zeros(grid.shape[1], dtype=np.int64)
        for k in net.incident(i):
            pos = pos * net.edges[k][2] + grid[k]
        coords.append(pos)
    arr[tuple(coords)] = one
    return arr


def _apply_maps(arr: np.ndarray, maps: Sequence, skip: Optional[int] = None, modulus: Optional[int] = None) -> np.ndarray:
    """Contract slot i of ``arr`` with the columns of ``maps[i]`` (all i except ``skip``)."""
    out = arr
    for i, X in enumerate(maps):
        if i == skip:
            continue
        X = np.asarray(X, dtype=object)
        out = np.moveaxis(np.tensordot(X, out, axes=([1], [i])), 0, i)
        if modulus is not None:
            out = out % modulus
    return out


def _check_maps(net: Network, maps: Sequence) -> None:
    if len(maps) != net.order:
        raise ValueError(f"need {net.order} local maps, got {len(maps)}")
    for i, X in enumerate(maps):
        X = np.asarray(X, dtype=object)
        want = (net.dims[i], net.bond_dim(i))
        if X.shape != want:
            raise ValueError(f"map {i} has shape {X.shape}, expected {want}")


def phi(net: Network, maps: Sequence) -> DenseTensor:
    """``(X_0 x ... x X_{d-1}) T(net)`` for maps ``X_i`` of shape ``n_i x dim W_i``."""
    _check_maps(net, maps)
    return DenseTensor(_apply_maps(_graph_array(net), maps), domain="rational")


def random_maps(net: Network, seed: int) -> List[List[List[Fraction]]]:
    rng = make_rng(seed, 0x9A1)
    return [random_matrix(rng, net.dims[i], net.bond_dim(i)) for i in range(net.order)]


def tns_sample(net: Network, seed: int) -> DenseTensor:
    """A seeded random element of the image of the contraction map."""
    return phi(net, random_maps(net, seed))


def criticality(net: Network) -> List[str]:
    labels = []
    for n, w in zip(net.dims, net.bond_dims()):
        labels.append("strictly-sub" if n < w else "critical" if n == w else "strictly-super")
    return labels


def param_count(net: Network) -> int:
    """Parameters of the contraction map modulo the gauge group."""
    return sum(n * w - 1 for n, w in zip(net.dims, net.bond_dims())) - sum(m * m - 1 for _, _, m in net.edges) + 1


def ambient_dim(net: Network) -> int:
    return prod(net.dims)


def expected_dim(net: Network) -> int:
    return min(param_count(net), ambient_dim(net))


def jacobian_rank_dim(net: Network, seed: int = 0, modulus: int = DEFAULT_MODULUS) -> int:
    """Rank over GF(p) of the differential of the contraction map at a random point."""
    check_modulus(modulus)
    rng = make_rng(seed, 0x1AC)
    maps = [rng.integers(0, modulus, size=(net.dims[i], net.bond_dim(i))).astype(object) for i in range(net.order)]
    T = _graph_array(net, 1, 0)
    rows = ambient_dim(net)
    blocks = []
    for i in range(net.order):
        R = _apply_maps(T, maps, skip=i, modulus=modulus)  # slot i still indexes W_i
        Rm = np.moveaxis(R, i, 0)
        w = Rm.shape[0]
        rest = Rm.shape[1:]
        n_i = net.dims[i]
        # column (a, b): the tensor with slot i fixed to a and entries R[.., b, ..]
        cols = np.zeros((n_i, w) + (n_i,) + rest, dtype=object)
        for a in range(n_i):
            cols[a, :, a] = Rm
        cols = np.moveaxis(cols, 2, 2 + i).reshape(n_i * w, rows)
        blocks.append(cols.astype(np.int64))
    J = np.concatenate(blocks, axis=0).T
    return linalg.rank_mod_p(J, modulus)


# ---------------------------------------------------------------------------
# Triangle with one physical dimension equal to 2


@dataclass(frozen=True)
class TriangleConfig:
    """Triangle with bonds ``(m, m12, m02)`` and ``n = (2, m*m12 - k1, m02*m12 - k2)``.

    ``m02`` defaults to ``m``. With equal side bonds the legs are swapped so that
    ``k2 <= k1``.
    """

    m: int
    m12: int
    k1: int
    k2: int
    m02: Optional[int] = None

    def __post_init__(self):
        if self.m < 1 or self.m12 < 1:
            raise ValueError("bond dimensions must be positive")
        if self.m02 is not None and self.m02 < 1:
            raise ValueError("bond dimensions must be positive")
        if self.k1 < 0 or self.k2 < 0:
            raise ValueError("k1, k2 must be non-negative (subcritical legs)")
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError(f"physical dimensions must be positive, got ({self.n1}, {self.n2})")
        if (self.m02 is None or self.m02 == self.m) and self.k2 > self.k1:
            k1, k2 = self.k2, self.k1
            object.__setattr__(self, "k1", k1)
            object.__setattr__(self, "k2", k2)

    @property
    def side_bonds(self) -> Tuple[int, int]:
        return self.m, self.m if self.m02 is None else self.m02

    @property
    def n1(self) -> int:
        return self.side_bonds[0] * self.m12 - self.k1

    @property
    def n2(self) -> int:
        return self.side_bonds[1] * self.m12 - self.k2

    def star(self) -> bool:
        """Equal side bonds and ``k2 <= k1 < m12``."""
        m01, m02 = self.side_bonds
        return m01 == m02 and self.k2 <= self.k1 < self.m12

    def network(self) -> Network:
        m01, m02 = self.side_bonds
        return triangle(m01, self.m12, m02, (2, self.n1, self.n2))

    def to_json(self) -> dict:
        out = {"m": self.m, "m12": self.m12, "k1": self.k1, "k2": self.k2}
        if self.m02 is not None:
            out["m02"] = self.m02
        return out


def dim_triangle(cfg: TriangleConfig) -> int:
    if not cfg.star():
        return 2 * cfg.n1 * cfg.n2
    m, q, k1, k2 = cfg.m, cfg.m12, cfg.k1, cfg.k2
    return 2 * m * m * q * q - m * q * q - m * q * k1 - m * q * k2 - m * k1 * k2 + 2 * k1 * k2 + m


def defect_triangle(cfg: TriangleConfig) -> Tuple[int, int]:
    """``(defect, fiber_defect)`` from the closed forms.

    When the parameter count reaches the ambient dimension (the tie included),
    the defect is measured against the ambient dimension.
    """
    net = cfg.network()
    param = param_count(net)
    ambient = ambient_dim(net)
    if not cfg.star():
        return 0, param - ambient
    m, q, k1, k2 = cfg.m, cfg.m12, cfg.k1, cfg.k2
    fiber = (m - 2) * k1 * k2 + (m - 1) * (q * q - 1)
    if ambient <= param:
        return m * (q * q - q * (k1 + k2) + k1 * k2 - 1), fiber
    return fiber, fiber


def normal_form_blocks(cfg: TriangleConfig, seed: int) -> Tuple[MatrixPencil, MatrixPencil]:
    """The two diagonal blocks of the normal form, before any change of basis.

    The first block repeats each of ``m`` distinct seeded eigenvalues
    ``v0 + zeta_i v1`` with ``m12 - k1`` blocks of size one; the second is a
    seeded random pencil of shape ``(m-1)k1 x ((m-1)k1 + k1 - k2)``.
    """
    if not cfg.star():
        raise ValueError("variety fills ambient; sample any random tensor")
    rng = make_rng(seed, 0x4F)
    m, q, k1, k2 = cfg.m, cfg.m12, cfg.k1, cfg.k2
    zetas: List[int] = []
    while len(zetas) < m:
        z = int(rng.integers(-100, 101))
        if z not in zetas:
            zetas.append(z)
    T1 = block_sum(*[box_times_identity(jordan_block(1, (1, z)), q - k1) for z in zetas])
    r2, c2 = (m - 1) * k1, (m - 1) * k1 + (k1 - k2)
    T2 = MatrixPencil(random_matrix(rng, r2, c2), random_matrix(rng, r2, c2), r2, c2)
    return T1, T2


def normal_form_sample(cfg: TriangleConfig, seed: int) -> DenseTensor:
    """Generic element of the triangle variety, in random coordinates."""
    T1, T2 = normal_form_blocks(cfg, seed)
    rng = make_rng(seed, 0x50)
    P = random_invertible(rng, cfg.n1)
    Q = random_invertible(rng, cfg.n2)
    return block_sum(T1, T2).conjugate(P, Q).to_tensor()


# ---------------------------------------------------------------------------
# Augmentation


def augment(net: Network, i: int, j: int, m_new: int) -> Network:
    """Add a vertex of physical dimension 2 joined to ``i`` and ``j`` by bonds ``m_new``.

    The new vertex becomes vertex 0 and existing vertices shift up by one.
    """
    if i == j or not (0 <= i < net.order and 0 <= j < net.order):
        raise ValueError(f"invalid augmentation vertices ({i}, {j})")
    if m_new < 1:
        raise ValueError("bond dimensions must be positive")
    edges = [(0, i + 1, m_new), (0, j + 1, m_new)]
    edges = [(u + 1, v + 1, m) for u, v, m in net.edges] + edges
    return Network((2,) + net.dims, edges)


@dataclass(frozen=True)
class AugmentationReport:
    defect: int
    network: Network
    new_vertices: Tuple[int, ...]
    normal_form: str

    def to_json(self) -> dict:
        return {
            "defect": self.defect,
            "network": self.network.to_json(),
            "new_vertices": list(self.new_vertices),
            "normal_form": self.normal_form,
        }


def augmented_defect(net_prime: Network, pins: Sequence[Tuple[int, int, int]]) -> AugmentationReport:
    """Closed-form defect of ``net_prime`` augmented at each pin ``(i, j, m_r)``.

    ``net_prime`` must carry its own critical dimensions. The augmented network
    gets critical dimensions at every old vertex and dimension 2 at new ones.
    """
    if list(net_prime.dims) != list(net_prime.critical_dims()):
        raise ValueError("every vertex of the base network must have critical physical dimension")
    ends = [v for i, j, _ in pins for v in (i, j)]
    if len(set(ends)) != len(ends):
        raise ValueError("pin endpoints must be pairwise distinct")
    defect = 0
    net = net_prime
    for i, j, m_r in pins:
        bond = prod(m for u, v, m in net_prime.edges if {u, v} == {i, j})
        defect += (m_r - 1) * (bond * bond - 1)
    for i, j, m_r in pins:
        # earlier augmentations shifted the original labels
        shift = net.order - net_prime.order
        net = augment(net, i + shift, j + shift, m_r)
    s = len(pins)
    critical = [2 if v < s else w for v, w in enumerate(net.bond_dims())]
    net = net.with_dims(critical)
    desc = " ⊠ ".join(f"(⊞_{{k=1}}^{{{m_r}}} J1(z_{r},k))" for r, (_, _, m_r) in enumerate(pins, start=1))
    return AugmentationReport(defect, net, tuple(range(s)), desc + " ⊠ T(base network)")
