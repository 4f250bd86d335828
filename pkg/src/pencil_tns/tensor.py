"""Dense order-d tensors with exact entries."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from . import linalg
from .field.rational import DEFAULT_MODULUS, rational_to_str, to_rational
from .rng import BOUND, make_rng

DOMAINS = ("rational", "prime-field", "laurent", "quotient-ring")


class DenseTensor:
    """Immutable dense tensor backed by a numpy object array.

    For the ``prime-field`` domain entries are plain ints reduced mod
    ``modulus``; other domains hold exact scalar objects.
    """

    __slots__ = ("_data", "domain", "modulus")

    def __init__(self, data, shape: Sequence[int] | None = None, domain: str = "rational", modulus: int | None = None):
        if domain not in DOMAINS:
            raise ValueError(f"unknown scalar domain {domain!r}")
        arr = np.empty(0, dtype=object)
        if isinstance(data, np.ndarray):
            arr = data.astype(object, copy=True)
        else:
            flat = list(data) if shape is not None else None
            if flat is not None:
                arr = np.empty(len(flat), dtype=object)
                arr[:] = flat
            else:
                arr = np.array(data, dtype=object)
        if shape is not None:
            shape = tuple(int(s) for s in shape)
            if arr.size != prod(shape):
                raise ValueError(f"{arr.size} entries do not fill shape {shape}")
            arr = arr.reshape(shape)
        if any(s <= 0 for s in arr.shape):
            raise ValueError(f"shape entries must be positive: {arr.shape}")
        if domain == "rational":
            arr = np.vectorize(lambda x: Fraction(x) if isinstance(x, int) else x, otypes=[object])(arr) if arr.size else arr
        if domain == "prime-field":
            modulus = modulus or DEFAULT_MODULUS
            arr = np.vectorize(lambda x: int(x) % modulus, otypes=[object])(arr)
        arr.flags.writeable = False
        self._data = arr
        self.domain = domain
        self.modulus = modulus

    @classmethod
    def zeros(cls, shape: Sequence[int], domain: str = "rational", modulus: int | None = None) -> "DenseTensor":
        z = 0 if domain == "prime-field" else Fraction(0)
        return cls([z] * prod(shape), shape, domain, modulus)

    @classmethod
    def from_dict(cls, shape: Sequence[int], entries: dict, domain: str = "rational") -> "DenseTensor":
        arr = np.empty(tuple(shape), dtype=object)
        arr[...] = Fraction(0)
        for idx, v in entries.items():
            arr[tuple(idx)] = arr[tuple(idx)] + v
        return cls(arr, domain=domain)

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> Tuple[int, ...]:
        return self._data.shape

    @property
    def order(self) -> int:
        return self._data.ndim

    @property
    def entries(self) -> List:
        return list(self._data.reshape(-1))

    def __getitem__(self, idx):
        return self._data[idx]

    def _like(self, arr: np.ndarray) -> "DenseTensor":
        return DenseTensor(arr, domain=self.domain, modulus=self.modulus)

    def __eq__(self, other):
        if not isinstance(other, DenseTensor):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self.entries, other.entries))

    def __hash__(self):
        return hash((self.shape, tuple(self.entries)))

    def __add__(self, other: "DenseTensor") -> "DenseTensor":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return self._like(self._data + other._data)

    def __sub__(self, other: "DenseTensor") -> "DenseTensor":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return self._like(self._data - other._data)

    def __neg__(self):
        return self._like(-self._data)

    def scale(self, c) -> "DenseTensor":
        return self._like(self._data * c)

    def map(self, fn) -> "DenseTensor":
        return DenseTensor(np.vectorize(fn, otypes=[object])(self._data), domain=self.domain, modulus=self.modulus)

    def permute(self, axes: Sequence[int]) -> "DenseTensor":
        return self._like(np.transpose(self._data, tuple(axes)))

    def reshape(self, shape: Sequence[int]) -> "DenseTensor":
        return self._like(self._data.reshape(tuple(shape)))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def __repr__(self):
        return f"DenseTensor(shape={self.shape}, domain={self.domain})"

    def to_json(self) -> dict:
        if self.domain not in ("rational", "prime-field"):
            raise ValueError("only rational and prime-field tensors serialize")
        return {
            "shape": list(self.shape),
            "domain": self.domain,
            "entries": [rational_to_str(x) for x in self.entries],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DenseTensor":
        if "shape" not in obj:
            raise ValueError("tensor JSON needs a 'shape'")
        shape = [int(s) for s in obj["shape"]]
        domain = obj.get("domain", "rational")
        if domain != "rational":
            raise ValueError("only rational tensors are accepted on input")
        if "entries" in obj:
            vals = [to_rational(x) for x in obj["entries"]]
            return cls(vals, shape)
        if "nz" in obj:
            entries = {}
            for item in obj["nz"]:
                idx = tuple(int(i) for i in item["idx"])
                if len(idx) != len(shape) or any(not 0 <= i < s for i, s in zip(idx, shape)):
                    raise ValueError(f"index {idx} out of range for shape {shape}")
                entries[idx] = entries.get(idx, Fraction(0)) + to_rational(item["val"])
            return cls.from_dict(shape, entries)
        raise ValueError("tensor JSON needs 'entries' or 'nz'")


def contract(t1: DenseTensor, t2: DenseTensor, pairs: Iterable[Tuple[int, int]]) -> DenseTensor:
    """Contract paired slots; the result lists t1's free slots, then t2's."""
    pairs = list(pairs)
    a = [p[0] for p in pairs]
    b = [p[1] for p in pairs]
    for i, j in pairs:
        if t1.shape[i] != t2.shape[j]:
            raise ValueError(f"cannot pair slot {i} (dim {t1.shape[i]}) with slot {j} (dim {t2.shape[j]})")
    out = np.tensordot(t1.data, t2.data, axes=(a, b)) if pairs else np.multiply.outer(t1.data, t2.data)
    if not isinstance(out, np.ndarray) or out.ndim == 0:
        out = np.array([out], dtype=object).reshape(1)
    if t1.domain == "prime-field":
        return DenseTensor(out, domain="prime-field", modulus=t1.modulus)
    return DenseTensor(out, domain=t1.domain, modulus=t1.modulus)


def outer(t1: DenseTensor, t2: DenseTensor) -> DenseTensor:
    return contract(t1, t2, [])


@dataclass(frozen=True)
class Flattening:
    subset: Tuple[int, ...]
    matrix: List[list]

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.matrix), len(self.matrix[0]) if self.matrix else 0

    def rank(self) -> int:
        return linalg.rank(self.matrix)


def flatten(t: DenseTensor, subset: Iterable[int]) -> Flattening:
    idx = tuple(sorted(set(subset)))
    if not idx or len(idx) == t.order or any(not 0 <= i < t.order for i in idx):
        raise ValueError(f"flattening needs a nonempty proper subset of slots, got {idx}")
    rest = tuple(i for i in range(t.order) if i not in idx)
    rows = prod(t.shape[i] for i in idx)
    arr = np.transpose(t.data, idx + rest).reshape(rows, -1)
    return Flattening(idx, [list(r) for r in arr])


def unflatten(f: Flattening, shape: Sequence[int], domain: str = "rational") -> DenseTensor:
    shape = tuple(shape)
    idx = f.subset
    rest = tuple(i for i in range(len(shape)) if i not in idx)
    perm = idx + rest
    arr = np.array(f.matrix, dtype=object).reshape(tuple(shape[i] for i in perm))
    inv = np.argsort(perm)
    return DenseTensor(np.transpose(arr, tuple(inv)), domain=domain)


def is_concise(t: DenseTensor) -> List[bool]:
    if t.order == 1:
        return [not t.is_zero()] if t.shape[0] == 1 else [False]
    return [flatten(t, [i]).rank() == t.shape[i] for i in range(t.order)]


def random_tensor(shape: Sequence[int], seed: int, domain: str = "rational", modulus: int | None = None) -> DenseTensor:
    """Entries are uniform integers in ``[-10**4, 10**4]`` (rational) or uniform mod p."""
    rng = make_rng(seed, 0x7E5)
    n = prod(shape)
    if domain == "rational":
        return DenseTensor([Fraction(int(x)) for x in rng.integers(-BOUND, BOUND + 1, size=n)], shape)
    if domain == "prime-field":
        p = modulus or DEFAULT_MODULUS
        return DenseTensor([int(x) for x in rng.integers(0, p, size=n)], shape, "prime-field", p)
    raise ValueError(f"cannot sample domain {domain!r}")


def kron_matrices(a: Sequence[Sequence], b: Sequence[Sequence]) -> List[list]:
    """Kronecker product of two matrices (rows indexed by ``(i_a, i_b)``)."""
    return [[x * y for x in ra for y in rb] for ra in a for rb in b]
