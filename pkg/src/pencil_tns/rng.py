"""Seeded, counter-based randomness for all samplers."""

from __future__ import annotations

from fractions import Fraction
from typing import List

import numpy as np

from . import linalg

BOUND = 10**4


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Independent Philox stream for ``(seed, *stream)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, stream)])))


def random_rationals(rng: np.random.Generator, count: int, bound: int = BOUND) -> List[Fraction]:
    return [Fraction(int(x)) for x in rng.integers(-bound, bound + 1, size=count)]


def random_matrix(rng: np.random.Generator, rows: int, cols: int, bound: int = BOUND) -> List[List[Fraction]]:
    flat = random_rationals(rng, rows * cols, bound)
    return [flat[i * cols : (i + 1) * cols] for i in range(rows)]


def random_invertible(rng: np.random.Generator, n: int, bound: int = BOUND) -> List[List[Fraction]]:
    while True:
        m = random_matrix(rng, n, n, bound)
        if n == 0 or linalg.rank(m) == n:
            return m


def random_mod_p(rng: np.random.Generator, shape, p: int) -> np.ndarray:
    return rng.integers(0, p, size=shape, dtype=np.int64)
