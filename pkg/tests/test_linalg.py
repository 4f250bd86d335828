from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st

from pencil_tns import linalg
from pencil_tns.rng import make_rng, random_invertible, random_matrix

small = st.integers(-5, 5).map(Fraction)


def test_rank_and_nullspace_small():
    m = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert linalg.rank(m) == 2
    ns = linalg.nullspace(m)
    assert len(ns) == 1
    assert all(sum(Fraction(a) * b for a, b in zip(row, ns[0])) == 0 for row in m)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_rank_nullity(rows, cols, data):
    m = [[data.draw(small) for _ in range(cols)] for _ in range(rows)]
    assert linalg.rank(m) + len(linalg.nullspace(m, cols)) == cols
    assert linalg.rank(m) == linalg.rank(linalg.transpose(m))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.data())
def test_det_multiplicative_and_inverse(n, data):
    a = [[data.draw(small) for _ in range(n)] for _ in range(n)]
    b = [[data.draw(small) for _ in range(n)] for _ in range(n)]
    assert linalg.det(linalg.matmul(a, b)) == linalg.det(a) * linalg.det(b)
    if linalg.det(a) != 0:
        assert linalg.matmul(a, linalg.inverse(a)) == linalg.identity(n)


def test_rank_mod_p_agrees_with_exact_rank():
    p = 2147483647
    rng = make_rng(3, 1)
    for r in range(1, 5):
        a = random_matrix(rng, 6, r)
        b = random_matrix(rng, r, 7)
        m = linalg.matmul(a, b)
        ints = np.array([[int(x) % p for x in row] for row in m], dtype=object)
        assert linalg.rank(m) == r
        assert linalg.rank_mod_p(ints, p) == r


def test_random_invertible_is_invertible():
    rng = make_rng(0, 2)
    for n in range(1, 6):
        assert linalg.det(random_invertible(rng, n)) != 0


def test_solve_inconsistent_returns_none():
    assert linalg.solve([[1, 0], [1, 0]], [1, 2]) is None
    x = linalg.solve([[2, 1], [1, 3]], [3, 4])
    assert x == [1, 1]
