from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pencil_tns import linalg
from pencil_tns.network import (
    Network,
    TriangleConfig,
    ambient_dim,
    augment,
    augmented_defect,
    criticality,
    defect_triangle,
    dim_triangle,
    expected_dim,
    graph_tensor,
    jacobian_rank_dim,
    normal_form_sample,
    param_count,
    phi,
    random_maps,
    triangle,
)
from pencil_tns.pencil import MatrixPencil, block_sum, jordan_block, kronecker_decompose
from pencil_tns.rng import make_rng, random_invertible
from pencil_tns.tensor import DenseTensor, flatten, is_concise


def path(*bonds):
    net = Network([1] * (len(bonds) + 1), [(i, i + 1, m) for i, m in enumerate(bonds)])
    return net.with_dims(net.critical_dims())


def test_graph_tensor_single_edge_is_identity():
    g = graph_tensor(Network([3, 3], [(0, 1, 3)]))
    assert g == DenseTensor([[int(i == j) for j in range(3)] for i in range(3)])


def test_graph_tensor_triangle_is_matrix_multiplication():
    g = graph_tensor(triangle(2, 2, 2, (4, 4, 4)))
    assert g.shape == (4, 4, 4)
    assert sum(1 for x in g.entries if x != 0) == 8 and set(g.entries) == {0, 1}
    # slots: W0 = (e01, e02), W1 = (e01, e12), W2 = (e02, e12)
    for j in range(2):
        for i in range(2):
            for k in range(2):
                assert g[2 * j + i, 2 * j + k, 2 * i + k] == 1
    assert all(flatten(g, [s]).rank() == 4 for s in range(3))
    assert all(is_concise(g))


def test_graph_tensor_path():
    g = graph_tensor(path(2, 2))
    assert g.shape == (2, 4, 2)
    assert sum(1 for x in g.entries if x != 0) == 4


def test_network_validation_and_json():
    with pytest.raises(ValueError):
        Network([2, 2, 2], [(0, 1, 2)])
    with pytest.raises(ValueError):
        Network([2], [(0, 0, 2)])
    net = triangle(2, 3, 2, (2, 5, 6))
    assert Network.from_json(net.to_json()) == net
    with pytest.raises(ValueError):
        Network.from_json({"vertices": [{"n": 2}]})


def test_phi_examples():
    net = triangle(2, 2, 2, (4, 4, 4))
    ident = [linalg.identity(4)] * 3
    assert phi(net, ident) == graph_tensor(net)
    zero = [[[0] * 4 for _ in range(4)]] + ident[1:]
    assert phi(net, zero).is_zero()
    with pytest.raises(ValueError):
        phi(net, ident[:2])


def test_phi_with_pencil_at_vertex_zero():
    net = triangle(2, 2, 2, (2, 4, 4))
    X0 = block_sum(jordan_block(1, (1, 3)), jordan_block(1, (1, -5)))
    maps = [X0.to_tensor().data.reshape(2, 4).tolist(), linalg.identity(4), linalg.identity(4)]
    form = kronecker_decompose(MatrixPencil.from_tensor(phi(net, maps)))
    assert form.left == () and form.right == ()
    assert form.jordan_size_lists() == {(1, 1): 2}


def test_criticality_labels():
    assert criticality(triangle(2, 2, 2, (2, 4, 4))) == ["strictly-sub", "critical", "critical"]
    assert criticality(triangle(2, 2, 2, (4, 4, 4))) == ["critical"] * 3
    assert criticality(triangle(2, 2, 2, (5, 4, 4)))[0] == "strictly-super"


def test_expected_dim_examples():
    assert expected_dim(triangle(2, 2, 2, (2, 4, 4))) == 29
    assert expected_dim(Network([2, 2], [(0, 1, 2)])) == 4
    assert expected_dim(triangle(3, 3, 3, (2, 9, 9))) == 154


def test_dim_triangle_examples():
    assert dim_triangle(TriangleConfig(2, 2, 0, 0)) == 26
    assert dim_triangle(TriangleConfig(3, 2, 1, 0)) == 57
    assert dim_triangle(TriangleConfig(2, 2, 2, 2)) == 8


def test_defect_examples():
    assert defect_triangle(TriangleConfig(2, 2, 0, 0)) == (3, 3)
    assert defect_triangle(TriangleConfig(3, 3, 1, 1))[1] == 17
    assert defect_triangle(TriangleConfig(2, 2, 1, 1, m02=3))[0] == 0


@pytest.mark.parametrize("m,m12,k1,k2", [(2, 2, 0, 0), (3, 2, 1, 0), (2, 3, 1, 1), (2, 3, 2, 0)])
def test_dim_symmetric_in_legs(m, m12, k1, k2):
    assert dim_triangle(TriangleConfig(m, m12, k1, k2)) == dim_triangle(TriangleConfig(m, m12, k2, k1))


def test_param_count_closed_form():
    # sum(n_i W_i - 1) - sum(m_e^2 - 1) + 1 for the (2,2,2) triangle with n = (2,4,4)
    assert param_count(triangle(2, 2, 2, (2, 4, 4))) == 7 + 15 + 15 - 9 + 1
    assert ambient_dim(triangle(2, 2, 2, (2, 4, 4))) == 32


def test_jacobian_oracle_examples():
    net = triangle(2, 2, 2, (2, 4, 4))
    assert {jacobian_rank_dim(net, s) for s in range(5)} == {26}
    assert jacobian_rank_dim(triangle(2, 2, 3, (2, 4, 6)), 0) == 48
    assert jacobian_rank_dim(Network([2, 2], [(0, 1, 2)]), 0) == 4


def test_normal_form_requires_star():
    with pytest.raises(ValueError, match="fills ambient"):
        normal_form_sample(TriangleConfig(2, 2, 2, 2), 0)
    with pytest.raises(ValueError, match="fills ambient"):
        normal_form_sample(TriangleConfig(2, 2, 1, 1, m02=3), 0)


def test_triangle_config_canonicalizes_legs():
    cfg = TriangleConfig(2, 3, 0, 2)
    assert (cfg.k1, cfg.k2) == (2, 0)
    with pytest.raises(ValueError):
        TriangleConfig(2, 2, -1, 0)


def test_augment_segment_gives_triangle():
    seg = Network([3, 3], [(0, 1, 3)])
    tri = augment(seg, 0, 1, 2)
    assert tri.dims == (2, 3, 3)
    assert sorted(tri.edges) == sorted(triangle(2, 3, 2, (2, 3, 3)).edges)
    with pytest.raises(ValueError):
        augment(seg, 0, 0, 2)


def test_augmented_defect_example_path():
    rep = augmented_defect(path(2, 2), [(0, 1, 2)])
    assert rep.defect == 3
    assert rep.network.dims == (2, 4, 8, 2)
    assert rep.network.order == 4 and rep.new_vertices == (0,)


def test_augmented_defect_triangle_and_two_pins():
    assert augmented_defect(path(2), [(0, 1, 2)]).defect == 3
    rep = augmented_defect(path(2, 2, 2), [(0, 1, 2), (2, 3, 2)])
    assert rep.defect == 6
    assert rep.network.dims[:2] == (2, 2)
    with pytest.raises(ValueError, match="critical"):
        augmented_defect(Network([2, 2], [(0, 1, 3)]), [(0, 1, 2)])
    with pytest.raises(ValueError, match="distinct"):
        augmented_defect(path(2, 2), [(0, 1, 2), (1, 2, 2)])


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([0, 1, 2]))
def test_gauge_invariance(seed, edge_index):
    net = triangle(2, 2, 3, (2, 4, 5))
    maps = random_maps(net, seed)
    u, v, m = net.edges[edge_index]
    g = random_invertible(make_rng(seed, 0x6A), m)
    g_inv_t = linalg.transpose(linalg.inverse(g))

    def act(i, mat):
        # W_i is a product of bond spaces in incident-edge order; act on the slot of this edge
        slots = net.incident(i)
        dims = [net.edges[e][2] for e in slots]
        pos = slots.index(edge_index)
        X = np.array(maps[i], dtype=object).reshape([net.dims[i]] + dims)
        X = np.moveaxis(np.tensordot(X, np.array(mat, dtype=object), axes=([1 + pos], [0])), -1, 1 + pos)
        return X.reshape(net.dims[i], -1).tolist()

    moved = list(maps)
    moved[u] = act(u, g)
    moved[v] = act(v, g_inv_t)
    assert phi(net, moved) == phi(net, maps)
