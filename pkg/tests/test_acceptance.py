"""Acceptance gate: one test per criterion, exact arithmetic throughout."""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from helpers import conjugated, expected_form, random_block_list, realize_blocks
from pencil_tns import linalg
from pencil_tns.degeneration import t_02, t_iii2, t_iv2, verify_iii2, verify_iv2, verify_restriction, verify_zero2
from pencil_tns.field import BinaryForm, QuotientRingElement, squarefree_decompose
from pencil_tns.field.rational import DEFAULT_MODULUS
from pencil_tns.membership import (
    annihilator_dim,
    block_ann_bound_check,
    crl_profile_test,
    rank_drop_points,
    schofield_bridge_rank,
    tns_333_test,
)
from pencil_tns.network import (
    Network,
    TriangleConfig,
    augment,
    augmented_defect,
    defect_triangle,
    dim_triangle,
    expected_dim,
    jacobian_rank_dim,
    normal_form_blocks,
    normal_form_sample,
    phi,
    random_maps,
    triangle,
)
from pencil_tns.pencil import MatrixPencil, block_sum, box_times_identity, generic_structure, jordan_block, kronecker_decompose
from pencil_tns.rng import make_rng, random_invertible
from pencil_tns.tensor import random_tensor

FIXTURES = Path(__file__).parent / "fixtures"
SEEDS = range(5)


def grid():
    for m in (2, 3):
        for m12 in (2, 3):
            for k1 in range(m12 + 1):
                for k2 in range(k1 + 1):
                    yield TriangleConfig(m, m12, k1, k2)


def side_bond_variants():
    for m12 in (2, 3):
        for k1 in range(m12 + 1):
            for k2 in range(k1 + 1):
                yield TriangleConfig(2, m12, k1, k2, m02=3)


def oracle(net):
    ranks = {jacobian_rank_dim(net, s, DEFAULT_MODULUS) for s in SEEDS}
    assert len(ranks) == 1, f"seeds disagree: {ranks}"
    return ranks.pop()


def path(*bonds):
    net = Network([1] * (len(bonds) + 1), [(i, i + 1, m) for i, m in enumerate(bonds)])
    return net.with_dims(net.critical_dims())


@pytest.mark.criterion(1, "triangle dimension formula equals the Jacobian-rank oracle on the grid")
def test_criterion_01_dimension_grid():
    bad = []
    for cfg in list(grid()) + list(side_bond_variants()):
        got = oracle(cfg.network())
        if got != dim_triangle(cfg):
            bad.append((cfg, got, dim_triangle(cfg)))
    assert not bad


@pytest.mark.criterion(2, "defect values, including defect = expdim - oracle on the grid")
def test_criterion_02_defects():
    assert defect_triangle(TriangleConfig(2, 2, 0, 0)) == (3, 3)
    assert defect_triangle(TriangleConfig(3, 3, 1, 1))[1] == 17
    for cfg in grid():
        net = cfg.network()
        assert defect_triangle(cfg)[0] == expected_dim(net) - oracle(net), cfg


@pytest.mark.criterion(3, "Kronecker round trip on 200 conjugated random block sums")
def test_criterion_03_kronecker_round_trip():
    failures = []
    for seed in range(200):
        blocks = random_block_list(seed)
        t = conjugated(realize_blocks(blocks), seed)
        assert max(t.shape) <= 8
        if kronecker_decompose(t) != expected_form(blocks):
            failures.append(seed)
    assert not failures


@pytest.mark.criterion(4, "random pencils follow the generic Kronecker structure")
def test_criterion_04_generic_structure():
    failures = []
    for n1 in range(1, 7):
        for n2 in range(1, 7):
            if n1 > 2 * n2 or n2 > 2 * n1:
                continue
            want = generic_structure(n1, n2)
            for seed in range(50):
                t = MatrixPencil.from_tensor(random_tensor((2, n1, n2), 1000 * n1 + 100 * n2 + seed))
                form = kronecker_decompose(t)
                ok = form.matches(want)
                if ok and n1 == n2:
                    # the distinct eigenvalues are exactly the roots of the (squarefree) determinant
                    det = t.det_form()
                    prod = BinaryForm(0, (1,))
                    for g in form.jordan:
                        prod = prod * g.certificate
                    ok = squarefree_decompose(det).partition == (1,) * n1 and prod == det.normalized()
                if not ok:
                    failures.append((n1, n2, seed))
    assert not failures


@pytest.mark.criterion(5, "normal forms pass the root-locus and rank-drop tests; random tensors fail")
def test_criterion_05_normal_form_signature():
    failures = []
    for cfg in grid():
        if not cfg.star():
            continue
        kappas = range(cfg.k1, cfg.m12 - 1)
        t = MatrixPencil.from_tensor(normal_form_sample(cfg, 0))
        for kappa in kappas:
            if not crl_profile_test(t, cfg, kappa, seed=0):
                failures.append(("normal form", cfg, kappa))
        if rank_drop_points(t, (cfg.m - 1) * cfg.m12).count < cfg.m:
            failures.append(("rank drop", cfg))
        if not kappas:
            continue
        for seed in range(50):
            r = MatrixPencil.from_tensor(random_tensor((2, cfg.n1, cfg.n2), seed))
            if crl_profile_test(r, cfg, cfg.k1, seed=seed):
                failures.append(("random", cfg, seed))
    assert not failures


@pytest.mark.criterion(6, "annihilator dimensions of generic pencils, A(zeta), and the off-diagonal kernels")
def test_criterion_06_annihilators():
    for n1 in range(1, 6):
        for n2 in range(1, 6):
            if n1 > 2 * n2 or n2 > 2 * n1:
                continue
            want = n1 if n1 == n2 else (n1 - n2) ** 2
            seeds = range(20) if n1 == n2 else range(3)
            for seed in seeds:
                assert annihilator_dim(random_tensor((2, n1, n2), seed), [1, 2]) == want, (n1, n2, seed)
    for m in (2, 3):
        for m12 in (2, 3):
            zs = [(1, z) for z in (3, -7, 11)[:m]]
            A = block_sum(*(box_times_identity(jordan_block(1, z), m12) for z in zs))
            assert annihilator_dim(A.to_tensor(), [1, 2]) == m * m12 * m12
    cfg = TriangleConfig(2, 3, 1, 0)
    rep = block_ann_bound_check(*normal_form_blocks(cfg, 0))
    assert rep.dim_m1 == cfg.m * (cfg.m12 - cfg.k1) * (cfg.k1 - cfg.k2) == 4
    assert rep.dim_m2 == 0 and rep.contained


@pytest.mark.criterion(7, "explicit degenerations and the restriction verify exactly")
def test_criterion_07_degenerations():
    assert verify_iii2().equal
    assert verify_iv2().equal
    assert verify_zero2().equal
    assert verify_restriction(0).equal
    rep = verify_restriction(2)
    assert rep.equal
    assert isinstance(next(iter(rep.limit.values())), QuotientRingElement)


@pytest.mark.criterion(8, "3x3x3 characterization: contractions and normal forms pass, random tensors fail")
def test_criterion_08_tns_333():
    net = triangle(2, 2, 2, (3, 3, 3))
    for seed in range(20):
        assert tns_333_test(phi(net, random_maps(net, seed))), seed
    for T in (t_02(), t_iii2(), t_iv2()):
        assert tns_333_test(T)
    for seed in range(50):
        v = tns_333_test(random_tensor((3, 3, 3), seed))
        assert not v and v.certificate["ruppert_ranks"] == [8, 8, 8], seed


@pytest.mark.criterion(9, "bridge map rank 10 on network tensors and 12 on random tensors")
def test_criterion_09_bridge_rank():
    net = triangle(2, 2, 2, (2, 3, 4))
    for seed in range(20):
        T = phi(net, random_maps(net, seed))
        assert [schofield_bridge_rank(T, 1, 100 * seed + s) for s in range(3)] == [10, 10, 10]
        R = random_tensor((2, 3, 4), seed)
        assert [schofield_bridge_rank(R, 1, 100 * seed + s) for s in range(3)] == [12, 12, 12]


@pytest.mark.criterion(10, "augmentation defects match the Jacobian oracle")
def test_criterion_10_augmentation():
    rep = augmented_defect(path(2, 2), [(0, 1, 2)])
    assert rep.defect == 2 * 2 - 1
    assert expected_dim(rep.network) - oracle(rep.network) == 3
    for m in (2, 3):
        for m12 in (2, 3):
            rep = augmented_defect(path(m12), [(0, 1, m)])
            cfg = TriangleConfig(m, m12, 0, 0)
            assert sorted(rep.network.edges) == sorted(cfg.network().edges)
            assert rep.network.dims == (2, cfg.n1, cfg.n2)
            assert rep.defect == defect_triangle(cfg)[0] == expected_dim(rep.network) - oracle(rep.network)
    rep = augmented_defect(path(2, 2, 2), [(0, 1, 2), (2, 3, 2)])
    assert rep.defect == 3 + 3
    assert expected_dim(rep.network) - jacobian_rank_dim(rep.network, 0) == 6


CLI_RUNS = [
    (["kronecker", "l1_j2.json"], 0),
    (["kronecker", "empty_pencil.json"], 0),
    (["kronecker", "malformed.json"], 2),
    (["member", "crl", "normal_form_2311.json", "-m", "2", "--m12", "3", "--k1", "1", "--k2", "1"], 0),
    (["member", "rankdrop", "normal_form_2311.json", "-r", "3", "--min-count", "2"], 0),
    (["member", "tns333", "random_333.json"], 1),
    (["member", "tns333", "t02.json"], 0),
    (["member", "ruppert", "fermat_cubic.json"], 1),
    (["member", "schofield", "random_234.json"], 1),
    (["member", "ann", "random_234.json", "--acting", "1", "2"], 0),
    (["tns", "oracle", "--network", "triangle_222.json"], 0),
    (["tns", "sample", "-m", "2", "--m12", "2"], 0),
    (["tns", "dim", "-m", "2", "--m12", "2", "--k1", "2"], 0),
    (["degenerate", "verify", "iv2"], 0),
    (["degenerate", "verify", "restriction", "--lambda", "2"], 0),
]


def _cli(args, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    return subprocess.run(
        [sys.executable, "-m", "pencil_tns.cli", "--seed", "7", *args],
        cwd=FIXTURES,
        env=env,
        capture_output=True,
    )


@pytest.mark.criterion(11, "gauge invariance of the contraction map and byte-identical CLI output")
def test_criterion_11_gauge_and_determinism():
    net = triangle(2, 3, 2, (2, 5, 6))
    for seed in range(5):
        maps = random_maps(net, seed)
        base = phi(net, maps)
        rng = make_rng(seed, 0x6A)
        moved = [list(map(list, X)) for X in maps]
        for e, (u, v, m) in enumerate(net.edges):
            g = random_invertible(rng, m)
            g_inv_t = linalg.transpose(linalg.inverse(g))
            moved[u] = _act_on_edge(net, u, e, moved[u], g)
            moved[v] = _act_on_edge(net, v, e, moved[v], g_inv_t)
        assert phi(net, moved) == base
    for args, code in CLI_RUNS:
        first, second = _cli(args, 1), _cli(args, 2)
        assert first.returncode == code, (args, first.stderr)
        assert first.stdout == second.stdout, args
        if code != 2:
            json.loads(first.stdout)


def _act_on_edge(net, i, edge, X, g):
    import numpy as np

    slots = net.incident(i)
    dims = [net.edges[e][2] for e in slots]
    pos = slots.index(edge)
    arr = np.array(X, dtype=object).reshape([net.dims[i]] + dims)
    arr = np.moveaxis(np.tensordot(arr, np.array(g, dtype=object), axes=([1 + pos], [0])), -1, 1 + pos)
    return arr.reshape(net.dims[i], -1).tolist()
