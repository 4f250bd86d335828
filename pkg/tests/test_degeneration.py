from fractions import Fraction

import pytest

from pencil_tns.degeneration import (
    T_02_TERMS,
    T_III2_TERMS,
    T_IV2_TERMS,
    T_PRIME_TERMS,
    E,
    apply_local_maps,
    iv2_curves,
    map_from_images,
    restriction_direct,
    swap_last_factors,
    t_ii2_terms,
    verify_epsilon_degeneration,
    verify_iii2,
    verify_iv2,
    verify_restriction,
    verify_zero2,
    zero2_change_of_coordinates,
    zero2_curves,
)
from pencil_tns.field import LaurentPoly, QuotientRingElement
from pencil_tns.membership import annihilator_dim, tns_333_test
from pencil_tns.degeneration import t_iii2, t_iv2, t_02


def test_iii2_limit():
    rep = verify_iii2()
    assert rep.equal and not rep.poles
    assert rep.limit == {k: 1 for k in T_III2_TERMS}


def test_iv2_limit_up_to_scalar():
    rep = verify_iv2()
    assert rep.equal
    assert rep.transcript[0] == {"rescale_g0_by": {"eps_power": -4, "scalar": "3/8"}}
    curves, lam = iv2_curves()
    raw = verify_epsilon_degeneration(curves, t_ii2_terms, T_IV2_TERMS, lam)
    # without the scalar the curve tends to zero
    assert not raw.equal and raw.limit == {} and not raw.poles


def test_zero2_two_stages():
    stage1 = apply_local_maps(zero2_change_of_coordinates(), swap_last_factors(T_III2_TERMS))
    assert stage1 == T_PRIME_TERMS
    rep = verify_epsilon_degeneration(zero2_curves(), T_PRIME_TERMS, T_02_TERMS)
    assert rep.equal
    assert verify_zero2().equal


def test_pole_is_reported():
    g = map_from_images([{0: E(-1)}, {1: 1}, {2: 1}])
    ident = map_from_images([{0: 1}, {1: 1}, {2: 1}])
    rep = verify_epsilon_degeneration([g, ident, ident], {(0, 0, 0): 1}, {})
    assert not rep.equal and rep.poles == [((0, 0, 0), 1)]


@pytest.mark.parametrize("lam", [0, 2, Fraction(1, 2), -3])
def test_restriction(lam):
    rep = verify_restriction(lam)
    assert rep.equal, rep.transcript


def test_restriction_in_quotient_ring():
    direct = restriction_direct(2)
    mu = QuotientRingElement.generator(3, Fraction(9))
    assert all(isinstance(v, QuotientRingElement) for v in direct.values())
    assert direct[(0, 1, 2)] == mu * 0 + 2
    with pytest.raises(ValueError):
        verify_restriction(-1)


def test_degeneration_targets_are_not_generic():
    # orbit dimensions drop along III.2 -> 0.2, and all three pass the 3x3x3 test
    assert annihilator_dim(t_iii2(), [0, 1, 2]) < annihilator_dim(t_02(), [0, 1, 2])
    for T in (t_iii2(), t_iv2(), t_02()):
        assert tns_333_test(T)
