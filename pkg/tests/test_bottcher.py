from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import family, marked
from families import centered_quadratic, monic_family, seeded, split_family
from skewdyn.algebra import MPoly, NumberField, UPoly, parse_fx, parse_mpoly, parse_upoly
from skewdyn.bottcher import (degree_bound_check, onedim_bottcher_coeffs, onedim_oracle,
                              onedim_polynomial_part, orbit_relation_candidate,
                              polynomial_part, root_of_unity_order, vertical_bottcher_coeffs,
                              vertical_oracle)
from skewdyn.errors import HypothesisViolated, NotRootOfUnity, RelationFails

# c_i for z^2 + 3, frozen from the fixed-point oracle
Z2_PLUS_3 = [0, Fraction(3, 2), 0, Fraction(-3, 8), 0, Fraction(-27, 16)]

# deg_t c_i(t^2) for the degree-11 family, i = 1..10, frozen from the fixed-point oracle
# (-1 means c_i vanishes identically)
DEG11_DEGREES = [-1, -1, -1, -1, -1, -1, -1, 1, -1, 23]


def test_constant_fiber_c1():
    vb = vertical_bottcher_coeffs(family("x^2 + 7", "y^2 + 5/3"), 3)
    assert vb.c0 == 0 and vb.coeff(1) == Fraction(5, 6)


def test_quadratic_c1_is_half_of_mu2():
    vb = vertical_bottcher_coeffs(family("x^2 + 1/3", "y^2 + t*x^2 + 2*x + 5"), 4)
    assert vb.coeff(1) == parse_fx("1/2*t*x^2 + x + 5/2")
    assert vb.coeff(2) == 0
    assert vb.residual().is_zero()


def test_non_centered_c0():
    vb = vertical_bottcher_coeffs(family("x^2", "y^2 + x*y + t*y"), 3)
    assert vb.c0 == parse_fx("1/2*x + 1/2*t")
    assert vb.residual().is_zero()


def test_onedim_frozen_values():
    f = parse_upoly("z^2 + 3", "z")
    assert onedim_bottcher_coeffs(f, 5) == Z2_PLUS_3
    assert onedim_oracle(f, 5) == Z2_PLUS_3


@given(st.fractions(min_value=-5, max_value=5, max_denominator=7))
def test_onedim_c1_is_half_c(c):
    cs = onedim_bottcher_coeffs(UPoly([c, 0, 1], "z"), 3)
    assert cs[1] == c / 2
    assert cs[3] == (cs[1] - cs[1] ** 2) / 2


def test_onedim_rejects_non_monic():
    with pytest.raises(ValueError):
        onedim_bottcher_coeffs(UPoly([0, 0, 2], "z"), 3)


@given(st.integers(0, 10 ** 6))
def test_recursion_matches_fixed_point(seed):
    F = monic_family(seeded(seed))
    vb = vertical_bottcher_coeffs(F, 5)
    assert [vb.c0] + vb.coeffs == vertical_oracle(F, 5)
    assert vb.residual().is_zero()


@given(st.integers(0, 10 ** 6))
def test_split_family_matches_onedim(seed):
    F, q = split_family(seeded(seed))
    vb = vertical_bottcher_coeffs(F, 6)
    assert [vb.c0] + vb.coeffs == onedim_bottcher_coeffs(q, 6)


def test_deg11_degree_table(deg11):
    rep = degree_bound_check(deg11, 10)
    assert [r.bound for r in rep.rows] == [2 * (i + 1) + i for i in range(1, 11)]
    assert [r.actual for r in rep.rows] == DEG11_DEGREES
    assert rep.all_pass and rep.hypothesis_ok and rep.advisory is None


@given(st.integers(0, 10 ** 6))
def test_degree_bound_centered(seed):
    rep = degree_bound_check(centered_quadratic(seeded(seed)), 8)
    assert rep.hypothesis_ok
    assert rep.violations == []


def test_degree_bound_advisories():
    pair = marked("x^2", "y^2 + x*y", "t^2", "t^3")
    rep = degree_bound_check(pair, 3)
    assert not rep.hypothesis_ok and "y^1" in rep.advisory
    with pytest.raises(HypothesisViolated):
        degree_bound_check(pair, 3, strict=True)
    low = marked("x^2 + t^3", "y^2", "t", "t^3")
    assert "deg a" in degree_bound_check(low, 3).advisory


def test_deg11_polynomial_part(deg11):
    pp = polynomial_part(deg11)
    assert pp.P == parse_mpoly("y^2")
    assert pp.tail_negative and pp.hypothesis_ok


def test_polynomial_part_contains_c1():
    # with m1 = 1 the polynomial part is y + c_0 and the y^{-1} tail carries c_1
    pair = marked("x^2", "y^2 + 2*x + 1", "t", "t^8")
    pp = polynomial_part(pair, strict=False)
    assert pp.P == parse_mpoly("y")


def test_polynomial_part_strict():
    pair = marked("x^2", "y^2 + t*x^2", "t", "t")
    with pytest.raises(HypothesisViolated):
        polynomial_part(pair)
    pp = polynomial_part(pair, strict=False)
    assert not pp.hypothesis_ok
    assert not pp.tail_negative


def test_onedim_polynomial_part():
    f = parse_upoly("z^2 + 3", "z")
    assert onedim_polynomial_part(f, 2) == parse_fx("x^2 + 3")


def test_root_of_unity_order():
    assert root_of_unity_order(Fraction(1)) == 1
    assert root_of_unity_order(-1) == 2
    assert root_of_unity_order(Fraction(2)) is None
    K = NumberField.cyclotomic(12)
    assert root_of_unity_order(K.gen) == 12
    assert root_of_unity_order(K.gen ** 4) == 3
    assert root_of_unity_order(K.gen + 1) is None


def test_deg11_relation(deg11):
    cand = orbit_relation_candidate(deg11)
    assert (cand.m1, cand.m2) == (2, 9)
    assert cand.P == parse_mpoly("y^2") and cand.Q == parse_fx("x^11")
    assert cand.xi_exact == 1 and cand.xi_order == 1
    assert cand.relation == parse_mpoly("y^2 - x^11")
    assert cand.verified == [0, 1, 2]


def test_relation_from_later_iterate(deg11):
    cand = orbit_relation_candidate(deg11, iterate_index=1, count=2)
    assert cand.relation == parse_mpoly("y^2 - x^11")
    assert cand.verified == [1, 2]


def test_relation_fails_on_decoupled_point():
    pair = marked("x^2", "y^2 + 1", "t", "t^3")
    with pytest.raises(RelationFails) as exc:
        orbit_relation_candidate(pair, strict=False)
    assert exc.value.payload()["index"] == 1


def test_not_root_of_unity():
    pair = marked("x^2", "y^2", "t", "2*t^2")
    with pytest.raises(NotRootOfUnity):
        orbit_relation_candidate(pair, strict=False)


def test_invariant_line_relation():
    pair = marked("x^2 - 1", "y^2 - 1", "t", "t")
    with pytest.raises(HypothesisViolated):
        orbit_relation_candidate(pair)
    cand = orbit_relation_candidate(pair, strict=False)
    assert (cand.m1, cand.m2) == (1, 0)
    assert cand.relation == parse_mpoly("y - x")
