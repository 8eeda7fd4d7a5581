from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import family, marked
from families import centered_quadratic, seeded
from oracles import sympy_nullspace_dim
from skewdyn.algebra import MPoly, parse_mpoly
from skewdyn.closure import (ClosureProblem, find_relation, invariance_check, proportional,
                             reduce_mod_monic_y, relation_sweep, verify_specialization_prep)
from skewdyn.errors import DegreeBudgetExceeded, NotMonicizable
from skewdyn.prep import Cycle, Escape
from skewdyn.skew import iterate


def test_deg11_relation(deg11):
    basis = find_relation(ClosureProblem(deg11, 11, 0, nPoints=2))
    assert [str(q) for q in basis.relations] == ["-x^11 + y^2"]
    assert basis.used == [0, 1] and basis.held_out == [2, 3]
    assert basis.sufficient and not basis.rejected


def test_deg11_with_t_multiples(deg11):
    basis = find_relation(ClosureProblem(deg11, 11, 1, nPoints=2))
    target = parse_mpoly("y^2 - x^11")
    assert basis.relations == [parse_mpoly("t") * target, target]


def test_diagonal_relation():
    pair = marked("x^2", "y^2", "t", "t")
    basis = find_relation(ClosureProblem(pair, 1, 0, nPoints=3))
    assert len(basis.relations) == 1 and proportional(basis.relations[0], parse_mpoly("y - x"))


def test_constant_orbit_relation():
    pair = marked("x^2 - 1", "y^2 - 1", "2", "2")
    basis = find_relation(ClosureProblem(pair, 1, 0, nPoints=3))
    assert any(proportional(q, parse_mpoly("y - x")) for q in basis.relations)


def test_generic_family_has_no_relation():
    pair = marked("x^2 + t", "y^2 + x^2 + 3*x + t", "t^2 + 1", "t^3 - t")
    basis = find_relation(ClosureProblem(pair, 2, 0, nPoints=3))
    assert basis.empty


@given(st.integers(0, 10 ** 6), st.integers(1, 2))
def test_relations_vanish_and_rejected_fail(seed, npts):
    pair = centered_quadratic(seeded(seed))
    prob = ClosureProblem(pair, 2, 0, nPoints=npts)
    basis = find_relation(prob, keep_matrix=True)
    pts = iterate(pair, max(basis.used + basis.held_out)).points
    for q in basis.relations:
        for n in basis.used + basis.held_out:
            assert q.evaluate(*pts[n]) == 0
    for q in basis.rejected:
        assert any(q.evaluate(*pts[n]) != 0 for n in basis.held_out)
    # the nullspace size matches an independent exact solver
    rows = [{int(c): Fraction(v) for c, v in r.items()} for r in basis.matrix]
    assert len(basis.relations) + len(basis.rejected) == sympy_nullspace_dim(rows, len(prob.monomials()))


def test_deterministic_output(deg11):
    a = find_relation(ClosureProblem(deg11, 11, 0, nPoints=2), keep_matrix=True).to_dict()
    b = find_relation(ClosureProblem(deg11, 11, 0, nPoints=2), keep_matrix=True, threads=3).to_dict()
    assert a == b


def test_held_out_points_dropped_under_budget(deg11):
    basis = find_relation(ClosureProblem(deg11, 11, 0, nPoints=2), budget=3000)
    assert basis.held_out == [2]
    with pytest.raises(DegreeBudgetExceeded):
        find_relation(ClosureProblem(deg11, 11, 0, nPoints=2), budget=100)


def test_sweep_shape():
    pair = marked("x^2", "y^2", "t", "t")
    rows = relation_sweep(pair, 1, 0, nPoints=2, kmax=2)
    assert [(r["k"], r["i"]) for r in rows] == [(1, 0), (2, 0), (2, 1)]
    assert all(r["relations"] for r in rows)


def test_invariance_examples(deg11):
    assert invariance_check(deg11.F, parse_mpoly("y^2 - x^11")).invariant
    assert invariance_check(family("x^2 + 3", "y^2 + 3"), parse_mpoly("y - x")).invariant
    v = invariance_check(family("x^2", "y^2 + 1"), parse_mpoly("y - x"))
    assert v.verdict == "NotInvariant" and v.remainder == MPoly.const(1)
    with pytest.raises(NotMonicizable):
        invariance_check(family("x^2", "y^2"), parse_mpoly("x*y - 1"))


def test_reduction_remainder_degree():
    p = parse_mpoly("y^5 + x*y^3 + t")
    q = parse_mpoly("2*y^2 - x")
    r = reduce_mod_monic_y(p, q)
    assert r.deg_y < 2
    # p - r is a multiple of q: check at a point on q = 0
    x0, y0 = Fraction(2), Fraction(1)
    assert q.evaluate(x0, y0) == 0
    diff = (p - r).evaluate(x0, y0)
    assert diff == 0 or diff.is_zero()


def test_specialization_certificates(deg11):
    rows = verify_specialization_prep(deg11, [Fraction(1), Fraction(-1), Fraction(2)])
    assert rows[0]["certificate"] == Cycle(0, 1)
    assert isinstance(rows[1]["certificate"], Cycle)
    assert isinstance(rows[2]["certificate"], Escape)
