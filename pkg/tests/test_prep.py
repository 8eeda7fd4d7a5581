from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from conftest import family, marked
from oracles import first_repeat, fraction_orbit
from skewdyn.algebra import NumberField, UPoly, parse_upoly
from skewdyn.prep import (Cycle, Escape, Inconclusive, ZeroIdentity, certificate_holds,
                          detect_preperiodic, escape_radius, naive_radius, prep_intersection,
                          prep_parameter_set, prep_polynomials)
from skewdyn.skew import specialize


def test_naive_radius_values():
    assert naive_radius(family("x^2", "y^2 + x*y")) == 2
    assert naive_radius(family("x^11", "y^11 + y^2 - x^11")) == 3


def test_escape_radius_enlarged_when_needed():
    # (3/2, -12/5) has norm 12/5 > 2 and maps to (9/4, 54/25): 2 is not an escape radius
    F = specialize(family("x^2", "y^2 + x*y"), 1)
    x, y = Fraction(3, 2), Fraction(-12, 5)
    assert max(abs(v) for v in F((x, y))) < max(abs(x), abs(y))
    R = escape_radius(F)
    assert R == Fraction(2681, 1024)


@given(st.floats(0, 1), st.floats(0, 6.283), st.floats(1.0001, 3))
def test_escape_radius_grows_norm(s, theta, scale):
    import cmath
    F = family("x^2 - 1/2", "y^2 + x*y - 1/3*x + 1/4")
    R = float(escape_radius(F))
    # a point with max norm just above R, the other coordinate anywhere smaller
    big = R * scale * cmath.exp(1j * theta)
    small = s * R * scale * cmath.exp(2j * theta)
    for x, y in ((big, small), (small, big)):
        nx = x * x - 0.5
        ny = y * y + x * y - x / 3 + 0.25
        assert max(abs(nx), abs(ny)) > max(abs(x), abs(y))


def test_certificates_at_specializations(disk):
    F2 = specialize(disk.F, 2)
    cert = detect_preperiodic(F2, (Fraction(2), Fraction(0)))
    assert isinstance(cert, Escape) and cert.step <= 2
    assert certificate_holds(F2, (Fraction(2), Fraction(0)), cert)
    K = NumberField.cyclotomic(3)
    w = K.gen
    Fw = specialize(disk.F, w)
    cert = detect_preperiodic(Fw, (w, K.zero))
    # w^4 = w, so F^2(P) = P
    assert cert == Cycle(0, 2)
    assert certificate_holds(Fw, (w, K.zero), cert)


def test_cycle_matches_fraction_oracle():
    F = family("x^2 - 1", "y^2 - 2")
    cert = detect_preperiodic(F, (Fraction(0), Fraction(0)))
    pts = fraction_orbit([-1, 0, 1], {(0, 2): 1, (0, 0): -2}, (0, 0), 10)
    assert (cert.m, cert.n) == first_repeat(pts)


def test_inconclusive_on_budget():
    F = family("x^2 - 1", "y^2 - 1/4")
    cert = detect_preperiodic(F, (Fraction(0), Fraction(0)), max_iter=20)
    assert isinstance(cert, Inconclusive)


def test_prep_polynomial_conventions(disk):
    t = UPoly.gen("t")
    assert prep_polynomials(disk, 1, 2) == t ** 4 - t ** 2
    fixed = marked("x^2", "y^2 + t*x*y", "0", "1")
    assert prep_polynomials(fixed, 0, 1) is ZeroIdentity
    mand = marked("x^2 + t", "y^2", "0", "0")
    assert prep_polynomials(mand, 1, 2) == t ** 2


def test_prep_parameter_set_example(disk):
    res = prep_parameter_set(disk, N=3)
    assert Fraction(0) in res.rational and Fraction(1) in res.rational and Fraction(-1) in res.rational
    assert 3 in res.cyclotomic
    assert all(e.verified for e in res.entries if e.kind != "numeric")


def test_shifted_prep_set():
    B = marked("x^2", "y^2 + t*x*y", "t + 1", "0")
    res = prep_parameter_set(B, N=3)
    assert Fraction(-1) in res.rational
    for z in res.numeric:
        assert abs(abs(z + 1) - 1) < 1e-9


def test_orbit_collision_gives_same_sets(disk):
    other = marked("x^2", "y^2 + t*x*y", "-t", "0")
    a = prep_parameter_set(disk, N=3)
    b = prep_parameter_set(other, N=3)
    # F(P) = F(P'), so every pattern with m >= 1 imposes the same condition
    for (m, n), poly in a.patterns.items():
        if m >= 1:
            assert b.patterns[(m, n)] == poly
    # the m = 0 patterns differ by t -> -t; both sets stay inside {0} and roots of unity
    for res in (a, b):
        assert set(res.rational) <= {-1, 0, 1} and not res.numeric


def test_intersection_example():
    A = marked("x^2", "y^2 + t*x*y", "t", "0")
    B = marked("x^2", "y^2 + t*x*y", "t + 1", "0")
    res = prep_intersection(A, B, N=4)
    assert res.rational == [-1, 0]
    assert res.cyclotomic == [3]
    assert res.radical == parse_upoly("t^4 + 2*t^3 + 2*t^2 + t")
