import cmath
import json
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import family, marked
from oracles import mandelbrot_bounded
from skewdyn.green import (GreenEvaluator, bifurcation_raster, equidist_compare, green_1d,
                           green_2d, green_ratio_check, read_pgm)
from skewdyn.prep import prep_parameter_set


def mp_green_1d(c, x0, n=40):
    """d^-n log|f^n(x0)| for z^2 + c at 60 digits; mpmath exponents do not overflow."""
    with mpmath.workdps(60):
        z = mpmath.mpc(x0)
        for _ in range(n):
            z = z * z + c
        return float(mpmath.log(abs(z)) / mpmath.mpf(2) ** n)


def evaluator(f, g, t0=None):
    return GreenEvaluator.from_product(family(f, g), t0)


def test_pure_powers():
    ev = evaluator("x^2", "y^2")
    assert green_1d(ev, 4).value == pytest.approx(math.log(4), abs=1e-12)
    assert green_2d(ev, (4, 2)).value == pytest.approx(math.log(4), abs=1e-12)
    assert green_2d(ev, (0.5, 0.25)).bounded


def test_bounded_on_julia_interval():
    ev = evaluator("x^2 - 2", "y^2")
    v = green_1d(ev, 1)
    assert v.bounded and v.value == 0.0


def test_escaping_against_mpmath():
    ev = evaluator("x^2 + 1", "y^2")
    assert green_1d(ev, 0).value == pytest.approx(mp_green_1d(1, 0), abs=1e-10)
    assert green_1d(ev, 0).value == pytest.approx(0.2036772613697, abs=1e-12)
    assert 2 * green_1d(ev, 0).value == pytest.approx(green_1d(ev, 1).value, abs=1e-10)


@given(st.complex_numbers(max_magnitude=3), st.complex_numbers(max_magnitude=1))
def test_onedim_against_mpmath(x0, c):
    ev = GreenEvaluator.from_product(family("x^2", "y^2"), None)
    ev = GreenEvaluator(2, (c, 0j, 1 + 0j), ev.g, max(ev.R, 1 + abs(c)) + 1)
    v = green_1d(ev, x0)
    if not v.bounded:
        assert v.value == pytest.approx(mp_green_1d(c, x0, 60), abs=1e-8)


@given(st.complex_numbers(max_magnitude=4), st.complex_numbers(max_magnitude=4))
def test_dynamical_invariance(x, y):
    ev = evaluator("x^2 - 1/2", "y^2 + x*y + 1/3")
    G = green_2d(ev, (x, y))
    GF = green_2d(ev, ev((x, y)))
    if not G.bounded and not GF.bounded:
        assert GF.value == pytest.approx(2 * G.value, rel=1e-8, abs=1e-8)


def test_deg11_green_values(deg11):
    ev = GreenEvaluator.from_product(deg11.F, 10)
    assert green_1d(ev, 100).value == pytest.approx(2 * math.log(10), abs=1e-9)
    assert green_2d(ev, (100, 1e11)).value == pytest.approx(11 * math.log(10), abs=1e-9)


def test_ratio_check_deg11(deg11):
    rep = green_ratio_check(deg11, [1000 * u for u in (1, 1j, -1, -1j)])
    assert rep.max_residual < 1e-8
    assert rep.hypotheses == "user-declared"


def test_ratio_negative_control():
    rep = green_ratio_check(marked("x^2", "y^2", "t", "2*t"), [10, 10j])
    assert rep.max_residual == pytest.approx(math.log(2), abs=1e-9)


@pytest.mark.parametrize("t0", [1, -1, 1j, -1j])
def test_unit_circle_bounded(disk, t0):
    ev = GreenEvaluator.from_product(disk.F, t0)
    v = green_2d(ev, (t0, 0))
    assert v.bounded and v.value == 0.0


def test_raster_threads_identical(disk):
    a = bifurcation_raster(disk, (-2, -2, 2, 2), (48, 40), budget=64, threads=1)
    b = bifurcation_raster(disk, (-2, -2, 2, 2), (48, 40), budget=64, threads=4)
    assert np.array_equal(a.counts, b.counts)
    assert a.counts.shape == (40, 48)


def test_raster_orientation():
    # row 0 is the top edge: Im t is largest there
    r = bifurcation_raster(marked("x^2 + t", "y^2", "0", "0"), (-2, -1.5, 1, 1.5), (30, 30), budget=50)
    centers = r.pixel_centers()
    assert centers[0, 0].imag > centers[-1, 0].imag
    assert centers[0, 0].real < centers[0, -1].real
    assert np.array_equal(r.bounded, mandelbrot_bounded((-2, -1.5, 1, 1.5), (30, 30), 50))


def test_pgm_round_trip(tmp_path, disk):
    r = bifurcation_raster(disk, (-2, -2, 2, 2), (32, 16), budget=300)
    path = tmp_path / "out.pgm"
    r.write_pgm(path)
    data, maxval = read_pgm(path)
    assert maxval == 301
    assert data.shape == (16, 32)
    assert np.array_equal(data == maxval, r.bounded)
    r.write_sidecar(tmp_path / "out.json")
    side = json.loads((tmp_path / "out.json").read_text())
    assert side["resolution"] == [32, 16] and side["budget"] == 300


def test_pgm_eight_bit(tmp_path, disk):
    r = bifurcation_raster(disk, (-2, -2, 2, 2), (8, 8), budget=100)
    r.write_pgm(tmp_path / "small.pgm")
    data, maxval = read_pgm(tmp_path / "small.pgm")
    assert maxval == 101 and data.dtype == np.uint8


def test_equidist_without_boundary(disk):
    r = bifurcation_raster(disk, (3, 3, 4, 4), (16, 16), budget=32)
    rep = equidist_compare([0.5], r)
    assert rep.flag == "no reference measure" and rep.max_discrepancy is None


def test_equidist_trend(disk):
    r = bifurcation_raster(disk, (-1.5, -1.5, 1.5, 1.5), (128, 128), budget=128)
    values = []
    for N in (2, 3, 4, 5):
        res = prep_parameter_set(disk, N=N)
        roots = [complex(float(q)) for q in res.rational]
        for e in res.entries:
            if e.kind == "cyclotomic":
                roots += [cmath.exp(2j * math.pi * k / e.value) for k in range(e.value)
                          if math.gcd(k, e.value) == 1]
        roots += res.numeric
        values.append(equidist_compare(roots, r).max_discrepancy)
    assert values == sorted(values, reverse=True)
    assert values[-1] < values[0] / 4
