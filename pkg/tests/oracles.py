"""Independent reference computations used by the tests.

None of these call into the code path they check: polynomial arithmetic goes
through sympy, the Mandelbrot raster is the textbook escape-time loop, and
orbits are pushed through plain Fraction arithmetic.
"""

from fractions import Fraction

import numpy as np
import sympy

T, X, Y = sympy.symbols("t x y")


def to_sympy(p, var=None):
    """UPoly (possibly nested) or MPoly -> sympy expression."""
    from skewdyn.algebra import MPoly, UPoly
    if isinstance(p, MPoly):
        return sum((to_sympy(c) * X**i * Y**j for (i, j), c in p.terms.items()), sympy.Integer(0))
    if isinstance(p, UPoly):
        v = sympy.Symbol(p.var)
        return sum((to_sympy(c) * v**k for k, c in enumerate(p.coeffs)), sympy.Integer(0))
    return sympy.Rational(Fraction(p).numerator, Fraction(p).denominator)


def sympy_coeffs(expr, var="t"):
    """Low-to-high Fraction coefficients of a univariate sympy expression."""
    poly = sympy.Poly(sympy.expand(expr), sympy.Symbol(var))
    cs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def mandelbrot_bounded(window, resolution, budget):
    """Classical escape-time raster of z -> z^2 + c from z = 0 with |z| > 2."""
    x0, y0, x1, y1 = window
    W, H = resolution
    xs = x0 + (np.arange(W) + 0.5) * (x1 - x0) / W
    ys = y1 - (np.arange(H) + 0.5) * (y1 - y0) / H
    C = xs[None, :] + 1j * ys[:, None]
    Z = np.zeros_like(C)
    alive = np.ones(C.shape, dtype=bool)
    for _ in range(budget):
        Z[alive] = Z[alive] ** 2 + C[alive]
        alive &= np.abs(Z) <= 2
    return alive


def fraction_orbit(fcoeffs, gterms, point, n):
    """Orbit of a rational point under x -> sum f_k x^k, y -> sum g_ij x^i y^j."""
    x, y = (Fraction(v) for v in point)
    out = [(x, y)]
    for _ in range(n):
        x, y = (sum(c * x**k for k, c in enumerate(fcoeffs)),
                sum(c * x**i * y**j for (i, j), c in gterms.items()))
        out.append((x, y))
    return out


def first_repeat(seq):
    """(m, n) with seq[m] == seq[n], n minimal."""
    seen = {}
    for n, v in enumerate(seq):
        if v in seen:
            return seen[v], n
        seen[v] = n
    return None


def sympy_nullspace_dim(rows, ncols):
    M = sympy.Matrix([[sympy.Rational(r.get(c, 0).numerator, r.get(c, 0).denominator)
                       if isinstance(r.get(c, 0), Fraction) else r.get(c, 0)
                       for c in range(ncols)] for r in rows])
    return len(M.nullspace())
