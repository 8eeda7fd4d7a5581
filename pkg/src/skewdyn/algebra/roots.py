"""Root extraction for rational polynomials: exact rational roots, cyclotomic
factors, and numeric roots by Aberth iteration."""

import cmath
import math
import random
from fractions import Fraction
from functools import lru_cache

from ..errors import NonConvergence
from .upoly import UPoly

ROOT_SEED = 20240917  # fixed seed for the perturbed unit-circle start


def _integer_form(p):
    q = p.primitive()
    return [int(c) for c in q.coeffs]


def _divisors(n):
    from sympy import divisors
    return divisors(abs(n))


def _candidate_count_ok(a0, an):
    # both ends must factor cheaply for the candidate sweep to be sensible
    return max(abs(a0), abs(an)).bit_length() <= 96


def rational_roots(p):
    """{root: multiplicity} for the rational roots of p != 0."""
    if p.is_zero():
        raise ValueError("rational_roots of the zero polynomial")
    out = {}
    q = p.with_var("t") if p.var != "t" else p
    v = q.trailing_degree()
    if v > 0:
        out[Fraction(0)] = v
        q = UPoly(q.coeffs[v:], q.var)
    if q.degree <= 0:
        return out
    ints = _integer_form(q)
    a0, an = ints[0], ints[-1]
    if _candidate_count_ok(a0, an):
        cands = set()
        for r in _divisors(a0):
            for s in _divisors(an):
                cands.add(Fraction(r, s))
                cands.add(Fraction(-r, s))
    else:
        cands = _linear_factor_roots(q)
    for c in sorted(cands):
        mult = 0
        lin = UPoly((-c, 1), q.var)
        while q.degree > 0 and q(c) == 0:
            q = q.exact_div(lin)
            mult += 1
        if mult:
            out[c] = mult
    return out


def _linear_factor_roots(q):
    import sympy
    t = sympy.Symbol("t")
    expr = sympy.Poly([sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else c
                       for c in reversed(q.coeffs)], t)
    roots = set()
    for fac, _ in expr.factor_list()[1]:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = -sympy.Rational(b) / sympy.Rational(a)
            roots.add(Fraction(int(r.p), int(r.q)))
    return roots


@lru_cache(maxsize=None)
def _cyclo_coeffs(n):
    p = UPoly([-1] + [0] * (n - 1) + [1], "t")
    for d in range(1, n):
        if n % d == 0:
            p = p.exact_div(UPoly(_cyclo_coeffs(d), "t"))
    return p.coeffs


def cyclotomic_polynomial(n, var="t"):
    if n < 1:
        raise ValueError("cyclotomic index must be >= 1")
    return UPoly(_cyclo_coeffs(n), var)


def euler_phi(n):
    result = n
    m = n
    k = 2
    while k * k <= m:
        if m % k == 0:
            while m % k == 0:
                m //= k
            result -= result // k
        k += 1
    if m > 1:
        result -= result // m
    return result


def default_nmax(deg):
    # phi(n) >= sqrt(n/2), so phi(n) <= deg forces n <= 2 deg^2
    return max(2, 2 * deg * deg)


def cyclotomic_detect(p, nmax=None):
    """[(n, multiplicity)] for each cyclotomic Phi_n (n <= nmax) dividing p."""
    if p.is_zero():
        raise ValueError("cyclotomic_detect of the zero polynomial")
    q = p.with_var("t") if p.var != "t" else p
    if nmax is None:
        nmax = default_nmax(q.degree)
    out = []
    for n in range(1, nmax + 1):
        if q.degree <= 0:
            break
        if euler_phi(n) > q.degree:
            continue
        phi = cyclotomic_polynomial(n)
        mult = 0
        while q.degree >= phi.degree:
            quo, rem = divmod(q, phi)
            if not rem.is_zero():
                break
            q = quo
            mult += 1
        if mult:
            out.append((n, mult))
    return out


def _root_bound(cs):
    # Cauchy bound for the monic normalization
    lead = abs(cs[-1])
    return 1 + max(abs(c) / lead for c in cs[:-1])


def _aberth(cs, zs, tol, maxiter, ctx):
    n = len(zs)
    dcs = [k * c for k, c in enumerate(cs)][1:]

    def horner(coef, z):
        acc = coef[-1]
        for c in reversed(coef[:-1]):
            acc = acc * z + c
        return acc

    for _ in range(maxiter):
        done = True
        new = list(zs)
        for k in range(n):
            z = new[k]
            pv = horner(cs, z)
            dv = horner(dcs, z)
            if pv == 0:
                continue
            ratio = pv / dv if dv != 0 else ctx(1e-3)
            s = sum(1 / (z - new[j]) for j in range(n) if j != k and new[j] != z)
            w = ratio / (1 - ratio * s)
            new[k] = z - w
            if abs(w) > tol * max(1, abs(z)):
                done = False
        zs = new
        if done:
            return zs
    raise NonConvergence(f"Aberth iteration did not converge in {maxiter} steps")


def complex_roots(p, tol=1e-12, maxiter=500, dps=None):
    """deg(p) numeric roots of a squarefree rational polynomial.

    Starts from a perturbed circle of radius given by the Cauchy bound, with
    the fixed seed ROOT_SEED.  With ``dps`` the iteration runs in mpmath at
    that precision (for ill-conditioned inputs).
    """
    if p.degree <= 0:
        return []
    cs = [Fraction(c) for c in p.coeffs]
    rng = random.Random(ROOT_SEED)
    n = p.degree
    if dps is None:
        fcs = [complex(float(c)) for c in cs]
        rad = float(_root_bound(cs))
        starts = [rad * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) * (1 + 0.05 * rng.random())
                  for k in range(n)]
        zs = _aberth(fcs, starts, tol * 1e-2, maxiter, complex)
        evalp = lambda z: sum(c * z ** k for k, c in enumerate(fcs))
    else:
        from mpmath import mp, mpc, mpf
        with mp.workdps(dps):
            fcs = [mpf(c.numerator) / c.denominator for c in cs]
            rad = mpf(float(_root_bound(cs)))
            starts = [rad * mp.expj(2 * mp.pi * k / n + mpf("0.4")) * (1 + mpf(0.05 * rng.random()))
                      for k in range(n)]
            zs = _aberth(fcs, starts, mpf(10) ** (-dps + 5), maxiter, mpc)
            zs = [complex(z) for z in zs]
        evalp = lambda z: sum(float(c) * z ** k for k, c in enumerate(cs))
    for z in zs:
        # backward-error residual: |p(z)| against sum |c_k| |z|^k
        scale = 1 + sum(abs(float(c)) * abs(z) ** k for k, c in enumerate(cs))
        if abs(evalp(z)) > tol * scale:
            raise NonConvergence(f"residual too large at root {z}")
    return sorted(zs, key=lambda z: (round(z.real, 9), round(z.imag, 9)))
