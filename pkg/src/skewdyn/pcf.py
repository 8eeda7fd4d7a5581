"""Post-critical finiteness for the quadratic family (x^2 + d, y^2 + a x^2 + b x + c).

Contains 1-D critical-orbit tests, fixed points of x^2 + d, the two
parameter embeddings, a battery of necessary conditions, the exceptional-locus
classifier and the homogeneous family (x^2, y^2 + b x).
"""

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Any

from .algebra.mpoly import MPoly
from .algebra.numberfield import NumberField, NumberFieldElem
from .algebra.roots import complex_roots, rational_roots
from .algebra.upoly import UPoly, is_rational, upoly_gcd
from .errors import NonConvergence
from .prep import BIT_CAP, Cycle, Escape, Inconclusive, abs_lower, abs_upper

DEFAULT_MAX_ITER = 2000


# -- one-dimensional critical orbits ----------------------------------------------

def _is_exact(c):
    return is_rational(c) or isinstance(c, NumberFieldElem)


def _bits(v):
    if isinstance(v, NumberFieldElem):
        return v.bit_size()
    v = Fraction(v)
    return v.numerator.bit_length() + v.denominator.bit_length()


def is_pcf_1d(c, max_iter=DEFAULT_MAX_ITER):
    """Certificate for the orbit of 0 under z^2 + c.

    Escape uses R = 1 + |c|: beyond it |z^2 + c| >= |z|^2 - |c| > |z|.
    Complex floats are accepted; they can only produce Escape or Inconclusive.
    """
    if not _is_exact(c):
        c = complex(c)
        R = 1 + abs(c)
        z = 0j
        for n in range(max_iter + 1):
            if abs(z) > R:
                return Escape(n, Fraction(abs(z)), Fraction(R))
            z = z * z + c
        return Inconclusive(max_iter, "floating-point parameter")
    R = 1 + abs_upper(c)
    seen = {}
    z = 0
    for n in range(max_iter + 1):
        if z in seen:
            return Cycle(seen[z], n)
        seen[z] = n
        lo = abs_lower(z)
        if lo > R:
            return Escape(n, lo, R)
        if _bits(z) > BIT_CAP:
            return Inconclusive(max_iter, f"bit-size cap reached at step {n}")
        z = z * z + c
    return Inconclusive(max_iter)


def _vp(q, p):
    q = Fraction(q)
    if q == 0:
        return None
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def denominator_growth_proof(c, steps=8):
    """Exact proof that 0 is not preperiodic under z^2 + c for rational c with a
    non-trivial denominator.

    If v_p(c) = -k < 0 then v_p(z_n) = -2^(n-1) k for the orbit z_1 = c,
    z_{n+1} = z_n^2 + c, so all orbit points are distinct.  The valuation
    pattern is also checked explicitly for ``steps`` steps.
    Returns (prime, k) or None when c has no denominator.
    """
    c = Fraction(c)
    den = c.denominator
    if den == 1:
        return None
    p = 2
    while den % p:
        p += 1
    k = -_vp(c, p)
    z = c
    for n in range(1, steps + 1):
        if _vp(z, p) != -(2 ** (n - 1)) * k:
            raise ArithmeticError("valuation pattern broken")  # cannot happen
        z = z * z + c
    return p, k


def critical_orbit_poly(n, var="c"):
    """f_c^n(0) as a polynomial in c."""
    c = UPoly.gen(var)
    z = UPoly((), var)
    for _ in range(n):
        z = z * z + c
    return z


@dataclass
class PcfParameter:
    pattern: tuple
    value: Any          # Fraction (exact) or complex (numeric)
    exact: bool

    def to_dict(self):
        v = str(self.value) if self.exact else [round(self.value.real, 12), round(self.value.imag, 12)]
        return {"pattern": list(self.pattern), "value": v, "exact": self.exact}


def pcf_parameters_1d(N):
    """Roots of f_c^n(0) - f_c^m(0) for m < n <= N, each labelled with the first
    pattern (ordered by n, then m) that produces it."""
    if N > 7:
        raise ValueError("N <= 7 (degree 2^(N-1) budget)")
    orbit = [critical_orbit_poly(k) for k in range(N + 1)]
    seen = UPoly((1,), "c")
    out = []
    for n in range(1, N + 1):
        for m in range(n):
            p = (orbit[n] - orbit[m]).squarefree()
            new = p.exact_div(upoly_gcd(p, seen)).monic()
            if new.degree <= 0:
                continue
            seen = (seen * new).monic()
            rest = new
            for r in sorted(rational_roots(new)):
                out.append(PcfParameter((m, n), r, True))
                rest = rest.exact_div(UPoly((-r, 1), "c"))
            if rest.degree > 0:
                try:
                    zs = complex_roots(rest)
                except NonConvergence:
                    zs = complex_roots(rest, dps=80)
                out.extend(PcfParameter((m, n), z, False) for z in zs)
    return out


# -- fixed points and embeddings ---------------------------------------------------

@dataclass
class FixedPointData:
    d1: Any
    d2: Any
    field: Any = None  # NumberField when d1 is irrational

    def check(self):
        return self.d1 * (1 - self.d1)


def _rational_sqrt(q):
    q = Fraction(q)
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def fixed_points(d):
    """Roots d1, d2 = 1 - d1 of z^2 - z + d."""
    if isinstance(d, NumberFieldElem) and d.is_rational():
        d = d.rational_value()
    if not _is_exact(d):
        s = cmath.sqrt(1 - 4 * complex(d))
        d1 = (1 - s) / 2
        return FixedPointData(d1, 1 - d1)
    if isinstance(d, NumberFieldElem):
        raise NotImplementedError("fixed points over a number field parameter")
    d = Fraction(d)
    s = _rational_sqrt(1 - 4 * d)
    if s is not None:
        d1 = (1 - s) / 2
        return FixedPointData(_norm(d1), _norm(1 - d1))
    # w = q z satisfies w^2 - q w + p q = 0 with d = p/q
    p, q = d.numerator, d.denominator
    K = NumberField((p * q, -q, 1), "z")
    d1 = K.gen * Fraction(1, q)
    return FixedPointData(d1, 1 - d1, K)


def _norm(q):
    q = Fraction(q)
    return int(q) if q.denominator == 1 else q


def sigma_embed_b0(a, c, d1):
    return (a, a * d1 * d1 + c, a * (1 - d1) ** 2 + c, d1 - d1 * d1)


def sigma_embed_a0(d1, b, c):
    return (d1 - d1 * d1, d1 * b + c, (1 - d1) * b + c, b)


# -- necessary conditions -----------------------------------------------------------

@dataclass(frozen=True)
class QuadModuliPoint:
    a: Any
    b: Any
    c: Any
    d: Any

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)


@dataclass
class PcfConditionReport:
    entries: list = field(default_factory=list)   # (label, parameter, certificate)

    @property
    def escape_found(self):
        return any(isinstance(cert, Escape) for _, _, cert in self.entries)

    @property
    def all_cycle(self):
        return all(isinstance(cert, Cycle) for _, _, cert in self.entries)

    @property
    def status(self):
        if self.escape_found:
            return "not PCF (certificate)"
        if self.all_cycle:
            return "consistent with PCF (evidence)"
        return "undecided"

    def to_dict(self):
        from .algebra.printing import format_scalar
        rows = []
        for label, val, cert in self.entries:
            v = format_scalar(val) if _is_exact(val) else [complex(val).real, complex(val).imag]
            rows.append({"label": label, "parameter": v, "certificate": cert.to_dict()})
        return {"conditions": rows, "status": self.status}


def necessary_pcf_conditions(p, max_iter=DEFAULT_MAX_ITER):
    if not isinstance(p, QuadModuliPoint):
        p = QuadModuliPoint(*p)
    a, b, c, d = p.as_tuple()
    rep = PcfConditionReport()
    rep.entries.append(("f_d", d, is_pcf_1d(d, max_iter)))
    if a != 0:
        rep.entries.append(("f_a at infinity", a, is_pcf_1d(a, max_iter)))
    else:
        rep.entries.append(("f_b", b, is_pcf_1d(b, max_iter)))
    fp = fixed_points(d)
    for label, root in (("f at d1-fiber", fp.d1), ("f at d2-fiber", fp.d2)):
        alpha = a * root * root + b * root + c
        rep.entries.append((label, alpha, is_pcf_1d(alpha, max_iter)))
    return rep


# -- exceptional locus ------------------------------------------------------------------

COMPONENTS = {"AB": (0, 1), "ACD": (0, 2, 3), "BCD": (1, 2, 3)}


def exceptional_locus_member(p):
    vals = p.as_tuple() if isinstance(p, QuadModuliPoint) else tuple(p)
    return [name for name, idx in COMPONENTS.items() if all(vals[i] == 0 for i in idx)]


def family_locus_check(param):
    """{component: True when every defining coordinate vanishes identically}."""
    vals = list(param)
    return {name: all(_is_zero_poly(vals[i]) for i in idx) for name, idx in COMPONENTS.items()}


def _is_zero_poly(v):
    if isinstance(v, dict):
        return not v
    if isinstance(v, (UPoly, MPoly)):
        return v.is_zero()
    return v == 0


# -- homogeneous family (x^2, y^2 + b x) --------------------------------------------------

def homogeneous_family(b):
    """MPoly g = y^2 + b x and f = x^2; b may be a scalar or a UPoly in b."""
    f = UPoly((0, 0, 1), "x")
    g = MPoly({(0, 2): 1, (1, 0): b})
    return f, g


def iterate_vy(b, n):
    """F_b^n applied to the parametrized line (x, 0), by direct iteration."""
    f, g = homogeneous_family(b)
    X = UPoly.gen("x")
    Y = UPoly((), "x")
    for _ in range(n):
        X, Y = f(X), g.evaluate(X, Y)
        if not isinstance(Y, UPoly) or Y.var != "x":
            Y = UPoly((Y,), "x")
    return X, Y


@dataclass
class OrbitCurve:
    n: int
    kappa: Any
    X: UPoly
    Y: UPoly
    implicit: MPoly  # in variables x (for X) and y (for Y)

    def residual(self):
        """implicit(X(s), Y(s)), zero when the parametrization lies on the curve."""
        return self.implicit.evaluate(self.X, self.Y)


def homogeneous_orbit_curve(b, n):
    """(x^(2^n), kappa x^(2^(n-1))) with kappa = f_b^n(0); implicit y^2 = kappa^2 x,
    or y = 0 when kappa = 0."""
    if n < 1:
        raise ValueError("n >= 1")
    kappa = 0
    for _ in range(n):
        kappa = kappa * kappa + b
    X = UPoly.monomial(1, 2 ** n, "x")
    Y = UPoly.monomial(kappa, 2 ** (n - 1), "x")
    if kappa == 0:
        implicit = MPoly.y()
    else:
        implicit = MPoly({(0, 2): 1, (1, 0): -(kappa * kappa)})
    return OrbitCurve(n, kappa, X, Y, implicit)


def vy_preperiodic_homog(b, max_iter=DEFAULT_MAX_ITER):
    return is_pcf_1d(b, max_iter)


# -- leading term of F^{nk}(x, 0) ----------------------------------------------------------

@dataclass
class LeadingTerm:
    scalar: Any      # rational factor
    b_power: int     # power of the formal parameter b
    x_exponent: int

    def as_tuple(self):
        return (self.scalar, self.b_power, self.x_exponent)


def _orbit_of_zero(a, n):
    z, out = 0, []
    for _ in range(n):
        z = z * z + a
        out.append(z)
    return out


def leading_term_orbit_formula(k, n, a):
    """Predicted leading term of the second coordinate of F^{nk}(x, 0) for
    F = (x^2 + d, y^2 + a x^2 + b x + c) when 0 has exact period k under z^2 + a:

        b^(2^(n-1)) * 2^((2^n - 1)(k - 1)) * (prod_{i<k} f_a^i(0))^(2^n - 1) * x^(2^(nk) - 2^(n-1))

    The b-power is 2^(n-1); brute-force iteration confirms this power.
    """
    if k < 1 or n < 1:
        raise ValueError("k, n >= 1")
    orb = _orbit_of_zero(a, k)
    if orb[-1] != 0 or any(v == 0 for v in orb[:-1]):
        raise ValueError(f"0 does not have exact period {k} under z^2 + {a}")
    g_n = 2 ** n - 1
    prod = 1
    for v in orb[:-1]:
        prod *= v
    scalar = Fraction(2) ** (g_n * (k - 1)) * Fraction(prod) ** g_n
    return LeadingTerm(_norm(scalar), 2 ** (n - 1), 2 ** (n * k) - 2 ** (n - 1))


def brute_force_leading_term(k, n, a, c=0, d=0):
    """Top x-term of the second coordinate of F^{nk}(x, 0) by exact iteration with
    b a formal variable; returns the top b-monomial of its coefficient."""
    bvar = UPoly.gen("b")
    f = UPoly((d, 0, 1), "x")
    g = MPoly({(0, 2): 1, (2, 0): a, (1, 0): bvar, (0, 0): c})
    X = UPoly.gen("x")
    Y = UPoly((), "x")
    for _ in range(n * k):
        X, Y = f(X), g.evaluate(X, Y)
        if not isinstance(Y, UPoly) or Y.var != "x":
            Y = UPoly((Y,), "x")
    lead = Y.lc
    lead = lead if isinstance(lead, UPoly) else UPoly((lead,), "b")
    return LeadingTerm(_norm(lead.lc), lead.degree, Y.degree)
