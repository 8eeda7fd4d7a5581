"""Regular polynomial skew products F_t(x, y) = (f_t(x), g_t(x, y)) over Q[t],
marked points, exact iteration and the degree data used throughout."""

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Any

from .algebra.mpoly import MPoly
from .algebra.upoly import UPoly, is_rational
from .errors import DegreeBudgetExceeded, RegularityError

DEFAULT_BUDGET = 2_000_000  # total t-coefficients per symbolic orbit


def degree_budget():
    raw = os.environ.get("SKEWDYN_BUDGET")
    if raw:
        try:
            val = int(raw)
        except ValueError:
            from .errors import ConfigError
            raise ConfigError(f"SKEWDYN_BUDGET must be an integer, got {raw!r}")
        if val > 0:
            return val
    return DEFAULT_BUDGET


def deg_t(c):
    """t-degree of a coefficient; scalars count as degree 0, zero as -1."""
    if isinstance(c, UPoly):
        return c.degree
    return 0 if c != 0 else -1


def _specialize_coeff(c, t0):
    if isinstance(c, UPoly):
        return c(t0)
    return c


def _is_exact_coeff(c):
    from .algebra.numberfield import NumberFieldElem
    if isinstance(c, UPoly):
        return c.var == "t" and all(_is_exact_coeff(v) for v in c.coeffs)
    return is_rational(c) or isinstance(c, NumberFieldElem)


@dataclass(frozen=True, eq=False)
class SkewProduct:
    d: int
    f: UPoly
    g: MPoly

    def __call__(self, point):
        x, y = point
        return self.f(x), self.g.evaluate(x, y)

    @property
    def deg_t_f(self):
        return max((deg_t(c) for c in self.f.coeffs), default=0)

    @property
    def deg_t_g(self):
        return max((deg_t(c) for c in self.g.terms.values()), default=0)

    def specialize(self, t0):
        return specialize(self, t0)

    def compose(self, other):
        """self o other as a skew product of degree d1*d2."""
        f_new = self.f.compose(other.f)
        g_new = MPoly.from_upoly(self.g.compose(MPoly.from_upoly(other.f), other.g))
        return SkewProduct(self.d * other.d, f_new, g_new)

    def power(self, n):
        result = self
        for _ in range(n - 1):
            result = self.compose(result)
        return result

    def __eq__(self, other):
        return isinstance(other, SkewProduct) and self.d == other.d and self.f == other.f \
            and self.g == other.g

    def __hash__(self):
        return hash((self.d, self.f, self.g))

    def __str__(self):
        return f"({self.f}, {self.g})"


def check_regular(f, g):
    """Validate (f, g) and return the SkewProduct, or raise RegularityError
    listing every violated invariant."""
    problems = []
    if not isinstance(f, UPoly) or f.var != "x":
        f = UPoly((f,), "x") if not isinstance(f, UPoly) else f.with_var("x") if f.is_constant() else f
    if not isinstance(g, MPoly):
        g = MPoly.from_upoly(g)
    d = f.degree
    if f.var != "x":
        problems.append(("NotMonic", f"f must be a polynomial in x, got variable {f.var}"))
    if d < 2:
        problems.append(("NotMonic", f"f must have x-degree >= 2, got {d}"))
    elif f.lc != 1:
        problems.append(("NotMonic", f"leading coefficient of f is {f.lc}, expected 1"))
    for (i, j) in sorted(g.terms):
        if d >= 2 and i + j > d:
            problems.append(("DegreeOverflow", f"monomial x^{i}*y^{j} has degree {i + j} > {d}"))
    if d >= 2:
        if g.deg_y != d:
            problems.append(("BadYDegree", f"g has y-degree {g.deg_y}, expected {d}"))
        elif g.coeff(0, d) != 1:
            problems.append(("NotMonic", f"coefficient of y^{d} in g is {g.coeff(0, d)}, expected 1"))
    for c in list(f.coeffs) + list(g.terms.values()):
        if not _is_exact_coeff(c):
            problems.append(("BadCoefficient", f"coefficient {c!r} is not in Q[t] or a number field"))
            break
    if problems:
        raise RegularityError(problems)
    return SkewProduct(d, f, g)


def monic_conjugation_scalars(f, g):
    """Scalars (alpha, beta) with x -> alpha x, y -> beta y making f and g monic.

    Reported only: alpha^(d-1) = lc(f) and beta^(d-1) = lc_y(g), which in general
    needs (d-1)-th roots outside Q.
    """
    d = f.degree
    return {"alpha_pow": (d - 1, f.lc), "beta_pow": (d - 1, g.coeff(0, d))}


def specialize(F, t0):
    f = F.f.map_coeffs(lambda c: _specialize_coeff(c, t0))
    g = F.g.map_coeffs(lambda c: _specialize_coeff(c, t0))
    return SkewProduct(F.d, f, g)


@dataclass(frozen=True, eq=False)
class MarkedPair:
    F: SkewProduct
    a: UPoly
    b: UPoly

    @property
    def k3(self):
        return self.a.degree

    @property
    def l2(self):
        return self.b.degree

    @property
    def k1(self):
        return self.F.deg_t_g

    @property
    def deg_t_f(self):
        return self.F.deg_t_f

    @property
    def lcm_degrees(self):
        if self.k3 <= 0 or self.l2 <= 0:
            return None
        return lcm(self.l2, self.k3)

    @property
    def m1(self):
        L = self.lcm_degrees
        return None if L is None else L // self.l2

    @property
    def m2(self):
        L = self.lcm_degrees
        return None if L is None else L // self.k3 - L // self.l2

    def shifted(self, n):
        """The pair with P replaced by F^n(P)."""
        if n == 0:
            return self
        rec = iterate(self, n)
        a, b = rec.points[-1]
        return MarkedPair(self.F, _as_t(a), _as_t(b))

    def point_at(self, t0):
        return self.a(t0), self.b(t0)


def _as_t(v):
    return v if isinstance(v, UPoly) else UPoly((v,), "t")


@dataclass
class OrbitRecord:
    points: list
    degrees: list = field(default_factory=list)
    mode: Any = "symbolic"

    def __len__(self):
        return len(self.points)


def _predict_degrees(F, A, B):
    """Upper bounds for deg_t of F(a, b) given deg a = A, deg b = B."""
    A2 = max(deg_t(c) + i * max(A, 0) for i, c in enumerate(F.f.coeffs) if c != 0)
    B2 = max(deg_t(c) + i * max(A, 0) + j * max(B, 0) for (i, j), c in F.g.terms.items())
    return A2, B2


def iterate(pair, n, mode="symbolic", budget=None):
    """Orbit P, F(P), ..., F^n(P).

    ``mode`` is "symbolic" (exact over Q[t]) or a parameter value t0 (exact
    over Q or a number field).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if isinstance(mode, str) and mode == "symbolic":
        F = pair.F
        point = (pair.a, pair.b)
        budget = degree_budget() if budget is None else budget
        A, B = pair.a.degree, pair.b.degree
        used = (A + 1) + (B + 1)
        for _ in range(n):
            A, B = _predict_degrees(F, A, B)
            used += A + B + 2
        if used > budget:
            raise DegreeBudgetExceeded(
                f"orbit of length {n + 1} needs about {used} coefficients, budget {budget}")
        pts = [point]
        degs = [(_deg(point[0]), _deg(point[1]))]
        for _ in range(n):
            point = tuple(_as_t(v) for v in F(point))
            pts.append(point)
            degs.append((_deg(point[0]), _deg(point[1])))
        return OrbitRecord(pts, degs, "symbolic")
    t0 = mode
    F = specialize(pair.F, t0)
    point = pair.point_at(t0)
    pts = [point]
    for _ in range(n):
        point = F(point)
        pts.append(point)
    return OrbitRecord(pts, [], ("specialized", t0))


def _deg(v):
    return v.degree if isinstance(v, UPoly) else (0 if v != 0 else -1)


def restrict_infinity(F):
    """z -> g_d(1, z): the induced map on the line at infinity (f is monic)."""
    d = F.d
    cs = [F.g.coeff(d - j, j) for j in range(d + 1)]
    return UPoly(cs, "z")


# -- critical components ------------------------------------------------------

@dataclass
class CriticalComponents:
    factors: list          # irreducible MPoly factors (primitive, sign-normalized)
    unfactored: list       # pieces the limited factorizer could not split
    determinant: MPoly

    @property
    def complete(self):
        return not self.unfactored


def _content_t(p):
    """gcd in Q[t] of all coefficients of an MPoly over Q[t]."""
    from .algebra.upoly import upoly_gcd
    g = None
    for c in p.terms.values():
        c = _as_t(c)
        g = c if g is None else upoly_gcd(g, c)
    return g


def _vars_of(p):
    used = set()
    for (i, j), c in p.terms.items():
        if i:
            used.add("x")
        if j:
            used.add("y")
        if deg_t(c) > 0:
            used.add("t")
    return used


def _normalize(p):
    """Primitive integer form with positive leading term (printing order)."""
    from .algebra.printing import flatten
    terms = flatten(p)
    den = 1
    from math import gcd as igcd
    num = 0
    for c in terms.values():
        den = lcm(den, Fraction(c).denominator)
    for c in terms.values():
        num = igcd(num, int(Fraction(c) * den))
    scale = Fraction(den, num) if num else 1
    q = p.map_coeffs(lambda c: c * scale)
    lead = q.sorted_terms()[0][1]
    lead_c = lead.lc if isinstance(lead, UPoly) else lead
    return -q if lead_c < 0 else q


def _univariate_factors(p, var):
    """Factor an MPoly that depends on a single variable, over Q (sympy)."""
    import sympy
    s = sympy.Symbol(var)
    if var == "t":
        up = _as_t(p.coeff(0, 0))
    elif var == "x":
        up = UPoly([_scalar(p.coeff(i, 0)) for i in range(p.deg_x + 1)], "x")
    else:
        up = UPoly([_scalar(p.coeff(0, j)) for j in range(p.deg_y + 1)], "y")
    poly = sympy.Poly([sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
                       for c in reversed(up.coeffs)], s)
    out = []
    for fac, _ in poly.factor_list()[1]:
        cs = [Fraction(int(sympy.Rational(v).p), int(sympy.Rational(v).q))
              for v in reversed(fac.all_coeffs())]
        u = UPoly(cs, var)
        if var == "t":
            out.append(MPoly({(0, 0): u}))
        elif var == "x":
            out.append(MPoly({(i, 0): c for i, c in enumerate(u.coeffs)}))
        else:
            out.append(MPoly({(0, j): c for j, c in enumerate(u.coeffs)}))
    return out


def _scalar(c):
    if isinstance(c, UPoly):
        return c.const
    return c


def _split(p, factors, unfactored):
    if p.is_constant():
        return
    content = _content_t(p)
    if content is not None and content.degree > 0:
        factors.extend(_univariate_factors(MPoly({(0, 0): content}), "t"))
        p = p.map_coeffs(lambda c: _as_t(c).exact_div(content))
    ex = min(i for i, _ in p.terms)
    ey = min(j for _, j in p.terms)
    if ex:
        factors.append(MPoly.x())
    if ey:
        factors.append(MPoly.y())
    if ex or ey:
        p = MPoly({(i - ex, j - ey): c for (i, j), c in p.terms.items()})
    if p.is_constant():
        return
    used = _vars_of(p)
    if len(used) == 1:
        factors.extend(_univariate_factors(p, used.pop()))
    else:
        unfactored.append(_normalize(p))


def critical_components(F):
    fx = MPoly.from_upoly(F.f.derivative())
    gy = F.g.diff_y()
    factors, unfactored = [], []
    _split(fx, factors, unfactored)
    _split(gy, factors, unfactored)
    seen = []
    for fac in factors:
        fac = _normalize(fac)
        if fac not in seen:
            seen.append(fac)
    return CriticalComponents(seen, unfactored, fx * gy)


# -- degree hypotheses ----------------------------------------------------------

@dataclass
class DegreeHypothesisReport:
    cond1: bool
    cond1_lhs: int
    cond1_rhs: int
    cond2: bool
    cond2_lhs: int
    cond2_rhs: Any
    m1: Any
    m2: Any

    def to_dict(self):
        return {
            "condition_1": {"holds": self.cond1, "deg_a": self.cond1_lhs, "deg_t_f": self.cond1_rhs},
            "condition_2": {"holds": self.cond2, "deg_b": self.cond2_lhs, "bound": self.cond2_rhs},
            "m1": self.m1,
            "m2": self.m2,
        }


def degree_hypothesis_check(pair):
    """(1) deg a > deg_t f;  (2) deg b > 0 and deg b >= (m1 + 1)(deg a + deg_t g)."""
    k3, l2 = pair.k3, pair.l2
    c1 = k3 > pair.deg_t_f
    m1 = pair.m1
    if m1 is None:
        bound = None
        c2 = False
    else:
        bound = (m1 + 1) * (k3 + pair.k1)
        c2 = l2 > 0 and l2 >= bound
    return DegreeHypothesisReport(c1, k3, pair.deg_t_f, c2, l2, bound, m1, pair.m2)
