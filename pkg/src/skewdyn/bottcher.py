"""Vertical Böttcher series of a skew product and the orbit relations built from them.

Write Phi_x(y) = y + c_0(x) + sum_{i>=1} c_i(x) y^{-i}.  The functional equation
Phi_{f(x)}(g(x, y)) = Phi_x(y)^d is solved one y-exponent at a time: the
coefficient of y^{d-1-n} on the right is d*c_n plus terms in c_0..c_{n-1},
while the left side only involves c_0..c_{n-1}.  For centered g (no y^{d-1}
term) c_0 vanishes.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .algebra.mpoly import MPoly
from .algebra.numberfield import NumberFieldElem
from .algebra.roots import default_nmax, euler_phi
from .algebra.series import LaurentSeries
from .algebra.upoly import UPoly, is_rational, poly_compose
from .errors import HypothesisViolated, NotRootOfUnity, RelationFails
from .skew import MarkedPair, SkewProduct, deg_t, degree_hypothesis_check, iterate


def _simplify(c):
    # constant polynomials in x collapse to their coefficient
    if isinstance(c, UPoly) and c.var == "x" and c.is_constant():
        return _simplify(c.const)
    return c


def _compose_with(f):
    def comp(c):
        if isinstance(c, UPoly) and c.var == "x":
            return _simplify(poly_compose(c, f))
        return c
    return comp


def _identity(c):
    return c


def _phi_series(c0, cs, floor):
    """y + c0 + sum c_i y^{-i}, known down to y^floor."""
    terms = {1: 1, 0: c0}
    for i, c in enumerate(cs, start=1):
        terms[-i] = c
    return LaurentSeries(terms, floor)


class _Equation:
    """Both sides of Phi_{f(x)}(g) = Phi_x(y)^d for a fixed g-series."""

    def __init__(self, d, G, comp, M):
        self.d = d
        self.G = G
        self.comp = comp
        self.floor = d - 1 - M
        self._ginv_powers = [LaurentSeries({0: 1})]
        # g^{-i} only matters while its top -i*d stays inside the window
        if -d >= self.floor:
            ginv = G.inverse_monic(self.floor)
            while -d * len(self._ginv_powers) >= self.floor:
                nxt = (self._ginv_powers[-1] * ginv).truncate(self.floor)
                self._ginv_powers.append(nxt)

    def lhs(self, c0, cs, floor):
        acc = self.G + LaurentSeries({0: self.comp(c0)})
        for i, c in enumerate(cs, start=1):
            if i >= len(self._ginv_powers) or c == 0:
                continue
            acc = acc + self._ginv_powers[i].truncate(floor).scale(self.comp(c))
        return acc.truncate(floor)

    def rhs(self, c0, cs, floor):
        return (_phi_series(c0, cs, -len(cs)) ** self.d).truncate(floor)


def _solve(d, G, comp, M):
    c0 = _simplify(G.coeff(d - 1) * Fraction(1, d)) if d - 1 in G.coeffs else 0
    eq = _Equation(d, G, comp, M)
    cs = []
    for n in range(1, M + 1):
        e = d - 1 - n
        trial = cs + [0]
        diff = eq.lhs(c0, cs, e).coeff(e) - eq.rhs(c0, trial, e).coeff(e)
        cs.append(_simplify(diff * Fraction(1, d)))
    return c0, cs


def _g_series(g):
    rows = g.y_coeffs()
    return LaurentSeries({j: _simplify(c) for j, c in rows.items()})


def _f_series(f):
    return LaurentSeries({j: _simplify(c) for j, c in enumerate(f.coeffs)})


@dataclass(frozen=True)
class VerticalBottcher:
    F: SkewProduct
    M: int
    c0: Any
    coeffs: list

    def coeff(self, i):
        if i == 0:
            return self.c0
        return self.coeffs[i - 1]

    def at(self, i, x):
        """c_i evaluated at x (a scalar or a UPoly in t)."""
        c = self.coeff(i)
        return c(x) if isinstance(c, UPoly) and c.var == "x" else c

    def residual(self):
        """LHS - RHS of the functional equation through y^{d-1-M}."""
        return functional_residual(self.F.d, _g_series(self.F.g), _compose_with(self.F.f),
                                   self.c0, self.coeffs)

    def to_dict(self):
        from .algebra.printing import format_scalar
        return {"order": self.M, "c0": format_scalar(self.c0),
                "coefficients": [format_scalar(c) for c in self.coeffs]}


def functional_residual(d, G, comp, c0, cs):
    M = len(cs)
    eq = _Equation(d, G, comp, M)
    fl = d - 1 - M
    return eq.lhs(c0, cs, fl) - eq.rhs(c0, cs, fl)


def vertical_bottcher_coeffs(F, M):
    if M < 1:
        raise ValueError("order M must be >= 1")
    c0, cs = _solve(F.d, _g_series(F.g), _compose_with(F.f), M)
    return VerticalBottcher(F, M, c0, cs)


def onedim_bottcher_coeffs(f, M):
    """[c_0, c_1, ..., c_M] with phi(f(z)) = phi(z)^d, phi(z) = z + c_0 + sum c_i z^{-i}."""
    if M < 1:
        raise ValueError("order M must be >= 1")
    if f.degree < 2 or f.lc != 1:
        raise ValueError("f must be monic of degree >= 2")
    c0, cs = _solve(f.degree, _f_series(f), _identity, M)
    return [c0] + cs


def fixed_point_oracle(d, G, comp, M, max_rounds=None):
    """Independent route: iterate Phi <- (Phi_{f}(g))^{1/d} on truncated series.

    Each round fixes at least one more coefficient, so M + 2 rounds suffice.
    """
    floor = d - 1 - M
    eq = _Equation(d, G, comp, M)
    cs = [0] * (M + 1)
    rounds = max_rounds or M + 3
    for _ in range(rounds):
        S = eq.lhs(cs[0], cs[1:], floor)
        root = S.nth_root_monic(d, -M)
        new = [_simplify(root.coeff(-i)) for i in range(0, M + 1)]
        if new == cs:
            break
        cs = new
    return cs


def vertical_oracle(F, M):
    return fixed_point_oracle(F.d, _g_series(F.g), _compose_with(F.f), M)


def onedim_oracle(f, M):
    return fixed_point_oracle(f.degree, _f_series(f), _identity, M)


# -- degree bounds -----------------------------------------------------------------

@dataclass
class DegreeBoundRow:
    i: int
    actual: int
    bound: int

    @property
    def ok(self):
        return self.actual <= self.bound


@dataclass
class DegreeBoundReport:
    rows: list
    hypothesis_ok: bool
    advisory: Optional[str] = None

    @property
    def violations(self):
        return [r for r in self.rows if not r.ok]

    @property
    def all_pass(self):
        return not self.violations

    def to_dict(self):
        return {
            "hypothesis_ok": self.hypothesis_ok,
            "advisory": self.advisory,
            "all_pass": self.all_pass,
            "rows": [{"i": r.i, "actual": r.actual, "bound": r.bound, "ok": r.ok} for r in self.rows],
        }


def degree_bound_check(pair, M, strict=False):
    """deg_t c_i(a(t)) against k3*(i+1) + i*k1 for i = 1..M.

    A failing condition deg a > deg_t f, or a non-centered g, is reported as
    advisory; with ``strict`` it raises HypothesisViolated instead.
    """
    k3, k1 = pair.k3, pair.k1
    notes = []
    if k3 <= pair.deg_t_f:
        notes.append(f"deg a = {k3} is not larger than deg_t f = {pair.deg_t_f}")
    d = pair.F.d
    if any(j == d - 1 for j in pair.F.g.y_coeffs()):
        # the bound is stated for Phi_x(y) = y + O(1/y), i.e. c_0 = 0
        notes.append(f"g has a y^{d - 1} term, so c_0 != 0")
    advisory = "; ".join(notes) or None
    if notes and strict:
        raise HypothesisViolated(advisory)
    vb = vertical_bottcher_coeffs(pair.F, M)
    rows = []
    for i in range(1, M + 1):
        val = vb.at(i, pair.a)
        rows.append(DegreeBoundRow(i, deg_t(val), k3 * (i + 1) + i * k1))
    return DegreeBoundReport(rows, not notes, advisory)


# -- polynomial parts --------------------------------------------------------------

@dataclass
class TailTerm:
    exponent: int
    deg_t: Optional[int]  # None when the coefficient vanishes at a(t)

    @property
    def negative(self):
        return self.deg_t is None or self.deg_t < 0


@dataclass
class PolynomialPart:
    P: MPoly
    tail: list
    hypothesis_ok: bool

    @property
    def tail_negative(self):
        return all(t.negative for t in self.tail)

    def to_dict(self):
        return {
            "P": str(self.P),
            "hypothesis_ok": self.hypothesis_ok,
            "tail_negative": self.tail_negative,
            "tail": [{"exponent": t.exponent, "deg_t": t.deg_t} for t in self.tail],
        }


def _growth_hypothesis(pair):
    m1 = pair.m1
    if m1 is None:
        return False, "m1 undefined: deg a and deg b must both be positive"
    need = (m1 + 1) * (pair.k3 + pair.k1)
    if pair.l2 < need:
        return False, f"deg b = {pair.l2} < (m1+1)(k3+k1) = {need}"
    return True, None


def polynomial_part(pair, tail_order=None, strict=True):
    """P with (b + sum c_i(a) b^{-i})^{m1} = P(a, b) + (negative t-degree).

    The tail report covers the y-exponents -1 .. -tail_order of the expansion
    (default max(4, d)).
    """
    ok, why = _growth_hypothesis(pair)
    if not ok and strict:
        raise HypothesisViolated(why)
    m1 = pair.m1 or 1
    tail_order = tail_order or max(4, pair.F.d)
    M = m1 - 1 + tail_order
    vb = vertical_bottcher_coeffs(pair.F, M)
    S = _phi_series(vb.c0, vb.coeffs, -M) ** m1
    P = MPoly()
    for e in range(0, m1 + 1):
        c = S.coeff(e)
        if c != 0:
            P = P + MPoly.from_upoly(c) * MPoly({(0, e): 1})
    tail = []
    for e in range(-1, m1 - 1 - M - 1, -1):
        c = S.coeff(e)
        val = c(pair.a) if isinstance(c, UPoly) and c.var == "x" else c
        dv = deg_t(val)
        tail.append(TailTerm(e, None if dv < 0 else dv + e * pair.l2))
    return PolynomialPart(P, tail, ok)


def onedim_polynomial_part(f, power):
    """Polynomial part in x of phi(x)^power for the 1-D Böttcher series of f."""
    cs = onedim_bottcher_coeffs(f, max(power, 1))
    S = _phi_series(cs[0], cs[1:], -max(power, 1)) ** power
    out = [S.coeff(e) for e in range(0, power + 1)]
    return UPoly(out, "x")


# -- orbit relations ------------------------------------------------------------------

def root_of_unity_order(xi):
    """Multiplicative order of an exact root of unity, or None."""
    if is_rational(xi):
        return {1: 1, -1: 2}.get(Fraction(xi))
    if isinstance(xi, NumberFieldElem):
        if xi.is_rational():
            return root_of_unity_order(xi.rational_value())
        n_deg = xi.field.degree
        for n in range(1, default_nmax(n_deg) + 1):
            if euler_phi(n) <= n_deg and xi ** n == 1:
                return n
        return None
    raise TypeError(f"cannot test {type(xi).__name__} for roots of unity")


@dataclass
class OrbitRelationCandidate:
    m1: int
    m2: int
    P: MPoly
    Q: UPoly
    xi: complex
    xi_exact: Any = None
    xi_order: Optional[int] = None
    relation: Optional[MPoly] = None
    verified: list = field(default_factory=list)

    @property
    def xi_cyclotomic(self):
        return self.xi_order

    def to_dict(self):
        return {
            "m1": self.m1, "m2": self.m2,
            "P": str(self.P), "Q": str(self.Q),
            "xi": [self.xi.real, self.xi.imag],
            "xi_exact": None if self.xi_exact is None else str(self.xi_exact),
            "xi_order": self.xi_order,
            "relation": None if self.relation is None else str(self.relation),
            "verified_indices": self.verified,
        }


def orbit_relation_candidate(pair, iterate_index=0, M=None, count=3, strict=True):
    """Build xi*P(x, y) = Q(x) from the Böttcher data and test it on the orbit.

    Here P is the polynomial part of Phi_x(y)^{m1} and Q that of phi(x)^{m1+m2};
    the exponents balance deg b^{m1} = deg a^{m1+m2}.
    """
    sp = pair.shifted(iterate_index)
    rep = degree_hypothesis_check(sp)
    if strict and not (rep.cond1 and rep.cond2):
        raise HypothesisViolated(f"degree hypotheses fail: {rep.to_dict()}")
    if sp.m1 is None:
        raise HypothesisViolated("m1 undefined: deg a and deg b must both be positive")
    m1, m2 = sp.m1, sp.m2
    pp = polynomial_part(sp, tail_order=M, strict=False)
    Q = onedim_polynomial_part(sp.F.f, m1 + m2)
    xi = Fraction(1) * sp.b.lc ** m1 / sp.a.lc ** (m1 + m2)
    order = root_of_unity_order(xi)
    if order is None:
        raise NotRootOfUnity(f"xi = {xi} is not a root of unity")
    d = sp.F.d
    orbit = iterate(sp, count - 1)
    verified = []
    for n, (an, bn) in enumerate(orbit.points):
        xin = xi ** (d ** n % order)
        res = pp.P.evaluate(an, bn) - Q(an) * xin
        if res != 0:
            raise RelationFails(f"xi'*P - Q does not vanish at orbit index {iterate_index + n}",
                                index=iterate_index + n)
        verified.append(iterate_index + n)
    relation = pp.P - MPoly.from_upoly(Q) * xi
    return OrbitRelationCandidate(m1, m2, pp.P, Q, complex(xi), xi, order, relation, verified)
