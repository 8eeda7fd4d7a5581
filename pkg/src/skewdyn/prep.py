"""Preperiodicity: exact certificates at specialized parameters, prep-parameter
polynomials over Q[t], root classification and intersections."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Union

from .algebra.numberfield import NumberField, NumberFieldElem
from .algebra.roots import complex_roots, cyclotomic_detect, cyclotomic_polynomial, rational_roots
from .algebra.upoly import UPoly, is_rational, upoly_gcd
from .errors import NonConvergence
from .skew import iterate, specialize

DEFAULT_N = 4
DEFAULT_MAX_ITER = 2000
BIT_CAP = 1 << 18  # orbit points larger than this many bits stop the search


# -- certificates ---------------------------------------------------------------

@dataclass(frozen=True)
class Cycle:
    m: int
    n: int
    kind = "Cycle"

    def to_dict(self):
        return {"verdict": "Cycle", "m": self.m, "n": self.n}


@dataclass(frozen=True)
class Escape:
    step: int
    witness: Fraction  # rational lower bound for the max norm at `step`
    radius: Fraction = None
    kind = "Escape"

    def to_dict(self):
        return {"verdict": "Escape", "step": self.step, "witness": float(self.witness),
                "radius": None if self.radius is None else str(self.radius)}


@dataclass(frozen=True)
class Inconclusive:
    budget: int
    reason: str = "iteration budget"
    kind = "Inconclusive"

    def to_dict(self):
        return {"verdict": "Inconclusive", "budget": self.budget, "reason": self.reason}


PrepCertificate = Union[Cycle, Escape, Inconclusive]


# -- escape radius ----------------------------------------------------------------

def _scalar(c):
    if isinstance(c, UPoly):
        if not c.is_constant():
            raise TypeError("escape radius needs a specialized map")
        return c.const
    return c


def abs_upper(c):
    """Rational upper bound for |c| (exact for rationals)."""
    c = _scalar(c)
    if is_rational(c):
        return abs(Fraction(c))
    if isinstance(c, NumberFieldElem):
        if c.is_rational():
            return abs(Fraction(c.coeffs[0]))
        return c.abs_bounds()[1]
    return Fraction(abs(complex(c)))


def abs_lower(c):
    c = _scalar(c)
    if is_rational(c):
        return abs(Fraction(c))
    if isinstance(c, NumberFieldElem):
        if c.is_rational():
            return abs(Fraction(c.coeffs[0]))
        return c.abs_bounds()[0]
    return Fraction(abs(complex(c)))


def _iroot_ceil(n, d):
    """Smallest integer m >= 0 with m**d >= n."""
    if n <= 0:
        return 0
    m = int(round(float(n) ** (1.0 / d))) if n.bit_length() < 1000 else 1 << (n.bit_length() // d + 1)
    while m ** d < n:
        m += 1
    while m > 0 and (m - 1) ** d >= n:
        m -= 1
    return m


def _root_upper(r, d, bits=24):
    """Rational q >= r**(1/d)."""
    scale = 1 << (bits * d)
    n = -((-r.numerator * scale) // r.denominator)
    return Fraction(_iroot_ceil(n, d), 1 << bits)


def _radius_data(F):
    d = F.d
    sf = sum((abs_upper(c) for c in F.f.coeffs[:-1]), Fraction(0))
    gterms = [(i, j, abs_upper(c)) for (i, j), c in F.g.terms.items() if (i, j) != (0, d)]
    return d, sf, gterms


def _radius_valid(r, d, sf, gterms):
    # |x| = max-norm case needs r >= 1 + S_f; the |y| case needs h(r) >= 0 with
    # |x| <= min(r, max(1, S_f + r^(1/d))), and h(r)/r^d is increasing in r.
    if r < 1 + sf:
        return False
    X = min(r, max(Fraction(1), sf + _root_upper(r, d)))
    h = r ** d - r
    for i, j, c in gterms:
        h -= c * X ** i * r ** j
    return h >= 0


def escape_radius(F):
    """Rational R such that max(|x|,|y|) > R forces the max norm to increase
    strictly under F and tend to infinity.

    Starts from 1 + (sum of |non-leading coefficients|) and enlarges it when
    that value fails the rigorous check (it can, e.g. for (x^2, y^2 + xy)).
    """
    d, sf, gterms = _radius_data(F)
    r = 1 + sf + sum((c for _, _, c in gterms), Fraction(0))
    if _radius_valid(r, d, sf, gterms):
        return r
    lo, hi = r, 2 * r
    while not _radius_valid(hi, d, sf, gterms):
        lo, hi = hi, 2 * hi
    for _ in range(12):
        mid = (lo + hi) / 2
        if _radius_valid(mid, d, sf, gterms):
            hi = mid
        else:
            lo = mid
    return hi


def naive_radius(F):
    d, sf, gterms = _radius_data(F)
    return 1 + sf + sum((c for _, _, c in gterms), Fraction(0))


def max_norm_lower(point):
    return max(abs_lower(v) for v in point)


def _bits(v):
    if type(v) is int:
        return v.bit_length()
    if type(v) is Fraction:
        return v.numerator.bit_length() + v.denominator.bit_length()
    if isinstance(v, NumberFieldElem):
        return v.bit_size()
    return 0


# -- detection ---------------------------------------------------------------------

def detect_preperiodic(F, P, max_iter=DEFAULT_MAX_ITER, radius=None, bit_cap=BIT_CAP):
    """Exact orbit search on a specialized map.

    Returns Cycle(m, n) with the minimal n such that F^n(P) = F^m(P) for some
    m < n, Escape when the norm passes the escape radius, else Inconclusive.
    """
    R = escape_radius(F) if radius is None else radius
    seen = {}
    point = tuple(P)
    for n in range(max_iter + 1):
        if point in seen:
            return Cycle(seen[point], n)
        seen[point] = n
        lower = max_norm_lower(point)
        if lower > R:
            return Escape(n, lower, R)
        if sum(_bits(v) for v in point) > bit_cap:
            return Inconclusive(max_iter, f"bit-size cap reached at step {n}")
        if n < max_iter:
            point = tuple(F(point))
    return Inconclusive(max_iter)


def certificate_holds(F, P, cert):
    """Re-check a certificate by exact recomputation."""
    if isinstance(cert, Cycle):
        pts = [tuple(P)]
        for _ in range(cert.n):
            pts.append(tuple(F(pts[-1])))
        return pts[cert.n] == pts[cert.m]
    if isinstance(cert, Escape):
        pt = tuple(P)
        for _ in range(cert.step):
            pt = tuple(F(pt))
        return max_norm_lower(pt) > escape_radius(F)
    return True


# -- prep polynomials ---------------------------------------------------------------

class _ZeroIdentity:
    """Both coordinates of F^n(P) - F^m(P) vanish identically in t."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "ZeroIdentity"

    def __bool__(self):
        return False


ZeroIdentity = _ZeroIdentity()


def _gcd_convention(da, db):
    if da.is_zero() and db.is_zero():
        return ZeroIdentity
    if da.is_zero():
        return db.monic()
    if db.is_zero():
        return da.monic()
    return upoly_gcd(da, db)


def _as_t(v):
    return v if isinstance(v, UPoly) else UPoly((v,), "t")


def prep_polynomials(pair, m, n, budget=None):
    """Monic gcd of the coordinates of F^n(P) - F^m(P) in Q[t] (or ZeroIdentity)."""
    if not 0 <= m < n:
        raise ValueError("need 0 <= m < n")
    rec = iterate(pair, n, budget=budget)
    return _pattern_poly(rec.points, m, n)


def _pattern_poly(points, m, n):
    (am, bm), (an, bn) = points[m], points[n]
    return _gcd_convention(_as_t(an) - _as_t(am), _as_t(bn) - _as_t(bm))


def prep_polynomial_table(pair, N, budget=None):
    """{(m, n): prep polynomial} for all 0 <= m < n <= N, from one orbit."""
    if N <= 0:
        return {}
    rec = iterate(pair, N, budget=budget)
    return {(m, n): _pattern_poly(rec.points, m, n) for n in range(1, N + 1) for m in range(n)}


def _lcm_radical(polys):
    acc = UPoly((1,), "t")
    for p in polys:
        if p is ZeroIdentity or p.degree <= 0:
            continue
        s = p.squarefree()
        g = upoly_gcd(acc, s)
        acc = (acc * s).exact_div(g).monic()
    return acc


# -- root sets -----------------------------------------------------------------------

@dataclass
class RootEntry:
    kind: str                 # "rational" | "cyclotomic" | "numeric"
    value: Any                # Fraction, cyclotomic index n, or complex
    verified: bool = False
    certificates: list = field(default_factory=list)

    def to_dict(self):
        from .algebra.printing import format_poly
        out = {"kind": self.kind, "verified": self.verified,
               "certificates": [c.to_dict() for c in self.certificates]}
        if self.kind == "rational":
            out["value"] = str(self.value)
        elif self.kind == "cyclotomic":
            out["kind"] = f"cyclotomic({self.value})"
            out["order"] = self.value
            out["value"] = format_poly(cyclotomic_polynomial(self.value))
        else:
            out["value"] = [round(self.value.real, 12), round(self.value.imag, 12)]
        return out


@dataclass
class PrepRootSet:
    radical: UPoly
    entries: list
    patterns: dict = field(default_factory=dict)
    generic: Any = None       # (m, n) when P is preperiodic for every t

    @property
    def rational(self):
        return sorted(e.value for e in self.entries if e.kind == "rational")

    @property
    def cyclotomic(self):
        return sorted(e.value for e in self.entries if e.kind == "cyclotomic")

    @property
    def numeric(self):
        return [e.value for e in self.entries if e.kind == "numeric"]

    def to_dict(self):
        from .algebra.printing import format_poly
        return {
            "radical": format_poly(self.radical),
            "roots": [e.to_dict() for e in self.entries],
            "generic_preperiodic": list(self.generic) if self.generic else None,
        }


def _field_point(n):
    """The parameter value zeta_n as an exact element."""
    if n == 1:
        return Fraction(1)
    if n == 2:
        return Fraction(-1)
    return NumberField.cyclotomic(n).gen


def _verify(pairs, t0, max_iter):
    certs = []
    for pair in pairs:
        F0 = specialize(pair.F, t0)
        certs.append(detect_preperiodic(F0, pair.point_at(t0), max_iter))
    return certs


def classify_roots(poly, pairs, max_iter=DEFAULT_MAX_ITER, threads=None):
    """Split the roots of a squarefree poly into exact rational/cyclotomic parts
    (verified against every pair) and numeric leftovers."""
    entries = []
    if poly.degree <= 0:
        return entries
    rest = poly
    rats = rational_roots(rest)
    for r in rats:
        rest = rest.exact_div(UPoly((-r, 1), "t"))
    cyc = cyclotomic_detect(rest) if rest.degree > 0 else []
    for n, mult in cyc:
        for _ in range(mult):
            rest = rest.exact_div(cyclotomic_polynomial(n))
    jobs = [("rational", r, r) for r in sorted(rats)] + \
           [("cyclotomic", n, _field_point(n)) for n, _ in cyc]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        results = list(ex.map(lambda job: _verify(pairs, job[2], max_iter), jobs))
    for (kind, val, _), certs in zip(jobs, results):
        ok = all(isinstance(c, Cycle) for c in certs)
        entries.append(RootEntry(kind, val, ok, certs))
    if rest.degree > 0:
        try:
            nums = complex_roots(rest.squarefree())
        except NonConvergence:
            nums = complex_roots(rest.squarefree(), dps=60)
        entries.extend(RootEntry("numeric", z, False) for z in nums)
    return entries


def prep_parameter_set(pair, N=DEFAULT_N, max_iter=DEFAULT_MAX_ITER, threads=None, budget=None):
    table = prep_polynomial_table(pair, N, budget)
    generic = next((mn for mn, p in sorted(table.items(), key=lambda kv: kv[0][::-1])
                    if p is ZeroIdentity), None)
    rad = _lcm_radical(table.values())
    entries = classify_roots(rad, [pair], max_iter, threads)
    return PrepRootSet(rad, entries, table, generic)


def prep_intersection(pairA, pairB, N=DEFAULT_N, max_iter=DEFAULT_MAX_ITER, threads=None, budget=None):
    if pairA.F != pairB.F:
        raise ValueError("both marked points must use the same family")
    ta = prep_polynomial_table(pairA, N, budget)
    tb = prep_polynomial_table(pairB, N, budget)
    ra, rb = _lcm_radical(ta.values()), _lcm_radical(tb.values())
    ga = next((mn for mn, p in ta.items() if p is ZeroIdentity), None)
    gb = next((mn for mn, p in tb.items() if p is ZeroIdentity), None)
    if ga and gb:
        common = UPoly((), "t")
    elif ga:
        common = rb
    elif gb:
        common = ra
    else:
        common = upoly_gcd(ra, rb) if ra.degree > 0 and rb.degree > 0 else UPoly((1,), "t")
    if common.is_zero():
        return PrepRootSet(common, [], {}, (ga, gb))
    entries = classify_roots(common, [pairA, pairB], max_iter, threads)
    return PrepRootSet(common, entries, {"A": ta, "B": tb})
