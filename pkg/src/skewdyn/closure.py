"""Polynomial relations along a symbolic orbit and invariance of curves.

A relation of bidegree bound (Dxy, Dt) is a polynomial
Q = sum u_{ijk} t^k x^i y^j with i + j <= Dxy and k <= Dt such that
Q(a_n(t), b_n(t)) = 0 in Q[t] for every orbit point used.  Each such point
gives one linear condition per power of t, and the relations form the
nullspace of that exact system.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra.linalg import nullspace
from .algebra.mpoly import MPoly
from .algebra.upoly import UPoly, is_rational
from .errors import DegreeBudgetExceeded, NotMonicizable
from .prep import detect_preperiodic
from .skew import deg_t, iterate, specialize

HOLDOUT = 2


@dataclass(frozen=True)
class ClosureProblem:
    pair: object
    Dxy: int
    Dt: int = 0
    nPoints: int = 3
    stride: int = 1  # use orbit indices offset, offset + stride, ...
    offset: int = 0

    def monomials(self):
        """(i, j, k) columns, y-degree first so echelon pivots favour y."""
        out = [(i, j, k) for j in range(self.Dxy + 1) for i in range(self.Dxy + 1 - j)
               for k in range(self.Dt + 1)]
        return sorted(out, key=lambda m: (-m[1], -m[0], -m[2]))

    def indices(self, count):
        return [self.offset + self.stride * r for r in range(count)]


@dataclass
class RelationBasis:
    relations: list
    problem: ClosureProblem
    used: list
    held_out: list = field(default_factory=list)
    sufficient: bool = True
    matrix: Optional[list] = None
    rejected: list = field(default_factory=list)  # nullspace vectors failing a held-out point

    @property
    def empty(self):
        return not self.relations

    def to_dict(self):
        cols = self.problem.monomials()
        return {
            "relations": [str(q) for q in self.relations],
            "rejected": [str(q) for q in self.rejected],
            "used_indices": self.used,
            "held_out_indices": self.held_out,
            "sufficient": self.sufficient,
            "columns": [list(c) for c in cols],
            "matrix": self.matrix,
        }


def _as_poly(v):
    return v if isinstance(v, UPoly) else UPoly((v,), "t")


def _point_rows(point, cols, Dxy):
    a, b = (_as_poly(v) for v in point)
    apow = [UPoly((1,), "t")]
    bpow = [UPoly((1,), "t")]
    for _ in range(Dxy):
        apow.append(apow[-1] * a)
        bpow.append(bpow[-1] * b)
    cache = {}
    rows = {}
    for col, (i, j, k) in enumerate(cols):
        if (i, j) not in cache:
            cache[(i, j)] = apow[i] * bpow[j]
        p = cache[(i, j)]
        for e, c in enumerate(p.coeffs):
            if c != 0:
                rows.setdefault(e + k, {})[col] = c
    return [rows[e] for e in sorted(rows)]


def _relation_from_vector(vec, cols):
    by_ij = {}
    for col, c in vec.items():
        i, j, k = cols[col]
        by_ij.setdefault((i, j), {})[k] = c
    terms = {}
    for ij, ks in by_ij.items():
        cs = [0] * (max(ks) + 1)
        for k, c in ks.items():
            cs[k] = c
        p = UPoly(cs, "t")
        terms[ij] = p.const if p.is_constant() else p
    return MPoly(terms)


def _orbit_points(pair, last, budget):
    return iterate(pair, last, budget=budget).points


def find_relation(prob, budget=None, threads=None, keep_matrix=False):
    """Exact nullspace of the vanishing conditions on nPoints orbit points.

    Every returned relation is re-checked on up to two further orbit points;
    candidates failing that check are moved to ``rejected``.
    """
    used = prob.indices(prob.nPoints)
    extra = prob.indices(prob.nPoints + HOLDOUT)[prob.nPoints:]
    pts = None
    held = list(extra)
    while pts is None:
        try:
            last = max(used + held)
            pts = _orbit_points(prob.pair, last, budget)
        except DegreeBudgetExceeded:
            if not held:
                raise
            held = held[:-1]
    cols = prob.monomials()
    pool_n = max(1, threads or 1)
    with ThreadPoolExecutor(max_workers=pool_n) as pool:
        blocks = list(pool.map(lambda n: _point_rows(pts[n], cols, prob.Dxy), used))
    rows = [r for blk in blocks for r in blk]
    basis = nullspace(rows, len(cols))
    relations, rejected = [], []
    for q in (_relation_from_vector(v, cols) for v in basis):
        bad = [n for n in held if q.evaluate(*pts[n]) != 0]
        (rejected if bad else relations).append(q)
    maxdeg = max((prob.Dxy * max(deg_t(pts[n][0]), deg_t(pts[n][1])) + prob.Dt for n in used), default=0)
    sufficient = prob.nPoints * (maxdeg + 1) >= len(cols)
    matrix = None
    if keep_matrix:
        matrix = [{str(c): str(v) for c, v in r.items()} for r in rows]
    return RelationBasis(relations, prob, used, held, sufficient, matrix, rejected)


def relation_sweep(pair, Dxy, Dt=0, nPoints=3, kmax=4, budget=None):
    """find_relation over residue classes n = i (mod k) for k <= kmax."""
    out = []
    for k in range(1, kmax + 1):
        for i in range(k):
            prob = ClosureProblem(pair, Dxy, Dt, nPoints, stride=k, offset=i)
            try:
                basis = find_relation(prob, budget=budget)
                out.append({"k": k, "i": i, "relations": [str(q) for q in basis.relations]})
            except DegreeBudgetExceeded as exc:
                out.append({"k": k, "i": i, "error": str(exc)})
    return out


def proportional(p, q):
    """True when p = c * q for a nonzero rational c."""
    if p.is_zero() or q.is_zero() or set(p.terms) != set(q.terms):
        return False
    ij = min(q.terms)
    pc, qc = _as_poly(p.terms[ij]).lc, _as_poly(q.terms[ij]).lc
    return p * qc == q * pc


# -- invariance ---------------------------------------------------------------------

@dataclass
class InvarianceVerdict:
    invariant: bool
    remainder: MPoly

    @property
    def verdict(self):
        return "Invariant" if self.invariant else "NotInvariant"

    def to_dict(self):
        return {"verdict": self.verdict, "remainder": str(self.remainder)}


def _y_lead(q):
    dy = q.deg_y
    rows = q.y_coeffs()
    return dy, rows[dy]


def reduce_mod_monic_y(p, q):
    """Remainder of p modulo q as polynomials in y; q's y-leading coefficient
    must be a nonzero rational."""
    dq, lead = _y_lead(q)
    if not lead.is_constant():
        raise NotMonicizable(f"y-leading coefficient of {q} is not a unit")
    lc = lead.const
    if isinstance(lc, UPoly):
        if not lc.is_constant():
            raise NotMonicizable(f"y-leading coefficient of {q} depends on t")
        lc = lc.const
    if not is_rational(lc) or lc == 0:
        raise NotMonicizable(f"y-leading coefficient of {q} is not a nonzero rational")
    inv = Fraction(1) / Fraction(lc)
    r = p
    while not r.is_zero() and r.deg_y >= dq:
        dr, lr = _y_lead(r)
        shift = MPoly.from_upoly(lr) * MPoly({(0, dr - dq): inv})
        r = r - shift * q
    return r


def invariance_check(F, Q):
    """Invariant when Q(f(x), g(x, y)) lies in the ideal generated by Q."""
    composed = Q.compose(MPoly.from_upoly(F.f), F.g)
    rem = reduce_mod_monic_y(composed, Q)
    return InvarianceVerdict(rem.is_zero(), rem)


# -- specializations ----------------------------------------------------------------

def verify_specialization_prep(pair, t0s, max_iter=2000):
    rows = []
    for t0 in t0s:
        F0 = specialize(pair.F, t0)
        cert = detect_preperiodic(F0, pair.point_at(t0), max_iter=max_iter)
        rows.append({"t0": str(t0), "certificate": cert})
    return rows
