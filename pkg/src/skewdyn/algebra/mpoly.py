"""Sparse polynomials in (x, y) with coefficients in a scalar ring.

Coefficients are typically UPoly in t, rationals, or NumberFieldElem.
"""

from .upoly import UPoly, ZERO_DEGREE, var_level


def term_key(ij):
    # graded lex, y before x; used descending for printing
    i, j = ij
    return (i + j, j, i)


class MPoly:
    __slots__ = ("terms",)
    _poly_level = 3

    def __init__(self, terms=None):
        clean = {}
        for k, c in (terms or {}).items():
            if c != 0:
                clean[(int(k[0]), int(k[1]))] = c
        self.terms = clean

    @classmethod
    def x(cls):
        return cls({(1, 0): 1})

    @classmethod
    def y(cls):
        return cls({(0, 1): 1})

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def from_upoly(cls, p):
        """Lift a UPoly in x or y (or a scalar) to an MPoly."""
        if isinstance(p, MPoly):
            return p
        if isinstance(p, UPoly) and p.var in ("x", "y"):
            if p.var == "x":
                return cls({(i, 0): c for i, c in enumerate(p.coeffs)})
            return cls({(0, j): c for j, c in enumerate(p.coeffs)})
        return cls({(0, 0): p})

    # -- data ------------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def coeff(self, i, j):
        return self.terms.get((i, j), 0)

    @property
    def total_degree(self):
        return max((i + j for i, j in self.terms), default=ZERO_DEGREE)

    @property
    def deg_x(self):
        return max((i for i, _ in self.terms), default=ZERO_DEGREE)

    @property
    def deg_y(self):
        return max((j for _, j in self.terms), default=ZERO_DEGREE)

    @property
    def deg_t(self):
        """Largest t-degree among the coefficients (0 for scalar coefficients)."""
        best = ZERO_DEGREE
        for c in self.terms.values():
            best = max(best, c.degree if isinstance(c, UPoly) else 0)
        return best

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: term_key(kv[0]), reverse=True)

    def y_coeffs(self):
        """{j: coefficient of y^j as a UPoly in x}."""
        rows = {}
        for (i, j), c in self.terms.items():
            rows.setdefault(j, {})[i] = c
        out = {}
        for j, row in rows.items():
            cs = [0] * (max(row) + 1)
            for i, c in row.items():
                cs[i] = c
            out[j] = UPoly(cs, "x")
        return out

    def homogeneous_part(self, k):
        return MPoly({ij: c for ij, c in self.terms.items() if sum(ij) == k})

    def map_coeffs(self, fn):
        return MPoly({ij: fn(c) for ij, c in self.terms.items()})

    def is_constant(self):
        return all(ij == (0, 0) for ij in self.terms)

    # -- arithmetic ------------------------------------------------------------

    def _wrap(self, other):
        if isinstance(other, MPoly):
            return other
        if isinstance(other, UPoly) and var_level(other.var) > 0:
            return MPoly.from_upoly(other)
        return MPoly({(0, 0): other})

    def __add__(self, other):
        o = self._wrap(other)
        res = dict(self.terms)
        for k, c in o.terms.items():
            res[k] = res[k] + c if k in res else c
        return MPoly(res)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._wrap(other)
        res = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in o.terms.items():
                k = (i1 + i2, j1 + j2)
                p = c1 * c2
                res[k] = res[k] + p if k in res else p
        return MPoly(res)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MPoly({(0, 0): 1})
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            try:
                other = self._wrap(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self.is_constant():
            return hash(self.terms.get((0, 0), 0))
        return hash(tuple(self.sorted_terms()))

    def __bool__(self):
        return bool(self.terms)

    # -- calculus / evaluation ----------------------------------------------------

    def diff_x(self):
        return MPoly({(i - 1, j): i * c for (i, j), c in self.terms.items() if i})

    def diff_y(self):
        return MPoly({(i, j - 1): j * c for (i, j), c in self.terms.items() if j})

    def evaluate(self, xv, yv):
        """Value at (xv, yv); inputs may be scalars, UPoly or MPoly."""
        if not self.terms:
            return 0
        xp = _PowerCache(xv)
        yp = _PowerCache(yv)
        by_j = {}
        for (i, j), c in self.terms.items():
            by_j.setdefault(j, []).append((i, c))
        total = 0
        for j in sorted(by_j):
            acc = 0
            for i, c in sorted(by_j[j]):
                acc = acc + c * xp[i] if i else acc + c
            total = total + (acc * yp[j] if j else acc)
        return total

    __call__ = evaluate

    def compose(self, X, Y):
        return MPoly.from_upoly(self.evaluate(MPoly.from_upoly(X), MPoly.from_upoly(Y)))

    def __repr__(self):
        return f"MPoly({self})"

    def __str__(self):
        from .printing import format_poly
        return format_poly(self)


class _PowerCache:
    def __init__(self, base):
        self.base = base
        self.cache = {1: base}

    def __getitem__(self, n):
        if n not in self.cache:
            self.cache[n] = self.base ** n
        return self.cache[n]
