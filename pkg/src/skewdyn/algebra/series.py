"""Truncated Laurent series in 1/y with coefficients in an exact ring.

A series knows its coefficients exactly for every exponent >= ``floor``;
terms below the floor are unknown and dropped.  ``floor=None`` marks an exact
(finite) series.
"""

from fractions import Fraction


def _fmax(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


class LaurentSeries:
    __slots__ = ("coeffs", "floor")

    def __init__(self, coeffs=None, floor=None):
        self.floor = floor
        self.coeffs = {e: c for e, c in (coeffs or {}).items()
                       if c != 0 and (floor is None or e >= floor)}

    @classmethod
    def tail(cls, cs, order=None):
        """y + sum_{i>=1} cs[i-1] y^{-i}, known through y^{-order}."""
        order = len(cs) if order is None else order
        d = {1: 1}
        for i, c in enumerate(cs, start=1):
            if i <= order:
                d[-i] = c
        return cls(d, -order)

    @property
    def top(self):
        return max(self.coeffs) if self.coeffs else None

    def coeff(self, e):
        if self.floor is not None and e < self.floor:
            raise ValueError(f"y^{e} is below the known window (floor {self.floor})")
        return self.coeffs.get(e, 0)

    def truncate(self, floor):
        return LaurentSeries(self.coeffs, _fmax(self.floor, floor))

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries({0: other})
        res = dict(self.coeffs)
        for e, c in other.coeffs.items():
            res[e] = res[e] + c if e in res else c
        return LaurentSeries(res, _fmax(self.floor, other.floor))

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries({e: -c for e, c in self.coeffs.items()}, self.floor)

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries({0: other})
        return self + (-other)

    def scale(self, c):
        return LaurentSeries({e: v * c for e, v in self.coeffs.items()}, self.floor)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        ta, tb = self.top, other.top
        if ta is None or tb is None:
            fl = _fmax(self.floor, other.floor)
            return LaurentSeries({}, fl)
        fl = None
        if self.floor is not None:
            fl = self.floor + tb
        if other.floor is not None:
            fl = _fmax(fl, other.floor + ta)
        res = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if fl is not None and e < fl:
                    continue
                p = c1 * c2
                res[e] = res[e] + p if e in res else p
        return LaurentSeries(res, fl)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n):
        result = LaurentSeries({0: 1})
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse_monic(self, floor):
        """1/self known down to ``floor``; the leading coefficient must be 1."""
        d = self.top
        if d is None or self.coeffs[d] != 1:
            raise ValueError("inverse_monic needs leading coefficient 1")
        # self = y^d (1 + u), u has exponents <= -1
        u = LaurentSeries({e - d: c for e, c in self.coeffs.items() if e != d},
                          None if self.floor is None else self.floor - d)
        depth = max(0, -d - floor)
        acc = LaurentSeries({0: 1})
        term = LaurentSeries({0: 1})
        for _ in range(depth):
            term = (term * u).truncate(floor + d)
            term = -term
            acc = acc + term
        shifted = {e - d: c for e, c in acc.coeffs.items()}
        fl = None if acc.floor is None else acc.floor - d
        return LaurentSeries(shifted, _fmax(fl, floor))

    def nth_root_monic(self, n, floor):
        """The n-th root y^{d/n}(1+u)^{1/n} by the binomial series, known down to floor."""
        d = self.top
        if d is None or self.coeffs[d] != 1 or d % n:
            raise ValueError("nth_root_monic needs leading term y^(n*k) with coefficient 1")
        k = d // n
        u = LaurentSeries({e - d: c for e, c in self.coeffs.items() if e != d},
                          None if self.floor is None else self.floor - d)
        depth = max(0, k - floor)
        acc = LaurentSeries({0: 1})
        term = LaurentSeries({0: 1})
        binom = Fraction(1)
        alpha = Fraction(1, n)
        for j in range(1, depth + 1):
            term = (term * u).truncate(floor - k)
            binom = binom * (alpha - (j - 1)) / j
            acc = acc + term.scale(binom)
        shifted = {e + k: c for e, c in acc.coeffs.items()}
        fl = None if acc.floor is None else acc.floor + k
        return LaurentSeries(shifted, _fmax(fl, floor))

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, LaurentSeries) and self.coeffs == other.coeffs and self.floor == other.floor

    def __repr__(self):
        body = " + ".join(f"({c})*y^{e}" for e, c in sorted(self.coeffs.items(), reverse=True))
        return f"LaurentSeries({body or 0}; floor={self.floor})"
