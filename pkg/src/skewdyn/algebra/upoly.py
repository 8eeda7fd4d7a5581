"""Dense univariate polynomials over an exact coefficient ring.

Coefficients may be ints/Fractions, NumberFieldElem, or another UPoly in a
lower-level variable.  Variables are ranked so that mixing works without
explicit conversions: parameters (t and friends) sit at level 0, x and z at
level 1, y at level 2.  A polynomial treats anything of lower level as a
scalar.
"""

from fractions import Fraction
from math import gcd, lcm

ZERO_DEGREE = -1  # degree reported for the zero polynomial

_LEVELS = {"x": 1, "z": 1, "y": 2}

# Kronecker packing only pays off once the schoolbook loop gets long.
_KRONECKER_MIN = 64


def var_level(var):
    return _LEVELS.get(var, 0)


def is_rational(c):
    return type(c) is int or type(c) is Fraction


def inverse_scalar(c):
    """Multiplicative inverse of a ring element that must be a unit."""
    if is_rational(c):
        if c == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(1) / c
    return c.inverse()


def _pack(ints, nbytes):
    pos = b"".join((v if v > 0 else 0).to_bytes(nbytes, "little") for v in ints)
    neg = b"".join((-v if v < 0 else 0).to_bytes(nbytes, "little") for v in ints)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _unpack(value, nbytes, count):
    # signed digit recovery, base 2^(8*nbytes)
    width = 8 * nbytes
    value &= (1 << (width * count)) - 1
    data = value.to_bytes(nbytes * count, "little")
    half = 1 << (width - 1)
    full = 1 << width
    out = []
    carry = 0
    for i in range(count):
        u = int.from_bytes(data[i * nbytes:(i + 1) * nbytes], "little") + carry
        if u >= half:
            out.append(u - full)
            carry = 1
        else:
            out.append(u)
            carry = 0
    return out


def _integerize(cs):
    den = 1
    for c in cs:
        if type(c) is Fraction and c.denominator != 1:
            den = lcm(den, c.denominator)
    if den == 1:
        return [int(c) for c in cs], 1
    return [int(c * den) for c in cs], den


def kronecker_mul(a, b):
    """Product of two rational coefficient lists via one big-integer multiply."""
    ia, da = _integerize(a)
    ib, db = _integerize(b)
    ma = max(abs(v) for v in ia)
    mb = max(abs(v) for v in ib)
    bound = ma * mb * min(len(ia), len(ib))
    nbytes = (bound.bit_length() + 2 + 7) // 8
    prod = _pack(ia, nbytes) * _pack(ib, nbytes)
    out = _unpack(prod, nbytes, len(ia) + len(ib) - 1)
    den = da * db
    if den == 1:
        return out
    return [Fraction(v, den) for v in out]


def _schoolbook(a, b):
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            res[i + j] = res[i + j] + ai * bj
    return res


def mul_lists(a, b):
    if not a or not b:
        return []
    if (len(a) * len(b) >= _KRONECKER_MIN and all(map(is_rational, a))
            and all(map(is_rational, b))):
        return kronecker_mul(a, b)
    return _schoolbook(a, b)


class UPoly:
    """Immutable dense polynomial, coefficients stored low to high."""

    __slots__ = ("coeffs", "var")
    _poly_level = None

    def __init__(self, coeffs=(), var="t"):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def gen(cls, var="t"):
        return cls((0, 1), var)

    @classmethod
    def monomial(cls, c, n, var="t"):
        return cls([0] * n + [c], var)

    @classmethod
    def constant(cls, c, var="t"):
        return cls((c,), var)

    # -- basic data --------------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def const(self):
        return self.coeffs[0] if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def coeff(self, n):
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else 0

    def is_rational(self):
        return all(map(is_rational, self.coeffs))

    def level(self):
        return var_level(self.var)

    # -- coercion ------------------------------------------------------------

    def _wrap(self, other):
        if isinstance(other, UPoly):
            if other.var == self.var:
                return other
            lo, lv = var_level(other.var), var_level(self.var)
            if lo < lv:
                return UPoly((other,), self.var)
            if lo > lv:
                return NotImplemented
            if other.is_constant():
                return UPoly(other.coeffs, self.var)
            if self.is_constant():
                raise _Promote(other)
            raise TypeError(f"cannot mix polynomials in {self.var} and {other.var}")
        if getattr(other, "_poly_level", None) is not None:
            return NotImplemented
        return UPoly((other,), self.var)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        try:
            o = self._wrap(other)
        except _Promote as p:
            return UPoly(self.coeffs, p.target.var) + p.target
        if o is NotImplemented:
            return other.__radd__(self) if isinstance(other, UPoly) else o
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        res = list(a)
        for i, c in enumerate(b):
            res[i] = res[i] + c
        return UPoly(res, self.var)

    __radd__ = __add__

    def __neg__(self):
        return UPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        try:
            o = self._wrap(other)
        except _Promote as p:
            return UPoly(self.coeffs, p.target.var) - p.target
        if o is NotImplemented:
            return other.__rsub__(self) if isinstance(other, UPoly) else o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._wrap(other)
        except _Promote as p:
            return UPoly(self.coeffs, p.target.var) * p.target
        if o is NotImplemented:
            # same class, so Python will not try the reflected method itself
            return other.__rmul__(self) if isinstance(other, UPoly) else o
        if len(o.coeffs) == 1:
            c = o.coeffs[0]
            return UPoly([x * c for x in self.coeffs], self.var)
        if len(self.coeffs) == 1:
            c = self.coeffs[0]
            return UPoly([c * x for x in o.coeffs], self.var)
        return UPoly(mul_lists(self.coeffs, o.coeffs), self.var)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = UPoly((1,), self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        # division by a scalar unit only; polynomial division is divmod
        if isinstance(other, UPoly) and other.var == self.var:
            q, r = divmod(self, other)
            if not r.is_zero():
                raise ArithmeticError("inexact polynomial division")
            return q
        inv = inverse_scalar(other.const if isinstance(other, UPoly) else other)
        return self * inv

    def inverse(self):
        if not self.is_constant() or self.is_zero():
            raise ArithmeticError(f"{self} is not a unit")
        return UPoly((inverse_scalar(self.coeffs[0]),), self.var)

    def __divmod__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        inv = inverse_scalar(o.lc)
        rem = list(self.coeffs)
        db = o.degree
        if len(rem) - 1 < db:
            return UPoly((), self.var), self
        quot = [0] * (len(rem) - db)
        bc = o.coeffs
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            q = c * inv
            quot[k - db] = q
            for j in range(db + 1):
                rem[k - db + j] = rem[k - db + j] - q * bc[j]
        return UPoly(quot, self.var), UPoly(rem[:db], self.var)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    # -- comparison ------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, UPoly) and other.var != self.var:
            lo, lv = var_level(other.var), var_level(self.var)
            if lo > lv:
                return NotImplemented
            if lo == lv:
                return self.is_constant() and other.is_constant() and self.const == other.const
            return self.is_constant() and self.const == other
        if getattr(other, "_poly_level", None) is not None:
            return NotImplemented
        if not isinstance(other, UPoly):
            return self.is_constant() and self.const == other
        return self.coeffs == other.coeffs

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.const)
        return hash((self.var, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    # -- calculus / evaluation ---------------------------------------------

    def __call__(self, value):
        """Horner evaluation; works for any value supporting + and *."""
        if not self.coeffs:
            return 0
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * value + c
        return acc

    def compose(self, q):
        return poly_compose(self, q)

    def derivative(self):
        return UPoly([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def map_coeffs(self, fn, var=None):
        return UPoly([fn(c) for c in self.coeffs], var or self.var)

    def monic(self):
        if self.is_zero():
            return self
        return self * inverse_scalar(self.lc)

    def with_var(self, var):
        return UPoly(self.coeffs, var)

    def primitive(self):
        """Integer primitive form with positive leading coefficient."""
        if self.is_zero():
            return self
        ints, _ = _integerize(self.coeffs)
        g = 0
        for v in ints:
            g = gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return UPoly([v // g for v in ints], self.var)

    def squarefree(self):
        if self.degree <= 0:
            return self.monic()
        g = upoly_gcd(self, self.derivative())
        return self.exact_div(g).monic()

    def trailing_degree(self):
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return ZERO_DEGREE

    def __repr__(self):
        return f"UPoly({self})"

    def __str__(self):
        from .printing import format_poly
        return format_poly(self)


class _Promote(Exception):
    """Internal: a constant meets a same-level polynomial in another variable."""

    def __init__(self, target):
        self.target = target


def poly_compose(p, q):
    """p(q) by Horner; deg = deg p * deg q for nonconstant inputs."""
    if p.is_zero():
        return UPoly((), q.var if isinstance(q, UPoly) else p.var)
    acc = UPoly((p.coeffs[-1],), q.var) if isinstance(q, UPoly) else p.coeffs[-1]
    for c in reversed(p.coeffs[:-1]):
        acc = acc * q + c
    return acc


def upoly_gcd(p, q):
    """Monic gcd over a field of coefficients (Euclid, monic at each step)."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials")
    a, b = p.monic(), q.monic()
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a.monic()


def upoly_xgcd(p, q):
    """(g, s, u) with s*p + u*q = g monic."""
    r0, r1 = p, q
    s0, s1 = UPoly((1,), p.var), UPoly((), p.var)
    u0, u1 = UPoly((), p.var), UPoly((1,), p.var)
    while not r1.is_zero():
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        u0, u1 = u1, u0 - quo * u1
    inv = inverse_scalar(r0.lc)
    return r0 * inv, s0 * inv, u0 * inv
