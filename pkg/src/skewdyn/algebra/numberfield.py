"""Number fields Q[z]/(m(z)) for a monic integer modulus m.

Elements are coefficient tuples of length deg(m).  A field also carries one
fixed complex embedding (the root of m with the smallest argument in
[0, 2*pi)), enclosed rigorously for escape tests.
"""

from fractions import Fraction
from functools import lru_cache

from mpmath import iv, libmp, mp, mpc, polyroots
from mpmath.libmp import NoConvergence as _MpNoConvergence

from .upoly import UPoly, inverse_scalar, is_rational, upoly_xgcd


def _to_iv(q):
    q = Fraction(q)
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def iv_upper(x):
    """Rational upper endpoint of an mpmath real interval."""
    p, q = libmp.to_rational(x._mpi_[1])
    return Fraction(int(p), int(q))


def iv_lower(x):
    p, q = libmp.to_rational(x._mpi_[0])
    return Fraction(int(p), int(q))


class NumberField:
    __slots__ = ("modulus", "name", "_enclosure")

    def __init__(self, modulus, name="z"):
        m = tuple(int(c) for c in modulus)
        if len(m) < 2 or m[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 1")
        self.modulus = m
        self.name = name
        self._enclosure = {}

    @classmethod
    def from_upoly(cls, p, name="z"):
        if not p.is_rational() or p.lc != 1 or any(Fraction(c).denominator != 1 for c in p.coeffs):
            raise ValueError("modulus must be a monic integer polynomial")
        return cls(p.coeffs, name)

    @classmethod
    def cyclotomic(cls, n):
        from .roots import cyclotomic_polynomial
        return cls(cyclotomic_polynomial(n, "z").coeffs)

    @property
    def degree(self):
        return len(self.modulus) - 1

    def modulus_poly(self, var="z"):
        return UPoly(self.modulus, var)

    def __eq__(self, other):
        return isinstance(other, NumberField) and other.modulus == self.modulus

    def __hash__(self):
        return hash(self.modulus)

    def __repr__(self):
        return f"NumberField({self.modulus_poly()})"

    def __call__(self, value):
        if isinstance(value, NumberFieldElem):
            return value
        if isinstance(value, UPoly):
            return self._reduce(list(value.coeffs))
        if is_rational(value):
            return NumberFieldElem(self, (value,) + (0,) * (self.degree - 1))
        return self._reduce(list(value))

    def _reduce(self, cs):
        n = self.degree
        m = self.modulus
        cs = list(cs)
        for k in range(len(cs) - 1, n - 1, -1):
            c = cs[k]
            if c == 0:
                continue
            for j in range(n):
                if m[j]:
                    cs[k - n + j] -= c * m[j]
        cs = cs[:n] + [0] * (n - len(cs))
        return NumberFieldElem(self, tuple(cs))

    @property
    def gen(self):
        if self.degree == 1:
            return self(-self.modulus[0])
        return self((0, 1))

    @property
    def one(self):
        return self(1)

    @property
    def zero(self):
        return self(0)

    # -- embedding -----------------------------------------------------------

    def _roots(self, dps):
        """All roots of the modulus at dps digits; Durand-Kerner gets more
        steps and precision when the first attempt stalls (high degree)."""
        key = ("roots", dps)
        if key not in self._enclosure:
            cs = list(reversed(self.modulus))
            for steps, extra in ((200, 2 * dps), (2000, 4 * dps + 50), (20000, 8 * dps + 100)):
                try:
                    with mp.workdps(dps):
                        self._enclosure[key] = polyroots(cs, maxsteps=steps, extraprec=extra)
                    break
                except _MpNoConvergence:
                    continue
            else:
                from ..errors import NonConvergence
                raise NonConvergence(f"roots of the modulus of {self!r} did not converge")
        return self._enclosure[key]

    def embedding_root(self, dps=50):
        """Approximation of the embedding root (smallest argument in [0, 2pi))."""
        import cmath
        with mp.workdps(dps):
            rts = self._roots(dps)
            best = min(rts, key=lambda r: (cmath.phase(complex(r)) % (2 * cmath.pi), -abs(r)))
            return mpc(best)

    def enclosure(self, dps=50):
        """Complex interval box containing the embedding root.

        Uses the inclusion radius n*|m(z)/m'(z)|: some root lies within it of z.
        Uniqueness is checked against the remaining approximate roots.
        """
        if dps in self._enclosure:
            return self._enclosure[dps]
        n = self.degree
        with mp.workdps(dps + 20):
            z = self.embedding_root(dps + 20)
            others = [r for r in self._roots(dps) if abs(r - z) > mp.mpf(10) ** (-dps // 2)]
        old = iv.dps
        iv.dps = dps + 20
        try:
            zi = iv.mpc(z.real, z.imag)
            mi = iv.mpf(0)
            di = iv.mpf(0)
            for k, c in enumerate(reversed(self.modulus)):
                mi = mi * zi + c
            dcs = [k * c for k, c in enumerate(self.modulus)][1:]
            for c in reversed(dcs):
                di = di * zi + c
            rad = iv_upper(n * abs(mi) / abs(di)) if n > 1 else Fraction(0)
            rad = max(rad, Fraction(1, 10 ** (dps + 10)))
            for r in others:
                if abs(r - z) <= 3 * float(rad):
                    raise ArithmeticError("embedding root not isolated")
            ri = _to_iv(rad)
            wobble = iv.mpf([-ri.b, ri.b])
            box = iv.mpc(iv.mpf(z.real) + wobble, iv.mpf(z.imag) + wobble)
        finally:
            iv.dps = old
        self._enclosure[dps] = box
        return box


class NumberFieldElem:
    __slots__ = ("field", "coeffs")
    _poly_level = None

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)

    # -- helpers ---------------------------------------------------------------

    def _other(self, other):
        if isinstance(other, NumberFieldElem):
            if other.field != self.field:
                raise TypeError("elements of different number fields")
            return other
        if is_rational(other):
            return self.field(other)
        return NotImplemented

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def as_upoly(self, var="z"):
        return UPoly(self.coeffs, var)

    # -- arithmetic ---------------------------------------------------------------

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return NumberFieldElem(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return NumberFieldElem(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return NumberFieldElem(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if is_rational(other):
            return NumberFieldElem(self.field, tuple(a * other for a in self.coeffs))
        o = self._other(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        res = [0] * (2 * len(a) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        res[i + j] += ai * bj
        return self.field._reduce(res)

    __rmul__ = __mul__

    def inverse(self):
        if all(c == 0 for c in self.coeffs):
            raise ZeroDivisionError("inverse of zero in number field")
        if self.is_rational():
            return self.field(inverse_scalar(self.coeffs[0]))
        g, s, _ = upoly_xgcd(self.as_upoly(), self.field.modulus_poly())
        if g.degree != 0:
            raise ArithmeticError("modulus is not irreducible: zero divisor found")
        return self.field(s)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison -----------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, NumberFieldElem):
            return self.field == other.field and self.coeffs == other.coeffs
        if is_rational(other):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field.modulus, self.coeffs))

    def __bool__(self):
        return any(c != 0 for c in self.coeffs)

    # -- embedding ---------------------------------------------------------------

    def interval(self, dps=50):
        box = self.field.enclosure(dps)
        old = iv.dps
        iv.dps = dps + 20
        try:
            acc = iv.mpc(0)
            for c in reversed(self.coeffs):
                acc = acc * box + _to_iv(c)
        finally:
            iv.dps = old
        return acc

    def abs_bounds(self, dps=50):
        """Rational (lower, upper) bounds for |self| under the fixed embedding."""
        a = abs(self.interval(dps))
        return max(Fraction(0), iv_lower(a)), iv_upper(a)

    def __complex__(self):
        z = complex(self.field.embedding_root(30))
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + float(c)
        return acc

    def bit_size(self):
        return sum(Fraction(c).numerator.bit_length() + Fraction(c).denominator.bit_length()
                   for c in self.coeffs)

    def __repr__(self):
        return f"NumberFieldElem({self})"

    def __str__(self):
        from .printing import format_poly
        return format_poly(self.as_upoly(self.field.name))


@lru_cache(maxsize=None)
def quadratic_field(b, c):
    """Q[z]/(z^2 + b z + c) for integers b, c."""
    return NumberField((c, b, 1))
