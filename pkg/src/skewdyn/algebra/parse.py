"""Recursive-descent parser for the polynomial text grammar.

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' unary)?          # right-associative, exponent must be a
                                         # non-negative integer constant
    atom   := INT ('/' INT)? | VAR | '(' expr ')'

Variables are t, x, y, z.  The result is a sparse dict keyed by the exponent
tuple (t, x, y, z).
"""

from fractions import Fraction

from ..errors import ParseError
from .mpoly import MPoly
from .upoly import UPoly

VARS = ("t", "x", "y", "z")
_IDX = {v: i for i, v in enumerate(VARS)}
_ONE = (0, 0, 0, 0)


def _tokenize(text):
    toks = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(("INT", int(text[i:j]), line, col))
            col += j - i
            i = j
            continue
        if ch in VARS:
            toks.append(("VAR", ch, line, col))
        elif ch in "+-*^/()":
            toks.append((ch, ch, line, col))
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
        i += 1
        col += 1
    toks.append(("END", None, line, col))
    return toks


def _add(a, b):
    res = dict(a)
    for k, c in b.items():
        v = res.get(k, 0) + c
        if v:
            res[k] = v
        else:
            res.pop(k, None)
    return res


def _mul(a, b):
    res = {}
    for k1, c1 in a.items():
        for k2, c2 in b.items():
            k = tuple(p + q for p, q in zip(k1, k2))
            v = res.get(k, 0) + c1 * c2
            if v:
                res[k] = v
            else:
                res.pop(k, None)
    return res


def _pow(a, n):
    res = {_ONE: Fraction(1)}
    base = a
    while n:
        if n & 1:
            res = _mul(res, base)
        n >>= 1
        if n:
            base = _mul(base, base)
    return res


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self, kind=None):
        tok = self.toks[self.pos]
        if kind is not None and tok[0] != kind:
            want = "end of input" if kind == "END" else repr(kind)
            got = "end of input" if tok[0] == "END" else repr(tok[1])
            raise ParseError(f"expected {want}, found {got}", tok[2], tok[3])
        self.pos += 1
        return tok

    def expr(self):
        val = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            val = _add(val, rhs if op == "+" else {k: -c for k, c in rhs.items()})
        return val

    def term(self):
        val = self.unary()
        while self.peek()[0] == "*":
            self.take()
            val = _mul(val, self.unary())
        return val

    def unary(self):
        kind = self.peek()[0]
        if kind in "+-":
            self.take()
            val = self.unary()
            return val if kind == "+" else {k: -c for k, c in val.items()}
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            tok = self.take()
            exp = self.unary()
            if not exp:
                n = 0
            elif set(exp) != {_ONE} or exp[_ONE].denominator != 1 or exp[_ONE] < 0:
                raise ParseError("exponent must be a non-negative integer constant", tok[2], tok[3])
            else:
                n = int(exp[_ONE])
            return _pow(base, n)
        return base

    def atom(self):
        tok = self.peek()
        if tok[0] == "INT":
            self.take()
            val = Fraction(tok[1])
            if self.peek()[0] == "/":
                slash = self.take()
                den = self.take("INT")
                if den[1] == 0:
                    raise ParseError("zero denominator", slash[2], slash[3])
                val = Fraction(tok[1], den[1])
            return {_ONE: val} if val else {}
        if tok[0] == "VAR":
            self.take()
            k = [0, 0, 0, 0]
            k[_IDX[tok[1]]] = 1
            return {tuple(k): Fraction(1)}
        if tok[0] == "(":
            self.take()
            val = self.expr()
            self.take(")")
            return val
        got = "end of input" if tok[0] == "END" else repr(tok[1])
        raise ParseError(f"unexpected {got}", tok[2], tok[3])


def parse_sparse(text):
    """Parse text into {(et, ex, ey, ez): Fraction}."""
    if not isinstance(text, str):
        raise ParseError("polynomial must be a string")
    p = _Parser(text)
    val = p.expr()
    p.take("END")
    return val


def _normal(c):
    return int(c) if c.denominator == 1 else c


def _used(sp):
    return {VARS[i] for k in sp for i, e in enumerate(k) if e}


def _check_vars(sp, allowed, what):
    extra = _used(sp) - set(allowed)
    if extra:
        raise ParseError(f"{what} may only use {', '.join(allowed)}; found {', '.join(sorted(extra))}")


def parse_upoly(text, var="t"):
    sp = parse_sparse(text)
    _check_vars(sp, (var,), "this polynomial")
    i = _IDX[var]
    cs = {}
    for k, c in sp.items():
        cs[k[i]] = _normal(c)
    return UPoly([cs.get(n, 0) for n in range(max(cs, default=-1) + 1)], var)


def parse_fx(text):
    """f in Q[t][x] as a UPoly in x with UPoly-in-t coefficients."""
    sp = parse_sparse(text)
    _check_vars(sp, ("t", "x"), "f")
    rows = {}
    for (et, ex, _, _), c in sp.items():
        rows.setdefault(ex, {})[et] = _normal(c)
    cs = []
    for n in range(max(rows, default=-1) + 1):
        row = rows.get(n, {})
        cs.append(UPoly([row.get(m, 0) for m in range(max(row, default=-1) + 1)], "t"))
    return UPoly(cs, "x")


def parse_mpoly(text, allowed=("t", "x", "y")):
    """g in Q[t][x, y] as an MPoly with UPoly-in-t coefficients."""
    sp = parse_sparse(text)
    _check_vars(sp, allowed, "this polynomial")
    rows = {}
    for (et, ex, ey, _), c in sp.items():
        rows.setdefault((ex, ey), {})[et] = _normal(c)
    terms = {}
    for ij, row in rows.items():
        terms[ij] = UPoly([row.get(m, 0) for m in range(max(row) + 1)], "t")
    return MPoly(terms)
