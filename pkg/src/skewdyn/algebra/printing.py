"""Canonical text form of exact polynomials (re-parseable by ``parse``)."""

from fractions import Fraction

from .upoly import UPoly, is_rational

_FACTOR_ORDER = {"t": 0, "z": 2, "x": 3, "y": 4}


def _flatten(obj, exps, out):
    from .mpoly import MPoly
    from .numberfield import NumberFieldElem
    if isinstance(obj, MPoly):
        for (i, j), c in obj.terms.items():
            e = dict(exps)
            if i:
                e["x"] = e.get("x", 0) + i
            if j:
                e["y"] = e.get("y", 0) + j
            _flatten(c, e, out)
    elif isinstance(obj, UPoly):
        for n, c in enumerate(obj.coeffs):
            e = dict(exps)
            if n:
                e[obj.var] = e.get(obj.var, 0) + n
            _flatten(c, e, out)
    elif isinstance(obj, NumberFieldElem):
        _flatten(obj.as_upoly(obj.field.name), exps, out)
    elif is_rational(obj):
        if obj != 0:
            key = tuple(sorted(exps.items()))
            out[key] = out.get(key, 0) + obj
    else:
        raise TypeError(f"cannot format {type(obj).__name__}")


def flatten(obj):
    """{((var, exp), ...): rational} for any exact polynomial object."""
    out = {}
    _flatten(obj, {}, out)
    return {k: v for k, v in out.items() if v != 0}


def _sort_key(mono):
    e = dict(mono)
    ex, ey = e.get("x", 0), e.get("y", 0)
    rest = tuple(sorted((v, n) for v, n in e.items() if v not in ("x", "y", "t", "z")))
    return (ex + ey, ey, ex, e.get("z", 0), e.get("t", 0), rest)


def _mono_str(mono):
    parts = []
    for v, n in sorted(mono, key=lambda vn: (_FACTOR_ORDER.get(vn[0], 1), vn[0])):
        parts.append(v if n == 1 else f"{v}^{n}")
    return "*".join(parts)


def format_poly(obj):
    terms = flatten(obj)
    if not terms:
        return "0"
    pieces = []
    for mono in sorted(terms, key=_sort_key, reverse=True):
        c = Fraction(terms[mono])
        neg = c < 0
        a = -c if neg else c
        m = _mono_str(mono)
        if not m:
            body = str(a)
        elif a == 1:
            body = m
        else:
            body = f"{a}*{m}"
        if not pieces:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f" - {body}" if neg else f" + {body}")
    return "".join(pieces)


def format_scalar(c):
    if is_rational(c):
        return str(Fraction(c))
    return format_poly(c)
