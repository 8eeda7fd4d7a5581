"""Exact sparse linear algebra over Q.

Rows are dicts {column: rational}.  Elimination is fraction-free: rows are
kept as primitive integer vectors, and a row update is p*row - a*pivot followed
by division by the content, so no Fraction arithmetic happens until the final
normalization.
"""

from fractions import Fraction
from math import gcd, lcm


def _primitive(row):
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, v)
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    return row


def _to_int_row(row):
    den = 1
    for v in row.values():
        v = Fraction(v)
        den = lcm(den, v.denominator)
    return _primitive({k: int(Fraction(v) * den) for k, v in row.items() if v != 0})


def rref(rows, ncols=None):
    """Reduced row echelon form.

    Returns (basis_rows, pivots): each basis row is a dict of Fractions with a 1
    in its pivot column and zeros in every other pivot column.  Pivots are
    chosen by increasing column index, so the result is unique.
    """
    work = [r for r in (_to_int_row(r) for r in rows) if r]
    pivots = []
    done = []
    cols = sorted({c for r in work for c in r})
    for col in cols:
        idx = None
        for i, r in enumerate(work):
            if col in r and (idx is None or len(r) < len(work[idx])):
                idx = i
        if idx is None:
            continue
        prow = work.pop(idx)
        p = prow[col]
        new = []
        for r in work:
            a = r.get(col)
            if a is None:
                new.append(r)
                continue
            upd = {}
            for k, v in r.items():
                upd[k] = p * v
            for k, v in prow.items():
                upd[k] = upd.get(k, 0) - a * v
            upd = _primitive({k: v for k, v in upd.items() if v})
            if upd:
                new.append(upd)
        work = new
        # back-substitute into earlier pivot rows to keep them reduced
        for i, (pc, r) in enumerate(done):
            a = r.get(col)
            if a is None:
                continue
            upd = {k: p * v for k, v in r.items()}
            for k, v in prow.items():
                upd[k] = upd.get(k, 0) - a * v
            done[i] = (pc, _primitive({k: v for k, v in upd.items() if v}))
        done.append((col, prow))
        pivots.append(col)
    out = []
    for pc, r in done:
        lead = r[pc]
        out.append({k: Fraction(v, lead) for k, v in sorted(r.items())})
    return out, pivots


def nullspace(rows, ncols):
    """Basis of {v : row . v = 0 for every row}, itself in reduced echelon form."""
    basis, pivots = rref(rows, ncols)
    pivset = set(pivots)
    vecs = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = {f: Fraction(1)}
        for pc, r in zip(pivots, basis):
            c = r.get(f)
            if c:
                v[pc] = -c
        vecs.append(v)
    if not vecs:
        return []
    red, _ = rref(vecs, ncols)
    return red


def rank(rows, ncols=None):
    return len(rref(rows, ncols)[1])
