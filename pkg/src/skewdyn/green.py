"""Escape-rate Green functions at the archimedean place, bifurcation rasters of
the parameter line and a box-count comparison between root clouds and the
raster boundary.

Values are floats.  "Bounded" always means the orbit stayed inside the escape
radius for the whole iteration budget; it is a flag, not a proof that G = 0.
"""

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .algebra.numberfield import NumberFieldElem
from .algebra.upoly import UPoly, is_rational
from .prep import escape_radius
from .skew import specialize

STOP_NORM = 1e6  # iterate past max(R, STOP_NORM) before switching to the tail sum
TAIL_CAP = 200


def _cx(c):
    if isinstance(c, UPoly):
        if not c.is_constant():
            raise ValueError("specialize the family before numeric evaluation")
        c = c.const
    if is_rational(c):
        return complex(float(c))
    if isinstance(c, NumberFieldElem):
        return complex(c)
    return complex(c)


@dataclass(frozen=True)
class GreenValue:
    value: float
    bounded: bool
    steps: int

    def __float__(self):
        return self.value

    def to_dict(self):
        return {"value": self.value, "bounded": self.bounded, "steps": self.steps}


@dataclass(frozen=True)
class GreenEvaluator:
    d: int
    f: tuple  # complex coefficients of f, low degree first
    g: tuple  # ((i, j, coefficient), ...)
    R: float
    max_iter: int = 500
    tol: float = 1e-10

    @classmethod
    def from_product(cls, F, t0=None, max_iter=500, tol=1e-10):
        Fs = specialize(F, t0) if t0 is not None else F
        f = tuple(_cx(c) for c in Fs.f.coeffs)
        g = tuple((i, j, _cx(c)) for (i, j), c in sorted(Fs.g.terms.items()))
        # the rational radius routine works from upper bounds on |coefficients|
        Fn = _numeric_product(Fs)
        R = float(escape_radius(Fn))
        return cls(F.d, f, g, R, max_iter, tol)

    @property
    def stop(self):
        return max(self.R, STOP_NORM)

    def fx(self, x):
        acc = 0j
        for c in reversed(self.f):
            acc = acc * x + c
        return acc

    def gxy(self, x, y):
        return sum(c * x ** i * y ** j for i, j, c in self.g)

    def __call__(self, P):
        x, y = P
        return self.fx(x), self.gxy(x, y)

    # normalized steps: the point is e^L * (u, v) with max(|u|, |v|) = 1
    def _f_scaled(self, u, L):
        d = self.d
        return sum(c * u ** i * _exp_neg((d - i) * L) for i, c in enumerate(self.f))

    def _g_scaled(self, u, v, L):
        d = self.d
        return sum(c * u ** i * v ** j * _exp_neg((d - i - j) * L) for i, j, c in self.g)


def _exp_neg(a):
    return 1.0 if a == 0 else math.exp(-a) if a < 700 else 0.0


def _numeric_product(Fs):
    # escape_radius only needs |coefficients|; pass them through as exact rationals
    from fractions import Fraction
    from .algebra.mpoly import MPoly
    from .skew import SkewProduct

    def up(c):
        return Fraction(abs(_cx(c))).limit_denominator(1 << 40) + Fraction(1, 1 << 30) if c != 0 else 0

    f = UPoly([up(c) for c in Fs.f.coeffs[:-1]] + [1], Fs.f.var)
    g = MPoly({ij: (1 if ij == (0, Fs.d) else up(c)) for ij, c in Fs.g.terms.items()})
    return SkewProduct(Fs.d, f, g)


def _tail(ev, step, L, state, n):
    """Sum d^{-n-k-1} * log-growth over normalized iterates until below tol."""
    d = ev.d
    G = L / d ** n
    scale = 1.0 / d ** n
    for _ in range(TAIL_CAP):
        state, delta = step(state, L)
        if delta is None:
            break
        scale /= d
        L = d * L + delta
        G += delta * scale
        if abs(delta) * scale < ev.tol * 1e-3:
            break
    return G


def green_1d(ev, x0):
    """lim d^-n log+ |f^n(x0)| for the base map of ``ev``."""
    x = complex(x0)
    stop = ev.stop
    for n in range(ev.max_iter + 1):
        s = abs(x)
        if s > stop:
            break
        if n == ev.max_iter:
            return GreenValue(0.0, True, n)
        x = ev.fx(x)
    else:  # pragma: no cover
        return GreenValue(0.0, True, ev.max_iter)

    def step(u, L):
        w = ev._f_scaled(u, L)
        m = abs(w)
        if m == 0:
            return u, None
        return w / m, math.log(m)

    L = math.log(s)
    return GreenValue(_tail(ev, step, L, x / s, n), False, n)


def green_2d(ev, P0):
    """lim d^-n log+ max(|x_n|, |y_n|)."""
    x, y = complex(P0[0]), complex(P0[1])
    stop = ev.stop
    n = 0
    while True:
        s = max(abs(x), abs(y))
        if s > stop:
            break
        if n == ev.max_iter:
            return GreenValue(0.0, True, n)
        x, y = ev.fx(x), ev.gxy(x, y)
        n += 1

    def step(uv, L):
        u, v = uv
        a, b = ev._f_scaled(u, L), ev._g_scaled(u, v, L)
        m = max(abs(a), abs(b))
        if m == 0:
            return uv, None
        return (a / m, b / m), math.log(m)

    L = math.log(s)
    return GreenValue(_tail(ev, step, L, (x / s, y / s), n), False, n)


# -- ratio identity ------------------------------------------------------------------

@dataclass
class GreenRatioReport:
    rows: list
    hypotheses: str = "user-declared"

    @property
    def max_residual(self):
        return max((r["residual"] for r in self.rows), default=0.0)

    def to_dict(self):
        return {"rows": self.rows, "max_residual": self.max_residual, "hypotheses": self.hypotheses}


def green_ratio_check(pair, samples, max_iter=500, tol=1e-10, hypotheses="user-declared"):
    """|(m1+m2) G_1(t) - m1 G_2(t)| at each sample t."""
    m1, m2 = pair.m1, pair.m2
    if m1 is None:
        raise ValueError("m1, m2 need deg a > 0 and deg b > 0")
    rows = []
    for t in samples:
        t = complex(t)
        ev = GreenEvaluator.from_product(pair.F, t, max_iter, tol)
        a, b = pair.a(t), pair.b(t)
        G1 = green_1d(ev, a)
        G2 = green_2d(ev, (a, b))
        rows.append({
            "t": [t.real, t.imag],
            "G1": G1.value, "G2": G2.value,
            "bounded": G1.bounded or G2.bounded,
            "residual": abs((m1 + m2) * G1.value - m1 * G2.value),
        })
    return GreenRatioReport(rows, hypotheses)


# -- rasters ---------------------------------------------------------------------------

def _poly_eval_np(c, T):
    if isinstance(c, UPoly):
        return np.polyval([complex(_cx(v)) for v in reversed(c.coeffs)], T)
    return np.full(T.shape, _cx(c))


def _radius_np(fcs, gterms, d):
    """Vectorized version of the rigorous radius test in prep (float arithmetic)."""
    sf = sum(np.abs(c) for c in fcs[:-1]) if len(fcs) > 1 else 0.0
    sf = np.asarray(sf, dtype=float)
    gabs = [(i, j, np.abs(c)) for i, j, c in gterms if (i, j) != (0, d)]

    def valid(r):
        X = np.minimum(r, np.maximum(1.0, sf + r ** (1.0 / d) * (1 + 1e-12)))
        h = r ** d - r
        for i, j, c in gabs:
            h = h - c * X ** i * r ** j
        return (r >= 1 + sf) & (h >= 0)

    r = 1 + sf + sum((c for _, _, c in gabs), np.zeros_like(sf))
    r = np.array(r, dtype=float)
    lo = r.copy()
    ok = valid(r)
    for _ in range(200):
        if ok.all():
            break
        lo = np.where(ok, lo, r)
        r = np.where(ok, r, 2 * r)
        ok = valid(r)
    hi = r
    first_try = hi == lo
    for _ in range(12):
        mid = (lo + hi) / 2
        v = valid(mid)
        hi = np.where(v & ~first_try, mid, hi)
        lo = np.where(v | first_try, lo, mid)
    return hi * (1 + 1e-9)


def _pixel_grid(window, resolution):
    x0, y0, x1, y1 = window
    W, H = resolution
    re = x0 + (np.arange(W) + 0.5) * (x1 - x0) / W
    im = y1 - (np.arange(H) + 0.5) * (y1 - y0) / H
    return re[None, :] + 1j * im[:, None]


def _raster_rows(pair, T, budget):
    F = pair.F
    d = F.d
    fcs = [_poly_eval_np(c, T) for c in F.f.coeffs]
    gterms = [(i, j, _poly_eval_np(c, T)) for (i, j), c in F.g.terms.items()]
    R = _radius_np(fcs, gterms, d)
    x = _poly_eval_np(pair.a, T).astype(complex)
    y = _poly_eval_np(pair.b, T).astype(complex)
    counts = np.full(T.shape, -1, dtype=np.int32)
    green = np.zeros(T.shape, dtype=float)
    idx = np.arange(T.size)
    x, y, R = x.ravel(), y.ravel(), R.ravel()
    fl = [c.ravel() for c in fcs]
    gl = [(i, j, c.ravel()) for i, j, c in gterms]
    cflat, gflat = counts.ravel(), green.ravel()
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(budget + 1):
            s = np.maximum(np.abs(x), np.abs(y))
            esc = s > R[idx]
            if esc.any():
                hit = idx[esc]
                cflat[hit] = n
                gflat[hit] = np.log(s[esc]) / float(d) ** n
                keep = ~esc
                idx, x, y = idx[keep], x[keep], y[keep]
            if n == budget or idx.size == 0:
                break
            xn = np.zeros_like(x)
            for k in range(len(fl) - 1, -1, -1):
                xn = xn * x + fl[k][idx]
            yn = np.zeros_like(y)
            for i, j, c in gl:
                yn = yn + c[idx] * x ** i * y ** j
            x, y = xn, yn
    return counts.reshape(T.shape), green.reshape(T.shape)


@dataclass
class BifurcationRaster:
    window: tuple
    resolution: tuple
    budget: int
    counts: Any  # int32 array (H, W); -1 where the orbit stayed bounded
    green: Any  # crude log(norm) / d^n at the escape step, 0 where bounded
    meta: dict = field(default_factory=dict)

    @property
    def bounded(self):
        return self.counts < 0

    def boundary_mask(self):
        """Pixels whose 4-neighbourhood mixes bounded and escaping pixels."""
        b = self.bounded
        m = np.zeros_like(b)
        m[1:, :] |= b[1:, :] != b[:-1, :]
        m[:-1, :] |= b[:-1, :] != b[1:, :]
        m[:, 1:] |= b[:, 1:] != b[:, :-1]
        m[:, :-1] |= b[:, :-1] != b[:, 1:]
        return m

    def pixel_centers(self):
        return _pixel_grid(self.window, self.resolution)

    def sidecar(self):
        out = {"window": list(self.window), "resolution": list(self.resolution), "budget": self.budget}
        out.update(self.meta)
        return out

    def write_pgm(self, path):
        """Binary PGM: escape step per pixel, maxval for bounded pixels."""
        maxval = min(max(self.budget + 1, 1), 65535)
        vals = np.where(self.counts < 0, maxval, np.minimum(self.counts, maxval - 1))
        H, W = self.counts.shape
        header = f"P5\n{W} {H}\n{maxval}\n".encode("ascii")
        if maxval < 256:
            body = vals.astype(np.uint8).tobytes()
        else:
            body = vals.astype(">u2").tobytes()
        with open(path, "wb") as fh:
            fh.write(header + body)

    def write_sidecar(self, path):
        with open(path, "w") as fh:
            json.dump(self.sidecar(), fh, sort_keys=True, indent=2)


def read_pgm(path):
    with open(path, "rb") as fh:
        data = fh.read()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    W, H = map(int, parts[1].split())
    maxval = int(parts[2])
    dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
    return np.frombuffer(parts[3], dtype=dtype).reshape(H, W), maxval


def bifurcation_raster(pair, window, resolution, budget=256, threads=None):
    """Escape data of the marked orbit over a grid of parameters t.

    Pixel (row, col) sits at the center of its cell; row 0 is the top edge.
    """
    T = _pixel_grid(window, resolution)
    H = T.shape[0]
    nthreads = max(1, threads or 1)
    bands = np.array_split(np.arange(H), min(nthreads, H))
    with ThreadPoolExecutor(max_workers=nthreads) as pool:
        parts = list(pool.map(lambda rows: _raster_rows(pair, T[rows], budget), bands))
    counts = np.vstack([p[0] for p in parts])
    green = np.vstack([p[1] for p in parts])
    meta = {"family": str(pair.F), "a": str(pair.a), "b": str(pair.b)}
    return BifurcationRaster(tuple(window), tuple(resolution), budget, counts, green, meta)


# -- equidistribution diagnostic -------------------------------------------------------

@dataclass
class DiscrepancyReport:
    boxes: int
    per_box: Any  # (boxes, boxes) array of |root mass - boundary mass|
    max_discrepancy: Optional[float]
    outside_mass: float
    flag: Optional[str] = None

    def to_dict(self):
        return {
            "boxes": self.boxes,
            "max_discrepancy": self.max_discrepancy,
            "outside_mass": self.outside_mass,
            "flag": self.flag,
            "per_box": None if self.per_box is None else np.round(self.per_box, 12).tolist(),
        }


def _box_index(z, window, boxes):
    x0, y0, x1, y1 = window
    i = int((y1 - z.imag) / (y1 - y0) * boxes)
    j = int((z.real - x0) / (x1 - x0) * boxes)
    if 0 <= i < boxes and 0 <= j < boxes:
        return i, j
    return None


def equidist_compare(roots, raster, boxes=8):
    """Box-by-box |root counting mass - boundary pixel mass| on the raster window."""
    roots = [complex(r) for r in roots]
    if not roots:
        raise ValueError("need at least one root")
    mask = raster.boundary_mask()
    if not mask.any():
        return DiscrepancyReport(boxes, None, None, 0.0, "no reference measure")
    root_mass = np.zeros((boxes, boxes))
    outside = 0.0
    w = 1.0 / len(roots)
    for z in roots:
        ij = _box_index(z, raster.window, boxes)
        if ij is None:
            outside += w
        else:
            root_mass[ij] += w
    centers = raster.pixel_centers()[mask]
    bmass = np.zeros((boxes, boxes))
    wb = 1.0 / centers.size
    for z in centers:
        ij = _box_index(z, raster.window, boxes)
        if ij is not None:
            bmass[ij] += wb
    diff = np.abs(root_mass - bmass)
    return DiscrepancyReport(boxes, diff, float(diff.max()), outside)
