"""Command-line front end: ``skewdyn <subcommand> ...``.

Exit status 0 on success, 1 on a computational error, 2 on a configuration
error; errors are written to stderr as a JSON object.
"""

import argparse
import cmath
import json
import math
import os
import sys
from fractions import Fraction
from math import gcd

from .algebra.parse import parse_fx, parse_mpoly, parse_sparse, parse_upoly
from .algebra.printing import format_poly, format_scalar
from .errors import ConfigError, ParseError, SkewdynError
from .skew import MarkedPair, check_regular, degree_hypothesis_check, iterate

FAMILY_KEYS = ("f", "g", "a", "b")
MODULI_KEYS = ("a", "b", "c", "d")


# -- input ------------------------------------------------------------------------

def _load_json(text, keys, what):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what}: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(obj, dict):
        raise ParseError(f"{what} must be a JSON object")
    unknown = sorted(set(obj) - set(keys))
    if unknown:
        raise ParseError(f"{what}: unknown key(s) {', '.join(unknown)}")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise ParseError(f"{what}: missing key(s) {', '.join(missing)}")
    for k in keys:
        if not isinstance(obj[k], (str, int)):
            raise ParseError(f"{what}: value of {k!r} must be a polynomial string")
    return {k: str(obj[k]) for k in keys}


def _parse_field(key, text, fn, *args):
    try:
        return fn(text, *args)
    except ParseError as exc:
        raise ParseError(f"in {key!r}: {exc}", exc.line, exc.column) from None


def parse_family(text):
    """MarkedPair from JSON {"f": ..., "g": ..., "a": ..., "b": ...}."""
    obj = _load_json(text, FAMILY_KEYS, "family")
    f = _parse_field("f", obj["f"], parse_fx)
    g = _parse_field("g", obj["g"], parse_mpoly, ("t", "x", "y"))
    a = _parse_field("a", obj["a"], parse_upoly, "t")
    b = _parse_field("b", obj["b"], parse_upoly, "t")
    F = check_regular(f, g)
    return MarkedPair(F, a, b)


def family_to_json(pair):
    return {"f": format_poly(pair.F.f), "g": format_poly(pair.F.g),
            "a": format_poly(pair.a), "b": format_poly(pair.b)}


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None


def _load_family(path):
    return parse_family(_read(path))


def _rational(text):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a rational number: {text!r}") from None


def _complex(text):
    try:
        return complex(text.strip().replace("i", "j"))
    except ValueError:
        raise ConfigError(f"not a complex number: {text!r}") from None


def _floats(text, n, what):
    parts = text.split(",")
    if len(parts) != n:
        raise ConfigError(f"{what} needs {n} comma-separated numbers")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"{what}: bad number in {text!r}") from None


def _ints(text, n, what):
    vals = _floats(text, n, what)
    if any(v != int(v) or v <= 0 for v in vals):
        raise ConfigError(f"{what} needs positive integers")
    return tuple(int(v) for v in vals)


def _param(text):
    """Exact rational when possible, else complex."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        return _complex(text)


# -- output ---------------------------------------------------------------------------

def _jsonable(obj):
    if hasattr(obj, "to_dict"):
        return _jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def dumps(obj):
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def _emit(obj, out=None):
    text = dumps(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands ------------------------------------------------------------------------

def cmd_iterate(args):
    pair = _load_family(args.family)
    mode = "symbolic" if args.t0 is None else _param(args.t0)
    rec = iterate(pair, args.steps, mode)
    pts = []
    for a, b in rec.points:
        pts.append({"a": format_scalar(a), "b": format_scalar(b)})
    coeffs = None
    if mode == "symbolic":
        coeffs = [[[str(Fraction(c)) for c in v.coeffs] for v in p] for p in rec.points]
    return {"points": pts, "degrees": rec.degrees, "coefficients": coeffs,
            "hypotheses": degree_hypothesis_check(pair)}


def cmd_prep(args):
    from .prep import prep_parameter_set
    pair = _load_family(args.family)
    res = prep_parameter_set(pair, args.pattern_max, args.max_iter, args.threads)
    return res


def cmd_prep_intersect(args):
    from .prep import prep_intersection
    pairA = _load_family(args.family)
    if args.second:
        pairB = _load_family(args.second)
    elif args.point2:
        parts = args.point2.split(",")
        if len(parts) != 2:
            raise ConfigError("--point2 needs 'a,b'")
        a = _parse_field("a", parts[0], parse_upoly, "t")
        b = _parse_field("b", parts[1], parse_upoly, "t")
        pairB = MarkedPair(pairA.F, a, b)
    else:
        raise ConfigError("prep-intersect needs --second or --point2")
    if pairA.F != pairB.F:
        raise ConfigError("both marked points must use the same (f, g)")
    return prep_intersection(pairA, pairB, args.pattern_max, args.max_iter, args.threads)


def _moduli_point(text):
    vals = text.split(",")
    if len(vals) != 4:
        raise ConfigError("--point needs a,b,c,d")
    return tuple(_rational(v) for v in vals)


def _moduli_family(path):
    obj = _load_json(_read(path), MODULI_KEYS, "moduli family")
    return tuple(_parse_field(k, obj[k], parse_sparse) for k in MODULI_KEYS)


def cmd_pcf(args):
    from .pcf import exceptional_locus_member, family_locus_check, necessary_pcf_conditions
    if args.locus_check:
        verdict = family_locus_check(_moduli_family(args.locus_check))
        return {"components": verdict, "inside": sorted(k for k, v in verdict.items() if v)}
    if not args.point:
        raise ConfigError("pcf needs --point a,b,c,d or --locus-check file")
    p = _moduli_point(args.point)
    rep = necessary_pcf_conditions(p, args.max_iter)
    out = rep.to_dict()
    out["exceptional_locus"] = exceptional_locus_member(p)
    return out


def cmd_locus_check(args):
    from .pcf import exceptional_locus_member, family_locus_check
    if args.family:
        verdict = family_locus_check(_moduli_family(args.family))
        return {"components": verdict, "inside": sorted(k for k, v in verdict.items() if v)}
    if not args.point:
        raise ConfigError("locus-check needs --point a,b,c,d or --family file")
    return {"components": exceptional_locus_member(_moduli_point(args.point))}


def cmd_bottcher(args):
    from .bottcher import degree_bound_check, orbit_relation_candidate, vertical_bottcher_coeffs
    pair = _load_family(args.family)
    out = {"bottcher": vertical_bottcher_coeffs(pair.F, args.order)}
    if args.check_bounds:
        out["bounds"] = degree_bound_check(pair, args.order)
    if args.relation:
        out["relation"] = orbit_relation_candidate(pair, args.shift, strict=not args.no_strict)
    return out


def _raster(pair, args):
    from .green import bifurcation_raster
    window = _floats(args.window, 4, "--window")
    res = _ints(args.res, 2, "--res")
    ras = bifurcation_raster(pair, window, res, args.budget, args.threads)
    prefix = args.out_prefix
    ras.write_pgm(prefix + ".pgm")
    ras.write_sidecar(prefix + ".json")
    mask = ras.boundary_mask()
    return ras, {"pgm": prefix + ".pgm", "sidecar": prefix + ".json",
                 "bounded_pixels": int(ras.bounded.sum()), "boundary_pixels": int(mask.sum())}


def cmd_green(args):
    from .green import GreenEvaluator, green_1d, green_2d, green_ratio_check
    pair = _load_family(args.family)
    out = {}
    if args.t:
        ts = [_complex(v) for v in args.t.split(",")]
        rows = []
        for t in ts:
            ev = GreenEvaluator.from_product(pair.F, t, args.max_iter, args.tol)
            a, b = pair.a(t), pair.b(t)
            rows.append({"t": t, "G1": green_1d(ev, a), "G2": green_2d(ev, (a, b))})
        out["values"] = rows
        if pair.m1 is not None:
            out["ratio"] = green_ratio_check(pair, ts, args.max_iter, args.tol)
    if args.window:
        out["raster"] = _raster(pair, args)[1]
    if not out:
        raise ConfigError("green needs --t values or --window/--res")
    return out


def cmd_raster(args):
    pair = _load_family(args.family)
    return _raster(pair, args)[1]


def _root_cloud(res):
    pts = []
    for e in res.entries:
        if e.kind == "rational":
            pts.append(complex(float(e.value)))
        elif e.kind == "cyclotomic":
            n = e.value
            pts.extend(cmath.exp(2j * math.pi * k / n) for k in range(1, n + 1) if gcd(k, n) == 1)
        else:
            pts.append(e.value)
    return pts


def cmd_equidist(args):
    from .green import bifurcation_raster, equidist_compare
    from .prep import prep_parameter_set
    pair = _load_family(args.family)
    window = _floats(args.window, 4, "--window")
    res = _ints(args.res, 2, "--res")
    ras = bifurcation_raster(pair, window, res, args.budget, args.threads)
    trend = []
    for N in range(2, args.pattern_max + 1):
        roots = _root_cloud(prep_parameter_set(pair, N, args.max_iter, args.threads))
        rep = equidist_compare(roots, ras, args.boxes)
        trend.append({"N": N, "roots": len(roots), "max_discrepancy": rep.max_discrepancy,
                      "flag": rep.flag})
    return {"trend": trend, "report": rep}


def cmd_closure(args):
    from .closure import ClosureProblem, find_relation, invariance_check, verify_specialization_prep
    pair = _load_family(args.family)
    prob = ClosureProblem(pair, args.dxy, args.dt, args.points)
    basis = find_relation(prob, threads=args.threads, keep_matrix=True)
    out = {"basis": basis,
           "invariance": [invariance_check(pair.F, q) if q.deg_y > 0 else None
                          for q in basis.relations]}
    if args.t0:
        out["specializations"] = verify_specialization_prep(
            pair, [_param(v) for v in args.t0.split(",")], args.max_iter)
    return out


# -- parser ----------------------------------------------------------------------------------

def _default_threads():
    return os.cpu_count() or 1


def build_parser():
    p = argparse.ArgumentParser(prog="skewdyn", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=_default_threads(),
                   help="cap on parallel workers (outputs do not depend on it)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(fn=fn)
        sp.add_argument("--out", help="write JSON here instead of stdout")
        sp.add_argument("--max-iter", type=int, default=2000)
        return sp

    sp = add("iterate", cmd_iterate, "orbit of the marked point")
    sp.add_argument("--family", required=True)
    sp.add_argument("--steps", type=int, default=3)
    sp.add_argument("--t0", help="specialize at this parameter (default: symbolic)")

    sp = add("prep", cmd_prep, "preperiodic parameters of one marked point")
    sp.add_argument("--family", required=True)
    sp.add_argument("--pattern-max", type=int, default=4)

    sp = add("prep-intersect", cmd_prep_intersect, "common preperiodic parameters of two marked points")
    sp.add_argument("--family", required=True)
    sp.add_argument("--second", help="family file of the second marked point (same f, g)")
    sp.add_argument("--point2", help="second marked point as 'a,b' polynomials in t")
    sp.add_argument("--pattern-max", type=int, default=4)

    sp = add("pcf", cmd_pcf, "necessary PCF conditions in the quadratic moduli space")
    sp.add_argument("--point", help="a,b,c,d")
    sp.add_argument("--locus-check", help="JSON file with polynomial a, b, c, d")

    sp = add("locus-check", cmd_locus_check, "exceptional-locus membership")
    sp.add_argument("--point", help="a,b,c,d")
    sp.add_argument("--family", help="JSON file with polynomial a, b, c, d")

    sp = add("bottcher", cmd_bottcher, "vertical Böttcher coefficients")
    sp.add_argument("--family", required=True)
    sp.add_argument("--order", type=int, default=6)
    sp.add_argument("--check-bounds", action="store_true")
    sp.add_argument("--relation", action="store_true", help="also build the orbit relation candidate")
    sp.add_argument("--shift", type=int, default=0)
    sp.add_argument("--no-strict", action="store_true", help="run the relation even if degree hypotheses fail")

    def raster_opts(sp, required):
        sp.add_argument("--window", required=required, help="x0,y0,x1,y1")
        sp.add_argument("--res", default="256,256", help="W,H")
        sp.add_argument("--budget", type=int, default=256)
        sp.add_argument("--out-prefix", default="raster")

    sp = add("green", cmd_green, "Green function values, ratio residuals, rasters")
    sp.add_argument("--family", required=True)
    sp.add_argument("--t", help="comma-separated parameters (complex allowed, e.g. 3+4j)")
    sp.add_argument("--tol", type=float, default=1e-10)
    raster_opts(sp, False)

    sp = add("raster", cmd_raster, "bifurcation raster of the marked point")
    sp.add_argument("--family", required=True)
    raster_opts(sp, True)

    sp = add("equidist", cmd_equidist, "root cloud vs raster boundary, box by box")
    sp.add_argument("--family", required=True)
    sp.add_argument("--pattern-max", type=int, default=4)
    sp.add_argument("--boxes", type=int, default=8)
    raster_opts(sp, True)

    sp = add("closure", cmd_closure, "polynomial relations along the symbolic orbit")
    sp.add_argument("--family", required=True)
    sp.add_argument("--dxy", type=int, required=True)
    sp.add_argument("--dt", type=int, default=0)
    sp.add_argument("--points", type=int, default=3)
    sp.add_argument("--t0", help="comma-separated parameters to certify")
    return p


_VALUE_OPTS = ("--window", "--point", "--point2", "--t", "--t0")


def _glue_values(argv):
    # "--window -2,-2,2,2" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_OPTS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_values(argv))
    try:
        result = args.fn(args)
        _emit(result, args.out)
    except SkewdynError as exc:
        sys.stderr.write(json.dumps(exc.payload(), sort_keys=True) + "\n")
        return 2 if isinstance(exc, ConfigError) else 1
    except (ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
