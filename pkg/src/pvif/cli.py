"""Command-line front end.

Complex numbers are written "re,im" or just "re".  JSON output carries
"schema": "pvif/1" and a "meta" block (version, argv, timestamp) unless
--no-meta is given.  Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

import mpmath

from . import __version__

SCHEMA = "pvif/1"


class UsageError(Exception):
    pass


def complex_arg(text: str) -> complex:
    """Parse 're,im' or 're' into a complex number."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]))
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're,im' or 're', got {text!r}")


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _json_value(v):
    if isinstance(v, dict):
        return {str(k): _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if isinstance(v, (bool, str, int)) or v is None:
        return v
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    if isinstance(v, mpmath.mpf):
        return float(v)
    if isinstance(v, float):
        return v
    try:
        z = complex(v)
    except TypeError:
        return str(v)
    return [z.real, z.imag]


# subcommands; each returns (result, csv_rows or None)


def _triple(args):
    from .monodromy import MonodromyTriple

    return MonodromyTriple.make(args.x0, args.x1, args.xinf, args.mu)


def cmd_connect(args):
    from .connection import CriticalData, Point, critical_to_triple, triple_to_critical

    extended = args.precision == "extended"
    if args.sigma is not None:
        if args.a is None:
            raise UsageError("--sigma needs --a")
        c = CriticalData(args.sigma, args.a, args.mu, Point(args.point))
        t = critical_to_triple(c, extended=extended)
        return {"triple": t.to_json(), "critical": c.to_json()}, None
    if None in (args.x0, args.x1, args.xinf):
        raise UsageError("give --x0 --x1 --xinf, or --sigma --a")
    t = _triple(args)
    c = triple_to_critical(t, args.point, args.branch, extended=extended)
    return {"triple": t.to_json(), "critical": c.to_json()}, None


def cmd_braid(args):
    from .monodromy import apply_braid, quadratic_form

    t = _triple(args)
    b = apply_braid(t, args.word)
    return {"input": t.to_json(), "word": args.word, "output": b.to_json(),
            "quadratic_form": quadratic_form(b)}, None


def cmd_stokes(args):
    from .monodromy import cp_d_stokes, stokes_orbit_contains

    S = cp_d_stokes(args.d)
    out = {"d": args.d, "upper": [complex(v).real for v in S.upper()]}
    if args.orbit:
        try:
            target = [float(v) for v in args.orbit.split(",")]
        except ValueError:
            raise UsageError(f"--orbit expects comma-separated reals, got {args.orbit!r}") from None
        out["orbit_target"] = target
        out["orbit_word"] = stokes_orbit_contains(S, target, depth=args.depth)
    rows = [["i", "j", "s_ij"]] + [[i + 1, j + 1, int(S.matrix[i, j].real)]
                                   for i in range(S.n) for j in range(i + 1, S.n)]
    return out, rows


def cmd_pvi_series(args):
    from .connection import CriticalData, Point
    from .frobenius import local_solution_for
    from .local import local_residual, local_series_at_zero

    c = CriticalData(args.sigma, args.a, args.mu, Point(args.point))
    sol = local_solution_for(c, args.order)
    res = local_residual(local_series_at_zero(CriticalData(args.sigma, args.a, args.mu), args.order))
    terms = [{"m": m, "n": n, "exponent": sol.y.exponent((m, n)), "coeff": c_}
             for (m, n), c_ in sol.y.sorted_items()]
    rows = [["m", "n", "exp_re", "exp_im", "coeff_re", "coeff_im"]] + [
        [t["m"], t["n"], complex(t["exponent"]).real, complex(t["exponent"]).imag,
         complex(t["coeff"]).real, complex(t["coeff"]).imag] for t in terms]
    return {"critical": c.to_json(), "order": args.order, "ramification": sol.y.ram,
            "residual_relative_grade": res.relative_grade, "terms": terms}, rows


def cmd_pvi_integrate(args):
    from .painleve import PathSpec, PviPoint, integrate_pvi

    path = PathSpec((args.x, *args.to), rtol=args.rtol, atol=args.rtol * 1e-2)
    traj = integrate_pvi(PviPoint(args.x, args.y, args.yp), path, args.mu)
    end = traj.points[-1]
    rows = list(csv.reader(io.StringIO(traj.to_csv())))
    return {"flag": traj.flag, "location": traj.location, "steps": len(traj.points),
            "end": {"x": end.x, "y": end.y, "yprime": end.yprime}}, rows


def cmd_picard(args):
    from .special_solutions import picard_eval, picard_monodromy, picard_residual

    pts = [picard_eval(args.nu1, args.nu2, x, args.nterms) for x in args.x]
    res = picard_residual(args.nu1, args.nu2, args.x, args.nterms)
    rows = [["x_re", "x_im", "y_re", "y_im"]] + [[p.x.real, p.x.imag, p.y.real, p.y.imag] for p in pts]
    return {"nu1": args.nu1, "nu2": args.nu2,
            "values": [{"x": p.x, "y": p.y, "yprime": p.yprime} for p in pts],
            "residual": res, "monodromy": picard_monodromy(args.nu1, args.nu2).to_json()}, rows


def _closed_form_rows(cf):
    keys = sorted({k for t in cf.terms() for k in t})
    rows = [keys]
    for t in cf.terms():
        rows.append([_json_value(t.get(k)) for k in keys])
    return rows


def cmd_frobenius(args):
    from .connection import triple_to_critical
    from .frobenius import closed_form_invert, local_solution_for, parametric_generic

    t = _triple(args)
    c = triple_to_critical(t, args.point)
    cf = closed_form_invert(parametric_generic(local_solution_for(c, args.order), args.k0))
    return {"triple": t.to_json(), "critical": c.to_json(), "closed_form": cf.to_json()}, _closed_form_rows(cf)


def cmd_qh(args):
    from .frobenius import qh_reconstruct

    r = qh_reconstruct(args.order, args.q0)
    rows = [["k", "N_k", "value_re", "value_im", "relative_residual"]] + [
        [k, n, complex(v).real, complex(v).imag, res] for k, v, n, res in r.nk]
    return {"order": args.order, "q0": args.q0,
            "nk": [{"k": k, "value": v, "N_k": n, "relative_residual": res} for k, v, n, res in r.nk],
            "shortcut_residual": r.shortcut_residual, "x_leading": r.x_leading,
            "closed_form": r.closed_form.to_json()}, rows


def _nk_table(K):
    from .kontsevich import compute_nk

    return compute_nk(K)


def cmd_nk(args):
    t = _nk_table(args.max)
    rows = [["k", "N_k"]] + [[k, n] for k, n in enumerate(t.N, 1)]
    return {"K": t.K, "N": [str(n) if n.bit_length() > 53 else n for n in t.N]}, rows


def _fit(args):
    from .kontsevich import fit_asymptotics

    t = _nk_table(args.K)
    dps = 100 if args.precision == "extended" else 50
    return t, fit_asymptotics(t, args.N0, args.N, dps=dps)


def cmd_fit(args):
    _, f = _fit(args)
    out = f.to_json()
    return out, [list(out), list(out.values())]


def cmd_singular(args):
    from .kontsevich import singular_exponent_probe, singular_point_analysis, tail_defect_estimate

    t, f = _fit(args)
    s = singular_point_analysis(t, f, args.t1, args.t3, a_eval=args.a_eval)
    out = {"fit": f.to_json(), "a_eval": args.a_eval, **s.to_json(),
           "tail_defect_estimate": tail_defect_estimate(f, min(f.N, t.K))}
    if args.probe:
        out["exponent_probe"] = singular_exponent_probe(t, f).to_json()
    return out, None


def cmd_catalog(args):
    from .catalog import CATALOG, run_catalog_entry

    if args.list:
        return {"entries": [{"case": c, "variant": v, "target": e.target} for (c, v), e in CATALOG.items()]}, None
    r = run_catalog_entry(args.case, args.variant, args.order, args.k0)
    return {"case": args.case, "variant": args.variant, "ok": r.ok, "verified_terms": r.verified_terms,
            "target": r.entry.target, "critical": r.critical.to_json(),
            "checks": [{"name": n, "value": v, "expected": e, "ok": ok} for n, v, e, ok in r.checks],
            "closed_form": r.closed_form.to_json()}, _closed_form_rows(r.closed_form)


def cmd_acceptance(args):
    from .acceptance import run_acceptance

    rep = run_acceptance(args.suite, only=args.only,
                         log=(lambda line: print(line, file=sys.stderr)) if args.verbose else None)
    rows = [["criterion", "status", "seconds"]] + [[r.number, r.status, round(r.seconds, 2)] for r in rep.results]
    return rep.to_json(), rows


# parser


def _add_triple(p, required=True):
    p.add_argument("--x0", type=complex_arg, required=required)
    p.add_argument("--x1", type=complex_arg, required=required)
    p.add_argument("--xinf", type=complex_arg, required=required)
    p.add_argument("--mu", type=complex_arg, required=True)


def _add_fit(p):
    p.add_argument("--K", type=positive_int, default=1000, help="largest k of the recurrence")
    p.add_argument("--N0", type=positive_int, default=900, help="first k of the fit window")
    p.add_argument("--N", type=positive_int, default=None, help="last k of the fit window (default K)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "table"), default=None)
    common.add_argument("--precision", choices=("double", "extended"), default="double",
                        help="extended uses high-precision Gamma and fit arithmetic")
    common.add_argument("--no-meta", action="store_true", help="omit the meta block (version, argv, time)")

    parser = argparse.ArgumentParser(prog="pvif", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"pvif {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("connect", parents=[common], help="monodromy triple <-> critical data (sigma, a)")
    _add_triple(p, required=False)
    p.add_argument("--sigma", type=complex_arg)
    p.add_argument("--a", type=complex_arg)
    p.add_argument("--point", choices=("zero", "one", "infinity"), default="zero")
    p.add_argument("--branch", default="principal")
    p.set_defaults(func=cmd_connect)

    p = sub.add_parser("braid", parents=[common], help="braid action on a triple")
    _add_triple(p)
    p.add_argument("--word", required=True, help='generators b1 b2 B1 B2, e.g. "b1 b1 B2"')
    p.set_defaults(func=cmd_braid)

    p = sub.add_parser("stokes", parents=[common], help="canonical Stokes matrix of QH*(CP^d)")
    p.add_argument("--d", type=positive_int, required=True)
    p.add_argument("--orbit", help="upper entries to search for in the braid/sign orbit, e.g. 3,3,3")
    p.add_argument("--depth", type=int, default=4)
    p.set_defaults(func=cmd_stokes)

    p = sub.add_parser("pvi-series", parents=[common], help="local expansion at a critical point")
    p.add_argument("--sigma", type=complex_arg, required=True)
    p.add_argument("--a", type=complex_arg, required=True)
    p.add_argument("--mu", type=complex_arg, required=True)
    p.add_argument("--order", type=positive_int, default=8)
    p.add_argument("--point", choices=("zero", "one", "infinity"), default="zero")
    p.set_defaults(func=cmd_pvi_series)

    p = sub.add_parser("pvi-integrate", parents=[common], help="integrate PVI along a polygonal path")
    p.add_argument("--x", type=complex_arg, required=True)
    p.add_argument("--y", type=complex_arg, required=True)
    p.add_argument("--yp", type=complex_arg, required=True)
    p.add_argument("--mu", type=complex_arg, required=True)
    p.add_argument("--to", type=complex_arg, nargs="+", required=True, help="waypoints after --x")
    p.add_argument("--rtol", type=float, default=1e-10)
    p.set_defaults(func=cmd_pvi_integrate)

    p = sub.add_parser("picard", parents=[common], help="Picard solutions of PVI at mu = 1/2")
    p.add_argument("--nu1", type=complex_arg, required=True)
    p.add_argument("--nu2", type=complex_arg, required=True)
    p.add_argument("--x", type=complex_arg, nargs="+", required=True)
    p.add_argument("--nterms", type=positive_int, default=40)
    p.set_defaults(func=cmd_picard)

    p = sub.add_parser("frobenius", parents=[common], help="closed-form WDVV solution from a triple")
    _add_triple(p)
    p.add_argument("--point", choices=("zero", "one", "infinity"), default="zero")
    p.add_argument("--order", type=positive_int, default=16)
    p.add_argument("--k0", type=complex_arg, default=1.0)
    p.set_defaults(func=cmd_frobenius)

    p = sub.add_parser("qh", parents=[common], help="quantum cohomology of CP^2 from the (3,3,3) transcendent")
    p.add_argument("--order", type=positive_int, default=16)
    p.add_argument("--q0", type=complex_arg, default=1.0)
    p.set_defaults(func=cmd_qh)

    p = sub.add_parser("nk", parents=[common], help="rational plane curve counts N_k")
    p.add_argument("--max", type=positive_int, required=True)
    p.set_defaults(func=cmd_nk)

    p = sub.add_parser("fit", parents=[common], help="fit A_k ~ b a^k k^(-7/2)")
    _add_fit(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("singular", parents=[common], help="canonical coordinates at X0 = ln(1/a)")
    _add_fit(p)
    p.add_argument("--t1", type=complex_arg, default=1.0)
    p.add_argument("--t3", type=complex_arg, default=1.0)
    p.add_argument("--a-eval", type=float, default=None, help="evaluate at ln(1/a_eval) instead of the fit")
    p.add_argument("--probe", action="store_true", help="also estimate the exponent of Phi'''")
    p.set_defaults(func=cmd_singular)

    p = sub.add_parser("catalog", parents=[common], help="algebraic solutions and their closed forms")
    p.add_argument("--case", default="A3")
    p.add_argument("--variant", default="i")
    p.add_argument("--order", type=positive_int, default=16)
    p.add_argument("--k0", type=complex_arg, default=1.0)
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("acceptance", parents=[common], help="run the acceptance suite")
    p.add_argument("--suite", choices=("fast", "full"), default="fast")
    p.add_argument("--only", type=positive_int, nargs="+")
    p.add_argument("--verbose", action="store_true", help="progress lines on stderr")
    p.set_defaults(func=cmd_acceptance)
    return parser


DEFAULT_FORMAT = {"nk": "csv"}


def _emit(fmt, command, result, rows, meta, out):
    if fmt == "csv":
        if rows is None:
            raise UsageError(f"{command} has no CSV form")
        w = csv.writer(out, lineterminator="\n")
        for r in rows:
            w.writerow(r)
        return
    if fmt == "table":
        for k, v in _json_value(result).items():
            out.write(f"{k:>24}  {json.dumps(v) if not isinstance(v, str) else v}\n")
        return
    doc = {"schema": SCHEMA, "command": command, "result": _json_value(result)}
    if meta is not None:
        doc["meta"] = meta
    out.write(json.dumps(doc, sort_keys=True) + "\n")


def main(argv=None, out=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # argparse has already printed the message
        return int(e.code or 0)
    fmt = args.format or DEFAULT_FORMAT.get(args.command, "json")
    meta = None if args.no_meta else {"version": __version__, "argv": argv, "timestamp": time.time()}
    try:
        result, rows = args.func(args)
        ok = not (args.command == "acceptance" and not result["ok"])
        _emit(fmt, args.command, result, rows, meta, out)
        return 0 if ok else 1
    except UsageError as e:
        print(f"pvif: error: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, ArithmeticError) as e:
        tag = getattr(e, "tag", type(e).__name__)
        doc = {"schema": SCHEMA, "command": args.command,
               "error": {"tag": tag, "type": type(e).__name__, "message": str(e).strip("'\"")}}
        if meta is not None:
            doc["meta"] = meta
        out.write(json.dumps(doc, sort_keys=True) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
