"""Command-line front end.

Every subcommand writes a JSON report ``{tool, version, subcommand, inputs,
results, warnings}`` (floats with 17 significant digits) to stdout or to
``--report PATH``. Exit status is 0 for any completed run, whatever the
verdict, and 2 for bad input.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from . import geometry as geo
from .certify import OBJECTIVES, brute_force_oracle, build_constraints, fit_max_margin
from .convert import POLE_TOL, convert_params, convert_samples
from .errors import DomainError, NumericError, PoleError, UnsupportedError, ValidationError
from .kernel import is_causal, load_kernel, support_lower_bound
from .laplace import DEFAULT_GRID, HalfPlaneGrid, read_samples, sweep, write_samples
from .params import AdmittanceParams, ScatteringParams, load_params
from .svg import panel_grid_svg, region_svg
from .testfn import bump_corpus, default_corpus, exp_corpus
from .timedomain import DEFAULT_TOL, causality_check, falsify

TOOL = "pseudopass"
EXIT_INPUT = 2

CORPORA = {"default": default_corpus, "bump": bump_corpus, "exp": exp_corpus}


# -- report serialization ----------------------------------------------------

def _num(x):
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def _str(s):
    out = ['"']
    for ch in s:
        if ch in '"\\':
            out.append("\\" + ch)
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def dumps(obj, indent=0):
    """JSON text with fixed float formatting; complex numbers become ``[re, im]``."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return f"[{_num(obj.real)}, {_num(obj.imag)}]"
    if isinstance(obj, str):
        return _str(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{_str(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [f"{inner}{dumps(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def make_report(subcommand, inputs, results, warnings=()):
    return {"tool": TOOL, "version": __version__, "subcommand": subcommand,
            "inputs": inputs, "results": results, "warnings": list(warnings)}


def _emit(report, path):
    text = dumps(report) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_text(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# -- argument helpers --------------------------------------------------------

def _real(text):
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _grid(text):
    try:
        return HalfPlaneGrid.from_string(text)
    except ValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _box(text):
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("box must be lo,hi") from exc
    return lo, hi


def _oracle_grid(text):
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("oracle grid must be x1lo,x1hi,x2lo,x2hi,step") from exc
    if len(vals) != 5 or not vals[4] > 0:
        raise argparse.ArgumentTypeError("oracle grid must be x1lo,x1hi,x2lo,x2hi,step")
    return vals


def _kind(args, default="admittance"):
    if getattr(args, "scat", False):
        return "scattering"
    if getattr(args, "adm", False):
        return "admittance"
    return default


def _params(args):
    """Params from ``--params`` or zero params of the ``--adm/--scat`` kind."""
    if args.params:
        p = load_params(args.params)
        if (args.adm or args.scat) and p.kind != _kind(args):
            raise ValidationError(f"--{'scat' if args.scat else 'adm'} conflicts with {p.kind} params file")
        return p
    return ScatteringParams.zero() if args.scat else AdmittanceParams.zero()


def _add_family(parser, required=False):
    g = parser.add_mutually_exclusive_group(required=required)
    g.add_argument("--adm", action="store_true", help="admittance family")
    g.add_argument("--scat", action="store_true", help="scattering family")


def _grid_dict(g):
    return {"re_range": list(g.re_range), "im_range": list(g.im_range),
            "n_re": g.n_re, "n_im": g.n_im, "spacing": g.spacing}


def _region_dict(r):
    return {"shape": r.shape, "case": r.case, "family": r.family,
            "center": r.center, "radius": r.radius, "bound": r.bound,
            "orientation": r.orientation, "description": r.describe()}


# -- subcommands -------------------------------------------------------------

def cmd_verify(args):
    k = load_kernel(args.kernel)
    p = _params(args)
    corpus = CORPORA[args.corpus]()
    verdict = falsify(k, p, corpus, tol=args.tol)
    caus = causality_check(k, args.t0, corpus)
    warnings = [f"quadrature failure on {name}: {msg}" for name, msg in verdict.failures]
    if not k.is_tempered:
        warnings.append("kernel has an exponentially growing tail (not tempered)")
    w = verdict.witness
    results = {
        "verdict": verdict.status,
        "min_residual": verdict.min_residual,
        "evaluated": verdict.evaluated,
        "witness": None if w is None else {
            "function": w.function, "horizon": w.horizon,
            "residual": w.residual, "normalized_residual": w.normalized},
        "causality_check": {
            "causal": caus.causal, "max_abs": caus.max_abs,
            "witness": None if caus.witness is None else {
                "function": caus.witness[0], "xi": caus.witness[1], "psi": caus.witness[2]}},
        "support_lower_bound": support_lower_bound(k),
        "support_causal": is_causal(k),
    }
    inputs = {"kernel": args.kernel, "kernel_digest": k.digest(), "params": p.to_dict(),
              "corpus": args.corpus, "corpus_size": len(corpus), "tol": args.tol, "t0": args.t0}
    _emit(make_report("verify", inputs, results, warnings), args.report)


def cmd_sweep(args):
    k = load_kernel(args.kernel)
    p = _params(args)
    res = sweep(k, args.grid, p)
    warnings = [f"transform diverges at s = ({_num(s.real)}, {_num(s.imag)})" for s in res.skipped]
    if not res.tempered:
        warnings.append("kernel has an exponentially growing tail (not tempered)")
    if args.csv:
        write_samples(args.csv, res.samples(), {"residual": res.residual})
    i = res.argmin
    results = {
        "n_points": int(res.s.size),
        "n_skipped": len(res.skipped),
        "min_residual": res.min_residual,
        "argmin_s": res.argmin_s,
        "argmin_w": None if i is None else complex(res.w[i]),
        "negative_count": int(np.sum(res.residual < 0)),
    }
    inputs = {"kernel": args.kernel, "kernel_digest": k.digest(), "params": p.to_dict(),
              "grid": _grid_dict(args.grid), "csv": args.csv}
    _emit(make_report("sweep", inputs, results, warnings), args.report)


def cmd_classify(args):
    kind = _kind(args)
    if kind == "admittance":
        r = geo.classify_admittance(args.x1, args.x2, exact=args.exact)
        names = ("c", "d")
    else:
        r = geo.classify_scattering(args.x1, args.x2, exact=args.exact)
        names = ("F", "G")
    print(r.describe())
    if args.svg:
        title = f"({names[0]},{names[1]}) = ({_num(args.x1)}, {_num(args.x2)})"
        _write_text(args.svg, region_svg(r, title))
    if args.report:
        inputs = {"kind": kind, names[0]: args.x1, names[1]: args.x2, "exact": args.exact,
                  "svg": args.svg}
        _emit(make_report("classify", inputs, _region_dict(r)), args.report)


def cmd_plot(args):
    text = panel_grid_svg()
    if args.svg:
        _write_text(args.svg, text)
    else:
        sys.stdout.write(text)


def cmd_fit(args):
    samples = read_samples(args.samples)
    kind = _kind(args)
    cs = build_constraints(samples, args.N, kind)
    fit = fit_max_margin(cs, box=args.box, objective=args.objective)
    warnings = []
    if fit.degenerate:
        warnings.append("no samples: every parameter vector is feasible")
    if fit.box_active:
        warnings.append(f"box bound active on coordinates {list(fit.box_active)}")
    if fit.status != "optimal":
        warnings.append(f"LP status {fit.status}")
    results = {"fit": fit.to_dict()}
    if args.oracle:
        if args.N != 0:
            raise ValidationError("--oracle requires N = 0")
        grid = args.oracle_grid
        if grid is None:
            lo, hi = args.box or (-2.0, 2.0)
            grid = (lo, hi, lo, hi, 1e-2)
        orc = brute_force_oracle(samples, kind, grid)
        x1, x2, best = orc.best()
        ok = None
        if fit.x is not None:
            step = grid[4]
            tol = step * float(np.abs(cs.A).sum(axis=1).max(initial=0.0))
            in_cell = orc.cell_margin(*fit.x) >= -tol
            ok = bool(in_cell and (not len(cs) or abs(fit.margin - best) <= tol + 1e-12))
        results["oracle"] = {"grid": list(grid), "n_feasible": int(orc.feasible.sum()),
                             "n_cells": int(orc.margin.size), "best": [x1, x2],
                             "best_margin": best, "agrees": ok}
        if ok is False:
            warnings.append("LP optimum disagrees with the brute-force oracle")
    inputs = {"samples": args.samples, "n_samples": len(samples), "N": args.N, "kind": kind,
              "objective": args.objective, "box": list(args.box) if args.box else None}
    _emit(make_report("fit", inputs, results, warnings), args.report)


def cmd_convert(args):
    direction = "scat->adm" if args.scat else "adm->scat"
    inputs = {"direction": direction, "tol": args.tol}
    results = {}
    warnings = []
    if args.samples:
        samples = read_samples(args.samples)
        rep = convert_samples(samples, direction, args.tol)
        if args.csv:
            write_samples(args.csv, rep.samples)
        results = rep.to_dict()
        warnings += [f"pole at s = ({_num(s.real)}, {_num(s.imag)}): sample excluded"
                     for s in rep.pole_warnings]
        inputs.update(samples=args.samples, n_samples=len(samples), csv=args.csv)
    if args.params:
        p = load_params(args.params)
        expected = "scattering" if args.scat else "admittance"
        if p.kind != expected:
            raise ValidationError(f"direction {direction} needs {expected} params, got {p.kind}")
        results["params"] = convert_params(p).to_dict()
        inputs["params"] = p.to_dict()
    if not args.samples and not args.params:
        raise ValidationError("convert needs a samples CSV and/or --params")
    _emit(make_report("convert", inputs, results, warnings), args.report)


# -- parser ------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog=TOOL, description="Pseudo-passivity checks for convolution kernels.")
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def with_report(sp):
        sp.add_argument("--report", metavar="PATH", help="write the JSON report here instead of stdout")
        return sp

    sp = with_report(sub.add_parser("verify", help="time-domain falsification and causality probe"))
    sp.add_argument("kernel", help="kernel spec JSON")
    sp.add_argument("--params", help="params JSON (default: zero params)")
    _add_family(sp)
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL, help="falsification tolerance")
    sp.add_argument("--corpus", choices=sorted(CORPORA), default="default")
    sp.add_argument("--t0", type=float, default=0.0, help="causality probe start time")
    sp.set_defaults(func=cmd_verify)

    sp = with_report(sub.add_parser("sweep", help="range residuals over a right half-plane grid"))
    sp.add_argument("kernel")
    sp.add_argument("--params")
    _add_family(sp)
    sp.add_argument("--grid", type=_grid, default=DEFAULT_GRID, metavar="re0,re1,nre,im0,im1,nim")
    sp.add_argument("--csv", metavar="PATH", help="write samples with a residual column")
    sp.set_defaults(func=cmd_sweep)

    sp = with_report(sub.add_parser("classify", help="shape of the admissible region for N = 0"))
    _add_family(sp, required=True)
    sp.add_argument("x1", type=_real, help="c (admittance) or F (scattering)")
    sp.add_argument("x2", type=_real, help="d (admittance) or G (scattering)")
    sp.add_argument("--exact", action="store_true", help="no tolerance on the discriminant")
    sp.add_argument("--svg", metavar="PATH")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("plot", help="3x3 panel figure of admittance regions")
    sp.add_argument("--svg", metavar="PATH", help="output file (default stdout)")
    sp.set_defaults(func=cmd_plot)

    sp = with_report(sub.add_parser("fit", help="fit parameters to sampled transfer values"))
    sp.add_argument("samples", help="TransferSample CSV")
    _add_family(sp)
    sp.add_argument("--N", type=int, default=0)
    sp.add_argument("--objective", choices=OBJECTIVES, default="max-margin")
    sp.add_argument("--box", type=_box, metavar="lo,hi")
    sp.add_argument("--oracle", action="store_true", help="cross-check with a brute-force grid scan (N = 0)")
    sp.add_argument("--oracle-grid", type=_oracle_grid, metavar="x1lo,x1hi,x2lo,x2hi,step")
    sp.set_defaults(func=cmd_fit)

    sp = with_report(sub.add_parser("convert", help="admittance <-> scattering conversion"))
    sp.add_argument("samples", nargs="?", help="TransferSample CSV")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--adm", action="store_true", help="input is admittance data (default)")
    g.add_argument("--scat", action="store_true", help="input is scattering data")
    sp.add_argument("--params", help="also convert a params JSON")
    sp.add_argument("--tol", type=float, default=POLE_TOL, help="pole tolerance on |1 + w|")
    sp.add_argument("--csv", metavar="PATH", help="write converted samples")
    sp.set_defaults(func=cmd_convert)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (ValidationError, DomainError, UnsupportedError, PoleError, OSError) as exc:
        print(f"{TOOL} {args.subcommand}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as exc:
        print(f"{TOOL} {args.subcommand}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
