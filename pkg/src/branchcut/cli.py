"""Command-line front end: portraits, convergence diagnostics, power flow.

Exit codes: 0 success, 2 nonconvergence verdict, 3 input error,
4 precision floor. BRANCHCUT_BITS overrides the default precision.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import analysis, hem, pade, series, svg
from .analysis import Plane
from .errors import (
    BranchcutError,
    DegeneracyError,
    InputError,
    InsufficientSampleError,
    NearPoleError,
    NonConvergenceError,
    PrecisionFloorError,
)
from .kernel import BigComplex, PrecisionContext
from .series import ExpansionPoint

EXIT_OK = 0
EXIT_NONCONVERGENCE = 2
EXIT_INPUT = 3
EXIT_PRECISION = 4


@dataclass(frozen=True)
class RunConfig:
    """Validated per-invocation settings shared by all subcommands."""

    command: str
    bits: int
    out: str


class _Parser(argparse.ArgumentParser):
    # argparse's default error path exits with status 2, which collides
    # with the nonconvergence code; route everything through InputError.
    def error(self, message):
        raise InputError(message)


def _resolve_bits(value: Optional[int]) -> int:
    if value is None:
        raw = os.environ.get("BRANCHCUT_BITS", "512")
        try:
            value = int(raw)
        except ValueError:
            raise InputError(f"BRANCHCUT_BITS must be an integer, got {raw!r}") from None
    try:
        PrecisionContext(value)
    except ValueError as e:
        raise InputError(str(e)) from None
    return value


def _parse_degrees(text: str) -> List[int]:
    try:
        degs = [int(p) for p in text.split(",") if p.strip() != ""]
    except ValueError:
        raise InputError(f"bad degree list {text!r}") from None
    if not degs:
        raise InputError("empty degree list")
    return degs


def _parse_point(text: str, ctx: PrecisionContext) -> BigComplex:
    if "," in text:
        parts = text.split(",")
        if len(parts) != 2:
            raise InputError(f"bad point {text!r}; use RE,IM or a complex literal")
        try:
            return ctx.big(parts[0].strip(), parts[1].strip())
        except ValueError:
            raise InputError(f"bad point {text!r}") from None
    try:
        z = complex(text)
    except ValueError:
        raise InputError(f"bad point {text!r}; use RE,IM or a complex literal") from None
    return ctx.big(z.real, z.imag)


def _parse_rect(text: str) -> Tuple[float, float, float, float]:
    try:
        vals = [float(p) for p in text.split(",")]
    except ValueError:
        raise InputError(f"bad rectangle {text!r}") from None
    if len(vals) != 4 or vals[0] >= vals[1] or vals[2] >= vals[3]:
        raise InputError(f"bad rectangle {text!r}; use X0,X1,Y0,Y1 with X0<X1, Y0<Y1")
    return vals[0], vals[1], vals[2], vals[3]


def _outdir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def _write_json(path: str, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _float_or_none(x):
    return None if x is None else float(x)


def _portrait_products(out, base, clean, doublets, title):
    csv_path = os.path.join(out, base + ".csv")
    svg_path = os.path.join(out, base + ".svg")
    analysis.write_portrait_csv(csv_path, clean, doublets)
    rows = []
    for r in clean.poles:
        rows.append(("pole", float(r.re), float(r.im)))
    for r in clean.zeros:
        rows.append(("zero", float(r.re), float(r.im)))
    for pl, zr in doublets:
        rows.append(("doublet_pole", float(pl.re), float(pl.im)))
        rows.append(("doublet_zero", float(zr.re), float(zr.im)))
    svg.write_scatter(svg_path, rows, title)
    return csv_path, svg_path


def _reach_table(clean, targets, band):
    table = {}
    for t in targets:
        v = analysis.reachability(clean, t, band)
        table[str(t)] = {
            "status": v.status.value,
            "blocking_abscissa": _float_or_none(v.blocking_abscissa),
        }
    return table


def cmd_case(args) -> int:
    bits = _resolve_bits(args.bits)
    ctx = PrecisionContext(bits)
    out = _outdir(args.out)
    spec = series.case_spec(args.case, ctx)
    m = args.degree
    ser = series.expand_at_infinity(spec, 2 * m + 1, ctx)
    pa = pade.build(ser, m, m + 1)
    port = analysis.portrait(pa, Plane.INVERSE_ALPHA)
    clean, doublets = analysis.froissart_filter(port)
    extent = analysis.real_axis_extent(clean, args.band)
    targets = [0.0] + sorted(
        {float(r.re) for r in spec.all_roots() if r.im == 0}
    )
    base = f"case_{args.case.upper()}_deg{m}"
    csv_path, svg_path = _portrait_products(
        out, base, clean, doublets, f"case {args.case.upper()} [{m}/{m + 1}]"
    )
    report = {
        "case": args.case.upper(),
        "degree": m,
        "bits": bits,
        "plane": clean.plane.value,
        "band": args.band,
        "real_axis_extent": None if extent is None else [float(extent[0]), float(extent[1])],
        "doublet_count": len(doublets),
        "excluded_at_infinity": port.excluded_at_infinity,
        "reachability": _reach_table(clean, targets, args.band),
    }
    _write_json(os.path.join(out, base + ".json"), report)
    print(f"wrote {base}.csv/.svg/.json (extent={report['real_axis_extent']})")
    return EXIT_OK


def cmd_logfn(args) -> int:
    bits = _resolve_bits(args.bits)
    ctx = PrecisionContext(bits)
    out = _outdir(args.out)
    spec = series.load_spec(args.specfile, ctx)
    m = args.degree
    expansion = ExpansionPoint(args.expansion)
    if expansion is ExpansionPoint.INFINITY:
        ser = series.expand_at_infinity(spec, 2 * m + 1, ctx)
    else:
        ser = series.expand_at_zero(spec, 2 * m + 1, ctx)
    plane = Plane(args.plane) if args.plane else (
        Plane.INVERSE_ALPHA if expansion is ExpansionPoint.INFINITY else Plane.ALPHA
    )
    pa = pade.build(ser, m, m + 1)
    port = analysis.portrait(pa, plane)
    clean, doublets = analysis.froissart_filter(port)
    extent = analysis.real_axis_extent(clean, args.band)
    allroots = list(clean.poles) + list(clean.zeros)
    max_im = max((abs(float(r.im)) for r in allroots), default=None)
    try:
        ks = float(analysis.equilibrium_check(clean))
    except InsufficientSampleError:
        ks = None
    base = f"logfn_{expansion.value}_deg{m}"
    _portrait_products(out, base, clean, doublets, f"[{m}/{m + 1}] {expansion.value} ({plane.value})")
    report = {
        "expansion": expansion.value,
        "degree": m,
        "bits": bits,
        "plane": plane.value,
        "band": args.band,
        "max_abs_im_root": max_im,
        "real_axis_extent": None if extent is None else [float(extent[0]), float(extent[1])],
        "ks_distance": ks,
        "doublet_count": len(doublets),
        "excluded_at_infinity": port.excluded_at_infinity,
    }
    _write_json(os.path.join(out, base + ".json"), report)
    print(f"wrote {base}.csv/.svg/.json (max|Im|={max_im})")
    return EXIT_OK


def cmd_convergence(args) -> int:
    bits = _resolve_bits(args.bits)
    ctx = PrecisionContext(bits)
    out = _outdir(args.out)
    spec = series.load_spec(args.specfile, ctx)
    point = _parse_point(args.point, ctx)
    degrees = _parse_degrees(args.degrees)
    report = analysis.convergence_factor(
        spec, point, degrees, ctx, ExpansionPoint(args.expansion), cap=args.cap
    )
    obj = {
        "point": [float(point.re), float(point.im)],
        "bits": bits,
        "expansion": args.expansion,
        "degrees": list(report.degrees),
        "errors": [float(e) for e in report.errors],
        "g_est": float(report.g_est),
        "g_step": float(report.g_step),
        "g_pred": _float_or_none(report.g_pred),
    }
    _write_json(os.path.join(out, "convergence.json"), obj)
    print(f"wrote convergence.json (g_est={obj['g_est']:.6g})")
    return EXIT_OK


def cmd_badness(args) -> int:
    bits = _resolve_bits(args.bits)
    ctx = PrecisionContext(bits)
    out = _outdir(args.out)
    spec = series.load_spec(args.specfile, ctx)
    rect = _parse_rect(args.rect)
    degrees = _parse_degrees(args.degrees)
    expansion = ExpansionPoint(args.expansion)
    N = 2 * max(degrees) + 1
    if expansion is ExpansionPoint.INFINITY:
        ser = series.expand_at_infinity(spec, N, ctx)
    else:
        ser = series.expand_at_zero(spec, N, ctx)
    rows = []
    for m in degrees:
        try:
            pa = pade.build(ser, m, m + 1)
        except DegeneracyError as e:
            rows.append({"degree": m, "badness": None, "error": str(e)})
            continue
        d = analysis.badness_detail(spec, pa, rect, args.grid, args.eps)
        rows.append(
            {
                "degree": m,
                "badness": d.badness,
                "bad": d.bad,
                "evaluated": d.evaluated,
                "skipped": d.skipped,
            }
        )
    obj = {
        "bits": bits,
        "rect": list(rect),
        "grid": args.grid,
        "eps": args.eps,
        "expansion": expansion.value,
        "rows": rows,
    }
    _write_json(os.path.join(out, "badness.json"), obj)
    print(f"wrote badness.json ({len(rows)} degrees)")
    return EXIT_OK


def cmd_hem(args) -> int:
    bits = _resolve_bits(args.bits)
    ctx = PrecisionContext(bits)
    out = _outdir(args.out)
    net = hem.load_network(args.netfile, ctx)
    if args.alpha <= 0:
        raise InputError("--alpha must be positive")
    sol = hem.solve(net, args.alpha, max_m=args.max_m, tol=args.tol)
    obj = {
        "alpha": args.alpha,
        "bits": bits,
        "max_m": args.max_m,
        "tol": args.tol,
        "converged": sol.converged,
        "mismatch": float(sol.mismatch),
        "voltages": {
            bus.id: [float(v.re), float(v.im)] for bus, v in zip(net.buses, sol.voltages)
        },
        "trace": {
            "degrees": list(sol.report.degrees),
            "errors": [float(e) for e in sol.report.errors],
        },
        "g_est": float(sol.report.g_est),
    }
    _write_json(os.path.join(out, "hem.json"), obj)
    verdict = "converged" if sol.converged else "nonconvergent"
    print(f"wrote hem.json ({verdict}, mismatch={obj['mismatch']:.3e})")
    return EXIT_OK if sol.converged else EXIT_NONCONVERGENCE


def cmd_snbp(args) -> int:
    bits = _resolve_bits(args.bits)
    ctx = PrecisionContext(bits)
    out = _outdir(args.out)
    net = hem.load_network(args.netfile, ctx)
    est = hem.snbp_estimate(net, max_m=args.max_m, horizon=args.horizon)
    obj = {
        "bits": bits,
        "max_m": args.max_m,
        "horizon": args.horizon,
        "detected": est.detected,
        "alpha": est.alpha,
        "spread": est.spread,
        "per_m": {str(k): v for k, v in est.per_m.items()},
    }
    _write_json(os.path.join(out, "snbp.json"), obj)
    if est.detected:
        print(f"wrote snbp.json (alpha={est.alpha:.6g}, spread={est.spread:.3%})")
    else:
        print("wrote snbp.json (no SNBP detected below horizon)")
    return EXIT_OK


def build_parser() -> _Parser:
    p = _Parser(prog="branchcut", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--bits", type=int, default=None, help="significand bits (default: BRANCHCUT_BITS or 512)")
        sp.add_argument("--out", default=".", help="output directory")

    sp = sub.add_parser("case", help="portrait of a built-in case A-D")
    sp.add_argument("case", choices=["A", "B", "C", "D", "a", "b", "c", "d"])
    sp.add_argument("--degree", type=int, default=99)
    sp.add_argument("--band", type=float, default=0.05, help="|Im| band for on-axis poles")
    common(sp)
    sp.set_defaults(fn=cmd_case)

    sp = sub.add_parser("logfn", help="portrait of a function-spec file")
    sp.add_argument("specfile")
    sp.add_argument("--expansion", choices=["zero", "infinity"], default="infinity")
    sp.add_argument("--degree", type=int, default=25)
    sp.add_argument("--plane", choices=["alpha", "inverse-alpha"], default=None,
                    help="default: inverse-alpha for infinity, alpha for zero")
    sp.add_argument("--band", type=float, default=0.05)
    common(sp)
    sp.set_defaults(fn=cmd_logfn)

    sp = sub.add_parser("convergence", help="error-vs-degree fit at a point")
    sp.add_argument("specfile")
    sp.add_argument("--point", required=True, help="complex point: RE,IM or literal like 4+0j")
    sp.add_argument("--degrees", default="10,15,20,25")
    sp.add_argument("--expansion", choices=["zero", "infinity"], default="infinity")
    sp.add_argument("--cap", type=float, default=None, help="cut capacity for the predicted factor")
    common(sp)
    sp.set_defaults(fn=cmd_convergence)

    sp = sub.add_parser("badness", help="grid census of the eps-bad set")
    sp.add_argument("specfile")
    sp.add_argument("--rect", default="-4,4,-4,4")
    sp.add_argument("--grid", type=int, default=64)
    sp.add_argument("--eps", type=float, default=1e-3)
    sp.add_argument("--degrees", default="25,51,99")
    sp.add_argument("--expansion", choices=["zero", "infinity"], default="infinity")
    common(sp)
    sp.set_defaults(fn=cmd_badness)

    sp = sub.add_parser("hem", help="holomorphic-embedding power flow")
    sp.add_argument("netfile")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--max-m", type=int, default=30, dest="max_m")
    sp.add_argument("--tol", type=float, default=1e-10)
    common(sp)
    sp.set_defaults(fn=cmd_hem)

    sp = sub.add_parser("snbp", help="saddle-node bifurcation estimate")
    sp.add_argument("netfile")
    sp.add_argument("--max-m", type=int, default=30, dest="max_m")
    sp.add_argument("--horizon", type=float, default=None)
    common(sp)
    sp.set_defaults(fn=cmd_snbp)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except PrecisionFloorError as e:
        print(f"error: {e} (raise --bits)", file=sys.stderr)
        return EXIT_PRECISION
    except (NonConvergenceError, DegeneracyError, NearPoleError, InsufficientSampleError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except OSError as e:
        print(f"error: {getattr(e, 'filename', None) or ''} {e}".strip(), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
