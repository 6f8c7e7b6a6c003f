"""Command-line entry point: check, construct, trace, render, report, reproduce-paper.

Exit status: 0 when the requested verdicts certify the map, 1 when they do
not, 2 for usage, parameter or IO errors.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .criteria import (
    SampledPositivityReport,
    Verdict,
    best_phi,
    check_binomial_convexity,
    check_curvature_bound,
    check_fejer_positivity,
    check_linear_sum,
    check_local_univalence,
    check_rotated_difference,
    check_square_sum,
    check_weighted_difference,
)
from .errors import HarmcloseError
from .families import FAMILIES, boundary_radius
from .geometry import DEFAULT_RADII, DEFAULT_STEPS, GridSpec, trace_accurate
from .nullseq import ConvexNullSeq, construct_cumulative, construct_primitive, validate_convex_null
from .render_io import (
    MapSpec,
    ReportDocument,
    SvgOptions,
    build_map,
    dumps_report,
    parse_map_spec,
    spec_from_obj,
    write_curve_csv,
    write_svg,
)
from .series import HarmonicMap, couple_g_from_h

CONDITIONS = ("linear_sum", "rotated_difference", "square_sum", "weighted_difference",
              "binomial_convexity", "curvature_bound", "local_univalence")
# these constrain h only and certify f together with local univalence
H_ONLY = ("square_sum", "weighted_difference", "binomial_convexity")


class UsageError(Exception):
    pass


def _radii(text: Optional[str]) -> tuple[float, ...]:
    if text is None:
        return DEFAULT_RADII
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"--grid-radii must be comma-separated numbers, got {text!r}") from None


def _grid(args) -> GridSpec:
    try:
        return GridSpec(_radii(args.grid_radii), args.steps)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _spec_from_args(args) -> MapSpec:
    if (args.family is None) == (args.spec is None):
        raise UsageError("give exactly one of --family or --spec")
    if args.spec is not None:
        try:
            text = Path(args.spec).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {args.spec}: {exc.strerror}") from None
        return parse_map_spec(text)
    obj = {"family": args.family, "N": args.N}
    allowed = FAMILIES[args.family].params if args.family in FAMILIES else ()
    for name in ("m", "b", "seq"):
        value = getattr(args, name, None)
        if value is None:
            continue
        if name not in allowed:
            raise UsageError(f"--{name} does not apply to family {args.family!r}")
        obj[name] = _parse_b(value) if name == "b" else value
    return spec_from_obj(obj)


def _parse_b(text: str):
    try:
        z = complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"--b must be a real or complex number like 0.25 or 0.1+0.2j, got {text!r}") from None
    return [z.real, z.imag] if z.imag else z.real


def _coupled(fmap: HarmonicMap, p: int = 2, tol: float = 1e-12) -> bool:
    """True when the stored g satisfies g' = z^(p-1) h' coefficientwise."""
    want = couple_g_from_h(fmap.h.as_polynomial(), p).coeffs[: fmap.order + 1]
    return bool(np.all(np.abs(fmap.g.coeffs - want) <= tol))


def _guarded(condition_id, grid, run):
    try:
        return run()
    except HarmcloseError as exc:
        # a vanishing h' on the grid refutes the sampled claim rather than aborting
        return SampledPositivityReport(condition_id, -math.inf, (math.nan, math.nan), grid,
                                       -0.5, False, {"error": str(exc)})


def run_checks(fmap: HarmonicMap, grid: GridSpec, conditions: Sequence[str],
               phi: Optional[float] = None, alpha: float = 0.0, beta: float = 0.0) -> list:
    reports = []
    for cond in conditions:
        if cond == "linear_sum":
            reports.append(check_linear_sum(fmap))
        elif cond == "rotated_difference":
            if phi is None:
                reports.append(best_phi(fmap)[1])
            else:
                reports.append(check_rotated_difference(fmap, phi))
        elif cond == "square_sum":
            reports.append(check_square_sum(fmap.h))
        elif cond == "weighted_difference":
            reports.append(check_weighted_difference(fmap.h))
        elif cond == "binomial_convexity":
            reports.append(check_binomial_convexity(fmap.h, alpha, beta))
        elif cond == "curvature_bound":
            rep = _guarded(cond, grid, lambda: check_curvature_bound(fmap.h, grid))
            params = dict(rep.params, coupled=_coupled(fmap))
            reports.append(SampledPositivityReport(rep.condition_id, rep.min_value, rep.argmin, rep.grid,
                                                   rep.claim_threshold, rep.holds_on_grid, params))
        elif cond == "local_univalence":
            reports.append(check_local_univalence(fmap, grid))
    if fmap.family_tag in ("primitive", "cumulative") and fmap.params.get("seq") in ("harmonic", "geometric"):
        seq = ConvexNullSeq.named(fmap.params["seq"])
        reports.append(check_fejer_positivity(seq, grid))
    return reports


def certified(reports, fmap: HarmonicMap) -> bool:
    """Whether some sufficient condition certifies f as close-to-convex."""
    by_id = {r.condition_id: r for r in reports}
    lu = by_id.get("local_univalence")
    lu_ok = lu is not None and lu.passed
    for r in reports:
        if r.condition_id in ("linear_sum", "rotated_difference") and r.verdict is Verdict.PASS:
            return True
        if r.condition_id in H_ONLY and r.verdict is Verdict.PASS and lu_ok:
            return True
        if r.condition_id == "curvature_bound" and r.passed and r.params.get("coupled"):
            return True
        if r.condition_id == "fejer_positivity" and r.passed:
            # the constructors already enforced a convex null sequence and |b| < 1
            return True
    return False


def _requested_ok(reports, requested) -> bool:
    chosen = [r for r in reports if r.condition_id in requested]
    return all(r.passed and getattr(r, "verdict", None) is not Verdict.PASS_TRUNCATED for r in chosen)


def _emit(text: str, out: Optional[str]):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror}") from None


def _conditions(args) -> list[str]:
    if args.condition:
        return list(dict.fromkeys(args.condition))
    conds = [c for c in CONDITIONS if c != "binomial_convexity"]
    if args.alpha is not None or args.beta is not None:
        conds.insert(4, "binomial_convexity")
    return conds


def _check_document(args):
    spec = _spec_from_args(args)
    fmap = build_map(spec, args.N)
    grid = _grid(args)
    conds = _conditions(args)
    alpha = 0.0 if args.alpha is None else args.alpha
    beta = 0.0 if args.beta is None else args.beta
    reports = run_checks(fmap, grid, conds, args.phi, alpha, beta)
    ok = _requested_ok(reports, conds) if args.condition else certified(reports, fmap)
    doc = ReportDocument(spec.to_json_obj(), reports, {
        "grid": grid.to_dict(),
        "truncation_order": fmap.order,
        "alpha": alpha,
        "beta": beta,
        "phi": "search" if args.phi is None else args.phi,
        "certified": ok,
    })
    return doc, ok


def cmd_check(args) -> int:
    doc, ok = _check_document(args)
    _emit(dumps_report(doc), args.out)
    for r in doc.reports:
        sys.stderr.write(f"{r.condition_id}: {r.verdict.value}\n")
    return 0 if ok else 1


def cmd_report(args) -> int:
    doc, _ = _check_document(args)
    _emit(dumps_report(doc), args.out)
    return 0


def cmd_construct(args) -> int:
    try:
        seq = ConvexNullSeq.named(args.seq or "harmonic")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    b = complex(_parse_b(args.b)) if args.b is not None else 0.25
    build = construct_primitive if args.kind == "primitive" else construct_cumulative
    fmap = build(seq, b, args.N)
    validation = validate_convex_null(seq)
    spec = {"family": args.kind, "seq": fmap.params["seq"], "b": [b.real, b.imag], "N": args.N}
    meta = {
        "sequence_validation": validation.to_dict(),
        "h": [[c.real, c.imag] for c in fmap.h.coeffs[1:]],
        "g": [[c.real, c.imag] for c in fmap.g.coeffs[1:]],
    }
    _emit(dumps_report(ReportDocument(spec, [], meta)), args.out)
    return 0


def cmd_trace(args) -> int:
    fmap = build_map(_spec_from_args(args), args.N)
    r = boundary_radius(fmap) if args.r is None else args.r
    samples = trace_accurate(fmap, r, args.steps)
    buf = io.StringIO()
    write_curve_csv(samples, buf)
    _emit(buf.getvalue(), args.out)
    return 0


def _clip(text: Optional[str]):
    if text is None:
        return None
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError:
        vals = ()
    if len(vals) != 4 or vals[0] >= vals[1] or vals[2] >= vals[3]:
        raise UsageError("--clip must be umin,umax,vmin,vmax with umin < umax and vmin < vmax")
    return vals


def _figure(fmap: HarmonicMap, radii, steps, options: SvgOptions) -> str:
    curves = [(r, trace_accurate(fmap, r, steps)) for r in radii]
    return write_svg(curves, options)


def cmd_render(args) -> int:
    fmap = build_map(_spec_from_args(args), args.N)
    radii = tuple(r for r in _radii(args.grid_radii)) + (boundary_radius(fmap),)
    radii = tuple(sorted(set(radii)))
    svg = _figure(fmap, radii, args.steps,
                  SvgOptions(title=args.title or "", clip=_clip(args.clip), overlay_parabola=args.parabola))
    _emit(svg, args.out)
    return 0


# name, spec, clip window, parabola overlay
FIGURES = (
    ("fig1_parabolic", {"family": "parabolic"}, (-1.5, 4.5, -3.0, 3.0), True),
    ("fig2_hypocycloid", {"family": "hypocycloid"}, None, False),
    ("fig3_log", {"family": "log", "m": 1.0}, (-1.5, 6.0, -3.0, 3.0), False),
    ("fig4_dilog", {"family": "dilog"}, None, False),
    ("fig5_primitive", {"family": "primitive", "seq": "harmonic", "b": 0.25}, None, False),
    ("fig6_cumulative", {"family": "cumulative", "seq": "geometric", "b": 0.25}, (-2.0, 8.0, -4.0, 4.0), False),
)


def cmd_reproduce(args) -> int:
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create {out}: {exc.strerror}") from None
    grid = _grid(args)
    examples, all_ok = [], True
    for name, obj, clip, parabola in FIGURES:
        spec = spec_from_obj(dict(obj, N=args.N))
        fmap = build_map(spec, args.N)
        radii = tuple(sorted(set(grid.radii + (boundary_radius(fmap),))))
        svg = _figure(fmap, radii, args.steps, SvgOptions(title=name, clip=clip, overlay_parabola=parabola))
        _emit(svg, str(out / f"{name}.svg"))
        conds = [c for c in CONDITIONS if c != "binomial_convexity"]
        reports = run_checks(fmap, grid, conds)
        ok = certified(reports, fmap)
        all_ok &= ok
        examples.append({
            "figure": f"{name}.svg",
            "map_spec": spec.to_json_obj(),
            "truncation_order": fmap.order,
            "certified": ok,
            "reports": [r.to_dict() for r in reports],
        })
    seqs = {name: validate_convex_null(ConvexNullSeq.named(name)).to_dict() for name in ("harmonic", "geometric")}
    doc = ReportDocument({"examples": [e["map_spec"] for e in examples]}, examples,
                         {"grid": grid.to_dict(), "convex_null_sequences": seqs, "all_certified": all_ok})
    _emit(dumps_report(doc), str(out / "report.json"))
    return 0 if all_ok else 1


def _add_map_flags(p, with_grid=True):
    p.add_argument("--family", help=f"family id: {', '.join(FAMILIES)}")
    p.add_argument("--spec", help="path to a JSON map specification")
    p.add_argument("--m", type=float, help="log family parameter, 0 < m <= 1")
    p.add_argument("--b", help="co-analytic multiplier for constructed families")
    p.add_argument("--seq", help="convex null sequence: harmonic or geometric")
    p.add_argument("--N", type=int, default=64, help="truncation order (default 64)")
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS, help="angular samples (default 720)")
    if with_grid:
        p.add_argument("--grid-radii", help="comma-separated radii in (0, 1)")
    p.add_argument("--out", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="harmclose", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("check", "run sufficient conditions; exit 0 if one certifies the map"),
                            ("report", "like check, but always exits 0 after writing the report")):
        p = sub.add_parser(name, help=help_text)
        _add_map_flags(p)
        p.add_argument("--phi", type=float, help="rotation angle in [0, 2pi) (default: search)")
        p.add_argument("--alpha", type=float, help="binomial exponent alpha (default 0)")
        p.add_argument("--beta", type=float, help="binomial exponent beta (default 0)")
        p.add_argument("--condition", action="append", choices=CONDITIONS,
                       help="restrict to these conditions; all must pass (repeatable)")
    p = sub.add_parser("construct", help="build a map from a convex null sequence")
    p.add_argument("--kind", choices=("primitive", "cumulative"), default="primitive")
    p.add_argument("--seq", default="harmonic")
    p.add_argument("--b", default=None)
    p.add_argument("--N", type=int, default=64)
    p.add_argument("--out")
    p = sub.add_parser("trace", help="CSV samples of one circle image")
    _add_map_flags(p, with_grid=False)
    p.add_argument("--r", type=float, help="circle radius (default: boundary)")
    p = sub.add_parser("render", help="SVG of circle images")
    _add_map_flags(p)
    p.add_argument("--clip", help="view window umin,umax,vmin,vmax (write --clip=-1,3,-2,2 for negatives)")
    p.add_argument("--parabola", action="store_true", help="overlay u = -v^2 - 1/4")
    p.add_argument("--title")
    p = sub.add_parser("reproduce-paper", help="write the six example figures and report.json")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--N", type=int, default=64)
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    p.add_argument("--grid-radii")
    return parser


COMMANDS = {
    "check": cmd_check,
    "report": cmd_report,
    "construct": cmd_construct,
    "trace": cmd_trace,
    "render": cmd_render,
    "reproduce-paper": cmd_reproduce,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return COMMANDS[args.command](args)
    except (UsageError, HarmcloseError, ValueError, OSError) as exc:
        sys.stderr.write(f"harmclose: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
