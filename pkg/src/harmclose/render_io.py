"""Map specifications in, CSV / SVG / JSON out.

All writers are deterministic: identical inputs give identical bytes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence, TextIO

import numpy as np

from . import __version__
from .errors import ParameterError, SpecParseError, SpecValidationError
from .families import FAMILIES, from_family, param_value, parse_complex
from .geometry import CurveSample
from .series import CoeffSeq, HarmonicMap


@dataclass(frozen=True)
class MapSpec:
    """Either a named family (with params and N) or explicit coefficient lists.

    Explicit lists hold [re, im] pairs for c_1, c_2, ...; h must start with [1, 0].
    """

    family: Optional[str] = None
    params: dict[str, Any] = field(default_factory=dict)
    N: Optional[int] = None
    h: Optional[tuple[tuple[float, float], ...]] = None
    g: Optional[tuple[tuple[float, float], ...]] = None

    def to_json_obj(self) -> dict:
        if self.family is not None:
            obj = {"family": self.family, **{k: param_value(v) for k, v in self.params.items()}}
            if self.N is not None:
                obj["N"] = self.N
            return obj
        return {"explicit": {"h": [list(p) for p in self.h], "g": [list(p) for p in self.g]}}

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)


def _pairs(value, name):
    if not isinstance(value, list) or not value:
        raise SpecValidationError(f"{name} must be a nonempty list of [re, im] pairs", name)
    out = []
    for i, item in enumerate(value):
        if (not isinstance(item, list) or len(item) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in item)):
            raise SpecValidationError(f"{name}[{i}] must be a [re, im] pair of numbers", f"{name}[{i}]")
        out.append((float(item[0]), float(item[1])))
    return tuple(out)


def _normalize_param(name, value):
    if name == "b":
        return parse_complex(value, "b")
    if name == "m":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SpecValidationError("m must be a number", "m")
        return float(value)
    if name == "seq":
        if not isinstance(value, str):
            raise SpecValidationError("seq must be a string", "seq")
        return value
    return value


def spec_from_obj(obj) -> MapSpec:
    if not isinstance(obj, dict):
        raise SpecValidationError("map specification must be a JSON object")
    has_family, has_explicit = "family" in obj, "explicit" in obj
    if has_family == has_explicit:
        raise SpecValidationError("exactly one of 'family' or 'explicit' is required",
                                  "family" if has_family else "explicit")
    if has_family:
        family = obj["family"]
        if family not in FAMILIES:
            raise SpecValidationError(
                f"unknown family {family!r}; known families: {', '.join(FAMILIES)}", "family")
        N = obj.get("N")
        if N is not None and (isinstance(N, bool) or not isinstance(N, int)):
            raise SpecValidationError("N must be an integer", "N")
        allowed = set(FAMILIES[family].params)
        params = {}
        for key, value in obj.items():
            if key in ("family", "N"):
                continue
            if key not in allowed:
                raise SpecValidationError(f"family {family!r} has no parameter {key!r}", key)
            try:
                params[key] = _normalize_param(key, value)
            except ParameterError as exc:
                raise SpecValidationError(str(exc), key) from None
        return MapSpec(family=family, params=params, N=N)
    explicit = obj["explicit"]
    if not isinstance(explicit, dict) or set(explicit) - {"h", "g"} or "h" not in explicit:
        raise SpecValidationError("explicit must be an object with 'h' and optional 'g'", "explicit")
    h = _pairs(explicit["h"], "h")
    g = _pairs(explicit.get("g", [[0, 0]]), "g")
    if h[0] != (1.0, 0.0):
        raise SpecValidationError("explicit h must start with [1, 0] (a_1 = 1)", "h")
    return MapSpec(h=h, g=g)


def parse_map_spec(text: str) -> MapSpec:
    """Parse and validate a JSON map specification."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
                             exc.lineno, exc.colno) from None
    return spec_from_obj(obj)


def build_map(spec: MapSpec, default_N: int = 64) -> HarmonicMap:
    if spec.family is not None:
        return from_family(spec.family, spec.N if spec.N is not None else default_N, **spec.params)
    h = CoeffSeq.from_powers([complex(*p) for p in spec.h])
    g = CoeffSeq.from_powers([complex(*p) for p in spec.g])
    fmap = HarmonicMap.from_parts(h, g, None, {})
    return fmap


def fmt(x: float) -> str:
    """17 significant digits, always readable back as a JSON/CSV number."""
    s = format(float(x), ".17g")
    if s in ("inf", "-inf", "nan"):
        return s
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def _write(sink: TextIO, text: str) -> int:
    sink.write(text)
    return len(text.encode("utf-8"))


def write_curve_csv(samples: Sequence[CurveSample], sink: TextIO) -> int:
    """Header t,u,v,du,dv then one row per sample; returns bytes written."""
    if not samples:
        raise ValueError("no samples to write")
    lines = ["t,u,v,du,dv"]
    for s in samples:
        lines.append(",".join(fmt(x) for x in (s.t, s.w.real, s.w.imag, s.w1.real, s.w1.imag)))
    return _write(sink, "\n".join(lines) + "\n")


@dataclass
class SvgOptions:
    title: str = ""
    size: int = 600
    margin: float = 0.05
    clip: Optional[tuple[float, float, float, float]] = None  # u_min, u_max, v_min, v_max
    overlay_parabola: bool = False
    stroke: str = "#1f4e9c"


def _svg_num(x: float) -> str:
    s = f"{x:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _segments(w: np.ndarray, box) -> list[np.ndarray]:
    """Split a closed curve into runs that stay inside ``box``."""
    w = np.append(w, w[:1])
    if box is None:
        return [w]
    u0, u1, v0, v1 = box
    inside = (w.real >= u0) & (w.real <= u1) & (w.imag >= v0) & (w.imag <= v1) & np.isfinite(w)
    runs, cur = [], []
    for point, ok in zip(w, inside):
        if ok:
            cur.append(point)
        elif cur:
            runs.append(np.array(cur))
            cur = []
    if cur:
        runs.append(np.array(cur))
    return [r for r in runs if r.size > 1]


def write_svg(curves: Sequence[tuple[float, Sequence[CurveSample]]], options: SvgOptions = SvgOptions()) -> str:
    """One polyline per traced circle; the largest radius is drawn last and boldest."""
    if not curves:
        raise ValueError("no curves to draw")
    ordered = sorted(curves, key=lambda rc: rc[0])
    images = [(r, np.array([s.w for s in samples], dtype=complex)) for r, samples in ordered]
    if options.clip is not None:
        u0, u1, v0, v1 = options.clip
        # keep a wide band outside the view so clipped runs reach the edge
        du, dv = u1 - u0, v1 - v0
        band = (u0 - du, u1 + du, v0 - dv, v1 + dv)
    else:
        allw = np.concatenate([w for _, w in images])
        allw = allw[np.isfinite(allw)]
        u0, u1, v0, v1 = allw.real.min(), allw.real.max(), allw.imag.min(), allw.imag.max()
        band = None
    span = max(u1 - u0, v1 - v0, 1e-12)
    pad = options.margin * span
    # y axis flipped so Im w points up
    vb = (u0 - pad, -(v1 + pad), (u1 - u0) + 2 * pad, (v1 - v0) + 2 * pad)
    width = options.size
    height = max(1, int(round(width * vb[3] / vb[2])))
    stroke = span / 600.0
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="{" ".join(_svg_num(x) for x in vb)}">',
    ]
    if options.title:
        esc = options.title.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        out.append(f"<title>{esc}</title>")
    out.append(f'<rect x="{_svg_num(vb[0])}" y="{_svg_num(vb[1])}" width="{_svg_num(vb[2])}" '
               f'height="{_svg_num(vb[3])}" fill="white"/>')
    if options.overlay_parabola:
        v = np.linspace(v0 - pad, v1 + pad, 401)
        pts = " ".join(f"{_svg_num(-(y * y) - 0.25)},{_svg_num(-y)}" for y in v)
        # wide translucent band: stays visible under a boundary that coincides with it
        out.append(f'<polyline class="overlay" fill="none" stroke="#c0392b" stroke-opacity="0.45" '
                   f'stroke-width="{_svg_num(8 * stroke)}" points="{pts}"/>')
    last = len(images) - 1
    for i, (r, w) in enumerate(images):
        sw = 3 * stroke if i == last else stroke
        for run in _segments(w, band):
            pts = " ".join(f"{_svg_num(p.real)},{_svg_num(-p.imag)}" for p in run)
            out.append(f'<polyline data-r="{_svg_num(r)}" fill="none" stroke="{options.stroke}" '
                       f'stroke-width="{_svg_num(sw)}" points="{pts}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


@dataclass
class ReportDocument:
    map_spec: dict
    reports: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    version: str = __version__

    def to_obj(self) -> dict:
        return {
            "tool": "harmclose",
            "version": self.version,
            "map_spec": self.map_spec,
            "metadata": self.metadata,
            "reports": [r.to_dict() if hasattr(r, "to_dict") else r for r in self.reports],
        }


def _encode(obj, indent: int, level: int) -> str:
    pad, inner = " " * (indent * level), " " * (indent * (level + 1))
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # non-finite values are not JSON numbers
        return json.dumps(fmt(x)) if not math.isfinite(x) else fmt(x)
    if isinstance(obj, complex):
        return _encode([obj.real, obj.imag], indent, level)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return json.dumps(obj.value)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_encode(obj[k], indent, level + 1)}"
                 for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [inner + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_report(doc: ReportDocument) -> str:
    return _encode(doc.to_obj(), 2, 0) + "\n"


def write_report_json(doc: ReportDocument, sink: TextIO) -> int:
    """Sorted keys, 17 significant digits; non-finite numbers become strings."""
    return _write(sink, dumps_report(doc))


def load_report(text: str) -> dict:
    return json.loads(text)


def curves_for(fmap: HarmonicMap, radii: Iterable[float], steps: int, exact: bool = False):
    from .geometry import trace_circle_image

    return [(r, trace_circle_image(fmap, r, steps, exact)) for r in radii]
