import io
import json
import math
import re

import pytest

from harmclose import (
    MapSpec,
    ReportDocument,
    SpecParseError,
    SpecValidationError,
    build_map,
    check_linear_sum,
    check_weighted_difference,
    from_family,
    parse_map_spec,
    trace_circle_image,
    write_curve_csv,
    write_report_json,
    write_svg,
)
from harmclose.geometry import trace_accurate
from harmclose.render_io import SvgOptions, dumps_report, fmt


def test_parse_family_specs():
    spec = parse_map_spec('{"family":"hypocycloid","N":8}')
    assert spec == MapSpec(family="hypocycloid", N=8)
    f = build_map(parse_map_spec('{"family":"log","m":1.0,"N":64}'))
    assert f.family_tag == "log" and f.order == 64 and f.params["m"] == 1.0
    f = build_map(parse_map_spec('{"family":"primitive","seq":"geometric","b":[0.1,0.2]}'))
    assert f.params["b"] == 0.1 + 0.2j and f.order == 64


def test_parse_explicit_spec():
    f = build_map(parse_map_spec('{"explicit":{"h":[[1,0],[0.5,0]],"g":[[0,0]]}}'))
    assert f.h[2] == 0.5 and f.g[1] == 0 and f.h.is_polynomial and f.order == 2


def test_malformed_json_reports_position():
    with pytest.raises(SpecParseError) as info:
        parse_map_spec('{\n  "family": "log",\n  "m": }')
    assert info.value.line == 3 and info.value.column == 8


@pytest.mark.parametrize("text,field", [
    ('{"family":"bogus"}', "family"),
    ('{"family":"log","m":"big"}', "m"),
    ('{"family":"log","N":6.5}', "N"),
    ('{"family":"log","b":0.2}', "b"),
    ('{"family":"primitive","b":[1,2,3]}', "b"),
    ('{"explicit":{"h":[[2,0]]}}', "h"),
    ('{"explicit":{"h":[[1,0]],"g":[[0]]}}', "g[0]"),
    ('{"family":"log","explicit":{}}', "family"),
])
def test_validation_errors_name_the_field(text, field):
    with pytest.raises(SpecValidationError) as info:
        parse_map_spec(text)
    assert info.value.field == field


def test_unknown_family_lists_known_ids():
    with pytest.raises(SpecValidationError, match="hypocycloid"):
        parse_map_spec('{"family":"bogus"}')


def test_csv_shape_and_format():
    buf = io.StringIO()
    n = write_curve_csv(trace_circle_image(from_family("identity", 4), 1.0, 4), buf)
    text = buf.getvalue()
    assert n == len(text.encode()) and "\r" not in text
    lines = text.splitlines()
    assert len(lines) == 5 and lines[0] == "t,u,v,du,dv"
    assert lines[1].startswith("-3.1415926535897931,-1.0,")
    with pytest.raises(ValueError):
        write_curve_csv([], buf)


def test_csv_hypocycloid_peak():
    buf = io.StringIO()
    write_curve_csv(trace_circle_image(from_family("hypocycloid", 8), 1.0, 720), buf)
    rows = [list(map(float, line.split(","))) for line in buf.getvalue().splitlines()[1:]]
    top = max(rows, key=lambda row: row[1])
    assert top[1] == pytest.approx(1.2, abs=1e-15) and top[0] == 0.0


def test_csv_parabolic_row_matches_formula():
    buf = io.StringIO()
    write_curve_csv(trace_accurate(from_family("parabolic"), 0.9, 720), buf)
    first = buf.getvalue().splitlines()[1].split(",")
    r = 0.9
    # theta = +-pi: u = (-2r^2 - r(1+r^2)) / (1+r)^4
    assert float(first[1]) == pytest.approx((-2 * r * r - r * (1 + r * r)) / (1 + r) ** 4, rel=1e-14)
    assert abs(float(first[2])) < 1e-15


def test_svg_structure_and_determinism():
    f = from_family("hypocycloid", 8)
    curves = [(r, trace_circle_image(f, r, 90)) for r in (0.5, 0.2, 1.0)]
    svg = write_svg(curves, SvgOptions(title="hypo"))
    assert svg == write_svg(curves, SvgOptions(title="hypo"))
    lines = re.findall(r'<polyline data-r="([^"]+)"[^>]*stroke-width="([^"]+)"', svg)
    assert [r for r, _ in lines] == ["0.2", "0.5", "1"]
    widths = [float(w) for _, w in lines]
    assert widths[-1] > max(widths[:-1])
    vb = [float(x) for x in re.search(r'viewBox="([^"]+)"', svg).group(1).split()]
    # u spans [-1.2, 1.2]; 5% of the span on each side
    assert vb[0] == pytest.approx(-1.2 - 0.12, abs=1e-3) and vb[2] == pytest.approx(2.64, abs=1e-3)


def test_svg_flips_y_and_overlays():
    f = from_family("identity", 4)
    svg = write_svg([(0.5, trace_circle_image(f, 0.5, 4))], SvgOptions(overlay_parabola=True))
    pts = re.search(r'data-r="0.5"[^>]*points="([^"]+)"', svg).group(1).split()
    # samples at t = -pi, -pi/2, 0, pi/2; Im w = -0.5 at t = -pi/2 is drawn at y = +0.5
    assert pts[1] == "0,0.5"
    assert 'class="overlay"' in svg


def test_svg_clip_splits_unbounded_curves():
    f = from_family("parabolic")
    svg = write_svg([(1 - 1e-6, trace_accurate(f, 1 - 1e-6, 720))], SvgOptions(clip=(-1, 3, -2, 2)))
    vb = [float(x) for x in re.search(r'viewBox="([^"]+)"', svg).group(1).split()]
    assert vb == pytest.approx([-1.2, -2.2, 4.4, 4.4])
    for pts in re.findall(r'points="([^"]+)"', svg):
        for p in pts.split():
            u, y = map(float, p.split(","))
            assert -5 <= u <= 7 and -6 <= y <= 6


def test_report_json_formatting():
    doc = ReportDocument({"family": "hypocycloid", "N": 8}, [check_linear_sum(from_family("hypocycloid", 8))])
    buf = io.StringIO()
    n = write_report_json(doc, buf)
    text = buf.getvalue()
    assert n == len(text.encode())
    data = json.loads(text)
    assert data["reports"][0]["partial_sum"] == 1.0
    assert '"partial_sum": 1.0' in text
    assert list(data) == sorted(data)
    assert text == dumps_report(doc)


def test_report_json_empty_and_nonfinite():
    data = json.loads(dumps_report(ReportDocument({"family": "identity"})))
    assert data["reports"] == [] and data["tool"] == "harmclose"
    data = json.loads(dumps_report(ReportDocument({}, [check_linear_sum(from_family("dilog", 8))])))
    assert data["reports"][0]["tail_bound"] == "inf"
    assert json.loads(dumps_report(ReportDocument({"z": 1 + 2j}, [])))["map_spec"]["z"] == [1.0, 2.0]


def test_report_dilog_margin_zero():
    rep = check_weighted_difference(from_family("dilog", 100).h)
    data = json.loads(dumps_report(ReportDocument({}, [rep])))
    assert abs(data["reports"][0]["margin"]) <= 1e-9


def test_fmt_round_trips_17_digits():
    for x in (0.1, 1 / 3, 1e-300, 2.0**60, -0.0, math.pi):
        assert float(fmt(x)) == x
    assert fmt(1.0) == "1.0" and fmt(math.inf) == "inf"
