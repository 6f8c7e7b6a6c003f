import json

import pytest

from harmclose.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_hypocycloid_passes(capsys):
    code, out, err = run(capsys, "check", "--family", "hypocycloid", "--grid-radii", "0.5,0.9", "--steps", "64")
    assert code == 0
    doc = json.loads(out)
    by_id = {r["condition_id"]: r for r in doc["reports"]}
    assert by_id["linear_sum"]["verdict"] == "Pass" and by_id["linear_sum"]["partial_sum"] == 1.0
    assert "linear_sum: Pass" in err


def test_check_log_with_fixed_phi(capsys):
    code, out, _ = run(capsys, "check", "--family", "log", "--m", "1", "--phi", "0", "--steps", "64")
    assert code == 0
    rot = [r for r in json.loads(out)["reports"] if r["condition_id"] == "rotated_difference"][0]
    assert rot["verdict"] == "Pass" and rot["params"]["phi"] == 0.0


def test_requested_condition_failure_exits_one(capsys):
    code, _, _ = run(capsys, "check", "--family", "log", "--m", "1", "--condition", "linear_sum")
    assert code == 1
    code, _, _ = run(capsys, "check", "--family", "hypocycloid", "--condition", "linear_sum",
                     "--condition", "rotated_difference")
    assert code == 1


def test_uncertified_map_exits_one(tmp_path, capsys):
    spec = tmp_path / "map.json"
    spec.write_text('{"explicit":{"h":[[1,0],[0.9,0]],"g":[[0.5,0]]}}')
    code, _, _ = run(capsys, "check", "--spec", str(spec), "--steps", "64")
    assert code == 1


def test_binomial_condition_added_with_flags(capsys):
    code, out, _ = run(capsys, "check", "--family", "dilog", "--alpha", "1", "--steps", "64")
    ids = [r["condition_id"] for r in json.loads(out)["reports"]]
    assert "binomial_convexity" in ids and code == 0


@pytest.mark.parametrize("argv", [
    ["check", "--family", "nope"],
    ["check"],
    ["check", "--family", "log", "--m", "2"],
    ["check", "--family", "identity", "--m", "0.5"],
    ["check", "--spec", "/nonexistent/map.json"],
    ["check", "--family", "identity", "--grid-radii", "0.5,2"],
    ["trace", "--family", "dilog", "--r", "1.0"],
    ["render", "--family", "identity", "--clip", "1,0,0,1"],
    ["bogus-command"],
])
def test_usage_errors_exit_two(argv, capsys):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_report_always_exits_zero(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "report", "--family", "log", "--m", "1", "--condition", "linear_sum", "--out", str(out))
    assert code == 0
    assert json.loads(out.read_text())["metadata"]["certified"] is False


def test_construct(tmp_path, capsys):
    out = tmp_path / "c.json"
    code, _, _ = run(capsys, "construct", "--kind", "cumulative", "--seq", "geometric", "--b", "0.25",
                     "--N", "8", "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["map_spec"]["family"] == "cumulative"
    assert doc["metadata"]["h"][2][0] == pytest.approx((3 - 2.0 ** -1) / 3)
    assert doc["metadata"]["sequence_validation"]["valid"] is True
    assert run(capsys, "construct", "--seq", "fibonacci")[0] == 2
    assert run(capsys, "construct", "--b", "1.5")[0] == 2


def test_trace_and_render(tmp_path, capsys):
    csv = tmp_path / "t.csv"
    assert main(["trace", "--family", "identity", "--steps", "4", "--out", str(csv)]) == 0
    assert len(csv.read_text().splitlines()) == 5
    code, out, _ = run(capsys, "trace", "--family", "dilog", "--r", "0.5", "--steps", "8")
    assert code == 0 and out.count("\n") == 9
    svg = tmp_path / "p.svg"
    assert main(["render", "--family", "parabolic", "--parabola", "--clip=-1,3,-2,2",
                 "--steps", "90", "--out", str(svg)]) == 0
    assert svg.read_text().startswith("<?xml")
