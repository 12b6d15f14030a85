"""Command-line front end: outputs, exit codes and serialization."""

import csv
import io
import json

import pytest

from pinchuk_geometry.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_map_and_curve(capsys):
    code, out, _ = run(capsys, "eval", "--x", "1", "--y", "1")
    js = json.loads(out)
    assert code == 0 and js["P"] == "1" and js["x"] == "1"
    code, out, _ = run(capsys, "eval", "--s", "0")
    assert json.loads(out) == {"s": "0", "p": "-1", "q": "-163/4"}


def test_eval_needs_a_point(capsys):
    code, _, err = run(capsys, "eval", "--x", "1")
    assert code == 2 and "usage error" in err


def test_bad_rational_is_a_usage_error(capsys):
    code, _, _ = run(capsys, "eval", "--x", "one", "--y", "1")
    assert code == 2


def test_unknown_command(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_curve_csv_has_the_anchors(capsys):
    code, out, _ = run(capsys, "curve", "--samples", "100")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["s", "p", "q"]
    body = {r[0]: (r[1], r[2]) for r in rows[1:]}
    assert body["0"] == ("-1", "-163/4")
    assert body["1"] == ("0", "0")
    assert body["-1"] == ("0", "208")
    assert len(rows) - 1 >= 100


def test_curve_checks_and_svg(tmp_path, capsys):
    chk, svg = tmp_path / "checks.json", tmp_path / "curve.svg"
    code, _, _ = run(capsys, "curve", "--samples", "5", "--checks", str(chk), "--svg", str(svg))
    assert code == 0
    assert json.loads(chk.read_text())["singular_params"] == ["0"]
    assert svg.read_text().lstrip().startswith("<?xml")


def test_curve_rejects_empty_range(capsys):
    assert run(capsys, "curve", "--lo", "1", "--hi", "0")[0] == 2


def test_fiber_at_the_origin(capsys):
    code, out, _ = run(capsys, "fiber", "--a", "0", "--b", "0")
    js = json.loads(out)
    assert code == 0 and js["count"] == 0 and js["certified"]


def test_probe_on_the_curve(capsys):
    code, out, _ = run(capsys, "probe", "--s", "1", "--direction", "x")
    js = json.loads(out)
    assert code == 0 and js["lc_x"] == "0" and js["vanishes"] is True


def test_probe_argument_conflict(capsys):
    assert run(capsys, "probe", "--s", "1", "--a", "0", "--b", "0")[0] == 2


def test_ih_pinchuk_model(capsys):
    code, out, _ = run(capsys, "ih", "--model", "pinchuk", "--perversity", "zero",
                       "--support", "c")
    js = json.loads(out)
    assert code == 0 and js["betti1"] == 0
    code, out, _ = run(capsys, "ih", "--model", "pinchuk", "--support", "cl")
    assert json.loads(out)["betti1"] == 0


def test_ih_bad_perversity_is_a_computation_error(capsys):
    code, _, err = run(capsys, "ih", "--model", "pinchuk", "--perversity", "0,1,0")
    assert code == 1 and json.loads(err)["error"] == "InvalidPerversity"


def test_ih_unknown_model(capsys):
    assert run(capsys, "ih", "--model", "klein")[0] == 2


def test_models_list_and_export_roundtrip(tmp_path, capsys):
    code, out, _ = run(capsys, "models", "list")
    assert "pinchuk" in json.loads(out)["models"]
    path = tmp_path / "pt.json"
    assert run(capsys, "models", "export", "pinched_torus", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "ih", "--model", str(path))
    assert json.loads(out)["betti"] == [1, 0, 1]


def test_models_export_svg(tmp_path, capsys):
    svg = tmp_path / "g.svg"
    code, _, _ = run(capsys, "models", "export", "pinchuk", "--out", str(tmp_path / "m.json"),
                     "--svg", str(svg))
    assert code == 0 and "<svg" in svg.read_text()


def test_trace_identity_reports_an_empty_cloud(capsys):
    code, out, _ = run(capsys, "trace", "--map", "identity", "--samples", "500")
    js = json.loads(out)
    assert code == 0 and js["empty"] is True


def test_trace_rejects_nonpositive_radius(capsys):
    assert run(capsys, "trace", "--radii", "0", "10")[0] == 2


def test_trace_outputs_are_reproducible(tmp_path, capsys):
    outs = []
    for k in range(2):
        c = tmp_path / f"t{k}.csv"
        code, out, _ = run(capsys, "trace", "--samples", "4000", "--csv", str(c))
        assert code == 0
        outs.append((out, c.read_bytes()))
    assert outs[0] == outs[1]
    js = json.loads(outs[0][0])
    assert js["max_scaled_distance"]["1000.0"] <= 1e-2


def test_verify_jacobian_is_seeded(capsys):
    a = run(capsys, "verify-jacobian", "--samples", "50", "--seed", "3")
    b = run(capsys, "verify-jacobian", "--samples", "50", "--seed", "3")
    assert a[0] == 0 and a[1] == b[1]
    assert json.loads(a[1])["all_positive"] is True
