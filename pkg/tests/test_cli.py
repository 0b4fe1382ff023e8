import csv
import io
import json

import pytest

from isodil.cli import dumps, main

HAAR = "masks/haar2.json"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture(autouse=True)
def _repo_root(monkeypatch, request):
    monkeypatch.chdir(request.config.rootpath)


def test_analyze_example2_json():
    code, text = run("analyze", "0,-2;1,1", "--json")
    assert code == 0
    report = json.loads(text)
    assert report["det"] == 2 and report["trace"] == 1
    assert report["angle"]["kind"] == "incommensurable"
    assert report["angle"]["cos_theta_radical"] == "√2/4"
    assert report["angle"]["cos_2theta"] == "-3/4"
    assert report["integer_form"] == [[2, 1], [1, 4]]
    assert list(report) == [
        "matrix", "det", "trace", "rotational", "angle", "Q", "R",
        "residuals", "invariant_form", "integer_form",
    ]


def test_analyze_identity_not_rotational():
    code, text = run("analyze", "1,0;0,1", "--json")
    assert code == 0
    report = json.loads(text)
    assert report["rotational"] is False
    assert report["Q"] is None


def test_analyze_quincunx():
    code, text = run("analyze", "1,-1;1,1", "--json")
    report = json.loads(text)
    assert report["Q"] == [[1, 0], [0, 1]]
    assert report["angle"]["theta_signed"] == pytest.approx(0.7853981633974483, abs=1e-15)
    assert report["invariant_form"] == [[1, 0], [0, 1]]


def test_analyze_human_readable():
    code, text = run("analyze", "0,-2;1,1")
    assert code == 0
    assert "incommensurable" in text and "√2/4" in text


@pytest.mark.parametrize("text, token", [("0,-2;1,q", "'q'"), ("0,-2", "two rows")])
def test_analyze_parse_error(text, token, capsys):
    code, _ = run("analyze", text)
    assert code == 2
    assert token in capsys.readouterr().err


def _table(*extra):
    code, text = run("table", "--csv", *extra)
    assert code == 0
    return list(csv.DictReader(io.StringIO(text)))


def test_table_csv_shape():
    rows = _table("--det-max", "5", "--trace-max", "4")
    assert len(rows) == 25
    assert list(rows[0]) == ["det", "trace", "angle_kind", "angle_exact", "angle_radians", "commensurable"]
    cell = {(r["det"], r["trace"]): r for r in rows}
    assert cell[("2", "1")]["angle_exact"] == "±arccos(√2/4)"
    assert cell[("2", "1")]["commensurable"] == "false"
    assert cell[("1", "3")]["angle_kind"] == "inapplicable"


def test_table_small():
    (row,) = _table("--det-max", "1", "--trace-max", "0")
    assert row["angle_exact"] == "±pi/2"
    rows = _table("--det-max", "2", "--trace-max", "2")
    assert {(r["det"], r["trace"]): r["angle_exact"] for r in rows}[("2", "2")] == "±pi/4"


def test_table_lf_line_endings():
    _, text = run("table", "--csv")
    assert "\r" not in text and text.endswith("\n")


def test_table_human():
    code, text = run("table")
    assert code == 0 and "±arccos(2√5/5)" in text


@pytest.mark.parametrize(
    "det, trace, bound, member",
    [("2", "1", "2", [0, -2, 1, 1]), ("1", "0", "1", [0, -1, 1, 0]), ("2", "2", "1", [1, -1, 1, 1])],
)
def test_enumerate(det, trace, bound, member):
    code, text = run("enumerate", "--det", det, "--trace", trace, "--bound", bound, "--json")
    assert code == 0
    mats = json.loads(text)
    assert member in mats
    assert mats == sorted(mats)


def test_ellipse_example2():
    code, text = run("ellipse", "0,-2;1,1", "--level", "1", "--json")
    assert code == 0
    report = json.loads(text)
    assert report["integer_form"] == [[2, 1], [1, 4]]
    assert report["circle"] is False


def test_ellipse_circle():
    code, text = run("ellipse", "1,-1;1,1", "--json")
    report = json.loads(text)
    assert report["circle"] is True
    assert report["semi_major"] == report["semi_minor"] == 1


def test_ellipse_gate(capsys):
    code, _ = run("ellipse", "2,1;1,1")
    assert code == 3
    assert "not rotational" in capsys.readouterr().err


def _orbit(matrix, n):
    code, text = run("orbit", matrix, "-n", str(n), "--csv")
    assert code == 0
    return list(csv.DictReader(io.StringIO(text)))


def test_orbit_quincunx_period():
    rows = _orbit("1,-1;1,1", 8)
    assert len(rows) == 8
    assert float(rows[-1]["angle_radians"]) == 0.0


def test_orbit_example2_distinct():
    rows = _orbit("0,-2;1,1", 100)
    assert len({r["angle_radians"] for r in rows}) == 100


def test_orbit_single_row_is_signed_angle():
    (row,) = _orbit("0,-2;1,1", 1)
    assert float(row["angle_radians"]) == pytest.approx(1.2094292028881888, abs=1e-15)


def test_orbit_gate():
    assert run("orbit", "1,0;0,1")[0] == 3


def test_render_deterministic_pgm(tmp_path):
    a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
    for path in (a, b):
        code, _ = run("render", "1,-1;1,1", "--mask", HAAR, "--grid", "64", "--out", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    data = a.read_bytes()
    header = b"P5\n64 64\n255\n"
    assert data.startswith(header) and len(data) == len(header) + 64 * 64
    side = json.loads(a.with_suffix(".json").read_text())
    assert side["max"] == 1
    # center node is xi = 0 where |phi_hat| = 1 = max
    assert data[len(header) + 32 * 64 + 32] == 255


def test_render_spatial(tmp_path):
    out = tmp_path / "s.pgm"
    code, _ = run("render", "1,-1;1,1", "--mask", HAAR, "--mode", "spatial", "--out", str(out))
    assert code == 0 and out.exists()


def test_render_bad_grid(tmp_path):
    code, _ = run("render", "1,-1;1,1", "--mask", HAAR, "--grid", "63", "--out", str(tmp_path / "x.pgm"))
    assert code == 2


def test_render_bad_mask(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"delta": 2, "coeffs": [{"k": [0, "a"], "h": 1}]}))
    code, _ = run("render", "1,-1;1,1", "--mask", str(bad), "--out", str(tmp_path / "x.pgm"))
    assert code == 4
    assert "$.coeffs[0].k" in capsys.readouterr().err


def test_verify_quincunx_pass():
    code, text = run("verify", "1,-1;1,1", "--mask", HAAR, "--jprime", "1", "--samples", "200",
                     "--depth", "40", "--tol", "1e-8")
    assert code == 0
    assert "PASS" in text and "R^(j-j')" in text


def test_verify_example2_pass():
    code, _ = run("verify", "0,-2;1,1", "--mask", HAAR, "--jprime", "3", "--depth", "40", "--tol", "1e-6")
    assert code == 0


def test_verify_zero_tolerance_fails():
    code, text = run("verify", "1,-1;1,1", "--mask", HAAR, "--tol", "0")
    assert code == 1 and "FAIL" in text


def test_verify_gate_and_mask_errors(tmp_path):
    assert run("verify", "2,0;0,2", "--mask", HAAR)[0] == 3
    assert run("verify", "1,-1;1,1", "--mask", str(tmp_path / "none.json"))[0] == 4


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["table", "--det-max", "x"])
    assert info.value.code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "0,-2;1,1", "--json"],
        ["analyze", "1,0;0,1", "--json"],
        ["analyze", "3,-5;2,1", "--json"],
        ["ellipse", "0,-2;1,1", "--json"],
        ["enumerate", "--det", "5", "--trace", "2", "--json"],
    ],
)
def test_json_round_trip_and_determinism(argv):
    _, first = run(*argv)
    _, second = run(*argv)
    assert first == second
    assert dumps(json.loads(first)) + "\n" == first


def test_dumps_seventeen_digits():
    assert dumps(0.1) == "0.10000000000000001"
    assert dumps({"a": [1, None, True]}) == '{"a": [1, null, true]}'
    with pytest.raises(ValueError):
        dumps(float("nan"))


def test_verify_unimodular_is_gate_error(tmp_path):
    mask = tmp_path / "unit.json"
    mask.write_text(json.dumps({"delta": 1, "coeffs": [{"k": [0, 0], "h": 1.0}]}))
    assert run("verify", "0,-1;1,1", "--mask", str(mask))[0] == 3
