import json
import math

import pytest

from blpack import jsonio
from blpack.cli import main
from blpack.errors import ParseError
from blpack.render import render_svg_text
from blpack.solver import pack
from blpack.triangulation import (
    EMPTY_BRANCH,
    BranchStructure,
    hex_ball,
    hex_refine,
)


def test_complex_roundtrip():
    t = hex_ball(3)
    b = BranchStructure(((0, 1),))
    t2, b2 = jsonio.complex_from_json(jsonio.complex_to_json(t, b))
    assert t2 == t
    assert b2 == b


def test_packing_roundtrip_bit_exact(flower_packed):
    text = jsonio.packing_to_json(flower_packed)
    p2 = jsonio.packing_from_json(text)
    for a, b in zip(flower_packed.circles, p2.circles):
        assert a.center == b.center
        assert a.radius == b.radius
    assert jsonio.packing_to_json(p2) == text


def test_report_fields_roundtrip(flower_packed):
    obj = json.loads(jsonio.packing_to_json(flower_packed))
    assert obj["report"]["sweeps"] == flower_packed.report.sweeps
    assert obj["report"]["max_residual"] == flower_packed.report.max_residual


def test_float_formatting_17g():
    assert jsonio.dumps(0.1) == "0.10000000000000001"
    assert float(jsonio.dumps(math.pi)) == math.pi


def test_parse_error_has_position():
    with pytest.raises(ParseError) as err:
        jsonio.loads("{\n  bad")
    assert err.value.line == 2


def test_malformed_complex_raises():
    with pytest.raises(ParseError):
        jsonio.complex_from_json('{"notfaces": []}')


# ---------------------------------------------------------------------------
# SVG


def test_render_flower_counts(flower_packed):
    text = render_svg_text(flower_packed)
    assert text.count("<circle") == 8  # unit circle + 7
    assert 'fill="#000"' not in text


def test_render_branched_center_filled(branched_flower_packed):
    text = render_svg_text(branched_flower_packed)
    assert text.count('fill="#000"') == 1


def test_render_deterministic(branched_flower_packed, tmp_path):
    from blpack.render import render_svg

    p1 = tmp_path / "a.svg"
    p2 = tmp_path / "b.svg"
    render_svg(branched_flower_packed, str(p1))
    render_svg(branched_flower_packed, str(p2))
    assert p1.read_bytes() == p2.read_bytes()


# ---------------------------------------------------------------------------
# CLI


@pytest.fixture()
def complex_file(tmp_path):
    path = tmp_path / "ball2.json"
    path.write_text(jsonio.complex_to_json(hex_ball(2), EMPTY_BRANCH))
    return str(path)


def test_cli_validate_ok(complex_file, capsys):
    assert main(["validate", complex_file]) == 0
    assert '"valid": true' in capsys.readouterr().out


def test_cli_validate_violation(tmp_path, capsys):
    from blpack.corpus import wheel

    path = tmp_path / "wheel4.json"
    path.write_text(
        jsonio.complex_to_json(wheel(4), BranchStructure(((0, 1),)))
    )
    assert main(["validate", str(path)]) == 1
    out = capsys.readouterr().out
    assert '"valid": false' in out and '"witness"' in out


def test_cli_validate_parse_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{oops")
    assert main(["validate", str(path)]) == 2


def test_cli_missing_file():
    assert main(["validate", "/nonexistent/x.json"]) == 2


def test_cli_pack_map_render(complex_file, tmp_path, capsys):
    dom = tmp_path / "dom.json"
    ran = tmp_path / "ran.json"
    svg = tmp_path / "out.svg"
    assert main(["pack", complex_file, "--tol", "1e-12",
                 "--normalize", "0", "1", "-o", str(dom)]) == 0
    assert main(["pack", complex_file, "--branch", "center:1",
                 "--tol", "1e-12", "--normalize", "0", "1",
                 "-o", str(ran)]) == 0
    assert main(["map", str(dom), str(ran), "--eval", "0.05,0.02",
                 "--valence", "--dilatation"]) == 0
    lines = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    ops = {rec["op"]: rec for rec in lines}
    assert ops["valence"]["value"] == 2
    assert ops["dilatation"]["value"] >= 1.0
    assert len(ops["eval"]["value"]) == 2
    assert main(["render", str(ran), "-o", str(svg)]) == 0
    assert svg.read_text().count("<circle") == 1 + 19


def test_cli_check_mobius(complex_file, tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert main(["pack", complex_file, "--tol", "1e-12", "-o", str(a)]) == 0
    assert main(["pack", complex_file, "--tol", "1e-12",
                 "--normalize", "0", "2", "-o", str(b)]) == 0
    assert main(["map", str(a), str(a), "--check-mobius", str(b)]) == 0
    rec = json.loads(capsys.readouterr().out.splitlines()[-1])
    assert rec["equivalent"] is True


def test_cli_schwarz_exit_code(complex_file, capsys):
    assert main(["schwarz", complex_file, "--branch", "center:1"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["verdicts"]["upper_bound"] is True


def test_cli_approx_writes_report(tmp_path, capsys):
    out = tmp_path / "rep.json"
    assert main(["approx", "--zeros", "0", "--levels", "2,3",
                 "-o", str(out)]) == 0
    rec = json.loads(out.read_text())
    assert rec["experiment"] == "approximation"
    assert [lv["n"] for lv in rec["levels"]] == [2, 3]


def test_cli_distortion_range_syntax(tmp_path):
    out = tmp_path / "rep.json"
    assert main(["distortion", "--levels", "2..4", "--branch", "center:1",
                 "-o", str(out)]) == 0
    rec = json.loads(out.read_text())
    assert [lv["n"] for lv in rec["levels"]] == [2, 3, 4]
