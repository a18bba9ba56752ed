import json
import subprocess
import sys

import pytest

from quatcusp.cli import main, run
from quatcusp.matmob import QuatMat2
from quatcusp.quadfield import QQ, QuadraticField
from quatcusp.serialize import parse_field_element, parse_matrix, parse_quaternion


def call(*argv):
    res = run(list(argv))
    doc = json.loads(res.to_json())
    assert doc["status"] == res.status and doc["command"] == res.command
    return res, doc


def ok(*argv):
    res, doc = call(*argv)
    assert res.status == "ok", doc["diagnostics"]
    assert res.exit_code == 0
    return doc["payload"]


def test_field():
    p = ok("field", "--n", "13")
    assert p["fundamental_unit"] == "1+theta"
    assert p["fundamental_unit_sqrt"] == "(3+sqrt(13))/2"
    assert p["norm"] == "-1"
    assert parse_field_element(p["fundamental_unit"], QuadraticField(13)).sqrt_form() == (1.5, 0.5)
    assert ok("field", "--n", "1")["field"] == "Q"


def test_units_and_order():
    p = ok("units", "--order", "hurwitz", "--n", "1")
    assert p["count"] == 24 and p["class"] == "2T"
    p = ok("units", "--order", "lipschitz", "--list")
    assert len(p["elements"]) == 8
    p = ok("order", "--order", "hurwitz", "--n", "2")
    assert p["is_ring"] and len(p["basis"]) == 8 and len(p["pure_basis"]) == 6


def test_monodromy():
    p = ok("monodromy", "--n", "5", "--order", "lipschitz")
    assert p["matrix"][0][:2] == [1, 1] and p["matrix"][1][:2] == [1, 2]
    assert p["matrix"][4][4:] == [1, 1] and p["anosov"] is True and p["det"] == 1
    assert p["trace_eps_sq"] == "3" and p["fundamental_unit"] == "theta"
    p2 = ok("monodromy", "--n", "5", "--order", "lipschitz", "--ell", "2")
    assert p2["matrix"][0][:2] == [2, 3]


def test_matrix_commands():
    J = json.dumps([[0, 1], [1, 0]])
    assert ok("bg", "--matrix", J)["variants"] == {"1": True, "2": True, "3": True}
    assert ok("bg", "--matrix", "[[1,1],[0,1]]", "--variant", "2")["variants"] == {"2": False}
    assert ok("det", "--matrix", J)["det_sq"] == "1"
    inv = ok("inverse", "--matrix", "[[1,[0,1,0,0]],[0,1]]", "--order", "hurwitz")
    assert inv["verified"] and inv["entries_in_order"]
    assert parse_matrix(inv["inverse"], QQ) == parse_matrix([[1, [0, -1, 0, 0]], [0, 1]], QQ)
    iw = ok("iwasawa", "--matrix", "[[1,[0,1,0,0]],[0,1]]")
    assert iw["lambda"] == 1.0 and iw["omega"] == [0.0, 1.0, 0.0, 0.0]
    fl = ok("det", "--matrix", "[[[2.0,0,0,0],[0,0,0,0]],[[0,0,0,0],[0.5,0,0,0]]]")
    assert fl["det_sq"] == 1.0 and fl["unimodular"]


def test_act():
    g = json.dumps([[[0, 1, 0, 0], 0], [2, [0, -1, 0, 0]]])
    assert ok("act", "--matrix", g, "--point", "inf")["image"] == [0.0, 0.5, 0.0, 0.0]
    p = ok("act", "--matrix", "[[0,1],[1,0]]", "--point", '{"q": [0,0,0,0], "t": 0.5}')
    assert p["image"] == {"q": [0.0, 0.0, 0.0, 0.0], "t": 2.0}
    pair = ok("act", "--n", "2", "--pair", "--matrix", '[["1+theta",0],[0,"-1+theta"]]', "--point", "[1,0,0,0]")
    assert abs(pair["image"][0][0] - (1 + 2**0.5) ** 2) < 1e-12


def test_reduce_and_cusp():
    p = ok("reduce", "--point", '{"q": [3, 0, 0, 0], "t": 2}')
    assert p["word"] == [[1, -3]] and p["in_chimney"] and p["witness_error"] == 0.0
    c = ok("cusp", "--alpha", "[0,1,0,0]", "--c", "2")
    assert c["det_sq_is_one"] and c["image_matches"] and c["entries_in_order"]
    g = parse_matrix(c["gamma"], QQ)
    assert isinstance(g, QuatMat2) and g.d == parse_quaternion([0, -1, 0, 0], QQ)


def test_solv():
    p = ok("--seed", "7", "solv", "--n", "2", "--samples", "25")
    assert p["axioms_hold"] and p["seed"] == 7
    p = ok("solv", "--n", "2", "--g", "[[0,0,0,0,0,0],1]", "--h", "[[1,0,0,0,0,0],0]")
    assert p["product"] == [[3, 2, 0, 0, 0, 0], 1]


@pytest.mark.parametrize(
    "argv",
    [
        ["field", "--n", "4"],
        ["units", "--order", "nonexistent"],
        ["bg", "--matrix", "[[1,2]]"],
        ["det", "--matrix", "{not json"],
        ["inverse", "--matrix", "[[2,0],[0,2]]"],
        ["cusp", "--alpha", "[1,1,0,0]", "--c", "2"],
        ["monodromy", "--n", "1", "--order", "hurwitz"],
        ["solv", "--n", "2", "--g", "[[1,2],0]"],
        ["nosuchcommand"],
    ],
)
def test_errors(argv):
    res, doc = call(*argv)
    assert res.status == "error" and res.exit_code != 0 and doc["diagnostics"]


def test_order_file(tmp_path):
    path = tmp_path / "h.toml"
    path.write_text('n = 1\nbasis = [["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["1/2","1/2","1/2","1/2"]]\n')
    assert ok("units", "--order", str(path))["class"] == "2T"


def test_matrix_from_file(tmp_path):
    path = tmp_path / "m.json"
    path.write_text("[[0,1],[1,0]]")
    assert ok("det", "--matrix", "@" + str(path))["det_sq"] == "1"


def test_deterministic_output(capsys):
    outs = []
    for _ in range(2):
        assert main(["monodromy", "--n", "13", "--order", "hurwitz"]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "quatcusp", "field", "--n", "2"], capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payload"]["fundamental_unit"] == "1+theta"
    proc = subprocess.run([sys.executable, "-m", "quatcusp", "field", "--n", "9"], capture_output=True, text=True, timeout=60)
    assert proc.returncode == 1
