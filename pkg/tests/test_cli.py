import io
import json
import subprocess
import sys

import pytest

from weiljet import serialize as ser
from weiljet.alpha_jet import AlphaJet
from weiljet.bundle_charts import AutomorphismFamily, ChartTransition
from weiljet.cli import run
from weiljet.smooth_expr import SmoothMap
from weiljet.weil_algebra import AlgebraSpec, jet_spec

D1 = jet_spec(1, 1)
DUAL = json.dumps(ser.alpha_jet_to_json(AlphaJet(D1, (0,), (3,), (D1.generator(0),))))
_REL = AlgebraSpec(1, 2, ((2,),))
NOT_JET_TYPE = json.dumps(ser.alpha_jet_to_json(AlphaJet(_REL, (0,), (0,), (_REL.generator(0),))))


def call(*argv):
    buf = io.StringIO()
    status = run(list(argv), stdout=buf)
    return status, json.loads(buf.getvalue()), buf.getvalue()


def terms(element):
    return {tuple(t["exp"]): t["coef"] for t in element["terms"]}


def test_taylor_sin():
    status, out, _ = call("taylor", "--expr", "sin(y1)", "--point", "[0]", "--k", "3")
    assert status == 0
    got = terms(out["element"])
    assert set(got) == {(1,), (3,)}
    assert got[(1,)] == 1.0
    assert got[(3,)] == pytest.approx(-1 / 6, abs=1e-15)


def test_alphajet_eval_dual_numbers():
    status, out, _ = call("alphajet", "eval", "--jet", DUAL, "--expr", "y1^2")
    assert status == 0
    assert terms(out["element"]) == {(0,): 9, (1,): 6}


def test_float_mode_outputs_floats():
    _, out, text = call("alphajet", "eval", "--jet", DUAL, "--expr", "y1^2", "--mode", "float")
    assert terms(out["element"]) == {(0,): 9.0, (1,): 6.0}
    assert '"coef": 9.0' in text


def test_alphajet_push():
    phi = json.dumps(ser.smooth_map_to_json(SmoothMap.parse(1, ["y1^2"])))
    status, out, _ = call("alphajet", "push", "--jet", DUAL, "--map", phi)
    assert status == 0 and out["p"] == [9]
    assert terms(out["images"][0]) == {(1,): 6}


def test_jet_commands():
    inner = {"x": [0], "k": 2, "components": [{"terms": [{"exp": [0], "coef": 1}, {"exp": [1], "coef": 1}]}]}
    outer = {"x": [1], "k": 2, "components": [{"terms": [{"exp": [0], "coef": 1}, {"exp": [1], "coef": 2}, {"exp": [2], "coef": 1}]}]}
    status, out, _ = call("jet", "compose", "--outer", json.dumps(outer), "--inner", json.dumps(inner))
    assert status == 0
    assert terms(out["components"][0]) == {(0,): 1, (1,): 2, (2,): 1}
    phi = json.dumps({"arity": 1, "components": ["y1"]})
    psi = json.dumps({"arity": 1, "components": ["y1 + y1^3"]})
    assert call("jet", "equiv", "--phi", phi, "--psi", psi, "--point", "[0]", "--k", "2")[1]["equivalent"] is True
    assert call("jet", "equiv", "--phi", phi, "--psi", psi, "--point", "[0]", "--k", "3")[1]["equivalent"] is False


def test_chi_and_inverse(tmp_path):
    phi = json.dumps({"arity": 1, "components": ["y1^2"]})
    status, out, text = call("chi", "--map", phi, "--point", "[1]", "--k", "2")
    assert status == 0 and out["p"] == [1]
    assert terms(out["images"][0]) == {(1,): 2, (2,): 1}
    path = tmp_path / "u.json"
    path.write_text(text)
    status, back, _ = call("chi-inv", "--jet", f"@{path}")
    assert status == 0
    assert terms(back["components"][0]) == {(0,): 1, (1,): 2, (2,): 1}


def test_chi_roundtrip_command():
    status, out, _ = call("chi", "roundtrip", "--seed", "7", "--cases", "100")
    assert status == 0
    assert out["pass"] is True and out["cases"] == 100


def test_bundle_commands():
    t = ChartTransition(SmoothMap.parse(1, ["y1 + 1"]), SmoothMap.parse(1, ["2*y1"]), AutomorphismFamily.identity(D1, 1))
    tj = json.dumps(ser.transition_to_json(t))
    status, out, _ = call("bundle", "transition", "--transition", tj, "--jet", DUAL)
    assert status == 0 and out["x"] == [1] and out["p"] == [6]
    assert terms(out["images"][0]) == {(1,): 2}
    ident = json.dumps(ser.transition_to_json(ChartTransition.identity(D1, 1, 1)))
    status, out, _ = call("bundle", "cocycle", "--t21", ident, "--t32", ident, "--t31", ident, "--seed", "1")
    assert status == 0 and out["pass"] is True and out["cases"] == 20
    status, out, _ = call("bundle", "cocycle", "--t21", ident, "--t32", ident, "--t31", tj, "--seed", "1")
    assert status == 1 and out["pass"] is False
    assert out["failing_sample"]["index"] == 0 and "alpha_jet" in out["failing_sample"]
    status, out, _ = call("bundle", "doublecheck", "--transition", tj, "--jets", f"[{DUAL}]")
    assert status == 0 and out["max_abs_deviation"] == 0


@pytest.mark.parametrize(
    "argv,code",
    [
        (["frobnicate"], "usage"),
        (["taylor", "--expr", "sin(y1", "--point", "[0]", "--k", "2"], "parse_error"),
        (["taylor", "--expr", "log(y1)", "--point", "[0]", "--k", "2"], "domain_error"),
        (["taylor", "--expr", "y1", "--point", "[0", "--k", "2"], "parse_error"),
        (["alphajet", "eval", "--jet", '{"algebra": {"n": 1}}', "--expr", "y1"], "parse_error"),
        (["alphajet", "eval", "--jet", DUAL, "--expr", "y2"], "arity_mismatch"),
        (["chi-inv", "--jet", NOT_JET_TYPE], "algebra_not_jet_type"),
    ],
)
def test_input_errors_exit_2(argv, code):
    status, out, _ = call(*argv)
    assert status == 2
    assert set(out["error"]) == {"code", "message", "location"}
    assert out["error"]["code"] == code


def test_output_file(tmp_path):
    path = tmp_path / "out.json"
    buf = io.StringIO()
    assert run(["taylor", "--expr", "y1^2", "--point", "[3]", "--k", "2", "-o", str(path)], stdout=buf) == 0
    assert buf.getvalue() == ""
    assert terms(json.loads(path.read_text())["element"]) == {(0,): 9, (1,): 6, (2,): 1}


def test_suite_output_is_byte_identical():
    cmd = [sys.executable, "-m", "weiljet", "suite", "--seed", "3"]
    first = subprocess.run(cmd, capture_output=True, text=True, check=False)
    second = subprocess.run(cmd, capture_output=True, text=True, check=False)
    assert first.returncode == 0, first.stdout[-2000:]
    assert first.stdout == second.stdout
    out = json.loads(first.stdout)
    assert out["seed"] == 3 and out["generator"] == "numpy.random.PCG64"
    assert [s["criterion"] for s in out["suites"]] == list(range(1, 9))
