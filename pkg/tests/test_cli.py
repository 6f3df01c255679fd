import json
import subprocess
import sys
from fractions import Fraction

import pytest

from nodaltwist.ainfty import (TableAlgebra, complete_to_cocycle, exterior_algebra, gl2_morphism,
                               symmetric_cochain)
from nodaltwist.cli import run
from nodaltwist.mc import MCElement
from nodaltwist.ncdga import PresentedDGA
from nodaltwist.nodal import XI, XIP, X, nodal_presentation
from nodaltwist.plane import PlaneMap
from nodaltwist.series import Series2

N = 12


def write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def maps(tmp_path):
    s = Series2.monomial(1, 1, N)
    u = Series2.one(N) - s
    exp_map = PlaneMap(Series2.p(N) * s.exp(), Series2.q(N) * (-s).exp())
    cluster = PlaneMap(Series2.p(N) * u, Series2.q(N) * u.reciprocal())
    return (write(tmp_path / "exp_map.json", exp_map.to_json()),
            write(tmp_path / "cluster_map.json", cluster.to_json()))


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def call_json(capsys, *argv):
    code, out, err = call(capsys, *argv, "--format", "json")
    return code, (json.loads(out) if out.strip() else None), err


# -- documented examples -----------------------------------------------------------

def test_nodal_verify(capsys):
    code, rep, _ = call_json(capsys, "nodal", "verify", "--order", "10", "--arity", "5")
    assert code == 0
    assert rep["status"] == "PASS" and rep["schema_version"] == 1
    assert set(rep["stages"]) == {"consistency", "step1", "step2", "step3"}


def test_fps_conjugate(capsys, maps):
    f, g = maps
    code, rep, _ = call_json(capsys, "fps", "conjugate", "--f", f, "--g", g, "--order", "12")
    assert code == 0
    w = PlaneMap.from_json(rep["witness"])
    assert w.order == 12


def test_dga_check_broken(capsys, tmp_path):
    broken = nodal_presentation(10).without_rule((X, XIP))
    path = write(tmp_path / "broken.json", broken.to_json())
    code, out, _ = call(capsys, "dga", "check", "--presentation", path, "--critical-length", "4")
    assert code == 1
    assert "Leibniz residual on rule x*rho -> 0: x*xi - x*xi'" in out


# -- exit codes by command group ----------------------------------------------------

PASSING = [
    ("fps", "compose", "--outer", "builtin:exp", "--inner", "builtin:exp", "--order", "5"),
    ("fps", "invert", "--map", "builtin:cluster", "--order", "6"),
    ("fps", "flow", "--radial", "0,0,-1/2", "--order", "6"),
    ("fps", "log", "--map", "builtin:cluster", "--order", "8"),
    ("fps", "jacobian", "--map", "builtin:exp", "--expect", "1", "--order", "6"),
    ("dga", "check"),
    ("dga", "reduce", "--word", "rho rho x"),
    ("dga", "diff", "--word", "xi'"),
    ("ainf", "check-algebra", "--algebra", "builtin:massey"),
    ("ainf", "check-morphism", "--morphism", "builtin:G", "--arity", "4"),
    ("ainf", "transfer", "--dga", "builtin:massey"),
    ("mc", "check", "--element", "builtin:alpha"),
    ("mc", "check", "--context", "builtin:nodal", "--element", "builtin:G_beta"),
    ("mc", "push", "--morphism", "builtin:G", "--element", "builtin:beta", "--order", "6"),
    ("mc", "homdiff", "--alpha", "builtin:G_beta", "--beta", "builtin:PG_alpha",
     "--gamma", "builtin:exp_rho", "--order", "6"),
    ("mc", "symmetrize", "--morphism", "builtin:gl2:2,0,0,1/2", "--order", "4"),
]

FAILING = [
    ("fps", "jacobian", "--map", "builtin:exp", "--expect", "2", "--order", "6"),
    ("fps", "conjugate", "--f", "builtin:identity", "--g", "builtin:exp", "--order", "5"),
    ("dga", "check", "--presentation", "builtin:nodal-verbatim"),
    ("nodal", "verify", "--order", "4", "--arity", "3", "--gamma", "one"),
    ("nodal", "verify", "--order", "4", "--arity", "3", "--drop-rule", "rho x"),
    ("mc", "homdiff", "--alpha", "builtin:G_beta", "--beta", "builtin:PG_alpha",
     "--gamma", "builtin:one", "--order", "6"),
]

BAD_INPUT = [
    (),
    ("fps",),
    ("fps", "invert", "--map", "builtin:nope"),
    ("fps", "invert", "--map", "missing.json"),
    ("fps", "invert", "--map", "builtin:exp", "--order", "0"),
    ("fps", "invert", "--map", "builtin:exp", "--bogus"),
    ("dga", "reduce", "--word", "z"),
    ("dga", "reduce"),
    ("nodal", "verify", "--drop-rule", "y y y"),
    ("ainf", "check-morphism", "--morphism", "builtin:gl2:1,2"),
    ("mc", "symmetrize", "--morphism", "gl2:2,0,0,1/2"),
    ("mc", "check", "--context", "builtin:nodal", "--element", "builtin:alpha"),
]


@pytest.mark.parametrize("argv", PASSING, ids=" ".join)
def test_exit_zero(capsys, argv):
    code, out, _ = call(capsys, *argv)
    assert code == 0, out


@pytest.mark.parametrize("argv", FAILING, ids=" ".join)
def test_exit_one_prints_residual(capsys, argv):
    code, out, _ = call(capsys, *argv)
    assert code == 1
    assert out.strip()


@pytest.mark.parametrize("argv", BAD_INPUT, ids=lambda a: " ".join(a) or "empty")
def test_exit_two(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_file_inputs_fail_with_residuals(capsys, tmp_path):
    L = exterior_algebra()
    one = Fraction(1)
    # a linear map that does not respect the product
    f = gl2_morphism([[2, 0], [0, 1]]).to_json(2)
    for e in f["f"]["1"]:
        if e["inputs"] == ["ab"]:
            e["output"] = {"ab": "1"}
    code, rep, _ = call_json(capsys, "ainf", "check-morphism",
                             "--morphism", write(tmp_path / "f.json", f), "--arity", "3")
    assert code == 1 and rep["status"] == "FAIL"

    mu2 = {(u, v): L.mu(2, (u, v)) for u in L.basis() for v in L.basis() if L.mu(2, (u, v))}
    bad = TableAlgebra(L.space, {2: mu2}).with_table(2, ("a", "1"), {"a": -2 * one})
    code, rep, _ = call_json(capsys, "ainf", "check-algebra",
                             "--algebra", write(tmp_path / "alg.json", bad.to_json()))
    assert code == 1 and rep["status"] == "FAIL"

    eta = symmetric_cochain(L, 3, {("a", "a", "b"): {"a": one}})
    code, _, _ = call_json(capsys, "ainf", "exp",
                           "--cochain", write(tmp_path / "eta.json", eta.to_json(3)), "--arity", "4")
    assert code == 1
    closed = complete_to_cocycle(L, 3, eta.table(3), lambda keys: "ab" in keys)
    path = write(tmp_path / "closed.json", closed.to_json(3))
    code, _, _ = call_json(capsys, "ainf", "exp", "--cochain", path, "--arity", "4")
    assert code == 0
    code, rep, _ = call_json(capsys, "mc", "symmetrize", "--cochain", path, "--order", "4")
    assert code == 0

    dga = nodal_presentation(6)
    el = MCElement(dga, {(XI,): Series2.p(6)}).to_json()
    el["context"] = "nodal"
    code, rep, _ = call_json(capsys, "mc", "check", "--element", write(tmp_path / "el.json", el))
    assert code == 1 and rep["residual"]


def test_malformed_inputs_name_the_field(capsys, tmp_path, maps):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = call(capsys, "fps", "invert", "--map", str(bad))
    assert code == 2 and "--map" in err

    data = json.loads(open(maps[0]).read())
    del data["q_image"]
    code, _, err = call(capsys, "fps", "invert", "--map", write(tmp_path / "noq.json", data))
    assert code == 2 and "q_image" in err

    small = PlaneMap.identity(4).to_json()
    code, _, err = call(capsys, "fps", "compose", "--outer", maps[0],
                        "--inner", write(tmp_path / "small.json", small))
    assert code == 2 and "order" in err

    code, _, err = call(capsys, "fps", "invert", "--map", write(tmp_path / "s.json", small),
                        "--order", "6")
    assert code == 2 and "order" in err


def test_reports_are_byte_identical(capsys, maps):
    argv = ("fps", "conjugate", "--f", maps[0], "--g", maps[1], "--order", "10", "--format", "json")
    first = call(capsys, *argv)[1]
    assert first == call(capsys, *argv)[1]
    argv = ("nodal", "verify", "--order", "5", "--arity", "3", "--format", "json")
    assert call(capsys, *argv)[1] == call(capsys, *argv)[1]


def test_environment_order_and_flag_precedence(capsys, monkeypatch):
    monkeypatch.setenv("NODALTWIST_ORDER", "3")
    _, rep, _ = call_json(capsys, "fps", "invert", "--map", "builtin:exp")
    assert rep["result"]["order"] == 3
    _, rep, _ = call_json(capsys, "fps", "invert", "--map", "builtin:exp", "--order", "5")
    assert rep["result"]["order"] == 5
    monkeypatch.setenv("NODALTWIST_ORDER", "zero")
    assert call(capsys, "fps", "invert", "--map", "builtin:exp")[0] == 2


def test_list_builtins(capsys):
    code, out, _ = call(capsys, "--list-builtins")
    assert code == 0
    assert "massey" in json.loads(out)["algebras"]


def test_presentation_file_roundtrip(capsys, tmp_path):
    path = write(tmp_path / "nodal.json", nodal_presentation(10).to_json())
    assert PresentedDGA.from_json(json.loads(open(path).read())).rules
    assert call(capsys, "dga", "check", "--presentation", path)[0] == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nodaltwist", "dga", "reduce", "--word", "rho x",
                           "--format", "json"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["schema_version"] == 1
    proc = subprocess.run([sys.executable, "-m", "nodaltwist", "--bogus"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
