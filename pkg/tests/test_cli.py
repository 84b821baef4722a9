import io
import json
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout

import pytest

import corpus
from corpus import closed_forms, groupoid
from mhalgebroid import bialgebroid
from mhalgebroid import linalg as la
from mhalgebroid.algebra import algebra_to_json
from mhalgebroid.cli import BIALGEBROID_CATALOG, CATALOG, main
from mhalgebroid.constructions import category_to_json, cyclic_group, monoid_category
from mhalgebroid.instance import INSTANCE_SCHEMA, InstanceError, instance_from_json, instance_to_json, load_instance


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main([str(a) for a in argv])
    return code, out.getvalue(), err.getvalue()


def write(path, obj):
    path.write_text(json.dumps(obj, ensure_ascii=False))
    return path


@pytest.fixture
def pair2_fn(tmp_path):
    src = write(tmp_path / "pair2.json", category_to_json(groupoid("pair2")))
    inst = tmp_path / "pair2-fn.json"
    assert run("build", "groupoid-fn", src, "--out", inst)[0] == 0
    return inst


def test_build_writes_a_reloadable_instance(pair2_fn):
    d = json.loads(pair2_fn.read_text())
    assert d["schema"] == INSTANCE_SCHEMA and d["kind"] == "groupoid-fn" and d["field"] == "q"
    assert set(d["lifts"]) == {"T_lambda", "T_rho", "lambda_T", "rho_T"}
    M = load_instance(str(pair2_fn))
    assert instance_to_json(M) == d


def test_build_to_stdout_and_gaussian_field(tmp_path):
    src = write(tmp_path / "z2.json", category_to_json(groupoid("Z2")))
    code, out, _ = run("build", "groupoid-conv", src, "--field", "qi")
    assert code == 0
    d = json.loads(out)
    assert d["field"] == "qi" and d["kind"] == "groupoid-conv"
    assert instance_from_json(d).K == la.QQ_I


def test_check_default_catalog_text(pair2_fn):
    code, out, _ = run("check", pair2_fn)
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "status: pass"
    assert sum(1 for l in lines if l.startswith("  PASS")) == len(BIALGEBROID_CATALOG)


def test_check_selection_and_json(pair2_fn):
    code, out, _ = run("check", pair2_fn, "--axioms", "MH.FULL,LB.MULT", "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert [e["axiom"] for e in rep["entries"]] == ["LB.MULT", "MH.FULL"]
    assert "timings" not in rep
    code, out, _ = run("check", pair2_fn, "--axioms", "hopf", "--format", "json", "--timings")
    rep = json.loads(out)
    assert [e["axiom"] for e in rep["entries"]] == list(CATALOG)
    assert set(rep["timings"]) == {"check"}


def test_unknown_axiom_is_a_usage_error(pair2_fn):
    code, _, err = run("check", pair2_fn, "--axioms", "LB.BOGUS")
    assert code == 2 and "LB.BOGUS" in err


def test_derive_reproduces_closed_forms(pair2_fn):
    code, out, _ = run("derive", pair2_fn, "--format", "json")
    assert code == 0
    rep = json.loads(out)
    eB, eC, S = closed_forms("pair2", "fn")
    for key, want in (("eps_B", eB), ("eps_C", eC), ("S", S)):
        got = {(i, j): int(v.split("/")[0]) for i, j, v in rep["derived"][key]["entries"]}
        assert got == want, key
    assert rep["derived"]["homogeneous_dims"] == {"eps_B": 0, "eps_C": 0, "S": 0}
    code, out, _ = run("derive", pair2_fn, "--what", "counits", "--format", "json")
    assert code == 0 and set(json.loads(out)["derived"]) == {"eps_B", "eps_C"}


@pytest.mark.parametrize("bad", ["{oops", json.dumps({"objects": ["o"]})])
def test_unreadable_input_exits_2(tmp_path, bad):
    p = tmp_path / "bad.json"
    p.write_text(bad)
    code, _, err = run("build", "groupoid-fn", p)
    assert code == 2 and "ParseError" in err


def test_missing_file_and_wrong_schema_exit_2(tmp_path):
    assert run("check", tmp_path / "nope.json")[0] == 2
    p = write(tmp_path / "x.json", {"schema": "something/else"})
    code, _, err = run("check", p)
    assert code == 2 and "InstanceError" in err


def test_category_is_not_a_groupoid(tmp_path):
    p = write(tmp_path / "m.json", category_to_json(monoid_category()))
    code, _, err = run("build", "groupoid-fn", p)
    assert code == 2 and "NotAGroupoid" in err
    assert run("build", "category-fn", p, "--out", tmp_path / "m.inst.json")[0] == 0
    code, out, err = run("derive", tmp_path / "m.inst.json")
    assert code == 1 and "NotBijective" in err and "status: fail" in out


def test_corrupted_lift_exits_1(pair2_fn):
    d = json.loads(pair2_fn.read_text())
    r, c, v = d["lifts"]["T_lambda"]["entries"][0]
    d["lifts"]["T_lambda"]["entries"][0] = [r, c, "2/1" if v != "2/1" else "3/1"]
    write(pair2_fn, d)
    code, out, _ = run("check", pair2_fn, "--format", "json")
    assert code == 1
    rep = json.loads(out)
    fails = [e for e in rep["entries"] if e["status"] == "fail"]
    assert fails and all("witness" in e for e in fails)


def test_corrupted_base_antipode_exits_1(pair2_fn):
    d = json.loads(pair2_fn.read_text())
    d["S_B"] = {"shape": [2, 2], "entries": [[0, 0, "1"], [0, 1, "1"]]}
    write(pair2_fn, d)
    code, _, err = run("check", pair2_fn)
    assert code == 1 and "AxiomFailed(MB.BASES)" in err


def test_malformed_instance_matrix_exits_2(pair2_fn):
    d = json.loads(pair2_fn.read_text())
    d["S_B"] = [[1, 0, 0]]
    write(pair2_fn, d)
    with pytest.raises(InstanceError):
        load_instance(str(pair2_fn))
    assert run("check", pair2_fn)[0] == 2


def test_pentagon_skipped_without_triple_hypothesis(pair2_fn, monkeypatch):
    # unital instances always satisfy the hypothesis, so force it off
    monkeypatch.setattr(bialgebroid, "triple_hypothesis", lambda L: False)
    code, out, _ = run("check", pair2_fn, "--axioms", "LB.PENTAGON,RB.PENTAGON", "--format", "json")
    rep = json.loads(out)
    assert [e["status"] for e in rep["entries"]] == ["skipped", "skipped"]
    assert all(e["reason"] for e in rep["entries"])
    assert code == 0 and rep["status"] == "pass"
    code, out, _ = run("check", pair2_fn, "--axioms", "LB.PENTAGON")
    assert "SKIP" in out


def test_tensor_build_two_forms(tmp_path):
    H = corpus.z2_hopf()
    alg = algebra_to_json(H.algebra)
    S = la.matrix_to_json(H.antipode)
    bundled = write(tmp_path / "t.json", {"B": alg, "C": alg, "S_B": S, "S_C": S})
    assert run("build", "tensor", bundled, "--out", tmp_path / "t1.json")[0] == 0
    b = write(tmp_path / "b.json", alg)
    s = write(tmp_path / "s.json", [[int(x) for x in r] for r in la.to_rows(H.antipode)])
    assert run("build", "tensor", b, b, "--s-b", s, "--s-c", s, "--out", tmp_path / "t2.json")[0] == 0
    assert json.loads((tmp_path / "t1.json").read_text()) == json.loads((tmp_path / "t2.json").read_text())
    code, out, _ = run("derive", tmp_path / "t1.json")
    assert code == 0 and out.endswith("status: pass\n")


def test_crossed_build(tmp_path):
    X = algebra_to_json(corpus.QxQ())
    I2, sw = [[1, 0], [0, 1]], corpus.SWAP
    d = {"B": X, "C": X, "S_B": I2, "S_C": I2, "group": cyclic_group(2), "action_C": [I2, sw], "action_B": [I2, sw]}
    p = write(tmp_path / "x.json", d)
    assert run("build", "crossed", p, "--out", tmp_path / "x.inst.json")[0] == 0
    assert json.loads((tmp_path / "x.inst.json").read_text())["A"]["labels"][:2] == ["p⊗g0⊗p", "p⊗g0⊗q"]
    d["action_B"] = [I2, I2]
    write(p, d)
    code, _, err = run("build", "crossed", p)
    assert code == 2 and "ActionInvalid" in err


def test_module_entry_point(pair2_fn):
    r = subprocess.run([sys.executable, "-m", "mhalgebroid", "check", str(pair2_fn), "--axioms", "MB.BASES"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip().endswith("status: pass")
    r = subprocess.run([sys.executable, "-m", "mhalgebroid", "frobnicate"], capture_output=True, text=True)
    assert r.returncode == 2
