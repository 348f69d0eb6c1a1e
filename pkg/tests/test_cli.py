import json
import pathlib
import subprocess
import sys

import pytest

from combspin.cli import EXIT_CODES, main, run
from combspin.corpus import builtin
from combspin.spin import oriented_model

DATA = pathlib.Path(__file__).parent / "data"


def _run(*argv):
    res = run(list(argv))
    return res.status, json.loads(res.dumps())


def test_exit_code_table():
    assert sorted(EXIT_CODES) == [0, 2, 3, 4, 5, 6]


def test_validate_builtin():
    code, out = _run("validate", "builtin:torus2")
    assert code == 0
    assert out["face_classes_by_codimension"] == [2, 3, 1]


def test_validate_file(tmp_path):
    path = tmp_path / "s3.json"
    path.write_text(builtin("s3_two_tet").complex.dumps())
    code, out = _run("validate", str(path))
    assert code == 0 and out["simplices"] == 2


@pytest.mark.parametrize("text,needle", [
    ("{", "malformed"),
    ('{"dimension": 2, "simplices": 1, "gluings": [[null, null, null]]}', "unglued"),
])
def test_invalid_inputs(tmp_path, text, needle):
    path = tmp_path / "bad.json"
    path.write_text(text)
    code, out = _run("validate", str(path))
    assert code == 3
    assert needle in out["message"]


def test_missing_file():
    code, out = _run("spin", "/nonexistent/file.json")
    assert code == 3 and "cannot read" in out["message"]


def test_unknown_builtin():
    assert _run("validate", "builtin:nope")[0] == 3


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["spin"], ["spin", "x", "--bogus"]])
def test_usage_errors(argv):
    assert run(argv).status == 2


def test_invariants_orientable_and_not():
    code, out = _run("invariants", "builtin:rp3_two_tet")
    assert code == 0
    assert out["orientable"] and out["w2_zero"] and out["spin_count"] == 2
    assert out["H2"] == {"rank": 0, "torsion": [2]}
    code, out = _run("invariants", "builtin:klein")
    assert code == 0 and not out["orientable"] and out["odd_cycle"]
    assert out["z2_betti"] == [1, 2, 1]


def test_spin_enumerate():
    code, out = _run("spin", "builtin:t3_six_tet", "--enumerate")
    assert code == 0 and out["count"] == 8
    assert len(out["classes"]) == 8


def test_spin_non_spin_and_non_orientable():
    code, out = _run("spin", str(DATA / "cp2.json"))
    assert code == 5 and not out["feasible"] and out["infeasibility_certificate"]
    code, out = _run("spin", "builtin:klein")
    assert code == 4 and out["odd_cycle"]


def test_spin_act(tmp_path):
    dc = builtin("torus2").complex
    m = oriented_model(dc)
    omega = {str(i): 0 for i in range(m.num_facets)}
    omega["0"] = 1
    path = tmp_path / "omega.json"
    path.write_text(json.dumps(omega))
    code, out = _run("spin", "builtin:torus2", "--act", str(path))
    assert code == 0
    assert out["act"]["same_class"] is False
    path.write_text(json.dumps([1]))
    assert _run("spin", "builtin:torus2", "--act", str(path))[0] == 3


def test_spin_act_rejects_non_cocycle(tmp_path):
    path = tmp_path / "omega.json"
    path.write_text(json.dumps({"0": 1}))
    code, out = _run("spin", "builtin:s3_two_tet", "--act", str(path))
    assert code == 3 and "cocycle" in out["message"]


def test_spinc_default_and_beta(tmp_path):
    code, out = _run("spinc", "builtin:rp3_two_tet")
    assert code == 0 and out["exists"]
    path = tmp_path / "beta.json"
    path.write_text(json.dumps(out["beta"]))
    code, out2 = _run("spinc", "builtin:rp3_two_tet", "--beta", str(path))
    assert code == 0 and out2["beta_check"]["accepted"]
    odd = {k: v + 1 for k, v in out["beta"].items()}
    path.write_text(json.dumps(odd))
    code, out3 = _run("spinc", "builtin:rp3_two_tet", "--beta", str(path))
    assert code == 5 and not out3["beta_check"]["accepted"]


def test_spinc_beta_not_cocycle(tmp_path):
    path = tmp_path / "beta.json"
    path.write_text(json.dumps({"0": 1}))
    code, out = _run("spinc", "builtin:s3_two_tet", "--beta", str(path))
    assert code == 5 and out["beta_check"]["reason"] == "beta is not a cocycle"


def test_corpus_commands():
    code, out = _run("corpus")
    assert code == 0 and "torus2" in out["builtins"]
    code, out = _run("corpus", "rp3_two_tet")
    assert out["expected"]["spin_count"] == 2
    code, out = _run("corpus", "torus2", "--export")
    assert out["dimension"] == 2 and out["simplices"] == 2


def test_groups():
    code, out = _run("groups")
    assert code == 0
    assert out["covers"]["a5"]["order"] == 120
    assert out["models"]["sigma4"] == {"1": 1, "2": 1, "3": 8, "4": 18, "6": 8, "8": 12}


def test_main_writes_streams(capsys):
    code = main(["validate", "builtin:klein"])
    captured = capsys.readouterr()
    assert code == 0
    assert json.loads(captured.out)["valid"] is True
    assert "valid 2-dimensional" in captured.err


def test_module_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "combspin", "spin", "builtin:torus2", "--enumerate"]
    a = subprocess.run(cmd, capture_output=True, check=False)
    b = subprocess.run(cmd, capture_output=True, check=False)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
