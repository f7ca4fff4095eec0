import json
import subprocess
import sys

import pytest

from orbclass.algebra import RationalTermSum
from orbclass.cli import JobSpec, main, run, verify
from orbclass.errors import SchemaError, ValidationError
from orbclass.orbit import term_F

ELLIPTIC_1 = {"summands": [{"a": 4, "b": 0}, {"a": 6, "b": 0}], "projective_weights": [2, 3]}
APP = {"d": 3, "characters": [[0, 0, 1], [0, 1, 1], [1, 0, 1], [1, 1, 1]], "support": [True] * 4}


def cli(args, stdin=None):
    proc = subprocess.run([sys.executable, "-m", "orbclass.cli", *args], input=stdin,
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_run_examples():
    assert run({"command": "ratmap", "payload": {"n": 2, "profile": [1, 1, 1]}}).result["degree"] == "6"
    assert run({"command": "torus", "payload": APP}).result["class"] == "x+y+2*z"
    r = run(JobSpec("class", ELLIPTIC_1))
    assert r.result["codim"] == 8 and r.result["degree"] == "1119744"
    assert r.result["stabilizer_weighted"] is True


def test_stabilizer_order_divides():
    r = run(JobSpec("class", {**ELLIPTIC_1, "stabilizer_order": 2}))
    assert r.result["degree"] == "559872" and r.result["stabilizer_weighted"] is False


def test_elliptic_payload():
    r = run(JobSpec("elliptic", {"n": 2, "types": ["II"], "fibers": [{"ord_A": 4, "ord_B": 6}]}))
    kinds = [f["kodaira_type"] for f in r.result["fibers"]]
    assert kinds == ["non-minimal", "II"]
    assert r.result["fibers"][1]["c"] == "1/3"


def test_ratmap_from_forms():
    payload = {"F": [1, 0, 0], "G": [0, 0, 1], "roots": [{"point": [1, 0], "mult": 1},
                                                       {"point": [0, 1], "mult": 1},
                                                       {"point": [1, 1], "mult": 1}]}
    r = run(JobSpec("ratmap", payload))
    assert r.result["J"] == "x^2*y-x*y^2" and r.result["profile"] == [1, 1, 1]
    assert r.result["degree"] == "6" and r.ok


def test_ratmap_base_point_is_flagged():
    # F = x y and G = x y + y^2 share the factor y; J = -x^2 y
    payload = {"F": [0, 1, 0], "G": [0, 1, 1], "roots": [{"point": [0, 1], "mult": 2}, {"point": [1, 0], "mult": 1}]}
    r = run(JobSpec("ratmap", payload))
    assert any("base points" in n for n in r.notes)
    assert r.checks == []


def test_schema_errors_point_at_field():
    with pytest.raises(SchemaError, match=r"payload.summands\[0\].b"):
        run(JobSpec("class", {"summands": [{"a": 1}]}))
    with pytest.raises(SchemaError, match="job.command"):
        run({"command": "nope", "payload": {}})
    with pytest.raises(ValidationError):
        run(JobSpec("class", {"summands": [{"a": 1, "b": -1}]}))


def test_polygon_round_trip():
    first = run(JobSpec("polygon", {"points": [{"x": "2/3", "y": 0, "weight": 3}, {"x": "1/4", "y": "1/4", "weight": 4}]}))
    again = run(JobSpec("polygon", json.loads(json.dumps(first.result))))
    assert first.result == again.result
    assert first.result["vertices"] == [["2/3", "0"], ["1/4", "1/4"]]
    assert any("horizontal" in n for n in first.notes)


def test_polygon_from_gl2_datum():
    payload = {"summands": [{"a": 4, "b": 0}, {"a": 6, "b": 0}], "points": [{"label": "u", "orders": [2, 0]}]}
    r = run(JobSpec("polygon", payload))
    poly = r.result["polygons"][0]
    assert poly["label"] == "u"
    again = run(JobSpec("polygon", {"points": poly["points"]}))
    assert again.result["vertex_normals"] == poly["vertex_normals"]
    assert again.result["scalars"] == poly["scalars"]


@pytest.mark.parametrize("payload", [
    {"summands": [{"a": 4, "b": 0}, {"a": 6, "b": 0}], "points": [{"label": "III", "orders": [1, 2]}]},
    {"summands": [{"a": 3, "b": 0}, {"a": 4, "b": -1}], "points": [{"orders": [0, 2]}, {"orders": [0, 3]}]},
])
def test_verify_passes(payload):
    r = verify(payload)
    assert r.ok, r.checks
    names = [c["name"] for c in r.checks]
    assert names == ["polynomiality", "symmetry", "homogeneity", "a_enlargement", "twist_n=1", "twist_n=2",
                     "localization_oracle", "divisibility"]


def test_verify_negative_control():
    payload = {"summands": [{"a": 4, "b": 0}, {"a": 6, "b": 0}], "points": [{"orders": [1, 2]}]}
    r = verify(payload, f_term=lambda b: RationalTermSum(term_F(b).terms[:1]))
    status = {c["name"]: c["pass"] for c in r.checks}
    assert status["localization_oracle"] is False


def test_main_exit_codes(tmp_path, capsys):
    good = tmp_path / "torus.json"
    good.write_text(json.dumps(APP))
    assert main(["torus", "--input", str(good)]) == 0
    assert json.loads(capsys.readouterr().out)["result"]["class"] == "x+y+2*z"
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["class", "--input", str(bad)]) == 1
    assert main(["ratmap", "--n", "3", "--profile", "1,1"]) == 1
    assert main(["ratmap", "--n", "3", "--profile", "2,2", "--text"]) == 0
    out = capsys.readouterr().out
    assert "degree: 24" in out


def test_job_wrapper(tmp_path, capsys):
    job = tmp_path / "job.json"
    job.write_text(json.dumps({"command": "ratmap", "payload": {"n": 2, "profile": [1, 1, 1]}, "output": "text"}))
    assert main(["job", "--input", str(job)]) == 0
    assert "degree: 6" in capsys.readouterr().out


def test_subprocess_determinism_and_stdin():
    payload = json.dumps({"summands": [{"a": 4, "b": 0}, {"a": 6, "b": 0}], "points": [{"orders": [1, 1]}]})
    code1, out1, _ = cli(["verify", "--input", "-"], payload)
    code2, out2, _ = cli(["verify", "--input", "-"], payload)
    assert code1 == code2 == 0 and out1 == out2
    code, _, err = cli(["elliptic", "--n", "1", "--fiber", "5,0"])
    assert code == 1 and "error" in err
    code, out, _ = cli(["elliptic", "--n", "1", "--type", "II,III", "--text"])
    assert code == 0 and "engine_equals_closed_form: pass" in out
