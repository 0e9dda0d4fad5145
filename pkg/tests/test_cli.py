import csv
import io
import json

import pytest

from zerodim import jsonio
from zerodim.cli import COMMANDS, run
from zerodim.frames import FiniteFrame, FiniteSpace, check_space_properties

from .cli_cases import CASES, SIERPINSKI


def invoke(tmp_path, command, obj, extra, name="in.json"):
    argv = [command, *extra]
    if obj is not None:
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        argv += ["--in", str(path)]
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def test_every_command_has_a_case():
    assert {c for c, _, _ in CASES.values()} == set(COMMANDS)


@pytest.mark.parametrize("case", sorted(CASES))
def test_cases_succeed_and_are_deterministic(tmp_path, case):
    command, obj, extra = CASES[case]
    code, out, err = invoke(tmp_path, command, obj, extra)
    assert code == 0, err
    assert invoke(tmp_path, command, obj, extra) == (code, out, err)
    if "csv" not in extra:
        rep = json.loads(out)
        assert rep["schema"] == jsonio.report_schema_version()
        assert rep["command"] == command
    else:
        assert next(csv.reader(io.StringIO(out)))[0] == "schema"


def result(tmp_path, case):
    command, obj, extra = CASES[case]
    code, out, _ = invoke(tmp_path, command, obj, extra)
    assert code == 0
    return json.loads(out)["result"]


def test_check_sierpinski(tmp_path):
    assert result(tmp_path, "check") == {"ultranormal": False, "zero_dimensional": False}


def test_enumerate_csv_rows(tmp_path):
    command, obj, extra = CASES["enumerate"]
    _, out, _ = invoke(tmp_path, command, obj, extra)
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 30
    assert all(r[0] == "1.0.0" for r in rows[1:])


def test_verify_report(tmp_path):
    status = {r["name"]: r["status"] for r in result(tmp_path, "verify")["implications"]}
    assert status["normal_implies_un"] == "refuted"
    assert status["upc_implies_un"] == "verified"


def test_search_report(tmp_path):
    r = result(tmp_path, "search")
    assert r["status"] == "found"
    X = jsonio.decode_instance(r["witness"])
    assert check_space_properties(X).normal and not check_space_properties(X).zero_dimensional


def test_sorgenfrey_report(tmp_path):
    assert result(tmp_path, "sorgenfrey")["breakpoints"] == ["0", "2", "3"]


def test_ultrametric_report(tmp_path):
    r = result(tmp_path, "ultrametric")
    assert r["separation"]["p2"] == "1/3"
    assert r["separator"] == ["p1", "p2"]
    assert r["ball_partition"] == [["p1", "p2"], ["p3", "p4"]]


def test_criteria_reports(tmp_path):
    r = result(tmp_path, "criteria")
    assert r["axioms"] == {"1": True, "2": True, "3": True, "4": True}
    assert r["subcomplete"] is True and r["ultraparacompact_criterion"] is True
    r = result(tmp_path, "criteria_lub")
    assert r["subcomplete"] is False


def test_bpa_reports(tmp_path):
    r = result(tmp_path, "bpa")
    assert r["is_bpa"] and r["subcomplete"] and r["locally_refinable"]
    assert r["frame"]["size"] == 4
    assert result(tmp_path, "bpa_map")["is_partition_homomorphism"] is True


def test_roundtrip_report(tmp_path):
    r = result(tmp_path, "roundtrip")
    assert r["isomorphic"] and r["canonical"]


def test_broken_space_exit_2(tmp_path):
    broken = {"kind": "space", "points": ["a"], "opens": [["a"]]}
    code, out, err = invoke(tmp_path, "check", broken, [])
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == "missing_empty_or_full"


@pytest.mark.parametrize(
    "command,obj,code",
    [
        ("sorgenfrey", {"M": "3", "intervals": [["0", "1"], ["2", "3"]]}, "not_a_cover"),
        ("ultrametric", {"points": ["a", "b"], "dist": [[0, 1], [2, 0]]}, "asymmetric"),
        ("check", {"kind": "frame", "size": 5, "leq": [[0, 1], [0, 2], [0, 3], [1, 4], [2, 4], [3, 4]]},
         "not_distributive"),
        ("dualize", {"algebra": {"kind": "fincof"}, "family": "all_with_lub"}, "fincof_not_materialized"),
    ],
)
def test_malformed_inputs_exit_2(tmp_path, command, obj, code):
    rc, _, err = invoke(tmp_path, command, obj, [])
    assert rc == 2
    assert json.loads(err)["error"] == code


def test_unparseable_json(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{nope")
    assert run(["check", "--in", str(p)], io.StringIO(), io.StringIO()) == 2


def test_out_flag_writes_file(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps(SIERPINSKI))
    out = tmp_path / "r.json"
    assert run(["check", "--in", str(p), "--out", str(out)], io.StringIO(), io.StringIO()) == 0
    assert json.loads(out.read_text())["result"]["normal"] is True


def test_instance_json_round_trip(tmp_path):
    r = result(tmp_path, "classify")
    L = jsonio.decode_instance(r["instance"])
    assert isinstance(L, FiniteFrame)
    assert jsonio.encode_instance(L) == r["instance"]
    X = jsonio.decode_instance(SIERPINSKI)
    assert isinstance(X, FiniteSpace)
    assert jsonio.decode_instance(json.loads(json.dumps(jsonio.encode_instance(X)))).opens == X.opens
