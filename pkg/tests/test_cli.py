import json
import os
import subprocess
import sys

import jsonschema
import pytest

from cohomoforge import cli
from cohomoforge.errors import NotAssociative, SchemaError, UnknownCommand
from cohomoforge.report import REPORT_SCHEMA

C3_Z7 = {"schema": "cohomoforge/1", "kind": "gmodule", "group": {"catalog": "C3"}, "factors": [7],
         "generator_action": [[1, [[2]]]]}
Z4_NEG = {"schema": "cohomoforge/1", "kind": "gmodule", "group": {"kind": "group", "table": [[0, 1], [1, 0]]},
          "factors": [4], "action": [[[1]], [[3]]], "subgroup": [0, 1]}
HEIS = {"schema": "cohomoforge/1", "kind": "liering", "p": 5, "dim": 3,
        "bracket": [[[0, 0, 0], [0, 0, 1], [0, 0, 0]], [[0, 0, -1], [0, 0, 0], [0, 0, 0]],
                    [[0, 0, 0], [0, 0, 0], [0, 0, 0]]],
        "ideal": [[0, 0, 1]]}
GL2_F2 = {"schema": "cohomoforge/1", "kind": "liering", "p": 2, "dim": 4,
          "bracket": [[[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]],
                      [[0, 1, 0, 0], [0, 0, 0, 0], [1, 0, 0, 1], [0, 1, 0, 0]],
                      [[0, 0, 1, 0], [1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 1, 0]],
                      [[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]]],
          "pmap": [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1]], "torus": [[1, 0, 0, 0]]}
SES = {"schema": "cohomoforge/1", "kind": "ses", "group": {"catalog": "C2"},
       "modules": {"A": {"factors": [2]}, "B": {"factors": [4]}, "C": {"factors": [2]}},
       "left": "A", "middle": "B", "right": "C", "inj": [[2]], "surj": [[1]]}
LIE_SES = {"schema": "cohomoforge/1", "kind": "ses", "liering": {"p": 3, "dim": 1, "bracket": [[[0]]]},
           "modules": {"A": {"action": [[[0]]]}, "B": {"action": [[[0, 1], [0, 0]]]}, "C": {"action": [[[0]]]}},
           "left": "A", "middle": "B", "right": "C", "inj": [[1], [0]], "surj": [[0, 1]]}
BIG = {"schema": "cohomoforge/1", "kind": "gmodule", "group": {"catalog": "C2^3"}, "factors": [2, 2, 2, 2]}


def write(tmp_path, doc, name="input.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if isinstance(doc, dict) else doc)
    return str(path)


def run(capsys, *argv, environ=None):
    code = cli.main(list(argv), environ=environ or {})
    out, err = capsys.readouterr()
    return code, out, err


def test_minimal_group_parses(tmp_path):
    doc = cli.parse_input(write(tmp_path, {"schema": "cohomoforge/1", "kind": "group", "table": [[0, 1], [1, 0]]}))
    assert doc.kind == "group" and doc.objects["group"].order == 2


def test_gmodule_parses_and_validates(tmp_path):
    doc = cli.parse_input(write(tmp_path, C3_Z7))
    assert [int(m[0, 0]) for m in doc.objects["module"].rho] == [1, 2, 4]


def test_permutation_group_document():
    doc = cli.parse_text(json.dumps({"schema": "cohomoforge/1", "kind": "group", "perm_degree": 3,
                                     "generators": [[1, 0, 2], [1, 2, 0]]}))
    assert doc.objects["group"].order == 6


def test_non_associative_table():
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(NotAssociative):
        cli.parse_text(json.dumps({"schema": "cohomoforge/1", "kind": "group", "table": loop}))


def test_schema_error_location():
    text = '{\n  "schema": "cohomoforge/1",\n  "kind": "gmodule",\n  "group": {"catalog": "C2"},\n  "factors": [0]\n}\n'
    with pytest.raises(SchemaError) as exc:
        cli.parse_text(text)
    assert exc.value.line == 5 and exc.value.field == "factors/0"
    with pytest.raises(SchemaError) as exc:
        cli.parse_text('{\n  "schema": "cohomoforge/1",\n  "kind": \n}')
    assert exc.value.line == 4
    with pytest.raises(SchemaError) as exc:
        cli.parse_text('{"schema": "cohomoforge/2", "kind": "group", "table": [[0]]}')
    assert exc.value.field == "schema"
    with pytest.raises(SchemaError):
        cli.parse_text('{"schema": "cohomoforge/1", "kind": "group", "catalog": "nope"}')


def test_ses_names_must_resolve():
    bad = dict(SES, middle="Z")
    with pytest.raises(SchemaError) as exc:
        cli.parse_text(json.dumps(bad))
    assert exc.value.field == "middle"


@pytest.mark.parametrize("doc", [C3_Z7, Z4_NEG, HEIS, GL2_F2, SES, LIE_SES])
def test_emit_round_trip(doc):
    text = cli.emit(cli.parse_text(json.dumps(doc)))
    assert cli.emit(cli.parse_text(text)) == text
    assert json.loads(text) == doc
    assert text.endswith("}\n")


def test_canonical_key_order():
    text = cli.canonical_json({"b": 1, "a": [[1, 2], [3]]})
    assert text == '{\n  "a": [\n    [1, 2],\n    [3]\n  ],\n  "b": 1\n}'


def test_h1_reports_zero(tmp_path, capsys):
    code, out, err = run(capsys, "h1", write(tmp_path, C3_Z7))
    assert code == 0 and "H1 = 0" in out and err == ""


def test_json_reports_are_schema_valid(tmp_path, capsys):
    for command, doc in [("cohomology", Z4_NEG), ("h1", Z4_NEG), ("inf-res", Z4_NEG), ("les", SES),
                         ("maschke", C3_Z7), ("schur", C3_Z7), ("vanishing", C3_Z7),
                         ("lie-cohomology", HEIS), ("lie-h1", HEIS), ("lie-inf-res", HEIS),
                         ("lie-theorems", HEIS), ("lie-six-term", LIE_SES), ("lie-restricted", GL2_F2),
                         ("frattini", {"schema": "cohomoforge/1", "kind": "group", "catalog": "S3"})]:
        code, out, _ = run(capsys, command, write(tmp_path, doc), "--json")
        report = json.loads(out)
        jsonschema.validate(report, REPORT_SCHEMA)
        assert code == 0 and report["overall"] == "pass", command


def test_cohomology_values_in_report(tmp_path, capsys):
    code, out, _ = run(capsys, "cohomology", write(tmp_path, Z4_NEG), "--json")
    entries = {e["id"]: e for e in json.loads(out)["entries"]}
    assert [entries[f"H{n}"]["data"]["factors"] for n in range(3)] == [[2], [2], [2]]


def test_budget_errors_exit_2(tmp_path, capsys):
    code, out, err = run(capsys, "cohomology", write(tmp_path, BIG), "--degree", "3")
    assert code == 2 and "SizeBudgetExceeded" in err and out == ""
    code, _, err = run(capsys, "cohomology", write(tmp_path, Z4_NEG), "--degree", "3")
    assert code == 2 and "DegreeCapExceeded" in err
    code, out, _ = run(capsys, "cohomology", write(tmp_path, Z4_NEG), "--degree", "3", "--degree-cap", "3")
    assert code == 0 and "H3 = Z/2" in out


def test_input_errors_exit_2(tmp_path, capsys):
    code, _, err = run(capsys, "bogus", write(tmp_path, C3_Z7))
    assert code == 2 and "UnknownCommand" in err
    code, _, err = run(capsys, "h1", write(tmp_path, '{"schema": "cohomoforge/1"}'))
    assert code == 2 and "SchemaError" in err
    code, _, err = run(capsys, "h1", str(tmp_path / "missing.json"))
    assert code == 2
    code, _, err = run(capsys, "inf-res", write(tmp_path, C3_Z7))
    assert code == 2 and "subgroup" in err


def test_failing_check_exits_1(tmp_path, capsys, monkeypatch):
    def broken(doc, args, report):
        report.check("always false", False, {"x": 1}, {"x": 1})
    monkeypatch.setitem(cli.HANDLERS, "h1", broken)
    code, out, _ = run(capsys, "h1", write(tmp_path, C3_Z7))
    assert code == 1 and "FAIL" in out and "witness" in out


def test_run_command_unknown():
    with pytest.raises(UnknownCommand):
        cli.run_command(None, "nope", cli.build_parser().parse_args(["suite"]))


def test_environment_and_flag_precedence(tmp_path, capsys):
    path = write(tmp_path, Z4_NEG)
    code, out, _ = run(capsys, "cohomology", path, "--json", environ={"COHOMOFORGE_DEGREE_CAP": "1"})
    ids = [e["id"] for e in json.loads(out)["entries"]]
    assert "H1" in ids and "H2" not in ids
    code, out, _ = run(capsys, "cohomology", path, "--json", "--degree-cap", "2",
                       environ={"COHOMOFORGE_DEGREE_CAP": "1"})
    assert "H2" in [e["id"] for e in json.loads(out)["entries"]]
    code, _, err = run(capsys, "cohomology", path, "--degree", "2", environ={"COHOMOFORGE_SIZE_BUDGET": "10"})
    assert code == 2 and "SizeBudgetExceeded" in err


def test_plot_dir(tmp_path, capsys):
    plots = tmp_path / "plots"
    code, _, _ = run(capsys, "cohomology", write(tmp_path, Z4_NEG), "--plot-dir", str(plots))
    assert code == 0
    rows = (plots / "summary.tsv").read_text().splitlines()
    assert rows[0] == "id\tstatus\tseconds"
    assert rows[1].startswith("H0\tpass\t")
    assert (plots / "summary.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_suite_subset(capsys):
    code, out, _ = run(capsys, "suite", "--scale", "quick", "--only", "7", "14", "--json")
    report = json.loads(out)
    jsonschema.validate(report, REPORT_SCHEMA)
    assert code == 0 and [e["id"][:12] for e in report["entries"]] == ["criterion 07", "criterion 14"]


def test_battery_document(tmp_path, capsys):
    path = write(tmp_path, {"schema": "cohomoforge/1", "kind": "battery", "catalog": "small"})
    code, out, _ = run(capsys, "frattini", path, "--scale", "quick", "--json")
    report = json.loads(out)
    assert code == 0 and report["entries"][0]["data"]["groups"] == 42


def test_console_entry_point_streams(tmp_path):
    env = dict(os.environ, PYTHONPATH=os.pathsep.join(sys.path))
    ok = subprocess.run([sys.executable, "-m", "cohomoforge.cli", "h1", write(tmp_path, C3_Z7)],
                        capture_output=True, text=True, env=env)
    assert ok.returncode == 0 and "H1 = 0" in ok.stdout and ok.stderr == ""
    bad = subprocess.run([sys.executable, "-m", "cohomoforge.cli", "h1", write(tmp_path, BIG, "big.json"),
                          "--size-budget", "1"], capture_output=True, text=True, env=env)
    assert bad.returncode == 2 and bad.stdout == "" and "SizeBudgetExceeded" in bad.stderr
