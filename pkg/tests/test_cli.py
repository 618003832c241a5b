import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from corpus import FIXTURES
from elhcf.cli import main
from elhcf.oracle import naive_instance_check
from elhcf.parser import parse_concept, parse_kb

SCHEMA = json.loads((Path(__file__).parents[1] / "docs" / "explain_report.schema.json").read_text())


def kb(name):
    return str(FIXTURES / name)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def explain_json(capsys, *argv):
    code, out, _ = run(capsys, "explain", "--format", "json", *argv)
    assert code == 0
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    return report


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", "--kb", kb("family.kb"))
    assert code == 0 and out.startswith("ok:")


def test_validate_kind_conflict(capsys, tmp_path):
    p = tmp_path / "bad.kb"
    p.write_text("Male(anna)\nMale(anna, alex)\n")
    code, _, err = run(capsys, "validate", "--kb", str(p))
    assert code == 2
    assert "2:1" in err and "Male" in err


def test_validate_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "validate", "--kb", str(tmp_path / "nope.kb"))
    assert code == 4 and "cannot read" in err


def test_usage_error(capsys):
    assert run(capsys, "explain", "--kb", kb("example1.kb"))[0] == 1
    assert run(capsys, "frobnicate")[0] == 1


def test_check(capsys):
    assert run(capsys, "check", "--kb", kb("example1.kb"), "--concept", "D", "--individual", "x")[1] == "true\n"
    assert run(capsys, "check", "--kb", kb("chain.kb"), "--concept", "Thing", "--individual", "x")[1] == "true\n"
    code, _, err = run(capsys, "check", "--kb", kb("example1.kb"), "--concept", "D", "--individual", "y")
    assert code == 2
    assert run(capsys, "check", "--kb", kb("example1.kb"), "--concept", "D and", "--individual", "x")[0] == 2


def test_check_family_matches_oracle(capsys):
    fam = parse_kb((FIXTURES / "family.kb").read_text())
    c = parse_concept("Male and hasSibling some Female")
    sister = next(y for y in sorted(fam.individuals)
                  if naive_instance_check(fam, parse_concept("Female and hasSibling some Thing"), y))
    _, out, _ = run(capsys, "check", "--kb", kb("family.kb"), "--concept",
                    "Male and hasSibling some Female", "--individual", sister)
    assert out == ("true\n" if naive_instance_check(fam, c, sister) else "false\n")
    assert out == "false\n"


def test_explain_example1(capsys):
    r = explain_json(capsys, "--kb", kb("example1.kb"), "--concept", "D", "--individual", "x")
    assert r["candidatesTotal"] == 2 and not r["infeasible"]
    assert [(c["removed"], c["editDistance"], c["lMin"], c["lMean"]) for c in r["counterfactuals"]] == [
        (["B(x)", "D(x)"], 2, None, None), (["C(x)", "D(x)"], 2, None, None)]
    again = explain_json(capsys, "--kb", kb("example1.kb"), "--concept", "D", "--individual", "x")
    assert again == r


def test_explain_top_is_infeasible(capsys):
    r = explain_json(capsys, "--kb", kb("example1.kb"), "--concept", "Thing", "--individual", "x")
    assert r["infeasible"] and r["counterfactuals"] == []
    assert "cannot be made to fail" in r["message"]


def test_explain_sibling_rank_min(capsys):
    r = explain_json(capsys, "--kb", kb("sibling.kb"), "--concept", "Male and hasSibling some Female",
                     "--individual", "x", "--rank", "min")
    assert [(c["removed"], c["editDistance"], c["lMin"], c["lMeanExact"]) for c in r["counterfactuals"]] == [
        (["hasSibling(x, a)"], 1, 0, "3/2"), (["Male(x)"], 1, 1, "3/2")]


def test_explain_max_candidates_truncates_report_only(capsys):
    r = explain_json(capsys, "--kb", kb("sibling.kb"), "--concept", "Male and hasSibling some Female",
                     "--individual", "x", "--max-candidates", "1")
    assert len(r["counterfactuals"]) == 1 and r["candidatesTotal"] == 2


def test_explain_add(capsys):
    r = explain_json(capsys, "--kb", kb("sibling.kb"), "--concept", "hasSibling some Male",
                     "--individual", "b", "--direction", "add")
    assert r["counterfactuals"][0]["added"] == ["Male(_cf_fresh_1)", "hasSibling(b, _cf_fresh_1)"]


def test_explain_already_fulfilled(capsys):
    code, _, err = run(capsys, "explain", "--kb", kb("example1.kb"), "--concept", "A",
                       "--individual", "x")
    assert code == 3 and "already fulfilled" in err
    code, _, _ = run(capsys, "explain", "--kb", kb("example1.kb"), "--concept", "D",
                     "--individual", "x", "--direction", "add")
    assert code == 3


def test_explain_text_and_labels(capsys):
    code, out, _ = run(capsys, "explain", "--kb", kb("animals.kb"), "--concept", "Turtle",
                       "--individual", "t", "--labels", kb("animals.labels"))
    assert code == 0
    assert "t would not have been classified as Turtle if t did not have scales." in out
    assert out.splitlines()[0].startswith("request: rem (Turtle)(t)")


def test_explain_materialize_off(capsys):
    r = explain_json(capsys, "--kb", kb("chain.kb"), "--concept", "C", "--individual", "x",
                     "--materialize", "off")
    assert r["materialized"] is False
    assert r["counterfactuals"][0]["removed"] == ["A(x)"]


def test_materialize_chain(capsys):
    code, out, _ = run(capsys, "materialize", "--kb", kb("chain.kb"))
    assert code == 0
    assert {"B(x)", "C(x)", "D(x)"} <= set(out.splitlines())


def test_materialize_roles(capsys):
    _, out, _ = run(capsys, "materialize", "--kb", kb("roles.kb"))
    assert {"hasChild(ann, bob)", "hasRelative(ann, bob)", "hasRelative(ann, cid)"} <= set(out.splitlines())


def test_materialize_idempotent(tmp_path, capsys):
    first, second = tmp_path / "m1.kb", tmp_path / "m2.kb"
    assert run(capsys, "materialize", "--kb", kb("family.kb"), "--out", str(first))[0] == 0
    assert run(capsys, "materialize", "--kb", str(first), "--out", str(second))[0] == 0
    assert first.read_bytes() == second.read_bytes()


def test_materialize_unwritable(tmp_path, capsys):
    code, _, _ = run(capsys, "materialize", "--kb", kb("chain.kb"), "--out", str(tmp_path / "no" / "x.kb"))
    assert code == 4


@pytest.mark.parametrize("module", ["elhcf", "elhcf.cli"])
def test_entry_points(module):
    p = subprocess.run([sys.executable, "-m", module, "check", "--kb", kb("example1.kb"),
                        "--concept", "D", "--individual", "x"], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout == "true\n"
