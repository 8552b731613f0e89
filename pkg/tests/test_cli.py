import json

import pytest
from click.testing import CliRunner

from hocolimcat.cli import main



def run(*args):
    return CliRunner().invoke(main, list(args), catch_exceptions=False)


def run_json(*args):
    res = run(*args, "--json")
    return res.exit_code, json.loads(res.output)


def facts(doc, name):
    return next(s["facts"] for s in doc["sections"] if s["name"] == name)


def test_factorization_for_m2():
    res = run("check-factorization", "--operad", "Mk:2", "--max-arity", "4")
    assert res.exit_code == 0
    assert res.output.startswith("check-factorization: PASS")


def test_nerve_homology_of_m2_arity_two():
    code, doc = run_json("nerve-homology", "--operad", "Mk:2", "--arity", "2", "--dim", "3")
    assert code == 0
    h = facts(doc, "homology")
    assert h["groups"][:2] == ["Z", "Z"]
    assert (h["objects"], h["morphisms"]) == (4, 8)


def test_grothendieck_compare_square():
    res = run("grothendieck-compare", "--diagram", "fixtures/square.json")
    assert res.exit_code == 0
    assert "isomorphic: true" in res.output


@pytest.mark.parametrize("args", [
    ["check-operad", "--operad", "Mk:2", "--max-arity", "3", "--sample", "20"],
    ["check-algebra", "--operad", "SigmaTilde", "--cap", "2", "--max-arity", "2", "--sample", "10"],
    ["check-lax", "--diagram", "m2-square.json", "--max-arity", "2", "--sample", "5"],
    ["check-diagram", "--diagram", "m2-square.json", "--max-arity", "2"],
    ["hocolim-build", "--diagram", "m2-square.json", "--sample", "5"],
    ["universal-check", "--diagram", "m2-square.json", "--sample", "3"],
    ["strictify-check", "--sample", "10"],
    ["eta-compare", "--sample", "2"],
    ["bar-check"],
    ["braid-eq"],
], ids=lambda a: a[0])
def test_commands_pass_and_are_reproducible(args):
    first, second = run(*args), run(*args)
    assert first.exit_code == 0, first.output
    assert first.output == second.output


def test_example_composition_through_the_cli():
    code, doc = run_json("hocolim-build", "--diagram", "example-4-2.json", "--sample", "2")
    assert code == 0
    assert doc["status"] == "pass"


def test_explicit_seed_is_echoed_and_reproducible():
    a = run("hocolim-build", "--diagram", "m2-square.json", "--sample", "5", "--json", "--seed", "1")
    b = run("hocolim-build", "--diagram", "m2-square.json", "--sample", "5", "--json", "--seed", "1")
    assert a.output == b.output
    assert json.loads(a.output)["seed"] == 1


def test_timing_is_opt_in():
    assert "seconds" not in run("braid-eq").output.lower()
    assert "time" in run("braid-eq", "--timing").output.lower()


# ---------------------------------------------------------------------------
# failures and replay


@pytest.fixture
def wrong_braids(tmp_path):
    p = tmp_path / "wrong.txt"
    p.write_text("3 | s1 s2 | s2 s1 | equal\n3 | s1 s2 s1 | s2 s1 s2 | equal\n")
    return str(p)


def test_failure_exits_one_with_a_witness(wrong_braids):
    code, doc = run_json("braid-eq", "--file", wrong_braids)
    assert code == 1 and doc["status"] == "fail"
    findings = [f for s in doc["sections"] for f in s.get("findings", [])]
    assert [f["witness"] for f in findings] == ["3 | s1 s2 | s2 s1 | equal"]


def test_replay_reproduces_the_failure(wrong_braids):
    _, doc = run_json("braid-eq", "--file", wrong_braids)
    token = next(f["replay"] for s in doc["sections"] for f in s.get("findings", []))
    code, again = run_json("braid-eq", "--replay", token)
    assert code == 1
    replayed = [f for s in again["sections"] for f in s.get("findings", [])]
    assert len(replayed) == 1 and replayed[0]["law"] == "expected result"


def test_replay_token_for_another_command_is_rejected(wrong_braids):
    _, doc = run_json("braid-eq", "--file", wrong_braids)
    token = next(f["replay"] for s in doc["sections"] for f in s.get("findings", []))
    assert run("bar-check", "--replay", token).exit_code == 2


def test_braid_words_on_the_command_line():
    assert run("braid-eq", "--strands", "3", "s1 s2 s1", "s2 s1 s2").exit_code == 0
    code, doc = run_json("braid-eq", "--strands", "3", "s1 s2", "s2 s1")
    assert code == 0
    assert facts(doc, "cases")["results"][0]["equal"] is False


def test_unknown_operad_is_a_usage_error():
    res = run("check-operad", "--operad", "Bogus")
    assert res.exit_code == 2 and "Bogus" in res.output


def test_json_parse_error_names_line_and_column(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"a": [1,\n 2,,]}')
    res = run("check-diagram", "--diagram", str(p))
    assert res.exit_code == 2
    assert "line 2, column 4" in res.output


def test_braid_fixture_parse_error_names_the_line(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("# header\n3 | s1 s2\n")
    res = run("braid-eq", "--file", str(p))
    assert res.exit_code == 2
    assert "line 2, column 1" in res.output


def test_grothendieck_compare_rejects_an_algebra_diagram():
    res = run("grothendieck-compare", "--diagram", "m2-square.json")
    assert res.exit_code == 2
