"""The command-line interface: exit codes, text output, and JSON output."""

import json

from click.testing import CliRunner

from lclre import catalog
from lclre.cli import main
from lclre.problem import (parse_problem, problem_from_json, problem_to_json,
                           serialize_problem)
from lclre.roundelim import q as q_op


def run(*args, stdin=None):
    return CliRunner().invoke(main, list(args), input=stdin)


def sso_text():
    return serialize_problem(catalog.sso())


def write_problem(tmp_path, name, p):
    path = tmp_path / name
    path.write_text(serialize_problem(p))
    return str(path)


def test_q_from_stdin_text():
    r = run("q", stdin=sso_text())
    assert r.exit_code == 0
    assert parse_problem(r.output) == q_op(catalog.sso())


def test_q_json_output():
    r = run("q", "--json", stdin=sso_text())
    assert r.exit_code == 0
    assert problem_from_json(json.loads(r.output)) == q_op(catalog.sso())


def test_q_accepts_json_input():
    text = json.dumps(problem_to_json(catalog.sso()))
    r = run("q", stdin=text)
    assert r.exit_code == 0
    assert parse_problem(r.output) == q_op(catalog.sso())


def test_qpow_matches_repeated_q(tmp_path):
    src = write_problem(tmp_path, "sso.txt", catalog.sso())
    r = run("qpow", "--k", "2", src)
    assert r.exit_code == 0
    assert parse_problem(r.output) == q_op(q_op(catalog.sso()))


def test_qpow_cap_error_exits_1(tmp_path):
    src = write_problem(tmp_path, "sso.txt", catalog.sso())
    r = run("qpow", "--k", "3", "--label-cap", "5", src)
    assert r.exit_code == 1
    assert "error:" in r.stderr


def test_parse_error_exits_1():
    r = run("q", stdin="garbage in")
    assert r.exit_code == 1
    assert "error:" in r.stderr


def test_missing_file_exits_1():
    r = run("q", "/nonexistent/path.txt")
    assert r.exit_code == 1


def test_product(tmp_path):
    a = write_problem(tmp_path, "a.txt", catalog.hom_problem(3))
    b = write_problem(tmp_path, "b.txt", catalog.edge_coloring(3))
    r = run("product", "--other", b, a)
    assert r.exit_code == 0
    from lclre.problem import product
    assert parse_problem(r.output) == product(catalog.hom_problem(3),
                                              catalog.edge_coloring(3))


def test_fixedpoint_exit_codes(tmp_path):
    so = write_problem(tmp_path, "so.txt", catalog.sinkless_orientation(3))
    sso = write_problem(tmp_path, "sso.txt", catalog.sso())
    r = run("fixedpoint", so)
    assert r.exit_code == 0 and "fixed point: yes" in r.output
    r = run("fixedpoint", sso)
    assert r.exit_code == 2 and "fixed point: no" in r.output
    r = run("fixedpoint", "--json", so)
    assert json.loads(r.output) == {"fixed_point": True}


def test_relax_search_and_exit_codes(tmp_path):
    sso = write_problem(tmp_path, "sso.txt", catalog.sso())
    so = write_problem(tmp_path, "so.txt", catalog.sinkless_orientation(3))
    r = run("relax", "--from", sso, "--to", so)
    assert r.exit_code == 0 and r.output.strip()
    r = run("relax", "--from", so, "--to", sso)
    assert r.exit_code == 2 and "no relaxation found" in r.output


def test_relax_verify_mapping(tmp_path):
    sso = write_problem(tmp_path, "sso.txt", catalog.sso())
    good = tmp_path / "map.json"
    good.write_text(json.dumps({"kind": "port-local",
                                "assignments": {"I": "I", "O": "O"}}))
    r = run("relax", "--kind", "portlocal", "--from", sso, "--to", sso,
            "--mapping", str(good))
    assert r.exit_code == 0 and "verified: yes" in r.output
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "port-local",
                               "assignments": {"I": "I", "O": "I"}}))
    r = run("relax", "--kind", "portlocal", "--from", sso, "--to", sso,
            "--mapping", str(bad))
    assert r.exit_code == 2 and "verified: no" in r.output


def test_zeroround_negative_prints_gadget(tmp_path):
    sso = write_problem(tmp_path, "sso.txt", catalog.sso())
    r = run("zeroround", sso)
    assert r.exit_code == 2
    assert "counterexample" in r.output


def test_zeroround_with_catalog_input(tmp_path):
    ec = write_problem(tmp_path, "ec.txt", catalog.edge_coloring(3))
    r = run("zeroround", "--input", "ec", ec)
    assert r.exit_code == 0
    assert "solvable" in r.output


def test_refute_sso(tmp_path):
    cand = write_problem(tmp_path, "cand.txt",
                         parse_problem("[node]\na d d\n[edge]\na d\nd d"))
    r = run("refute-sso", cand)
    assert r.exit_code == 0 and "zero-round rule" in r.output
    r = run("refute-sso", "--json", cand)
    body = json.loads(r.output)
    assert body["trace"]["i"] < body["trace"]["j"]


def test_lift_bounds():
    r = run("lift", "bounds", "--k", str(10 ** 9), "--delta", "3",
            "--L", "2^3^5", "--n", "2^3^85")
    assert r.exit_code == 0
    assert "randomized: raw = 75/16" in r.output
    r = run("lift", "bounds", "--k", str(10 ** 9), "--delta", "3",
            "--L", "2^3^5", "--n", "2^3^85", "--json")
    d = json.loads(r.output)["report"]
    assert d["randomized_rounds"] == 4


def test_lift_pn_floor():
    r = run("lift", "pn-floor", "--T", "1", "--L", "2", "--delta", "3",
            "--json")
    assert r.exit_code == 0
    assert json.loads(r.output)["log2"]["exact_fraction"] == [-43046721, 1]


def test_lift_failure_multi():
    r = run("lift", "failure", "--p", "2^-1000000", "--j", "2", "--delta",
            "3", "--s", "100", "--L", "2", "--json")
    assert r.exit_code == 0
    body = json.loads(r.output)
    assert body["which"] == "failure-multi"
    assert not body["bound"]["capped"]


def test_lift_failure_missing_args():
    r = run("lift", "failure", "--p", "1/2", "--delta", "3", "--j", "1")
    assert r.exit_code == 1


def test_catalog_list_and_fetch():
    r = run("catalog")
    assert r.exit_code == 0 and "sso" in r.output
    r = run("catalog", "sso")
    assert r.exit_code == 0
    assert parse_problem(r.output) == catalog.sso()
    r = run("catalog", "sso-qk", "--k", "2", "--json")
    assert len(json.loads(r.output)["labels"]) == 5
    r = run("catalog", "nope")
    assert r.exit_code == 1
