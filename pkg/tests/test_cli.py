import json

import pytest

from deltasr.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from deltasr.reductions import build_conjunction_tree
from deltasr.tree import serialize, tree_from_nested


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


@pytest.fixture
def and2(tmp_path):
    path = tmp_path / "and2.tree"
    path.write_bytes(serialize(tree_from_nested(2, (0, 0, (1, 0, 1)))))
    return path


def test_eval(capsys, and2):
    code, out = _run(capsys, "eval", and2, "1*")
    rec = json.loads(out)
    assert code == EXIT_OK
    assert rec == {"value": "1/2", "pow2": "1/2^1", "decimal": "0.5", "complete": False}


def test_check_sr_exit_codes(capsys, and2):
    code, out = _run(capsys, "check-sr", and2, "11", "--set", "1", "--delta", "1/2")
    assert code == EXIT_OK and json.loads(out)["sufficient"]
    code, _ = _run(capsys, "check-sr", and2, "11", "--set", "1", "--delta", "3/4")
    assert code == EXIT_FAIL


def test_min_sr(capsys, and2):
    code, out = _run(capsys, "min-sr", and2, "11", "--delta", "1")
    assert code == EXIT_OK and json.loads(out)["set"] == "1,2"
    code, out = _run(capsys, "min-sr", and2, "11", "--delta", "1", "--method", "greedy")
    assert json.loads(out)["budget_status"] == "heuristic"


def test_budget_exit_code(capsys, tmp_path):
    path = tmp_path / "conj.tree"
    path.write_bytes(serialize(build_conjunction_tree(range(10))))
    code, _ = _run(capsys, "min-sr", path, "1" * 10, "--delta", "1", "--max-vars", "4")
    assert code == EXIT_BUDGET


def test_usage_errors(capsys, and2, tmp_path):
    assert _run(capsys, "eval", and2, "1")[0] == EXIT_USAGE
    assert _run(capsys, "eval", tmp_path / "missing.tree", "11")[0] == EXIT_USAGE
    assert _run(capsys, "nonsense")[0] == EXIT_USAGE
    bad = tmp_path / "bad.tree"
    bad.write_text("dtree 1\nvars 1\nnodes 1\nroot 0\n0 leaf 5\n")
    code = main(["eval", str(bad), "1"])
    assert code == EXIT_USAGE and "line 5" in capsys.readouterr().err


def test_reduce_t1_canonical_block(capsys, tmp_path):
    src = tmp_path / "t.tree"
    src.write_bytes(serialize(build_conjunction_tree(range(4))))
    out = tmp_path / "t1.tree"
    code, text = _run(capsys, "reduce", "t1", src, "--epsilon", "1/2", "-o", out)
    rec = json.loads(text)
    assert code == EXIT_OK and rec["m"] == 36 and rec["canonical"]
    meta = json.loads((tmp_path / "t1.tree.json").read_text())
    assert meta["num_vars"] == 40


def test_gen_then_verify_completeness(capsys, tmp_path):
    inst = tmp_path / "inst.cnf"
    code, _ = _run(capsys, "gen", "--vars", 8, "--clauses", 6, "--width", 3, "--seed", 4,
                   "--planted", "10010000", "-o", inst)
    assert code == EXIT_OK
    code, out = _run(capsys, "verify", "completeness", inst, "--assignment", "10010000",
                     "--kappa", "1/4", "--gap", "1/2")
    rec = json.loads(out)["reports"][0]
    assert code == EXIT_OK and rec["verdict"] == "pass" and rec["params"]["K"] == 17


def test_gen_stdout_is_deterministic(capsys):
    _, a = _run(capsys, "gen", "--vars", 6, "--clauses", 4, "--width", 3, "--seed", 9)
    _, b = _run(capsys, "gen", "--vars", 6, "--clauses", 4, "--width", 3, "--seed", 9)
    assert a == b and a.startswith("p 1inkhs 6 4 3")


def test_gadget_lc_and_eval(capsys, tmp_path):
    out = tmp_path / "lc3.tree"
    assert _run(capsys, "gadget", "lc", "--width", 3, "-o", out)[0] == EXIT_OK
    _, text = _run(capsys, "eval", out, "1*1*")
    assert json.loads(text)["value"] == "3/4"


def test_gadget_l_and_amplify(capsys, tmp_path):
    inst = tmp_path / "inst.cnf"
    _run(capsys, "gen", "--vars", 5, "--clauses", 3, "--width", 3, "--seed", 1, "-o", inst)
    L = tmp_path / "L.tree"
    code, text = _run(capsys, "gadget", "l", inst, "-o", L)
    assert code == EXIT_OK and json.loads(text)["layout"]["width"] == 9
    T = tmp_path / "T.tree"
    code, text = _run(capsys, "gadget", "amplify", L, "--copies", 3, "--threshold", 2, "-o", T)
    assert code == EXIT_OK and json.loads(text)["depth"] == 3 * 7


def test_reduce_hardness(capsys, tmp_path):
    inst = tmp_path / "inst.cnf"
    _run(capsys, "gen", "--vars", 5, "--clauses", 3, "--width", 3, "--seed", 1, "-o", inst)
    out = tmp_path / "T.tree"
    code, text = _run(capsys, "reduce", "hardness", inst, "--kappa", "1/4", "--gap", "1/2",
                      "-o", out)
    rec = json.loads(text)
    assert code == EXIT_OK and rec["params"]["K"] == 17 and rec["depth_T"] == 17 * 7


def test_verify_table_and_failure(capsys, tmp_path):
    code, out = _run(capsys, "verify", "lemma-cases", "--k", 3, "--format", "table")
    assert code == EXIT_OK and out.startswith("claim")
    inst = tmp_path / "inst.cnf"
    _run(capsys, "gen", "--vars", 6, "--clauses", 4, "--width", 3, "--seed", 1,
         "--planted", "100100", "-o", inst)
    # a planted instance is not certified unsatisfiable: precondition error
    assert _run(capsys, "verify", "soundness", inst)[0] == EXIT_USAGE


def test_verify_all(capsys):
    code, out = _run(capsys, "--jobs", 2, "verify", "all")
    recs = json.loads(out)["reports"]
    assert code == EXIT_OK
    assert {r["id"] for r in recs} == {"lemma-cases", "fat-prob", "completeness",
                                       "soundness", "t1"}
