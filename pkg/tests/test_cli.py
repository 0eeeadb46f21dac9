import json
from pathlib import Path

from azumaya.cli import main

GOLDEN = Path(__file__).parent / "golden" / "example-5-1-11.json"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_demo_matches_golden_and_is_deterministic(capsys):
    code1, out1 = run(capsys, "demo", "example-5-1-11")
    code2, out2 = run(capsys, "demo", "example-5-1-11")
    assert code1 == code2 == 0
    assert out1 == out2
    assert out1 == GOLDEN.read_text(encoding="utf-8")


def test_demo_bhat_variants(capsys):
    code, doc = run_json(capsys, "demo", "example-5-1-11", "--bhat", "1,1,0,1")
    assert code == 0
    assert doc["data"]["pushforward"]["case"] == "RepeatedNilpotent"
    assert doc["data"]["pushforward"]["filtration"] is True
    code, doc = run_json(capsys, "demo", "example-5-1-11", "--bhat", "2,0,0,2")
    assert doc["data"]["pushforward"]["case"] == "RepeatedSemisimple"


def test_weyl_normal_form(capsys):
    code, doc = run_json(capsys, "weyl", "nf", "--expr", "D*x", "--lam", "1")
    assert code == 0
    assert doc["data"]["normal_form"] == "x*d + 1"


def test_weyl_action_and_reduce(capsys):
    code, doc = run_json(capsys, "weyl", "act", "--expr", "x*d", "--poly",
                         "x^2 + 1", "--lam", "1")
    assert doc["data"]["result"] == "2*x^2"
    code, doc = run_json(capsys, "weyl", "reduce", "--expr", "x^2*d")
    assert doc["data"]["scalar"] == "2*lam^3"
    assert [s["generator"] for s in doc["data"]["steps"]] == ["d1", "d1", "x1"]


def test_exit_code_violation(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "version": 1, "command": "coc check",
        "payload": {"group": "mu", "n": 4, "indices": 4,
                    "values": [{"ijk": [0, 1, 2], "v": 1}]}}))
    code, doc = run_json(capsys, "coc", "check", str(bad))
    assert code == 2
    assert doc["status"] == "violation"
    assert doc["data"]["violation"]


def test_exit_code_malformed_input(capsys, tmp_path):
    mal = tmp_path / "mal.json"
    mal.write_text("{ not json")
    code, doc = run_json(capsys, "coc", "check", str(mal))
    assert code == 1
    assert doc["status"] == "error"


def test_problem_file_validation(capsys, tmp_path):
    doc = {"version": 2, "command": "coc check",
           "payload": {"group": "mu", "n": 2, "indices": 2, "values": []}}
    f = tmp_path / "v.json"
    f.write_text(json.dumps(doc))
    code, rep = run_json(capsys, "coc", "check", str(f))
    assert code == 1 and "version" in rep["diagnostics"][0]

    doc["version"] = 1
    doc["command"] = "coc match"
    f.write_text(json.dumps(doc))
    code, rep = run_json(capsys, "coc", "check", str(f))
    assert code == 1 and "command" in rep["diagnostics"][0]

    doc["command"] = "coc check"
    doc["extra"] = True
    f.write_text(json.dumps(doc))
    code, rep = run_json(capsys, "coc", "check", str(f))
    assert code == 1 and "unknown" in rep["diagnostics"][0]


def test_unknown_payload_fields_rejected(capsys, tmp_path):
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"version": 1, "command": "azu classify",
                             "payload": {"B": [["1", "0"], ["0", "2"]],
                                         "bogus": 1}}))
    code, rep = run_json(capsys, "azu", "classify", str(f))
    assert code == 1 and "bogus" in rep["diagnostics"][0]


def test_module_error_surfaces_code(capsys, tmp_path):
    f = tmp_path / "ns.json"
    f.write_text(json.dumps({"version": 1, "command": "azu classify",
                             "payload": {"B": [["0", "2"], ["1", "0"]]}}))
    code, rep = run_json(capsys, "azu", "classify", str(f))
    assert code == 1
    assert rep["data"]["code"] == "E_NOT_SPLIT"


def test_azu_report(capsys):
    code, doc = run_json(capsys, "azu", "report", "--a", '[["0","1"],["0","0"]]',
                         "--lambda", "1", "--bhat", "1,0,0,2")
    assert code == 0
    assert doc["data"]["case"] == "DistinctEigen"
    assert doc["data"]["eigenvalues"] == ["1", "2"]


def test_azu_solve_and_basis(capsys):
    code, doc = run_json(capsys, "azu", "solve", "--a", '[["0","1"],["0","0"]]',
                         "--lambda", "1")
    assert doc["data"]["dimension"] == 4
    code, doc = run_json(capsys, "azu", "basis", "--a", '[["0","1"],["0","0"]]',
                         "--lambda", "1")
    assert doc["data"]["basis"][0] == [["1", "z"], ["0", "0"]]


def test_spec_commands(capsys, tmp_path):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"version": 1, "command": "spec cover",
                             "payload": {"rank": 2, "base_vars": ["z"],
                                         "phis": [[["0", "z"], ["1", "0"]]]}}))
    code, doc = run_json(capsys, "spec", "cover", str(f))
    assert doc["data"]["cover"] == "v^2 - z"
    assert doc["data"]["reduced"] is True

    f.write_text(json.dumps({"version": 1, "command": "spec family",
                             "payload": {"rank": 2, "phis": [[["0", "z"], ["1", "0"]]],
                                         "lambda": "1", "degree": 2}}))
    code, doc = run_json(capsys, "spec", "family", str(f))
    assert doc["data"]["injective"] is True

    f.write_text(json.dumps({"version": 1, "command": "spec admissible",
                             "payload": {"rank": 2,
                                         "phis": [[["0", "1"], ["0", "0"]],
                                                  [["0", "0"], ["1", "0"]]]}}))
    code, doc = run_json(capsys, "spec", "admissible", str(f))
    assert code == 2 and doc["data"]["admissible"] is False


def test_coc_coboundary_both_directions(capsys, tmp_path):
    beta = {"group": "mu", "n": 3, "indices": 3,
            "values": [{"ij": [0, 1], "v": 1}, {"ij": [1, 2], "v": 2}]}
    f = tmp_path / "b.json"
    f.write_text(json.dumps({"version": 1, "command": "coc coboundary",
                             "payload": {"beta": beta}}))
    code, doc = run_json(capsys, "coc", "coboundary", str(f))
    assert code == 0
    alpha = doc["data"]["coboundary"]

    f.write_text(json.dumps({"version": 1, "command": "coc coboundary",
                             "payload": {"alpha": alpha}}))
    code, doc = run_json(capsys, "coc", "coboundary", str(f))
    assert code == 0 and doc["data"]["is_coboundary"] is True


def test_coc_glue_with_endomorphisms(capsys, tmp_path):
    payload = {
        "rank": 1, "indices": 3,
        "gluing": [{"ij": [0, 1], "g": [["2"]]}, {"ij": [1, 0], "g": [["1/2"]]},
                   {"ij": [0, 2], "g": [["3"]]}, {"ij": [2, 0], "g": [["1/3"]]},
                   {"ij": [1, 2], "g": [["5"]]}, {"ij": [2, 1], "g": [["1/5"]]}],
        "twist": {"group": "qstar", "indices": 3, "values": [
            {"ijk": [0, 1, 2], "v": "10/3"}, {"ijk": [0, 2, 1], "v": "3/10"},
            {"ijk": [1, 2, 0], "v": "10/3"}, {"ijk": [2, 0, 1], "v": "10/3"},
            {"ijk": [1, 0, 2], "v": "3/10"}, {"ijk": [2, 1, 0], "v": "3/10"}]},
        "descend_endomorphisms": True,
    }
    f = tmp_path / "g.json"
    f.write_text(json.dumps({"version": 1, "command": "coc glue", "payload": payload}))
    code, doc = run_json(capsys, "coc", "glue", str(f))
    assert code == 0, doc
    assert doc["data"]["glued"] and doc["data"]["endomorphism_cocycle"]


def test_coc_match(capsys, tmp_path):
    a = {"group": "mu", "n": 2, "indices": 3, "values": []}
    b = {"group": "mu", "n": 2, "indices": 3, "values": [
        {"ijk": [0, 1, 2], "v": 1}, {"ijk": [1, 2, 0], "v": 1},
        {"ijk": [2, 0, 1], "v": 1}, {"ijk": [0, 2, 1], "v": 1},
        {"ijk": [1, 0, 2], "v": 1}, {"ijk": [2, 1, 0], "v": 1}]}
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"version": 1, "command": "coc match",
                             "payload": {"left": a, "right": b}}))
    code, doc = run_json(capsys, "coc", "match", str(f))
    assert code == 2 and doc["data"]["mismatch"] == [0, 1, 2]


def test_hilb_commands(capsys, tmp_path):
    f = tmp_path / "h.json"
    f.write_text(json.dumps({"version": 1, "command": "hilb sheaf",
                             "payload": {"summands": [2, -1], "torsion": 1,
                                         "g_rank": 1, "g_summands": [0]}}))
    code, doc = run_json(capsys, "hilb", "sheaf", str(f))
    assert doc["data"]["polynomial"] == "2*m + 4"
    f.write_text(json.dumps({"version": 1, "command": "hilb morphism",
                             "payload": {"summands": [[0, 1], [0, 1]]}}))
    code, doc = run_json(capsys, "hilb", "morphism", str(f))
    assert doc["data"]["polynomial"] == "4*m + 2"


def test_suite_demo_deterministic(capsys):
    code1, out1 = run(capsys, "demo", "cocycle-dd", "--seed", "3", "--count", "25")
    code2, out2 = run(capsys, "demo", "cocycle-dd", "--seed", "3", "--count", "25")
    assert code1 == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["data"]["passes"] == 25


def test_unknown_suite(capsys):
    code, doc = run_json(capsys, "demo", "weyl-assoc", "--seed", "1", "--count", "5")
    assert code == 0
    code2, out2 = run(capsys, "weyl", "nf")
    assert code2 == 1   # missing --expr


def test_out_flag(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out = run(capsys, "demo", "example-5-1-11", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text(encoding="utf-8") == GOLDEN.read_text(encoding="utf-8")


def test_text_mode(capsys, monkeypatch):
    monkeypatch.setenv("AZK_COLOR", "never")
    code, out = run(capsys, "weyl", "nf", "--expr", "D*x", "--lam", "1", "--text")
    assert code == 0
    assert out.splitlines()[0] == "status: ok"
    assert "normal_form: x*d + 1" in out


def test_error_codes_are_distinct():
    from azumaya import errors
    codes = [cls.code for cls in vars(errors).values()
             if isinstance(cls, type) and issubclass(cls, errors.AzumayaError)
             and cls not in (errors.AzumayaError, errors.InvalidInputError)]
    assert len(codes) == len(set(codes))
