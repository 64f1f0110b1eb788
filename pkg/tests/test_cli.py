from __future__ import annotations

import json

import pytest

from weaklog.cli import main

SPLIT = "(p0 -> (p1 | p2)) -> ((p0 -> p1) | (p0 -> p2))"
SPLIT_INSTANCE = "((p1 | p2) -> (p1 | p2)) -> (((p1 | p2) -> p1) | ((p1 | p2) -> p2))"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_split_holds(capsys):
    code, out, _ = run(capsys, "entail", "--logic", "inqb", "--phi", SPLIT)
    assert code == 0 and "holds" in out


def test_split_instance_refuted_with_team(capsys):
    code, out, _ = run(capsys, "--json", "entail", "--logic", "inqb", "--phi", SPLIT_INSTANCE)
    assert code == 1
    rep = json.loads(out)
    assert rep["holds"] is False
    assert rep["witness"]["team"] == "0110"
    assert rep["witness"]["atoms"] == ["p1", "p2"]


def test_gamma_file(capsys, tmp_path):
    g = tmp_path / "gamma.txt"
    g.write_text("# premises\np0\np0 -> p1\n")
    assert run(capsys, "entail", "--logic", "inqi", "--gamma", str(g), "--phi", "p1")[0] == 0


def test_intuitionistic_countermodel(capsys):
    code, out, _ = run(capsys, "--json", "entail", "--logic", "inqi", "--phi", "~~p0 -> p0", "--frame-size", "2")
    assert code == 1
    w = json.loads(out)["witness"]
    assert w["points"] == 2 and w["order"] == [[0, 1]]


def test_medvedev_cap_is_a_resource_error(capsys):
    code, _, err = run(capsys, "gen-medvedev", "--s", "5")
    assert code == 2 and "capped" in err


def test_medvedev_then_core_entailment(capsys, tmp_path):
    out = tmp_path / "m2.json"
    assert run(capsys, "gen-medvedev", "--s", "2", "--out", str(out))[0] == 0
    d = json.loads(out.read_text())
    assert d["size"] == 5 and len(d["core"]) == 4 and len(d["elements"]) == 5
    assert run(capsys, "entail-core", "--algebras", str(tmp_path), "--concl", "p0 ~ ~~p0")[0] == 0
    sigma = tmp_path / "sigma.txt"
    sigma.write_text("p0 ~ p0\n")
    code, out, _ = run(capsys, "--json", "entail-core", "--algebras", str(out), "--sigma", str(sigma),
                       "--concl", "p0 ~ ~~p0")
    assert code == 1
    w = json.loads(out)["witness"]
    assert w["algebra"] == "m2.json" and "name" in w["assignment"]["p0"]


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "parse", "p0 -> (")
    assert code == 2 and "position" in err


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "entail-core", "--algebras", str(tmp_path / "nope.json"), "--concl", "p0 ~ p0")[0] == 2


def test_usage_error(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2


def test_nf(capsys):
    code, out, _ = run(capsys, "nf", "p0 | p1 -> p2", "--sig", "int")
    assert code == 0
    assert out.split("\n")[0] == "(p0 -> p2) & (p1 -> p2)"


def test_check_proof(capsys, tmp_path):
    proof = tmp_path / "d.txt"
    proof.write_text("p0 ; premise 1\np0 -> p1 ; premise 2\np1 ; mp 2 1\n")
    prem = tmp_path / "prem.txt"
    prem.write_text("p0\np0 -> p1\n")
    assert run(capsys, "check-proof", "--system", "inqi", "--premises", str(prem), "--proof", str(proof),
               "--conclusion", "p1")[0] == 0
    code, out, _ = run(capsys, "check-proof", "--system", "inqi", "--proof", str(proof))
    assert code == 1 and "line 1" in out


def test_check_alg(capsys, tmp_path):
    algs = tmp_path / "algs"
    algs.mkdir()
    for s in (1, 2):
        run(capsys, "gen-medvedev", "--s", str(s), "--out", str(algs / f"m{s}.json"))
    pair = tmp_path / "pair.json"
    pair.write_text(json.dumps({"tau": ["_phi ~ bot -> bot"], "delta": ["(_x -> _y) & (_y -> _x)"]}))
    code, out, _ = run(capsys, "check-alg", "--pair", str(pair), "--algebras", str(algs), "--logic", "inqb",
                       "--height", "2")
    assert code == 0, out
    pair.write_text(json.dumps({"tau": ["_phi ~ bot -> bot"], "delta": ["_x -> _y"]}))
    assert run(capsys, "check-alg", "--pair", str(pair), "--algebras", str(algs), "--logic", "inqb",
               "--height", "2")[0] == 1


def test_reduce(capsys, tmp_path):
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"sig": ["and", "or", "imp", "bot"], "size": 2,
                             "tables": {"and": [[0, 0], [0, 0]], "or": [[0, 0], [0, 0]],
                                        "imp": [[0, 0], [0, 0]], "bot": 0},
                             "truth": [0, 1], "core": [0, 1]}))
    out = tmp_path / "r.json"
    code, text, _ = run(capsys, "--json", "reduce", "--matrix", str(m), "--out", str(out))
    assert code == 0
    assert json.loads(text)["reduced_size"] == 1
    assert json.loads(out.read_text())["size"] == 1


@pytest.mark.parametrize("flag,golden", [("--weak", "horn_weak.p"), ("--standard", "horn_standard.p")])
def test_export_horn(capsys, tmp_path, flag, golden):
    from importlib import resources

    data = resources.files("weaklog.data")
    out = tmp_path / "out.p"
    assert run(capsys, "export-horn", "--logic-pairs", str(data.joinpath("horn_pairs.txt")), flag,
               "--out", str(out))[0] == 0
    assert out.read_bytes() == data.joinpath(golden).read_bytes()


def test_json_flag_after_command(capsys):
    code, out, _ = run(capsys, "parse", "p0 & p1", "--json")
    assert code == 0 and json.loads(out)["size"] == 3


def test_suite_subset(capsys):
    code, out, _ = run(capsys, "suite", "--only", "1,2")
    assert code == 0
    assert out.splitlines()[0].startswith("[PASS] criterion  1")
    assert run(capsys, "suite", "--only", "11")[0] == 2
