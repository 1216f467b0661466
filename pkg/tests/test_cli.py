import io
import json
import random

import pytest

from shopd.cli import main
from shopd.collection import EndOperad, PerturbedOperad, tabulate
from shopd.shcore import load_sh
from shopd.shmaps import tabulate_morphism
from shopd.transfer import random_retract, retract_to_json, transfer_hom


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run("--json", *argv)
    return code, json.loads(text)


@pytest.fixture(scope="module")
def data(tmp_path_factory):
    d = tmp_path_factory.mktemp("data")
    R = random_retract(random.Random(7), [0], pair_degrees=[0])
    EW, EV = EndOperad(R.W, 3), EndOperad(R.V, 3)

    def dump(name, doc):
        (d / name).write_text(json.dumps(doc))
        return str(d / name)

    a = EV.index((0,), 0)
    bad = PerturbedOperad(EV, {(1, 1, 1, a, a): {a: 2}})
    return {
        "retract": dump("retract.json", retract_to_json(R)),
        "end_w": dump("end_w.json", tabulate(EW).to_json()),
        "end_v": dump("end_v.json", tabulate(EV).to_json()),
        "phi": dump("phi.json", tabulate_morphism(transfer_hom(R, 3, 3)).to_json()),
        "bad": dump("bad.json", tabulate(bad).to_json()),
        "dir": d,
    }


def test_trees_enum():
    code, rep = run_json("trees", "enum", "--n", "3", "--k", "2", "--min-arity", "2",
                         "--labeled")
    assert code == 0 and rep["count"] == 18 and rep["roundTrip"]


def test_text_output_format():
    code, text = run("trees", "enum", "--nmax", "2", "--k", "2")
    assert code == 0
    lines = text.strip().splitlines()
    assert lines == sorted(lines) and all(": " in l for l in lines)


def test_json_flag_after_subcommand():
    code, text = run("trees", "enum", "--nmax", "2", "--json")
    assert code == 0 and json.loads(text)["ok"] is True


def test_psopd_selfdual():
    code, rep = run_json("psopd", "selfdual", "--legs", "5")
    assert code == 0
    assert rep["adoptedWordSign"] and rep["halfDimension"] and not rep["literalTreeSign"]


def test_psopd_relations_and_bar():
    code, rep = run_json("psopd", "relations", "--legs", "3", "--bound", "2")
    assert code == 0 and rep["generators"] == 6
    code, rep = run_json("psopd", "bar", "--arity", "4")
    assert code == 0 and rep["homology"]["2"] == {"-1": 1} and rep["onlyCogenerators"]
    assert run("psopd", "bar", "--generator", "1:0")[0] == 2
    assert run("psopd", "bar", "--generator", "x")[0] == 2


def test_sh_check_pass_and_fail(data):
    code, rep = run_json("sh", "check", data["end_v"], "--equivariance")
    assert code == 0 and rep["squareZero"] and rep["equivariant"]
    code, rep = run_json("sh", "check", data["bad"])
    assert code == 1
    assert rep["failures"] and rep["failures"][0]["tree"].startswith("(")


def test_sh_bar_and_cohomology(data, tmp_path):
    code, rep = run_json("sh", "bar", data["end_v"], "--arity", "2")
    assert code == 0
    out = tmp_path / "h.json"
    code, rep = run_json("sh", "cohomology", data["end_w"], "--output", str(out))
    assert code == 0 and rep["gradedOperad"]
    assert load_sh(str(out)).fiber(1).dim == 1
    code, rep = run_json("sh", "cohomology", data["bad"])
    assert code == 1 and not rep["squareZero"]


def test_morphism_commands(data, tmp_path):
    code, rep = run_json("morphism", "check", data["end_w"], data["end_v"], data["phi"])
    assert code == 0 and rep["morphism"]
    s = tmp_path / "sym.json"
    code, rep = run_json("morphism", "symmetrize", data["end_w"], data["end_v"], data["phi"],
                         "--caps", "2,2", "--output", str(s))
    assert code == 0 and rep["idempotent"] and rep["equivariant"]
    code, rep = run_json("morphism", "quasiinverse", data["end_w"], data["end_v"], data["phi"],
                         "--caps", "2,2")
    assert code == 0 and rep["homologyInverse"]


def test_morphism_compose(data, tmp_path):
    # phi: End_W -> End_V, composed with the identity table of End_V
    EV = load_sh(data["end_v"])
    ident = {"components": [{"tree": "(%s)" % ",".join(str(j) for j in range(1, n + 1)),
                             "entries": [[[a], a, "1"] for a in range(EV.fiber(n).dim)]}
                            for n in range(1, 4)]}
    p = tmp_path / "id.json"
    p.write_text(json.dumps(ident))
    code, rep = run_json("morphism", "compose", data["end_w"], data["end_v"], data["end_v"],
                         data["phi"], str(p), "--caps", "3,2")
    assert code == 0 and rep["morphism"]


def test_transfer_run(data):
    code, rep = run_json("transfer", "run", "--retract", data["retract"], "--caps", "3,2")
    assert code == 0 and rep["morphism"] and rep["quasiIso"]
    code, rep = run_json("transfer", "run", "--side", "--caps", "3,2")
    assert code == 0 and rep["sideConditions"] and rep["strictlyUnital"]


def test_transfer_ainf():
    code, rep = run_json("transfer", "ainf", "--example", "massey")
    assert code == 0 and rep["m"]["3"] == {"11": -1}


def test_transfer_remark_reports_literal_failure():
    code, rep = run_json("transfer", "remark-signs")
    assert code == 1
    assert rep["machinery"] and not rep["displayedExpansion"]
    odd = rep["counts"]["displayedOdd"]
    assert odd[0] == odd[1]


def test_littledisks():
    code, rep = run_json("littledisks", "check", "--n", "3", "--samples", "30")
    assert code == 0 and rep["homotopy"] and rep["associativityDeviation"] <= 1e-12


def test_determinism_and_seed_env(monkeypatch):
    a = run("transfer", "remark-signs", "--retracts", "2")
    b = run("transfer", "remark-signs", "--retracts", "2")
    assert a == b
    monkeypatch.setenv("SHOPD_SEED", "5")
    code, rep = run_json("littledisks", "check", "--samples", "10")
    assert rep["seed"] == 5
    monkeypatch.setenv("SHOPD_SEED", "five")
    assert run("littledisks", "check")[0] == 2


def test_bad_input_exit_2(data, tmp_path):
    assert run("sh", "check", str(tmp_path / "missing.json"))[0] == 2
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert run("sh", "check", str(junk))[0] == 2
    assert run("sh", "check", data["bad"], "--caps", "3")[0] == 2
    assert run("trees", "enum", "--n", "0")[0] == 2
    assert run("nonsense")[0] == 2
    bad_r = tmp_path / "r.json"
    doc = json.loads(open(data["retract"]).read())
    doc["h"] = []
    bad_r.write_text(json.dumps(doc))
    assert run("transfer", "run", "--retract", str(bad_r))[0] == 2
