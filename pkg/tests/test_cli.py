import json
import os


from operad_forge.cli import main

DATA = os.path.join(os.path.dirname(__file__), "data")


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def data(name):
    return os.path.join(DATA, name)


def test_validate_exit_codes(capsys, tmp_path):
    assert run(capsys, "validate", data("terminal.json"))[0] == 0
    code, out, _ = run(capsys, "validate", data("broken_category.json"))
    assert code == 1 and "ill-typed" in out
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, out, err = run(capsys, "validate", bad)
    assert code == 2 and "not valid JSON" in err and out == ""
    assert run(capsys, "validate", tmp_path / "missing.json")[0] == 2


def test_unknown_kind_and_bad_arguments(capsys, tmp_path):
    f = tmp_path / "x.json"
    f.write_text(json.dumps({"kind": "sheaf"}))
    assert run(capsys, "validate", f)[0] == 2
    assert run(capsys, "free")[0] == 2
    assert run(capsys, "nonsense")[0] == 2


def test_free_rows(capsys):
    code, out, _ = run(capsys, "free", data("binary.json"), "--arity", 4, "--weight", 3)
    assert code == 0
    assert "  2: 1\n  3: 2\n  4: 5\n" in out


def test_free_symmetric_and_basis(capsys):
    code, out, _ = run(capsys, "free", data("binary.json"), "--arity", 3, "--symmetric",
                       "--basis")
    assert code == 0
    assert "  2: 2\n  3: 12\n" in out
    assert "basis:" in out


def test_dims_of_empty_collection(capsys):
    code, out, _ = run(capsys, "dims", data("empty.json"))
    assert code == 0
    assert out == "arity:\ncomponents:\n"


def test_quotient_gives_ns_as(capsys):
    code, out, _ = run(capsys, "quotient", data("as_presentation.json"), "--json")
    doc = json.loads(out)
    assert code == 0 and doc["format"] == "operad-forge/1"
    assert doc["tables"]["quotient"] == [["(*,*;*)", "1/1"], ["(*,*,*;*)", "1/1"]]
    assert doc["tables"]["ideal"] == [["(*,*,*;*)", "1/1"]]


def test_hyperoperad_q_row(capsys):
    code, out, _ = run(capsys, "hyperoperad", "--arity", 3)
    assert code == 0
    q = out.split("Q:\n")[1].split("free weight 2:")[0]
    assert "  (2,2;3): 12\n" in q


def test_verify_markl(capsys):
    code, out, _ = run(capsys, "verify-markl", data("as3_operad.json"))
    assert code == 0 and "round trip: identity" in out
    code, out, _ = run(capsys, "verify-markl", data("as3_mutated.json"), "--json")
    doc = json.loads(out)
    assert code == 1
    rep = doc["reports"]["H-algebra"]
    assert not rep["ok"] and rep["violations"][0]["kind"] == "action"
    assert run(capsys, "verify-markl", "--example", "free-binary")[0] == 0
    assert run(capsys, "verify-markl", data("binary.json"))[0] == 2


def test_check_algebra(capsys):
    pres, fun = data("as_presentation.json"), data("dual_numbers.json")
    assert run(capsys, "check-algebra", pres, fun, data("dual_product.json"))[0] == 0
    code, out, _ = run(capsys, "check-algebra", pres, fun, data("bad_product.json"))
    assert code == 1 and "relation" in out


def test_dga_example(capsys):
    code, out, _ = run(capsys, "dga-example", "--json")
    doc = json.loads(out)
    assert code == 0
    assert dict(doc["tables"]["generators"])["(0,1;0)"] == "2/1"
    assert doc["reports"]["example"]["ok"] and not doc["reports"]["non-example"]["ok"]
    actions = dict(doc["tables"]["actions on mu"])
    assert actions["(0,1;1) slot 0 by (d 1)"] == "1/1 (mu1 0 1) + -1/1 (mu2 0 1)"
    assert run(capsys, "dga-example", "--degree-lo", 2, "--degree-hi", 1)[0] == 2


def test_thread_count_does_not_change_output(capsys, monkeypatch):
    outs = []
    for n in ("1", "4"):
        monkeypatch.setenv("OPERAD_FORGE_THREADS", n)
        outs.append(run(capsys, "hyperoperad", "--arity", 2, "--json")[1])
    assert outs[0] == outs[1]
    monkeypatch.setenv("OPERAD_FORGE_THREADS", "many")
    assert run(capsys, "dims", data("empty.json"))[0] == 2
