import json

import numpy as np
import pytest

from drazin_kit import cli
from drazin_kit import matrix_io as mio
from drazin_kit.generators import FAMILIES
from drazin_kit.instances import BlockInstance, PseudoBlockInstance


@pytest.fixture
def write(tmp_path):
    def _write(name, obj):
        path = tmp_path / name
        if isinstance(obj, (PseudoBlockInstance, BlockInstance)):
            mio.write_instance(path, obj)
        else:
            mio.write_matrix(path, np.asarray(obj, dtype=float))
        return str(path)
    return _write


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def json_matrix(doc):
    return mio.matrix_from_dict(doc)


def test_drazin_nilpotent(capsys, write):
    code, out, _ = run(capsys, "drazin", write("n.json", [[0, 1], [0, 0]]), "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["index"] == 2
    assert not json_matrix(doc["d"]).any()


def test_drazin_identity_table(capsys, write):
    code, out, _ = run(capsys, "drazin", write("i.json", np.eye(2)))
    assert code == 0
    assert out.startswith("index 0\n")
    assert "drazin inverse:" in out


def test_drazin_non_square(capsys, write):
    code, _, err = run(capsys, "drazin", write("r.json", [[1, 2, 3]]))
    assert code == 1
    assert "square" in err


def test_drazin_bad_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"rows": 1}')
    code, _, err = run(capsys, "drazin", str(path))
    assert code == 1 and "missing key" in err
    code, _, _ = run(capsys, "drazin", str(tmp_path / "missing.json"))
    assert code == 1


def test_check_examples(capsys, write):
    z, i2 = np.zeros((2, 2)), np.eye(2)
    code, out, _ = run(capsys, "check", write("z.json", PseudoBlockInstance(z, z, z, z)),
                       "--set", "SpSr")
    assert code == 0 and "pass" in out
    code, out, _ = run(capsys, "check", write("i.json", PseudoBlockInstance(i2, i2, z, z)),
                       "--set", "PseudoBlock", "--json")
    assert code == 3 and json.loads(out)["verdict"] == "fail"


def test_check_unknown_set(capsys, write):
    z = np.zeros((1, 1))
    code, _, err = run(capsys, "check", write("z.json", PseudoBlockInstance(z, z, z, z)),
                       "--set", "Bogus")
    assert code == 1 and "SpSr" in err


def test_formula_thm37(capsys, write):
    inst = PseudoBlockInstance(np.diag([2.0, 0.0]), np.diag([0.0, 3.0]),
                               [[0.0, 5.0], [0.0, 0.0]], np.zeros((2, 2)))
    code, out, _ = run(capsys, "formula", write("f.json", inst), "--formula", "thm37", "--json")
    assert code == 0
    np.testing.assert_allclose(json_matrix(json.loads(out)["result"]),
                               [[0.5, -5 / 6], [0, 1 / 3]], atol=1e-14)
    code, out, _ = run(capsys, "formula", write("f.json", inst), "--formula", "thm37", "--trace")
    assert code == 0 and "bounds" in out and "-0.833333" in out


def test_formula_miao_and_gate(capsys, write):
    ones = BlockInstance([[1.0]], [[1.0]], [[1.0]], [[1.0]])
    code, out, _ = run(capsys, "formula", write("m.json", ones), "--formula", "miao", "--json")
    assert code == 0
    np.testing.assert_allclose(json_matrix(json.loads(out)["result"]), np.full((2, 2), 0.25))
    code, out, _ = run(capsys, "formula", write("m.json", ones), "--formula", "cor44",
                       "--trace", "--json")
    assert code == 0 and json.loads(out)["trace"]["formula"] == "Cor44"
    # BC = 1 != 0
    code, _, err = run(capsys, "formula", write("m.json", ones), "--formula", "cor47")
    assert code == 3 and "Cor47" in err


def test_formula_kind_mismatch(capsys, write):
    ones = BlockInstance([[1.0]], [[1.0]], [[1.0]], [[1.0]])
    code, _, err = run(capsys, "formula", write("m.json", ones), "--formula", "thm37")
    assert code == 1 and "pseudo_block" in err


@pytest.mark.parametrize("family", ["SpSr", "Miao"])
def test_verify_passes(capsys, family):
    code, out, _ = run(capsys, "verify", "--family", family, "--count", "50", "--seed", "7",
                       "--json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] == doc["count"] == 50


def test_verify_vacuous_and_deterministic(capsys):
    code, out, _ = run(capsys, "verify", "--family", "Cor47", "--count", "0")
    assert code == 0 and "0/0" in out
    first = run(capsys, "verify", "--family", "Cor44", "--count", "10", "--json")
    second = run(capsys, "verify", "--family", "Cor44", "--count", "10", "--json")
    assert first == second


def test_verify_mismatch_exit(capsys):
    # BC = 0, BD = 0 instances rarely meet the BZ = 0, ZC = 0 hypotheses
    code, out, _ = run(capsys, "verify", "--family", "Cor47", "--count", "30",
                       "--formula", "cor42")
    assert code == 4
    assert "FAIL seed=" in out


def test_generate_is_byte_identical(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert run(capsys, "generate", "--family", "Miao", "--seed", "1", "-o", str(p))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    code, out, _ = run(capsys, "generate", "--family", "Miao", "--seed", "1")
    assert code == 0 and out == paths[0].read_text()


@pytest.mark.parametrize("family", FAMILIES)
def test_generate_then_check(capsys, tmp_path, family):
    path = str(tmp_path / "inst.json")
    assert run(capsys, "generate", "--family", family, "--seed", "1", "-o", path)[0] == 0
    assert run(capsys, "check", path, "--set", family)[0] == 0


def test_generate_errors(capsys, tmp_path):
    assert run(capsys, "generate", "--family", "Nope")[0] == 1
    assert run(capsys, "generate", "--family", "Miao", "--dim", "m")[0] == 1
    code, _, _ = run(capsys, "generate", "--family", "Miao", "-o",
                     str(tmp_path / "missing" / "x.json"))
    assert code == 1


def test_tolerance_sources(capsys, write, monkeypatch):
    assert cli.resolve_tol(None, {}).eq_rtol == 1e-9
    assert cli.resolve_tol(None, {cli.ENV_TOL: "1e-6"}).eq_rtol == 1e-6
    assert cli.resolve_tol(1e-3, {cli.ENV_TOL: "1e-6"}).eq_rtol == 1e-3
    with pytest.raises(cli.UsageError):
        cli.resolve_tol(None, {cli.ENV_TOL: "tight"})
    monkeypatch.setenv(cli.ENV_TOL, "tight")
    assert run(capsys, "drazin", write("i.json", np.eye(1)))[0] == 1


def test_loose_tolerance_changes_verdict(capsys, write):
    inst = PseudoBlockInstance([[1e-4]], [[1e-4]], [[0.0]], [[0.0]])
    path = write("p.json", inst)
    assert run(capsys, "check", path, "--set", "PseudoBlock")[0] == 3
    assert run(capsys, "check", path, "--set", "PseudoBlock", "--tol", "1e-3")[0] == 0


def test_usage_errors_exit_one(capsys):
    assert cli.main([]) == 1
    assert cli.main(["formula", "x.json", "--formula", "nope"]) == 1
    assert cli.main(["--help"]) == 0
    capsys.readouterr()
