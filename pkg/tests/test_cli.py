import json

import pytest

from cwtool.cli import run


def call(capsys, *argv):
    rc = run(list(argv))
    out = capsys.readouterr()
    return rc, (json.loads(out.out) if out.out.strip() else None), out.err


def test_group_build(capsys):
    rc, doc, _ = call(capsys, "group", "build", "Z4-rho-a")
    assert rc == 0 and doc["order"] == 1536 and doc["conductor"] == 8


def test_group_center(capsys):
    rc, doc, _ = call(capsys, "group", "center", "F4-even")
    assert rc == 0 and doc["center"] == 4


def test_molien_rationalize(capsys):
    rc, doc, _ = call(capsys, "group", "molien", "F4-even", "--degree", "64", "--rationalize", "4,8,12,20")
    num = [int(x) for x in doc["closed_form"]["num"]]
    assert rc == 0
    assert {i: c for i, c in enumerate(num) if c} == {0: 1, 40: 1}
    assert doc["coefficients"][:9] == ["1", "0", "0", "0", "1", "0", "0", "0", "2"]


def test_check_type(capsys):
    rc, doc, _ = call(capsys, "code", "check-type", "--code", "Q4", "--formring", "F4-even")
    assert rc == 0 and doc["type"] is True
    rc, doc, _ = call(capsys, "code", "check-type", "--code", "d8'", "--formring", "Z4-rho-b")
    assert rc == 1 and doc["type"] is False and doc["self_dual"] is True


def test_cwe_and_invariance(capsys):
    rc, doc, _ = call(capsys, "code", "cwe", "--code", "e8-hamming")
    assert rc == 0 and doc["size"] == 16
    rc, doc, _ = call(capsys, "invariance", "check", "--code", "Q4", "--mode", "sampled", "--random", "5")
    assert rc == 0 and doc["invariant"] and all(doc["generators"])


def test_symmetrize(capsys):
    rc, doc, _ = call(capsys, "group", "symmetrize", "F4u", "--orbits", "units")
    assert rc == 0 and (doc["degree"], doc["order"]) == (3, 8)
    rc, doc, _ = call(capsys, "group", "symmetrize", "Z4-rho-a", "--orbits", "[[0, 1], [2, 3]]")
    assert rc == 1 and doc["compatible"] is False


def test_formring_validate_and_hypco(capsys):
    rc, doc, _ = call(capsys, "formring", "validate", "F4u")
    assert rc == 0 and doc["phi_order"] == 2 and doc["valid"]
    rc, doc, _ = call(capsys, "hypco", "analyze", "binary-II", "--words", "10")
    assert rc == 0 and doc["consistent"] and doc["U_order"] == 24


def test_preset_export_roundtrip(capsys, tmp_path):
    rc, doc, _ = call(capsys, "preset", "export", "Z4-rho-b")
    assert rc == 0
    path = tmp_path / "rho.json"
    path.write_text(json.dumps(doc))
    rc, doc, _ = call(capsys, "formring", "validate", str(path))
    assert rc == 0 and doc["phi_order"] == 16
    rc, doc, _ = call(capsys, "preset", "export", "Q4")
    assert doc["rows"][1] == ["0", "1", "w", "w^2"]
    rc, doc, _ = call(capsys, "preset", "list")
    assert "d16" in doc["codes"]


@pytest.mark.parametrize("argv", [["group", "build", "nope"], ["bogus"], ["group", "molien", "F4u"],
                                  ["group", "molien", "F4u", "--degree", "8", "--rationalize", "a,b"]])
def test_usage_errors(capsys, argv):
    rc, _, _ = call(capsys, *argv)
    assert rc == 2


def test_cap_exceeded_is_check_failure(capsys):
    rc, doc, _ = call(capsys, "--group-cap", "10", "group", "build", "binary-II")
    assert rc == 1 and "error" in doc


def test_output_deterministic(capsys, tmp_path):
    argv = ["--seed", "7", "invariance", "check", "--code", "d8", "--mode", "sampled", "--random", "4"]
    texts = []
    for i in range(2):
        out = tmp_path / f"o{i}.json"
        assert run(["--output", str(out)] + argv) == 0
        texts.append(out.read_bytes())
    assert texts[0] == texts[1]
