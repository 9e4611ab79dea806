"""Command-line interface: exit codes, determinism, formats."""

import json

import pytest

from lie2check.cli import main
from lie2check.examples import EXAMPLES

SOUND = sorted(n for n in EXAMPLES if not n.startswith("broken_"))
BROKEN = sorted(n for n in EXAMPLES if n.startswith("broken_"))

DIRAC_EXAMPLES = {"so3_e3_dirac", "broken_so3_e12_dirac"}


def _emit(tmp_path, name):
    path = tmp_path / f"{name}.json"
    assert main(["example", name, "--out", str(path)]) == 0
    return path


def test_every_sound_example_checks_clean(tmp_path):
    for name in SOUND:
        path = _emit(tmp_path, name)
        if name in DIRAC_EXAMPLES:
            continue
        assert main(["check", str(path), "--out",
                     str(tmp_path / "r.txt")]) == 0, name


def test_every_broken_example_fails_with_advertised_labels(tmp_path):
    for name in BROKEN:
        path = _emit(tmp_path, name)
        expect = json.loads(path.read_text())["expect_fail"]
        out = tmp_path / "rep.json"
        if name in DIRAC_EXAMPLES:
            struct = _emit(tmp_path, "so3_lie2")
            code = main(["check", "--mode", "dirac-vb", str(struct),
                         str(path), "--format", "json", "--out", str(out)])
        else:
            code = main(["check", str(path), "--format", "json",
                         "--out", str(out)])
        assert code == 1, name
        report = json.loads(out.read_text())
        failing = {c["label"] for c in report["checks"] if not c["passed"]}
        assert set(expect) <= failing, (name, expect, sorted(failing))


def test_unknown_example_lists_names(capsys):
    assert main(["example", "definitely_not_a_name"]) == 2
    err = capsys.readouterr().err
    assert "so3_string" in err


def test_schema_error_is_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"format": 1, "kind": "nope"}')
    assert main(["check", str(bad)]) == 2
    bad.write_text("not json")
    assert main(["check", str(bad)]) == 2
    assert main(["check", str(tmp_path / "missing.json")]) == 2


def test_json_reports_are_byte_identical(tmp_path):
    path = _emit(tmp_path, "so3_symplectic_pair")
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    for out in (r1, r2):
        assert main(["check", str(path), "--format", "json", "--seed", "7",
                     "--out", str(out)]) == 0
    assert r1.read_bytes() == r2.read_bytes()
    report = json.loads(r1.read_text())
    assert report["seed"] == 7
    assert report["format"] == 1
    assert report["tool_version"]
    assert len(report["input_digest"]) == 64
    assert all(set(c) == {"label", "ref", "passed", "witness", "residual"}
               for c in report["checks"])


def test_example_output_is_deterministic(tmp_path):
    p1 = tmp_path / "a.json"
    p2 = tmp_path / "b.json"
    assert main(["example", "so3_string", "--out", str(p1)]) == 0
    assert main(["example", "so3_string", "--out", str(p2)]) == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_witness_printed_for_bad_jacobi(tmp_path, capsys):
    path = _emit(tmp_path, "broken_so3_bad_jacobi")
    assert main(["check", str(path)]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out
    assert "(q1, q2" in out


def test_format_env_default(tmp_path, monkeypatch):
    path = _emit(tmp_path, "so3_quadratic")
    out = tmp_path / "r.out"
    monkeypatch.setenv("LIE2CHECK_FORMAT", "json")
    assert main(["check", str(path), "--out", str(out)]) == 0
    json.loads(out.read_text())
    monkeypatch.setenv("LIE2CHECK_FORMAT", "bogus")
    assert main(["check", str(path), "--out", str(out)]) == 0
    with pytest.raises(json.JSONDecodeError):
        json.loads(out.read_text())


def test_construct_core_courant_equals_quadratic(tmp_path):
    pair = _emit(tmp_path, "so3_symplectic_pair")
    quad = _emit(tmp_path, "so3_quadratic")
    out = tmp_path / "cc.json"
    assert main(["construct", "core-courant", str(pair),
                 "--out", str(out)]) == 0
    got = json.loads(out.read_text())
    want = json.loads(quad.read_text())
    want.pop("name")
    assert got == want


def test_construct_change_splitting_zero_phi_is_byte_identical(tmp_path):
    split = _emit(tmp_path, "so3_string")
    dorf = tmp_path / "dorf.json"
    assert main(["construct", "dorfman-from-split", str(split),
                 "--out", str(dorf)]) == 0
    out = tmp_path / "shift.json"
    assert main(["construct", "change-splitting", str(dorf), "--phi", "zero",
                 "--out", str(out)]) == 0
    assert out.read_bytes() == dorf.read_bytes()


def test_construct_bicrossproduct_trivial_core_has_zero_l3(tmp_path):
    pair = _emit(tmp_path, "axb_matched")
    out = tmp_path / "bx.json"
    assert main(["construct", "bicrossproduct", str(pair),
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["kind"] == "splitlie2"
    assert doc["l3"] == []
    assert main(["check", str(out)]) == 0


def test_construct_outputs_pass_their_checkers(tmp_path):
    split = _emit(tmp_path, "so3_string")
    pair = _emit(tmp_path, "so3_poisson_pair")
    dirac = _emit(tmp_path, "so3_e3_dirac")
    steps = [
        (["construct", "dorfman-from-split", str(split)], "d.json", []),
        (["construct", "manin-pair", str(pair), str(dirac)], "m.json", []),
        (["construct", "induced-la", str(pair), str(dirac)], "i.json", []),
        (["construct", "adjoint", str(_emit(tmp_path, "so3_quadratic"))],
         "a.json", []),
    ]
    for argv, fname, extra in steps:
        out = tmp_path / fname
        assert main(argv + ["--out", str(out)]) == 0, argv
        assert main(["check", str(out)] + extra) == 0, argv


def test_construct_precondition_failure_is_exit_1(tmp_path, capsys):
    split = _emit(tmp_path, "so3_string")
    assert main(["construct", "decompose", str(split), "--rank-a", "2"]) == 1
    assert "precondition failed" in capsys.readouterr().err


def test_mode_mismatch_is_exit_2(tmp_path):
    quad = _emit(tmp_path, "so3_quadratic")
    assert main(["check", "--mode", "la-pair", str(quad)]) == 2
    dirac = _emit(tmp_path, "so3_e3_dirac")
    assert main(["check", str(dirac)]) == 2
