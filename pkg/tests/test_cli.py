from __future__ import annotations

import json

import pytest

from qcat.cli import run


def _capture(capsys):
    out = capsys.readouterr().out
    return json.loads(out)


def test_validate_fixture_exit_zero(capsys):
    assert run(["validate", "ising"]) == 0
    rep = _capture(capsys)
    assert rep["ok"] is True
    assert rep["pentagon"] < 1e-9


def test_usage_error_exit_one(capsys):
    assert run(["no-such-verb"]) == 1
    assert run(["check-qsystem", "ising"]) == 1
    assert run(["boundary", "ising"]) == 1


def test_parse_error_exit_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    assert run(["validate", str(bad)]) == 2
    assert run(["validate", str(tmp_path / "missing.json")]) == 2
    assert run(["emit-fixture", "nope", "--dir", str(tmp_path)]) == 2


def test_axiom_failure_exit_three(tmp_path, capsys):
    import numpy as np

    from qcat.category import build_category
    from qcat.fixtures import ising_category
    from qcat.frobenius import QSystem, ising_q, qsystem_as_json

    cat = build_category(ising_category())
    q = ising_q(cat)
    bad = QSystem(cat, q.theta, 2.0 * q.w, q.x)
    qp = tmp_path / "bad_q.json"
    qp.write_text(json.dumps(qsystem_as_json(bad)))
    assert run(["check-qsystem", "ising", str(qp)]) == 3
    capsys.readouterr()


def test_emit_and_check_fixture_files(tmp_path, capsys):
    assert run(["emit-fixture", "ising", "--dir", str(tmp_path)]) == 0
    capsys.readouterr()
    cat_path = str(tmp_path / "ising.json")
    q_path = str(tmp_path / "ising_q.json")
    assert run(["validate", cat_path]) == 0
    capsys.readouterr()
    assert run(["check-qsystem", cat_path, q_path]) == 0
    rep = _capture(capsys)
    assert rep["ok"] is True
    assert not rep["commutative"]


def test_emit_trivial_and_z2(tmp_path, capsys):
    for name in ("trivial", "z2"):
        assert run(["emit-fixture", name, "--dir", str(tmp_path)]) == 0
        capsys.readouterr()
        assert run(["validate", str(tmp_path / f"{name}.json")]) == 0
        capsys.readouterr()
    assert run(["modular", str(tmp_path / "z2.json")]) == 0
    rep = _capture(capsys)
    assert rep["is_modular"] is False


def test_modular_report(capsys):
    assert run(["modular", "ising"]) == 0
    rep = _capture(capsys)
    assert abs(rep["global_dim"] - 4.0) < 1e-9
    assert rep["is_modular"] is True


def test_zmatrix_report(capsys):
    assert run(["zmatrix", "ising", "ising_q"]) == 0
    rep = _capture(capsys)
    assert rep["z"] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_modules_and_bimodules(capsys):
    assert run(["modules", "ising", "ising_q"]) == 0
    assert _capture(capsys)["count"] == 3
    assert run(["bimodules", "ising", "trivial", "trivial"]) == 0
    assert _capture(capsys)["count"] == 3


def test_boundary_verb(capsys):
    assert run(["boundary", "ising", "--A", "trivial", "--B", "trivial"]) == 0
    rep = _capture(capsys)
    assert len(rep["bimodules"]) == 3
    assert rep["cross_check"] == "pass"


def test_full_centre_and_canonical(capsys):
    assert run(["full-centre", "ising", "ising_q"]) == 0
    rep = _capture(capsys)
    assert abs(rep["d"] - 2.0) < 1e-9
    assert rep["commutative"] is True
    capsys.readouterr()
    assert run(["canonical", "ising"]) == 0
    rep = _capture(capsys)
    assert abs(rep["d"] - 2.0) < 1e-9


def test_table_format(capsys):
    assert run(["validate", "ising", "--format", "table"]) == 0
    out = capsys.readouterr().out
    assert "pentagon" in out
    with pytest.raises(json.JSONDecodeError):
        json.loads(out)


def test_deterministic_output(capsys):
    assert run(["boundary", "ising", "--A", "trivial", "--B", "trivial", "--seed", "7"]) == 0
    first = capsys.readouterr().out
    assert run(["boundary", "ising", "--A", "trivial", "--B", "trivial", "--seed", "7"]) == 0
    second = capsys.readouterr().out
    assert first == second


def test_diff_verb(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    c = tmp_path / "c.json"
    a.write_text(json.dumps({"x": 1.0, "y": [1, 2]}))
    b.write_text(json.dumps({"x": 1.0 + 1e-12, "y": [1, 2]}))
    c.write_text(json.dumps({"x": 2.0, "y": [1, 2]}))
    assert run(["diff", str(a), str(b)]) == 0
    capsys.readouterr()
    assert run(["diff", str(a), str(c)]) == 4
    rep = _capture(capsys)
    assert rep["differences"]


def test_intermediate_verb(tmp_path, capsys):
    import json as _json

    from qcat.category import build_category
    from qcat.fixtures import ising_category
    from qcat.frobenius import ising_q
    from qcat.morphisms import identity

    cat = build_category(ising_category())
    q = ising_q(cat)
    p = identity(cat, q.theta)
    pp = tmp_path / "p.json"
    pp.write_text(_json.dumps(p.as_json()))
    assert run(["intermediate", "ising", "ising_q", str(pp)]) == 0
    rep = _capture(capsys)
    assert rep["axioms"]["ok"] is True


def test_decompose_and_centre_verbs(capsys):
    assert run(["decompose", "ising", "ising_q"]) == 0
    rep = _capture(capsys)
    assert len(rep["summands"]) == 1
    assert run(["centre", "ising", "ising_q", "--sign", "-"]) == 0
    rep = _capture(capsys)
    assert abs(rep["d"] - 1.0) < 1e-9
