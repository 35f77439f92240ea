"""Command-line interface: exit codes, formats, trace output."""

from pathlib import Path

import pytest

from hostcore.cli import main

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_parallel_exit_0(capsys):
    code, out, _ = run(capsys, "check", str(PROGRAMS / "parallel.hc"), "--theory", "circuit")
    assert code == 0
    assert (
        "Proof(A0, B0) -> Proof(A1, B1) -> Proof(A0 (x) A1, B0 (x) B1)" in out
    )


def test_check_nonlinear_exit_1_then_0(capsys):
    code, out, _ = run(capsys, "check", str(PROGRAMS / "nonlinear.hc"))
    assert code == 1
    code2, out2, _ = run(
        capsys, "check", str(PROGRAMS / "nonlinear.hc"), "--cartesian-core"
    )
    assert code2 == 0


def test_eq_assoc_exit_0(capsys):
    code, out, _ = run(capsys, "eq", str(PROGRAMS / "assoc.hc"))
    assert code == 0
    assert out.count("equal") == 3


def test_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.hc"
    bad.write_text("core type")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2
    assert "error" in err


def test_eq_unknown_exit_3(tmp_path, capsys):
    f = tmp_path / "unknown.hc"
    f.write_text(
        "import circuit\n"
        "eq | a:Bit |- not (not a) = a : Bit\n"
    )
    code, out, _ = run(capsys, "eq", str(f))
    assert code == 3
    assert "unknown" in out


def test_eq_unequal_exit_1_with_model(tmp_path, capsys):
    f = tmp_path / "uneq.hc"
    f.write_text("import circuit\neq | a:Bit |- not a = a : Bit\n")
    code, out, _ = run(capsys, "eq", str(f), "--model", "finrel:2")
    assert code == 1
    assert "unequal" in out


def test_norm_trace_format(tmp_path, capsys):
    f = tmp_path / "norm.hc"
    f.write_text(
        "import circuit\n"
        "check | a:Bit |- let p (x) q = (not a) (x) 1 in and (p (x) q) : Bit\n"
    )
    code, out, _ = run(capsys, "norm", str(f), "--trace")
    assert code == 0
    assert "~>" in out
    assert "and (not a (x) 1)" in out


def test_norm_budget_exit_3(capsys):
    code, out, _ = run(
        capsys, "norm", str(PROGRAMS / "parallel.hc"), "--theory", "circuit",
        "--max-steps", "0",
    )
    assert code == 3


def test_lint_finrel(capsys):
    code, out, _ = run(capsys, "lint", "--model", "finrel:2")
    assert code == 0
    assert "pentagon" in out


def test_interp_tables(tmp_path, capsys):
    f = tmp_path / "interp.hc"
    f.write_text("import circuit\ncheck | a:Bit |- not a : Bit\n")
    code, out, _ = run(capsys, "interp", str(f), "--model", "finrel:2", "--format", "lines")
    assert code == 0
    assert "table\t()" in out


def test_syntaxgen_writes_loadable_file(tmp_path, capsys):
    out_path = tmp_path / "gen.hc"
    code, out, _ = run(
        capsys, "syntaxgen", "--model", "trivial", "-o", str(out_path)
    )
    assert code == 0
    from hostcore import theories

    th, _ = theories.load_theory_file(out_path)
    assert th.base_core_types


def test_roundtrip_command(capsys):
    code, out, _ = run(capsys, "roundtrip", "--model", "trivial")
    assert code == 0
    assert "composition agrees" in out


def test_missing_model_exit_2(capsys):
    code, _, err = run(capsys, "lint", "--model", "/nonexistent/model.json")
    assert code == 2


def test_lines_format_is_tab_separated(capsys):
    code, out, _ = run(
        capsys,
        "check",
        str(PROGRAMS / "parallel.hc"),
        "--format",
        "lines",
    )
    assert code == 0
    assert out.startswith("check\tok\t")


def test_theory_search_path_env(tmp_path, capsys, monkeypatch):
    custom = tmp_path / "mytheory.hc"
    custom.write_text("core type Q\n")
    monkeypatch.setenv("HC_THEORY_PATH", str(tmp_path))
    prog = tmp_path / "p.hc"
    prog.write_text("import mytheory\ncheck |- promote(core q:Q. q) : Proof(Q, Q)\n")
    code, out, _ = run(capsys, "check", str(prog))
    assert code == 0
