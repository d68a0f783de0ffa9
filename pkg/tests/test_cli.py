import json

import pytest

from rar.cli import EXIT_ENV, EXIT_FAIL, EXIT_OK, main

from conftest import CORPUS, GOLDEN


def test_check_clean_corpus(capsys, corpus_dir):
    code = main(["check", str(corpus_dir / "arrayset.rar")])
    out = capsys.readouterr()
    assert code == EXIT_OK
    assert out.out == "" and out.err == ""


def test_check_negative_file_prints_rule_and_fails(capsys):
    code = main(["check", str(CORPUS / "neg" / "R002_recursion.rar")])
    out = capsys.readouterr().out
    assert code == EXIT_FAIL
    assert "R002" in out
    # Diagnostics follow <file>:<line>:<col>: <severity> <rule>: <message>
    first = out.splitlines()[0]
    assert first.count(":") >= 4
    assert "error" in first


def test_check_json_output(capsys):
    code = main(["check", "--json", str(CORPUS / "neg" / "R007_external_call.rar")])
    payload = json.loads(capsys.readouterr().out)
    assert code == EXIT_FAIL
    assert payload and payload[0]["rule"] == "R007"
    assert {"file", "line", "col", "severity", "message"} <= set(payload[0])


def test_check_multiple_files_aggregates(capsys, corpus_dir):
    code = main(
        [
            "check",
            str(corpus_dir / "arrayset.rar"),
            str(CORPUS / "neg" / "R001_ref_param.rar"),
        ]
    )
    assert code == EXIT_FAIL
    assert "R001" in capsys.readouterr().out


def test_check_missing_file_is_environment_error(capsys, tmp_path):
    code = main(["check", str(tmp_path / "nope.rar")])
    assert code == EXIT_ENV
    assert "cannot read" in capsys.readouterr().err


def test_transpile_matches_golden(tmp_path, corpus_dir):
    out = tmp_path / "arrayset.cpp"
    code = main(
        ["transpile", str(corpus_dir / "arrayset.rar"), "-o", str(out), "--dialect", "plain"]
    )
    assert code == EXIT_OK
    assert out.read_text() == (GOLDEN / "arrayset_plain.cpp").read_text()


def test_transpile_ac_dialect(tmp_path, corpus_dir):
    out = tmp_path / "arrayset.cpp"
    code = main(
        ["transpile", str(corpus_dir / "arrayset.rar"), "-o", str(out), "--dialect", "ac"]
    )
    assert code == EXIT_OK
    assert '#include "ac_int.h"' in out.read_text()


def test_transpile_vivado_dialect(tmp_path, corpus_dir):
    out = tmp_path / "arrayset.cpp"
    code = main(
        ["transpile", str(corpus_dir / "arrayset.rar"), "-o", str(out), "--dialect", "vivado"]
    )
    assert code == EXIT_OK
    assert out.read_text() == (GOLDEN / "arrayset_vivado.cpp").read_text()


def test_transpile_refuses_rule_violations_and_writes_nothing(tmp_path, capsys):
    out = tmp_path / "never.cpp"
    code = main(
        ["transpile", str(CORPUS / "neg" / "R002_recursion.rar"), "-o", str(out)]
    )
    assert code == EXIT_FAIL
    assert not out.exists()
    assert "R002" in capsys.readouterr().err


def test_transpile_missing_input_is_environment_error(tmp_path, capsys):
    code = main(["transpile", str(tmp_path / "nope.rar"), "-o", str(tmp_path / "o.cpp")])
    assert code == EXIT_ENV


def test_transpile_rejects_unknown_dialect(corpus_dir, tmp_path):
    with pytest.raises(SystemExit):
        main(
            [
                "transpile",
                str(corpus_dir / "arrayset.rar"),
                "-o",
                str(tmp_path / "o.cpp"),
                "--dialect",
                "verilog",
            ]
        )


def test_corpus_test_small_run(capsys):
    code = main(["corpus-test", "--capacity", "8", "--seed", "3", "--iters", "200"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "ok: randomized capacity=8" in out
    assert "ok: exhaustive capacity=4 depth=5 alphabet=5" in out


def test_difftest_without_compiler_is_environment_error(capsys, monkeypatch):
    monkeypatch.delenv("RAR_CC", raising=False)
    monkeypatch.setenv("PATH", "/nonexistent")
    code = main(["difftest", "--iters", "10", "--capacity", "4"])
    assert code == EXIT_ENV
    assert "no C++ compiler" in capsys.readouterr().err


def test_difftest_small_run(capsys, cxx):
    code = main(
        ["difftest", "--cc", cxx, "--seed", "2", "--iters", "300", "--capacity", "5"]
    )
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "traces identical" in out


def test_difftest_honors_rar_cc_env(capsys, monkeypatch, cxx):
    monkeypatch.setenv("RAR_CC", cxx)
    code = main(["difftest", "--seed", "4", "--iters", "50", "--capacity", "4"])
    assert code == EXIT_OK


def test_no_subcommand_exits_with_usage():
    with pytest.raises(SystemExit):
        main([])
