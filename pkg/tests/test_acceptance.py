"""Acceptance suite.

Each test covers one acceptance criterion and prints exactly one
PASS/FAIL line (run with -s or look at captured output on failure).
"""

import shutil
import subprocess
import time

import pytest

from rar.arrayset import aset_add, aset_del, aset_init, aset_len, aset_len_free
from rar.checker import check_program
from rar.cli import EXIT_FAIL, EXIT_OK, main
from rar.emitter import Dialect, EmitOptions, emit_program
from rar.frontend import parse_file
from rar.harness import exhaustive_check, model_of, run_randomized

from conftest import CORPUS, GOLDEN


def _verdict(label: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"{status}: {label}{suffix}")
    assert ok, f"{label}{suffix}"


def test_acceptance_add_membership_randomized():
    report = run_randomized(capacity=256, seed=1, iters=11000)
    ok = report.passed and report.p1_checks >= 10000 and report.elapsed < 60.0
    _verdict(
        "add-membership property over >=10,000 randomized good states at capacity 256",
        ok,
        f"{report.p1_checks} checks, {len(report.failures)} failures, {report.elapsed:.1f}s",
    )


def test_acceptance_exhaustive_and_capacity8():
    started = time.monotonic()
    r1 = exhaustive_check(capacity=3, depth=6, alphabet_size=4)
    r2 = exhaustive_check(capacity=4, depth=5, alphabet_size=5)
    exhaustive_elapsed = time.monotonic() - started
    r3 = run_randomized(capacity=8, seed=2, iters=10000)
    ok = (
        r1.passed
        and r2.passed
        and r3.passed
        and exhaustive_elapsed < 300.0
    )
    _verdict(
        "exhaustive small-scope sweep plus randomized capacity-8 run, zero failures",
        ok,
        f"{r1.cases_run}+{r2.cases_run} transitions in {exhaustive_elapsed:.1f}s, "
        f"{r3.cases_run} randomized states",
    )


def test_acceptance_worked_example():
    s0 = aset_add(33, aset_add(22, aset_init(5)))
    after_del = aset_del(22, s0)
    ok = (
        s0.used_head == 1
        and s0.free_head == 2
        and aset_len(s0) == 2
        and aset_len_free(s0) == 3
        and model_of(s0) == {33, 22}
        and model_of(after_del) == {33}
        and aset_len_free(after_del) == aset_len_free(s0) + 1
    )
    _verdict("worked example reproduced with exact equality", ok)


def test_acceptance_checker_corpus(capsys):
    program, diags = parse_file(CORPUS / "arrayset.rar")
    clean = diags == [] and check_program(program) == []

    per_file_ok = True
    for i in range(1, 9):
        code = f"R00{i}"
        (path,) = sorted((CORPUS / "neg").glob(f"{code}_*.rar"))
        program, diags = parse_file(path)
        found = {d.rule_code for d in check_program(program)} if program else set()
        per_file_ok = per_file_ok and diags == [] and found == {code}

    exit_ok = main(["check", str(CORPUS / "arrayset.rar")]) == EXIT_OK
    exit_fail = (
        main(["check", str(CORPUS / "neg" / "R001_ref_param.rar")]) == EXIT_FAIL
    )
    capsys.readouterr()  # swallow CLI diagnostics; the verdict line follows

    ok = clean and per_file_ok and exit_ok and exit_fail
    _verdict(
        "checker corpus: positive file clean, 8 negative files exact, CLI exit codes",
        ok,
    )


def test_acceptance_emitter_golden_stability():
    program, _ = parse_file(CORPUS / "arrayset.rar")
    goldens = {
        Dialect.PLAIN_CXX: "arrayset_plain.cpp",
        Dialect.ALGORITHMIC_C: "arrayset_ac.cpp",
        Dialect.VIVADO_HLS: "arrayset_vivado.cpp",
    }
    ok = True
    for dialect, name in goldens.items():
        opts = EmitOptions(dialect=dialect)
        first = emit_program(program, opts)
        second = emit_program(program, opts)
        ok = ok and first == second and first == (GOLDEN / name).read_text()
    _verdict("emitter deterministic and byte-identical to goldens for all dialects", ok)


def test_acceptance_corpus_is_accepted_by_rustc(tmp_path):
    rustc = shutil.which("rustc") or (
        "/opt/cargo/bin/rustc" if shutil.which("/opt/cargo/bin/rustc") else None
    )
    if rustc is None:
        print("SKIP: Rust compiler not present")
        pytest.skip("rustc not available")
    proc = subprocess.run(
        [
            rustc,
            "--edition",
            "2021",
            "--crate-type",
            "lib",
            "--emit",
            "metadata",
            "-A",
            "dead_code",
            "--out-dir",
            str(tmp_path),
            str(CORPUS / "arrayset.rar"),
        ],
        capture_output=True,
        text=True,
    )
    _verdict(
        "corpus source accepted by the Rust compiler unmodified",
        proc.returncode == 0,
        proc.stderr.strip().splitlines()[0] if proc.returncode != 0 else "",
    )
