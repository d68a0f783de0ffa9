"""Differential tests: the compiled emitted C++ against the reference."""

import subprocess
import time

import pytest

from rar.harness import (
    DifferentialError,
    compile_trace_binary,
    emit_corpus_for_capacity,
    format_op_script,
    format_trace,
    random_ops,
    run_differential,
    trace_run,
)

from conftest import CORPUS, SHIM

SEEDS = (1, 2, 3, 4, 5)
OPS_PER_SEED = 10000
CAPACITIES = (5, 256)


@pytest.mark.parametrize("capacity", CAPACITIES)
def test_traces_byte_identical_across_seeds(capacity, cxx, tmp_path):
    started = time.monotonic()
    emitted = emit_corpus_for_capacity(CORPUS, capacity)
    exe = compile_trace_binary(emitted, cxx, SHIM, tmp_path)
    for seed in SEEDS:
        ops = random_ops(seed, OPS_PER_SEED, capacity)
        reference = format_trace(trace_run(ops, capacity))
        proc = subprocess.run(
            [str(exe), str(capacity)],
            input=format_op_script(ops),
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        assert proc.stdout == reference, f"seed {seed} diverged"
    elapsed = time.monotonic() - started
    assert elapsed < 120.0, f"capacity {capacity} run took {elapsed:.1f}s"


def test_emitted_corpus_builds_warning_clean(cxx, tmp_path):
    # compile_trace_binary passes -Wall -Wextra -Werror; success is the check.
    emitted = emit_corpus_for_capacity(CORPUS, 7)
    exe = compile_trace_binary(emitted, cxx, SHIM, tmp_path)
    assert exe.exists()


def test_run_differential_end_to_end(cxx):
    report = run_differential(CORPUS, cxx, seed=3, n=2000, capacity=6)
    assert report.passed
    assert report.cases_run == 2000


def test_tampered_emission_is_detected(cxx):
    def drop_used_head_update(text: str) -> str:
        tampered = text.replace("aset.used_head = curr_index;", ";", 1)
        assert tampered != text
        return tampered

    report = run_differential(
        CORPUS, cxx, seed=1, n=500, capacity=5, mutate_emitted=drop_used_head_update
    )
    assert not report.passed
    assert "divergence at event" in report.failures[0].message


def test_capacity_mismatch_is_an_environment_failure(cxx, tmp_path):
    emitted = emit_corpus_for_capacity(CORPUS, 5)
    exe = compile_trace_binary(emitted, cxx, SHIM, tmp_path)
    proc = subprocess.run(
        [str(exe), "6"], input="add 1\n", capture_output=True, text=True
    )
    assert proc.returncode == 2


def test_malformed_script_line_reported_with_line_number(cxx, tmp_path):
    emitted = emit_corpus_for_capacity(CORPUS, 5)
    exe = compile_trace_binary(emitted, cxx, SHIM, tmp_path)
    proc = subprocess.run(
        [str(exe), "5"], input="add 1\nfrob 2\n", capture_output=True, text=True
    )
    assert proc.returncode == 1
    assert "line 2" in proc.stderr


def test_compile_failure_raises_differential_error(cxx, tmp_path):
    with pytest.raises(DifferentialError):
        compile_trace_binary("this is not C++", cxx, SHIM, tmp_path)
