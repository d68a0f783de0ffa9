"""Verification harness for the array-backed set.

Provides the set-model abstraction, the executable state predicates, the
randomized and exhaustive property drivers, deterministic trace generation,
and the differential runner against the compiled emitted C++.
"""

from __future__ import annotations

import dataclasses
import shlex
import shutil
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator, Optional

from .arrayset import (
    Arrayset,
    aset_add,
    aset_del,
    aset_init,
    aset_is_element,
    aset_len,
    aset_len_free,
)
from .ast_nodes import ConstDef, Program
from .checker import check_program
from .emitter import Dialect, EmitOptions, emit_program
from .frontend import parse_file

MASK64 = (1 << 64) - 1

OP_TAGS = ("add", "del", "is")


@dataclass(frozen=True)
class OpRequest:
    tag: str  # "add" | "del" | "is"
    val: int

    def __post_init__(self) -> None:
        if self.tag not in OP_TAGS:
            raise ValueError(f"unknown op tag {self.tag!r}")


@dataclass(frozen=True)
class TraceEvent:
    seq: int
    op: OpRequest
    ret: Optional[bool]  # IsElement result; None for mutators
    length: int
    len_free: int
    digest: int

    def format_line(self) -> str:
        ret = "-" if self.ret is None else ("true" if self.ret else "false")
        return (
            f"{self.seq} {self.op.tag} {self.op.val} {ret} "
            f"{self.length} {self.len_free} {self.digest:016x}"
        )


@dataclass(frozen=True)
class CheckFailure:
    ops: tuple[OpRequest, ...]
    message: str


@dataclass
class CheckReport:
    cases_run: int = 0
    failures: list[CheckFailure] = field(default_factory=list)
    elapsed: float = 0.0
    p1_checks: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures


class AbstractionError(Exception):
    """The used chain contains a cycle; no set abstraction exists."""


# ---------------------------------------------------------------------------
# Abstraction and predicates


def used_chain(aset: Arrayset) -> list[int]:
    """Indices on the used list, head to terminator; raises on cycles."""
    return _chain(aset.used_head, aset)


def free_chain(aset: Arrayset) -> list[int]:
    return _chain(aset.free_head, aset)


def _chain(head: int, aset: Arrayset) -> list[int]:
    arr_sz = aset.capacity
    seen: set[int] = set()
    out: list[int] = []
    curr = head
    while curr < arr_sz:
        if curr in seen:
            raise AbstractionError(f"cycle through index {curr}")
        seen.add(curr)
        out.append(curr)
        curr = aset.anext[curr]
    return out


def model_of(aset: Arrayset) -> set[int]:
    """The mathematical set this state represents: used-chain values."""
    return {aset.avals[i] for i in used_chain(aset)}


def arraysetp(aset: Arrayset) -> bool:
    """Shape wellformedness: parallel arrays, all heads and links in range."""
    arr_sz = aset.capacity
    if len(aset.avals) != arr_sz:
        return False
    if not 0 <= aset.free_head <= arr_sz:
        return False
    if not 0 <= aset.used_head <= arr_sz:
        return False
    return all(0 <= nxt <= arr_sz for nxt in aset.anext)


def free_head_used_head_relation(aset: Arrayset) -> bool:
    return aset.free_head != aset.used_head


def no_dups(val: int, aset: Arrayset) -> bool:
    """val occurs at most once among used-chain values."""
    count = 0
    for i in used_chain(aset):
        if aset.avals[i] == val:
            count += 1
    return count <= 1


def all_distinct(aset: Arrayset) -> bool:
    """Stronger, global variant of no_dups: every used value occurs once."""
    values = [aset.avals[i] for i in used_chain(aset)]
    return len(values) == len(set(values))


def good_statep(val: int, aset: Arrayset) -> bool:
    """Wellformed, heads distinct, no duplicates of val, lengths sum to capacity."""
    if not arraysetp(aset):
        return False
    if not free_head_used_head_relation(aset):
        return False
    try:
        if not no_dups(val, aset):
            return False
    except AbstractionError:
        return False
    return aset_len(aset) + aset_len_free(aset) == aset.capacity


def chains_partition(aset: Arrayset) -> bool:
    """Both chains acyclic and terminator-ended, disjoint, covering every slot."""
    try:
        used = used_chain(aset)
        free = free_chain(aset)
    except AbstractionError:
        return False
    slots = used + free
    return len(slots) == aset.capacity and len(set(slots)) == aset.capacity


# ---------------------------------------------------------------------------
# Deterministic pseudo-random op streams (SplitMix64)


def splitmix64(seed: int) -> Iterator[int]:
    """The SplitMix64 stream; fixed here so other implementations of this
    harness can reproduce op sequences bit-exactly."""
    x = seed & MASK64
    while True:
        x = (x + 0x9E3779B97F4A7C15) & MASK64
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        yield z ^ (z >> 31)


def random_ops(
    seed: int,
    n: int,
    capacity: int,
    value_range: Optional[tuple[int, int]] = None,
) -> list[OpRequest]:
    """Deterministic op sequence. The default value alphabet [0, capacity+2]
    is deliberately tight so fullness, collisions, and absent deletes all
    occur."""
    if n < 0:
        raise ValueError("n must be non-negative")
    lo, hi = value_range if value_range is not None else (0, capacity + 2)
    width = hi - lo + 1
    stream = splitmix64(seed)
    ops: list[OpRequest] = []
    for _ in range(n):
        tag = OP_TAGS[next(stream) % 3]
        val = lo + next(stream) % width
        ops.append(OpRequest(tag, val))
    return ops


# ---------------------------------------------------------------------------
# Traces


FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


def _fnv1a64(words: list[int]) -> int:
    h = FNV_OFFSET
    for w in words:
        for b in (w & MASK64).to_bytes(8, "little"):
            h = ((h ^ b) * FNV_PRIME) & MASK64
    return h


def state_digest(aset: Arrayset) -> int:
    """64-bit digest of the observable state: used-chain values in order,
    then the free-chain length. Free slots' avals are deliberately excluded."""
    words = [aset.avals[i] for i in used_chain(aset)]
    words.append(aset_len_free(aset))
    return _fnv1a64(words)


def trace_run(ops: list[OpRequest], capacity: int) -> list[TraceEvent]:
    """Apply ops to a fresh set, recording one event per op."""
    aset = aset_init(capacity)
    events: list[TraceEvent] = []
    for seq, op in enumerate(ops, start=1):
        ret: Optional[bool] = None
        if op.tag == "add":
            aset = aset_add(op.val, aset)
        elif op.tag == "del":
            aset = aset_del(op.val, aset)
        else:
            ret = aset_is_element(op.val, aset)
        events.append(
            TraceEvent(seq, op, ret, aset_len(aset), aset_len_free(aset), state_digest(aset))
        )
    return events


def format_trace(events: list[TraceEvent]) -> str:
    return "".join(e.format_line() + "\n" for e in events)


class ScriptError(Exception):
    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def format_op_script(ops: list[OpRequest]) -> str:
    return "".join(f"{op.tag} {op.val}\n" for op in ops)


def parse_op_script(text: str) -> list[OpRequest]:
    """One op per line: `add <v>` | `del <v>` | `is <v>`."""
    ops: list[OpRequest] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2 or parts[0] not in OP_TAGS:
            raise ScriptError(f"malformed op {line!r}", line_no)
        try:
            val = int(parts[1])
        except ValueError:
            raise ScriptError(f"malformed value {parts[1]!r}", line_no) from None
        ops.append(OpRequest(parts[0], val))
    return ops


# ---------------------------------------------------------------------------
# Property checking


AddFn = Callable[[int, Arrayset], Arrayset]
DelFn = Callable[[int, Arrayset], Arrayset]
IsFn = Callable[[int, Arrayset], bool]


def check_transition(
    aset: Arrayset,
    op: OpRequest,
    add_fn: AddFn = aset_add,
    del_fn: DelFn = aset_del,
    is_fn: IsFn = aset_is_element,
) -> tuple[Arrayset, list[str]]:
    """Apply one op and check every property that mentions the transition.

    Returns the successor state and the list of property violations.
    """
    capacity = aset.capacity
    errors: list[str] = []
    v = op.val

    try:
        before = model_of(aset)
    except AbstractionError as e:
        return aset, [f"pre-state abstraction failed: {e}"]

    pre_good = good_statep(v, aset)
    pre_len = aset_len(aset)

    if op.tag == "add":
        after_state = add_fn(v, aset)
        expected = before | {v} if pre_len < capacity else before
        if pre_good and pre_len < capacity and not is_fn(v, after_state):
            errors.append(f"P1: {v} not an element after add")
        if v in before and after_state != aset:
            errors.append(f"P4: add of present value {v} changed the state")
        if v not in before and pre_len == capacity and after_state != aset:
            errors.append(f"P2: add to a full set changed the state")
    elif op.tag == "del":
        after_state = del_fn(v, aset)
        expected = before - {v}
        if v not in before and after_state != aset:
            errors.append(f"P4: del of absent value {v} changed the state")
    else:
        after_state = aset
        expected = before
        got = is_fn(v, aset)
        if got != (v in before):
            errors.append(f"membership query for {v} returned {got}, model says {v in before}")

    try:
        after = model_of(after_state)
    except AbstractionError as e:
        errors.append(f"post-state abstraction failed: {e}")
        return after_state, errors

    if after != expected:
        errors.append(f"P2/P3: model is {sorted(after)}, expected {sorted(expected)}")
    if aset_len(after_state) + aset_len_free(after_state) != capacity:
        errors.append("P5: used and free lengths do not sum to capacity")
    if not chains_partition(after_state):
        errors.append("P6: used and free chains do not partition the slots")
    if not free_head_used_head_relation(after_state):
        errors.append("P7: free_head equals used_head")
    if pre_good and not good_statep(v, after_state):
        errors.append(f"P8: good state for {v} not preserved")

    return after_state, errors


def check_initial(aset: Arrayset) -> list[str]:
    errors: list[str] = []
    if model_of(aset):
        errors.append("initial state is not empty")
    if aset_len(aset) + aset_len_free(aset) != aset.capacity:
        errors.append("P5 fails on the initial state")
    if not chains_partition(aset):
        errors.append("P6 fails on the initial state")
    if not free_head_used_head_relation(aset):
        errors.append("P7 fails on the initial state")
    return errors


def run_randomized(
    capacity: int,
    seed: int,
    iters: int,
    add_fn: AddFn = aset_add,
    del_fn: DelFn = aset_del,
    is_fn: IsFn = aset_is_element,
    p1_every_step: bool = True,
) -> CheckReport:
    """Random walk of `iters` ops from the initial state, checking every
    property at every step. With p1_every_step, the add-membership property
    is additionally checked at each visited state using the op's value."""
    started = time.monotonic()
    report = CheckReport()
    ops = random_ops(seed, iters, capacity)
    aset = aset_init(capacity)

    for mistake in check_initial(aset):
        report.failures.append(CheckFailure((), mistake))
    report.cases_run += 1

    history: list[OpRequest] = []
    for op in ops:
        history.append(op)
        if p1_every_step and op.tag != "add":
            # P1 at this state for the op's value, independent of the op.
            if good_statep(op.val, aset) and aset_len(aset) < capacity:
                report.p1_checks += 1
                if not is_fn(op.val, add_fn(op.val, aset)):
                    report.failures.append(
                        CheckFailure(tuple(history), f"P1: {op.val} not an element after add")
                    )
        elif op.tag == "add":
            if good_statep(op.val, aset) and aset_len(aset) < capacity:
                report.p1_checks += 1
        aset, errors = check_transition(aset, op, add_fn, del_fn, is_fn)
        report.cases_run += 1
        for e in errors:
            report.failures.append(CheckFailure(tuple(history), e))
        if len(report.failures) >= 25:
            break

    report.elapsed = time.monotonic() - started
    return report


def exhaustive_check(
    capacity: int,
    depth: int,
    alphabet_size: int,
    add_fn: AddFn = aset_add,
    del_fn: DelFn = aset_del,
    is_fn: IsFn = aset_is_element,
) -> CheckReport:
    """Check every op sequence of length <= depth over the op alphabet.

    Distinct sequences reaching the same state have identical futures, so the
    search memoizes states by remaining depth; coverage is unchanged but the
    walk collapses to the reachable state space. cases_run counts distinct
    transitions checked, plus one for the initial state.
    """
    if (3 * alphabet_size) ** depth > 10**8:
        raise ValueError("search space exceeds the desk-scale guard of 10^8")
    started = time.monotonic()
    report = CheckReport()

    init = aset_init(capacity)
    for mistake in check_initial(init):
        report.failures.append(CheckFailure((), mistake))
    report.cases_run += 1

    alphabet = [
        OpRequest(tag, v) for tag in OP_TAGS for v in range(alphabet_size)
    ]
    explored: dict[Arrayset, int] = {}
    stack: list[tuple[Arrayset, int, tuple[OpRequest, ...]]] = [(init, depth, ())]

    while stack:
        aset, remaining, prefix = stack.pop()
        if remaining == 0:
            continue
        prev = explored.get(aset, -1)
        if prev >= remaining:
            continue
        explored[aset] = remaining
        for op in alphabet:
            after, errors = check_transition(aset, op, add_fn, del_fn, is_fn)
            report.cases_run += 1
            if op.tag == "add" and aset_len(aset) < capacity and good_statep(op.val, aset):
                report.p1_checks += 1
            ops_here = prefix + (op,)
            for e in errors:
                report.failures.append(CheckFailure(ops_here, e))
            if len(report.failures) >= 25:
                report.elapsed = time.monotonic() - started
                return report
            stack.append((after, remaining - 1, ops_here))

    report.elapsed = time.monotonic() - started
    return report


def minimize_failure(
    ops: tuple[OpRequest, ...],
    capacity: int,
    add_fn: AddFn = aset_add,
    del_fn: DelFn = aset_del,
    is_fn: IsFn = aset_is_element,
) -> tuple[OpRequest, ...]:
    """Greedy one-op-at-a-time shrinking of a failing sequence."""

    def fails(candidate: tuple[OpRequest, ...]) -> bool:
        aset = aset_init(capacity)
        for op in candidate:
            aset, errors = check_transition(aset, op, add_fn, del_fn, is_fn)
            if errors:
                return True
        return False

    if not fails(ops):
        return ops
    current = ops
    changed = True
    while changed:
        changed = False
        for i in range(len(current)):
            candidate = current[:i] + current[i + 1 :]
            if fails(candidate):
                current = candidate
                changed = True
                break
    return current


# ---------------------------------------------------------------------------
# Differential testing against the compiled emitted C++


def repo_root() -> Path:
    return Path(__file__).resolve().parents[2]


def default_corpus_dir() -> Path:
    return repo_root() / "corpus"


def default_shim_dir() -> Path:
    return repo_root() / "rac_shim"


STRICT_WARNING_FLAGS = ["-std=c++17", "-Wall", "-Wextra", "-Werror"]


class DifferentialError(Exception):
    """Environment-level failure (missing compiler, compile error, crash)."""


def emit_corpus_for_capacity(corpus_dir: Path, capacity: int) -> str:
    """Transpile the corpus set source with its capacity constant rebound."""
    program, diagnostics = parse_file(corpus_dir / "arrayset.rar")
    if program is None:
        raise DifferentialError(f"corpus failed to parse: {diagnostics[0].format_line()}")
    errors = [d for d in check_program(program) if d.severity.value == "error"]
    if errors:
        raise DifferentialError(f"corpus failed checks: {errors[0].format_line()}")
    items = tuple(
        dataclasses.replace(item, value=capacity, value_lexeme=str(capacity))
        if isinstance(item, ConstDef) and item.name == "ARR_SZ"
        else item
        for item in program.items
    )
    return emit_program(Program(items), EmitOptions(dialect=Dialect.PLAIN_CXX))


def compile_trace_binary(
    emitted: str,
    compiler_command: str,
    shim_dir: Path,
    work_dir: Path,
) -> Path:
    """Compile the emitted corpus with the shim and trace driver."""
    (work_dir / "arrayset.cpp").write_text(emitted, encoding="utf-8")
    shutil.copy(shim_dir / "rac_shim.h", work_dir / "rac_shim.h")
    shutil.copy(shim_dir / "trace_main.cpp", work_dir / "trace_main.cpp")
    exe = work_dir / "trace_main"
    cmd = shlex.split(compiler_command) + STRICT_WARNING_FLAGS + [
        "-I", str(work_dir), "-o", str(exe), str(work_dir / "trace_main.cpp"),
    ]
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True)
    except FileNotFoundError as e:
        raise DifferentialError(f"compiler not found: {e}") from None
    if proc.returncode != 0:
        raise DifferentialError(f"compile failed:\n{proc.stderr}")
    return exe


def run_differential(
    corpus_dir: Path | str,
    compiler_command: str,
    seed: int,
    n: int,
    capacity: int,
    shim_dir: Optional[Path | str] = None,
    mutate_emitted: Optional[Callable[[str], str]] = None,
) -> CheckReport:
    """Transpile, compile, and run the corpus; compare its operation trace
    with the native reference trace field by field."""
    started = time.monotonic()
    corpus_dir = Path(corpus_dir)
    shim = Path(shim_dir) if shim_dir is not None else default_shim_dir()
    report = CheckReport()

    emitted = emit_corpus_for_capacity(corpus_dir, capacity)
    if mutate_emitted is not None:
        emitted = mutate_emitted(emitted)

    ops = random_ops(seed, n, capacity)
    native_lines = format_trace(trace_run(ops, capacity)).splitlines()

    with tempfile.TemporaryDirectory(prefix="rar-difftest-") as tmp:
        exe = compile_trace_binary(emitted, compiler_command, shim, Path(tmp))
        proc = subprocess.run(
            [str(exe), str(capacity)],
            input=format_op_script(ops),
            capture_output=True,
            text=True,
        )
    if proc.returncode != 0:
        raise DifferentialError(
            f"trace binary exited with {proc.returncode}: {proc.stderr.strip()}"
        )
    compiled_lines = proc.stdout.splitlines()

    report.cases_run = len(ops)
    if len(compiled_lines) != len(native_lines):
        report.failures.append(
            CheckFailure(
                tuple(ops),
                f"trace length mismatch: native {len(native_lines)}, "
                f"compiled {len(compiled_lines)}",
            )
        )
    else:
        for i, (mine, theirs) in enumerate(zip(native_lines, compiled_lines)):
            if mine.split() != theirs.split():
                report.failures.append(
                    CheckFailure(
                        tuple(ops[: i + 1]),
                        f"divergence at event {i + 1}: native {mine!r}, compiled {theirs!r}",
                    )
                )
                break

    report.elapsed = time.monotonic() - started
    return report


def find_compiler(explicit: Optional[str] = None, env_value: Optional[str] = None) -> Optional[str]:
    """Resolve the C++ compiler command: flag, then RAR_CC, then PATH."""
    if explicit:
        return explicit
    if env_value:
        return env_value
    for candidate in ("c++", "g++", "clang++"):
        if shutil.which(candidate):
            return candidate
    return None
