import pytest

from rar.ast_nodes import ArrayOf, BoolType, Named, SignedInt, UnsignedIndex, UnsignedInt
from rar.emitter import Dialect, EmitOptions, emit_program, header_prologue, map_type
from rar.frontend import parse_file

from conftest import GOLDEN

GOLDEN_BY_DIALECT = {
    Dialect.PLAIN_CXX: "arrayset_plain.cpp",
    Dialect.ALGORITHMIC_C: "arrayset_ac.cpp",
    Dialect.VIVADO_HLS: "arrayset_vivado.cpp",
}


@pytest.mark.parametrize(
    "ty,expected",
    [
        (UnsignedIndex(), "uint"),
        (SignedInt(64), "si64"),
        (SignedInt(8), "si8"),
        (UnsignedInt(16), "ui16"),
        (BoolType(), "bool"),
        (ArrayOf(UnsignedIndex(), "ARR_SZ"), "array<uint, ARR_SZ>"),
        (ArrayOf(SignedInt(64), 8), "array<si64, 8>"),
        (Named("Arrayset"), "Arrayset"),
    ],
)
def test_map_type_table(ty, expected):
    assert map_type(ty) == expected


def test_prologue_plain_names_the_shim():
    assert '#include "rac_shim.h"' in header_prologue(Dialect.PLAIN_CXX)


def test_prologue_ac_selects_algorithmic_c_branch():
    text = header_prologue(Dialect.ALGORITHMIC_C)
    assert '#include "ac_int.h"' in text
    assert "RAC_USE_VIVADO_HLS" in text  # the guard symbol
    assert "#define RAC_USE_VIVADO_HLS" not in text


def test_prologue_vivado_selects_vivado_branch_of_same_conditional():
    text = header_prologue(Dialect.VIVADO_HLS)
    assert "#define RAC_USE_VIVADO_HLS 1" in text
    assert '#include "ap_int.h"' in text


def test_const_emission(corpus_dir):
    program, _ = parse_file(corpus_dir / "arrayset.rar")
    text = emit_program(program)
    assert "const uint ARR_SZ = 256;" in text


def test_emission_is_deterministic(corpus_dir):
    program, _ = parse_file(corpus_dir / "arrayset.rar")
    opts = EmitOptions(dialect=Dialect.ALGORITHMIC_C)
    assert emit_program(program, opts) == emit_program(program, opts)


@pytest.mark.parametrize("dialect", list(GOLDEN_BY_DIALECT))
def test_golden_stability(corpus_dir, dialect):
    program, _ = parse_file(corpus_dir / "arrayset.rar")
    text = emit_program(program, EmitOptions(dialect=dialect))
    golden = (GOLDEN / GOLDEN_BY_DIALECT[dialect]).read_text()
    assert text == golden


def test_add_function_body_preserves_statement_order(corpus_dir):
    program, _ = parse_file(corpus_dir / "arrayset.rar")
    text = emit_program(program)
    body = text.split("Arrayset aset_add(si64 val, Arrayset aset) {")[1].split("\n}")[0]
    expected_order = [
        "uint curr_index = aset.free_head;",
        "aset.free_head = aset.anext[aset.free_head];",
        "aset.avals[curr_index] = val;",
        "aset.anext[curr_index] = aset.used_head;",
        "aset.used_head = curr_index;",
    ]
    positions = [body.index(s) for s in expected_order]
    assert positions == sorted(positions)


def test_for_loop_becomes_c_style(corpus_dir):
    program, _ = parse_file(corpus_dir / "arrayset.rar")
    text = emit_program(program)
    assert "for (uint i = 0; i < ARR_SZ; i++) {" in text


def test_records_and_params_stay_by_value(corpus_dir):
    program, _ = parse_file(corpus_dir / "arrayset.rar")
    text = emit_program(program)
    assert "Arrayset aset_add(si64 val, Arrayset aset)" in text
    assert "&" not in text.replace("&&", "")  # no references anywhere
    assert "derive" not in text


def test_indent_width_option(corpus_dir):
    program, _ = parse_file(corpus_dir / "arrayset.rar")
    text = emit_program(program, EmitOptions(indent_width=4))
    assert "    uint curr_index = aset.free_head;" in text
    with pytest.raises(ValueError):
        EmitOptions(indent_width=0)
    with pytest.raises(ValueError):
        EmitOptions(indent_width=9)
