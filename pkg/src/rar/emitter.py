"""Emission of Restricted Algorithmic C (C++ text) from a checked Program.

Emission is deterministic: equal inputs and options produce byte-identical
text, which golden files pin down.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .ast_nodes import (
    ArrayOf,
    Assign,
    Binary,
    BoolLit,
    BoolType,
    Call,
    Cast,
    ConstDef,
    Expr,
    FieldAccess,
    FnDef,
    ForRange,
    If,
    Index,
    IntLit,
    Let,
    Named,
    Program,
    RecordDef,
    RefType,
    Return,
    SignedInt,
    Stmt,
    TypeExpr,
    Unary,
    UnsignedIndex,
    UnsignedInt,
    VarRef,
)


class Dialect(enum.Enum):
    ALGORITHMIC_C = "ac"
    VIVADO_HLS = "vivado"
    PLAIN_CXX = "plain"


@dataclass(frozen=True)
class EmitOptions:
    dialect: Dialect = Dialect.PLAIN_CXX
    indent_width: int = 2

    def __post_init__(self) -> None:
        if not 1 <= self.indent_width <= 8:
            raise ValueError("indent_width must be in [1, 8]")


def map_type(t: TypeExpr) -> str:
    """RAC spelling of a RAR type."""
    if isinstance(t, UnsignedIndex):
        return "uint"
    if isinstance(t, UnsignedInt):
        return f"ui{t.width}"
    if isinstance(t, SignedInt):
        return f"si{t.width}"
    if isinstance(t, BoolType):
        return "bool"
    if isinstance(t, ArrayOf):
        return f"array<{map_type(t.element)}, {t.length}>"
    if isinstance(t, Named):
        return t.name
    if isinstance(t, RefType):
        raise ValueError("reference types cannot be emitted; run the checker first")
    raise TypeError(f"not a TypeExpr: {t!r}")


_HLS_WIDTH_ALIASES = """\
typedef unsigned int uint;
#if defined(RAC_USE_VIVADO_HLS)
#include "ap_int.h"
typedef ap_int<8> si8;
typedef ap_int<16> si16;
typedef ap_int<32> si32;
typedef ap_int<64> si64;
typedef ap_uint<8> ui8;
typedef ap_uint<16> ui16;
typedef ap_uint<32> ui32;
typedef ap_uint<64> ui64;
#else
#include "ac_int.h"
typedef ac_int<8, true> si8;
typedef ac_int<16, true> si16;
typedef ac_int<32, true> si32;
typedef ac_int<64, true> si64;
typedef ac_int<8, false> ui8;
typedef ac_int<16, false> ui16;
typedef ac_int<32, false> ui32;
typedef ac_int<64, false> ui64;
#endif

template <typename T, unsigned N>
struct array {
  T elem[N];
  T &operator[](uint i) { return elem[i]; }
  const T &operator[](uint i) const { return elem[i]; }
};
"""


def header_prologue(dialect: Dialect) -> str:
    if dialect is Dialect.PLAIN_CXX:
        return '#include "rac_shim.h"\n'
    if dialect is Dialect.VIVADO_HLS:
        return (
            "#ifndef RAC_USE_VIVADO_HLS\n"
            "#define RAC_USE_VIVADO_HLS 1\n"
            "#endif\n" + _HLS_WIDTH_ALIASES
        )
    return _HLS_WIDTH_ALIASES


def emit_program(program: Program, opts: EmitOptions = EmitOptions()) -> str:
    """Emit the whole program; requires a Program that checked clean."""
    emitter = _Emitter(opts)
    return emitter.emit(program)


class _Emitter:
    def __init__(self, opts: EmitOptions):
        self.opts = opts
        self.lines: list[str] = []

    def emit(self, program: Program) -> str:
        self.lines = [header_prologue(self.opts.dialect)]
        for item in program.items:
            if isinstance(item, ConstDef):
                self.lines.append(
                    f"\nconst {map_type(item.declared_type)} {item.name} = {item.value_lexeme};\n"
                )
            elif isinstance(item, RecordDef):
                self.emit_record(item)
            elif isinstance(item, FnDef):
                self.emit_fn(item)
            else:
                raise ValueError("only const, struct, and fn items can be emitted")
        return "".join(self.lines)

    def pad(self, depth: int) -> str:
        return " " * (self.opts.indent_width * depth)

    def emit_record(self, rec: RecordDef) -> None:
        self.lines.append(f"\nstruct {rec.name} {{\n")
        for name, ty in rec.fields:
            self.lines.append(f"{self.pad(1)}{map_type(ty)} {name};\n")
        self.lines.append("};\n")

    def emit_fn(self, fn: FnDef) -> None:
        params = ", ".join(f"{map_type(p.declared_type)} {p.name}" for p in fn.params)
        self.lines.append(f"\n{map_type(fn.return_type)} {fn.name}({params}) {{\n")
        for stmt in fn.body:
            self.emit_stmt(stmt, 1)
        self.lines.append("}\n")

    def emit_stmt(self, stmt: Stmt, depth: int) -> None:
        pad = self.pad(depth)
        if isinstance(stmt, Let):
            ty = map_type(stmt.declared_type) if stmt.declared_type is not None else "auto"
            if stmt.init is not None:
                self.lines.append(f"{pad}{ty} {stmt.name} = {emit_expr(stmt.init)};\n")
            else:
                self.lines.append(f"{pad}{ty} {stmt.name};\n")
        elif isinstance(stmt, Assign):
            self.lines.append(f"{pad}{emit_expr(stmt.target)} = {emit_expr(stmt.value)};\n")
        elif isinstance(stmt, If):
            self.lines.append(f"{pad}if ({emit_expr(stmt.cond)}) {{\n")
            for s in stmt.then_body:
                self.emit_stmt(s, depth + 1)
            if stmt.else_body is None:
                self.lines.append(f"{pad}}}\n")
            else:
                self.lines.append(f"{pad}}} else {{\n")
                for s in stmt.else_body:
                    self.emit_stmt(s, depth + 1)
                self.lines.append(f"{pad}}}\n")
        elif isinstance(stmt, ForRange):
            v = stmt.var
            self.lines.append(
                f"{pad}for (uint {v} = {emit_expr(stmt.lower)}; "
                f"{v} < {emit_expr(stmt.upper)}; {v}++) {{\n"
            )
            for s in stmt.body:
                self.emit_stmt(s, depth + 1)
            self.lines.append(f"{pad}}}\n")
        elif isinstance(stmt, Return):
            self.lines.append(f"{pad}return {emit_expr(stmt.value)};\n")
        else:
            raise TypeError(f"not a Stmt: {stmt!r}")


# C-style precedence, used to emit the minimum parentheses that preserve the
# AST shape.
_PRECEDENCE = {
    "||": 1,
    "&&": 2,
    "|": 3,
    "^": 4,
    "&": 5,
    "==": 6, "!=": 6,
    "<": 7, "<=": 7, ">": 7, ">=": 7,
    "<<": 8, ">>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
}
_UNARY_PRECEDENCE = 11
_POSTFIX_PRECEDENCE = 12


def emit_expr(expr: Expr, parent_prec: int = 0) -> str:
    if isinstance(expr, IntLit):
        return expr.lexeme
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, VarRef):
        return expr.name
    if isinstance(expr, FieldAccess):
        return f"{emit_expr(expr.base, _POSTFIX_PRECEDENCE)}.{expr.field_name}"
    if isinstance(expr, Index):
        return f"{emit_expr(expr.base, _POSTFIX_PRECEDENCE)}[{emit_expr(expr.index)}]"
    if isinstance(expr, Call):
        args = ", ".join(emit_expr(a) for a in expr.args)
        return f"{expr.fn_name}({args})"
    if isinstance(expr, Binary):
        prec = _PRECEDENCE[expr.op]
        text = (
            f"{emit_expr(expr.lhs, prec)} {expr.op} {emit_expr(expr.rhs, prec + 1)}"
        )
        return f"({text})" if prec < parent_prec else text
    if isinstance(expr, Unary):
        text = f"{expr.op}{emit_expr(expr.operand, _UNARY_PRECEDENCE)}"
        return f"({text})" if _UNARY_PRECEDENCE < parent_prec else text
    if isinstance(expr, Cast):
        return f"({map_type(expr.target)})({emit_expr(expr.expr)})"
    raise TypeError(f"not an Expr: {expr!r}")
