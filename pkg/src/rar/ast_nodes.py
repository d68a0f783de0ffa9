"""AST node, token, span, and diagnostic types shared by the whole toolchain.

Every node is a frozen dataclass: values are immutable after construction and
can be shared freely between threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union


class TokenKind(enum.Enum):
    IDENTIFIER = "Identifier"
    INT_LITERAL = "IntLiteral"
    KEYWORD = "Keyword"
    PUNCT = "Punct"
    COMMENT = "Comment"
    ATTRIBUTE_MARKER = "AttributeMarker"


@dataclass(frozen=True)
class SourceSpan:
    """Half-open is wrong for editors; both ends are inclusive, 1-based."""

    file_id: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self) -> None:
        if (self.start_line, self.start_col) > (self.end_line, self.end_col):
            raise ValueError("span start must not follow span end")


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    span: SourceSpan

    def __post_init__(self) -> None:
        if not self.lexeme:
            raise ValueError("token lexeme must be non-empty")


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class UnsignedIndex:
    # `uint` in source is accepted as an alias for usize; the flag lets the
    # checker warn about it without the alias affecting type equality.
    alias_of_uint: bool = field(default=False, compare=False)


@dataclass(frozen=True)
class SignedInt:
    width: int  # 8, 16, 32, 64


@dataclass(frozen=True)
class UnsignedInt:
    width: int


@dataclass(frozen=True)
class BoolType:
    pass


@dataclass(frozen=True)
class ArrayOf:
    element: "TypeExpr"
    length: Union[str, int]  # constant name or literal value


@dataclass(frozen=True)
class Named:
    name: str


@dataclass(frozen=True)
class RefType:
    """A `&T` written in source.

    Not part of the RAR subset; represented so the checker can reject it with
    a diagnostic instead of the parser crashing.
    """

    inner: "TypeExpr"


TypeExpr = Union[UnsignedIndex, SignedInt, UnsignedInt, BoolType, ArrayOf, Named, RefType]


def type_text(t: TypeExpr) -> str:
    """Render a type the way it is written in RAR source."""
    if isinstance(t, UnsignedIndex):
        return "usize"
    if isinstance(t, SignedInt):
        return f"i{t.width}"
    if isinstance(t, UnsignedInt):
        return f"u{t.width}"
    if isinstance(t, BoolType):
        return "bool"
    if isinstance(t, ArrayOf):
        return f"[{type_text(t.element)}; {t.length}]"
    if isinstance(t, Named):
        return t.name
    if isinstance(t, RefType):
        return f"&{type_text(t.inner)}"
    raise TypeError(f"not a TypeExpr: {t!r}")


# ---------------------------------------------------------------------------
# Expressions


@dataclass(frozen=True)
class IntLit:
    value: int
    lexeme: str  # as written: decimal or 0x hex
    span: SourceSpan


@dataclass(frozen=True)
class BoolLit:
    value: bool
    span: SourceSpan


@dataclass(frozen=True)
class VarRef:
    name: str
    span: SourceSpan


@dataclass(frozen=True)
class FieldAccess:
    base: "Expr"
    field_name: str
    span: SourceSpan


@dataclass(frozen=True)
class Index:
    base: "Expr"
    index: "Expr"
    span: SourceSpan


@dataclass(frozen=True)
class Call:
    fn_name: str
    args: tuple["Expr", ...]
    span: SourceSpan


@dataclass(frozen=True)
class Binary:
    op: str
    lhs: "Expr"
    rhs: "Expr"
    span: SourceSpan


@dataclass(frozen=True)
class Unary:
    op: str  # "-" or "!"
    operand: "Expr"
    span: SourceSpan


@dataclass(frozen=True)
class Cast:
    expr: "Expr"
    target: TypeExpr
    span: SourceSpan


Expr = Union[IntLit, BoolLit, VarRef, FieldAccess, Index, Call, Binary, Unary, Cast]


def lvalue_root(expr: Expr) -> Optional[str]:
    """Name of the variable an lvalue chain roots at, or None if not an lvalue."""
    while isinstance(expr, (FieldAccess, Index)):
        expr = expr.base
    if isinstance(expr, VarRef):
        return expr.name
    return None


# ---------------------------------------------------------------------------
# Statements


@dataclass(frozen=True)
class Let:
    name: str
    declared_type: Optional[TypeExpr]
    is_mutable: bool
    init: Optional[Expr]
    span: SourceSpan


@dataclass(frozen=True)
class Assign:
    target: Expr  # VarRef / FieldAccess / Index chain
    value: Expr
    span: SourceSpan


@dataclass(frozen=True)
class If:
    cond: Expr
    then_body: tuple["Stmt", ...]
    else_body: Optional[tuple["Stmt", ...]]
    span: SourceSpan


@dataclass(frozen=True)
class ForRange:
    var: str
    lower: Expr
    upper: Expr
    body: tuple["Stmt", ...]
    span: SourceSpan


@dataclass(frozen=True)
class Return:
    value: Expr
    span: SourceSpan


Stmt = Union[Let, Assign, If, ForRange, Return]


# ---------------------------------------------------------------------------
# Items


@dataclass(frozen=True)
class Param:
    name: str
    declared_type: TypeExpr
    is_mutable: bool


@dataclass(frozen=True)
class ConstDef:
    name: str
    declared_type: TypeExpr
    value: int
    value_lexeme: str
    span: SourceSpan


@dataclass(frozen=True)
class RecordDef:
    name: str
    fields: tuple[tuple[str, TypeExpr], ...]
    copy_derive: bool
    span: SourceSpan


@dataclass(frozen=True)
class FnDef:
    name: str
    params: tuple[Param, ...]
    return_type: TypeExpr
    body: tuple[Stmt, ...]
    span: SourceSpan


@dataclass(frozen=True)
class GlobalLet:
    """A top-level `let`: always a subset violation, kept so the checker
    can point at it (rule R005) rather than the parser rejecting it opaquely."""

    name: str
    declared_type: Optional[TypeExpr]
    is_mutable: bool
    init: Optional[Expr]
    span: SourceSpan


Item = Union[ConstDef, RecordDef, FnDef, GlobalLet]


@dataclass(frozen=True)
class Program:
    items: tuple[Item, ...]


# ---------------------------------------------------------------------------
# Diagnostics


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    rule_code: str
    message: str
    span: SourceSpan

    def format_line(self) -> str:
        s = self.span
        return (
            f"{s.file_id}:{s.start_line}:{s.start_col}: "
            f"{self.severity.value} {self.rule_code}: {self.message}"
        )

    def to_dict(self) -> dict:
        s = self.span
        return {
            "severity": self.severity.value,
            "rule": self.rule_code,
            "message": self.message,
            "file": s.file_id,
            "line": s.start_line,
            "col": s.start_col,
            "end_line": s.end_line,
            "end_col": s.end_col,
        }


# ---------------------------------------------------------------------------
# Debug rendering


def render_ast(program: Program) -> str:
    """Deterministic textual dump of a Program, for golden-file tests."""
    out: list[str] = []
    for item in program.items:
        _render_item(item, out)
    return "".join(out)


def _render_item(item: Item, out: list[str]) -> None:
    if isinstance(item, ConstDef):
        out.append(f"const {item.name}: {type_text(item.declared_type)} = {item.value}\n")
    elif isinstance(item, RecordDef):
        derive = " (copy)" if item.copy_derive else ""
        out.append(f"record {item.name}{derive}\n")
        for name, ty in item.fields:
            out.append(f"  field {name}: {type_text(ty)}\n")
    elif isinstance(item, GlobalLet):
        mut = "mut " if item.is_mutable else ""
        out.append(f"global-let {mut}{item.name}\n")
    elif isinstance(item, FnDef):
        params = ", ".join(
            ("mut " if p.is_mutable else "") + f"{p.name}: {type_text(p.declared_type)}"
            for p in item.params
        )
        out.append(f"fn {item.name}({params}) -> {type_text(item.return_type)}\n")
        for stmt in item.body:
            _render_stmt(stmt, out, 1)
    else:
        raise TypeError(f"not an Item: {item!r}")


def _render_stmt(stmt: Stmt, out: list[str], depth: int) -> None:
    pad = "  " * depth
    if isinstance(stmt, Let):
        mut = "mut " if stmt.is_mutable else ""
        ty = f": {type_text(stmt.declared_type)}" if stmt.declared_type else ""
        init = f" = {render_expr(stmt.init)}" if stmt.init is not None else ""
        out.append(f"{pad}let {mut}{stmt.name}{ty}{init}\n")
    elif isinstance(stmt, Assign):
        out.append(f"{pad}{render_expr(stmt.target)} = {render_expr(stmt.value)}\n")
    elif isinstance(stmt, If):
        out.append(f"{pad}if {render_expr(stmt.cond)}\n")
        for s in stmt.then_body:
            _render_stmt(s, out, depth + 1)
        if stmt.else_body is not None:
            out.append(f"{pad}else\n")
            for s in stmt.else_body:
                _render_stmt(s, out, depth + 1)
    elif isinstance(stmt, ForRange):
        out.append(f"{pad}for {stmt.var} in {render_expr(stmt.lower)}..{render_expr(stmt.upper)}\n")
        for s in stmt.body:
            _render_stmt(s, out, depth + 1)
    elif isinstance(stmt, Return):
        out.append(f"{pad}return {render_expr(stmt.value)}\n")
    else:
        raise TypeError(f"not a Stmt: {stmt!r}")


def render_expr(expr: Expr) -> str:
    if isinstance(expr, IntLit):
        return expr.lexeme
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, VarRef):
        return expr.name
    if isinstance(expr, FieldAccess):
        return f"{render_expr(expr.base)}.{expr.field_name}"
    if isinstance(expr, Index):
        return f"{render_expr(expr.base)}[{render_expr(expr.index)}]"
    if isinstance(expr, Call):
        return f"{expr.fn_name}({', '.join(render_expr(a) for a in expr.args)})"
    if isinstance(expr, Binary):
        return f"({render_expr(expr.lhs)} {expr.op} {render_expr(expr.rhs)})"
    if isinstance(expr, Unary):
        return f"({expr.op}{render_expr(expr.operand)})"
    if isinstance(expr, Cast):
        return f"({render_expr(expr.expr)} as {type_text(expr.target)})"
    raise TypeError(f"not an Expr: {expr!r}")
