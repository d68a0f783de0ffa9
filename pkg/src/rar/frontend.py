"""Lexer and recursive-descent parser for Restricted Algorithmic Rust.

`tokenize` raises LexError for the two lexical failure modes; `parse` never
raises on malformed token streams, it returns diagnostics instead.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Optional

from .ast_nodes import (
    ArrayOf,
    Assign,
    Binary,
    BoolLit,
    BoolType,
    Call,
    Cast,
    ConstDef,
    Diagnostic,
    Expr,
    FieldAccess,
    FnDef,
    ForRange,
    GlobalLet,
    If,
    Index,
    IntLit,
    Item,
    Let,
    Named,
    Param,
    Program,
    RecordDef,
    RefType,
    Return,
    Severity,
    SignedInt,
    SourceSpan,
    Stmt,
    Token,
    TokenKind,
    TypeExpr,
    Unary,
    UnsignedIndex,
    UnsignedInt,
    VarRef,
    lvalue_root,
)

KEYWORDS = frozenset(
    [
        "const", "struct", "fn", "let", "mut", "if", "else", "for", "in",
        "return", "true", "false", "as",
        "usize", "bool",
        "u8", "u16", "u32", "u64",
        "i8", "i16", "i32", "i64",
        "uint",
    ]
)

# Longest first so the two-char forms win.
_PUNCTS = [
    "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "->", "..",
    "+", "-", "*", "/", "%", "<", ">", "=", "!", "&", "|", "^",
    "(", ")", "{", "}", "[", "]", ";", ":", ",", ".",
]

_IDENT_START = re.compile(r"[A-Za-z_]")
_IDENT_CONT = re.compile(r"[A-Za-z0-9_]")

_DERIVE_COPY_CLONE = re.compile(
    r"#\[\s*derive\s*\(\s*(Copy\s*,\s*Clone|Clone\s*,\s*Copy)\s*\)\s*\]\Z"
)


class LexError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(message)
        self.span = span

    def to_diagnostic(self) -> Diagnostic:
        return Diagnostic(Severity.ERROR, "LEX", str(self), self.span)


def tokenize(source: str, file_id: str = "<input>") -> list[Token]:
    """Split source into tokens; comments are kept as Comment tokens.

    Concatenating the lexemes with the original inter-token whitespace
    reconstructs the source exactly.
    """
    tokens: list[Token] = []
    pos = 0
    line = 1
    col = 1
    n = len(source)

    def span_from(start_line: int, start_col: int) -> SourceSpan:
        return SourceSpan(file_id, start_line, start_col, line, max(col - 1, start_col))

    def advance(text: str) -> None:
        nonlocal line, col
        for ch in text:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1

    while pos < n:
        ch = source[pos]
        if ch in " \t\r\n":
            advance(ch)
            pos += 1
            continue

        start_line, start_col = line, col

        if source.startswith("//", pos):
            end = source.find("\n", pos)
            end = n if end == -1 else end
            text = source[pos:end]
            advance(text)
            tokens.append(Token(TokenKind.COMMENT, text, span_from(start_line, start_col)))
            pos = end
            continue

        if source.startswith("/*", pos):
            end = source.find("*/", pos + 2)
            if end == -1:
                advance(source[pos:])
                raise LexError(
                    "unterminated block comment", span_from(start_line, start_col)
                )
            text = source[pos : end + 2]
            advance(text)
            tokens.append(Token(TokenKind.COMMENT, text, span_from(start_line, start_col)))
            pos = end + 2
            continue

        if ch == "#":
            # Attribute: everything through the matching closing bracket.
            if pos + 1 >= n or source[pos + 1] != "[":
                advance(ch)
                raise LexError("unknown character '#'", span_from(start_line, start_col))
            depth = 0
            end = pos + 1
            while end < n:
                if source[end] == "[":
                    depth += 1
                elif source[end] == "]":
                    depth -= 1
                    if depth == 0:
                        break
                end += 1
            if end >= n:
                advance(source[pos:])
                raise LexError("unterminated attribute", span_from(start_line, start_col))
            text = source[pos : end + 1]
            advance(text)
            tokens.append(
                Token(TokenKind.ATTRIBUTE_MARKER, text, span_from(start_line, start_col))
            )
            pos = end + 1
            continue

        if "0" <= ch <= "9":  # not str.isdigit: that accepts non-ASCII digits
            if source.startswith("0x", pos) or source.startswith("0X", pos):
                m = re.match(r"0[xX][0-9a-fA-F]+", source[pos:])
                if m is None:
                    advance(source[pos : pos + 2])
                    raise LexError("malformed hex literal", span_from(start_line, start_col))
                text = m.group(0)
            else:
                text = re.match(r"[0-9]+", source[pos:]).group(0)
            advance(text)
            tokens.append(Token(TokenKind.INT_LITERAL, text, span_from(start_line, start_col)))
            pos += len(text)
            continue

        if _IDENT_START.match(ch):
            end = pos + 1
            while end < n and _IDENT_CONT.match(source[end]):
                end += 1
            text = source[pos:end]
            advance(text)
            kind = TokenKind.KEYWORD if text in KEYWORDS else TokenKind.IDENTIFIER
            tokens.append(Token(kind, text, span_from(start_line, start_col)))
            pos = end
            continue

        for p in _PUNCTS:
            if source.startswith(p, pos):
                advance(p)
                tokens.append(Token(TokenKind.PUNCT, p, span_from(start_line, start_col)))
                pos += len(p)
                break
        else:
            advance(ch)
            raise LexError(f"unknown character {ch!r}", span_from(start_line, start_col))

    return tokens


# ---------------------------------------------------------------------------
# Parser


class _ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(message)
        self.span = span


_WIDTH_TYPES = {
    "usize": UnsignedIndex(),
    "uint": UnsignedIndex(alias_of_uint=True),
    "bool": BoolType(),
    "i8": SignedInt(8), "i16": SignedInt(16), "i32": SignedInt(32), "i64": SignedInt(64),
    "u8": UnsignedInt(8), "u16": UnsignedInt(16), "u32": UnsignedInt(32), "u64": UnsignedInt(64),
}


class _Parser:
    def __init__(self, tokens: list[Token], file_id: str):
        # Comments are lexed but not parsed.
        self.tokens = [t for t in tokens if t.kind is not TokenKind.COMMENT]
        self.pos = 0
        self.file_id = file_id

    # -- token helpers

    def _eof_span(self) -> SourceSpan:
        if self.tokens:
            s = self.tokens[-1].span
            return SourceSpan(self.file_id, s.end_line, s.end_col, s.end_line, s.end_col)
        return SourceSpan(self.file_id, 1, 1, 1, 1)

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def at(self, lexeme: str) -> bool:
        t = self.peek()
        return t is not None and t.lexeme == lexeme

    def take(self) -> Token:
        t = self.peek()
        if t is None:
            raise _ParseError("unexpected end of input", self._eof_span())
        self.pos += 1
        return t

    def expect(self, lexeme: str) -> Token:
        t = self.peek()
        if t is None:
            raise _ParseError(f"expected {lexeme!r}, found end of input", self._eof_span())
        if t.lexeme != lexeme:
            raise _ParseError(f"expected {lexeme!r}, found {t.lexeme!r}", t.span)
        self.pos += 1
        return t

    def expect_identifier(self) -> Token:
        t = self.peek()
        if t is None:
            raise _ParseError("expected identifier, found end of input", self._eof_span())
        if t.kind is not TokenKind.IDENTIFIER:
            raise _ParseError(f"expected identifier, found {t.lexeme!r}", t.span)
        self.pos += 1
        return t

    # -- items

    def parse_program(self) -> Program:
        items: list[Item] = []
        while self.peek() is not None:
            items.append(self.parse_item())
        self._check_namespaces(items)
        return Program(tuple(items))

    def _check_namespaces(self, items: list[Item]) -> None:
        value_ns: set[str] = set()  # constants and functions share one namespace
        record_ns: set[str] = set()
        for item in items:
            if isinstance(item, RecordDef):
                if item.name in record_ns:
                    raise _ParseError(f"duplicate record name {item.name!r}", item.span)
                record_ns.add(item.name)
            elif isinstance(item, (ConstDef, FnDef, GlobalLet)):
                if item.name in value_ns:
                    raise _ParseError(f"duplicate item name {item.name!r}", item.span)
                value_ns.add(item.name)

    def parse_item(self) -> Item:
        t = self.peek()
        assert t is not None
        if t.kind is TokenKind.ATTRIBUTE_MARKER:
            self.take()
            if not _DERIVE_COPY_CLONE.match(t.lexeme):
                raise _ParseError(
                    "only the #[derive(Copy, Clone)] attribute is supported", t.span
                )
            nxt = self.peek()
            if nxt is None or nxt.lexeme != "struct":
                raise _ParseError("attribute must precede a struct definition", t.span)
            return self.parse_record(copy_derive=True)
        if t.lexeme == "const":
            return self.parse_const()
        if t.lexeme == "struct":
            return self.parse_record(copy_derive=False)
        if t.lexeme == "fn":
            return self.parse_fn()
        if t.lexeme == "let":
            return self.parse_global_let()
        raise _ParseError(f"expected item, found {t.lexeme!r}", t.span)

    def parse_const(self) -> ConstDef:
        start = self.expect("const")
        name = self.expect_identifier()
        self.expect(":")
        ty = self.parse_type()
        self.expect("=")
        lit = self.take()
        if lit.kind is not TokenKind.INT_LITERAL:
            raise _ParseError("const initializer must be an integer literal", lit.span)
        self.expect(";")
        value = int(lit.lexeme, 0)
        self._check_const_fits(value, ty, lit.span)
        return ConstDef(name.lexeme, ty, value, lit.lexeme, start.span)

    def _check_const_fits(self, value: int, ty: TypeExpr, span: SourceSpan) -> None:
        if isinstance(ty, UnsignedInt) and value >= 1 << ty.width:
            raise _ParseError(f"value {value} does not fit in u{ty.width}", span)
        if isinstance(ty, SignedInt) and value >= 1 << (ty.width - 1):
            raise _ParseError(f"value {value} does not fit in i{ty.width}", span)
        if isinstance(ty, (BoolType, ArrayOf, Named, RefType)):
            raise _ParseError("const must have an integer type", span)

    def parse_record(self, copy_derive: bool) -> RecordDef:
        start = self.expect("struct")
        name = self.expect_identifier()
        self.expect("{")
        fields: list[tuple[str, TypeExpr]] = []
        names: set[str] = set()
        while not self.at("}"):
            fname = self.expect_identifier()
            if fname.lexeme in names:
                raise _ParseError(f"duplicate field name {fname.lexeme!r}", fname.span)
            names.add(fname.lexeme)
            self.expect(":")
            fty = self.parse_type()
            if isinstance(fty, Named):
                raise _ParseError("nested record fields are not supported", fname.span)
            fields.append((fname.lexeme, fty))
            if self.at(","):
                self.take()
            else:
                break
        self.expect("}")
        return RecordDef(name.lexeme, tuple(fields), copy_derive, start.span)

    def parse_fn(self) -> FnDef:
        start = self.expect("fn")
        name = self.expect_identifier()
        self.expect("(")
        params: list[Param] = []
        pnames: set[str] = set()
        while not self.at(")"):
            leading_mut = False
            if self.at("mut"):
                self.take()
                leading_mut = True
            pname = self.expect_identifier()
            if pname.lexeme in pnames:
                raise _ParseError(f"duplicate parameter name {pname.lexeme!r}", pname.span)
            pnames.add(pname.lexeme)
            self.expect(":")
            # `name: mut T` is accepted as an alternative spelling of `mut name: T`.
            trailing_mut = False
            if self.at("mut"):
                self.take()
                trailing_mut = True
            pty = self.parse_type()
            params.append(Param(pname.lexeme, pty, leading_mut or trailing_mut))
            if self.at(","):
                self.take()
            else:
                break
        self.expect(")")
        self.expect("->")
        ret = self.parse_type()
        body = self.parse_block()
        return FnDef(name.lexeme, tuple(params), ret, body, start.span)

    def parse_global_let(self) -> GlobalLet:
        let = self._parse_let()
        return GlobalLet(let.name, let.declared_type, let.is_mutable, let.init, let.span)

    # -- types

    def parse_type(self) -> TypeExpr:
        t = self.peek()
        if t is None:
            raise _ParseError("expected type, found end of input", self._eof_span())
        if t.lexeme == "&":
            self.take()
            return RefType(self.parse_type())
        if t.lexeme == "[":
            self.take()
            elem = self.parse_type()
            if isinstance(elem, (ArrayOf, Named, RefType)):
                raise _ParseError("array element type must be scalar", t.span)
            self.expect(";")
            length_tok = self.take()
            length: str | int
            if length_tok.kind is TokenKind.INT_LITERAL:
                length = int(length_tok.lexeme, 0)
                if length <= 0:
                    raise _ParseError("array length must be positive", length_tok.span)
            elif length_tok.kind is TokenKind.IDENTIFIER:
                length = length_tok.lexeme
            else:
                raise _ParseError(
                    "array length must be a constant name or literal", length_tok.span
                )
            self.expect("]")
            return ArrayOf(elem, length)
        if t.lexeme in _WIDTH_TYPES:
            self.take()
            return _WIDTH_TYPES[t.lexeme]
        if t.kind is TokenKind.IDENTIFIER:
            self.take()
            return Named(t.lexeme)
        raise _ParseError(f"expected type, found {t.lexeme!r}", t.span)

    # -- statements

    def parse_block(self) -> tuple[Stmt, ...]:
        self.expect("{")
        stmts: list[Stmt] = []
        while not self.at("}"):
            stmts.append(self.parse_stmt())
        self.expect("}")
        return tuple(stmts)

    def parse_stmt(self) -> Stmt:
        t = self.peek()
        if t is None:
            raise _ParseError("expected statement, found end of input", self._eof_span())
        if t.lexeme == "let":
            return self._parse_let()
        if t.lexeme == "if":
            return self._parse_if()
        if t.lexeme == "for":
            return self._parse_for()
        if t.lexeme == "return":
            self.take()
            value = self.parse_expr()
            self.expect(";")
            return Return(value, t.span)
        # Assignment.
        target = self.parse_expr()
        if lvalue_root(target) is None:
            raise _ParseError("assignment target must be a variable, field, or element", t.span)
        self.expect("=")
        value = self.parse_expr()
        self.expect(";")
        return Assign(target, value, t.span)

    def _parse_let(self) -> Let:
        start = self.expect("let")
        is_mut = False
        if self.at("mut"):
            self.take()
            is_mut = True
        name = self.expect_identifier()
        ty: Optional[TypeExpr] = None
        if self.at(":"):
            self.take()
            ty = self.parse_type()
        init: Optional[Expr] = None
        if self.at("="):
            self.take()
            init = self.parse_expr()
        self.expect(";")
        return Let(name.lexeme, ty, is_mut, init, start.span)

    def _parse_if(self) -> If:
        start = self.expect("if")
        cond = self.parse_expr()
        then_body = self.parse_block()
        else_body: Optional[tuple[Stmt, ...]] = None
        if self.at("else"):
            self.take()
            if self.at("if"):
                else_body = (self._parse_if(),)
            else:
                else_body = self.parse_block()
        return If(cond, then_body, else_body, start.span)

    def _parse_for(self) -> ForRange:
        start = self.expect("for")
        var = self.expect_identifier()
        self.expect("in")
        lower = self.parse_range_operand()
        self.expect("..")
        upper = self.parse_range_operand()
        body = self.parse_block()
        return ForRange(var.lexeme, lower, upper, body, start.span)

    def parse_range_operand(self) -> Expr:
        # Range bounds stop before `..`, so they cannot be full binary
        # expressions containing ranges; ordinary precedence parsing works
        # because `..` is not an expression operator here.
        return self.parse_expr()

    # -- expressions (precedence climbing)

    _BINARY_LEVELS = [
        ["||"],
        ["&&"],
        ["|"],
        ["^"],
        ["&"],
        ["==", "!="],
        ["<", "<=", ">", ">="],
        ["<<", ">>"],
        ["+", "-"],
        ["*", "/", "%"],
    ]

    def parse_expr(self) -> Expr:
        return self._parse_binary(0)

    def _parse_binary(self, level: int) -> Expr:
        if level >= len(self._BINARY_LEVELS):
            return self._parse_unary()
        ops = self._BINARY_LEVELS[level]
        lhs = self._parse_binary(level + 1)
        while True:
            t = self.peek()
            if t is None or t.kind is not TokenKind.PUNCT or t.lexeme not in ops:
                return lhs
            self.take()
            rhs = self._parse_binary(level + 1)
            lhs = Binary(t.lexeme, lhs, rhs, t.span)

    def _parse_unary(self) -> Expr:
        t = self.peek()
        if t is not None and t.lexeme in ("-", "!"):
            self.take()
            operand = self._parse_unary()
            return Unary(t.lexeme, operand, t.span)
        return self._parse_cast()

    def _parse_cast(self) -> Expr:
        expr = self._parse_postfix()
        while self.at("as"):
            t = self.take()
            target = self.parse_type()
            expr = Cast(expr, target, t.span)
        return expr

    def _parse_postfix(self) -> Expr:
        expr = self._parse_primary()
        while True:
            t = self.peek()
            if t is None:
                return expr
            if t.lexeme == ".":
                # Stop at `..`: that is the range punct, already lexed apart.
                self.take()
                field = self.expect_identifier()
                expr = FieldAccess(expr, field.lexeme, t.span)
            elif t.lexeme == "[":
                self.take()
                index = self.parse_expr()
                self.expect("]")
                expr = Index(expr, index, t.span)
            else:
                return expr

    def _parse_primary(self) -> Expr:
        t = self.peek()
        if t is None:
            raise _ParseError("expected expression, found end of input", self._eof_span())
        if t.kind is TokenKind.INT_LITERAL:
            self.take()
            return IntLit(int(t.lexeme, 0), t.lexeme, t.span)
        if t.lexeme in ("true", "false"):
            self.take()
            return BoolLit(t.lexeme == "true", t.span)
        if t.lexeme == "(":
            self.take()
            expr = self.parse_expr()
            self.expect(")")
            return expr
        if t.kind is TokenKind.IDENTIFIER:
            self.take()
            if self.at("("):
                self.take()
                args: list[Expr] = []
                while not self.at(")"):
                    args.append(self.parse_expr())
                    if self.at(","):
                        self.take()
                    else:
                        break
                self.expect(")")
                return Call(t.lexeme, tuple(args), t.span)
            return VarRef(t.lexeme, t.span)
        raise _ParseError(f"expected expression, found {t.lexeme!r}", t.span)


def parse(tokens: list[Token], file_id: str = "<input>") -> tuple[Optional[Program], list[Diagnostic]]:
    """Parse a token stream. Returns (program, []) or (None, diagnostics)."""
    parser = _Parser(tokens, file_id)
    try:
        return parser.parse_program(), []
    except _ParseError as e:
        return None, [Diagnostic(Severity.ERROR, "SYNTAX", str(e), e.span)]


def parse_source(source: str, file_id: str = "<input>") -> tuple[Optional[Program], list[Diagnostic]]:
    """Tokenize and parse, folding lexical errors into diagnostics."""
    try:
        tokens = tokenize(source, file_id)
    except LexError as e:
        return None, [e.to_diagnostic()]
    return parse(tokens, file_id)


def parse_file(path: str | Path) -> tuple[Optional[Program], list[Diagnostic]]:
    """Parse a file. IO failures raise OSError; syntax errors are diagnostics."""
    p = Path(path)
    source = p.read_text(encoding="utf-8")
    return parse_source(source, str(p))
