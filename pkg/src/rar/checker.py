"""Subset rule enforcement over a parsed Program.

The rule table is the documented contract: every diagnostic cites one entry.
All checks are pure; the input Program is never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass
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
    Let,
    Named,
    Program,
    RecordDef,
    RefType,
    Return,
    Severity,
    SignedInt,
    SourceSpan,
    Stmt,
    TypeExpr,
    Unary,
    UnsignedIndex,
    UnsignedInt,
    VarRef,
    lvalue_root,
    type_text,
)

RULE_TABLE: dict[str, tuple[str, Severity]] = {
    "R001": ("reference types are not allowed; aggregates pass and return by value", Severity.ERROR),
    "R002": ("recursion (direct or mutual) is not allowed", Severity.ERROR),
    "R003": ("loop bounds must be compile-time constants; loop bodies may not mutate the loop variable or return", Severity.ERROR),
    "R004": ("array index expressions must have type usize", Severity.ERROR),
    "R005": ("no global mutable state; only const items at top level", Severity.ERROR),
    "R006": ("every function must return on all control paths", Severity.ERROR),
    "R007": ("calls must target functions defined in the same program", Severity.ERROR),
    "R008": ("functions must be defined before they are called", Severity.ERROR),
    "W009": ("'uint' is a nonstandard alias for 'usize'", Severity.WARNING),
}


class ConstEvalError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(message)
        self.span = span


def evaluate_const(expr: Expr, env: dict[str, int]) -> int:
    """Evaluate a constant expression over literals, const names, and +, -, *.

    Raises ConstEvalError for non-constant subexpressions and for results
    below zero.
    """
    value = _eval_const(expr, env)
    if value < 0:
        raise ConstEvalError("constant expression underflows below zero", expr.span)
    return value


def _eval_const(expr: Expr, env: dict[str, int]) -> int:
    if isinstance(expr, IntLit):
        return expr.value
    if isinstance(expr, VarRef):
        if expr.name in env:
            return env[expr.name]
        raise ConstEvalError(f"{expr.name!r} is not a constant", expr.span)
    if isinstance(expr, Binary) and expr.op in ("+", "-", "*"):
        lhs = _eval_const(expr.lhs, env)
        rhs = _eval_const(expr.rhs, env)
        if expr.op == "+":
            return lhs + rhs
        if expr.op == "-":
            result = lhs - rhs
            if result < 0:
                raise ConstEvalError("constant expression underflows below zero", expr.span)
            return result
        return lhs * rhs
    raise ConstEvalError("expression is not compile-time constant", expr.span)


# ---------------------------------------------------------------------------
# Type inference (only as much as rule R004 needs)


@dataclass
class _Scope:
    consts: dict[str, ConstDef]
    records: dict[str, RecordDef]
    fns: dict[str, FnDef]
    fn_order: dict[str, int]


def _build_scope(program: Program) -> _Scope:
    consts: dict[str, ConstDef] = {}
    records: dict[str, RecordDef] = {}
    fns: dict[str, FnDef] = {}
    order: dict[str, int] = {}
    for i, item in enumerate(program.items):
        if isinstance(item, ConstDef):
            consts[item.name] = item
        elif isinstance(item, RecordDef):
            records[item.name] = item
        elif isinstance(item, FnDef):
            fns[item.name] = item
            order[item.name] = i
    return _Scope(consts, records, fns, order)


_INT_LITERAL = object()  # an un-suffixed literal adapts to any integer type


def _infer(expr: Expr, env: dict[str, TypeExpr], scope: _Scope):
    """Best-effort type of an expression; None when unknown."""
    if isinstance(expr, IntLit):
        return _INT_LITERAL
    if isinstance(expr, BoolLit):
        return BoolType()
    if isinstance(expr, VarRef):
        if expr.name in env:
            return env[expr.name]
        if expr.name in scope.consts:
            return scope.consts[expr.name].declared_type
        return None
    if isinstance(expr, FieldAccess):
        base = _infer(expr.base, env, scope)
        while isinstance(base, RefType):
            base = base.inner
        if isinstance(base, Named) and base.name in scope.records:
            for fname, fty in scope.records[base.name].fields:
                if fname == expr.field_name:
                    return fty
        return None
    if isinstance(expr, Index):
        base = _infer(expr.base, env, scope)
        while isinstance(base, RefType):
            base = base.inner
        if isinstance(base, ArrayOf):
            return base.element
        return None
    if isinstance(expr, Call):
        fn = scope.fns.get(expr.fn_name)
        return fn.return_type if fn is not None else None
    if isinstance(expr, Binary):
        if expr.op in ("==", "!=", "<", "<=", ">", ">=", "&&", "||"):
            return BoolType()
        lhs = _infer(expr.lhs, env, scope)
        if lhs is not None and lhs is not _INT_LITERAL:
            return lhs
        return _infer(expr.rhs, env, scope)
    if isinstance(expr, Unary):
        if expr.op == "!":
            return BoolType()
        return _infer(expr.operand, env, scope)
    if isinstance(expr, Cast):
        return expr.target
    return None


# ---------------------------------------------------------------------------
# check_program


def check_program(program: Program) -> list[Diagnostic]:
    """Run all subset rules; empty result means the program is clean RAR."""
    checker = _Checker(program)
    checker.run()
    return checker.diagnostics


class _Checker:
    def __init__(self, program: Program):
        self.program = program
        self.scope = _build_scope(program)
        self.diagnostics: list[Diagnostic] = []
        self.const_env = {c.name: c.value for c in self.scope.consts.values()}

    def emit(self, code: str, message: str, span: SourceSpan) -> None:
        _description, severity = RULE_TABLE[code]
        self.diagnostics.append(Diagnostic(severity, code, message, span))

    def run(self) -> None:
        for item in self.program.items:
            if isinstance(item, GlobalLet):
                self.emit("R005", f"top-level 'let {item.name}' is global state", item.span)
            elif isinstance(item, ConstDef):
                self._warn_uint(item.declared_type, item.span)
            elif isinstance(item, RecordDef):
                for _fname, fty in item.fields:
                    self._warn_uint(fty, item.span)
            elif isinstance(item, FnDef):
                self.check_fn(item)
        self.check_recursion()

    def _warn_uint(self, ty: TypeExpr, span: SourceSpan) -> None:
        for t in _walk_type(ty):
            if isinstance(t, UnsignedIndex) and t.alias_of_uint:
                self.emit("W009", "'uint' written here; treated as 'usize'", span)

    def _reject_refs(self, ty: TypeExpr, what: str, span: SourceSpan) -> None:
        if any(isinstance(t, RefType) for t in _walk_type(ty)):
            self.emit("R001", f"{what} has reference type {type_text(ty)!r}", span)

    def check_fn(self, fn: FnDef) -> None:
        env: dict[str, TypeExpr] = {}
        for p in fn.params:
            self._reject_refs(p.declared_type, f"parameter {p.name!r} of {fn.name!r}", fn.span)
            self._warn_uint(p.declared_type, fn.span)
            env[p.name] = p.declared_type
        self._reject_refs(fn.return_type, f"return type of {fn.name!r}", fn.span)
        self._warn_uint(fn.return_type, fn.span)

        self._check_stmts(fn, fn.body, env, in_loop=False)

        if not _always_returns(fn.body):
            self.emit("R006", f"function {fn.name!r} does not return on all paths", fn.span)

    def _check_stmts(
        self,
        fn: FnDef,
        stmts: tuple[Stmt, ...],
        env: dict[str, TypeExpr],
        in_loop: bool,
        loop_vars: frozenset[str] = frozenset(),
    ) -> None:
        for stmt in stmts:
            if isinstance(stmt, Let):
                if stmt.declared_type is not None:
                    self._reject_refs(stmt.declared_type, f"local {stmt.name!r}", stmt.span)
                    self._warn_uint(stmt.declared_type, stmt.span)
                    env[stmt.name] = stmt.declared_type
                elif stmt.init is not None:
                    inferred = _infer(stmt.init, env, self.scope)
                    if inferred is not None and inferred is not _INT_LITERAL:
                        env[stmt.name] = inferred
                if stmt.init is not None:
                    self._check_expr(fn, stmt.init, env)
            elif isinstance(stmt, Assign):
                root = lvalue_root(stmt.target)
                if root is not None and root in loop_vars:
                    self.emit(
                        "R003", f"loop variable {root!r} is mutated in the loop body", stmt.span
                    )
                self._check_expr(fn, stmt.target, env)
                self._check_expr(fn, stmt.value, env)
            elif isinstance(stmt, If):
                self._check_expr(fn, stmt.cond, env)
                self._check_stmts(fn, stmt.then_body, env, in_loop, loop_vars)
                if stmt.else_body is not None:
                    self._check_stmts(fn, stmt.else_body, env, in_loop, loop_vars)
            elif isinstance(stmt, ForRange):
                for bound, which in ((stmt.lower, "lower"), (stmt.upper, "upper")):
                    try:
                        evaluate_const(bound, self.const_env)
                    except ConstEvalError:
                        self.emit(
                            "R003",
                            f"{which} loop bound is not a compile-time constant",
                            stmt.span,
                        )
                    self._check_expr(fn, bound, env)
                inner = dict(env)
                inner[stmt.var] = UnsignedIndex()
                self._check_stmts(fn, stmt.body, inner, True, loop_vars | {stmt.var})
            elif isinstance(stmt, Return):
                if in_loop:
                    self.emit("R003", "return inside a loop body is not allowed", stmt.span)
                self._check_expr(fn, stmt.value, env)

    def _check_expr(self, fn: FnDef, expr: Expr, env: dict[str, TypeExpr]) -> None:
        for node in _walk_expr(expr):
            if isinstance(node, Call):
                callee = self.scope.fns.get(node.fn_name)
                if callee is None:
                    self.emit(
                        "R007",
                        f"call to {node.fn_name!r}, which is not defined in this program",
                        node.span,
                    )
                else:
                    if len(node.args) != len(callee.params):
                        self.emit(
                            "R007",
                            f"call to {node.fn_name!r} passes {len(node.args)} argument(s), "
                            f"expected {len(callee.params)}",
                            node.span,
                        )
                    if node.fn_name != fn.name and (
                        self.scope.fn_order[node.fn_name] > self.scope.fn_order[fn.name]
                    ):
                        self.emit(
                            "R008",
                            f"{fn.name!r} calls {node.fn_name!r} before it is defined",
                            node.span,
                        )
            elif isinstance(node, Index):
                ty = _infer(node.index, env, self.scope)
                if ty is not None and ty is not _INT_LITERAL and ty != UnsignedIndex():
                    self.emit(
                        "R004",
                        f"array index has type {type_text(ty)!r}, expected 'usize'",
                        node.span,
                    )
            elif isinstance(node, Cast):
                self._reject_refs(node.target, "cast target", node.span)

    def check_recursion(self) -> None:
        # Tarjan-free: report every function on a call-graph cycle, in
        # definition order, plus direct self-calls.
        graph: dict[str, set[str]] = {}
        for name, fn in self.scope.fns.items():
            callees: set[str] = set()
            for stmt in fn.body:
                for node in _walk_stmt_exprs(stmt):
                    if isinstance(node, Call) and node.fn_name in self.scope.fns:
                        callees.add(node.fn_name)
            graph[name] = callees

        on_cycle: list[str] = []
        for name in self.scope.fns:
            if name in graph[name] or self._reaches(graph, name, name):
                on_cycle.append(name)
        for name in on_cycle:
            self.emit(
                "R002",
                f"function {name!r} is part of a recursive call cycle",
                self.scope.fns[name].span,
            )

    @staticmethod
    def _reaches(graph: dict[str, set[str]], start: str, target: str) -> bool:
        seen: set[str] = set()
        stack = list(graph[start])
        while stack:
            cur = stack.pop()
            if cur == target:
                return True
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(graph.get(cur, ()))
        return False


def _always_returns(stmts: tuple[Stmt, ...]) -> bool:
    for stmt in stmts:
        if isinstance(stmt, Return):
            return True
        if isinstance(stmt, If) and stmt.else_body is not None:
            if _always_returns(stmt.then_body) and _always_returns(stmt.else_body):
                return True
    return False


def _walk_type(ty: TypeExpr):
    yield ty
    if isinstance(ty, ArrayOf):
        yield from _walk_type(ty.element)
    elif isinstance(ty, RefType):
        yield from _walk_type(ty.inner)


def _walk_expr(expr: Expr):
    yield expr
    if isinstance(expr, FieldAccess):
        yield from _walk_expr(expr.base)
    elif isinstance(expr, Index):
        yield from _walk_expr(expr.base)
        yield from _walk_expr(expr.index)
    elif isinstance(expr, Call):
        for a in expr.args:
            yield from _walk_expr(a)
    elif isinstance(expr, Binary):
        yield from _walk_expr(expr.lhs)
        yield from _walk_expr(expr.rhs)
    elif isinstance(expr, Unary):
        yield from _walk_expr(expr.operand)
    elif isinstance(expr, Cast):
        yield from _walk_expr(expr.expr)


def _walk_stmt_exprs(stmt: Stmt):
    if isinstance(stmt, Let):
        if stmt.init is not None:
            yield from _walk_expr(stmt.init)
    elif isinstance(stmt, Assign):
        yield from _walk_expr(stmt.target)
        yield from _walk_expr(stmt.value)
    elif isinstance(stmt, If):
        yield from _walk_expr(stmt.cond)
        for s in stmt.then_body:
            yield from _walk_stmt_exprs(s)
        if stmt.else_body is not None:
            for s in stmt.else_body:
                yield from _walk_stmt_exprs(s)
    elif isinstance(stmt, ForRange):
        yield from _walk_expr(stmt.lower)
        yield from _walk_expr(stmt.upper)
        for s in stmt.body:
            yield from _walk_stmt_exprs(s)
    elif isinstance(stmt, Return):
        yield from _walk_expr(stmt.value)
