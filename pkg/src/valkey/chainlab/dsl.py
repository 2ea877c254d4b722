"""The chain-description language: tokens, syntax tree, parser and printer.

A script is a sequence of newline-terminated statements::

    set p = 2
    val v1 = monomial(-1/2)
    poly phi2 = x - y^(-1/2)
    val v2 = augment(v1, phi2, -1/4)
    eval(v2, x^2 - x - y^(-1))      # a query

Statements are ``set NAME = expr``, typed bindings ``KIND NAME = expr``
with KIND one of ``elem poly series point val seq list roots``, scenario
invocations ``scenario NAME(key=value, ...)`` and bare query calls.
Expressions use ``+ - * / ^`` with the usual precedence; an exponent is an
integer, a name or a parenthesized expression.  ``x`` is the indeterminate,
``y`` the base element of K and ``t`` the series variable.  ``#`` starts a
comment.

Generator templates (the second and third arguments of ``limit``) may use
the stage index ``n``; ``sum(i, lo, hi, body)`` binds ``i`` inside ``body``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from ..errors import ParseError, TypeMismatch, UndefinedIdentifier

__all__ = [
    "Token", "tokenize", "Num", "Name", "Call", "BinOp", "Neg", "Pow", "ListExpr",
    "SetStmt", "Bind", "ScenarioStmt", "QueryStmt", "Script", "parse", "parse_unchecked",
    "pretty", "pretty_expr", "check", "BINDING_KINDS", "SIGNATURES", "QUERIES",
]

BINDING_KINDS = ("elem", "poly", "series", "point", "val", "seq", "list", "roots")
KEYWORDS = ("set", "scenario") + BINDING_KINDS

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()\[\],=;])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # int, ident, op, newline, eof
    text: str
    line: int
    column: int


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, col, "a token")
        kind = m.lastgroup
        text = m.group()
        if kind == "newline" or (kind == "op" and text == ";"):
            tokens.append(Token("newline", text, line, col))
            if kind == "newline":
                line += 1
                line_start = m.end()
        elif kind in ("int", "ident", "op"):
            tokens.append(Token(kind, text, line, col))
        pos = m.end()
    tokens.append(Token("newline", "", line, pos - line_start + 1))
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# -- syntax tree ---------------------------------------------------------------

def _pos():
    return field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Num:
    value: int
    pos: tuple = _pos()


@dataclass(frozen=True)
class Name:
    id: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple
    kwargs: tuple = ()  # ((key, expr), ...)
    pos: tuple = _pos()


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    pos: tuple = _pos()


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    pos: tuple = _pos()


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: "Expr"
    pos: tuple = _pos()


@dataclass(frozen=True)
class ListExpr:
    items: tuple
    pos: tuple = _pos()


Expr = Union[Num, Name, Call, BinOp, Neg, Pow, ListExpr]


@dataclass(frozen=True)
class SetStmt:
    name: str
    expr: Expr
    pos: tuple = _pos()


@dataclass(frozen=True)
class Bind:
    kind: str
    name: str
    expr: Expr
    pos: tuple = _pos()


@dataclass(frozen=True)
class ScenarioStmt:
    name: str
    kwargs: tuple
    pos: tuple = _pos()


@dataclass(frozen=True)
class QueryStmt:
    call: Call
    pos: tuple = _pos()


Stmt = Union[SetStmt, Bind, ScenarioStmt, QueryStmt]


@dataclass(frozen=True)
class Script:
    statements: tuple


# -- parser --------------------------------------------------------------------

class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, expected: str, tok: Token | None = None):
        tok = tok or self.tok
        found = "end of line" if tok.kind == "newline" else (
            "end of input" if tok.kind == "eof" else repr(tok.text))
        raise ParseError(f"expected {expected}, found {found}", tok.line, tok.column, expected)

    def expect_op(self, text: str) -> Token:
        if self.tok.kind == "op" and self.tok.text == text:
            return self.advance()
        self.error(repr(text))

    def expect_ident(self, what: str = "an identifier") -> Token:
        if self.tok.kind == "ident":
            return self.advance()
        self.error(what)

    def at_op(self, *texts) -> bool:
        return self.tok.kind == "op" and self.tok.text in texts

    def script(self) -> Script:
        stmts = []
        while self.tok.kind != "eof":
            if self.tok.kind == "newline":
                self.advance()
                continue
            stmts.append(self.statement())
            if self.tok.kind != "newline":
                self.error("end of statement")
            self.advance()
        return Script(tuple(stmts))

    def statement(self) -> Stmt:
        tok = self.tok
        pos = (tok.line, tok.column)
        if tok.kind != "ident":
            self.error("a statement")
        if tok.text == "set":
            self.advance()
            name = self.expect_ident("a parameter name").text
            self.expect_op("=")
            return SetStmt(name, self.expr(), pos)
        if tok.text in BINDING_KINDS and self.tokens[self.i + 1].kind == "ident":
            self.advance()
            name_tok = self.advance()
            if name_tok.text in KEYWORDS or name_tok.text in _RESERVED:
                raise ParseError(f"{name_tok.text!r} is reserved", name_tok.line,
                                 name_tok.column, "a binding name")
            self.expect_op("=")
            return Bind(tok.text, name_tok.text, self.expr(), pos)
        if tok.text == "scenario":
            self.advance()
            name = self.expect_ident("a scenario name").text
            self.expect_op("(")
            kwargs = []
            if not self.at_op(")"):
                while True:
                    key = self.expect_ident("a parameter name").text
                    self.expect_op("=")
                    kwargs.append((key, self.expr()))
                    if not self.at_op(","):
                        break
                    self.advance()
            self.expect_op(")")
            return ScenarioStmt(name, tuple(kwargs), pos)
        expr = self.expr()
        if not isinstance(expr, Call):
            raise ParseError("a bare statement must be a query call", tok.line, tok.column,
                             "a query call")
        return QueryStmt(expr, pos)

    def expr(self) -> Expr:
        left = self.term()
        while self.at_op("+", "-"):
            op = self.advance()
            right = self.operand_after(op, self.term)
            left = BinOp(op.text, left, right, (op.line, op.column))
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.at_op("*", "/"):
            op = self.advance()
            right = self.operand_after(op, self.unary)
            left = BinOp(op.text, left, right, (op.line, op.column))
        return left

    def operand_after(self, op: Token, rule):
        if not self.starts_operand():
            raise ParseError(f"expected an operand after {op.text!r}", op.line, op.column,
                             "an operand")
        return rule()

    def starts_operand(self) -> bool:
        t = self.tok
        return t.kind in ("int", "ident") or (t.kind == "op" and t.text in ("(", "[", "-"))

    def unary(self) -> Expr:
        if self.at_op("-"):
            op = self.advance()
            return Neg(self.operand_after(op, self.unary), (op.line, op.column))
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at_op("^"):
            op = self.advance()
            t = self.tok
            if t.kind == "int":
                self.advance()
                exp = Num(int(t.text), (t.line, t.column))
            elif t.kind == "ident":
                self.advance()
                exp = Name(t.text, (t.line, t.column))
            elif self.at_op("("):
                self.advance()
                exp = self.expr()
                self.expect_op(")")
            else:
                raise ParseError("expected an exponent after '^'", op.line, op.column,
                                 "an integer, a name or a parenthesized exponent")
            return Pow(base, exp, (op.line, op.column))
        return base

    def atom(self) -> Expr:
        t = self.tok
        pos = (t.line, t.column)
        if t.kind == "int":
            self.advance()
            return Num(int(t.text), pos)
        if t.kind == "ident":
            self.advance()
            if self.at_op("("):
                self.advance()
                args, kwargs = [], []
                if not self.at_op(")"):
                    while True:
                        if (self.tok.kind == "ident" and self.tokens[self.i + 1].kind == "op"
                                and self.tokens[self.i + 1].text == "="):
                            key = self.advance().text
                            self.advance()
                            kwargs.append((key, self.expr()))
                        else:
                            if kwargs:
                                self.error("a keyword argument")
                            args.append(self.expr())
                        if not self.at_op(","):
                            break
                        self.advance()
                self.expect_op(")")
                return Call(t.text, tuple(args), tuple(kwargs), pos)
            return Name(t.text, pos)
        if self.at_op("("):
            self.advance()
            e = self.expr()
            self.expect_op(")")
            return e
        if self.at_op("["):
            self.advance()
            items = []
            if not self.at_op("]"):
                while True:
                    items.append(self.expr())
                    if not self.at_op(","):
                        break
                    self.advance()
            self.expect_op("]")
            return ListExpr(tuple(items), pos)
        self.error("an expression")


def parse_unchecked(source: str) -> Script:
    """Parse without the static identifier and type checks."""
    return _Parser(source).script()


def parse(source: str) -> Script:
    """Parse and statically check a script."""
    script = parse_unchecked(source)
    check(script)
    return script


# -- printer -------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(e) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Pow):
        return 4
    return 5


def pretty_expr(e: Expr) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Name):
        return e.id
    if isinstance(e, Call):
        parts = [pretty_expr(a) for a in e.args] + [f"{k}={pretty_expr(v)}" for k, v in e.kwargs]
        return f"{e.func}({', '.join(parts)})"
    if isinstance(e, ListExpr):
        return "[" + ", ".join(pretty_expr(a) for a in e.items) + "]"
    if isinstance(e, Neg):
        inner = pretty_expr(e.operand)
        return "-" + (f"({inner})" if _prec(e.operand) < 3 else inner)
    if isinstance(e, Pow):
        base = pretty_expr(e.base)
        if _prec(e.base) < 5:
            base = f"({base})"
        if isinstance(e.exponent, (Num, Name)):
            return f"{base}^{pretty_expr(e.exponent)}"
        return f"{base}^({pretty_expr(e.exponent)})"
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        left = pretty_expr(e.left)
        if _prec(e.left) < p:
            left = f"({left})"
        right = pretty_expr(e.right)
        if _prec(e.right) <= p:
            right = f"({right})"
        if e.op in "+-":
            return f"{left} {e.op} {right}"
        return f"{left}{e.op}{right}"
    raise TypeError(f"not an expression node: {e!r}")


def pretty_stmt(s: Stmt) -> str:
    if isinstance(s, SetStmt):
        return f"set {s.name} = {pretty_expr(s.expr)}"
    if isinstance(s, Bind):
        return f"{s.kind} {s.name} = {pretty_expr(s.expr)}"
    if isinstance(s, ScenarioStmt):
        args = ", ".join(f"{k}={pretty_expr(v)}" for k, v in s.kwargs)
        return f"scenario {s.name}({args})"
    if isinstance(s, QueryStmt):
        return pretty_expr(s.call)
    raise TypeError(f"not a statement: {s!r}")


def pretty(script: Script) -> str:
    return "".join(pretty_stmt(s) + "\n" for s in script.statements)


# -- static checks -------------------------------------------------------------

# Static types: num elem series point poly val seq list roots report any.
# A signature lists the accepted types per positional argument; "tmpl" marks
# generator templates where the stage index n is bound.

_RESERVED = ("x", "y", "t", "n", "sum")

_ELEMENTISH = ("num", "elem", "series", "point", "any")
_POLYISH = ("num", "elem", "poly", "any")
_NUMISH = ("num", "any")

SIGNATURES: dict[str, tuple] = {
    # constructions
    "monomial": ((_NUMISH,), "val"),
    "augment": ((("val",), _POLYISH, _NUMISH), "val"),
    "limit": ((("val",), "tmpl", "tmpl", _NUMISH), "val"),
    "hahn": ((("series", "point", "elem", "any"),), "val"),
    "truncation": ((("val",), _POLYISH), "val"),
    "eta": ((), "point"),
    "pcs": ((("list",),), "seq"),
    "roots": ((_POLYISH, ("list",)), "roots"),
    "hasse": ((_POLYISH, _NUMISH), "poly"),
    # value queries
    "eval": ((("val",), _POLYISH), "num"),
    "epsilon": ((("val",), _POLYISH), "num"),
    "delta": ((("roots",), _ELEMENTISH), "num"),
    "truncate": ((("val",), _POLYISH, _POLYISH), "num"),
    "show": ((None,), "report"),
    # report queries
    "eps_delta": ((("roots",), _ELEMENTISH, ("val",)), "report"),
    "decompose": ((("val",), ("list",), _POLYISH), "report"),
    "pcs_check": ((("seq",),), "report"),
    "is_limit": ((("seq",), None, ("val",)), "report"),
    "classify": ((("seq",), _POLYISH), "report"),
    "classify_type": ((("seq",), _NUMISH, ("list",)), "report"),
    "is_key": ((("val",), _POLYISH, ("list",)), "report"),
    "alpha_psi": ((("val",), _POLYISH, ("list",)), "report"),
    "limit_key": ((("val",), _POLYISH, ("list",), _POLYISH, ("list",)), "report"),
    "minimal_pair": ((_ELEMENTISH, _NUMISH, _NUMISH, ("list",), ("list",)), "report"),
    "validate": ((("val",),), "report"),
    "complete_on": ((("val",), ("list",), ("list",)), "report"),
    "limit_values": ((("val",), _POLYISH), "report"),
}
# minimum positional argument counts where trailing arguments are optional
_MIN_ARGS = {"limit": 3, "eps_delta": 2, "is_limit": 2}

QUERIES = tuple(k for k, (_, r) in SIGNATURES.items() if r in ("num", "report"))

_BIND_ACCEPTS = {
    "elem": ("num", "elem"),
    "poly": ("num", "elem", "poly"),
    "series": ("num", "elem", "series"),
    "point": ("num", "elem", "series", "point"),
    "val": ("val",),
    "seq": ("seq",),
    "list": ("list",),
    "roots": ("roots",),
}
_BIND_TYPE = {"elem": "elem", "poly": "poly", "series": "series", "point": "point",
              "val": "val", "seq": "seq", "list": "list", "roots": "roots"}


def _arith(op: str, a: str, b: str, pos) -> str:
    for side in (a, b):
        if side in ("val", "seq", "list", "roots", "report"):
            raise TypeMismatch(f"operator {op!r} does not apply to {side}", *pos,
                               expected="a number, element, series or polynomial", got=side)
    if "any" in (a, b):
        return "any"
    kinds = {a, b}
    if "poly" in kinds and kinds & {"series", "point"}:
        raise TypeMismatch(f"cannot combine a polynomial with a {(kinds - {'poly'}).pop()}",
                           *pos, expected="poly", got=(kinds - {"poly"}).pop())
    if op == "/" and "poly" in kinds:
        raise TypeMismatch("polynomials cannot be divided with '/'", *pos,
                           expected="a field element", got="poly")
    if "point" in kinds and op not in "+-":
        raise TypeMismatch(f"points only support + and -, not {op!r}", *pos,
                           expected="series", got="point")
    order = ["num", "elem", "series", "point", "poly"]
    return max(kinds, key=order.index)


class _Checker:
    def __init__(self):
        self.env: dict[str, str] = {}

    def run(self, script: Script):
        for stmt in script.statements:
            self.statement(stmt)

    def statement(self, s):
        if isinstance(s, SetStmt):
            t = self.expr(s.expr, frozenset())
            if t not in _NUMISH:
                raise TypeMismatch(f"parameter {s.name} must be a number", *s.pos,
                                   expected="num", got=t)
            self.env[s.name] = "num"
        elif isinstance(s, Bind):
            t = self.expr(s.expr, frozenset())
            if t != "any" and t not in _BIND_ACCEPTS[s.kind]:
                raise TypeMismatch(f"cannot bind a {t} as {s.kind} {s.name}", *s.pos,
                                   expected=s.kind, got=t)
            self.env[s.name] = _BIND_TYPE[s.kind]
        elif isinstance(s, ScenarioStmt):
            from .scenario import scenario_from_kwargs, scenario_source
            kwargs = {}
            for k, v in s.kwargs:
                kwargs[k] = _literal(v)
            sub = parse_unchecked(scenario_source(scenario_from_kwargs(s.name, kwargs, s.pos)))
            self.run(sub)
        elif isinstance(s, QueryStmt):
            self.call(s.call, frozenset(), statement=True)

    def expr(self, e, bound: frozenset) -> str:
        if isinstance(e, Num):
            return "num"
        if isinstance(e, Name):
            if e.id in ("x",):
                return "poly"
            if e.id == "y":
                return "elem"
            if e.id == "t":
                return "series"
            if e.id in bound:
                return "num"
            if e.id in self.env:
                return self.env[e.id]
            raise UndefinedIdentifier(e.id, *e.pos)
        if isinstance(e, ListExpr):
            for item in e.items:
                self.expr(item, bound)
            return "list"
        if isinstance(e, Neg):
            return _arith("-", "num", self.expr(e.operand, bound), e.pos)
        if isinstance(e, Pow):
            base = self.expr(e.base, bound)
            exp = self.expr(e.exponent, bound)
            if exp not in _NUMISH:
                raise TypeMismatch("exponents must be numbers", *e.pos, expected="num", got=exp)
            if base == "point":
                raise TypeMismatch("points cannot be raised to powers", *e.pos,
                                   expected="series", got="point")
            return _arith("^", base, "num", e.pos)
        if isinstance(e, BinOp):
            return _arith(e.op, self.expr(e.left, bound), self.expr(e.right, bound), e.pos)
        if isinstance(e, Call):
            return self.call(e, bound)
        raise TypeError(f"unknown node {e!r}")

    def call(self, c: Call, bound: frozenset, statement: bool = False) -> str:
        if c.func == "sum":
            if len(c.args) != 4 or not isinstance(c.args[0], Name):
                raise TypeMismatch("sum takes (index, lo, hi, body)", *c.pos,
                                   expected="sum(i, lo, hi, body)", got=f"{len(c.args)} arguments")
            inner = bound | {c.args[0].id}
            for a in c.args[1:3]:
                t = self.expr(a, bound)
                if t not in _NUMISH:
                    raise TypeMismatch("sum bounds must be numbers", *c.pos, expected="num", got=t)
            return self.expr(c.args[3], inner)
        if c.func not in SIGNATURES:
            raise UndefinedIdentifier(c.func, *c.pos)
        params, result = SIGNATURES[c.func]
        if c.kwargs:
            raise TypeMismatch(f"{c.func} takes no keyword arguments", *c.pos,
                               expected="positional arguments", got="keyword")
        lo = _MIN_ARGS.get(c.func, len(params))
        if not lo <= len(c.args) <= len(params):
            raise TypeMismatch(f"{c.func} takes {len(params)} arguments, got {len(c.args)}",
                               *c.pos, expected=f"{len(params)} arguments",
                               got=f"{len(c.args)} arguments")
        for arg, accepted in zip(c.args, params):
            if accepted == "tmpl":
                t = self.expr(arg, bound | {"n"})
                continue
            t = self.expr(arg, bound)
            if accepted is not None and t != "any" and t not in accepted:
                raise TypeMismatch(f"argument of {c.func} must be {' or '.join(accepted)}",
                                   *_node_pos(arg, c.pos), expected="/".join(accepted), got=t)
        if result == "report" and not statement:
            raise TypeMismatch(f"{c.func} produces a report and cannot be used in an expression",
                               *c.pos, expected="a value", got="report")
        return result


def _node_pos(e, default):
    return e.pos if getattr(e, "pos", (0, 0)) != (0, 0) else default


def _literal(e):
    """Evaluate a scenario argument: an integer, a rational or a name."""
    from fractions import Fraction
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Name):
        return e.id
    if isinstance(e, Neg):
        return -_literal(e.operand)
    if isinstance(e, BinOp) and e.op == "/":
        return Fraction(_literal(e.left)) / Fraction(_literal(e.right))
    raise TypeMismatch("scenario parameters must be literals", *e.pos,
                       expected="a rational literal or a name", got=type(e).__name__)


def check(script: Script) -> None:
    """Raise UndefinedIdentifier or TypeMismatch for the first static error."""
    _Checker().run(script)
