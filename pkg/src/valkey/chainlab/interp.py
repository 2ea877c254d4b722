"""Execution of parsed scripts into JSON-ready results."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from ..errors import InsufficientPrecision, InvalidElement, ScriptError, ValkeyError
from ..hahn import AlgebraicPoint, HahnApprox, KElem, artin_schreier_root
from ..keypoly import (
    MinimalPairQuery, PcsPrefix, RootData, alpha_psi_sampled, check_eps_eq_delta,
    classify_along_pcs, classify_pcs_type, delta, is_key_sampled, is_limit_of,
    is_minimal_pair_sampled, limit_key_report, pcs_check,
)
from ..polyring import PolyK, hasse_derivative
from ..valgroup import INF, gv_str
from ..valuation import (
    AugmentedValuation, ChainGenerator, HahnValuation, LimitValuation, MonomialValuation,
    TruncatedValuation, Unstable, ValChain, Valuation, decompose, epsilon, eval_limit,
    is_complete_on, truncate, validate_chain,
)
from ..valuation.base import DEFAULT_N_MAX
from .dsl import (
    BinOp, Bind, Call, ListExpr, Name, Neg, Num, Pow, QueryStmt, ScenarioStmt, Script,
    SetStmt, _literal, parse, pretty_expr, pretty_stmt,
)

__all__ = ["Interpreter", "run", "run_source", "to_json_text", "chain_of", "render"]

DEFAULT_PRECISION = Fraction(8)


class RuntimeScriptError(ScriptError):
    pass


@dataclass
class _Failed:
    """Placeholder for a binding whose construction raised."""

    name: str
    reason: str


def chain_of(v: Valuation) -> ValChain:
    """Rebuild the chain of levels ending at ``v``."""
    levels = []
    cur = v
    while True:
        levels.append(cur)
        if isinstance(cur, AugmentedValuation):
            cur = cur.prev
        elif isinstance(cur, LimitValuation):
            cur = cur.generator.base
        else:
            break
    if not isinstance(cur, MonomialValuation):
        raise RuntimeScriptError(f"{v.describe()} is not built on a monomial valuation")
    return ValChain(tuple(reversed(levels)))


def render(v) -> Any:
    """JSON form of a runtime value; exact values become strings."""
    if v is INF or isinstance(v, Fraction):
        return gv_str(v)
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, (KElem, HahnApprox, AlgebraicPoint, PolyK)):
        return str(v)
    if isinstance(v, Valuation):
        return v.describe()
    if isinstance(v, PcsPrefix):
        return {"terms": [str(a) for a in v.terms], "gammas": [gv_str(g) for g in v.diffs]}
    if isinstance(v, RootData):
        return {"poly": str(v.poly), "roots": [str(r) for r in v.roots]}
    if isinstance(v, (list, tuple)):
        return [render(a) for a in v]
    if isinstance(v, dict):
        return {k: render(a) for k, a in v.items()}
    if hasattr(v, "to_json"):
        return v.to_json()
    return str(v)


class Interpreter:
    """Executes statements in order, collecting one result per query."""

    def __init__(self):
        self.params: dict[str, Any] = {"p": 2, "precision": DEFAULT_PRECISION,
                                       "n_max": DEFAULT_N_MAX}
        self.env: dict[str, Any] = {}
        self.results: list[dict] = []
        self._eta: dict[int, Any] = {}

    @property
    def p(self) -> int:
        return int(self.params["p"])

    # -- statements ------------------------------------------------------

    def run(self, script: Script) -> list[dict]:
        for stmt in script.statements:
            self.statement(stmt)
        return self.results

    def statement(self, s):
        if isinstance(s, SetStmt):
            value = self.eval(s.expr, {})
            self.params[s.name] = value
            self.env[s.name] = value
            return
        if isinstance(s, ScenarioStmt):
            from .scenario import scenario_from_kwargs, scenario_source
            kwargs = {k: _literal(v) for k, v in s.kwargs}
            try:
                sub = parse(scenario_source(scenario_from_kwargs(s.name, kwargs, s.pos)))
            except ValkeyError as exc:
                self._error(pretty_stmt(s), s.pos, exc)
                return
            self.run(sub)
            return
        if isinstance(s, Bind):
            try:
                value = self._coerce_binding(s.kind, self.eval(s.expr, {}))
            except ValkeyError as exc:
                self.env[s.name] = _Failed(s.name, str(exc))
                self._error(pretty_stmt(s), s.pos, exc)
                return
            self.env[s.name] = value
            return
        if isinstance(s, QueryStmt):
            text = pretty_stmt(s)
            try:
                kind, value = self.query(s.call)
            except (ValkeyError, ArithmeticError) as exc:
                self._error(text, s.pos, exc)
                return
            self.results.append({"query": text, "status": "ok", kind: render(value)})

    def _error(self, text: str, pos, exc: Exception):
        line, col = getattr(exc, "line", 0) or pos[0], getattr(exc, "column", 0) or pos[1]
        report = {"error": type(exc).__name__,
                  "message": getattr(exc, "message", None) or str(exc),
                  "line": line, "column": col}
        if isinstance(exc, InsufficientPrecision):
            report["precision"] = render(exc.precision)
            report["hint"] = "raise the precision (set precision = ...) and rerun"
        if getattr(exc, "values", None):
            report["values"] = render(list(exc.values))
        if getattr(exc, "witness", None) is not None:
            report["witness"] = render(exc.witness)
        self.results.append({"query": text, "status": "error", "report": report})

    def _coerce_binding(self, kind: str, v):
        if kind == "elem":
            return self.to_elem(v)
        if kind == "poly":
            return v if isinstance(v, PolyK) else PolyK.const(self.to_elem(v))
        if kind == "series":
            return self.to_series(v)
        if kind == "point":
            return v if isinstance(v, AlgebraicPoint) else self.to_series(v)
        expected = {"val": Valuation, "seq": PcsPrefix, "list": list, "roots": RootData}[kind]
        if not isinstance(v, expected):
            raise RuntimeScriptError(f"value is not a {kind}")
        return v

    # -- coercions -------------------------------------------------------

    def to_elem(self, v) -> KElem:
        p = self.p
        if isinstance(v, KElem):
            return v
        if isinstance(v, Fraction):
            if v.denominator % p == 0:
                raise InvalidElement(f"{v} has no image in characteristic {p}")
            return KElem.from_int(p, v.numerator) / KElem.from_int(p, v.denominator)
        if isinstance(v, PolyK) and v.is_constant():
            return v[0]
        raise RuntimeScriptError(f"{render(v)} is not an element of K")

    def to_series(self, v) -> HahnApprox:
        if isinstance(v, HahnApprox):
            return v
        e = self.to_elem(v)
        if e.den_is_one:
            return e.iota()
        return e.iota(self.params["precision"])

    def _rank(self, v) -> int:
        if isinstance(v, Fraction) or v is INF:
            return 0
        if isinstance(v, KElem):
            return 1
        if isinstance(v, PolyK):
            return 4
        if isinstance(v, HahnApprox):
            return 2
        if isinstance(v, AlgebraicPoint):
            return 3
        raise RuntimeScriptError(f"arithmetic does not apply to {type(v).__name__}")

    def _lift(self, v, rank: int):
        if rank == 1:
            return self.to_elem(v)
        if rank == 2:
            return self.to_series(v)
        if rank == 3:
            return v if isinstance(v, AlgebraicPoint) else self.to_series(v)
        if rank == 4:
            return v if isinstance(v, PolyK) else PolyK.const(self.to_elem(v))
        return v

    # -- expressions -----------------------------------------------------

    def eval(self, e, local: dict):
        if isinstance(e, Num):
            return Fraction(e.value)
        if isinstance(e, Name):
            return self._name(e, local)
        if isinstance(e, ListExpr):
            return [self.eval(a, local) for a in e.items]
        if isinstance(e, Neg):
            v = self.eval(e.operand, local)
            self._rank(v)
            return -v
        if isinstance(e, Pow):
            return self._pow(self.eval(e.base, local), self.eval(e.exponent, local), e)
        if isinstance(e, BinOp):
            return self._binop(e.op, self.eval(e.left, local), self.eval(e.right, local), e)
        if isinstance(e, Call):
            return self._call(e, local)
        raise RuntimeScriptError(f"cannot evaluate {e!r}")

    def _name(self, e: Name, local: dict):
        p = self.p
        if e.id in local:
            return local[e.id]
        if e.id == "x":
            return PolyK.x(p)
        if e.id == "y":
            return KElem.y(p, 1)
        if e.id == "t":
            return HahnApprox.monomial(p, 1)
        if e.id in self.env:
            v = self.env[e.id]
            if isinstance(v, _Failed):
                raise RuntimeScriptError(f"{e.id} was not built: {v.reason}", *e.pos)
            return v
        if e.id in self.params:
            return self.params[e.id]
        raise RuntimeScriptError(f"undefined identifier {e.id!r}", *e.pos)

    def _binop(self, op: str, a, b, node):
        ra, rb = self._rank(a), self._rank(b)
        if ra == 0 and rb == 0:
            if a is INF or b is INF:
                raise RuntimeScriptError("arithmetic on infinity", *node.pos)
            if op == "/" and b == 0:
                raise RuntimeScriptError("division by zero", *node.pos)
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            return a * b if op == "*" else a / b
        r = max(ra, rb)
        if r == 4 and 2 in (ra, rb) or r == 4 and 3 in (ra, rb):
            raise RuntimeScriptError("cannot combine a polynomial with a series", *node.pos)
        a, b = self._lift(a, r), self._lift(b, r)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            if r == 3:
                raise RuntimeScriptError("points only support + and -", *node.pos)
            return a * b
        if r == 4:
            raise RuntimeScriptError("polynomials cannot be divided with '/'", *node.pos)
        if r == 2:
            return a * b.invert(self.params["precision"])
        if r == 3:
            raise RuntimeScriptError("points only support + and -", *node.pos)
        return a / b

    def _pow(self, base, exp, node):
        if not isinstance(exp, Fraction):
            raise RuntimeScriptError("exponents must be rational numbers", *node.pos)
        r = self._rank(base)
        p = self.p
        if r == 0:
            if exp.denominator != 1:
                raise RuntimeScriptError("rational powers of numbers are not supported", *node.pos)
            return base ** int(exp)
        if r == 4:
            if exp.denominator != 1 or exp < 0:
                raise RuntimeScriptError("polynomial powers must be nonnegative integers", *node.pos)
            return base ** int(exp)
        if r == 1:
            return _elem_pow(base, exp, p, node)
        if r == 2:
            if exp.denominator == 1:
                if exp < 0:
                    return base.invert(self.params["precision"]) ** int(-exp)
                return base ** int(exp)
            if len(base.terms) == 1 and base.is_exact and base.terms[0][1] == 1:
                return HahnApprox.monomial(p, base.terms[0][0] * exp)
            raise RuntimeScriptError("rational powers need a monomial series", *node.pos)
        raise RuntimeScriptError("points cannot be raised to powers", *node.pos)

    def _call(self, c: Call, local: dict):
        f = c.func
        if f == "sum":
            var = c.args[0].id
            lo, hi = self.eval(c.args[1], local), self.eval(c.args[2], local)
            total = Fraction(0)
            for i in range(int(lo), int(hi) + 1):
                inner = dict(local)
                inner[var] = Fraction(i)
                total = self._binop("+", total, self.eval(c.args[3], inner), c)
            return total
        if f == "limit":
            return self._limit(c, local)
        args = [self.eval(a, local) for a in c.args]
        p = self.p
        if f == "monomial":
            return MonomialValuation(p, args[0])
        if f == "augment":
            return AugmentedValuation(args[0], self._poly(args[1]), args[2])
        if f == "hahn":
            point = args[0] if isinstance(args[0], AlgebraicPoint) else self.to_series(args[0])
            return HahnValuation(p, point, self.params["precision"])
        if f == "truncation":
            return TruncatedValuation(args[0], self._poly(args[1]))
        if f == "eta":
            if p not in self._eta:
                self._eta[p] = artin_schreier_root(p)
            return AlgebraicPoint(self._eta[p], HahnApprox.zero(p))
        if f == "pcs":
            return PcsPrefix([self._element(a) for a in args[0]])
        if f == "roots":
            return RootData(self._poly(args[0]), [self._element(a) for a in args[1]])
        if f == "hasse":
            return hasse_derivative(self._poly(args[0]), int(args[1]))
        if f == "eval":
            return args[0](self._poly(args[1]))
        if f == "epsilon":
            return epsilon(args[0], self._poly(args[1]))
        if f == "delta":
            return delta(args[0], self._element(args[1]))
        if f == "truncate":
            return truncate(args[0], self._poly(args[1]), self._poly(args[2]))
        raise RuntimeScriptError(f"{f} is a query, not a value", *c.pos)

    def _limit(self, c: Call, local: dict):
        base = self.eval(c.args[0], local)
        if not isinstance(base, Valuation):
            raise RuntimeScriptError("limit needs a valuation to build on", *c.pos)
        n_max = int(self.eval(c.args[3], local)) if len(c.args) > 3 else int(self.params["n_max"])
        phi_t, gamma_t = c.args[1], c.args[2]

        def rule(n: int):
            inner = dict(local)
            inner["n"] = Fraction(n)
            return self._poly(self.eval(phi_t, inner)), self.eval(gamma_t, inner)

        name = f"{pretty_expr(phi_t)} = {pretty_expr(gamma_t)}"
        return LimitValuation(ChainGenerator(base, rule, n_max, name))

    def _poly(self, v) -> PolyK:
        if isinstance(v, PolyK):
            return v
        return PolyK.const(self.to_elem(v))

    def _element(self, v):
        if isinstance(v, (KElem, AlgebraicPoint, HahnApprox)):
            return v
        return self.to_elem(v)

    # -- queries ---------------------------------------------------------

    def query(self, c: Call) -> tuple[str, Any]:
        f = c.func
        if f in ("eval", "epsilon", "delta", "truncate"):
            return "value", self._call(c, {})
        args = [self.eval(a, {}) for a in c.args]
        if f == "show":
            return "value", args[0]
        if f == "eps_delta":
            ref = args[2] if len(args) > 2 else None
            return "report", check_eps_eq_delta(args[0], self._element(args[1]), ref)
        if f == "decompose":
            keys = [self._poly(q) for q in args[1]]
            target = self._poly(args[2])
            terms = decompose(args[0], keys, target)
            names = [pretty_expr(a) for a in c.args[1].items] if isinstance(c.args[1], ListExpr) \
                else [str(q) for q in keys]
            return "report", {"poly": str(target), "value": gv_str(args[0](target)),
                              "terms": [t.to_json(names) for t in terms]}
        if f == "pcs_check":
            return "report", pcs_check(args[0])
        if f == "is_limit":
            ref = args[2] if len(args) > 2 else None
            a = args[1] if isinstance(args[1], PolyK) else self._element(args[1])
            return "value", is_limit_of(args[0], a, ref)
        if f == "classify":
            return "report", classify_along_pcs(args[0], self._poly(args[1]))
        if f == "classify_type":
            return "report", classify_pcs_type(args[0], int(args[1]),
                                               [self.to_elem(a) for a in args[2]])
        if f == "is_key":
            return "report", is_key_sampled(args[0], self._poly(args[1]),
                                            [self._poly(q) for q in args[2]])
        if f == "alpha_psi":
            return "report", alpha_psi_sampled(args[0], self._poly(args[1]),
                                               [self._poly(q) for q in args[2]])
        if f == "limit_key":
            return "report", limit_key_report(args[0], self._poly(args[1]),
                                              [self._poly(q) for q in args[2]],
                                              self._poly(args[3]),
                                              [self._poly(q) for q in args[4]])
        if f == "minimal_pair":
            pool, degrees = args[3], args[4]
            if len(pool) != len(degrees):
                raise RuntimeScriptError("minimal_pair needs one declared degree per pool element",
                                         *c.pos)
            q = MinimalPairQuery(self._element(args[0]), _int(args[1]), args[2],
                                 [(self._element(b), _int(d)) for b, d in zip(pool, degrees)])
            return "report", is_minimal_pair_sampled(q)
        if f == "validate":
            return "report", validate_chain(chain_of(args[0]))
        if f == "complete_on":
            return "report", is_complete_on(args[0], [self._poly(q) for q in args[1]],
                                            [self._poly(q) for q in args[2]])
        if f == "limit_values":
            v = args[0]
            if not isinstance(v, LimitValuation):
                raise RuntimeScriptError("limit_values needs a limit valuation", *c.pos)
            r = eval_limit(v.generator, self._poly(args[1]))
            if isinstance(r, Unstable):
                return "report", {"stable": False, "values": [gv_str(x) for x in r.values]}
            return "report", {"stable": True, "value": gv_str(r)}
        raise RuntimeScriptError(f"unknown query {f}", *c.pos)


def _int(v) -> int:
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    raise RuntimeScriptError(f"expected an integer, got {render(v)}")


def _elem_pow(base: KElem, exp: Fraction, p: int, node) -> KElem:
    den = exp.denominator
    k = 0
    while den % p == 0:
        den //= p
        k += 1
    if den != 1:
        raise InvalidElement(f"exponent {exp} leaves the perfect hull (denominator not a power of {p})")
    out = base
    for _ in range(k):
        out = out.pth_root()
    return out ** exp.numerator


def run(script: Script) -> list[dict]:
    return Interpreter().run(script)


def run_source(source: str) -> list[dict]:
    return run(parse(source))


def to_json_text(results: list[dict]) -> str:
    return json.dumps(results, indent=2, ensure_ascii=False) + "\n"
