"""Scripts that rebuild the worked examples, with their standard query battery."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..errors import InvalidParameters
from ..families import check_prime, second_exponent
from .dsl import Script, parse

__all__ = ["Scenario", "SCENARIOS", "N_MAX", "scenario_from_kwargs", "scenario_source",
           "generate_scenario"]

SCENARIOS = ("section6_first", "section6_second", "section3_example")
N_MAX = 20


@dataclass(frozen=True)
class Scenario:
    """Parameters of a generated scenario.

    ``n`` is the number of explicit stages written out, ``n_max`` the cap
    for limit evaluation, ``pool`` the number of partial sums placed in the
    coefficient pool.
    """

    name: str
    p: int = 2
    n: int = 3
    gamma: Fraction = Fraction(0)
    gamma_prime: Optional[Fraction] = None
    variant: str = "i"
    n_max: int = N_MAX
    pool: int = 3
    precision: Optional[Fraction] = None

    def validate(self) -> None:
        if self.name not in SCENARIOS:
            raise InvalidParameters(f"unknown scenario {self.name!r}; choose from {', '.join(SCENARIOS)}")
        check_prime(self.p)
        if not 1 <= self.n <= self.n_max:
            raise InvalidParameters(f"n must lie in 1..{self.n_max}, got {self.n}")
        if not 1 <= self.n_max <= N_MAX:
            raise InvalidParameters(f"n_max must lie in 1..{N_MAX}, got {self.n_max}")
        if self.gamma < 0:
            raise InvalidParameters(f"gamma must be nonnegative, got {self.gamma}")
        if self.pool < 0:
            raise InvalidParameters("pool size must be nonnegative")
        if self.name == "section6_second":
            if self.gamma != 0:
                raise InvalidParameters("the second chain is built over gamma = 0")
            if self.gamma_prime is None:
                raise InvalidParameters("section6_second needs gamma_prime")
            bound = Fraction(self.p, self.p - 1)
            if self.gamma_prime <= bound:
                raise InvalidParameters(f"gamma_prime must exceed p/(p-1) = {bound}, got {self.gamma_prime}")
        if self.name == "section3_example" and self.variant not in ("i", "ii"):
            raise InvalidParameters(f"variant must be i or ii, got {self.variant!r}")


def scenario_from_kwargs(name: str, kwargs: dict, pos=(0, 0)) -> Scenario:
    fields = {}
    for key, value in kwargs.items():
        if key in ("p", "n", "n_max", "pool"):
            if Fraction(value).denominator != 1:
                raise InvalidParameters(f"{key} must be an integer")
            fields[key] = int(value)
        elif key in ("gamma", "gamma_prime", "precision"):
            fields[key] = Fraction(value)
        elif key == "variant":
            fields[key] = str(value)
        else:
            raise InvalidParameters(f"unknown scenario parameter {key!r}")
    s = Scenario(name, **fields)
    s.validate()
    return s


def _q(r) -> str:
    """A rational as DSL source."""
    r = Fraction(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def _y(e) -> str:
    e = Fraction(e)
    if e == 1:
        return "y"
    if e.denominator == 1 and e > 0:
        return f"y^{e.numerator}"
    return f"y^({_q(e)})"


class _Writer:
    def __init__(self):
        self.lines: list[str] = []

    def __call__(self, line: str = ""):
        self.lines.append(line)

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _first_chain(w: _Writer, s: Scenario, gamma: Fraction):
    p, n = s.p, s.n
    w(f"set p = {p}")
    w(f"set n_max = {s.n_max}")
    w(f"set gamma = {_q(gamma)}")
    if s.precision is not None:
        w(f"set precision = {_q(s.precision)}")
    w()
    w("# partial sums a_k of eta and the chain nu_1 < nu_2 < ...")
    w("elem a0 = 0")
    for k in range(1, n + 1):
        w(f"elem a{k} = " + " + ".join(_y(Fraction(-1, p ** i)) for i in range(1, k + 1)))
    w("poly phi1 = x")
    w(f"val v1 = monomial({_q(Fraction(-1, p))})")
    for k in range(1, n + 1):
        w(f"poly phi{k + 1} = x - a{k}")
        w(f"val v{k + 1} = augment(v{k}, phi{k + 1}, {_q(Fraction(-1, p ** (k + 1)))})")
    w()
    w("# the limit key and the limit-augmented stage")
    w(f"poly phiw = x^{p} - x - y^(-1)")
    w("val vw = limit(v1, x - sum(i, 1, n, y^(-1/p^i)), -1/p^(n + 1), n_max)")
    w("val vw1 = augment(vw, phiw, gamma)")
    w()
    w("# pools")
    terms = ", ".join(f"a{k}" for k in range(n + 1))
    w(f"seq apcs = pcs([{terms}])")
    w("list keys = [" + ", ".join(f"phi{k}" for k in range(1, n + 2)) + ", phiw]")
    cpool = ["0", "-1", "-y^(-1)"] + [f"a{k}" for k in range(1, min(s.pool, n) + 1)]
    w("list cpool = [" + ", ".join(cpool) + "]")
    lin = [f"phi{k}" for k in range(1, n + 2)]
    lin += [f"x - a{k} - {_y(Fraction(1, p))}" for k in range(1, min(s.pool, n) + 1)]
    lin += [f"x - a{k} - {_y(Fraction(-1, p ** (k + 1)))}" for k in range(1, min(s.pool, n) + 1)]
    w("list linpool = [" + ", ".join(lin) + "]")
    w(f"list sample = [x, phi2 + y, phiw + {_y(Fraction(-1, p))}, (x - 1)*phi2, phiw*phi2 + y, "
      "x^2 + y^(-1)*x + 1, phiw^2 - y*phiw]")


def _first_battery(w: _Writer, s: Scenario, gamma: Fraction):
    p, n = s.p, s.n
    w()
    w("# defining values echo back; the limit key climbs towards 0")
    for k in range(1, n + 2):
        w(f"eval(v{k}, phi{k})")
    for k in range(1, n + 2):
        w(f"eval(v{k}, phiw)")
    w("limit_values(vw, phiw)")
    w("validate(vw1)")
    w("eval(vw1, phiw)")
    w("epsilon(vw1, phiw)")
    w()
    w("# the partial sums form a pcs of algebraic type with limit x")
    w("pcs_check(apcs)")
    w("is_limit(apcs, x, vw)")
    w("classify(apcs, x)")
    w("classify(apcs, phiw)")
    w("classify_type(apcs, p, cpool)")
    if p > 2:
        w("classify_type(apcs, p - 1, cpool)")
    else:
        w("classify_type(apcs, 1, cpool)")
    w()
    w("# key polynomial checks")
    if n >= 2:
        w("alpha_psi(vw, phi2, [phi3, x, y^(-1)])")
    w("limit_key(vw1, x, [" + ", ".join(f"phi{k}" for k in range(2, n + 2)) + "], phiw, linpool)")
    w("is_key(vw1, phiw, linpool)")
    for k in range(1, min(4, n) + 1):
        w(f"is_key(vw1, phi{k + 1}, linpool)")
    sums = ", ".join(f"a{k}" for k in range(1, n + 1))
    ones = ", ".join("1" for _ in range(n))
    for k in range(1, min(4, n) + 1):
        w(f"minimal_pair(a{k}, 1, {_q(Fraction(-1, p ** (k + 1)))}, [{sums}], [{ones}])")
    w(f"minimal_pair(eta(), p, epsilon(vw1, phiw), [{sums}], [{ones}])")
    w("complete_on(vw1, keys, sample)")
    w("decompose(vw1, keys, phiw*phi2 + y)")
    w("decompose(vw1, keys, phiw^2 - y*phiw)")
    if gamma > 0:
        w()
        w("# a Hahn point realizing nu_(w+1)")
        w("point etap = eta() + t^(gamma)")
        w("val mu = hahn(etap)")
        w("eval(mu, phiw)")
        roots = ", ".join(["eta()"] + [f"eta() + {j}" for j in range(1, p)])
        w(f"roots rw = roots(phiw, [{roots}])")
        w("delta(rw, etap)")
        w("eps_delta(rw, etap, vw1)")


def _second(w: _Writer, s: Scenario):
    p, n = s.p, s.n
    w()
    w("# second chain over nu_(w+1) with gamma = 0")
    w(f"set gamma_prime = {_q(s.gamma_prime)}")
    prev = "vw1"
    for k in range(1, n + 1):
        expr = "phiw - 1" + "".join(f" - {_y(second_exponent(p, i))}" for i in range(1, k))
        w(f"poly psi{k} = {expr}")
        w(f"val u{k} = augment({prev}, psi{k}, {_q(second_exponent(p, k))})")
        prev = f"u{k}"
    w("val uw = limit(vw1, phiw - 1 - sum(i, 1, n - 1, y^((p^i - 1)/((p - 1)*p^i))), "
      "(p^n - 1)/((p - 1)*p^n), n_max)")
    w(f"poly phi2w = phiw^{p} - y*phiw - 1")
    w("val u2w1 = augment(uw, phi2w, gamma_prime)")
    w("list keys2 = [" + ", ".join(["x", "phiw"] + [f"psi{k}" for k in range(1, n + 1)])
      + ", phi2w]")
    w("list deg_p_pool = [phiw, " + ", ".join(f"psi{k}" for k in range(1, n + 1)) + "]")
    w("list sample2 = [phiw, psi1 + y, phi2w + y, phiw*psi1, x*phi2w + phiw]")
    w()
    for k in range(1, n + 1):
        w(f"eval(u{k}, psi{k})")
    for k in range(1, n + 1):
        w(f"eval(u{k}, phi2w)")
    w("limit_values(uw, phi2w)")
    w("validate(u2w1)")
    w("eval(u2w1, phi2w)")
    w("epsilon(u2w1, phi2w)")
    w("is_key(u2w1, phi2w, deg_p_pool)")
    w("complete_on(u2w1, keys2, sample2)")
    w("decompose(u2w1, keys2, x*phi2w + phiw)")


def _section3(w: _Writer, s: Scenario):
    w(f"set p = {s.p}")
    if s.precision is not None:
        w(f"set precision = {_q(s.precision)}")
    w()
    w("# a cubic with prescribed root distances from eta'")
    w("series etap = t + t^2 + t^3 + t^4")
    w("elem a1 = 0")
    w("elem a2 = y")
    w("elem a3 = y + y^2" if s.variant == "i" else "elem a3 = y + y^3")
    w("poly f = (x - a1)*(x - a2)*(x - a3)")
    w("roots rf = roots(f, [a1, a2, a3])")
    w("val mu = hahn(etap)")
    w()
    w("eval(mu, f)")
    for b in (1, 2, 3):
        w(f"eval(mu, hasse(f, {b}))")
    w("epsilon(mu, f)")
    w("delta(rf, etap)")
    w("eps_delta(rf, etap, mu)")


def scenario_source(s: Scenario) -> str:
    """DSL source text for a validated scenario."""
    s.validate()
    w = _Writer()
    if s.name == "section3_example":
        w(f"# distances of roots from a Hahn point, variant ({s.variant})")
        _section3(w, s)
    elif s.name == "section6_first":
        w(f"# Artin-Schreier first chain, p = {s.p}, {s.n} explicit stages")
        _first_chain(w, s, s.gamma)
        _first_battery(w, s, s.gamma)
    else:
        w(f"# Artin-Schreier second chain, p = {s.p}, {s.n} explicit stages")
        _first_chain(w, s, Fraction(0))
        w("validate(vw1)")
        w("eval(vw1, phiw)")
        _second(w, s)
    return w.text()


def generate_scenario(s: Scenario) -> Script:
    return parse(scenario_source(s))
