import io
import json
from contextlib import redirect_stdout
from fractions import Fraction

import pytest

from valkey.chainlab import (
    SCENARIOS, Scenario, chain_of, generate_scenario, parse, parse_unchecked, pretty, run,
    run_source, scenario_source, to_json_text,
)
from valkey.chainlab.cli import main
from valkey.chainlab.dsl import Bind, Call, Name, Num, BinOp, Neg
from valkey.chainlab.interp import Interpreter
from valkey.errors import InvalidParameters, ParseError, TypeMismatch, UndefinedIdentifier
from valkey.valuation import validate_chain


def cli(*argv):
    out = io.StringIO()
    with redirect_stdout(out):
        code = main(list(argv))
    return code, out.getvalue()


# -- parsing -------------------------------------------------------------------

def test_monomial_binding():
    (stmt,) = parse("val v1 = monomial(-1/2)").statements
    assert stmt == Bind("val", "v1", Call("monomial", (BinOp("/", Neg(Num(1)), Num(2)),)))


def test_polynomial_binding():
    (stmt,) = parse("poly phi2 = x - y^(-1/2)").statements
    assert stmt.kind == "poly" and stmt.name == "phi2"
    assert isinstance(stmt.expr, BinOp) and stmt.expr.left == Name("x")


def test_stray_slash_is_a_parse_error():
    src = "val v1 = monomial(-1/2)\npoly phi2 = x - y^(-1/2)\nval v2 = augment(v1, phi2, -1/3/)"
    with pytest.raises(ParseError) as err:
        parse(src)
    assert err.value.line == 3
    assert err.value.column == 32  # the stray slash
    assert "operand" in err.value.expected


def test_static_errors():
    with pytest.raises(UndefinedIdentifier) as err:
        parse("val v = augment(v0, x, 1)")
    assert err.value.name == "v0"
    with pytest.raises(TypeMismatch):
        parse("poly f = x\nval v = augment(f, x, 1)")
    with pytest.raises(TypeMismatch):
        parse("val v = monomial(0)\nval w = truncation(v, monomial(1))")


def test_empty_script():
    assert run(parse("")) == []
    assert run_source("# only a comment\n\n") == []
    assert to_json_text([]) == "[]\n"


@pytest.mark.parametrize("name,kwargs", [
    ("section6_first", {"p": 2, "n": 4, "gamma": Fraction(1, 3)}),
    ("section6_first", {"p": 3, "n": 3}),
    ("section6_second", {"p": 2, "n": 3, "gamma_prime": Fraction(3)}),
    ("section3_example", {"p": 3, "variant": "ii"}),
])
def test_pretty_printing_round_trips(name, kwargs):
    script = parse(scenario_source(Scenario(name, **kwargs)))
    again = parse(pretty(script))
    assert again == script
    assert pretty(again) == pretty(script)


def test_pretty_printing_keeps_precedence():
    src = "poly f = (x - 1)*(x + y^(-1/2)) - -x^2\nelem e = y^((2^3 - 1)/(1*2^3))"
    script = parse_unchecked(src)
    assert parse_unchecked(pretty(script)) == script


# -- running -------------------------------------------------------------------

def test_eval_of_the_limit_key_under_the_second_stage():
    src = """set p = 2
val v1 = monomial(-1/2)
poly phi2 = x - y^(-1/2)
val v2 = augment(v1, phi2, -1/4)
eval(v2, x^2 - x - y^(-1))
"""
    assert run_source(src) == [{"query": "eval(v2, x^2 - x - y^(-1))", "status": "ok", "value": "-1/2"}]


def test_epsilon_of_the_cubic():
    results = run(generate_scenario(Scenario("section3_example", p=2)))
    eps = [r for r in results if r["query"] == "epsilon(mu, f)"]
    assert eps == [{"query": "epsilon(mu, f)", "status": "ok", "value": "3"}]


def test_runtime_errors_carry_positions():
    src = "set p = 2\nval v = monomial(0)\nval w = augment(v, x, -1)\neval(w, x)\n"
    results = run_source(src)
    assert [r["status"] for r in results] == ["error", "error"]
    first = results[0]["report"]
    assert first["error"] == "InvalidAugmentation"
    assert (first["line"], first["column"]) == (3, 1)


def test_unstable_limit_is_reported_with_its_values():
    src = ("set p = 2\nval v1 = monomial(-1/2)\n"
           "val vw = limit(v1, x - sum(i, 1, n, y^(-1/2^i)), -1/2^(n + 1), 5)\n"
           "eval(vw, x^2 - x - y^(-1))\n")
    (r,) = run_source(src)
    assert r["status"] == "error"
    assert r["report"]["error"] == "UnstableLimit"
    assert r["report"]["values"] == ["-1", "-1/2", "-1/4", "-1/8", "-1/16", "-1/32"]


def test_runs_are_deterministic():
    src = scenario_source(Scenario("section6_first", p=2, n=3, gamma=Fraction(1, 3)))
    assert to_json_text(run_source(src)) == to_json_text(run_source(src))


def test_scenario_statement_expands_inline():
    results = run_source("scenario section3_example(p = 2, variant = i)\n")
    assert any(r["query"] == "epsilon(mu, f)" and r["value"] == "3" for r in results)


# -- scenarios -----------------------------------------------------------------

def test_first_scenario_keys_and_values():
    src = scenario_source(Scenario("section6_first", p=2, n=3))
    assert "poly phi2 = x - a1" in src
    assert "elem a3 = y^(-1/2) + y^(-1/4) + y^(-1/8)" in src
    for k, g in ((2, "-1/4"), (3, "-1/8"), (4, "-1/16")):
        assert f"val v{k} = augment(v{k - 1}, phi{k}, {g})" in src


def test_second_scenario_includes_the_second_limit_key():
    src = scenario_source(Scenario("section6_second", p=2, n=3, gamma_prime=Fraction(3)))
    assert "poly phi2w = phiw^2 - y*phiw - 1" in src
    with pytest.raises(InvalidParameters):
        scenario_source(Scenario("section6_second", p=2, n=3, gamma_prime=Fraction(2)))


@pytest.mark.parametrize("bad", [
    {"name": "section6_first", "p": 4},
    {"name": "section6_first", "p": 2, "gamma": Fraction(-1)},
    {"name": "section6_first", "p": 2, "n": 0},
    {"name": "section6_second", "p": 2},
    {"name": "section3_example", "p": 2, "variant": "iii"},
    {"name": "nope", "p": 2},
])
def test_invalid_scenarios(bad):
    with pytest.raises(InvalidParameters):
        Scenario(**bad).validate()


@pytest.mark.parametrize("s", [
    Scenario("section6_first", p=2, n=4),
    Scenario("section6_first", p=3, n=3, gamma=Fraction(1, 2)),
    Scenario("section6_second", p=2, n=3, gamma_prime=Fraction(3)),
])
def test_generated_chains_validate(s):
    interp = Interpreter()
    results = interp.run(generate_scenario(s))
    assert all(r["status"] == "ok" for r in results), [r for r in results if r["status"] != "ok"]
    top = interp.env["u2w1" if s.name == "section6_second" else "vw1"]
    assert validate_chain(chain_of(top)).passed
    for r in results:
        if r["query"].startswith("validate("):
            assert r["report"]["passed"]


def test_scenario_names():
    assert SCENARIOS == ("section6_first", "section6_second", "section3_example")


# -- command line --------------------------------------------------------------

def test_cli_runs_a_script(tmp_path):
    path = tmp_path / "s.vk"
    path.write_text("set p = 2\nval v = monomial(-1/2)\neval(v, x^2 - x - y^(-1))\n")
    code, out = cli("run", str(path))
    assert code == 0
    assert json.loads(out) == [{"query": "eval(v, x^2 - x - y^(-1))", "status": "ok", "value": "-1"}]
    code, out = cli("run", str(path), "--table")
    assert code == 0 and out.splitlines()[1].split() == ["eval(v,", "x^2", "-", "x", "-", "y^(-1))", "ok", "-1"]


def test_cli_exit_codes(tmp_path):
    bad = tmp_path / "bad.vk"
    bad.write_text("val v = monomial(-1/3/)\n")
    code, out = cli("run", str(bad))
    assert code == 2 and json.loads(out)["report"]["error"] == "ParseError"
    fails = tmp_path / "fails.vk"
    fails.write_text("val v = monomial(0)\nval w = augment(v, x, -1)\n")
    assert cli("run", str(fails))[0] == 1
    code, out = cli("scenario", "section6_second", "--p", "2", "--gamma-prime", "1")
    assert code == 1 and json.loads(out)["report"]["error"] == "InvalidParameters"


def test_cli_emits_the_generated_script():
    code, out = cli("scenario", "section3_example", "--p", "2", "--emit-script")
    assert code == 0
    assert out == scenario_source(Scenario("section3_example", p=2))
