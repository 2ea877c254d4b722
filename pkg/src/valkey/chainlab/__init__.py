"""Script language, scenario generator and command line for valkey."""

from .dsl import check, parse, parse_unchecked, pretty, tokenize
from .interp import Interpreter, chain_of, run, run_source, to_json_text
from .scenario import SCENARIOS, Scenario, generate_scenario, scenario_source

__all__ = [
    "check", "parse", "parse_unchecked", "pretty", "tokenize", "Interpreter", "chain_of",
    "run", "run_source", "to_json_text", "SCENARIOS", "Scenario", "generate_scenario",
    "scenario_source",
]
