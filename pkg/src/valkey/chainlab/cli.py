"""``valkey run <script>`` and ``valkey scenario <name> ...``.

Exit status: 0 when every query succeeds, 1 when any result is an error,
2 when the script fails to parse or check.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from ..errors import InvalidParameters, ScriptError
from .dsl import parse
from .interp import Interpreter, to_json_text
from .scenario import SCENARIOS, Scenario, scenario_source


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="valkey", description="Exact computations with chains of valuations.")
    sub = ap.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a script file ('-' reads stdin)")
    run_p.add_argument("script")
    _output_flags(run_p)

    sc = sub.add_parser("scenario", help="generate and execute a built-in scenario")
    sc.add_argument("name", choices=SCENARIOS)
    sc.add_argument("--p", type=int, required=True, help="the characteristic (a prime)")
    sc.add_argument("--n", type=int, default=3, help="number of explicit stages")
    sc.add_argument("--gamma", type=_rational, default=Fraction(0))
    sc.add_argument("--gamma-prime", type=_rational, default=None)
    sc.add_argument("--precision", type=_rational, default=None)
    sc.add_argument("--variant", choices=("i", "ii"), default="i")
    sc.add_argument("--pool", type=int, default=3, help="partial sums in the coefficient pool")
    sc.add_argument("--emit-script", action="store_true", help="print the generated script and exit")
    _output_flags(sc)
    return ap


def _output_flags(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="fmt", action="store_const", const="json")
    g.add_argument("--table", dest="fmt", action="store_const", const="table")
    p.set_defaults(fmt="json")


def format_table(results: list[dict]) -> str:
    rows = []
    for r in results:
        body = r.get("value", r.get("report"))
        text = body if isinstance(body, str) else json.dumps(body, separators=(",", ":"))
        rows.append((r["query"], r["status"], text))
    width = max((len(q) for q, _, _ in rows), default=5)
    lines = [f"{'query'.ljust(width)}  status  result"]
    for q, status, text in rows:
        lines.append(f"{q.ljust(width)}  {status.ljust(6)}  {text}")
    return "\n".join(lines) + "\n"


def _emit(results: list[dict], fmt: str) -> int:
    out = to_json_text(results) if fmt == "json" else format_table(results)
    sys.stdout.write(out)
    return 1 if any(r["status"] == "error" for r in results) else 0


def _parse_failure(exc: ScriptError) -> int:
    payload = {"status": "error", "report": {
        "error": type(exc).__name__, "message": exc.message, "line": exc.line,
        "column": exc.column, "expected": getattr(exc, "expected", "")}}
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    return 2


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        if args.script == "-":
            source = sys.stdin.read()
        else:
            with open(args.script, encoding="utf-8") as fh:
                source = fh.read()
    else:
        try:
            scenario = Scenario(args.name, p=args.p, n=args.n, gamma=args.gamma,
                                gamma_prime=args.gamma_prime, variant=args.variant,
                                pool=args.pool, precision=args.precision)
            source = scenario_source(scenario)
        except InvalidParameters as exc:
            sys.stdout.write(json.dumps({"status": "error", "report": {
                "error": "InvalidParameters", "message": str(exc)}}, indent=2) + "\n")
            return 1
        if args.emit_script:
            sys.stdout.write(source)
            return 0
    try:
        script = parse(source)
    except ScriptError as exc:
        return _parse_failure(exc)
    return _emit(Interpreter().run(script), args.fmt)


if __name__ == "__main__":
    sys.exit(main())
