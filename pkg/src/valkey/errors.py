"""Exception hierarchy shared by every valkey module."""

from __future__ import annotations


class ValkeyError(Exception):
    """Base class for all errors raised by valkey."""


class DivisionOfInfinity(ValkeyError, ArithmeticError):
    pass


class InsufficientPrecision(ValkeyError):
    """A truncated computation could not certify its result.

    ``precision`` records the exponent bound that was in force, so callers can
    retry with a larger one.
    """

    def __init__(self, message: str, precision=None):
        super().__init__(message)
        self.precision = precision


class InvalidElement(ValkeyError, ValueError):
    pass


class DivisionByZeroPoly(ValkeyError, ZeroDivisionError):
    pass


class NonMonicBase(ValkeyError, ValueError):
    pass


class ZeroPolynomial(ValkeyError, ValueError):
    pass


class InvalidAugmentation(ValkeyError, ValueError):
    pass


class UnstableLimit(ValkeyError):
    """A limit valuation did not stabilize within the cap.

    ``values`` holds the strictly increasing witness values.
    """

    def __init__(self, message: str, values=()):
        super().__init__(message)
        self.values = tuple(values)


class NotComplete(ValkeyError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotPcs(ValkeyError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidParameters(ValkeyError, ValueError):
    pass


class ScriptError(ValkeyError):
    """An error tied to a position in a DSL script."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class ParseError(ScriptError):
    def __init__(self, message: str, line: int, column: int, expected: str = ""):
        super().__init__(message, line, column)
        self.expected = expected


class UndefinedIdentifier(ScriptError):
    def __init__(self, name: str, line: int, column: int):
        super().__init__(f"undefined identifier {name!r}", line, column)
        self.name = name


class TypeMismatch(ScriptError):
    def __init__(self, message: str, line: int, column: int, expected: str = "", got: str = ""):
        super().__init__(message, line, column)
        self.expected = expected
        self.got = got
