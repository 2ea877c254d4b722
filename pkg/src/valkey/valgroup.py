"""The value group Q extended by infinity.

Finite values are plain :class:`fractions.Fraction` instances (always in
lowest terms, so equality and hashing are structural).  Infinity is the
singleton :data:`INF`, which absorbs addition and compares above every
finite value.  ``GValue`` is the union of the two.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .errors import DivisionOfInfinity

__all__ = [
    "INF", "GValue", "Infinity", "rat", "gv_add", "gv_min", "gv_max", "gv_cmp",
    "gv_scale", "gv_div", "gv_str", "gv_parse", "is_finite",
]


class Infinity:
    """The absorbing maximal element of the value group."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    __str__ = lambda self: "inf"  # noqa: E731

    def __hash__(self):
        return hash("valkey.INF")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()

GValue = Union[Fraction, Infinity]


def rat(value) -> Fraction:
    """Coerce ints, strings like ``"-3/4"`` and Fractions to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(value)


def is_finite(a: GValue) -> bool:
    return a is not INF


def gv_add(a: GValue, b: GValue) -> GValue:
    if a is INF or b is INF:
        return INF
    return a + b


def gv_cmp(a: GValue, b: GValue) -> int:
    """Three-way comparison: -1, 0 or 1."""
    if a == b:
        return 0
    return -1 if a < b else 1


def gv_min(*values: GValue) -> GValue:
    if len(values) == 1:
        values = tuple(values[0])
    return min(values, default=INF)


def gv_max(*values: GValue) -> GValue:
    if len(values) == 1:
        values = tuple(values[0])
    return max(values)


def gv_scale(a: GValue, n: int) -> GValue:
    """``n * a``; for infinite ``a`` only ``n > 0`` is meaningful."""
    if a is INF:
        if n <= 0:
            raise DivisionOfInfinity(f"cannot scale infinity by {n}")
        return INF
    return a * n


def gv_div(a: GValue, b: int) -> Fraction:
    if a is INF:
        raise DivisionOfInfinity("cannot divide infinity")
    if b < 1:
        raise ValueError("divisor must be a positive integer")
    return a / b


def gv_str(a: GValue) -> str:
    """Serialize as ``"num/den"`` (den omitted when 1) or ``"inf"``."""
    if a is INF:
        return "inf"
    a = rat(a)
    if a.denominator == 1:
        return str(a.numerator)
    return f"{a.numerator}/{a.denominator}"


def gv_parse(text: str) -> GValue:
    text = text.strip()
    if text == "inf":
        return INF
    return Fraction(text)
