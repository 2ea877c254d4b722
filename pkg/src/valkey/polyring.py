"""Dense polynomials over K, Hasse derivatives and q-expansions."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable

from .errors import DivisionByZeroPoly, NonMonicBase
from .hahn.field import KElem

__all__ = [
    "PolyK", "QExpansion", "poly_add", "poly_mul", "poly_divmod",
    "hasse_derivative", "q_expand", "q_reconstruct",
]


class PolyK:
    """A polynomial in ``x`` with coefficients in K, stored lowest degree first."""

    __slots__ = ("p", "coeffs", "_hash")

    def __init__(self, p: int, coeffs: Iterable = ()):
        cs = [c if isinstance(c, KElem) else KElem.from_int(p, c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.p = p
        self.coeffs = tuple(cs)
        self._hash = None

    @classmethod
    def x(cls, p: int) -> PolyK:
        return cls(p, [0, 1])

    @classmethod
    def const(cls, c: KElem | int, p: int | None = None) -> PolyK:
        if isinstance(c, KElem):
            return cls(c.p, [c])
        return cls(p, [c])

    @classmethod
    def linear(cls, a: KElem) -> PolyK:
        """``x - a``."""
        return cls(a.p, [-a, 1])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def leading(self) -> KElem:
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.leading.is_one()

    def __getitem__(self, i: int) -> KElem:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return KElem.from_int(self.p, 0)

    def _coerce(self, other):
        if isinstance(other, PolyK):
            return other
        if isinstance(other, (KElem, int)):
            return PolyK(self.p, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyK(self.p, [self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return PolyK(self.p, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return PolyK(self.p)
        out = [KElem.from_int(self.p, 0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return PolyK(self.p, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = PolyK(self.p, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: KElem) -> PolyK:
        return PolyK(self.p, [a * c for a in self.coeffs])

    def __divmod__(self, other):
        return poly_divmod(self, other)

    def __floordiv__(self, other):
        return poly_divmod(self, other)[0]

    def __mod__(self, other):
        return poly_divmod(self, other)[1]

    def __call__(self, a):
        """Horner evaluation at an element of K (or any ring accepting K-scalars)."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * a + c
        return KElem.from_int(self.p, 0) if acc is None else acc

    def monic(self) -> PolyK:
        return self.scale(self.leading.inverse())

    def __eq__(self, other):
        if isinstance(other, (KElem, int)):
            other = PolyK(self.p, [other])
        if not isinstance(other, PolyK):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.coeffs))
        return self._hash

    def __repr__(self):
        return f"PolyK({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts: list[tuple[str, str]] = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            sign = "+"
            if c.is_one():
                text = mono or "1"
            elif (-c).is_one():
                sign, text = "-", mono or "1"
            else:
                ctext = str(c)
                # a sum in constant position needs no parentheses, so its
                # leading minus can become the joining sign
                if ctext.startswith("-") and (c.is_atomic_str() or not mono):
                    sign, ctext = "-", ctext[1:]
                if not mono:
                    text = ctext
                else:
                    if not c.is_atomic_str():
                        ctext = f"({ctext})"
                    text = f"{ctext}*{mono}"
            parts.append((sign, text))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out


def poly_add(f: PolyK, g: PolyK) -> PolyK:
    return f + g


def poly_mul(f: PolyK, g: PolyK) -> PolyK:
    return f * g


def poly_divmod(f: PolyK, g: PolyK) -> tuple[PolyK, PolyK]:
    if g.is_zero():
        raise DivisionByZeroPoly("division by the zero polynomial")
    p = f.p
    if f.degree < g.degree:
        return PolyK(p), f
    rem = list(f.coeffs)
    dg = g.degree
    inv = None if g.leading.is_one() else g.leading.inverse()
    quot = [KElem.from_int(p, 0)] * (f.degree - dg + 1)
    for i in range(f.degree, dg - 1, -1):
        c = rem[i]
        if c.is_zero():
            continue
        if inv is not None:
            c = c * inv
        quot[i - dg] = c
        for j, gj in enumerate(g.coeffs):
            if not gj.is_zero():
                rem[i - dg + j] = rem[i - dg + j] - c * gj
    return PolyK(p, quot), PolyK(p, rem[:dg])


def hasse_derivative(f: PolyK, b: int) -> PolyK:
    """The b-th Hasse derivative: ``x^n -> C(n, b) x^(n-b)`` with C reduced mod p."""
    if b < 0:
        raise ValueError("order must be nonnegative")
    p = f.p
    out = []
    for n in range(b, len(f.coeffs)):
        k = comb(n, b) % p
        out.append(f.coeffs[n] * k if k else KElem.from_int(p, 0))
    return PolyK(p, out)


@dataclass(frozen=True)
class QExpansion:
    """``f = sum digits[i] * base^i`` with every digit of degree < deg(base)."""

    base: PolyK
    digits: tuple[PolyK, ...]

    def __iter__(self):
        return iter(enumerate(self.digits))


def q_expand(f: PolyK, q: PolyK) -> QExpansion:
    if not q.is_monic() or q.degree < 1:
        raise NonMonicBase(f"expansion base must be monic of positive degree: {q}")
    digits: list[PolyK] = []
    rest = f
    if q.degree == 1:
        # Taylor shift by synthetic division at the root of x - a
        a = -q.coeffs[0]
        cs = list(f.coeffs)
        while cs:
            acc = cs[-1]
            quot = [acc]
            for c in reversed(cs[:-1]):
                acc = acc * a + c if not a.is_zero() else c
                quot.append(acc)
            digits.append(PolyK(f.p, [quot[-1]]))
            cs = list(reversed(quot[:-1]))
        return QExpansion(q, tuple(digits))
    while not rest.is_zero():
        rest, r = poly_divmod(rest, q)
        digits.append(r)
    return QExpansion(q, tuple(digits))


def q_reconstruct(e: QExpansion) -> PolyK:
    p = e.base.p
    acc = PolyK(p)
    for d in reversed(e.digits):
        acc = acc * e.base + d
    return acc
