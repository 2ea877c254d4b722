"""Truncated generalized power series over F_p with rational exponents.

A :class:`HahnApprox` stores finitely many terms ``c * t^e`` together with a
precision bound ``P``: every exponent below ``P`` is fully known and nothing
is known at or above it.  ``precision=None`` marks an exact (finite) series.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable

from ..errors import InsufficientPrecision
from ..valgroup import INF, GValue, rat

__all__ = ["HahnApprox", "h_add", "h_mul", "h_neg", "h_valuation", "h_invert", "h_pth_root"]


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class HahnApprox:
    """An element of ``F_p((t^Q))`` known up to an exponent bound."""

    __slots__ = ("p", "terms", "precision", "_hash")

    def __init__(self, p: int, terms: Iterable = (), precision=None):
        acc: dict[Fraction, int] = {}
        for e, c in (terms.items() if isinstance(terms, dict) else terms):
            e = rat(e)
            acc[e] = (acc.get(e, 0) + c) % p
        if precision is not None:
            precision = rat(precision)
        self.p = p
        self.precision = precision
        self.terms = tuple(
            (e, c) for e, c in sorted(acc.items())
            if c and (precision is None or e < precision)
        )
        self._hash = None

    @classmethod
    def _raw(cls, p, terms, precision):
        # terms already sorted, reduced and below precision
        obj = object.__new__(cls)
        obj.p = p
        obj.terms = terms
        obj.precision = precision
        obj._hash = None
        return obj

    # constructors

    @classmethod
    def zero(cls, p: int) -> HahnApprox:
        return cls._raw(p, (), None)

    @classmethod
    def one(cls, p: int) -> HahnApprox:
        return cls._raw(p, ((Fraction(0), 1),), None)

    @classmethod
    def monomial(cls, p: int, exponent, coeff: int = 1) -> HahnApprox:
        return cls(p, [(rat(exponent), coeff)])

    @classmethod
    def constant(cls, p: int, c: int) -> HahnApprox:
        return cls(p, [(Fraction(0), c)])

    # structure

    @property
    def is_exact(self) -> bool:
        return self.precision is None

    def is_zero(self) -> bool:
        """True only for a certified (exact) zero."""
        return not self.terms and self.precision is None

    def valuation(self) -> GValue:
        if self.terms:
            return self.terms[0][0]
        if self.precision is None:
            return INF
        raise InsufficientPrecision(
            f"series is zero up to t^{self.precision}; valuation not certified",
            self.precision,
        )

    def valuation_bound(self):
        """Certified lower bound for the valuation (None means infinity)."""
        if self.terms:
            return self.terms[0][0]
        return self.precision

    def leading(self):
        return self.terms[0] if self.terms else None

    def truncate(self, precision) -> HahnApprox:
        precision = _min_prec(self.precision, rat(precision) if precision is not None else None)
        if precision == self.precision:
            return self
        return HahnApprox._raw(
            self.p, tuple(t for t in self.terms if t[0] < precision), precision
        )

    def _check(self, other):
        if isinstance(other, int):
            return HahnApprox.constant(self.p, other)
        if not isinstance(other, HahnApprox):
            return NotImplemented
        if other.p != self.p:
            raise ValueError(f"characteristic mismatch: {self.p} vs {other.p}")
        return other

    # arithmetic

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.p
        prec = _min_prec(self.precision, other.precision)
        a, b = self.terms, other.terms
        out = []
        i = j = 0
        # merge of two sorted term lists
        while i < len(a) and j < len(b):
            ea, eb = a[i][0], b[j][0]
            if ea < eb:
                out.append(a[i])
                i += 1
            elif eb < ea:
                out.append(b[j])
                j += 1
            else:
                c = (a[i][1] + b[j][1]) % p
                if c:
                    out.append((ea, c))
                i += 1
                j += 1
        out.extend(a[i:])
        out.extend(b[j:])
        if prec is not None:
            out = [t for t in out if t[0] < prec]
        return HahnApprox._raw(p, tuple(out), prec)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return HahnApprox._raw(p, tuple((e, p - c) for e, c in self.terms), self.precision)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.p
        pa, pb = self.precision, other.precision
        if pa is None and pb is None:
            prec = None
        else:
            # a = A + O(t^pa), b = B + O(t^pb): the error is bounded by
            # min(pa + v(B), pb + v(A)).
            va, vb = self.valuation_bound(), other.valuation_bound()
            cands = []
            if pa is not None and vb is not None:
                cands.append(pa + vb)
            if pb is not None and va is not None:
                cands.append(pb + va)
            prec = min(cands) if cands else None
        if not self.terms or not other.terms:
            return HahnApprox._raw(p, (), prec)
        # work with integer exponents over a common denominator
        den = 1
        for e, _ in self.terms + other.terms:
            den = lcm(den, e.denominator)
        ia = [(e.numerator * (den // e.denominator), c) for e, c in self.terms]
        ib = [(e.numerator * (den // e.denominator), c) for e, c in other.terms]
        cap = None if prec is None else prec * den
        acc: dict[int, int] = {}
        get = acc.get
        for e1, c1 in ia:
            for e2, c2 in ib:
                e = e1 + e2
                if cap is not None and e >= cap:
                    break  # ib is sorted
                acc[e] = get(e, 0) + c1 * c2
        terms = tuple(
            (Fraction(e, den), c % p) for e, c in sorted(acc.items()) if c % p
        )
        return HahnApprox._raw(p, terms, prec)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("use h_invert for negative powers")
        result = HahnApprox.one(self.p)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: int) -> HahnApprox:
        c %= self.p
        if c == 0:
            return HahnApprox._raw(self.p, (), self.precision)
        return HahnApprox._raw(
            self.p, tuple((e, (x * c) % self.p) for e, x in self.terms), self.precision
        )

    def shift(self, e) -> HahnApprox:
        """Multiply by ``t^e``."""
        e = rat(e)
        prec = None if self.precision is None else self.precision + e
        return HahnApprox._raw(self.p, tuple((x + e, c) for x, c in self.terms), prec)

    def pth_root(self) -> HahnApprox:
        # Frobenius is the identity on F_p, so only exponents change.
        p = self.p
        prec = None if self.precision is None else self.precision / p
        return HahnApprox._raw(p, tuple((e / p, c) for e, c in self.terms), prec)

    def invert(self, target_precision) -> HahnApprox:
        """Return ``1/self`` correct up to ``t^target_precision``."""
        target = rat(target_precision)
        v = self.valuation()
        if v is INF:
            raise ZeroDivisionError("cannot invert zero")
        p = self.p
        c0 = self.terms[0][1]
        c0_inv = pow(c0, -1, p)
        if len(self.terms) == 1 and self.precision is None:
            return HahnApprox._raw(p, ((-v, c0_inv),), None)
        if self.precision is not None and self.precision - 2 * v < target:
            raise InsufficientPrecision(
                f"inverse needs precision {target + 2 * v}, have {self.precision}",
                self.precision,
            )
        # self = c0 t^v (1 + u) with v(u) > 0
        rel_target = target + v
        u = (self.shift(-v).scale(c0_inv) - 1).truncate(rel_target)
        neg_u = -u
        series = HahnApprox(p, [(0, 1)], rel_target)
        power = HahnApprox(p, [(0, 1)], rel_target)
        while True:
            power = (power * neg_u).truncate(rel_target)
            if not power.terms:
                break
            series = series + power
        result = series.shift(-v).scale(c0_inv)
        return result.truncate(target)

    # comparison and display

    def __eq__(self, other):
        if isinstance(other, int):
            other = HahnApprox.constant(self.p, other)
        if not isinstance(other, HahnApprox):
            return NotImplemented
        return (self.p, self.terms, self.precision) == (other.p, other.terms, other.precision)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.terms, self.precision))
        return self._hash

    def __repr__(self):
        return f"HahnApprox({self})"

    def __str__(self):
        return format_series(self, "t")

    def to_json(self) -> dict:
        return {
            "terms": [{"exp": _rat_str(e), "coeff": c} for e, c in self.terms],
            "precision": "exact" if self.precision is None else _rat_str(self.precision),
        }

    @classmethod
    def from_json(cls, p: int, data: dict) -> HahnApprox:
        prec = data.get("precision", "exact")
        return cls(
            p,
            [(Fraction(t["exp"]), int(t["coeff"])) for t in data["terms"]],
            None if prec == "exact" else Fraction(prec),
        )


def _rat_str(e: Fraction) -> str:
    return str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"


def _coeff_str(c: int, p: int) -> tuple[str, str]:
    """Sign and magnitude text for an F_p coefficient, using the smaller representative."""
    if p > 2 and c > p // 2:
        return "-", str(p - c)
    return "+", str(c)


def _power_str(var: str, e: Fraction) -> str:
    if e.denominator == 1 and e >= 0:
        return f"{var}^{e.numerator}"
    return f"{var}^({_rat_str(e)})"


def format_series(s: HahnApprox, var: str) -> str:
    parts: list[str] = []
    for e, c in s.terms:
        sign, mag = _coeff_str(c, s.p)
        if e == 0:
            mono = mag
        else:
            power = var if e == 1 else _power_str(var, e)
            mono = power if mag == "1" else f"{mag}*{power}"
        parts.append((sign, mono))
    if s.precision is not None:
        parts.append(("+", f"O({_power_str(var, s.precision)})"))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, mono in parts[1:]:
        text += f" {sign} {mono}"
    return text


def h_add(a: HahnApprox, b: HahnApprox) -> HahnApprox:
    return a + b


def h_mul(a: HahnApprox, b: HahnApprox) -> HahnApprox:
    return a * b


def h_neg(a: HahnApprox) -> HahnApprox:
    return -a


def h_valuation(a: HahnApprox) -> GValue:
    return a.valuation()


def h_invert(a: HahnApprox, target_precision) -> HahnApprox:
    return a.invert(target_precision)


def h_pth_root(a: HahnApprox) -> HahnApprox:
    return a.pth_root()
