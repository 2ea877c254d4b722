"""Elements of the perfect hull ``K = F_p(y)^(1/p^inf)``.

An element is a reduced fraction ``num/den`` of exact finite sums
``sum c_e y^e`` whose exponents have p-power denominators.  The denominator is
normalized to have lowest term ``1 * y^0``, and numerator and denominator are
coprime, so equality is structural.  ``y`` is identified with ``t`` under the
embedding into ``F_p((t^Q))``.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from ..errors import InvalidElement
from ..valgroup import INF, GValue, rat
from .series import HahnApprox, format_series

__all__ = ["KElem", "iota", "is_p_power"]


def is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


# -- dense polynomials over F_p, lowest degree first --------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_divmod(a: list[int], b: list[int], p: int):
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % p
        if c:
            q[i - db] = c
            for j, bj in enumerate(b):
                a[i - db + j] = (a[i - db + j] - c * bj) % p
    return _trim(q), _trim(a[:db] if db else [])


def _fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _fp_divmod(a, b, p)[1]
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _to_dense(s: HahnApprox, scale: int) -> list[int]:
    # assumes every exponent * scale is a nonnegative integer
    out: list[int] = []
    for e, c in s.terms:
        k = int(e * scale)
        out.extend([0] * (k + 1 - len(out)))
        out[k] = c
    return out


def _from_dense(a: list[int], scale: int, p: int) -> HahnApprox:
    return HahnApprox(p, [(Fraction(k, scale), c) for k, c in enumerate(a) if c])


class KElem:
    """An element of the perfect hull of ``F_p(y)``."""

    __slots__ = ("p", "num", "den", "_hash")

    def __init__(self, p: int, num: HahnApprox, den: HahnApprox | None = None, *, _reduced=False):
        self.p = p
        self._hash = None
        if den is None:
            den = HahnApprox.one(p)
        if _reduced:
            self.num, self.den = num, den
            return
        for s in (num, den):
            if not s.is_exact:
                raise InvalidElement("elements of K need exact finite numerator and denominator")
            if s.p != p:
                raise InvalidElement("characteristic mismatch")
            for e, _ in s.terms:
                if not is_p_power(e.denominator, p):
                    raise InvalidElement(f"exponent {e} is not in Z[1/{p}]")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = _normalize(p, num, den)

    # constructors

    @classmethod
    def from_int(cls, p: int, c: int) -> KElem:
        return cls(p, HahnApprox.constant(p, c), _reduced=True)

    @classmethod
    def y(cls, p: int, exponent=1, coeff: int = 1) -> KElem:
        e = rat(exponent)
        if not is_p_power(e.denominator, p):
            raise InvalidElement(f"exponent {e} is not in Z[1/{p}]")
        return cls(p, HahnApprox.monomial(p, e, coeff), _reduced=True)

    @classmethod
    def from_series(cls, s: HahnApprox) -> KElem:
        return cls(s.p, s)

    def _coerce(self, other):
        if isinstance(other, KElem):
            if other.p != self.p:
                raise ValueError("characteristic mismatch")
            return other
        if isinstance(other, int):
            return KElem.from_int(self.p, other)
        return NotImplemented

    # predicates

    def is_zero(self) -> bool:
        return not self.num.terms

    def is_one(self) -> bool:
        return self.den_is_one and self.num == HahnApprox.one(self.p)

    @property
    def den_is_one(self) -> bool:
        return len(self.den.terms) == 1

    def valuation(self) -> GValue:
        """The t-adic valuation ``nu_0`` of this element."""
        if not self.num.terms:
            return INF
        return self.num.terms[0][0] - self.den.terms[0][0]

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den_is_one and other.den_is_one:
            return KElem(self.p, self.num + other.num, _reduced=True)
        return KElem(self.p, self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return KElem(self.p, -self.num, self.den, _reduced=True)

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
        if self.den_is_one and other.den_is_one:
            return KElem(self.p, self.num * other.num, _reduced=True)
        return KElem(self.p, self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> KElem:
        if self.is_zero():
            raise ZeroDivisionError("division by zero in K")
        return KElem(self.p, self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = KElem.from_int(self.p, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def pth_root(self) -> KElem:
        return KElem(self.p, self.num.pth_root(), self.den.pth_root(), _reduced=True)

    def iota(self, target_precision=None) -> HahnApprox:
        """Image in ``F_p((t^Q))``; exact when the denominator is a monomial."""
        if self.den_is_one:
            return self.num
        if target_precision is None:
            raise ValueError("a non-monomial denominator needs a target precision")
        target = rat(target_precision)
        vn = self.valuation()
        if vn is INF:
            return HahnApprox.zero(self.p)
        inv = self.den.invert(target - self.num.terms[0][0])
        return (self.num * inv).truncate(target)

    # comparison and display

    def __eq__(self, other):
        if isinstance(other, int):
            other = KElem.from_int(self.p, other)
        if not isinstance(other, KElem):
            return NotImplemented
        return self.p == other.p and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self):
        return f"KElem({self})"

    def __str__(self):
        num = format_series(self.num, "y")
        if self.den_is_one:
            return num
        den = format_series(self.den, "y")
        if len(self.num.terms) > 1:
            num = f"({num})"
        return f"{num}/({den})"

    def is_atomic_str(self) -> bool:
        """True when ``str(self)`` needs no parentheses as a factor."""
        return self.den_is_one and len(self.num.terms) <= 1


def _normalize(p: int, num: HahnApprox, den: HahnApprox):
    if not num.terms:
        return num, HahnApprox.one(p)
    # move the lowest term of the denominator into the numerator
    e0, c0 = den.terms[0]
    inv = pow(c0, -1, p)
    num = num.shift(-e0).scale(inv)
    den = den.shift(-e0).scale(inv)
    if len(den.terms) == 1:
        return num, den
    scale = 1
    for e, _ in num.terms + den.terms:
        scale = lcm(scale, e.denominator)
    en = num.terms[0][0]
    a = _to_dense(num.shift(-en), scale)
    b = _to_dense(den, scale)
    g = _fp_gcd(a, b, p)
    if len(g) > 1:
        a = _fp_divmod(a, g, p)[0]
        b = _fp_divmod(b, g, p)[0]
        # b keeps constant term 1 up to a unit; renormalize
        lead = pow(b[0], -1, p)
        a = [c * lead % p for c in a]
        b = [c * lead % p for c in b]
        num = _from_dense(a, scale, p).shift(en)
        den = _from_dense(b, scale, p)
    return num, den


def iota(a: KElem, target_precision=None) -> HahnApprox:
    return a.iota(target_precision)
