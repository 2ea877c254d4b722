"""Valuations of polynomials at points of ``F_p((t^Q))``.

Points are either a :class:`HahnApprox` or an :class:`AlgebraicPoint`, which
is ``root + shift`` with ``root`` a lazily approximated root of a known monic
polynomial over K and ``shift`` an exact finite series.  Algebraic points
are evaluated exactly: ``f(root + s) = sum_j (d_j f mod q)(root) s^j``, the
terms are grouped by exponent class modulo ``Z[1/p]``, and each class reduces
to the value of a polynomial of degree ``< deg q`` at the root, which a
finite truncation of the root certifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from ..errors import InsufficientPrecision, ZeroPolynomial
from ..polyring import PolyK, hasse_derivative, poly_divmod
from ..valgroup import INF, GValue, rat
from .field import KElem
from .series import HahnApprox

__all__ = [
    "RootSeries", "AlgebraicPoint", "Point", "artin_schreier_root",
    "hahn_poly_valuation", "point_valuation", "difference_valuation",
    "point_sub", "coset_key",
]

# truncation levels tried when certifying a value at a root
_LEVELS = (1, 2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 24, 32, 40, 48, 64)


@dataclass(frozen=True, eq=False)
class RootSeries:
    """A root of ``poly`` given by its truncations.

    ``approx(n)`` returns a :class:`HahnApprox` whose precision grows with
    ``n``.  ``immediate`` declares that ``K(root)/K`` adds no new values, so
    values at the root lie in ``Z[1/p]``.
    """

    poly: PolyK
    approx: Callable[[int], HahnApprox]
    name: str = "root"
    immediate: bool = True
    max_level: int = 64

    @property
    def p(self) -> int:
        return self.poly.p

    def __repr__(self):
        return f"RootSeries({self.name})"


def artin_schreier_root(p: int) -> RootSeries:
    """``eta = sum_{i>=1} t^(-1/p^i)``, a root of ``x^p - x - y^-1``."""

    def approx(n: int) -> HahnApprox:
        return HahnApprox(
            p, [(Fraction(-1, p ** i), 1) for i in range(1, n + 1)], Fraction(-1, p ** (n + 1))
        )

    x = PolyK.x(p)
    poly = x ** p - x - KElem.y(p, -1)
    return RootSeries(poly, approx, name="eta")


@dataclass(frozen=True)
class AlgebraicPoint:
    """The point ``root + shift`` with ``shift`` an exact series."""

    root: RootSeries
    shift: HahnApprox

    def __post_init__(self):
        if not self.shift.is_exact:
            raise ValueError("the shift of an algebraic point must be exact")

    def __add__(self, other):
        return AlgebraicPoint(self.root, self.shift + _as_series(other, self.root.p))

    def __sub__(self, other):
        if isinstance(other, AlgebraicPoint):
            if other.root is not self.root:
                raise ValueError("points over different roots cannot be subtracted")
            return self.shift - other.shift
        return AlgebraicPoint(self.root, self.shift - _as_series(other, self.root.p))

    def approx(self, n: int) -> HahnApprox:
        return self.root.approx(n) + self.shift

    def __str__(self):
        if self.shift.is_zero():
            return self.root.name
        return f"{self.root.name} + ({self.shift})"


Point = Union[HahnApprox, AlgebraicPoint]


def _as_series(a, p: int) -> HahnApprox:
    if isinstance(a, HahnApprox):
        return a
    if isinstance(a, KElem):
        if not a.den_is_one:
            raise ValueError("only exact images can shift an algebraic point")
        return a.iota()
    if isinstance(a, int):
        return HahnApprox.constant(p, a)
    raise TypeError(f"cannot treat {a!r} as a series")


def point_sub(a, b):
    """``a - b`` for points and K-elements (returns a point)."""
    if isinstance(a, AlgebraicPoint):
        return a - b
    if isinstance(b, AlgebraicPoint):
        # only the valuation of differences is ever needed; it is sign-free
        return b - a
    p = a.p if isinstance(a, (HahnApprox, KElem)) else b.p
    return _as_series(a, p) - _as_series(b, p)


def coset_key(e: Fraction, p: int) -> Fraction:
    """Canonical representative of ``e`` modulo ``Z[1/p]`` in ``[0, 1)``."""
    den = e.denominator
    pk = 1
    while den % p == 0:
        den //= p
        pk *= p
    if den == 1:
        return Fraction(0)
    u = (e.numerator * pow(pk, -1, den)) % den
    return Fraction(u, den)


def _horner(f: PolyK, point: HahnApprox, target) -> HahnApprox:
    acc = None
    for c in reversed(f.coeffs):
        ci = c.iota(target)
        acc = ci if acc is None else acc * point + ci
    return acc if acc is not None else HahnApprox.zero(f.p)


def _series_poly_valuation(f: PolyK, point: HahnApprox, precision=None, retries: int = 4) -> GValue:
    target = rat(precision) if precision is not None else Fraction(8)
    last = None
    for _ in range(retries + 1):
        value = _horner(f, point, target)
        if value.terms or value.is_exact:
            return value.valuation()
        if last is not None and value.precision == last:
            break
        last = value.precision
        target = target * 2 if target > 0 else target + 8
    raise InsufficientPrecision(
        f"cancellation exhausted precision evaluating {f}; retry with more terms", last
    )


def _value_at_root(g: PolyK, root: RootSeries) -> GValue:
    # g has degree < deg(root.poly) and is nonzero, so g(root) != 0
    last = None
    for n in _LEVELS:
        if n > root.max_level:
            break
        approx = root.approx(n)
        target = max(Fraction(8), -4 * approx.precision) if approx.precision is not None else None
        value = _horner(g, approx, target if target is not None else Fraction(8))
        if value.terms:
            return value.valuation()
        last = value.precision
    raise InsufficientPrecision(
        f"value of {g} at {root.name} not certified up to level {root.max_level}", last
    )


def _algebraic_poly_valuation(f: PolyK, point: AlgebraicPoint) -> GValue:
    root = point.root
    p = f.p
    q = root.poly
    s = point.shift
    groups: dict[Fraction, PolyK] = {}
    s_pow = HahnApprox.one(p)
    for j in range(f.degree + 1):
        if j:
            s_pow = s_pow * s
            if s_pow.is_zero():
                break
        r = poly_divmod(hasse_derivative(f, j), q)[1]
        if r.is_zero():
            continue
        for e, c in s_pow.terms:
            key = coset_key(e, p) if root.immediate else Fraction(0)
            scalar = KElem.y(p, e - key, c)
            groups[key] = groups.get(key, PolyK(p)) + r.scale(scalar)
    if not root.immediate and len(groups) > 1:
        raise NotImplementedError("shifts outside Z[1/p] need an immediate root")
    best: GValue = INF
    for key, g in groups.items():
        if g.is_zero():
            continue
        best = min(best, key + _value_at_root(g, root))
    return best


def hahn_poly_valuation(f: PolyK, eta: Point, precision=None) -> GValue:
    """``nu_t(f(eta))``, the value of ``f`` under the valuation defined by ``eta``."""
    if f.is_zero():
        raise ZeroPolynomial("the zero polynomial has no finite value")
    if isinstance(eta, AlgebraicPoint):
        return _algebraic_poly_valuation(f, eta)
    return _series_poly_valuation(f, eta, precision)


def point_valuation(a, precision=None) -> GValue:
    """``nu_t`` of a point, series or K-element."""
    if isinstance(a, KElem):
        return a.valuation()
    if isinstance(a, AlgebraicPoint):
        return hahn_poly_valuation(PolyK.x(a.root.p), a)
    return a.valuation()


def difference_valuation(a, b) -> GValue:
    return point_valuation(point_sub(a, b))
