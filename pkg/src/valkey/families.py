"""The Artin-Schreier family over the perfect hull of F_p(y).

First chain: ``a_n = sum_{i=1}^n y^(-1/p^i)``, keys ``phi_{n+1} = x - a_n``
with values ``-1/p^(n+1)`` on top of ``nu_1 = [nu_0; nu(x) = -1/p]``; its
limit key is ``phi_w = x^p - x - 1/y``.

Second chain (over ``nu_{w+1}`` with ``gamma = 0``): with
``e_i = (p^i - 1) / ((p - 1) p^i)`` the keys are
``phi_{w+n} = phi_w - 1 - sum_{i=1}^{n-1} y^(e_i)`` valued ``e_n``, and the
limit key is ``phi_2w = phi_w^p - y*phi_w - 1``.  These exponents make
``1 + sum_i y^(e_i)`` a root of ``u^p - y*u - 1``.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidParameters
from .hahn import AlgebraicPoint, HahnApprox, KElem, artin_schreier_root
from .polyring import PolyK
from .valuation import DEFAULT_N_MAX, ValChain

__all__ = [
    "check_prime", "partial_sum", "first_key", "first_gamma", "phi_omega",
    "second_exponent", "second_key", "phi_2omega", "first_chain", "omega_chain",
    "second_chain", "eta_point", "first_chain_rule", "second_chain_rule",
]


def check_prime(p: int) -> None:
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise InvalidParameters(f"p must be prime, got {p}")


def partial_sum(p: int, n: int) -> KElem:
    """``a_n``; ``a_0 = 0``."""
    total = KElem.from_int(p, 0)
    for i in range(1, n + 1):
        total = total + KElem.y(p, Fraction(-1, p ** i))
    return total


def first_key(p: int, n: int) -> PolyK:
    """``phi_n = x - a_{n-1}`` (so ``phi_1 = x``)."""
    return PolyK.linear(partial_sum(p, n - 1))


def first_gamma(p: int, n: int) -> Fraction:
    """Value assigned to ``phi_n``: ``-1/p^n``."""
    return Fraction(-1, p ** n)


def phi_omega(p: int) -> PolyK:
    x = PolyK.x(p)
    return x ** p - x - KElem.y(p, -1)


def second_exponent(p: int, i: int) -> Fraction:
    return Fraction(p ** i - 1, (p - 1) * p ** i)


def second_key(p: int, n: int) -> PolyK:
    """``phi_{w+n}`` for ``n >= 1``."""
    poly = phi_omega(p) - 1
    for i in range(1, n):
        poly = poly - KElem.y(p, second_exponent(p, i))
    return poly


def phi_2omega(p: int) -> PolyK:
    u = phi_omega(p)
    return u ** p - u.scale(KElem.y(p, 1)) - 1


def first_chain_rule(p: int):
    def rule(n: int):
        return first_key(p, n + 1), first_gamma(p, n + 1)
    return rule


def second_chain_rule(p: int):
    def rule(n: int):
        return second_key(p, n), second_exponent(p, n)
    return rule


def first_chain(p: int, n: int) -> ValChain:
    """``nu_1, ..., nu_{n+1}`` as explicit augmentations."""
    check_prime(p)
    chain = ValChain.monomial(p, first_gamma(p, 1))
    for k in range(2, n + 2):
        chain = chain.augment(first_key(p, k), first_gamma(p, k))
    return chain


def omega_chain(p: int, gamma=0, n_max: int = DEFAULT_N_MAX) -> ValChain:
    """``nu_1``, the limit ``nu_w`` and ``nu_{w+1} = [nu_w; nu(phi_w) = gamma]``."""
    check_prime(p)
    chain = ValChain.monomial(p, first_gamma(p, 1))
    chain = chain.limit(first_chain_rule(p), n_max, name="first_chain")
    return chain.augment(phi_omega(p), gamma)


def second_chain(p: int, gamma_prime, n_max: int = DEFAULT_N_MAX) -> ValChain:
    """Continue ``nu_{w+1}`` (gamma = 0) through the second chain to ``nu_{2w+1}``."""
    gamma_prime = Fraction(gamma_prime)
    if gamma_prime <= Fraction(p, p - 1):
        raise InvalidParameters(f"gamma' must exceed p/(p-1) = {Fraction(p, p - 1)}")
    chain = omega_chain(p, 0, n_max)
    chain = chain.limit(second_chain_rule(p), n_max, name="second_chain")
    return chain.augment(phi_2omega(p), gamma_prime)


def eta_point(p: int, shift: HahnApprox | None = None) -> AlgebraicPoint:
    """``eta + shift`` where ``eta = sum_{i>=1} t^(-1/p^i)``."""
    root = _ETA_ROOTS.setdefault(p, artin_schreier_root(p))
    return AlgebraicPoint(root, shift if shift is not None else HahnApprox.zero(p))


_ETA_ROOTS: dict = {}
