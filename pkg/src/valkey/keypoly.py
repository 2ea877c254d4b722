"""Sampled checks around key polynomials, pseudo-convergent sequences and minimal pairs.

Universally quantified predicates become falsifiers over a finite pool: a
:class:`Falsified` verdict is exact, a :class:`NotFalsified` verdict only
says that the pool held no counterexample.  Algebraic degrees over K are
declared by the caller, never computed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence, Union

from .errors import InvalidParameters, NonMonicBase, NotPcs
from .hahn import AlgebraicPoint, HahnApprox, KElem, difference_valuation, hahn_poly_valuation
from .polyring import PolyK
from .valgroup import INF, GValue, gv_str
from .valuation import HahnValuation, Valuation, epsilon, epsilon_terms, truncate

__all__ = [
    "Falsified", "NotFalsified", "Verdict", "RootData", "delta", "check_eps_eq_delta",
    "is_key_sampled", "AlphaPsi", "alpha_psi_sampled", "limit_key_report",
    "PcsPrefix", "PcsReport", "pcs_check", "is_limit_of", "Stabilized",
    "StrictlyIncreasing", "Inconclusive", "classify_along_pcs", "Algebraic",
    "TranscendentalUpToCap", "classify_pcs_type", "MinimalPairQuery",
    "is_minimal_pair_sampled", "keypolys_from_pcs", "pcs_from_keypolys",
]

Element = Union[KElem, HahnApprox, AlgebraicPoint]


def _json_value(v) -> Any:
    if isinstance(v, (PolyK, KElem, HahnApprox, AlgebraicPoint)):
        return str(v)
    if v is INF or hasattr(v, "denominator"):
        return gv_str(v)
    return v


# -- verdicts ----------------------------------------------------------------

@dataclass(frozen=True)
class Falsified:
    witness: Any
    values: tuple = ()

    verdict = "falsified"

    def to_json(self) -> dict:
        return {"verdict": "falsified", "witness": _json_value(self.witness),
                "values": list(self.values)}


@dataclass(frozen=True)
class NotFalsified:
    values: tuple = ()

    verdict = "not_falsified"

    def to_json(self) -> dict:
        return {"verdict": "not_falsified", "witness": None, "values": list(self.values)}


Verdict = Union[Falsified, NotFalsified]


# -- roots and delta ---------------------------------------------------------

def _diff_val(a, b) -> GValue:
    """``nu_t(a - b)`` for K-elements and points; INF when they coincide."""
    if isinstance(a, KElem) and isinstance(b, KElem):
        return (a - b).valuation()
    if isinstance(a, KElem) and not a.den_is_one:
        a, b = b, a
    if isinstance(b, KElem) and not b.den_is_one:
        raise ValueError("only K-elements with monomial denominators embed exactly")
    return difference_valuation(a, b)


@dataclass(frozen=True)
class RootData:
    """A monic polynomial with its roots (repeated by multiplicity)."""

    poly: PolyK
    roots: tuple

    def __post_init__(self):
        if not self.poly.is_monic():
            raise NonMonicBase(f"root data needs a monic polynomial: {self.poly}")
        object.__setattr__(self, "roots", tuple(self.roots))
        if len(self.roots) != self.poly.degree:
            raise InvalidParameters(
                f"{self.poly} has degree {self.poly.degree} but {len(self.roots)} roots were given")

    def check_roots(self) -> bool:
        """Whether the polynomial vanishes at every supplied root."""
        for r in self.roots:
            if isinstance(r, KElem):
                if not self.poly(r).is_zero():
                    return False
            elif hahn_poly_valuation(self.poly, r) is not INF:
                return False
        return True


def delta(rd: RootData, eta_prime) -> GValue:
    """``max nu_t(eta' - a)`` over the roots ``a``."""
    return max(_diff_val(eta_prime, r) for r in rd.roots)


def check_eps_eq_delta(rd: RootData, eta_prime, reference: Valuation | None = None) -> dict:
    """Compute epsilon and delta of ``rd.poly`` and report whether they agree."""
    if reference is None:
        reference = HahnValuation(rd.poly.p, eta_prime)
    terms = epsilon_terms(reference, rd.poly)
    eps = max(r for _, _, r in terms)
    dlt = delta(rd, eta_prime)
    return {
        "poly": str(rd.poly),
        "value": gv_str(reference(rd.poly)),
        "derivatives": [{"b": b, "value": gv_str(v), "ratio": gv_str(r)} for b, v, r in terms],
        "root_values": [gv_str(_diff_val(eta_prime, r)) for r in rd.roots],
        "epsilon": gv_str(eps),
        "delta": gv_str(dlt),
        "equal": eps == dlt,
    }


# -- key polynomials ---------------------------------------------------------

def is_key_sampled(reference: Valuation, q: PolyK, pool: Sequence[PolyK]) -> Verdict:
    """Look for a pool member of smaller degree with ``eps(f) >= eps(Q)``."""
    if not q.is_monic():
        raise NonMonicBase(f"key polynomial candidates must be monic: {q}")
    eps_q = epsilon(reference, q)
    values = [{"poly": str(q), "epsilon": gv_str(eps_q)}]
    for f in pool:
        if f.is_constant():
            raise ValueError(f"pool members must be nonconstant: {f}")
        if f.degree >= q.degree:
            continue
        eps_f = epsilon(reference, f)
        values.append({"poly": str(f), "epsilon": gv_str(eps_f)})
        if eps_f >= eps_q:
            return Falsified(f, tuple(values))
    return NotFalsified(tuple(values))


@dataclass(frozen=True)
class AlphaPsi:
    alpha: Optional[int]
    psi: tuple
    values: tuple = ()

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "psi": [str(f) for f in self.psi], "values": list(self.values)}


def alpha_psi_sampled(reference: Valuation, q: PolyK, pool: Sequence[PolyK]) -> AlphaPsi:
    """``alpha(Q)`` and the members of ``Psi(Q)`` found in the pool."""
    if not pool:
        raise ValueError("the pool must be nonempty")
    hits = []
    values = []
    for f in pool:
        if f.is_zero():
            continue
        vq, vf = truncate(reference, q, f), reference(f)
        values.append({"poly": str(f), "truncated": gv_str(vq), "value": gv_str(vf)})
        if vq < vf:
            hits.append(f)
    if not hits:
        return AlphaPsi(None, (), tuple(values))
    alpha = min(f.degree for f in hits)
    psi = tuple(f for f in hits if f.degree == alpha and f.is_monic())
    return AlphaPsi(alpha, psi, tuple(values))


def limit_key_report(reference: Valuation, q_minus: PolyK, psi_sample: Sequence[PolyK],
                     q: PolyK, lower_pool: Sequence[PolyK]) -> dict:
    """Sampled check of the four limit-key conditions for ``q`` over ``q_minus``.

    ``psi_sample`` should be members of ``Psi(q_minus)`` in increasing value
    order; ``lower_pool`` holds candidates of degree below ``deg q``.
    """
    ap = alpha_psi_sampled(reference, q_minus, list(psi_sample))
    k1 = ap.alpha == q_minus.degree
    missing = [str(f) for f in psi_sample if f not in ap.psi]
    psi_values = [reference(f) for f in psi_sample]
    k2 = all(a < b for a, b in zip(psi_values, psi_values[1:]))
    vq = reference(q)
    truncs = [truncate(reference, f, q) for f in psi_sample]
    k3 = all(v < vq for v in truncs)
    k4_witness = None
    for g in lower_pool:
        if g.degree >= q.degree or g.is_constant():
            continue
        vg = reference(g)
        if all(truncate(reference, f, g) < vg for f in psi_sample):
            k4_witness = g
            break
    return {
        "K1": {"passed": k1, "alpha": ap.alpha, "degree": q_minus.degree},
        "psi_sample": {"passed": not missing, "outside_psi": missing},
        "K2": {"passed": k2, "values": [gv_str(v) for v in psi_values],
               "note": "no maximum within the sample"},
        "K3": {"passed": k3, "value": gv_str(vq), "truncations": [gv_str(v) for v in truncs]},
        "K4": {"passed": k4_witness is None,
               "witness": None if k4_witness is None else str(k4_witness)},
        "passed": k1 and not missing and k2 and k3 and k4_witness is None,
    }


# -- pseudo-convergent sequences ---------------------------------------------

@dataclass
class PcsPrefix:
    """A finite prefix ``a_0, ..., a_m`` with its successive difference values."""

    terms: tuple
    diffs: tuple = field(init=False)

    def __init__(self, terms: Iterable[Element]):
        self.terms = tuple(terms)
        self.diffs = tuple(_diff_val(b, a) for a, b in zip(self.terms, self.terms[1:]))

    def __len__(self):
        return len(self.terms)


@dataclass(frozen=True)
class PcsReport:
    is_pcs: bool
    increasing: bool
    triples: bool
    gammas: tuple
    witness: Optional[tuple] = None

    def to_json(self) -> dict:
        return {"is_pcs": self.is_pcs, "increasing_differences": self.increasing,
                "all_triples": self.triples, "gammas": [gv_str(g) for g in self.gammas],
                "witness": list(self.witness) if self.witness else None}


def pcs_check(prefix: PcsPrefix) -> PcsReport:
    """Check both the triple condition and strictly increasing differences."""
    n = len(prefix)
    if n < 3:
        raise ValueError("a pcs check needs at least three terms")
    g = prefix.diffs
    increasing = all(a is not INF and a < b for a, b in zip(g, g[1:])) and g[-1] is not INF
    witness = None
    t = prefix.terms
    for r, s, u in itertools.combinations(range(n), 3):
        # repeated terms give an INF difference, which no pcs has
        later = _diff_val(t[u], t[s])
        if later is INF or not _diff_val(t[s], t[r]) < later:
            witness = (r, s, u)
            break
    triples = witness is None
    return PcsReport(increasing and triples, increasing, triples, g, witness)


def _value_at(f: PolyK, a) -> GValue:
    """``nu_t(f(a))``."""
    if isinstance(a, KElem):
        return f(a).valuation()
    if f.is_constant():
        return f.coeffs[0].valuation() if f.coeffs else INF
    return hahn_poly_valuation(f, a)


def is_limit_of(prefix: PcsPrefix, a, reference: Optional[Valuation] = None) -> bool:
    """Whether ``nu(a - a_rho) = gamma_rho`` along the prefix.

    ``a`` is an element (compared under ``nu_t``) or a polynomial such as
    ``x``, compared under ``reference``.
    """
    for rho, gamma in enumerate(prefix.diffs):
        term = prefix.terms[rho]
        if isinstance(a, PolyK):
            if reference is None:
                raise ValueError("a polynomial limit needs a reference valuation")
            v = reference.value_or_inf(a - term)
        else:
            v = _diff_val(a, term)
        if v != gamma:
            return False
    return True


@dataclass(frozen=True)
class Stabilized:
    index: int
    value: GValue
    values: tuple = ()

    kind = "stabilized"

    def to_json(self) -> dict:
        return {"kind": "stabilized", "index": self.index, "value": gv_str(self.value),
                "values": [gv_str(v) for v in self.values]}


@dataclass(frozen=True)
class StrictlyIncreasing:
    values: tuple

    kind = "strictly_increasing"

    def to_json(self) -> dict:
        return {"kind": "strictly_increasing", "values": [gv_str(v) for v in self.values]}


@dataclass(frozen=True)
class Inconclusive:
    values: tuple

    kind = "inconclusive"

    def to_json(self) -> dict:
        return {"kind": "inconclusive", "values": [gv_str(v) for v in self.values]}


def classify_along_pcs(prefix: PcsPrefix, f: PolyK, min_run: int = 3):
    """How ``nu(f(a_rho))`` behaves at the end of the prefix.

    Values are computed from the last term backwards and only as far as the
    verdict needs.  A strictly increasing verdict needs a final run of at
    least ``min_run`` values; a root of f at the last term is inconclusive.
    """
    terms = prefix.terms
    if not terms:
        raise ValueError("empty prefix")
    if f.is_constant():
        v = f.coeffs[0].valuation() if f.coeffs else INF
        return Stabilized(0, v, (v,) * len(terms))
    back = [_value_at(f, terms[-1])]
    if back[0] is INF or len(terms) < 2:
        return Inconclusive(tuple(back))
    i = len(terms) - 2
    back.append(_value_at(f, terms[i]))
    if back[1] == back[0]:
        while i > 0:
            v = _value_at(f, terms[i - 1])
            if v != back[0]:
                break
            back.append(v)
            i -= 1
        return Stabilized(i, back[0], tuple(reversed(back)))
    while back[-1] < back[-2] and i > 0:
        i -= 1
        back.append(_value_at(f, terms[i]))
    run = len(back) - (0 if back[-1] < back[-2] else 1)
    values = tuple(reversed(back))
    if run >= min_run:
        return StrictlyIncreasing(values[len(back) - run:])
    return Inconclusive(values)


@dataclass(frozen=True)
class Algebraic:
    witness: PolyK
    degree: int
    values: tuple = ()

    kind = "algebraic"

    def to_json(self) -> dict:
        return {"kind": "algebraic", "witness": str(self.witness), "degree": self.degree,
                "values": [gv_str(v) for v in self.values]}


@dataclass(frozen=True)
class TranscendentalUpToCap:
    cap: int
    checked: int
    inconclusive: tuple = ()

    kind = "transcendental_up_to_cap"

    def to_json(self) -> dict:
        return {"kind": "transcendental_up_to_cap", "cap": self.cap, "checked": self.checked,
                "inconclusive": [str(f) for f in self.inconclusive]}


def classify_pcs_type(prefix: PcsPrefix, degree_cap: int, coefficient_pool: Sequence):
    """Sweep monic polynomials up to ``degree_cap`` with coefficients from the pool.

    Returns :class:`Algebraic` with the first strictly increasing witness of
    least degree, or :class:`TranscendentalUpToCap`.
    """
    if not prefix.terms:
        raise ValueError("empty prefix")
    p = prefix.terms[0].p
    pool = [c if isinstance(c, KElem) else KElem.from_int(p, c) for c in coefficient_pool]
    checked = 0
    inconclusive = []
    for d in range(1, degree_cap + 1):
        for combo in itertools.product(pool, repeat=d):
            f = PolyK(p, list(combo) + [1])
            checked += 1
            verdict = classify_along_pcs(prefix, f)
            if isinstance(verdict, StrictlyIncreasing):
                return Algebraic(f, d, verdict.values)
            if isinstance(verdict, Inconclusive):
                inconclusive.append(f)
    return TranscendentalUpToCap(degree_cap, checked, tuple(inconclusive))


# -- minimal pairs -----------------------------------------------------------

@dataclass(frozen=True)
class MinimalPairQuery:
    """``(a, delta)`` with declared degrees for ``a`` and each pool element."""

    a: Any
    degree: int
    delta: GValue
    test_pool: tuple

    def __post_init__(self):
        object.__setattr__(self, "test_pool", tuple(self.test_pool))
        degrees = [self.degree] + [d for _, d in self.test_pool]
        if any(not isinstance(d, int) or d < 1 for d in degrees):
            raise InvalidParameters("declared degrees must be positive integers")


def is_minimal_pair_sampled(q: MinimalPairQuery) -> Verdict:
    """Look for a pool element of smaller degree within ``delta`` of ``a``."""
    values = []
    for b, d in q.test_pool:
        if d >= q.degree:
            continue
        v = _diff_val(b, q.a)
        values.append({"element": str(b), "degree": d, "value": gv_str(v)})
        if v >= q.delta:
            return Falsified(b, tuple(values))
    return NotFalsified(tuple(values))


# -- between sequences and key polynomials -----------------------------------

def _as_k(a) -> KElem:
    if isinstance(a, KElem):
        return a
    if isinstance(a, HahnApprox):
        return KElem.from_series(a)
    raise TypeError(f"{a} is not an element of K")


def keypolys_from_pcs(prefix: PcsPrefix) -> list[PolyK]:
    """``x - a_rho`` for every term of the prefix."""
    return [PolyK.linear(_as_k(a)) for a in prefix.terms]


def pcs_from_keypolys(stages: Sequence[RootData], eta_prime) -> PcsPrefix:
    """Pick per stage the root nearest ``eta_prime`` and check the result is a pcs."""
    terms = []
    for rd in stages:
        best = max(rd.roots, key=lambda r: _diff_val(eta_prime, r))
        terms.append(best)
    prefix = PcsPrefix(terms)
    if len(prefix) >= 3:
        report = pcs_check(prefix)
        if not report.is_pcs:
            raise NotPcs("selected roots do not form a pseudo-convergent sequence",
                         witness=report.witness)
    return prefix
