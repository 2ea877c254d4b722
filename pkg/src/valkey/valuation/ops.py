"""Invariants and relations computed against an arbitrary valuation oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import NotComplete, ZeroPolynomial
from ..hahn import KElem
from ..polyring import PolyK, hasse_derivative, q_expand
from ..valgroup import INF, GValue, gv_str
from .base import (
    AugmentedValuation, LimitValuation, MonomialValuation, Unstable, ValChain, Valuation,
    truncate,
)

__all__ = [
    "epsilon", "epsilon_terms", "nu_equiv", "nu_divides_witness", "validate_chain",
    "ChainReport", "DecompositionTerm", "decompose", "is_complete_on",
]


def epsilon_terms(reference: Valuation, f: PolyK) -> list[tuple[int, GValue, GValue]]:
    """``(b, nu(d_b f), (nu(f) - nu(d_b f)) / b)`` for every Hasse derivative of finite value.

    A derivative valued INF (zero, or vanishing at a point) would contribute
    -inf to the maximum and is skipped; the top derivative is a unit.
    """
    if f.degree < 1:
        raise ValueError("epsilon needs a nonconstant polynomial")
    vf = reference(f)
    out = []
    for b in range(1, f.degree + 1):
        d = hasse_derivative(f, b)
        if d.is_zero():
            continue
        vd = reference(d)
        if vd is INF:
            continue
        out.append((b, vd, INF if vf is INF else (vf - vd) / b))
    return out


def epsilon(reference: Valuation, f: PolyK) -> GValue:
    """``max_b (nu(f) - nu(d_b f)) / b``."""
    return max(ratio for _, _, ratio in epsilon_terms(reference, f))


def nu_equiv(reference: Valuation, f: PolyK, g: PolyK) -> bool:
    """``in(f) = in(g)``: equal values and a strictly larger value of ``f - g``."""
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomial("nu-equivalence is defined for nonzero polynomials")
    vf = reference(f)
    if vf != reference(g):
        return False
    return reference.value_or_inf(f - g) > vf


def nu_divides_witness(reference: Valuation, g: PolyK, f: PolyK) -> PolyK | None:
    """A quotient ``h`` with ``f ~ g*h``, or None.

    Only the Euclidean quotient is tried, so None does not certify that g
    fails to nu-divide f.
    """
    h = f // g
    if h.is_zero():
        return None
    return h if nu_equiv(reference, f, g * h) else None


# -- chain validation --------------------------------------------------------

@dataclass
class ChainReport:
    checks: list[dict]

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def failures(self) -> list[dict]:
        return [c for c in self.checks if not c["passed"]]

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": self.checks}


def _key_degree(v: Valuation) -> int:
    if isinstance(v, (AugmentedValuation, MonomialValuation)):
        return v.phi.degree
    if isinstance(v, LimitValuation):
        return v.generator.stage(1)[0].degree
    return 0


def _check_augmentation(checks, label, stage: AugmentedValuation):
    prev = stage.prev
    try:
        ok, detail = stage.increase_check()
    except Exception as exc:  # an unstable witness is a failure, not a crash
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    checks.append({"stage": label, "condition": "augmentation must increase value",
                   "passed": ok, "detail": detail})
    checks.append({"stage": label, "condition": "key degrees nondecreasing",
                   "passed": stage.phi.degree >= _key_degree(prev),
                   "detail": f"deg {stage.phi.degree} after deg {_key_degree(prev)}"})
    if isinstance(prev, AugmentedValuation):
        same = prev.phi == stage.phi and prev.gamma == stage.gamma
        checks.append({"stage": label, "condition": "stage is not a duplicate",
                       "passed": not same, "detail": str(stage.phi)})
        if prev.phi.degree == stage.phi.degree and prev.phi != stage.phi:
            equiv = nu_equiv(prev, prev.phi, stage.phi)
            checks.append({"stage": label,
                           "condition": "consecutive equal-degree keys not equivalent",
                           "passed": not equiv, "detail": f"{prev.phi} vs {stage.phi}"})


def validate_chain(chain: ValChain, generated_stages: int = 6) -> ChainReport:
    """Check the well-formedness conditions of an iterated family.

    Generator blocks are checked on their first ``generated_stages`` stages.
    """
    checks: list[dict] = []
    for i, level in enumerate(chain.levels):
        if isinstance(level, AugmentedValuation):
            _check_augmentation(checks, f"level {i} ({level.kind})", level)
            if level.kind == "limit_augmented":
                r = level.prev.limit(level.phi)
                unstable = isinstance(r, Unstable)
                checks.append({"stage": f"level {i} (limit_augmented)",
                               "condition": "key value unbounded along the generator",
                               "passed": unstable and all(
                                   a < b for a, b in zip(r.values, r.values[1:])),
                               "detail": "witness " + ", ".join(
                                   gv_str(v) for v in (r.values if unstable else (r,)))})
                gen_deg = _key_degree(level.prev)
                checks.append({"stage": f"level {i} (limit_augmented)",
                               "condition": "limit key degree exceeds generated degrees",
                               "passed": level.phi.degree > gen_deg,
                               "detail": f"deg {level.phi.degree} vs {gen_deg}"})
        elif isinstance(level, LimitValuation):
            gen = level.generator
            n = min(generated_stages, gen.n_max)
            degs = set()
            for k in range(1, n + 1):
                stage = gen.level(k)
                degs.add(stage.phi.degree)
                _check_augmentation(checks, f"level {i}.{k} (generated)", stage)
            checks.append({"stage": f"level {i} (limit)",
                           "condition": "generated keys share one degree",
                           "passed": len(degs) == 1, "detail": sorted(degs)})
    return ChainReport(checks)


# -- complete sets -----------------------------------------------------------

@dataclass(frozen=True)
class DecompositionTerm:
    """``scalar * prod Q_k^e`` with exponents keyed by index into the complete set."""

    scalar: KElem
    exponents: tuple[tuple[int, int], ...] = ()

    def with_power(self, index: int, e: int) -> DecompositionTerm:
        if e == 0:
            return self
        exps = dict(self.exponents)
        exps[index] = exps.get(index, 0) + e
        return DecompositionTerm(self.scalar, tuple(sorted(exps.items())))

    def product(self, qset: Sequence[PolyK]) -> PolyK:
        out = PolyK.const(self.scalar)
        for k, e in self.exponents:
            out = out * qset[k] ** e
        return out

    def to_json(self, names: Sequence[str] | None = None) -> dict:
        return {
            "scalar": str(self.scalar),
            "exponents": [{"poly": names[k] if names else k, "e": e} for k, e in self.exponents],
        }


def _fixing_key(reference, qset, f):
    """Index of a Q with deg Q <= deg f and nu_Q(f) = nu(f), or None.

    Later (deeper) members of the set are tried first.
    """
    vf = reference(f)
    for k in range(len(qset) - 1, -1, -1):
        q = qset[k]
        if q.degree <= f.degree and truncate(reference, q, f) == vf:
            return k
    return None


def decompose(reference: Valuation, complete_set: Sequence[PolyK], f: PolyK) -> list[DecompositionTerm]:
    """Write ``f = sum a_i Q^lambda_i`` with every term valued at least ``nu(f)``.

    Follows the induction on degree: pick a Q fixing f, expand f in powers of
    Q and decompose each digit.  Raises NotComplete when no member fixes some
    polynomial met on the way.
    """
    qset = list(complete_set)
    terms = _decompose(reference, qset, f)
    # postconditions are checked even under python -O
    total = PolyK(f.p)
    vf = reference.value_or_inf(f)
    for t in terms:
        prod = t.product(qset)
        total = total + prod
        if reference.value_or_inf(prod) < vf:
            raise AssertionError(f"term {t} is valued below nu(f)")
        if any(qset[k].degree > f.degree for k, _ in t.exponents):
            raise AssertionError(f"term {t} uses a key of degree above deg f")
    if total != f:
        raise AssertionError("decomposition does not re-sum to f")
    return terms


def _decompose(reference, qset, f: PolyK) -> list[DecompositionTerm]:
    if f.is_zero():
        return []
    if f.is_constant():
        return [DecompositionTerm(f.coeffs[0])]
    k = _fixing_key(reference, qset, f)
    if k is None:
        raise NotComplete(f"no member of the set fixes {f}", witness=f)
    out: list[DecompositionTerm] = []
    for i, digit in q_expand(f, qset[k]):
        for t in _decompose(reference, qset, digit):
            out.append(t.with_power(k, i))
    return out


def is_complete_on(reference: Valuation, qset: Sequence[PolyK], sample: Sequence[PolyK]) -> list[dict]:
    """For each sample polynomial, whether some member fixes it."""
    report = []
    qset = list(qset)
    for f in sample:
        if f.is_constant():
            report.append({"poly": str(f), "passed": True, "witness": None, "note": "constant"})
            continue
        k = _fixing_key(reference, qset, f)
        report.append({"poly": str(f), "passed": k is not None,
                       "witness": None if k is None else str(qset[k])})
    return report
