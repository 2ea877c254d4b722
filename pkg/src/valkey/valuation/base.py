"""Valuations on K[x]: monomial, augmented, limit and limit-augmented.

Every valuation here is a callable ``nu(f) -> GValue`` restricting to the
t-adic valuation ``nu_0`` on constants.  Values are cached per instance; a
cache only ever stores exact results, so sharing instances across threads is
safe.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, Union

from ..errors import InvalidAugmentation, UnstableLimit, ZeroPolynomial
from ..hahn import KElem, Point, hahn_poly_valuation
from ..polyring import PolyK, q_expand
from ..valgroup import INF, GValue, gv_str, rat

__all__ = [
    "Valuation", "MonomialValuation", "AugmentedValuation", "ChainGenerator",
    "LimitValuation", "TruncatedValuation", "HahnValuation", "Unstable",
    "ValChain", "eval_monomial", "eval_chain", "eval_limit", "truncate",
]

DEFAULT_N_MAX = 20


def _gamma(value) -> GValue:
    if value is INF:
        return INF
    return rat(value)


class Valuation:
    """Base class: caching, the zero check and the restriction to K."""

    kind = "valuation"

    def __init__(self, p: int):
        self.p = p
        self._cache: dict[PolyK, GValue] = {}
        self._lock = threading.Lock()

    def __call__(self, f) -> GValue:
        if isinstance(f, KElem):
            return f.valuation()
        if f.is_zero():
            raise ZeroPolynomial("the zero polynomial has value infinity by convention only")
        if f.is_constant():
            return f.coeffs[0].valuation()
        try:
            return self._cache[f]
        except KeyError:
            pass
        value = self._value(f)
        with self._lock:
            self._cache[f] = value
        return value

    def value_or_inf(self, f) -> GValue:
        """Like calling the valuation, but the zero polynomial maps to INF."""
        if isinstance(f, PolyK) and f.is_zero():
            return INF
        return self(f)

    def _value(self, f: PolyK) -> GValue:
        raise NotImplementedError

    def describe(self) -> str:
        return self.kind


class MonomialValuation(Valuation):
    """``min_i nu_0(a_i) + i*gamma``."""

    kind = "monomial"

    def __init__(self, p: int, gamma):
        super().__init__(p)
        self.gamma = _gamma(gamma)
        self.phi = PolyK.x(p)

    def _value(self, f):
        return min(c.valuation() + i * self.gamma for i, c in enumerate(f.coeffs) if not c.is_zero())

    def describe(self):
        return f"[nu_0; nu(x) = {gv_str(self.gamma)}]"


class AugmentedValuation(Valuation):
    """``[prev; nu(phi) = gamma]``, evaluated through the phi-expansion.

    On top of a :class:`LimitValuation` this is a limit-augmented valuation.
    With ``check=True`` the constructor rejects ``gamma`` not exceeding the
    previous value of ``phi``.
    """

    def __init__(self, prev: Valuation, phi: PolyK, gamma, check: bool = True):
        super().__init__(prev.p)
        if not phi.is_monic() or phi.degree < 1:
            raise InvalidAugmentation(f"key polynomial must be monic of positive degree: {phi}")
        self.prev = prev
        self.phi = phi
        self.gamma = _gamma(gamma)
        self.kind = "limit_augmented" if isinstance(prev, LimitValuation) else "augmented"
        if check:
            ok, detail = self.increase_check()
            if not ok:
                raise InvalidAugmentation(f"augmentation must increase value: {detail}")

    def previous_values(self) -> tuple[GValue, ...]:
        """Values of phi below this stage (the witness sequence for limits)."""
        if isinstance(self.prev, LimitValuation):
            r = self.prev.limit(self.phi)
            return r.values if isinstance(r, Unstable) else (r,)
        return (self.prev(self.phi),)

    def increase_check(self) -> tuple[bool, str]:
        prev_vals = self.previous_values()
        top = max(prev_vals)
        ok = self.gamma > top
        return ok, f"gamma {gv_str(self.gamma)} vs previous value {gv_str(top)}"

    def _value(self, f):
        if f.degree < self.phi.degree:
            return self.prev(f)
        best = INF
        for i, d in q_expand(f, self.phi):
            if not d.is_zero():
                best = min(best, self.prev(d) + i * self.gamma)
        return best

    def describe(self):
        return f"[{self.prev.describe()}; nu({self.phi}) = {gv_str(self.gamma)}]"


@dataclass(frozen=True)
class Unstable:
    """A limit evaluation that had not stabilized at the cap."""

    values: tuple[GValue, ...]


class ChainGenerator:
    """An omega-indexed family of augmentations on top of ``base``.

    ``rule(n)`` returns ``(phi, gamma)`` for the n-th generated stage
    (``n >= 1``); level 0 is ``base`` itself.
    """

    def __init__(self, base: Valuation, rule: Callable[[int], tuple], n_max: int = DEFAULT_N_MAX,
                 name: str = "generator"):
        self.base = base
        self.rule = rule
        self.n_max = n_max
        self.name = name
        self._levels: list[Valuation] = [base]
        self._lock = threading.Lock()

    @property
    def p(self) -> int:
        return self.base.p

    def stage(self, n: int) -> tuple[PolyK, GValue]:
        phi, gamma = self.rule(n)
        return phi, _gamma(gamma)

    def level(self, n: int) -> Valuation:
        with self._lock:
            while len(self._levels) <= n:
                k = len(self._levels)
                phi, gamma = self.stage(k)
                self._levels.append(AugmentedValuation(self._levels[-1], phi, gamma, check=False))
            return self._levels[n]


def eval_limit(gen: ChainGenerator, f: PolyK, n_max: int | None = None) -> Union[GValue, Unstable]:
    """Value of ``f`` under the limit of ``gen``, detected by stabilization."""
    if f.is_zero():
        raise ZeroPolynomial("the zero polynomial has no finite value")
    cap = gen.n_max if n_max is None else n_max
    values: list[GValue] = []
    for n in range(cap + 1):
        v = gen.level(n)(f)
        if values and v == values[-1]:
            return v
        values.append(v)
    return Unstable(tuple(values))


class LimitValuation(Valuation):
    """``sup_n nu_n`` over a :class:`ChainGenerator`, capped at ``n_max``."""

    kind = "limit"

    def __init__(self, generator: ChainGenerator):
        super().__init__(generator.p)
        self.generator = generator
        self._limits: dict[PolyK, Union[GValue, Unstable]] = {}

    def limit(self, f: PolyK) -> Union[GValue, Unstable]:
        if f.is_constant():
            return self(f)
        r = self._limits.get(f)
        if r is None:
            r = eval_limit(self.generator, f)
            self._limits[f] = r
        return r

    def _value(self, f):
        r = self.limit(f)
        if isinstance(r, Unstable):
            raise UnstableLimit(
                f"{f} did not stabilize within {self.generator.n_max} stages", r.values
            )
        return r

    def describe(self):
        return f"lim {self.generator.name} over {self.generator.base.describe()}"


class TruncatedValuation(Valuation):
    """The q-truncation ``nu_q`` of a reference valuation."""

    kind = "truncation"

    def __init__(self, reference: Valuation, q: PolyK):
        super().__init__(reference.p)
        if not q.is_monic() or q.degree < 1:
            from ..errors import NonMonicBase
            raise NonMonicBase(f"truncation needs a monic polynomial: {q}")
        self.reference = reference
        self.q = q

    def _value(self, f):
        return truncate(self.reference, self.q, f)

    def describe(self):
        return f"truncation of {self.reference.describe()} by {self.q}"


class HahnValuation(Valuation):
    """``f -> nu_t(f(eta))`` for a Hahn point ``eta``."""

    kind = "hahn"

    def __init__(self, p: int, point: Point, precision=None):
        super().__init__(p)
        self.point = point
        self.precision = precision

    def _value(self, f):
        return hahn_poly_valuation(f, self.point, self.precision)

    def describe(self):
        return f"nu_t at {self.point}"


def truncate(reference: Valuation, q: PolyK, f: PolyK) -> GValue:
    """``nu_q(f) = min_i nu(f_i) + i*nu(q)`` over the q-expansion of f."""
    if f.is_zero():
        raise ZeroPolynomial("the zero polynomial has no finite value")
    if f.degree < q.degree:
        return reference(f)
    vq = reference(q)
    best = INF
    for i, d in q_expand(f, q):
        if not d.is_zero():
            best = min(best, reference(d) + (i * vq if i else 0))
    return best


class ValChain:
    """An immutable MacLane chain: a monomial level followed by stages.

    ``levels[0]`` is the monomial valuation; each later level is an
    augmentation, a limit over a generator, or a limit-augmentation.
    """

    def __init__(self, levels: tuple[Valuation, ...]):
        self.levels = tuple(levels)

    @classmethod
    def monomial(cls, p: int, gamma) -> ValChain:
        return cls((MonomialValuation(p, gamma),))

    @property
    def p(self) -> int:
        return self.levels[0].p

    @property
    def top(self) -> Valuation:
        return self.levels[-1]

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, i):
        return self.levels[i]

    def augment(self, phi: PolyK, gamma, check: bool = True) -> ValChain:
        return ValChain(self.levels + (AugmentedValuation(self.top, phi, gamma, check=check),))

    def limit(self, rule, n_max: int = DEFAULT_N_MAX, name: str = "generator") -> ValChain:
        gen = ChainGenerator(self.top, rule, n_max, name)
        return ValChain(self.levels + (LimitValuation(gen),))

    def __call__(self, f):
        return self.top(f)

    def stages(self) -> list[dict]:
        out = []
        for i, v in enumerate(self.levels):
            entry = {"level": i, "kind": v.kind}
            if isinstance(v, MonomialValuation):
                entry["gamma"] = gv_str(v.gamma)
            elif isinstance(v, AugmentedValuation):
                entry["phi"] = str(v.phi)
                entry["gamma"] = gv_str(v.gamma)
            elif isinstance(v, LimitValuation):
                entry["generator"] = v.generator.name
                entry["n_max"] = v.generator.n_max
            out.append(entry)
        return out


def eval_monomial(gamma, f: PolyK) -> GValue:
    return MonomialValuation(f.p, gamma)(f)


def eval_chain(chain: ValChain, f: PolyK) -> GValue:
    return chain.top(f)
