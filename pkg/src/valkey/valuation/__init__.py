"""MacLane chains, limits, truncations and the invariants computed from them."""

from .base import (
    DEFAULT_N_MAX,
    AugmentedValuation,
    ChainGenerator,
    HahnValuation,
    LimitValuation,
    MonomialValuation,
    TruncatedValuation,
    Unstable,
    ValChain,
    Valuation,
    eval_chain,
    eval_limit,
    eval_monomial,
    truncate,
)
from .ops import (
    ChainReport,
    DecompositionTerm,
    decompose,
    epsilon,
    epsilon_terms,
    is_complete_on,
    nu_divides_witness,
    nu_equiv,
    validate_chain,
)

__all__ = [
    "DEFAULT_N_MAX", "AugmentedValuation", "ChainGenerator", "HahnValuation",
    "LimitValuation", "MonomialValuation", "TruncatedValuation", "Unstable",
    "ValChain", "Valuation", "eval_chain", "eval_limit", "eval_monomial", "truncate",
    "ChainReport", "DecompositionTerm", "decompose", "epsilon", "epsilon_terms",
    "is_complete_on", "nu_divides_witness", "nu_equiv", "validate_chain",
]
