import os
import sys
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from valkey.hahn import HahnApprox, KElem  # noqa: E402
from valkey.polyring import PolyK  # noqa: E402

settings.register_profile("valkey", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("valkey")

PRIMES = (2, 3, 5)


def rationals(max_num=12, max_den=6):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


def p_adic_exponents(p, max_num=8, max_k=2):
    """Exponents in Z[1/p]: the only ones allowed in K."""
    return st.builds(lambda a, k: Fraction(a, p ** k),
                     st.integers(-max_num, max_num), st.integers(0, max_k))


def series(p, max_terms=4, exponents=None, exact=True):
    exps = rationals() if exponents is None else exponents
    terms = st.lists(st.tuples(exps, st.integers(1, p - 1)), max_size=max_terms)
    if exact:
        return terms.map(lambda ts: HahnApprox(p, ts))
    return st.tuples(terms, st.integers(0, 12)).map(
        lambda tp: HahnApprox(p, [t for t in tp[0] if t[0] < tp[1]], tp[1]))


def k_elems(p, max_terms=3, allow_den=True):
    num = series(p, max_terms, p_adic_exponents(p))
    if not allow_den:
        return num.map(lambda s: KElem(p, s))
    den = series(p, 2, p_adic_exponents(p)).filter(lambda s: not s.is_zero())
    return st.one_of(num.map(lambda s: KElem(p, s)),
                     st.tuples(num, den).map(lambda nd: KElem(p, nd[0], nd[1])))


def polys(p, max_degree=3, allow_den=False):
    return st.lists(k_elems(p, 2, allow_den), max_size=max_degree + 1).map(lambda cs: PolyK(p, cs))


def monic_polys(p, min_degree=1, max_degree=3):
    return st.tuples(st.lists(k_elems(p, 2, False), min_size=min_degree, max_size=max_degree)).map(
        lambda t: PolyK(p, list(t[0]) + [1]))


def coefficient_pool(p):
    """Coefficients met in the worked examples: units, y^(+-1), partial sums."""
    from valkey.families import partial_sum
    y = KElem.y(p)
    return [KElem.from_int(p, 1), KElem.from_int(p, -1), y, y.inverse(), KElem.y(p, Fraction(1, p)),
            partial_sum(p, 1), partial_sum(p, 2), partial_sum(p, 3)]


def pool_polys(p, max_degree=None, min_degree=0):
    """Polynomials of degree <= max_degree (default 2p) with pool coefficients."""
    pool = coefficient_pool(p)
    zero = KElem.from_int(p, 0)
    top = 2 * p if max_degree is None else max_degree
    coeff = st.one_of(st.just(zero), st.sampled_from(pool))
    return st.lists(coeff, min_size=min_degree + 1, max_size=top + 1).map(
        lambda cs: PolyK(p, cs)).filter(lambda f: not f.is_zero())


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
