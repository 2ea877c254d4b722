from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import k_elems, pool_polys, series
from valkey.errors import InvalidParameters, NonMonicBase, NotPcs
from valkey.families import eta_point, first_key, omega_chain, partial_sum, phi_omega
from valkey.hahn import HahnApprox, KElem
from valkey.keypoly import (
    Algebraic, Falsified, Inconclusive, MinimalPairQuery, NotFalsified, PcsPrefix, RootData,
    Stabilized, StrictlyIncreasing, TranscendentalUpToCap, alpha_psi_sampled, check_eps_eq_delta,
    classify_along_pcs, classify_pcs_type, delta, is_key_sampled, is_limit_of,
    is_minimal_pair_sampled, keypolys_from_pcs, limit_key_report, pcs_check, pcs_from_keypolys,
)
from valkey.polyring import PolyK
from valkey.valuation import MonomialValuation

F = Fraction


def t(p, e):
    return HahnApprox.monomial(p, e)


def linear_product(roots):
    p = roots[0].p
    f = PolyK.const(1, p)
    for a in roots:
        f = f * PolyK.linear(a)
    return f


def sums(p, n):
    return [partial_sum(p, k) for k in range(n + 1)]


# -- delta and epsilon -------------------------------------------------------------

def test_cubic_with_root_distances_one_two_three():
    p = 2
    y = KElem.y(p)
    roots = [KElem.from_int(p, 0), y, y + y * y]
    etap = HahnApprox(p, [(1, 1), (2, 1), (3, 1), (4, 1)])
    report = check_eps_eq_delta(RootData(linear_product(roots), roots), etap)
    assert report["value"] == "6"
    assert [d["value"] for d in report["derivatives"]] == ["3", "1", "0"]
    assert [d["ratio"] for d in report["derivatives"]] == ["3", "5/2", "2"]
    assert report["root_values"] == ["1", "2", "3"]
    assert report["epsilon"] == report["delta"] == "3"
    assert report["equal"]


def test_cubic_with_root_distances_one_two_two():
    # at p = 2 the first Hasse derivative gains value (ratio -1); p = 3 keeps the ratios 2, 2, 5/3
    p = 3
    y = KElem.y(p)
    roots = [KElem.from_int(p, 0), y, y + y ** 3]
    etap = HahnApprox(p, [(1, 1), (2, 1), (3, 1), (4, 1)])
    report = check_eps_eq_delta(RootData(linear_product(roots), roots), etap)
    assert report["root_values"] == ["1", "2", "2"]
    assert [d["ratio"] for d in report["derivatives"]] == ["2", "2", "5/3"]
    assert report["epsilon"] == report["delta"] == "2"


def test_delta_for_the_artin_schreier_roots():
    p = 2
    etap = eta_point(p, t(p, F(1, 3)))
    rd = RootData(phi_omega(p), [eta_point(p), eta_point(p, HahnApprox.constant(p, 1))])
    assert rd.check_roots()
    assert delta(rd, etap) == F(1, 3)
    assert check_eps_eq_delta(rd, etap, omega_chain(p, F(1, 3)).top)["equal"]


def test_root_data_is_checked():
    p = 2
    with pytest.raises(InvalidParameters):
        RootData(phi_omega(p), [eta_point(p)])
    with pytest.raises(NonMonicBase):
        RootData(PolyK.x(p).scale(KElem.y(p)), [KElem.from_int(p, 0)])
    assert not RootData(PolyK.x(p), [KElem.y(p)]).check_roots()


@pytest.mark.parametrize("p", [2, 3])
@settings(max_examples=120)
@given(data=st.data())
def test_epsilon_equals_delta_on_products_of_linear_factors(p, data):
    roots = data.draw(st.lists(k_elems(p, 2, allow_den=False), min_size=1, max_size=4))
    etap = data.draw(series(p, 4))
    rd = RootData(linear_product(roots), roots)
    report = check_eps_eq_delta(rd, etap)
    assert report["equal"], report


# -- key polynomials ---------------------------------------------------------------

def test_x_is_never_falsified():
    nu = MonomialValuation(2, F(1, 2))
    assert isinstance(is_key_sampled(nu, PolyK.x(2), [PolyK.x(2) + 1]), NotFalsified)


@pytest.mark.parametrize("p", [2, 3])
def test_equal_epsilon_falsifies_a_higher_degree_candidate(p):
    nu = MonomialValuation(p, F(1, 2))
    x = PolyK.x(p)
    verdict = is_key_sampled(nu, x ** 2, [x])
    assert verdict == Falsified(x, verdict.values)
    assert verdict.to_json()["witness"] == "x"


@pytest.mark.parametrize("p", [2, 3])
def test_limit_key_is_not_falsified_by_linear_polynomials(p):
    nu = omega_chain(p, 0).top
    y = KElem.y(p)
    pool = [first_key(p, k) for k in range(1, 6)]
    pool += [PolyK.linear(partial_sum(p, k) + y) for k in range(1, 4)]
    assert isinstance(is_key_sampled(nu, phi_omega(p), pool), NotFalsified)
    for k in range(2, 6):
        assert isinstance(is_key_sampled(nu, first_key(p, k), pool), NotFalsified)


def test_alpha_and_psi():
    p = 2
    nu = omega_chain(p, 0)[1]
    ap = alpha_psi_sampled(nu, first_key(p, 2), [first_key(p, 3), PolyK.x(p), PolyK.const(KElem.y(p, -1))])
    assert ap.alpha == 1
    assert ap.psi == (first_key(p, 3),)
    none = alpha_psi_sampled(nu, first_key(p, 2), [PolyK.x(p)])
    assert none.alpha is None and none.psi == ()


def test_limit_key_conditions():
    p = 2
    nu = omega_chain(p, 0).top
    psi = [first_key(p, k) for k in range(2, 6)]
    lower = [PolyK.x(p)] + psi
    report = limit_key_report(nu, PolyK.x(p), psi, phi_omega(p), lower)
    assert report["passed"], report
    assert report["K2"]["values"] == ["-1/4", "-1/8", "-1/16", "-1/32"]


# -- pseudo-convergent sequences -----------------------------------------------------

@pytest.mark.parametrize("p", [2, 3, 5])
def test_partial_sums_form_a_pcs(p):
    prefix = PcsPrefix(sums(p, 6))
    report = pcs_check(prefix)
    assert report.is_pcs
    assert report.gammas == tuple(F(-1, p ** (n + 1)) for n in range(6))
    assert is_limit_of(prefix, PolyK.x(p), omega_chain(p, 0)[1])
    assert is_limit_of(prefix, eta_point(p))
    assert is_limit_of(PcsPrefix(sums(p, 5)), partial_sum(p, 6))


def test_constant_and_monomial_sequences():
    c = KElem.y(2)
    report = pcs_check(PcsPrefix([c, c, c]))
    assert not report.is_pcs and not report.increasing and not report.triples
    tn = PcsPrefix([t(2, n) for n in range(5)])
    report = pcs_check(tn)
    assert report.is_pcs and report.gammas == (0, 1, 2, 3)
    with pytest.raises(ValueError):
        pcs_check(PcsPrefix([c, c]))


@pytest.mark.parametrize("p", [2, 3])
def test_classification_along_partial_sums(p):
    prefix = PcsPrefix(sums(p, 6)[1:])
    assert classify_along_pcs(prefix, PolyK.x(p)) == Stabilized(0, F(-1, p), (F(-1, p),) * 6)
    grow = classify_along_pcs(prefix, phi_omega(p))
    assert isinstance(grow, StrictlyIncreasing)
    assert grow.values == tuple(F(-1, p ** n) for n in range(1, 7))
    assert isinstance(classify_along_pcs(prefix, PolyK.const(1, p)), Stabilized)
    assert isinstance(classify_along_pcs(prefix, first_key(p, 7)), Inconclusive)


@pytest.mark.parametrize("p", [2, 3])
@given(data=st.data())
def test_lower_degree_polynomials_stabilize(p, data):
    f = data.draw(pool_polys(p, p - 1, 1))
    assume(f.degree >= 1)
    prefix = PcsPrefix(sums(p, 6)[1:])
    assert isinstance(classify_along_pcs(prefix, f), Stabilized)


def test_pcs_type():
    p = 2
    prefix = PcsPrefix(sums(p, 6))
    pool = [0, -1, KElem.y(p, -1)] + sums(p, 3)[1:]
    found = classify_pcs_type(prefix, p, pool)
    assert isinstance(found, Algebraic) and found.witness == phi_omega(p) and found.degree == p
    assert isinstance(classify_pcs_type(prefix, p - 1, pool), TranscendentalUpToCap)
    tn = PcsPrefix([t(2, n) for n in range(5)])
    assert classify_pcs_type(tn, 1, [0]) == Algebraic(PolyK.x(2), 1, (0, 1, 2, 3, 4))


@pytest.mark.parametrize("p", [2, 3])
@given(data=st.data())
def test_increasing_differences_iff_all_triples(p, data):
    terms = data.draw(st.lists(k_elems(p, 2), min_size=3, max_size=6))
    report = pcs_check(PcsPrefix(terms))
    assert report.increasing == report.triples


@given(st.lists(st.integers(-6, 6), min_size=3, max_size=6))
def test_increasing_differences_iff_all_triples_on_monomial_sums(exps):
    acc, terms = HahnApprox.zero(2), []
    for e in exps:
        acc = acc + t(2, e)
        terms.append(acc)
    report = pcs_check(PcsPrefix(terms))
    assert report.increasing == report.triples


# -- minimal pairs -------------------------------------------------------------------

def test_minimal_pairs():
    p = 2
    pool = [(partial_sum(p, k), 1) for k in range(1, 7)]
    assert isinstance(is_minimal_pair_sampled(MinimalPairQuery(KElem.y(p), 1, F(-5), pool)),
                      NotFalsified)
    assert isinstance(is_minimal_pair_sampled(MinimalPairQuery(eta_point(p), 2, F(3), pool)),
                      NotFalsified)
    verdict = is_minimal_pair_sampled(MinimalPairQuery(eta_point(p), 2, F(-1, 4), pool))
    assert isinstance(verdict, Falsified) and verdict.witness == partial_sum(p, 1)
    with pytest.raises(InvalidParameters):
        MinimalPairQuery(eta_point(p), 0, F(0), pool)


# -- between sequences and key polynomials -----------------------------------------

@pytest.mark.parametrize("p", [2, 3])
def test_sequences_and_key_polynomials_correspond(p):
    prefix = PcsPrefix(sums(p, 5)[1:])
    keys = keypolys_from_pcs(prefix)
    assert keys == [first_key(p, k) for k in range(2, 7)]
    assert keypolys_from_pcs(PcsPrefix([])) == []
    etap = eta_point(p, t(p, F(1, 3)))
    stages = [RootData(q, [-q.coeffs[0]]) for q in keys]
    back = pcs_from_keypolys(stages, etap)
    assert back.terms == prefix.terms
    assert keypolys_from_pcs(back) == keys
    assert len(pcs_from_keypolys(stages[:1], etap)) == 1


def test_monomial_key_sequence():
    keys = [PolyK.linear(KElem.y(2, n)) for n in range(1, 5)]
    prefix = pcs_from_keypolys([RootData(q, [-q.coeffs[0]]) for q in keys], HahnApprox.zero(2))
    assert pcs_check(prefix).gammas == (1, 2, 3)


def test_non_pcs_selection_is_rejected():
    p = 2
    y = KElem.y(p)
    stages = [RootData(PolyK.linear(a), [a]) for a in (y ** 2, y, y ** 3)]
    with pytest.raises(NotPcs) as err:
        pcs_from_keypolys(stages, HahnApprox.zero(p))
    assert err.value.witness is not None
