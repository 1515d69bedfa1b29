import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from twistfield.characters import enumerate_characters
from twistfield.constant import (
    QuadraticWeilPair,
    conjugate_product,
    constant_twist_direct,
    constant_twist_lpoly,
    search_deg2_matches,
    vanishing_check,
)
from twistfield.cyclotomic import CycNumber
from twistfield.elliptic import ConstantCurve, constant_curve_with_trace
from twistfield.lfunction import analytic_rank, dirichlet_lpoly, verify_fe

KNOWN_TRACES = {
    (3, 5): {0, 3},
    (3, 7): {-2, -1, 1, 2, 4},
    (5, 3): set(),
    (5, 11): {-2, 2, 3},
    (7, 13): {0},
    (11, 23): set(),
}


@pytest.mark.parametrize("ell, p", sorted(KNOWN_TRACES))
def test_degree_two_search(ell, p):
    res = search_deg2_matches(ell, p)
    assert res.traces == KNOWN_TRACES[(ell, p)]
    assert set(res.witnesses) == res.traces
    for a, chi in res.witnesses.items():
        L = dirichlet_lpoly(chi)
        assert L.degree == 2
        assert [c for c in L.coeffs] == [CycNumber.rational(ell, x) for x in (1, a, p)]


@pytest.mark.parametrize("ell, p", [(3, 5), (3, 7), (5, 11)])
def test_search_matches_brute_force(ell, p):
    found = set()
    for d, odd in ((4, 0), (3, 1)):
        for chi in enumerate_characters(ell, p, d):
            if chi.delta != odd:
                continue
            c = dirichlet_lpoly(chi).coeffs
            if c[1].is_rational() and c[2] == p:
                found.add(int(c[1].to_fraction()))
    assert found == KNOWN_TRACES[(ell, p)]


def test_thin_and_early_modes():
    full = search_deg2_matches(3, 7)
    thin = search_deg2_matches(3, 7, mode="thin")
    assert thin.traces <= full.traces
    assert thin.checked < full.checked
    early = search_deg2_matches(3, 5, stop_early=True)
    assert early.stopped_early and 0 in early.traces
    with pytest.raises(ValueError):
        search_deg2_matches(3, 5, mode="sparse")
    data = json.loads(full.to_json())
    assert data["traces"] == sorted(full.traces)


def seed_character():
    return search_deg2_matches(3, 5).witnesses[0]


def test_supersingular_twist_has_rank_two():
    chi = seed_character()
    assert [int(c.to_fraction()) for c in dirichlet_lpoly(chi).coeffs] == [1, 0, 5]
    E0 = constant_curve_with_trace(5, 0)
    assert E0.lpoly() == [1, 0, 5]
    L = constant_twist_lpoly(E0, chi)
    assert L.integer_coeffs() == [1, 0, -50, 0, 625]
    assert analytic_rank(L) == 2
    assert verify_fe(L)
    assert [c for c in L.coeffs] == constant_twist_direct(E0, chi)
    assert conjugate_product(dirichlet_lpoly(chi)) == [1, 0, 10, 0, 25]
    assert vanishing_check(E0, chi)


def test_vanishing_check_rejects_other_traces():
    chi = seed_character()
    for a in (-4, -3, -2, -1, 1, 2, 3, 4):
        assert not vanishing_check(constant_curve_with_trace(5, a), chi)


def test_weil_pair_arithmetic():
    x = QuadraticWeilPair.root(3, 7, 3)
    y = x.conjugate_root()
    prod = x * y
    total = x + y
    assert prod.is_scalar() and prod.c0 == 7
    assert total.is_scalar() and total.c0 == 3
    # x^n + y^n is the integer power sum of the Frobenius roots
    s2 = x**2 + y**2
    assert s2.is_scalar() and s2.c0 == 3 * 3 - 2 * 7


def _random_curve(rng, p):
    while True:
        A, B = rng.randrange(p), rng.randrange(p)
        if (4 * A**3 + 27 * B**2) % p:
            return ConstantCurve(p, A, B)


@pytest.mark.parametrize("p, degrees", [(5, (2, 4)), (7, (1, 2, 3)), (11, (2,))])
def test_product_formula_matches_euler_product(p, degrees):
    rng = random.Random(p)
    for d in degrees:
        pool = list(enumerate_characters(3, p, d))
        for chi in rng.sample(pool, min(6, len(pool))):
            E0 = _random_curve(rng, p)
            L = constant_twist_lpoly(E0, chi)
            assert L.degree == 2 * (d - 2 + chi.delta)
            assert list(L.coeffs) == constant_twist_direct(E0, chi)
            assert verify_fe(L)


@settings(max_examples=30, deadline=None)
@given(A=st.integers(0, 6), B=st.integers(0, 6), i=st.integers(0, 10**6))
def test_product_of_conjugate_twists_is_integral(A, B, i):
    p = 7
    if (4 * A**3 + 27 * B**2) % p == 0:
        return
    E0 = ConstantCurve(p, A, B)
    pool = list(enumerate_characters(3, p, 2))
    chi = pool[i % len(pool)]
    L1, L2 = constant_twist_lpoly(E0, chi), constant_twist_lpoly(E0, chi.conjugate())
    assert [c.conjugate() for c in L1.coeffs] == L2.coeffs
    assert analytic_rank(L1) == analytic_rank(L2)


def test_thin_search_stops_at_first_supersingular_match():
    res = search_deg2_matches(13, 103, mode="thin", stop_early=True)
    assert res.stopped_early
    assert res.traces == {0}
    coeffs = dirichlet_lpoly(res.witnesses[0]).coeffs
    assert coeffs == [CycNumber.rational(13, x) for x in (1, 0, 103)]
