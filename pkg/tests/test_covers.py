import random
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from twistfield.characters import enumerate_characters
from twistfield.constant import conjugate_product, constant_twist_lpoly, vanishing_check
from twistfield.covers import (
    CoverSpec,
    am_coeffs,
    block_expansion,
    counts_from_lpoly,
    cover_equation,
    generate_vanishing_family,
    genus_and_count,
    psi_gauss_closed_form,
    psi_poly,
    substitute,
    substitution_candidates,
    zeta_count,
)
from twistfield.elliptic import constant_curve_with_trace
from twistfield.galois import FieldPoly, field
from twistfield.lfunction import analytic_rank, dirichlet_lpoly

F5 = field(5)
# y^3 + a1 y + a0 over F_5 with L = (1 + 5u^2)^2
C1_A1 = FieldPoly(F5, [4, 4, 1, 2, 2])
C1_A0 = FieldPoly(F5, [3, 1, 1, 2, 2, 2, 3])


@lru_cache(maxsize=None)
def chars(ell, p, d):
    return tuple(enumerate_characters(ell, p, d))


def c1_character():
    conductor = C1_A1.scale(3)  # a1 = -3 F1 F2
    return next(chi for chi in chars(3, 5, 4) if chi.conductor == conductor and chi.normalized().exponents == (1, 1))


@pytest.mark.parametrize("ell, n, expected", [
    (3, 2, (1, 1)),
    (5, 2, (-1, 1, 1)),
    (7, 2, (-1, -2, 1, 1)),
    (7, 3, (2, 1, 1)),
    (5, 4, (1, 1)),
    (7, 1, (1, 1, 1, 1, 1, 1, 1)),
])
def test_psi_values(ell, n, expected):
    assert psi_poly(ell, n) == expected


@pytest.mark.parametrize("ell", [3, 5, 7, 11, 13, 19, 23])
def test_psi_closed_form(ell):
    assert psi_poly(ell, 2) == psi_gauss_closed_form(ell)


def test_am_coefficients():
    # (y + 1)^2 (y - 2) = y^3 - 3y - 2
    assert am_coeffs(3, 2) == (-2, -3, 0)
    for ell, n in ((5, 2), (7, 2), (7, 3), (11, 2), (13, 3)):
        a = am_coeffs(ell, n)
        assert len(a) == ell and a[ell - 1] == 0
        # y = n_q is a root by construction
        assert n**ell + sum(c * n**m for m, c in enumerate(a)) == 0


def test_block_expansion_is_the_norm_form():
    # prod_j (1 - z^j a - z^(2j) b) = 1 - a^3 - b^3 - 3ab
    assert block_expansion(3, 2) == {(3, 0): -1, (0, 3): -1, (1, 1): -3}
    # Kummer case: prod_j (1 - z^j a) = 1 - a^ell
    assert block_expansion(5, 1) == {(5,): -1}


def test_c1_plane_model_and_counts():
    chi = c1_character()
    spec = CoverSpec.from_character(chi)
    assert spec.n_q == 2 and spec.genus == 2
    model = cover_equation(spec)
    assert model.coeffs[3] == FieldPoly(F5, [1])
    assert model.coeffs[2].is_zero()
    assert model.coeffs[1] == C1_A1 and model.coeffs[0] == C1_A0
    assert cover_equation(spec, "general") == model
    assert conjugate_product(dirichlet_lpoly(chi)) == [1, 0, 10, 0, 25]
    assert genus_and_count(spec, 1, model) == (2, 6)
    assert genus_and_count(spec, 2, model) == (2, 46)


def test_counts_from_lpoly():
    assert counts_from_lpoly([1, 0, 10, 0, 25], 5, 1) == 6
    assert counts_from_lpoly([1, 0, 10, 0, 25], 5, 2) == 46
    assert counts_from_lpoly([1, 0, 5], 5, 1) == 6
    assert counts_from_lpoly([1, 0, 5], 5, 2) == 36
    assert counts_from_lpoly([1], 7, 3) == 344


@pytest.mark.parametrize("ell, p, d", [(3, 7, 1), (3, 7, 2), (3, 5, 2), (3, 11, 2), (5, 11, 1), (3, 7, 3)])
def test_counts_match_zeta(ell, p, d):
    for chi in chars(ell, p, d)[:8]:
        spec = CoverSpec.from_character(chi)
        assert spec.to_character() == chi.normalized()
        assert spec.genus == (ell - 1) * (d - 2 + chi.delta) // 2
        model = cover_equation(spec)
        for k in (1, 2):
            assert genus_and_count(spec, k, model)[1] == zeta_count(chi, k)


def test_kummer_model_is_pure():
    chi = chars(3, 7, 2)[0]
    model = cover_equation(CoverSpec.from_character(chi))
    assert model.coeffs[1].is_zero() and model.coeffs[2].is_zero()
    with pytest.raises(ValueError):
        cover_equation(CoverSpec.from_character(chi), "quadratic")


def test_invalid_parts_rejected():
    F7 = field(7)
    t = FieldPoly(F7, [0, 1])
    with pytest.raises(ValueError):
        CoverSpec(3, 7, (t * t, FieldPoly(F7, [1])))
    with pytest.raises(ValueError):
        CoverSpec(3, 7, (t,))


def test_substitution_candidates_order():
    cands = list(substitution_candidates(5, 2))
    assert cands[0][0] == FieldPoly(F5, [0, 0, 1]) and cands[0][1].degree == 0
    assert all(v.degree < u.degree for u, v in cands)
    assert len(cands) == 25 + 25 * 5


def test_substitution_pulls_back_the_model():
    chi = c1_character()
    spec = CoverSpec.from_character(chi)
    model = cover_equation(spec)
    one = FieldPoly(F5, [1])
    t2 = FieldPoly(F5, [0, 0, 1])
    new, sub = substitute(spec, t2, one)
    assert new.conductor.degree == 8
    assert model.pull_back(t2, one, -sub.y_power) == cover_equation(new)
    assert "t -> t^2" in sub.describe()
    with pytest.raises(ValueError):
        substitute(spec, one, one)
    # non-monic pulled-back parts are rejected
    assert substitute(spec, FieldPoly(F5, [0, 0, 2]), one) is None


def test_vanishing_family():
    chi = c1_character()
    E0 = constant_curve_with_trace(5, 0)
    report = generate_vanishing_family(chi, E0, 5, 12)
    assert len(report.members) >= 5 and report.shortfall == 0
    keys = {m.character.serialize() for m in report.members}
    assert len(keys) == len(report.members)
    for m in report.members:
        assert m.character.conductor_degree <= 12
        assert vanishing_check(E0, m.character)
        assert m.rank == analytic_rank(constant_twist_lpoly(E0, m.character)) >= 1
    with pytest.raises(ValueError):
        generate_vanishing_family(chi, constant_curve_with_trace(5, 2), 3, 12)


@settings(max_examples=20, deadline=None)
@given(i=st.integers(0, 10**6), j=st.integers(0, 10**6))
def test_substitution_preserves_character_data(i, j):
    pool = chars(3, 7, 2)
    chi = pool[i % len(pool)]
    spec = CoverSpec.from_character(chi)
    cands = list(substitution_candidates(7, 2))
    u, v = cands[j % len(cands)]
    out = substitute(spec, u, v)
    if out is None:
        return
    new, sub = out
    assert new.conductor.is_squarefree()
    assert cover_equation(spec).pull_back(u, v, -sub.y_power) == cover_equation(new)
    back = new.to_character()
    assert back.conductor == new.conductor
