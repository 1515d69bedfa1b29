import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twistfield.galois import (
    FieldPoly,
    count_monic_irreducibles,
    enumerate_monic_irreducibles,
    factor,
    factor_over_extension,
    field,
    is_norm_squarefree,
    multiplicative_order,
    norm_down,
)
from twistfield.polyspace import charpoly_classes, irreducible_codes, poly_space, prime_roots


def poly(p, coeffs, m=1):
    return FieldPoly(field(p, m), coeffs)


@pytest.mark.parametrize("q, ell, n", [(5, 3, 2), (7, 3, 1), (7, 5, 4), (2, 5, 4), (103, 13, 2), (11, 5, 1)])
def test_multiplicative_order(q, ell, n):
    assert multiplicative_order(q, ell) == n


@pytest.mark.parametrize("p, m", [(5, 2), (7, 2), (3, 3), (2, 4), (5, 3), (13, 2)])
def test_field_model_is_canonical(p, m):
    K = field(p, m)
    mod = FieldPoly(field(p), K.modulus)
    assert mod.is_irreducible()
    # every smaller monic of degree m is reducible
    for code in range(mod.code):
        assert not FieldPoly.monic_from_code(field(p), m, code).is_irreducible()
    g = K.generator
    assert K.log(g) == 1
    order = K.order
    assert K.pow(g, order) == 1
    for r in {order // d for d in range(2, order + 1) if order % d == 0 and all(d % e for e in range(2, d))}:
        assert K.pow(g, r) != 1
    for x in range(1, g):
        assert any(K.pow(x, order // r) == 1 for r in range(2, order + 1)
                   if order % r == 0 and all(r % e for e in range(2, r)))


def test_field_instances_are_shared():
    assert field(7) is field(7, 1)


def test_irreducible_counts_small():
    assert len(enumerate_monic_irreducibles(field(7), 1)) == 7
    assert len(enumerate_monic_irreducibles(field(7), 2)) == 21
    assert poly(5, [2, 0, 1]) in enumerate_monic_irreducibles(field(5), 2)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 9])
def test_necklace_identity(q):
    for d in range(1, 7 if q < 7 else 5):
        total = sum(e * count_monic_irreducibles(q, e) for e in range(1, d + 1) if d % e == 0)
        assert total == q**d


@pytest.mark.parametrize("p, d", [(5, 3), (7, 2), (3, 5), (2, 6)])
def test_sieve_matches_enumeration(p, d):
    codes = [P.code for P in enumerate_monic_irreducibles(field(p), d)]
    assert sorted(codes) == list(irreducible_codes(p, d))


def test_factor_over_extension_splits_conjugate_pair():
    P = poly(5, [2, 0, 1])
    facs = factor_over_extension(P, 2)
    assert len(facs) == 2 and all(f.degree == 1 for f in facs)
    K = field(5, 2)
    w = K.neg(facs[0].coeffs[0])
    assert K.mul(w, w) == K.scalar(-2 % 5)
    prod = facs[0] * facs[1]
    assert prod == P.over(K)
    assert facs[0].frobenius(1) == facs[1] and facs[0].frobenius(2) == facs[0]


def test_factor_over_extension_trivial_degree():
    P = poly(7, [4, 1])
    assert factor_over_extension(P, 1) == [P]


def test_norm_down_examples():
    K = field(5, 2)
    t2m2 = poly(5, [-2 % 5, 0, 1])
    w = t2m2.over(K).roots()[0]
    lin = FieldPoly(K, [K.neg(w), 1])
    assert norm_down(lin, 2) == t2m2
    assert is_norm_squarefree(lin, 2)
    assert not is_norm_squarefree(t2m2.over(K), 2)
    assert norm_down(t2m2.over(K), 2) == t2m2 * t2m2
    assert is_norm_squarefree(FieldPoly(K, [1]), 2)


def test_equal_degree_split_in_characteristic_two():
    # t^2 + t + 1 splits over F_4; the trace map must still separate its roots
    f = poly(2, [1, 1, 1]).over(field(2, 2))
    facs = factor(f)
    assert [g.degree for g, _ in facs] == [1, 1]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.lists(st.integers(0, 6), min_size=1, max_size=7),
       st.lists(st.integers(0, 6), min_size=1, max_size=6))
def test_norm_is_multiplicative(p, a, b):
    K = field(p, 2)
    f = FieldPoly(K, [x % K.size for x in a] + [1])
    g = FieldPoly(K, [(3 * x + 1) % K.size for x in b] + [1])
    assert norm_down(f * g, 2) == norm_down(f, 2) * norm_down(g, 2)
    assert norm_down(f, 2).degree == 2 * f.degree


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.lists(st.integers(0, 100), min_size=1, max_size=8))
def test_factorization_recombines_and_squarefree_oracle(p, coeffs):
    f = FieldPoly(field(p), [c % p for c in coeffs] + [1])
    facs = factor(f)
    prod = FieldPoly(field(p), [1])
    for g, e in facs:
        assert g.is_irreducible() and g.is_monic()
        prod = prod * g**e
    assert prod == f
    assert f.is_squarefree() == all(e == 1 for _, e in facs)
    assert f.is_squarefree() == (f.gcd(f.derivative()).degree == 0)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(5, 2), (7, 2), (3, 3), (2, 3)]), st.integers(0, 10**6))
def test_frobenius_orbit_closes(pm, seed):
    p, m = pm
    rng = np.random.default_rng(seed)
    d = m * int(rng.integers(1, 3))
    codes = irreducible_codes(p, d)
    P = FieldPoly.monic_from_code(field(p), d, int(codes[rng.integers(len(codes))]))
    for g in factor_over_extension(P, m):
        assert g.frobenius(m) == g


def test_prime_roots_are_roots():
    for p, k in [(5, 2), (7, 3), (3, 4)]:
        K = field(p, k)
        roots = prime_roots(p, k)
        for code, r in zip(irreducible_codes(p, k), roots):
            P = FieldPoly.monic_from_code(field(p), k, int(code))
            assert P.over(K)(int(r)) == 0


def test_charpoly_classes_count_prime_powers():
    codes, inverse = charpoly_classes(5, 4)
    # classes are P^(4/deg P) for deg P | 4
    assert len(codes) == sum(count_monic_irreducibles(5, e) for e in (1, 2, 4))
    assert np.bincount(inverse).sum() == 5**4


def test_poly_space_factor_structure():
    S = poly_space(5, 4)
    F = field(5)
    for idx in range(1, S.size, 37):
        n = int(S.degree[idx])
        f = FieldPoly.monic_from_code(F, n, idx - int(S.offset[n]))
        facs = factor(f)
        r = int(S.prime[idx])
        P = FieldPoly.monic_from_code(F, int(S.prime_deg[r]), int(S.prime_code[r]))
        assert (P, int(S.exponent[idx])) == min(facs, key=lambda x: (x[0].degree, x[0].code))
