"""Primitive Dirichlet characters of prime order ell over F_p(t).

A character is stored as a list of conductor primes with exponents.  The
value of the residue symbol at P is read off in F_Q, Q = p^{n_q}, where
P splits into n_q conjugate primes; the least of them (in code order) is
the one used.  Roots of unity in F_Q are identified with complex ones by
sending generator^((Q-1)/ell) to exp(2 pi i / ell).

Bulk evaluation goes through exponent arrays: an entry k in [0, ell)
stands for zeta^k and -1 stands for the value 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

from .cyclotomic import CycNumber
from .galois import (
    INFINITY,
    TABLE_LIMIT,
    FieldCtx,
    FieldPoly,
    Place,
    factor_over_extension,
    field,
    multiplicative_order,
    resultant,
)
from .polyspace import PolySpace, charpoly_classes, poly_space, prime_roots

ZERO = -1


@dataclass(frozen=True)
class OmegaChoice:
    """Fixed primitive ell-th root of unity in F_{p^{n_q}}."""

    ell: int
    p: int

    @cached_property
    def n_q(self) -> int:
        return multiplicative_order(self.p, self.ell)

    @cached_property
    def ctx(self) -> FieldCtx:
        return field(self.p, self.n_q)

    @cached_property
    def zeta_f(self) -> int:
        ctx = self.ctx
        return ctx.pow(ctx.generator, ctx.order // self.ell)

    def exponent_of(self, x: int) -> int:
        """k with x = zeta_f^k; x must be an ell-th root of unity."""
        ctx = self.ctx
        lg = ctx.log(x)
        step = ctx.order // self.ell
        if lg % step:
            raise ValueError("not an ell-th root of unity")
        return lg // step


@lru_cache(maxsize=None)
def omega_choice(ell: int, p: int) -> OmegaChoice:
    return OmegaChoice(ell, p)


def _check_prime(P: FieldPoly, n_q: int) -> None:
    if P.ctx.m != 1:
        raise ValueError("conductor primes live over the prime field")
    if not P.is_monic() or not P.is_irreducible():
        raise ValueError(f"{P} is not a monic irreducible")
    if P.degree % n_q:
        raise ValueError(f"deg {P} is not divisible by n_q = {n_q}")


@lru_cache(maxsize=4096)
def canonical_factor(P: FieldPoly, n_q: int) -> FieldPoly:
    """The least factor of P over F_{p^{n_q}}."""
    return factor_over_extension(P, n_q)[0]


def residue_exponent(P: FieldPoly, a: FieldPoly, omega: OmegaChoice) -> int:
    """Exponent k of the ell-th power residue symbol (a/P) = zeta^k, or ZERO.

    Computed from the definition: a^((p^deg P - 1)/ell) modulo the
    canonical factor of P over F_Q.
    """
    _check_prime(P, omega.n_q)
    ctx = omega.ctx
    F1 = canonical_factor(P, omega.n_q)
    r = a.over(ctx) % F1
    if r.is_zero():
        return ZERO
    e = (P.ctx.size ** P.degree - 1) // omega.ell
    val = r.powmod(e, F1)
    if val.degree != 0:
        raise AssertionError("power residue is not a constant")
    return omega.exponent_of(val.coeffs[0])


def residue_symbol(P: FieldPoly, a: FieldPoly, omega: OmegaChoice) -> CycNumber:
    k = residue_exponent(P, a, omega)
    return CycNumber.zero(omega.ell) if k == ZERO else CycNumber.root(omega.ell, k)


# ---------------------------------------------------------------------------
# bulk evaluation on all monic polynomials of bounded degree


def _embedding_image(ctx_small: FieldCtx, K: FieldCtx) -> int:
    """Image in K of the generator x of ctx_small's defining basis."""
    if ctx_small.m == 1:
        return 0
    mod = FieldPoly(field(K.p, 1), ctx_small.modulus).over(K)
    return mod.roots()[0]


def _embed(c: int, ctx_small: FieldCtx, K: FieldCtx, x_img: int) -> int:
    if ctx_small.m == 1:
        return c
    acc = 0
    for d in reversed(ctx_small.to_digits(c)):
        acc = K.add(K.mul(acc, x_img), d)
    return acc


def _evaluate_all_monic(K: FieldCtx, p: int, theta: int, max_deg: int) -> np.ndarray:
    """f(theta) for every monic f of degree <= max_deg, in PolySpace order."""
    segments = [np.ones(1, dtype=np.int64)]
    low = np.zeros(1, dtype=np.int64)
    consts = np.arange(p, dtype=np.int64)
    power = 1
    for n in range(1, max_deg + 1):
        term = K.vmul(consts, np.full(p, power, dtype=np.int64))
        low = K.vadd(np.tile(low, p), np.repeat(term, p ** (n - 1)))
        power = K.mul(power, theta)
        segments.append(K.vadd(low, np.full(len(low), power, dtype=np.int64)))
    return np.concatenate(segments)


@lru_cache(maxsize=8192)
def prime_symbol_table(ell: int, P: FieldPoly, max_deg: int) -> np.ndarray:
    """Residue-symbol exponents (a/P) for every monic a of degree <= max_deg."""
    p = P.ctx.p
    omega = omega_choice(ell, p)
    _check_prime(P, omega.n_q)
    if p ** P.degree <= TABLE_LIMIT:
        return _symbol_table_by_root(ell, P, max_deg, omega)
    return _symbol_table_by_resultant(ell, P, max_deg, omega)


def _root_setup(ell: int, P: FieldPoly, omega: OmegaChoice) -> tuple[FieldCtx, int, int]:
    # The residue field F_p[t]/(P) is realised as K = F_{p^deg P} by sending
    # t to a root theta of the canonical factor; then (a/P) = a(theta)^((|K|-1)/ell),
    # read off as log(a(theta)) * s_inv mod ell.
    K = field(P.ctx.p, P.degree)
    FQ = omega.ctx
    x_img = _embedding_image(FQ, K)
    F1 = canonical_factor(P, omega.n_q)
    F1K = FieldPoly(K, [_embed(c, FQ, K, x_img) for c in F1.coeffs])
    theta = F1K.roots()[0]
    step = K.order // ell
    s = K.log(_embed(omega.zeta_f, FQ, K, x_img))
    assert s % step == 0
    return K, theta, pow(s // step, -1, ell)


def _symbol_table_by_root(ell: int, P: FieldPoly, max_deg: int, omega: OmegaChoice) -> np.ndarray:
    K, theta, s_inv = _root_setup(ell, P, omega)
    vals = _evaluate_all_monic(K, P.ctx.p, theta, max_deg)
    logs = K.vlog(vals)
    return np.where(logs < 0, ZERO, logs % ell * s_inv % ell)


@lru_cache(maxsize=512)
def prime_symbol_on_codes(ell: int, P: FieldPoly, k: int, codes: tuple | None = None) -> np.ndarray:
    """Symbol exponents (f/P) as int8 for monic degree-k f given by lower-coefficient codes.

    With ``codes`` None the codes are those of :func:`charpoly_classes`.
    """
    p = P.ctx.p
    omega = omega_choice(ell, p)
    _check_prime(P, omega.n_q)
    K, theta, s_inv = _root_setup(ell, P, omega)
    arr = charpoly_classes(p, k)[0] if codes is None else np.asarray(codes, dtype=np.int64)
    K._build_tables()
    acc = np.ones(len(arr), dtype=np.int64)
    th = np.full(len(arr), theta, dtype=np.int64)
    for i in reversed(range(k)):
        acc = K.vadd(K.vmul(acc, th), (arr // p**i) % p)
    logs = K.vlog(acc)
    return np.where(logs < 0, ZERO, logs % ell * s_inv % ell).astype(np.int8)


def _symbol_table_by_resultant(ell: int, P: FieldPoly, max_deg: int, omega: OmegaChoice) -> np.ndarray:
    # (a/P) = Res(F1, a)^((Q-1)/ell) in F_Q; evaluated on primes, then extended.
    space = poly_space(P.ctx.p, max_deg)
    FQ = omega.ctx
    F1 = canonical_factor(P, omega.n_q)
    base = P.ctx
    on_primes = np.empty(space.num_primes, dtype=np.int64)
    for r in range(space.num_primes):
        pi = FieldPoly.monic_from_code(base, int(space.prime_deg[r]), int(space.prime_code[r])).over(FQ)
        res = resultant(F1, pi)
        on_primes[r] = ZERO if res == 0 else FQ.log(res) % ell
    return extend_exponents(space, on_primes, ell)


def extend_exponents(space: PolySpace, on_primes: np.ndarray, ell: int) -> np.ndarray:
    """Completely multiplicative extension of exponent values given on primes."""

    def pp(ranks, exps):
        k = on_primes[ranks]
        return np.where(k == ZERO, ZERO, k * exps % ell)

    def combine(x, y):
        return np.where((x == ZERO) | (y == ZERO), ZERO, (x + y) % ell)

    return space.extend(pp, 0, combine)


def combine_tables(tables: Sequence[np.ndarray], exponents: Sequence[int], ell: int) -> np.ndarray:
    out = np.zeros_like(tables[0])
    dead = np.zeros(tables[0].shape, dtype=bool)
    for t, e in zip(tables, exponents):
        dead |= t == ZERO
        out = (out + t * e) % ell
    return np.where(dead, ZERO, out)


# ---------------------------------------------------------------------------
# characters


def _poly_key(P: FieldPoly):
    return P.key()


@dataclass(frozen=True)
class OrderLCharacter:
    """chi = prod_i (./P_i)^{e_i}, primitive of order ell with monic conductor prod P_i."""

    ell: int
    p: int
    primes: tuple[FieldPoly, ...]
    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.primes) != len(self.exponents):
            raise ValueError("one exponent per prime")
        if len(set(self.primes)) != len(self.primes):
            raise ValueError("conductor primes must be distinct")
        n_q = multiplicative_order(self.p, self.ell)
        for P, e in zip(self.primes, self.exponents):
            if P.ctx.p != self.p:
                raise ValueError("prime over the wrong field")
            _check_prime(P, n_q)
            if not 1 <= e <= self.ell - 1:
                raise ValueError("exponents must lie in 1..ell-1")

    @classmethod
    def from_pairs(cls, ell: int, pairs: Iterable[tuple[FieldPoly, int]]) -> "OrderLCharacter":
        pairs = sorted(((P, e % ell) for P, e in pairs), key=lambda pe: _poly_key(pe[0]))
        P = pairs[0][0] if pairs else None
        return cls(ell, P.ctx.p, tuple(x for x, _ in pairs), tuple(e for _, e in pairs))

    # -- structure -------------------------------------------------------------
    @property
    def q(self) -> int:
        return self.p

    @cached_property
    def n_q(self) -> int:
        return multiplicative_order(self.p, self.ell)

    @property
    def omega(self) -> OmegaChoice:
        return omega_choice(self.ell, self.p)

    @cached_property
    def conductor(self) -> FieldPoly:
        out = FieldPoly(field(self.p), (1,))
        for P in self.primes:
            out = out * P
        return out

    @property
    def conductor_degree(self) -> int:
        return sum(P.degree for P in self.primes)

    @cached_property
    def delta(self) -> int:
        """1 if chi is odd (nontrivial on constants), else 0."""
        if self.n_q > 1:
            return 0
        weighted = sum(e * P.degree for P, e in zip(self.primes, self.exponents))
        return 0 if weighted % self.ell == 0 else 1

    @property
    def is_kummer(self) -> bool:
        return self.n_q == 1

    def power(self, i: int) -> "OrderLCharacter":
        i %= self.ell
        if i == 0:
            raise ValueError("trivial power")
        return OrderLCharacter(self.ell, self.p, self.primes, tuple(e * i % self.ell for e in self.exponents))

    def conjugate(self) -> "OrderLCharacter":
        return self.power(self.ell - 1)

    def normalized(self) -> "OrderLCharacter":
        """The power of chi whose first exponent is 1."""
        return self.power(pow(self.exponents[0], -1, self.ell))

    def same_extension(self, other: "OrderLCharacter") -> bool:
        return self.primes == other.primes and self.normalized().exponents == other.normalized().exponents

    # -- evaluation --------------------------------------------------------------
    def exponent_at(self, f: FieldPoly) -> int:
        """Exponent of chi(f), or ZERO when f shares a factor with the conductor."""
        if f.is_zero():
            return ZERO
        total = 0
        for P, e in zip(self.primes, self.exponents):
            k = residue_exponent(P, f, self.omega)
            if k == ZERO:
                return ZERO
            total += k * e
        return total % self.ell

    def __call__(self, f: FieldPoly | Place) -> CycNumber:
        return char_eval(self, f)

    def infinity_value(self) -> int:
        return 1 - self.delta

    def table(self, max_deg: int) -> np.ndarray:
        """Exponents of chi on every monic polynomial of degree <= max_deg."""
        tables = [prime_symbol_table(self.ell, P, max_deg) for P in self.primes]
        if not tables:
            return np.zeros(poly_space(self.p, max_deg).size, dtype=np.int64)
        return combine_tables(tables, self.exponents, self.ell)

    def constant_exponent(self, c: int) -> int:
        """Exponent of chi on the constant c in F_p^*."""
        return self.exponent_at(FieldPoly(field(self.p), (c,)))

    # -- text --------------------------------------------------------------------
    def serialize(self) -> str:
        F = ",".join(map(str, self.conductor.coeffs))
        parts = " ".join(f"({','.join(map(str, P.coeffs))}:{e})" for P, e in zip(self.primes, self.exponents))
        return f"{self.ell};{self.p};{F};{parts};{self.delta}"

    @classmethod
    def parse(cls, text: str) -> "OrderLCharacter":
        ell, p, _, parts, _ = text.split(";")
        ell, p = int(ell), int(p)
        F = field(p)
        pairs = []
        for item in parts.split():
            coeffs, e = item.strip("()").split(":")
            pairs.append((FieldPoly(F, [int(c) for c in coeffs.split(",")]), int(e)))
        return cls(ell, p, tuple(P for P, _ in pairs), tuple(e for _, e in pairs))

    def __str__(self) -> str:
        inner = " * ".join(f"({P})^{e}" if e != 1 else f"({P})" for P, e in zip(self.primes, self.exponents))
        return f"chi[ell={self.ell}, p={self.p}: {inner}]"


def char_eval(chi: OrderLCharacter, f: FieldPoly | Place) -> CycNumber:
    ell = chi.ell
    if isinstance(f, Place):
        if f.is_infinite:
            return CycNumber.rational(ell, chi.infinity_value())
        f = f.poly
    k = chi.exponent_at(f)
    return CycNumber.zero(ell) if k == ZERO else CycNumber.root(ell, k)


def parity(chi: OrderLCharacter) -> int:
    """delta_chi, cross-checked against the value on a generator of F_p^*."""
    g = field(chi.p).generator
    nontrivial = chi.constant_exponent(g) != 0
    if nontrivial != bool(chi.delta):
        raise AssertionError("parity disagrees with the value on constants")
    return chi.delta


# ---------------------------------------------------------------------------
# enumeration


def _as_poly(x) -> FieldPoly | None:
    if isinstance(x, Place):
        return x.poly
    return x


@lru_cache(maxsize=256)
def _admissible_primes(ell: int, p: int, max_deg: int, avoid: frozenset) -> tuple[FieldPoly, ...]:
    from .galois import enumerate_monic_irreducibles

    n_q = multiplicative_order(p, ell)
    F = field(p)
    out = []
    for k in range(n_q, max_deg + 1, n_q):
        for P in enumerate_monic_irreducibles(F, k):
            if P not in avoid:
                out.append(P)
    return tuple(out)


def conductors(ell: int, p: int, d: int, avoid: Iterable = ()) -> Iterator[tuple[FieldPoly, ...]]:
    """Square-free supports of degree d (tuples of increasing primes)."""
    bad = frozenset(P for P in (_as_poly(x) for x in avoid) if P is not None)
    primes = _admissible_primes(ell, p, d, bad)

    def rec(start: int, remaining: int, chosen: tuple):
        if remaining == 0:
            yield chosen
            return
        for i in range(start, len(primes)):
            P = primes[i]
            if P.degree > remaining:
                break
            yield from rec(i + 1, remaining - P.degree, chosen + (P,))

    if d >= 1:
        yield from rec(0, d, ())


def enumerate_characters(ell: int, p: int, d: int, avoid: Iterable = ()) -> Iterator[OrderLCharacter]:
    """One character per order-ell cyclic extension with monic conductor of degree d.

    Places in ``avoid`` are excluded from conductors; the infinite place
    does not restrict conductors (odd characters remain admissible).
    """
    for support in conductors(ell, p, d, avoid):
        for tail in product(range(1, ell), repeat=len(support) - 1):
            yield OrderLCharacter(ell, p, support, (1,) + tail)


# ---------------------------------------------------------------------------
# Gauss sums (floating point)


def _all_polys_lower(p: int, d: int) -> np.ndarray:
    from .polyspace import lower_digits

    return lower_digits(p, d)


def gauss_sum(chi: OrderLCharacter) -> complex:
    """G(chi) = sum over a mod F of chi(a) e(a/F) with the 1/t residue exponential."""
    ell, p, d = chi.ell, chi.p, chi.conductor_degree
    z = np.exp(2j * np.pi * np.arange(ell) / ell)
    zp = np.exp(2j * np.pi * np.arange(p) / p)
    tab = chi.table(max(d - 1, 0))
    space = poly_space(p, max(d - 1, 0))
    const_exp = [0] + [chi.constant_exponent(c) for c in range(1, p)]
    total = 0j
    for n in range(d):
        ks = tab[space.degree_slice(n)]
        live = ks != ZERO
        base = z[ks[live]]
        for c in range(1, p):
            lead = c if n == d - 1 else 0
            total += base.sum() * z[const_exp[c]] * zp[lead]
    return complex(total)


def tau(chi: OrderLCharacter) -> complex:
    """sum over a in F_p^* of chi(a) exp(2 pi i a / p)."""
    ell, p = chi.ell, chi.p
    return sum(
        cmath.exp(2j * math.pi * chi.constant_exponent(a) / ell) * cmath.exp(2j * math.pi * a / p) for a in range(1, p)
    )


def gauss_sign(chi: OrderLCharacter) -> complex:
    G = gauss_sum(chi)
    if abs(G) < 1e-9:
        raise ValueError("vanishing Gauss sum; character not primitive?")
    w = G / abs(G)
    if chi.delta:
        w *= math.sqrt(chi.q) / tau(chi)
    return w


def _embedding_table(ctx_small: FieldCtx, K: FieldCtx) -> np.ndarray:
    """Codes in K of every element of ctx_small under the fixed embedding."""
    x_img = _embedding_image(ctx_small, K)
    return np.array([_embed(c, ctx_small, K, x_img) for c in range(ctx_small.size)], dtype=np.int64)


@lru_cache(maxsize=64)
def canonical_roots(ell: int, p: int, k: int) -> np.ndarray:
    """For every admissible prime of degree k (code order), a root in F_{p^k}
    of the image of its canonical factor.

    The factors over F_Q are assembled from Frobenius orbits of one root, so
    the least one can be picked for all primes at once.
    """
    omega = omega_choice(ell, p)
    n = omega.n_q
    if k % n:
        raise ValueError(f"degree {k} is not a multiple of {n}")
    roots = prime_roots(p, k)
    if n == 1:
        return roots
    K = field(p, k)
    K._build_tables()
    FQ = omega.ctx
    back = np.full(K.size, -1, dtype=np.int64)
    back[_embedding_table(FQ, K)] = np.arange(FQ.size, dtype=np.int64)
    logs = K.vlog(roots)
    conj = [K.exp_arr[(logs * pow(p, i, K.order)) % K.order] for i in range(k)]

    def factor_coeffs(j):
        coeffs = [np.ones(len(roots), dtype=np.int64)]
        for i in range(k // n):
            neg = K.vneg(conj[(j + n * i) % k])
            new = [K.vmul(neg, coeffs[0])]
            for c in range(1, len(coeffs)):
                new.append(K.vadd(coeffs[c - 1], K.vmul(neg, coeffs[c])))
            new.append(coeffs[-1])
            coeffs = new
        out = [back[c] for c in coeffs[:-1]]
        assert all(np.all(c >= 0) for c in out)
        return out

    best = factor_coeffs(0)
    choice = np.zeros(len(roots), dtype=np.int64)
    for j in range(1, n):
        cand = factor_coeffs(j)
        less = np.zeros(len(roots), dtype=bool)
        eq = np.ones(len(roots), dtype=bool)
        for c in reversed(range(len(cand))):
            less |= eq & (cand[c] < best[c])
            eq &= cand[c] == best[c]
        choice = np.where(less, j, choice)
        best = [np.where(less, x, y) for x, y in zip(cand, best)]
    stacked = np.stack(conj)
    return stacked[choice, np.arange(len(roots))]


def _evaluate_monic_at(K: FieldCtx, p: int, thetas: np.ndarray, max_deg: int) -> np.ndarray:
    """f(theta) for many theta (rows) and every monic f of degree <= max_deg."""
    thetas = np.asarray(thetas, dtype=np.int64)[:, None]
    segments = [np.ones((len(thetas), 1), dtype=np.int64)]
    low = np.zeros((len(thetas), 1), dtype=np.int64)
    consts = np.arange(p, dtype=np.int64)[None, :]
    power = np.ones_like(thetas)
    for n in range(1, max_deg + 1):
        term = K.vmul(consts, power)
        low = K.vadd(np.tile(low, (1, p)), np.repeat(term, p ** (n - 1), axis=1))
        power = K.vmul(power, thetas)
        segments.append(K.vadd(low, power))
    return np.concatenate(segments, axis=1)


def prime_symbol_matrix(ell: int, p: int, k: int, max_deg: int, chunk: int = 1 << 22) -> np.ndarray:
    """Residue-symbol exponents of every monic a (deg <= max_deg) at every
    admissible prime of degree k; one int8 row per prime, ZERO marks P | a."""
    omega = omega_choice(ell, p)
    K = field(p, k)
    thetas = canonical_roots(ell, p, k)
    FQ = omega.ctx
    step = K.order // ell
    s = K.log(_embed(omega.zeta_f, FQ, K, _embedding_image(FQ, K)))
    assert s % step == 0
    s_inv = pow(s // step, -1, ell)
    width = poly_space(p, max_deg).size
    out = np.empty((len(thetas), width), dtype=np.int8)
    rows = max(1, chunk // width)
    for lo in range(0, len(thetas), rows):
        logs = K.vlog(_evaluate_monic_at(K, p, thetas[lo : lo + rows], max_deg))
        out[lo : lo + rows] = np.where(logs < 0, ZERO, logs % ell * s_inv % ell)
    return out
