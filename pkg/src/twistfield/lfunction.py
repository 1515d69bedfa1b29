"""Exact L-polynomials: Dirichlet, twisted elliptic, and their functional equations.

Coefficients are computed from the finite Euler product (sums of
a_f chi(f) over monic f) and then corrected by the local factor at the
infinite place, which the finite sums do not see.  Only the first half
of the coefficients is summed directly; the rest follows from the
functional equation c_n = w q^(2n - N) conj(c_(N-n)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .characters import ZERO, OrderLCharacter, gauss_sign, prime_symbol_on_codes
from .cyclotomic import CycNumber
from .elliptic import GOOD, CurveOverFqt
from .galois import INFINITY
from .polyspace import poly_space

DIRICHLET = "dirichlet"
TWISTED = "twisted"
CONSTANT_PRODUCT = "constant-product"

EXACT = "exact"
NUMERIC = "numeric"


class IndeterminateSign(ArithmeticError):
    """Every probed coefficient pair vanished."""


@dataclass
class LPoly:
    """c_0 + c_1 u + ... + c_N u^N with the data of its functional equation.

    For twisted and product polynomials the equation reads
    c_n = sign * q^(2n-N) * conj(c_(N-n)).  For Dirichlet polynomials it
    reads c_n = c_N * q^(n-N) * conj(c_(N-n)) and ``sign`` holds
    c_N / q^(N/2) as a complex number.
    """

    coeffs: list[CycNumber]
    q: int
    degree: int
    kind: str
    sign: CycNumber | complex | None = None
    sign_mode: str = EXACT
    info: dict = dc_field(default_factory=dict)

    @property
    def ell(self) -> int:
        return self.coeffs[0].ell

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> CycNumber:
        return self.coeffs[n]

    def complex_coeffs(self, k: int = 1) -> list[complex]:
        return [c.embed(k) for c in self.coeffs]

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.coeffs)

    def integer_coeffs(self) -> list[int]:
        out = []
        for c in self.coeffs:
            f = c.to_fraction()
            if f.denominator != 1:
                raise ValueError("non-integral coefficient")
            out.append(int(f))
        return out

    def sign_complex(self, k: int = 1) -> complex:
        if isinstance(self.sign, CycNumber):
            return self.sign.embed(k)
        return complex(self.sign)

    def __str__(self) -> str:
        terms = []
        for n, c in enumerate(self.coeffs):
            if c:
                terms.append(f"({c})" + ("" if n == 0 else f"u^{n}"))
        return " + ".join(terms) or "0"


# ---------------------------------------------------------------------------
# power series helpers over Q(zeta)


def _series_divide(num: Sequence[CycNumber], den: Sequence[CycNumber], n_terms: int) -> list[CycNumber]:
    """num / den as a power series truncated to n_terms; den[0] must be 1."""
    ell = num[0].ell
    out: list[CycNumber] = []
    for n in range(n_terms):
        acc = num[n] if n < len(num) else CycNumber.zero(ell)
        for k in range(1, min(n, len(den) - 1) + 1):
            if den[k]:
                acc = acc - den[k] * out[n - k]
        out.append(acc)
    return out


def _q_power(q: int, e: int) -> Fraction:
    return Fraction(q) ** e


def bucket_sums(exps: np.ndarray, weights: np.ndarray | None, p: int, upto: int, ell: int) -> list[CycNumber]:
    """[sum over monic f of degree n of w_f zeta^(k_f)] for n = 0..upto."""
    space = poly_space(p, upto)
    size = space.size
    ks = exps[:size]
    deg = space.degree
    live = ks != ZERO
    key = deg[live] * ell + ks[live]
    if weights is None:
        counts = np.bincount(key, minlength=(upto + 1) * ell)
    else:
        w = weights[:size][live]
        counts = np.zeros((upto + 1) * ell, dtype=np.int64)
        np.add.at(counts, key, w)
    counts = counts.reshape(upto + 1, ell)
    return [CycNumber.from_full(ell, [int(x) for x in row]) for row in counts]


# ---------------------------------------------------------------------------
# Dirichlet L-functions


def dirichlet_degree(chi: OrderLCharacter) -> int:
    return chi.conductor_degree - 2 + chi.delta


def dirichlet_partial(chi: OrderLCharacter, upto: int) -> list[CycNumber]:
    """c_0..c_upto of L(chi, u), infinite place included."""
    exps = chi.table(upto)
    sums = bucket_sums(exps, None, chi.p, upto, chi.ell)
    inf = chi.infinity_value()
    den = [CycNumber.one(chi.ell), CycNumber.rational(chi.ell, -inf)]
    return _series_divide(sums, den, upto + 1)


def _dirichlet_leading(partial: Sequence[CycNumber], m: int, q: int) -> CycNumber | None:
    """c_m from c_n = c_m q^(n-m) conj(c_(m-n)) using any known pair."""
    h = len(partial) - 1
    for n in range((m + 1) // 2, min(h, m) + 1):
        lo = m - n
        if lo <= h and partial[lo]:
            return partial[n] * CycNumber.rational(partial[0].ell, _q_power(q, m - n)) / partial[lo].conjugate()
    return None


def dirichlet_lpoly(chi: OrderLCharacter, max_direct: int | None = None) -> LPoly:
    """L(chi, u) of degree deg F - 2 + delta, completed by its functional equation."""
    m = dirichlet_degree(chi)
    q = chi.q
    ell = chi.ell
    h = m // 2
    partial = dirichlet_partial(chi, h)
    lead = _dirichlet_leading(partial, m, q)
    while lead is None:
        h += 1
        if max_direct is not None and h > max_direct:
            raise IndeterminateSign("middle coefficients of L(chi, u) vanish")
        partial = dirichlet_partial(chi, h)
        lead = _dirichlet_leading(partial, m, q)
    coeffs = list(partial[: m + 1])
    for n in range(len(coeffs), m + 1):
        coeffs.append(lead * CycNumber.rational(ell, _q_power(q, n - m)) * coeffs[m - n].conjugate())
    coeffs = coeffs[: m + 1]
    coeffs[m] = lead
    sign = lead.embed(1) / q ** (m / 2)
    return LPoly(coeffs, q, m, DIRICHLET, sign, NUMERIC, {"leading": lead, "chi": chi})


def dirichlet_sign_squared(L: LPoly) -> CycNumber:
    """omega_chi^2 = c_m^2 / q^m, exact."""
    m = L.degree
    lead = L.coeffs[m]
    return lead * lead / CycNumber.rational(L.ell, _q_power(L.q, m))


# ---------------------------------------------------------------------------
# the curve alone


def infinity_factor(E: CurveOverFqt, chi_inf: int, ell: int) -> list[CycNumber]:
    """Local polynomial at infinity of E twisted by a character with value chi_inf there."""
    red = E.reduce_at_place(INFINITY)
    one = CycNumber.one(ell)
    c = CycNumber.rational(ell, chi_inf)
    a = CycNumber.rational(ell, red.a_P)
    if red.kind == GOOD:
        return [one, -(c * a), c * c * E.q]
    return [one, -(c * a)]


def curve_lpoly(E: CurveOverFqt, ell: int = 3, a_table: np.ndarray | None = None) -> LPoly:
    """L(E, u) of degree deg N_E - 4, every coefficient summed directly."""
    N = E.conductor.degree - 4
    if N < 0:
        raise ValueError("constant or degenerate curve")
    if a_table is None:
        a_table = E.a_table(max(N, 1))
    space = poly_space(E.p, N)
    zeros = np.zeros(space.size, dtype=np.int64)
    sums = bucket_sums(zeros, a_table, E.p, N, ell)
    coeffs = _series_divide(sums, infinity_factor(E, 1, ell), N + 1)
    sign = coeffs[N] / CycNumber.rational(ell, _q_power(E.q, N))
    return LPoly(coeffs, E.q, N, TWISTED, sign, EXACT, {"curve": E.name})


def curve_sign(E: CurveOverFqt) -> int:
    s = curve_lpoly(E).sign.to_fraction()
    if s not in (1, -1):
        raise AssertionError("curve sign is not +-1")
    return int(s)


# ---------------------------------------------------------------------------
# twisted L-functions


def twisted_degree(E: CurveOverFqt, chi: OrderLCharacter) -> int:
    e_inf = E.conductor.infinity
    return E.conductor.degree + 2 * chi.conductor_degree - 4 + chi.delta * (2 - e_inf)


def check_coprime(E: CurveOverFqt, chi: OrderLCharacter) -> None:
    bad = set(E.bad_primes)
    for P in chi.primes:
        if P in bad:
            raise ValueError(f"conductor prime {P} divides the curve conductor")


def twisted_partial(E: CurveOverFqt, chi: OrderLCharacter, a_table: np.ndarray, upto: int) -> list[CycNumber]:
    """c_0..c_upto of L(E, chi, u)."""
    space = poly_space(E.p, upto)
    if len(a_table) < space.size:
        raise ValueError(f"a_f table too short for degree {upto}")
    exps = chi.table(upto)
    sums = bucket_sums(exps, a_table, E.p, upto, chi.ell)
    return _series_divide(sums, infinity_factor(E, chi.infinity_value(), chi.ell), upto + 1)


def theorem_sign(E: CurveOverFqt, chi: OrderLCharacter, curve_sign_value: int | None = None,
                 dirichlet: LPoly | None = None) -> CycNumber:
    """omega_chi^2 * omega_E * chi(N_E), exact."""
    if chi.delta and not E.good_at_infinity:
        raise ValueError("sign formula needs an even character when the curve is bad at infinity")
    ell = chi.ell
    if dirichlet is None:
        dirichlet = dirichlet_lpoly(chi)
    w_chi2 = dirichlet_sign_squared(dirichlet)
    w_E = curve_sign(E) if curve_sign_value is None else curve_sign_value
    k = 0
    for P, e in E.conductor.finite:
        kp = chi.exponent_at(P)
        if kp == ZERO:
            raise ValueError("character and curve conductors are not coprime")
        k += kp * e
    return w_chi2 * CycNumber.rational(ell, w_E) * CycNumber.root(ell, k)


def theorem_sign_gauss(E: CurveOverFqt, chi: OrderLCharacter, curve_sign_value: int | None = None) -> complex:
    """The same product with omega_chi taken from the Gauss sum (floating point)."""
    w_chi = gauss_sign(chi)
    w_E = curve_sign(E) if curve_sign_value is None else curve_sign_value
    k = sum(chi.exponent_at(P) * e for P, e in E.conductor.finite)
    return w_chi * w_chi * w_E * cmath.exp(2j * cmath.pi * k / chi.ell)


def coefficient_sign(partial: Sequence[CycNumber], N: int, q: int) -> CycNumber | None:
    """w from c_n = w q^(2n-N) conj(c_(N-n)) using the first usable n >= N/2."""
    h = len(partial) - 1
    ell = partial[0].ell
    for n in range((N + 1) // 2, min(h, N) + 1):
        lo = N - n
        if lo <= h and partial[lo]:
            return partial[n] / (CycNumber.rational(ell, _q_power(q, 2 * n - N)) * partial[lo].conjugate())
    return None


def complete(partial: Sequence[CycNumber], N: int, q: int, sign: CycNumber) -> list[CycNumber]:
    ell = partial[0].ell
    coeffs = list(partial[: N + 1])
    for n in range(len(coeffs), N + 1):
        coeffs.append(sign * CycNumber.rational(ell, _q_power(q, 2 * n - N)) * coeffs[N - n].conjugate())
    return coeffs


def fe_sign(E: CurveOverFqt, chi: OrderLCharacter, partial: Sequence[CycNumber], N: int,
            mode: str = "auto", **kw) -> tuple[CycNumber, str]:
    """Sign of the twisted functional equation; returns (sign, how)."""
    if mode == "theorem" or (mode == "auto" and not (chi.delta and not E.good_at_infinity)):
        return theorem_sign(E, chi, **kw), "theorem"
    w = coefficient_sign(partial, N, E.q)
    if w is None:
        raise IndeterminateSign("all probed coefficient pairs vanish")
    return w, "coefficients"


def twisted_lpoly(E: CurveOverFqt, chi: OrderLCharacter, a_table: np.ndarray | None = None,
                  sign_mode: str = "auto", allow_bad_infinity: bool = False,
                  curve_sign_value: int | None = None) -> LPoly:
    """L(E, chi, u), half summed and half completed by the functional equation.

    ``sign_mode`` is "theorem", "coefficients" or "auto".  Odd characters
    on a curve that is bad at infinity need ``allow_bad_infinity``; their
    sign then comes from the coefficients.
    """
    check_coprime(E, chi)
    odd_bad = bool(chi.delta) and not E.good_at_infinity
    if odd_bad and not allow_bad_infinity:
        raise ValueError("odd character with a curve bad at infinity; pass allow_bad_infinity")
    N = twisted_degree(E, chi)
    h = N // 2
    if a_table is None:
        a_table = E.a_table(h + 1)
    max_avail = _table_degree(E.p, a_table)
    partial = twisted_partial(E, chi, a_table, min(h, max_avail))
    use_theorem = sign_mode == "theorem" or (sign_mode == "auto" and not odd_bad)
    if use_theorem:
        sign = theorem_sign(E, chi, curve_sign_value)
        how = "theorem"
    else:
        sign = coefficient_sign(partial, N, E.q)
        while sign is None and len(partial) - 1 < min(N, max_avail):
            partial = twisted_partial(E, chi, a_table, len(partial))
            sign = coefficient_sign(partial, N, E.q)
        if sign is None:
            raise IndeterminateSign("all probed coefficient pairs vanish")
        how = "coefficients"
    coeffs = complete(partial, N, E.q, sign)
    mode = EXACT if how == "theorem" else NUMERIC
    return LPoly(coeffs, E.q, N, TWISTED, sign, mode, {"sign_source": how, "direct_upto": len(partial) - 1})


def _table_degree(p: int, table: np.ndarray) -> int:
    n = 0
    while (p ** (n + 2) - 1) // (p - 1) <= len(table):
        n += 1
    return n


def twisted_direct(E: CurveOverFqt, chi: OrderLCharacter, a_table: np.ndarray, upto: int) -> list[CycNumber]:
    """c_0..c_upto all by direct summation (no functional equation)."""
    return twisted_partial(E, chi, a_table, upto)


def fiber_power_sums(E: CurveOverFqt, chi: OrderLCharacter, upto: int) -> list[CycNumber]:
    """[0, T_1, ..., T_upto] with T_k the sum over t in F_{q^k} of the fiber trace times chi_k(t).

    chi_k(t) is chi at the characteristic polynomial of t over F_q, which is
    chi of the place of t raised to k / deg; so T_k is the k-th power sum of
    the finite Euler product, and log of that product is sum_k T_k u^k / k.
    """
    ell = chi.ell
    out = [CycNumber.zero(ell)]
    for k in range(1, upto + 1):
        exps = np.zeros(len(E.fiber_weights(k)), dtype=np.int64)
        dead = np.zeros(len(exps), dtype=bool)
        for P, e in zip(chi.primes, chi.exponents):
            tab = prime_symbol_on_codes(ell, P, k).astype(np.int64)
            dead |= tab == ZERO
            exps = (exps + tab * e) % ell
        w = E.fiber_weights(k)[~dead]
        counts = np.zeros(ell, dtype=np.int64)
        np.add.at(counts, exps[~dead], w)
        out.append(CycNumber.from_full(ell, [int(x) for x in counts]))
    return out


def twisted_by_fibers(E: CurveOverFqt, chi: OrderLCharacter, upto: int) -> list[CycNumber]:
    """c_0..c_upto of L(E, chi, u) from point counts on the fibers over F_{q^k}, k <= upto.

    Independent of the a_f table: the finite Euler product is rebuilt from
    its power sums by Newton's identities, then the infinite place is removed.
    """
    ell = chi.ell
    T = fiber_power_sums(E, chi, upto)
    S = [CycNumber.one(ell)]
    for n in range(1, upto + 1):
        acc = CycNumber.zero(ell)
        for k in range(1, n + 1):
            acc = acc + T[k] * S[n - k]
        S.append(acc * CycNumber.rational(ell, Fraction(1, n)))
    return _series_divide(S, infinity_factor(E, chi.infinity_value(), ell), upto + 1)


def degree_truncation_check(E: CurveOverFqt, chi: OrderLCharacter, L: LPoly,
                            a_table: np.ndarray | None = None) -> bool:
    """Directly summed c_n vanish past the degree and agree with the completed polynomial.

    Uses the a_f table when it reaches degree N + 2, otherwise the fiber sums.
    """
    N = L.degree
    if a_table is not None and _table_degree(E.p, a_table) >= N + 2:
        direct = twisted_direct(E, chi, a_table, N + 2)
    else:
        direct = twisted_by_fibers(E, chi, N + 2)
    return _truncates_to(direct, L)


def curve_truncation_check(E: CurveOverFqt, L: LPoly) -> bool:
    """The same check for L(E, u) itself, with the sums taken over the fibers."""
    trivial = OrderLCharacter(L.ell, E.p, (), ())
    return _truncates_to(twisted_by_fibers(E, trivial, L.degree + 2), L)


def dirichlet_truncation_check(chi: OrderLCharacter, L: LPoly) -> bool:
    return _truncates_to(dirichlet_partial(chi, L.degree + 2), L)


def _truncates_to(direct: Sequence[CycNumber], L: LPoly) -> bool:
    N = L.degree
    return all(d == c for d, c in zip(direct, L.coeffs)) and direct[N + 1].is_zero() and direct[N + 2].is_zero()


# ---------------------------------------------------------------------------
# functional equation and rank


def verify_fe(L: LPoly, tol: float = 1e-6) -> bool:
    N, q, ell = L.degree, L.q, L.ell
    c = L.coeffs
    if len(c) != N + 1 or c[0] != 1:
        return False
    if L.kind == DIRICHLET:
        lead = L.info.get("leading", c[N])
        if lead * lead.conjugate() != CycNumber.rational(ell, _q_power(q, N)):
            return False
        return all(
            c[n] * CycNumber.rational(ell, _q_power(q, N - n)) == lead * c[N - n].conjugate() for n in range(N + 1)
        )
    if isinstance(L.sign, CycNumber):
        w = L.sign
        if w * w.conjugate() != 1:
            return False
        return all(
            c[n] == w * CycNumber.rational(ell, _q_power(q, 2 * n - N)) * c[N - n].conjugate() for n in range(N + 1)
        )
    for k in range(1, ell):
        w = L.sign_complex(k)
        if abs(abs(w) - 1) > tol:
            return False
        cs = L.complex_coeffs(k)
        for n in range(N + 1):
            rhs = w * q ** (2 * n - N) * cs[N - n].conjugate()
            scale = max(abs(cs[n]), abs(rhs), q ** (n / 2), 1.0)
            if abs(cs[n] - rhs) > tol * scale:
                return False
    return True


def analytic_rank(L: LPoly | Sequence[CycNumber], q: int | None = None) -> int:
    """Exact multiplicity of u = 1/q as a root."""
    if isinstance(L, LPoly):
        coeffs, q = list(L.coeffs), L.q
    else:
        coeffs = list(L)
    ell = coeffs[0].ell
    qq = CycNumber.rational(ell, q)
    rank = 0
    while len(coeffs) > 1:
        # divide by (1 - q u): quotient b with b_n = c_n + q b_(n-1)
        quot = []
        acc = CycNumber.zero(ell)
        for cn in coeffs[:-1]:
            acc = cn + qq * acc
            quot.append(acc)
        remainder = coeffs[-1] + qq * acc
        if not remainder.is_zero():
            break
        rank += 1
        coeffs = quot
    return rank


def perturbed(L: LPoly, n: int = 1) -> LPoly:
    """Copy with c_n increased by 1 (negative control)."""
    coeffs = list(L.coeffs)
    coeffs[n] = coeffs[n] + 1
    return LPoly(coeffs, L.q, L.degree, L.kind, L.sign, L.sign_mode, dict(L.info))
