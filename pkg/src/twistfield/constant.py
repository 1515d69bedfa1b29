"""Twists of constant curves and the search for degree-2 character L-polynomials.

For a constant curve E0 with Frobenius roots a1, a2 the twist factors as
L(chi, a1 u) L(chi, a2 u).  The roots are handled symbolically in the ring
Z[zeta][x]/(x^2 - a x + q), so no splitting field is needed.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .characters import ZERO, OrderLCharacter, omega_choice, prime_symbol_matrix
from .cyclotomic import CycNumber, poly_divmod, poly_mul
from .elliptic import ConstantCurve
from .galois import FieldPoly, count_monic_irreducibles, field
from .lfunction import CONSTANT_PRODUCT, EXACT, LPoly, dirichlet_lpoly, twisted_direct
from .polyspace import irreducible_codes, poly_space

# largest residue field whose symbol matrix the search will build
BANK_LIMIT = 1 << 21


@dataclass(frozen=True)
class QuadraticWeilPair:
    """c0 + c1 x in Z[zeta][x]/(x^2 - a x + q); x stands for either Frobenius root."""

    a: int
    q: int
    c0: CycNumber
    c1: CycNumber

    @classmethod
    def scalar(cls, a: int, q: int, c: CycNumber) -> "QuadraticWeilPair":
        return cls(a, q, c, CycNumber.zero(c.ell))

    @classmethod
    def root(cls, a: int, q: int, ell: int) -> "QuadraticWeilPair":
        return cls(a, q, CycNumber.zero(ell), CycNumber.one(ell))

    def conjugate_root(self) -> "QuadraticWeilPair":
        """The other root: x -> a - x."""
        ell = self.c0.ell
        return QuadraticWeilPair(self.a, self.q, self.c0 + self.c1 * CycNumber.rational(ell, self.a), -self.c1)

    def __add__(self, other: "QuadraticWeilPair") -> "QuadraticWeilPair":
        return QuadraticWeilPair(self.a, self.q, self.c0 + other.c0, self.c1 + other.c1)

    def __mul__(self, other) -> "QuadraticWeilPair":
        if isinstance(other, CycNumber):
            return QuadraticWeilPair(self.a, self.q, self.c0 * other, self.c1 * other)
        ell = self.c0.ell
        # x^2 = a x - q
        sq = self.c1 * other.c1
        c0 = self.c0 * other.c0 - sq * CycNumber.rational(ell, self.q)
        c1 = self.c0 * other.c1 + self.c1 * other.c0 + sq * CycNumber.rational(ell, self.a)
        return QuadraticWeilPair(self.a, self.q, c0, c1)

    def __pow__(self, n: int) -> "QuadraticWeilPair":
        out = QuadraticWeilPair.scalar(self.a, self.q, CycNumber.one(self.c0.ell))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_scalar(self) -> bool:
        return self.c1.is_zero()


def constant_twist_lpoly(E0: ConstantCurve, chi: OrderLCharacter, dirichlet: LPoly | None = None) -> LPoly:
    """L(E0 x chi, u) = L(chi, a1 u) L(chi, a2 u), exact in Z[zeta]."""
    if chi.p != E0.p:
        raise ValueError("character and curve over different fields")
    Lchi = dirichlet if dirichlet is not None else dirichlet_lpoly(chi)
    b = Lchi.coeffs
    m = Lchi.degree
    ell, q, a = chi.ell, E0.q, E0.trace
    x = QuadraticWeilPair.root(a, q, ell)
    y = x.conjugate_root()
    xp = [x**j for j in range(m + 1)]
    yp = [y**j for j in range(m + 1)]
    coeffs = []
    for n in range(2 * m + 1):
        acc = QuadraticWeilPair.scalar(a, q, CycNumber.zero(ell))
        for j in range(max(0, n - m), min(n, m) + 1):
            acc = acc + xp[j] * yp[n - j] * (b[j] * b[n - j])
        assert acc.is_scalar()
        coeffs.append(acc.c0)
    lead = Lchi.coeffs[m]
    sign = lead * lead / CycNumber.rational(ell, Fraction(q) ** m)
    return LPoly(coeffs, q, 2 * m, CONSTANT_PRODUCT, sign, EXACT, {"chi": chi, "curve": E0})


def constant_twist_direct(E0: ConstantCurve, chi: OrderLCharacter, a_table: np.ndarray | None = None) -> list[CycNumber]:
    """The same polynomial from the generic Euler product, every coefficient summed."""
    E = E0.as_curve()
    m = chi.conductor_degree - 2 + chi.delta
    upto = 2 * m
    if a_table is None:
        a_table = E.a_table(upto)
    return twisted_direct(E, chi, a_table, upto)


def _integer_poly(L: LPoly) -> list[int]:
    return L.integer_coeffs()


def conjugate_product(Lchi: LPoly) -> list[int]:
    """prod over i = 1..ell-1 of L(chi^i, u), as an integer polynomial."""
    ell = Lchi.ell
    acc = [CycNumber.one(ell)]
    for i in range(1, ell):
        acc = poly_mul(acc, [c.galois(i) for c in Lchi.coeffs])
    out = []
    for c in acc:
        f = c.to_fraction()
        if f.denominator != 1:
            raise ArithmeticError("conjugate product is not integral")
        out.append(int(f))
    return out


def vanishing_check(E0: ConstantCurve, chi: OrderLCharacter, dirichlet: LPoly | None = None) -> bool:
    """Whether L(E0, u) divides the product of the L(chi^i, u)."""
    Lchi = dirichlet if dirichlet is not None else dirichlet_lpoly(chi)
    prod = conjugate_product(Lchi)
    ell = chi.ell
    num = [CycNumber.rational(ell, c) for c in prod]
    den = [CycNumber.rational(ell, c) for c in E0.lpoly()]
    _, rem = poly_divmod(num, den)
    return all(c.is_zero() for c in rem)


# ---------------------------------------------------------------------------
# degree-2 search


@dataclass
class SearchResult:
    ell: int
    p: int
    mode: str
    traces: set[int] = dc_field(default_factory=set)
    witnesses: dict[int, OrderLCharacter] = dc_field(default_factory=dict)
    checked: int = 0
    stopped_early: bool = False

    def witness_records(self) -> list[dict]:
        out = []
        for a in sorted(self.witnesses):
            chi = self.witnesses[a]
            out.append({
                "ell": self.ell,
                "p": self.p,
                "a": a,
                "conductor": [list(P.coeffs) for P in chi.primes],
                "exponents": list(chi.exponents),
            })
        return out

    def to_json(self) -> str:
        return json.dumps({
            "ell": self.ell,
            "p": self.p,
            "mode": self.mode,
            "traces": sorted(self.traces),
            "checked": self.checked,
            "stopped_early": self.stopped_early,
            "witnesses": self.witness_records(),
        }, indent=2)


class _PrimeBank:
    """Admissible primes of degree <= 4 in (degree, code) order with their symbol rows."""

    def __init__(self, ell: int, p: int, max_deg: int):
        self.ell, self.p = ell, p
        n = omega_choice(ell, p).n_q
        self.kummer = n == 1
        self.degrees = [k for k in range(n, max_deg + 1, n)]
        self.blocks = {}
        start = 0
        for k in self.degrees:
            cnt = count_monic_irreducibles(p, k)
            self.blocks[k] = (start, start + cnt)
            start += cnt
        self.total = start
        self.deg = np.concatenate([np.full(hi - lo, k, dtype=np.int64) for k, (lo, hi) in self.blocks.items()]) \
            if self.blocks else np.zeros(0, dtype=np.int64)
        self._rows: dict[int, np.ndarray] = {}

    def rows(self, k: int) -> np.ndarray:
        if k not in self._rows:
            if self.p**k > BANK_LIMIT:
                raise ValueError(f"residue fields of degree {k} over F_{self.p} are too large for tables")
            self._rows[k] = prime_symbol_matrix(self.ell, self.p, k, 2)
        return self._rows[k]

    def row_of(self, idx: np.ndarray) -> np.ndarray:
        """Symbol rows for global prime indices (all of one degree)."""
        k = int(self.deg[idx.flat[0]])
        lo, _ = self.blocks[k]
        return self.rows(k)[idx - lo]

    def poly(self, idx: int) -> FieldPoly:
        k = int(self.deg[idx])
        lo, _ = self.blocks[k]
        code = int(irreducible_codes(self.p, k)[idx - lo])
        return FieldPoly.monic_from_code(field(self.p), k, code)


def _degree_types(degrees: list[int], total: int, min_deg: int = 0):
    """Non-decreasing degree sequences from ``degrees`` summing to total."""
    if total == 0:
        yield ()
        return
    for k in degrees:
        if k >= min_deg and k <= total:
            for rest in _degree_types(degrees, total - k, k):
                yield (k,) + rest


def _supports_of_type(bank: _PrimeBank, kind: tuple[int, ...], start: int) -> np.ndarray:
    """Increasing index tuples with the given degree sequence, all indices >= start."""
    parts = []
    for k, grp in itertools.groupby(kind):
        c = len(list(grp))
        lo, hi = bank.blocks[k]
        lo = max(lo, start)
        if hi - lo < c:
            return np.zeros((0, len(kind)), dtype=np.int64)
        combos = np.array(list(itertools.combinations(range(lo, hi), c)), dtype=np.int64).reshape(-1, c)
        parts.append(combos)
    out = parts[0]
    for nxt in parts[1:]:
        out = np.concatenate([np.repeat(out, len(nxt), axis=0), np.tile(nxt, (len(out), 1))], axis=1)
    return out


def _bucket_counts(vals: np.ndarray, live: np.ndarray, ell: int) -> np.ndarray:
    return np.stack([((vals == r) & live).sum(axis=-1) for r in range(ell)], axis=-1)


def _integral_value(counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rows where sum_r counts[r] zeta^r is an integer, and that integer."""
    ok = np.all(counts[..., 1:] == counts[..., 1:2], axis=-1)
    return ok, counts[..., 0] - counts[..., 1]


def search_deg2_matches(ell: int, p: int, mode: str = "full", stop_early: bool = False,
                        chunk: int = 1 << 21) -> SearchResult:
    """All a with L(chi, u) = 1 + a u + p u^2 for some order-ell chi over F_p."""
    if mode not in ("full", "thin"):
        raise ValueError("mode is 'full' or 'thin'")
    res = SearchResult(ell, p, mode)
    space = poly_space(p, 2)
    lin = space.degree_slice(1)
    quad = space.degree_slice(2)
    bound = 2 * np.sqrt(p)
    for d, odd in ((4, 0), (3, 1)):
        bank = _PrimeBank(ell, p, d)
        if _scan(bank, d, odd, mode, stop_early, res, lin, quad, bound, chunk):
            res.stopped_early = True
            return res
    return res


def _scan(bank: _PrimeBank, d: int, odd: int, mode: str, stop_early: bool, res: SearchResult,
          lin: slice, quad: slice, bound: float, chunk: int) -> bool:
    ell, p = bank.ell, bank.p
    for i in range(bank.total):
        di = int(bank.deg[i])
        remaining = d - di
        if remaining == 0:
            # the single-prime conductors of degree d, all at once
            lo, hi = bank.blocks[d]
            if odd != int(bank.kummer and d % ell != 0):
                return False
            idx = np.arange(lo, hi, dtype=np.int64)
            if _check_rows(bank, idx[:, None], np.ones((1, 1), dtype=np.int64), odd, mode, stop_early,
                           res, lin, quad, bound, chunk):
                return True
            return False
        for kind in _degree_types(bank.degrees, remaining, di):
            rest = _supports_of_type(bank, kind, i + 1)
            if len(rest) == 0:
                continue
            r = rest.shape[1]
            if mode == "thin":
                tails = np.ones((1, r), dtype=np.int64)
            else:
                tails = np.array(list(itertools.product(range(1, ell), repeat=r)), dtype=np.int64)
            weight = di + tails @ np.array(kind, dtype=np.int64)
            # only Kummer characters can be odd; the parity is the total weight mod ell
            tails = tails[(bank.kummer & (weight % ell != 0)) == bool(odd)]
            if len(tails) == 0:
                continue
            support = np.concatenate([np.full((len(rest), 1), i, dtype=np.int64), rest], axis=1)
            exps = np.concatenate([np.ones((len(tails), 1), dtype=np.int64), tails], axis=1)
            if _check_rows(bank, support, exps, odd, mode, stop_early, res, lin, quad, bound, chunk):
                return True
    return False


def _combine(bank: _PrimeBank, support: np.ndarray, exps: np.ndarray, cols: slice, ell: int):
    """Exponent values (n_support, n_exps, width) and liveness of the product characters."""
    n, r = support.shape
    width = cols.stop - cols.start
    total = np.zeros((n, len(exps), width), dtype=np.int64)
    live = np.ones((n, 1, width), dtype=bool)
    for j in range(r):
        # within one support position all primes share a degree
        rows = np.empty((n, width), dtype=np.int64)
        degs = bank.deg[support[:, j]]
        for k in np.unique(degs):
            sel = degs == k
            rows[sel] = bank.row_of(support[sel, j])[:, cols]
        live &= (rows != ZERO)[:, None, :]
        total += exps[None, :, j, None] * rows[:, None, :]
    return total % ell, live


def _check_rows(bank, support, exps, odd, mode, stop_early, res, lin, quad, bound, chunk) -> bool:
    ell, p = bank.ell, bank.p
    width = lin.stop - lin.start
    per = max(1, chunk // max(1, len(exps) * width))
    even = 1 - odd
    for lo in range(0, len(support), per):
        sup = support[lo : lo + per]
        vals, live = _combine(bank, sup, exps, lin, ell)
        live = np.broadcast_to(live, vals.shape)
        ok, s1 = _integral_value(_bucket_counts(vals, live, ell))
        res.checked += ok.size
        hits = np.argwhere(ok)
        if len(hits) == 0:
            continue
        sup_h = sup[hits[:, 0]]
        exp_h = exps[hits[:, 1]]
        c1 = s1[ok] + even
        for h in range(len(hits)):
            a = int(c1[h])
            if abs(a) > bound:
                continue
            s = sup_h[h : h + 1]
            e = exp_h[h : h + 1]
            v2, l2 = _combine(bank, s, e, quad, ell)
            ok2, s2 = _integral_value(_bucket_counts(v2, np.broadcast_to(l2, v2.shape), ell))
            if not ok2[0, 0]:
                continue
            c2 = int(s2[0, 0]) + even * (int(s1[ok][h]) + 1)
            if c2 != p:
                continue
            if a not in res.traces:
                res.traces.add(a)
                chi = OrderLCharacter(ell, p, tuple(bank.poly(int(x)) for x in s[0]), tuple(int(x) for x in e[0]))
                res.witnesses[a] = chi
            if stop_early and a == 0:
                return True
    return False
