"""Elliptic curves y^2 = x^3 + a x^2 + b x + c over F_p(t) and over F_p.

Local analysis works with the short model y^2 = x^3 + A x + B obtained by
shifting x by a/3, which is harmless since p >= 5.  The infinite place is
handled by rewriting the short model in s = 1/t.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from .galois import (
    INFINITY,
    FieldCtx,
    FieldPoly,
    Place,
    factor,
    field,
    valuation,
)
from .polyspace import PolySpace, charpoly_classes, irreducible_codes, poly_space, prime_roots

GOOD = "good"
SPLIT = "split-multiplicative"
NONSPLIT = "nonsplit-multiplicative"
ADDITIVE = "additive"

CACHE_HEADER = "twistfield-af v1"
CHUNK = 1 << 20  # elements per vectorised pass over a large field


@dataclass(frozen=True)
class ReductionData:
    place: Place
    kind: str
    a_P: int

    @property
    def conductor_exponent(self) -> int:
        return {GOOD: 0, SPLIT: 1, NONSPLIT: 1, ADDITIVE: 2}[self.kind]


@dataclass(frozen=True)
class Conductor:
    """Bad places with exponents; the infinite place is kept separately."""

    finite: tuple[tuple[FieldPoly, int], ...]
    infinity: int

    @property
    def degree(self) -> int:
        return sum(P.degree * e for P, e in self.finite) + self.infinity

    def finite_poly(self, p: int) -> FieldPoly:
        out = FieldPoly(field(p), (1,))
        for P, e in self.finite:
            out = out * P**e
        return out

    def __str__(self) -> str:
        parts = [f"({P})" + (f"^{e}" if e > 1 else "") for P, e in self.finite]
        if self.infinity:
            parts.append("inf" + (f"^{self.infinity}" if self.infinity > 1 else ""))
        return " * ".join(parts) or "1"


# ---------------------------------------------------------------------------
# residue-field helpers


def _poly_at(K: FieldCtx, f: FieldPoly, theta: int) -> int:
    acc = 0
    for c in reversed(f.coeffs):
        acc = K.add(K.mul(acc, theta), c)
    return acc


def _quadratic_character(K: FieldCtx, vals: np.ndarray) -> np.ndarray:
    lg = K.vlog(vals)
    return np.where(lg < 0, 0, np.where(lg % 2 == 0, 1, -1))


@lru_cache(maxsize=64)
def _cubes(p: int, k: int) -> np.ndarray:
    K = field(p, k)
    xs = np.arange(K.size, dtype=np.int64)
    return K.vmul(K.vmul(xs, xs), xs)


def _trace_at_root(K: FieldCtx, A_val: int, B_val: int) -> int:
    """-sum_x eta(x^3 + A x + B) over K."""
    return int(_traces_at_roots(K, np.array([A_val]), np.array([B_val]))[0])


def _traces_at_roots(K: FieldCtx, A_vals: np.ndarray, B_vals: np.ndarray) -> np.ndarray:
    """Vectorized -sum_x eta(x^3 + A x + B) for arrays of (A, B) in K."""
    if K.size > CHUNK:
        # few pairs over a big field: stream over x instead
        out = np.zeros(len(A_vals), dtype=np.int64)
        for lo in range(0, K.size, CHUNK):
            x = np.arange(lo, min(lo + CHUNK, K.size), dtype=np.int64)
            cubes = K.vmul(K.vmul(x, x), x)
            for i, (A, B) in enumerate(zip(A_vals, B_vals)):
                g = K.vadd(K.vadd(cubes, K.vmul(x, np.full(len(x), A, dtype=np.int64))), np.full(len(x), B, dtype=np.int64))
                out[i] -= int(_quadratic_character(K, g).sum())
        return out
    xs = np.arange(K.size, dtype=np.int64)[None, :]
    cubes = _cubes(K.p, K.m)[None, :]
    out = np.empty(len(A_vals), dtype=np.int64)
    chunk = max(1, 4_000_000 // (K.size * K.m))
    for lo in range(0, len(A_vals), chunk):
        A = np.asarray(A_vals[lo : lo + chunk], dtype=np.int64)[:, None]
        B = np.asarray(B_vals[lo : lo + chunk], dtype=np.int64)[:, None]
        g = K.vadd(K.vadd(cubes, K.vmul(xs, A)), B)
        out[lo : lo + chunk] = -_quadratic_character(K, g).sum(axis=1)
    return out


def _vdiv(K: FieldCtx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a / b elementwise; entries with b = 0 give 0."""
    lb = K.vlog(b)
    inv = np.where(lb < 0, 0, K.exp_arr[(-np.maximum(lb, 0)) % K.order])
    return K.vmul(a, inv)


@lru_cache(maxsize=4)
def legendre_traces(p: int, k: int) -> np.ndarray:
    """-sum_x eta(x(x-1)(x-lam)) for every lam in F_{p^k}, by one additive FFT.

    The sum is the correlation of eta(x(x-1)) with eta over the additive
    group (Z/p)^k, which is how field codes add.
    """
    K = field(p, k)
    K._build_tables()
    f = np.empty(K.size, dtype=np.float64)
    g = np.empty(K.size, dtype=np.float64)
    for lo in range(0, K.size, CHUNK):
        xs = np.arange(lo, min(lo + CHUNK, K.size), dtype=np.int64)
        f[lo : lo + CHUNK] = _quadratic_character(K, K.vmul(xs, K.vadd(xs, np.full(len(xs), p - 1, dtype=np.int64))))
        g[lo : lo + CHUNK] = _quadratic_character(K, xs)
    shape = (p,) * k
    axes = tuple(range(k))
    spec = np.fft.rfftn(f.reshape(shape), axes=axes)
    del f
    spec *= np.conj(np.fft.rfftn(g.reshape(shape), axes=axes))
    del g
    h = np.fft.irfftn(spec, s=shape, axes=axes).ravel()
    del spec
    out = np.rint(h).astype(np.int64)
    if np.abs(h - out).max() > 1e-3:
        raise ArithmeticError("FFT rounding too coarse for an exact correlation")
    return -out


def _poly_at_many(K: FieldCtx, f: FieldPoly, thetas: np.ndarray) -> np.ndarray:
    acc = np.zeros(len(thetas), dtype=np.int64)
    for c in reversed(f.coeffs):
        acc = K.vadd(K.vmul(acc, thetas), np.full(len(thetas), c, dtype=np.int64))
    return acc


# ---------------------------------------------------------------------------
# curves over F_p(t)


class CurveOverFqt:
    """y^2 = x^3 + a(t) x^2 + b(t) x + c(t) over F_p(t), p >= 5."""

    def __init__(self, p: int, a, b, c, name: str | None = None, split_roots=None):
        if p < 5:
            raise ValueError("curves need characteristic at least 5")
        F = field(p)
        self.p = p
        self.F = F
        self.a, self.b, self.c = (x if isinstance(x, FieldPoly) else FieldPoly(F, x) for x in (a, b, c))
        inv3 = pow(3, -1, p)
        a_, b_, c_ = self.a, self.b, self.c
        self.A = b_ - (a_ * a_).scale(inv3)
        self.B = c_ - (a_ * b_).scale(inv3) + (a_ * a_ * a_).scale(2 * pow(27, -1, p) % p)
        self.disc_core = (self.A ** 3).scale(4) + (self.B * self.B).scale(27)
        if self.disc_core.is_zero():
            raise ValueError("singular curve (zero discriminant)")
        self.name = name or f"[{self.a} | {self.b} | {self.c}]"
        self._reductions: dict[Place, ReductionData] = {}
        self._fiber_traces: dict[int, np.ndarray] = {}
        self._fiber_weights: dict[int, np.ndarray] = {}
        # roots e_i(t) of the cubic when it splits over F_p[t]; enables the FFT trace path
        self.split_roots = None
        if split_roots is not None:
            e1, e2, e3 = (x if isinstance(x, FieldPoly) else FieldPoly(F, x) for x in split_roots)
            if (-(e1 + e2 + e3), e1 * e2 + e1 * e3 + e2 * e3, -(e1 * e2 * e3)) != (self.a, self.b, self.c):
                raise ValueError("split_roots do not factor the cubic")
            self.split_roots = (e1, e2, e3)

    @property
    def q(self) -> int:
        return self.p

    def coefficient_text(self) -> str:
        return "/".join(" ".join(map(str, f.coeffs)) for f in (self.a, self.b, self.c))

    @cached_property
    def discriminant(self) -> FieldPoly:
        """16 times the discriminant of the cubic."""
        return self.disc_core.scale(-16 % self.p)

    def is_constant(self) -> bool:
        return all(f.degree <= 0 for f in (self.a, self.b, self.c))

    # -- infinity model ----------------------------------------------------------
    @cached_property
    def _infinity_model(self) -> tuple[FieldPoly, FieldPoly]:
        dA = max(self.A.degree, 0)
        dB = max(self.B.degree, 0)
        m = max(-(-dA // 4), -(-dB // 6))

        def flip(f: FieldPoly, w: int) -> FieldPoly:
            out = [0] * (w + 1)
            for i, c in enumerate(f.coeffs):
                out[w - i] = c
            return FieldPoly(self.F, out)

        return flip(self.A, 4 * m), flip(self.B, 6 * m)

    # -- reduction ---------------------------------------------------------------
    def _classify(self, P: FieldPoly, A: FieldPoly, B: FieldPoly, place: Place) -> ReductionData:
        vA, vB = valuation(A, P), valuation(B, P)
        while vA >= 4 and vB >= 6:
            A = A // P**4
            B = B // P**6
            vA, vB = vA - 4, vB - 6
        D = (A ** 3).scale(4) + (B * B).scale(27)
        vD = valuation(D, P)
        k = P.degree
        K = field(self.p, k)
        theta = int(prime_roots(self.p, k)[_code_rank(self.p, P)])
        A_val, B_val = _poly_at(K, A, theta), _poly_at(K, B, theta)
        if vD == 0:
            return ReductionData(place, GOOD, _trace_at_root(K, A_val, B_val))
        if vA == 0:
            # node at x0 = -3B/(2A); tangent directions are square roots of 3 x0
            cone = K.mul(K.neg(K.mul(2, A_val)), B_val)
            split = K.log(cone) % 2 == 0
            return ReductionData(place, SPLIT if split else NONSPLIT, 1 if split else -1)
        return ReductionData(place, ADDITIVE, 0)

    def reduce_at_place(self, place: Place | FieldPoly) -> ReductionData:
        if isinstance(place, FieldPoly):
            place = Place.finite(place)
        if place in self._reductions:
            return self._reductions[place]
        if place.is_infinite:
            A, B = self._infinity_model
            s = FieldPoly.t(self.F)
            data = self._classify(s, A, B, place)
        else:
            data = self._classify(place.poly, self.A, self.B, place)
        self._reductions[place] = data
        return data

    @cached_property
    def bad_primes(self) -> tuple[FieldPoly, ...]:
        out = []
        for P, _ in factor(self.disc_core):
            if self.reduce_at_place(P).kind != GOOD:
                out.append(P)
        return tuple(out)

    @cached_property
    def conductor(self) -> Conductor:
        finite = tuple((P, self.reduce_at_place(P).conductor_exponent) for P in self.bad_primes)
        return Conductor(finite, self.reduce_at_place(INFINITY).conductor_exponent)

    def bad_places(self) -> list[Place]:
        out = [Place(P) for P in self.bad_primes]
        if self.conductor.infinity:
            out.append(INFINITY)
        return out

    def a_P(self, P: FieldPoly) -> int:
        return self.reduce_at_place(P).a_P

    @property
    def good_at_infinity(self) -> bool:
        return self.conductor.infinity == 0

    # -- a_f table ----------------------------------------------------------------
    def prime_traces(self, space: PolySpace) -> np.ndarray:
        """a_P for every prime of the space (prime-rank order)."""
        out = np.empty(space.num_primes, dtype=np.int64)
        bad = {P: self.reduce_at_place(P).a_P for P in self.bad_primes}
        for k in range(1, space.max_deg + 1):
            sl = space.primes_of_degree(k)
            roots = prime_roots(self.p, k)
            K = field(self.p, k)
            K._build_tables()
            if self.split_roots is not None:
                out[sl] = self.fiber_traces(k)[roots]
            else:
                A_vals = _poly_at_many(K, self.A, roots)
                B_vals = _poly_at_many(K, self.B, roots)
                # fibres with equal (A, B) have equal traces; constant curves have one
                keys, inverse = np.unique(A_vals * K.size + B_vals, return_inverse=True)
                out[sl] = _traces_at_roots(K, keys // K.size, keys % K.size)[inverse.ravel()]
            for P, a in bad.items():
                if P.degree == k:
                    out[_code_rank_in_space(space, P)] = a
        return out

    def fiber_traces(self, k: int) -> np.ndarray:
        """-sum_x eta(x^3 + a x^2 + b x + c) at every t in F_{p^k} (code order).

        At good t this is the Frobenius trace of the fiber over F_{p^k}; at
        multiplicative t it is the trace of the nodal cubic, at additive t 0.
        """
        if k in self._fiber_traces:
            return self._fiber_traces[k]
        K = field(self.p, k)
        K._build_tables()
        ts = np.arange(K.size, dtype=np.int64)
        if self.split_roots is not None:
            base = legendre_traces(self.p, k)
            out = np.empty(K.size, dtype=np.int64)
            flat = []
            for lo in range(0, K.size, CHUNK):
                t = ts[lo : lo + CHUNK]
                minus_e1 = K.vneg(_poly_at_many(K, self.split_roots[0], t))
                D = K.vadd(_poly_at_many(K, self.split_roots[1], t), minus_e1)
                lam = _vdiv(K, K.vadd(_poly_at_many(K, self.split_roots[2], t), minus_e1), D)
                out[lo : lo + CHUNK] = _quadratic_character(K, D) * base[lam]
                flat.append(lo + np.flatnonzero(D == 0))
            flat = np.concatenate(flat)
        else:
            out = np.zeros(K.size, dtype=np.int64)
            flat = ts
        if len(flat):
            A_vals = _poly_at_many(K, self.A, flat)
            B_vals = _poly_at_many(K, self.B, flat)
            keys, inverse = np.unique(A_vals * K.size + B_vals, return_inverse=True)
            out[flat] = _traces_at_roots(K, keys // K.size, keys % K.size)[inverse.ravel()]
        self._fiber_traces[k] = out
        return out

    def fiber_weights(self, k: int) -> np.ndarray:
        """fiber_traces(k) summed over each characteristic-polynomial class."""
        if k not in self._fiber_weights:
            codes, inverse = charpoly_classes(self.p, k)
            w = np.bincount(inverse, weights=self.fiber_traces(k).astype(np.float64), minlength=len(codes))
            out = np.rint(w).astype(np.int64)
            assert np.array_equal(out, w)
            self._fiber_weights[k] = out
        return self._fiber_weights[k]

    def a_table(self, max_deg: int, cache_dir: str | os.PathLike | None = None) -> np.ndarray:
        """a_f for all monic f of degree <= max_deg, in PolySpace order."""
        if cache_dir is not None:
            path = Path(cache_dir) / self.cache_name(max_deg)
            if path.exists():
                return read_a_table(path, self, max_deg)
        table = self._compute_a_table(max_deg)
        if cache_dir is not None:
            Path(cache_dir).mkdir(parents=True, exist_ok=True)
            write_a_table(Path(cache_dir) / self.cache_name(max_deg), self, max_deg, table)
        return table

    def _compute_a_table(self, max_deg: int) -> np.ndarray:
        space = poly_space(self.p, max_deg)
        traces = self.prime_traces(space)
        badset = np.zeros(space.num_primes, dtype=bool)
        for P in self.bad_primes:
            if P.degree <= max_deg:
                badset[_code_rank_in_space(space, P)] = True
        norms = self.p ** space.prime_deg
        max_e = max_deg
        # powers[e][r] = a_{P_r^e}
        powers = [np.ones(space.num_primes, dtype=np.int64), traces.copy()]
        for e in range(2, max_e + 1):
            nxt = traces * powers[e - 1] - np.where(badset, 0, norms * powers[e - 2])
            powers.append(nxt)
        pw = np.stack(powers)

        def pp(ranks, exps):
            return pw[exps, ranks]

        return space.extend(pp, 1, lambda x, y: x * y)

    def cache_name(self, max_deg: int) -> str:
        safe = self.coefficient_text().replace(" ", "_").replace("/", "-")
        return f"af_p{self.p}_{safe}_d{max_deg}.txt"

    def __repr__(self) -> str:
        return f"CurveOverFqt(p={self.p}, {self.name})"


def _code_rank(p: int, P: FieldPoly) -> int:
    codes = irreducible_codes(p, P.degree)
    i = int(np.searchsorted(codes, P.code))
    assert codes[i] == P.code
    return i


def _code_rank_in_space(space: PolySpace, P: FieldPoly) -> int:
    return int(space.prime_start[P.degree]) + _code_rank(space.p, P)


def write_a_table(path: Path, E: CurveOverFqt, max_deg: int, table: np.ndarray) -> None:
    space = poly_space(E.p, max_deg)
    lines = [f"{CACHE_HEADER}; {E.p}; {E.coefficient_text()}; {max_deg}"]
    for n in range(max_deg + 1):
        sl = space.degree_slice(n)
        for code, val in zip(range(p_pow(E.p, n)), table[sl]):
            f = FieldPoly.monic_from_code(E.F, n, code)
            lines.append(f"{' '.join(map(str, f.coeffs))},{int(val)}")
    tmp = path.with_suffix(".tmp")
    tmp.write_text("\n".join(lines) + "\n")
    tmp.replace(path)


def p_pow(p: int, n: int) -> int:
    return p**n


class CacheMismatch(ValueError):
    pass


def read_a_table(path: Path, E: CurveOverFqt, max_deg: int) -> np.ndarray:
    with open(path) as fh:
        header = fh.readline().strip()
        expected = f"{CACHE_HEADER}; {E.p}; {E.coefficient_text()}; {max_deg}"
        if header != expected:
            raise CacheMismatch(f"cache header {header!r} does not match {expected!r}")
        vals = [int(line.rsplit(",", 1)[1]) for line in fh if line.strip()]
    space = poly_space(E.p, max_deg)
    if len(vals) != space.size:
        raise CacheMismatch("truncated a_f cache")
    return np.array(vals, dtype=np.int64)


# ---------------------------------------------------------------------------
# the two reference curves


def legendre(p: int) -> CurveOverFqt:
    """y^2 = x(x-1)(x-t)."""
    return CurveOverFqt(p, [-1, -1], [0, 1], [0], name="legendre", split_roots=([0], [1], [0, 1]))


def second_curve(p: int) -> CurveOverFqt:
    """y^2 = (x-1)(x-2t^2-1)(x-t^2), good at infinity."""
    F = field(p)
    x1 = FieldPoly(F, [1])
    x2 = FieldPoly(F, [1, 0, 2])
    x3 = FieldPoly(F, [0, 0, 1])
    a = -(x1 + x2 + x3)
    b = x1 * x2 + x1 * x3 + x2 * x3
    c = -(x1 * x2 * x3)
    return CurveOverFqt(p, a, b, c, name="e2", split_roots=(x1, x2, x3))


# ---------------------------------------------------------------------------
# curves over F_p


@dataclass(frozen=True)
class ConstantCurve:
    """y^2 = x^3 + A x + B over F_p."""

    p: int
    A: int
    B: int

    def __post_init__(self):
        if self.p < 5:
            raise ValueError("characteristic must be at least 5")
        if (4 * self.A**3 + 27 * self.B**2) % self.p == 0:
            raise ValueError("singular curve")

    @property
    def q(self) -> int:
        return self.p

    @cached_property
    def affine_count(self) -> int:
        p = self.p
        squares = np.zeros(p, dtype=np.int64)
        np.add.at(squares, (np.arange(p) ** 2) % p, 1)
        xs = np.arange(p, dtype=np.int64)
        return int(squares[(xs**3 + self.A * xs + self.B) % p].sum())

    @property
    def trace(self) -> int:
        return self.p + 1 - (self.affine_count + 1)

    def power_sum(self, k: int) -> int:
        """alpha_1^k + alpha_2^k."""
        a, q = self.trace, self.p
        s_prev, s = 2, a
        if k == 0:
            return 2
        for _ in range(k - 1):
            s_prev, s = s, a * s - q * s_prev
        return s

    def count(self, k: int = 1) -> int:
        if k < 1:
            raise ValueError("k must be positive")
        return self.p**k + 1 - self.power_sum(k)

    def lpoly(self) -> list[int]:
        return [1, -self.trace, self.p]

    def as_curve(self) -> CurveOverFqt:
        return CurveOverFqt(self.p, [0], [self.A], [self.B], name=f"E0[{self.A},{self.B}]")


def count_constant(E0: ConstantCurve, k: int) -> int:
    return E0.count(k)


def constant_curve_with_trace(p: int, a: int) -> ConstantCurve:
    """The least (A, B) with trace a over F_p."""
    if a * a > 4 * p:
        raise ValueError("trace violates the Hasse bound")
    for A in range(p):
        for B in range(p):
            if (4 * A**3 + 27 * B**2) % p:
                E = ConstantCurve(p, A, B)
                if E.trace == a:
                    return E
    raise ValueError(f"no curve with trace {a} over F_{p}")
