"""Vectorized bookkeeping for all monic polynomials over F_p up to a degree.

A monic polynomial of degree n is identified with the code of its lower
coefficients, and all monic polynomials of degree <= D are laid out in one
flat index: ``offset[n] + code``.  Index 0 is the constant 1.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .galois import field


@lru_cache(maxsize=64)
def lower_digits(p: int, n: int) -> np.ndarray:
    """Digits (low to high) of every code in [0, p^n), shape (p^n, n)."""
    codes = np.arange(p**n, dtype=np.int64)
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.stack([(codes // p**i) % p for i in range(n)], axis=1)


def monic_coeffs(p: int, n: int) -> np.ndarray:
    """Full coefficient rows (low to high, leading 1) of all monic degree-n polys."""
    low = lower_digits(p, n)
    return np.concatenate([low, np.ones((low.shape[0], 1), dtype=np.int64)], axis=1)


def _product_codes(p: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Codes of a_i * b_j for monic coefficient rows a, b; shape (len a, len b)."""
    da, db = a.shape[1] - 1, b.shape[1] - 1
    n = da + db
    out = np.zeros((a.shape[0], b.shape[0], n + 1), dtype=np.int64)
    for i in range(da + 1):
        out[:, :, i : i + db + 1] += a[:, i, None, None] * b[None, :, :]
    out %= p
    weights = p ** np.arange(n, dtype=np.int64)
    return out[:, :, :n] @ weights


@lru_cache(maxsize=64)
def irreducible_codes(p: int, d: int) -> np.ndarray:
    """Sorted codes of the monic irreducibles of degree d over F_p."""
    if d == 1:
        return np.arange(p, dtype=np.int64)
    composite = np.zeros(p**d, dtype=bool)
    for k in range(1, d // 2 + 1):
        small = monic_coeffs(p, k)[irreducible_codes(p, k)]
        composite[_product_codes(p, small, monic_coeffs(p, d - k)).ravel()] = True
    return np.flatnonzero(~composite).astype(np.int64)


class PolySpace:
    """Factor structure of every monic polynomial of degree <= max_deg over F_p.

    For each index f (other than 1) we store a prime factor ``prime[f]`` (the
    least one in degree-then-code order), its exponent ``exponent[f]`` and
    the cofactor index ``rest[f]`` with the prime removed completely.
    """

    def __init__(self, p: int, max_deg: int):
        self.p = p
        self.max_deg = max_deg
        self.offset = np.array([(p**n - 1) // (p - 1) for n in range(max_deg + 2)], dtype=np.int64)
        self.size = int(self.offset[-1])
        degree = np.zeros(self.size, dtype=np.int64)
        for n in range(max_deg + 1):
            degree[self.offset[n] : self.offset[n + 1]] = n
        self.degree = degree

        prime_deg, prime_code = [], []
        for n in range(1, max_deg + 1):
            codes = irreducible_codes(p, n)
            prime_deg.append(np.full(len(codes), n, dtype=np.int64))
            prime_code.append(codes)
        self.prime_deg = np.concatenate(prime_deg) if prime_deg else np.zeros(0, dtype=np.int64)
        self.prime_code = np.concatenate(prime_code) if prime_code else np.zeros(0, dtype=np.int64)
        self.prime_index = self.offset[self.prime_deg] + self.prime_code
        self.prime_start = np.searchsorted(self.prime_deg, np.arange(max_deg + 2))

        big = np.iinfo(np.int64).max
        prime = np.full(self.size, big, dtype=np.int64)
        cofactor = np.zeros(self.size, dtype=np.int64)
        pairs = []
        for k in range(1, max_deg + 1):
            lo, hi = self.prime_start[k], self.prime_start[k + 1]
            if lo == hi:
                continue
            rows = monic_coeffs(p, k)[self.prime_code[lo:hi]]
            ranks = np.arange(lo, hi, dtype=np.int64)
            for n in range(k, max_deg + 1):
                prod = _product_codes(p, rows, monic_coeffs(p, n - k)) + self.offset[n]
                g = np.broadcast_to(np.arange(p ** (n - k), dtype=np.int64) + self.offset[n - k], prod.shape)
                r = np.broadcast_to(ranks[:, None], prod.shape)
                np.minimum.at(prime, prod.ravel(), r.ravel())
                pairs.append((prod.ravel(), r.ravel(), g.ravel()))
        for f, r, g in pairs:
            hit = prime[f] == r
            cofactor[f[hit]] = g[hit]
        prime[0] = -1
        self.prime = prime

        exponent = np.zeros(self.size, dtype=np.int64)
        rest = np.zeros(self.size, dtype=np.int64)
        for n in range(1, max_deg + 1):
            sl = slice(self.offset[n], self.offset[n + 1])
            g = cofactor[sl]
            same = prime[g] == prime[sl]
            exponent[sl] = np.where(same, exponent[g] + 1, 1)
            rest[sl] = np.where(same, rest[g], g)
        self.exponent = exponent
        self.rest = rest

    @property
    def num_primes(self) -> int:
        return len(self.prime_deg)

    def index(self, degree: int, code: int) -> int:
        return int(self.offset[degree] + code)

    def degree_slice(self, n: int) -> slice:
        return slice(int(self.offset[n]), int(self.offset[n + 1]))

    def primes_of_degree(self, n: int) -> slice:
        return slice(int(self.prime_start[n]), int(self.prime_start[n + 1]))

    def extend(self, prime_power_value, identity, combine, dtype=np.int64) -> np.ndarray:
        """Fill a multiplicative function from its values on prime powers.

        ``prime_power_value(ranks, exps)`` returns values on P^e for arrays of
        prime ranks and exponents; ``combine(x, y)`` multiplies value arrays.
        """
        out = np.empty(self.size, dtype=dtype)
        out[0] = identity
        for n in range(1, self.max_deg + 1):
            sl = self.degree_slice(n)
            pp = prime_power_value(self.prime[sl], self.exponent[sl])
            out[sl] = combine(pp, out[self.rest[sl]])
        return out


@lru_cache(maxsize=16)
def poly_space(p: int, max_deg: int) -> PolySpace:
    return PolySpace(p, max_deg)


def _charpoly_lower(K, xs: np.ndarray, k: int) -> np.ndarray:
    """Lower coefficients (in K) of prod_i (t - x^(p^i)), i < k, for each x; shape (len xs, k)."""
    p = K.p
    logs = K.vlog(xs)
    coeffs = [np.ones(len(xs), dtype=np.int64)]  # low to high, built from the top
    for i in range(k):
        conj = np.where(logs < 0, 0, K.exp_arr[np.maximum(logs, 0) * pow(p, i, K.order) % K.order])
        neg = K.vneg(conj)
        new = [K.vmul(neg, coeffs[0])]
        for j in range(1, len(coeffs)):
            new.append(K.vadd(coeffs[j - 1], K.vmul(neg, coeffs[j])))
        new.append(coeffs[-1])
        coeffs = new
    return np.stack(coeffs[:-1], axis=1)


@lru_cache(maxsize=64)
def prime_roots(p: int, k: int) -> np.ndarray:
    """For each monic irreducible of degree k (code order), one root in F_{p^k}.

    All characteristic polynomials t -> prod_i (t - x^(p^i)) are computed at
    once over F_{p^k}; an element whose characteristic polynomial is
    irreducible is a root of it.
    """
    K = field(p, k)
    codes = irreducible_codes(p, k)
    if k == 1:
        return (-codes) % p
    K._build_tables()
    xs = np.arange(1, K.size, dtype=np.int64)
    lower = _charpoly_lower(K, xs, k)
    in_base = np.all(lower < p, axis=1)
    code = lower @ (p ** np.arange(k, dtype=np.int64))
    pos = np.searchsorted(codes, code)
    pos_clip = np.minimum(pos, len(codes) - 1)
    hit = in_base & (codes[pos_clip] == code)
    out = np.full(len(codes), K.size, dtype=np.int64)
    np.minimum.at(out, pos_clip[hit], xs[hit])
    assert np.all(out < K.size)
    return out


@lru_cache(maxsize=32)
def charpoly_classes(p: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Group F_{p^k} by characteristic polynomial over F_p.

    Returns (codes, inverse): the sorted codes of the monic degree-k
    characteristic polynomials that occur, and for each element of
    F_{p^k} (code order) the position of its polynomial in ``codes``.
    """
    K = field(p, k)
    xs = np.arange(K.size, dtype=np.int64)
    if k == 1:
        return np.arange(p, dtype=np.int64), (-xs) % p
    K._build_tables()
    code = np.zeros(K.size, dtype=np.int64)
    for lo in range(0, K.size, 1 << 20):
        lower = _charpoly_lower(K, xs[lo : lo + (1 << 20)], k)
        assert np.all(lower < p)
        code[lo : lo + len(lower)] = lower @ (p ** np.arange(k, dtype=np.int64))
    codes, inverse = np.unique(code, return_inverse=True)
    return codes, inverse.ravel()
