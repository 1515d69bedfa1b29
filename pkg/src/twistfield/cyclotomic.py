"""Exact arithmetic in Z[zeta] and Q(zeta) for a primitive ell-th root of unity.

Numbers are stored in the power basis 1, zeta, ..., zeta^(ell-2) with a
shared positive denominator, always reduced modulo the ell-th cyclotomic
polynomial.  Values are immutable and hashable.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


def _reduce_full(ell: int, full: Sequence[int]) -> list[int]:
    """Map a vector in Z[x]/(x^ell - 1) to the power basis mod Phi_ell."""
    top = full[ell - 1]
    return [full[j] - top for j in range(ell - 1)]


class CycNumber:
    __slots__ = ("ell", "num", "den", "_hash")

    def __init__(self, ell: int, num: Iterable[int], den: int = 1):
        num = [int(x) for x in num]
        if len(num) == ell:
            num = _reduce_full(ell, num)
        if len(num) != ell - 1:
            raise ValueError(f"expected {ell - 1} coordinates, got {len(num)}")
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = [-x for x in num], -den
        if den != 1:
            g = math.gcd(den, *num)
            if g > 1:
                num, den = [x // g for x in num], den // g
        self.ell = ell
        self.num = tuple(num)
        self.den = den
        self._hash = None

    # -- constructors --------------------------------------------------------
    @classmethod
    def zero(cls, ell: int) -> "CycNumber":
        return cls(ell, [0] * (ell - 1))

    @classmethod
    def one(cls, ell: int) -> "CycNumber":
        return cls.rational(ell, 1)

    @classmethod
    def rational(cls, ell: int, r) -> "CycNumber":
        r = Fraction(r)
        return cls(ell, [r.numerator] + [0] * (ell - 2), r.denominator)

    @classmethod
    def root(cls, ell: int, k: int) -> "CycNumber":
        """zeta^k."""
        full = [0] * ell
        full[k % ell] = 1
        return cls(ell, full)

    @classmethod
    def from_full(cls, ell: int, full: Sequence[int]) -> "CycNumber":
        """sum_j full[j] zeta^j for a length-ell vector."""
        return cls(ell, _reduce_full(ell, list(full)))

    @classmethod
    def parse(cls, text: str) -> "CycNumber":
        """Inverse of :meth:`serialize`."""
        ell, nums, den = (s.strip() for s in text.split(";"))
        return cls(int(ell), [int(x) for x in nums.split(",")], int(den))

    # -- basic ---------------------------------------------------------------
    def serialize(self) -> str:
        return f"{self.ell}; {','.join(map(str, self.num))}; {self.den}"

    def __repr__(self) -> str:
        return f"CycNumber({self.serialize()})"

    def __str__(self) -> str:
        terms = []
        for j, c in enumerate(self.num):
            if c:
                mono = "" if j == 0 else ("z" if j == 1 else f"z^{j}")
                if not mono:
                    terms.append(str(c))
                elif c == 1:
                    terms.append(mono)
                elif c == -1:
                    terms.append("-" + mono)
                else:
                    terms.append(f"{c}*{mono}")
        body = " + ".join(terms).replace("+ -", "- ") or "0"
        return body if self.den == 1 else f"({body})/{self.den}"

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycNumber.rational(self.ell, other)
        if not isinstance(other, CycNumber):
            return NotImplemented
        return self.ell == other.ell and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ell, self.num, self.den))
        return self._hash

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def is_integral(self) -> bool:
        return self.den == 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def full(self) -> list[int]:
        """Length-ell numerator vector (last entry zero)."""
        return list(self.num) + [0]

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, o) -> "CycNumber":
        if isinstance(o, CycNumber):
            if o.ell != self.ell:
                raise ValueError("mismatched ell")
            return o
        return CycNumber.rational(self.ell, o)

    def __add__(self, o) -> "CycNumber":
        o = self._coerce(o)
        if self.den == o.den:
            return CycNumber(self.ell, [a + b for a, b in zip(self.num, o.num)], self.den)
        return CycNumber(
            self.ell, [a * o.den + b * self.den for a, b in zip(self.num, o.num)], self.den * o.den
        )

    __radd__ = __add__

    def __neg__(self) -> "CycNumber":
        return CycNumber(self.ell, [-a for a in self.num], self.den)

    def __sub__(self, o) -> "CycNumber":
        return self + (-self._coerce(o))

    def __rsub__(self, o) -> "CycNumber":
        return self._coerce(o) - self

    def __mul__(self, o) -> "CycNumber":
        o = self._coerce(o)
        ell = self.ell
        full = [0] * ell
        for i, a in enumerate(self.num):
            if a:
                for j, b in enumerate(o.num):
                    if b:
                        k = i + j
                        if k >= ell:
                            k -= ell
                        full[k] += a * b
        return CycNumber(ell, full, self.den * o.den)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "CycNumber":
        if e < 0:
            return (self.inverse()) ** (-e)
        out = CycNumber.one(self.ell)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def galois(self, k: int) -> "CycNumber":
        """Apply the automorphism zeta -> zeta^k."""
        ell = self.ell
        if k % ell == 0:
            raise ValueError("not an automorphism")
        full = [0] * ell
        for j, a in enumerate(self.num):
            full[j * k % ell] += a
        return CycNumber(ell, full, self.den)

    def conjugate(self) -> "CycNumber":
        return self.galois(self.ell - 1)

    def norm(self) -> Fraction:
        """Absolute norm to Q."""
        prod = CycNumber.one(self.ell)
        for k in range(1, self.ell):
            prod = prod * self.galois(k)
        return prod.to_fraction()

    def inverse(self) -> "CycNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        others = CycNumber.one(self.ell)
        for k in range(2, self.ell):
            others = others * self.galois(k)
        n = (self * others).to_fraction()
        return others * CycNumber.rational(self.ell, 1 / n)

    def __truediv__(self, o) -> "CycNumber":
        o = self._coerce(o)
        if o.is_zero():
            raise ZeroDivisionError("division by zero in Q(zeta)")
        if o.is_rational():
            r = o.to_fraction()
            return CycNumber(self.ell, [a * r.denominator for a in self.num], self.den * r.numerator)
        return self * o.inverse()

    def __rtruediv__(self, o) -> "CycNumber":
        return self._coerce(o) / self

    def root_exponent(self) -> int | None:
        """k if this number is zeta^k, else None."""
        if self.den != 1:
            return None
        nz = [j for j, a in enumerate(self.num) if a]
        if len(nz) == 1 and self.num[nz[0]] == 1:
            return nz[0]
        if len(nz) == self.ell - 1 and all(a == -1 for a in self.num):
            return self.ell - 1
        return None

    # -- embeddings ----------------------------------------------------------
    def embed(self, k: int = 1) -> complex:
        """Image under zeta -> exp(2 pi i k / ell)."""
        if not 1 <= k <= self.ell - 1:
            raise ValueError("embedding index must be in 1..ell-1")
        z = cmath.exp(2j * math.pi * k / self.ell)
        acc = 0j
        for a in reversed(self.num):
            acc = acc * z + a
        return acc / self.den

    def embeddings(self) -> list[complex]:
        return [self.embed(k) for k in range(1, self.ell)]


def complex_embed(a: CycNumber, k: int) -> complex:
    return a.embed(k)


def cyc_arith(a: CycNumber, b: CycNumber, op: str) -> CycNumber:
    ops = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}
    return ops[op](b)


def from_bucket_counts(ell: int, counts: Sequence[int] | np.ndarray) -> CycNumber:
    """sum_j counts[j] zeta^j for integer bucket counts of length ell."""
    return CycNumber.from_full(ell, [int(c) for c in counts])


# -- polynomials in u with cyclotomic coefficients ---------------------------


def poly_mul(a: Sequence[CycNumber], b: Sequence[CycNumber]) -> list[CycNumber]:
    ell = a[0].ell
    out = [CycNumber.zero(ell) for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
    return out


def poly_trim(a: Sequence[CycNumber]) -> list[CycNumber]:
    a = list(a)
    while len(a) > 1 and a[-1].is_zero():
        a.pop()
    return a


def poly_divmod(a: Sequence[CycNumber], b: Sequence[CycNumber]) -> tuple[list[CycNumber], list[CycNumber]]:
    """Division of polynomials over Q(zeta), low degree first."""
    b = poly_trim(b)
    if len(b) == 1 and b[0].is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    ell = b[0].ell
    db = len(b) - 1
    if len(r) - 1 < db:
        return [CycNumber.zero(ell)], r
    inv = b[-1].inverse() if not b[-1].is_rational() else None
    q = [CycNumber.zero(ell) for _ in range(len(r) - db)]
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db]
        if c:
            c = c * inv if inv is not None else c / b[-1]
            q[k] = c
            for j in range(db + 1):
                r[k + j] = r[k + j] - c * b[j]
    return q, poly_trim(r[:db]) if db else [CycNumber.zero(ell)]
