"""Finite fields F_{p^m}, dense polynomials over them, and prime enumeration.

Field elements are plain integers ("codes"): the element
c_0 + c_1 x + ... + c_{m-1} x^{m-1} of F_p[x]/(modulus) has code
sum c_i p^i.  Comparing codes as integers is the lexicographic order on
coefficient vectors read from the top coefficient down, and it is the
order used everywhere a canonical choice is needed.  The prime subfield
sits inside every F_{p^m} as the codes 0..p-1, so constant polynomials
embed without conversion.

Polynomials are stored low degree first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

# Fields up to this size carry exp/log/Zech tables; larger ones fall back
# to schoolbook arithmetic on digit vectors.
TABLE_LIMIT = 1 << 25
SCALAR_LIST_LIMIT = 1 << 22


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return prime_factors(n) == [n]


def multiplicative_order(q: int, ell: int) -> int:
    """Least n >= 1 with q^n = 1 mod ell."""
    if ell < 2:
        raise ValueError("ell must be at least 2")
    if q % ell == 0:
        raise ValueError(f"{ell} divides {q}")
    x, n = q % ell, 1
    while x != 1:
        x = x * q % ell
        n += 1
        if n > ell:
            raise ValueError(f"gcd({q}, {ell}) != 1")
    return n


# ---------------------------------------------------------------------------
# fields


class _IntView:
    """Read-only int indexing into an array; ``wrap`` folds indices in [n, 2n)."""

    __slots__ = ("arr", "n", "wrap")

    def __init__(self, arr: np.ndarray, wrap: bool = False):
        self.arr, self.n, self.wrap = arr, len(arr), wrap

    def __getitem__(self, i: int) -> int:
        if self.wrap and i >= self.n:
            i -= self.n
        return int(self.arr[i])


class FieldCtx:
    """The field F_{p^m} in its canonical model.

    The modulus is the least monic irreducible of degree m and the generator
    is the least primitive element, both in code order.  Instances are
    immutable once built; use :func:`field` to share them.
    """

    def __init__(self, p: int, m: int = 1):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be positive")
        self.p = p
        self.m = m
        self.size = p**m
        self.order = self.size - 1
        self._pw = [p**i for i in range(m)]
        self._tabled = self.size <= TABLE_LIMIT
        self._tables_built = False
        self._scalar_built = False
        if m == 1:
            self.modulus: tuple[int, ...] = (0, 1)
        else:
            self.modulus = _least_irreducible_modulus(p, m)
        self.generator = self._least_primitive()

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, m={self.m})"

    def __reduce__(self):
        return (field, (self.p, self.m))

    # -- digits ---------------------------------------------------------
    def to_digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.m):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def from_digits(self, ds: Sequence[int]) -> int:
        p = self.p
        return sum((d % p) * w for d, w in zip(ds, self._pw))

    # -- slow arithmetic (no tables) -------------------------------------
    def _slow_mul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        da, db = self.to_digits(a), self.to_digits(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        mod = self.modulus
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k] % p
            if c:
                for j in range(m):
                    prod[k - m + j] -= c * mod[j]
            prod[k] = 0
        return self.from_digits(prod[:m])

    def _slow_add(self, a: int, b: int) -> int:
        return self.from_digits([x + y for x, y in zip(self.to_digits(a), self.to_digits(b))])

    def _slow_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    def _least_primitive(self) -> int:
        if self.size == 2:
            return 1
        rs = prime_factors(self.order)
        start = 2 if self.m == 1 else self.p
        for g in range(start, self.size):
            if all(self._slow_pow(g, self.order // r) != 1 for r in rs):
                return g
        raise AssertionError("no primitive element")

    # -- tables -----------------------------------------------------------
    def _mul_matrix(self, a: int) -> np.ndarray:
        """Matrix over F_p of multiplication by ``a`` on digit vectors."""
        p, m = self.p, self.m
        cols = []
        col = self.to_digits(a)
        for _ in range(m):
            cols.append(col)
            top = col[-1]
            col = [0] + col[:-1]
            if top:
                col = [(c - top * self.modulus[j]) % p for j, c in enumerate(col)]
        return np.array(cols, dtype=np.int64).T

    def _build_tables(self) -> None:
        if self._tables_built:
            return
        if not self._tabled:
            raise ValueError(f"{self!r} is too large for lookup tables")
        p, m, n = self.p, self.m, self.order
        pw = np.array(self._pw, dtype=np.int64)
        if n == 1:
            exp = np.array([1], dtype=np.int64)
        else:
            blk = max(1, int(np.ceil(np.sqrt(n))))
            mg = self._mul_matrix(self.generator)
            first = np.zeros((m, blk), dtype=np.int64)
            v = np.zeros(m, dtype=np.int64)
            v[0] = 1
            for i in range(blk):
                first[:, i] = v
                v = mg @ v % p
            gb = int(pw @ v)
            mb = self._mul_matrix(gb)
            chunks = []
            cur = first
            total = 0
            while total < n:
                chunks.append(pw @ cur)
                total += blk
                cur = mb @ cur % p
            exp = np.concatenate(chunks)[:n]
        log = np.full(self.size, -1, dtype=np.int64)
        log[exp] = np.arange(n, dtype=np.int64)
        codes = np.arange(self.size, dtype=np.int64)
        small = np.uint8 if p < 256 else np.int64
        digits = np.stack([((codes // w) % p).astype(small) for w in self._pw], axis=1)
        del codes
        plus_one = digits[exp].copy()
        plus_one[:, 0] = (plus_one[:, 0] + 1) % p
        zech = log[self._codes_of(plus_one)]
        del plus_one
        self.exp_arr = exp
        self.log_arr = log
        self.digits_arr = digits
        self.pw_arr = pw
        self.zech_arr = zech
        self._tables_built = True

    def _codes_of(self, digits: np.ndarray, op=None) -> np.ndarray:
        """Codes from digit rows, optionally mapping each digit column first (mod p)."""
        out = np.zeros(digits.shape[:-1], dtype=np.int64)
        for i, w in enumerate(self._pw):
            col = digits[..., i].astype(np.int64)
            if op is not None:
                col = op(col) % self.p
            out += col * w
        return out

    def _build_scalar(self) -> None:
        """Index views for scalar arithmetic: Python lists when they fit, array views otherwise."""
        if self._scalar_built:
            return
        self._build_tables()
        if self.size <= SCALAR_LIST_LIMIT:
            self._exp_l = self.exp_arr.tolist() * 2
            self._log_l = self.log_arr.tolist()
            self._zech_l = self.zech_arr.tolist()
        else:
            self._exp_l = _IntView(self.exp_arr, wrap=True)
            self._log_l = _IntView(self.log_arr)
            self._zech_l = _IntView(self.zech_arr)
        self._scalar_built = True

    # -- scalar arithmetic -------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if not a:
            return b
        if not b:
            return a
        if not self._tabled:
            return self._slow_add(a, b)
        self._build_scalar()
        la, lb = self._log_l[a], self._log_l[b]
        z = self._zech_l[(lb - la) % self.order]
        if z < 0:
            return 0
        return self._exp_l[la + z]

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        if not a or self.p == 2:
            return a
        return self.from_digits([-d for d in self.to_digits(a)])

    def sub(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if not a or not b:
            return 0
        if not self._tabled:
            return self._slow_mul(a, b)
        self._build_scalar()
        return self._exp_l[self._log_l[a] + self._log_l[b]]

    def inv(self, a: int) -> int:
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.m == 1:
            return pow(a, -1, self.p)
        if not self._tabled:
            return self._slow_pow(a, self.order - 1)
        self._build_scalar()
        return self._exp_l[self.order - self._log_l[a]]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if not a:
            return 0 if e else 1
        if self.m == 1:
            return pow(a, e, self.p)
        if not self._tabled:
            return self._slow_pow(a, e % self.order)
        self._build_scalar()
        return self._exp_l[self._log_l[a] * e % self.order]

    def frob(self, a: int, k: int = 1) -> int:
        """a -> a^(p^k)."""
        if self.m == 1 or not a:
            return a
        return self.pow(a, pow(self.p, k % self.m))

    def log(self, a: int) -> int:
        if not a:
            raise ValueError("log of zero")
        self._build_scalar()
        return self._log_l[a]

    def exp(self, n: int) -> int:
        self._build_scalar()
        return self._exp_l[n % self.order]

    def scalar(self, c: int) -> int:
        """Code of the prime-field element c mod p."""
        return c % self.p

    def elements(self) -> range:
        return range(self.size)

    # -- vector arithmetic (numpy arrays of codes) ---------------------------
    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return a * b % self.p
        self._build_tables()
        la, lb = self.log_arr[a], self.log_arr[b]
        out = self.exp_arr[(la + lb) % self.order]
        return np.where((la < 0) | (lb < 0), 0, out)

    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a + b) % self.p
        self._build_tables()
        la, lb = self.log_arr[a], self.log_arr[b]
        z = self.zech_arr[(lb - la) % self.order]
        s = np.where(z < 0, 0, self.exp_arr[(la + z) % self.order])
        return np.where(la < 0, b, np.where(lb < 0, a, s))

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.m == 1:
            return (-a) % self.p
        self._build_tables()
        return self._codes_of(self.digits_arr[a], lambda d: -d)

    def vscale(self, a, c: int) -> np.ndarray:
        """Multiply codes by the prime-field scalar c."""
        a = np.asarray(a, dtype=np.int64)
        if self.m == 1:
            return a * c % self.p
        self._build_tables()
        return self._codes_of(self.digits_arr[a], lambda d: d * c)

    def vlog(self, a) -> np.ndarray:
        self._build_tables()
        return self.log_arr[np.asarray(a, dtype=np.int64)]


@lru_cache(maxsize=None)
def _field(p: int, m: int) -> FieldCtx:
    return FieldCtx(p, m)


def field(p: int, m: int = 1) -> FieldCtx:
    """Shared canonical instance of F_{p^m}."""
    return _field(int(p), int(m))


@dataclass(frozen=True)
class FieldElement:
    """An element of a :class:`FieldCtx`, with arithmetic operators."""

    ctx: FieldCtx
    code: int

    def _other(self, o) -> int:
        if isinstance(o, FieldElement):
            if o.ctx is not self.ctx:
                raise ValueError("elements of different fields")
            return o.code
        return self.ctx.scalar(int(o))

    def __add__(self, o):
        return FieldElement(self.ctx, self.ctx.add(self.code, self._other(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return FieldElement(self.ctx, self.ctx.sub(self.code, self._other(o)))

    def __rsub__(self, o):
        return FieldElement(self.ctx, self.ctx.sub(self._other(o), self.code))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.code))

    def __mul__(self, o):
        return FieldElement(self.ctx, self.ctx.mul(self.code, self._other(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return FieldElement(self.ctx, self.ctx.div(self.code, self._other(o)))

    def __pow__(self, e: int):
        return FieldElement(self.ctx, self.ctx.pow(self.code, e))

    def __bool__(self) -> bool:
        return self.code != 0

    def multiplicative_order(self) -> int:
        if not self.code:
            raise ValueError("zero has no multiplicative order")
        n = self.ctx.order
        for r in prime_factors(n):
            while n % r == 0 and self.ctx.pow(self.code, n // r) == 1:
                n //= r
        return n


def _least_irreducible_modulus(p: int, m: int) -> tuple[int, ...]:
    base = field(p, 1)
    for code in range(p**m):
        f = FieldPoly.monic_from_code(base, m, code)
        if f.is_irreducible():
            return f.coeffs
    raise AssertionError("no irreducible polynomial found")


# ---------------------------------------------------------------------------
# polynomials


def _trim(c: list[int]) -> tuple[int, ...]:
    while c and not c[-1]:
        c.pop()
    return tuple(c)


class FieldPoly:
    """Dense univariate polynomial over a :class:`FieldCtx`, low degree first."""

    __slots__ = ("ctx", "coeffs", "_hash")

    def __init__(self, ctx: FieldCtx, coeffs: Iterable[int] = ()):
        self.ctx = ctx
        if ctx.m == 1:
            self.coeffs = _trim([int(c) % ctx.p for c in coeffs])
        else:
            self.coeffs = _trim([int(c) for c in coeffs])
        self._hash = None

    # -- construction ------------------------------------------------------
    @classmethod
    def monic_from_code(cls, ctx: FieldCtx, degree: int, code: int) -> "FieldPoly":
        """The monic polynomial of given degree whose lower coefficients have ``code``."""
        q = ctx.size
        cs = []
        for _ in range(degree):
            code, r = divmod(code, q)
            cs.append(r)
        cs.append(1)
        return cls(ctx, cs)

    @classmethod
    def t(cls, ctx: FieldCtx) -> "FieldPoly":
        return cls(ctx, (0, 1))

    @classmethod
    def const(cls, ctx: FieldCtx, c: int) -> "FieldPoly":
        return cls(ctx, (c,))

    # -- basic properties ----------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.lc == 1

    @property
    def code(self) -> int:
        """Code of the coefficients below the leading one (monic polynomials)."""
        q = self.ctx.size
        out = 0
        for c in reversed(self.coeffs[:-1]):
            out = out * q + c
        return out

    def key(self) -> tuple:
        """Sort key: degree first, then lexicographic from the top coefficient."""
        return (self.degree, tuple(reversed(self.coeffs)))

    def __lt__(self, other: "FieldPoly") -> bool:
        return self.key() < other.key()

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.coeffs == _trim([other % self.ctx.p]) if self.ctx.m == 1 else self.coeffs == _trim([other])
        if not isinstance(other, FieldPoly):
            return NotImplemented
        return self.ctx is other.ctx and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ctx.p, self.ctx.m, self.coeffs))
        return self._hash

    def __repr__(self) -> str:
        return f"FieldPoly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            cs = str(c) if self.ctx.m == 1 else f"[{c}]"
            if i == 0:
                terms.append(cs)
            else:
                mono = "t" if i == 1 else f"t^{i}"
                terms.append(mono if c == 1 else f"{cs}*{mono}")
        return " + ".join(terms)

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, o) -> "FieldPoly":
        if isinstance(o, FieldPoly):
            if o.ctx is not self.ctx:
                raise ValueError("polynomials over different fields")
            return o
        if isinstance(o, FieldElement):
            return FieldPoly(self.ctx, (o.code,))
        return FieldPoly(self.ctx, (self.ctx.scalar(int(o)),))

    def __add__(self, o) -> "FieldPoly":
        o = self._coerce(o)
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        ctx = self.ctx
        if ctx.m == 1:
            out = list(a)
            for i, c in enumerate(b):
                out[i] += c
            return FieldPoly(ctx, out)
        out = list(a)
        for i, c in enumerate(b):
            out[i] = ctx.add(out[i], c)
        return FieldPoly(ctx, out)

    __radd__ = __add__

    def __neg__(self) -> "FieldPoly":
        return FieldPoly(self.ctx, [self.ctx.neg(c) for c in self.coeffs])

    def __sub__(self, o) -> "FieldPoly":
        return self + (-self._coerce(o))

    def __rsub__(self, o) -> "FieldPoly":
        return self._coerce(o) - self

    def __mul__(self, o) -> "FieldPoly":
        o = self._coerce(o)
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return FieldPoly(self.ctx)
        ctx = self.ctx
        out = [0] * (len(a) + len(b) - 1)
        if ctx.m == 1:
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return FieldPoly(ctx, out)
        mul, add = ctx.mul, ctx.add
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add(out[i + j], mul(x, y))
        return FieldPoly(ctx, out)

    __rmul__ = __mul__

    def scale(self, c: int) -> "FieldPoly":
        mul = self.ctx.mul
        return FieldPoly(self.ctx, [mul(c, x) for x in self.coeffs])

    def __divmod__(self, o) -> tuple["FieldPoly", "FieldPoly"]:
        o = self._coerce(o)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        ctx = self.ctx
        r = list(self.coeffs)
        db = o.degree
        if len(r) - 1 < db:
            return FieldPoly(ctx), self
        b = o.coeffs
        inv = ctx.inv(b[-1])
        qd = len(r) - 1 - db
        quo = [0] * (qd + 1)
        if ctx.m == 1:
            p = ctx.p
            for k in range(qd, -1, -1):
                c = r[k + db] % p
                if c:
                    c = c * inv % p
                    quo[k] = c
                    for j in range(db + 1):
                        r[k + j] -= c * b[j]
            return FieldPoly(ctx, quo), FieldPoly(ctx, r[:db])
        mul, sub = ctx.mul, ctx.sub
        for k in range(qd, -1, -1):
            c = r[k + db]
            if c:
                c = mul(c, inv)
                quo[k] = c
                for j in range(db + 1):
                    if b[j]:
                        r[k + j] = sub(r[k + j], mul(c, b[j]))
        return FieldPoly(ctx, quo), FieldPoly(ctx, r[:db])

    def __floordiv__(self, o) -> "FieldPoly":
        return divmod(self, o)[0]

    def __mod__(self, o) -> "FieldPoly":
        return divmod(self, o)[1]

    def __pow__(self, e: int) -> "FieldPoly":
        if e < 0:
            raise ValueError("negative power")
        out = FieldPoly(self.ctx, (1,))
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def powmod(self, e: int, mod: "FieldPoly") -> "FieldPoly":
        out = FieldPoly(self.ctx, (1,)) % mod
        base = self % mod
        while e:
            if e & 1:
                out = out * base % mod
            base = base * base % mod
            e >>= 1
        return out

    def monic(self) -> "FieldPoly":
        if self.is_zero() or self.lc == 1:
            return self
        return self.scale(self.ctx.inv(self.lc))

    def gcd(self, o) -> "FieldPoly":
        a, b = self, self._coerce(o)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> "FieldPoly":
        ctx = self.ctx
        return FieldPoly(ctx, [ctx.mul(ctx.scalar(i), c) for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: int) -> int:
        """Evaluate at a field element code."""
        ctx = self.ctx
        acc = 0
        for c in reversed(self.coeffs):
            acc = ctx.add(ctx.mul(acc, x), c)
        return acc

    def compose(self, g: "FieldPoly") -> "FieldPoly":
        out = FieldPoly(self.ctx)
        for c in reversed(self.coeffs):
            out = out * g + FieldPoly(self.ctx, (c,))
        return out

    def homogenized(self, u: "FieldPoly", v: "FieldPoly") -> "FieldPoly":
        """v^deg(f) f(u/v) as a polynomial in t."""
        d = self.degree
        out = FieldPoly(self.ctx)
        upow = FieldPoly(self.ctx, (1,))
        vpows = [FieldPoly(self.ctx, (1,))]
        for _ in range(d):
            vpows.append(vpows[-1] * v)
        for i, c in enumerate(self.coeffs):
            if c:
                out = out + (upow * vpows[d - i]).scale(c)
            upow = upow * u
        return out

    def frobenius(self, k: int = 1) -> "FieldPoly":
        """Apply x -> x^(p^k) to every coefficient."""
        ctx = self.ctx
        return FieldPoly(ctx, [ctx.frob(c, k) for c in self.coeffs])

    def over(self, ctx: FieldCtx) -> "FieldPoly":
        """View a polynomial with prime-field coefficients over another field of the same characteristic."""
        if ctx.p != self.ctx.p:
            raise ValueError("characteristic mismatch")
        if self.ctx is not ctx and any(c >= ctx.p for c in self.coeffs):
            raise ValueError("coefficients outside the prime field")
        return FieldPoly(ctx, self.coeffs)

    def in_prime_field(self) -> bool:
        return all(c < self.ctx.p for c in self.coeffs)

    # -- structure ------------------------------------------------------------
    def is_squarefree(self) -> bool:
        if self.degree <= 0:
            return not self.is_zero()
        d = self.derivative()
        if d.is_zero():
            return False
        return self.gcd(d).degree == 0

    def is_irreducible(self) -> bool:
        """Rabin's test over the coefficient field."""
        n = self.degree
        if n <= 0:
            return False
        if n == 1:
            return True
        f = self.monic()
        q = self.ctx.size
        x = FieldPoly.t(self.ctx)

        def frob_power(k: int) -> FieldPoly:
            r = x % f
            for _ in range(k):
                r = r.powmod(q, f)
            return r

        if (frob_power(n) - x) % f != FieldPoly(self.ctx):
            return False
        for r in prime_factors(n):
            if f.gcd(frob_power(n // r) - x).degree != 0:
                return False
        return True

    def roots(self) -> list[int]:
        """Distinct roots in the coefficient field, ascending codes."""
        f = self.monic()
        if f.degree <= 0:
            return []
        x = FieldPoly.t(self.ctx)
        g = f.gcd(x.powmod(self.ctx.size, f) - x)
        return sorted(c for fac in equal_degree_factors(g, 1) for c in [self.ctx.neg(fac.coeffs[0])])


def resultant(a: FieldPoly, b: FieldPoly) -> int:
    """Res(a, b) = lc(a)^deg b * prod_{a(x)=0} b(x)."""
    ctx = a.ctx
    if a.is_zero() or b.is_zero():
        return 0
    res = 1
    while True:
        da, db = a.degree, b.degree
        if db == 0:
            return ctx.mul(res, ctx.pow(b.lc, da))
        r = a % b
        if r.is_zero():
            return 0
        if (da * db) % 2 and ctx.p != 2:
            res = ctx.neg(res)
        res = ctx.mul(res, ctx.pow(b.lc, da - r.degree))
        a, b = b, r


def _trial_polys(ctx: FieldCtx, bound: int) -> Iterator[FieldPoly]:
    """Deterministic sequence of nonconstant monic polynomials of degree < bound."""
    for d in range(1, bound):
        for code in range(ctx.size**d):
            yield FieldPoly.monic_from_code(ctx, d, code)


def equal_degree_factors(f: FieldPoly, r: int) -> list[FieldPoly]:
    """Split a monic square-free f whose irreducible factors all have degree r.

    Deterministic Cantor-Zassenhaus: trial polynomials are taken in code
    order instead of at random.  Factors are returned sorted.
    """
    f = f.monic()
    if f.degree <= 0:
        return []
    if f.degree % r:
        raise ValueError("degree not divisible by factor degree")
    if f.degree == r:
        return [f]
    ctx = f.ctx
    q = ctx.size
    for h in _trial_polys(ctx, f.degree):
        if ctx.p == 2:
            # the absolute trace is additive, so monic shifts are not enough
            candidates = []
            for c in range(1, q):
                acc = h.scale(c) % f
                tr = acc
                for _ in range(ctx.m * r - 1):
                    acc = acc * acc % f
                    tr = tr + acc
                candidates.append(f.gcd(tr))
        else:
            candidates = [f.gcd(h.powmod((q**r - 1) // 2, f) - 1)]
        for g in candidates:
            if 0 < g.degree < f.degree:
                return sorted(equal_degree_factors(g, r) + equal_degree_factors(f // g, r))
    raise AssertionError("equal-degree splitting failed")


@dataclass(frozen=True)
class Place:
    """A place of F_q(t): a monic irreducible polynomial, or infinity."""

    poly: FieldPoly | None = None

    @classmethod
    def finite(cls, P: FieldPoly) -> "Place":
        if not P.is_monic() or not P.is_irreducible():
            raise ValueError("finite places are monic irreducibles")
        return cls(P)

    @classmethod
    def infinity(cls) -> "Place":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    def __str__(self) -> str:
        return "inf" if self.poly is None else str(self.poly)


INFINITY = Place.infinity()


# ---------------------------------------------------------------------------
# enumeration and Frobenius


def enumerate_monic_irreducibles(ctx: FieldCtx, d: int) -> list[FieldPoly]:
    """All monic irreducibles of degree d over ctx, in code order."""
    if d < 1:
        raise ValueError("degree must be positive")
    if ctx.m == 1:
        from .polyspace import irreducible_codes

        return [FieldPoly.monic_from_code(ctx, d, int(c)) for c in irreducible_codes(ctx.p, d)]
    out = []
    for code in range(ctx.size**d):
        f = FieldPoly.monic_from_code(ctx, d, code)
        if f.is_irreducible():
            out.append(f)
    return out


def count_monic_irreducibles(q: int, d: int) -> int:
    """Gauss's necklace count (used as an independent check)."""
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += _mobius(d // e) * q**e
    return total // d


def _mobius(n: int) -> int:
    fs = prime_factors(n)
    for r in fs:
        if n % (r * r) == 0:
            return 0
    return -1 if len(fs) % 2 else 1


def factor_over_extension(P: FieldPoly, m: int) -> list[FieldPoly]:
    """Factors of an irreducible P over F_p inside F_{p^m}[t], as a Frobenius orbit.

    The first factor is the least one in code order and each next factor is
    the Frobenius image of the previous one.
    """
    if P.ctx.m != 1:
        raise ValueError("base field must be a prime field")
    if P.degree % m:
        raise ValueError(f"{m} does not divide deg P = {P.degree}")
    big = field(P.ctx.p, m)
    Pb = P.monic().over(big)
    if m == 1:
        return [Pb]
    factors = equal_degree_factors(Pb, P.degree // m)
    orbit = [factors[0]]
    for _ in range(m - 1):
        orbit.append(orbit[-1].frobenius())
    if sorted(orbit) != factors:
        raise AssertionError("factors do not form one Frobenius orbit")
    return orbit


def norm_down(f: FieldPoly, m: int) -> FieldPoly:
    """f * phi(f) * ... * phi^{m-1}(f), returned over the prime field."""
    if f.is_zero():
        raise ValueError("norm of zero")
    if f.ctx.m != m:
        raise ValueError("f must live over F_{p^m}")
    out = f
    g = f
    for _ in range(m - 1):
        g = g.frobenius()
        out = out * g
    if not out.in_prime_field():
        raise AssertionError("norm is not Frobenius invariant")
    return FieldPoly(field(f.ctx.p, 1), out.coeffs)


def is_norm_squarefree(f: FieldPoly, m: int) -> bool:
    return norm_down(f, m).is_squarefree()


def squarefree_decomposition(f: FieldPoly) -> list[tuple[FieldPoly, int]]:
    """Pairs (g_i, i) with f = lc * prod g_i^i and each g_i square-free."""
    ctx = f.ctx
    p = ctx.p
    f = f.monic()
    out: list[tuple[FieldPoly, int]] = []
    if f.degree <= 0:
        return out
    d = f.derivative()
    if d.is_zero():
        # f is a p-th power: take p-th roots of the coefficients
        root = FieldPoly(ctx, [ctx.pow(c, ctx.size // p) for c in f.coeffs[::p]])
        return [(g, i * p) for g, i in squarefree_decomposition(root)]
    c = f.gcd(d)
    w = f // c
    i = 1
    while w.degree > 0:
        y = w.gcd(c)
        z = w // y
        if z.degree > 0:
            out.append((z, i))
        i += 1
        w, c = y, c // y
    if c.degree > 0:
        root = FieldPoly(ctx, [ctx.pow(x, ctx.size // p) for x in c.coeffs[::p]])
        out.extend((g, j * p) for g, j in squarefree_decomposition(root))
    return out


def factor(f: FieldPoly) -> list[tuple[FieldPoly, int]]:
    """Monic irreducible factorization, sorted by (degree, code)."""
    out = []
    x = FieldPoly.t(f.ctx)
    q = f.ctx.size
    for g, mult in squarefree_decomposition(f):
        h = x % g
        rest = g
        k = 0
        while rest.degree > 0:
            k += 1
            if 2 * k > rest.degree:
                out.append((rest, mult))
                break
            h = h.powmod(q, rest)
            part = rest.gcd(h - x)
            if part.degree > 0:
                out.extend((P, mult) for P in equal_degree_factors(part, k))
                rest = rest // part
                h = h % rest
    merged: dict[FieldPoly, int] = {}
    for P, e in out:
        merged[P] = merged.get(P, 0) + e
    return sorted(merged.items(), key=lambda pe: pe[0].key())


def valuation(f: FieldPoly, P: FieldPoly) -> int:
    """Exponent of P in f (infinite for f = 0 is reported as a large sentinel)."""
    if f.is_zero():
        return 1 << 30
    v = 0
    while True:
        q, r = divmod(f, P)
        if not r.is_zero():
            return v
        f, v = q, v + 1
