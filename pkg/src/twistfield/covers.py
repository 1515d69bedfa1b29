"""Cyclic degree-ell covers of the projective line and their plane models.

A cover is described by square-free coprime parts f_1..f_{ell-1} over
F_{p^n} (n the order of p mod ell); its first conjugate block is
F1 = f_1 f_2^2 ... f_{ell-1}^{ell-1} and the conductor is the norm of
f_1 ... f_{ell-1}.  Plane models are products over all conjugates of
y - sum_k zeta^(j p^k) (F_{v_k})^(1/ell), expanded symbolically.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import numpy as np

from .characters import OrderLCharacter, canonical_factor, omega_choice
from .constant import constant_twist_lpoly, conjugate_product, vanishing_check
from .cyclotomic import CycNumber, poly_mul
from .elliptic import ConstantCurve
from .galois import FieldCtx, FieldPoly, factor, field, multiplicative_order, norm_down
from .lfunction import analytic_rank, dirichlet_lpoly


# ---------------------------------------------------------------------------
# integer polynomials attached to the subgroup generated by p mod ell


def _subgroup(ell: int, n: int) -> list[int]:
    """The subgroup of order n of (Z/ell)^*, listed as powers of a generator."""
    g = next(x for x in range(2, ell) if multiplicative_order(x, ell) == ell - 1) if ell > 2 else 1
    h = pow(g, (ell - 1) // n, ell)
    return [pow(h, k, ell) for k in range(n)]


def _coset_reps(ell: int, n: int) -> list[int]:
    H = set(_subgroup(ell, n))
    seen, reps = set(), []
    for j in range(1, ell):
        if j not in seen:
            reps.append(j)
            seen.update(j * h % ell for h in H)
    return reps


def _integer_list(coeffs: list[CycNumber]) -> list[int]:
    out = []
    for c in coeffs:
        f = c.to_fraction() if c.is_rational() else None
        if f is None or f.denominator != 1:
            raise ArithmeticError("expansion is not integral")
        out.append(int(f))
    return out


@lru_cache(maxsize=None)
def psi_poly(ell: int, n_q: int) -> tuple[int, ...]:
    """Integer coefficients (low to high) of prod over coset reps j of
    y - sum_{h in H} zeta^(j h), H the order-n_q subgroup mod ell."""
    if (ell - 1) % n_q:
        raise ValueError("n_q must divide ell - 1")
    H = _subgroup(ell, n_q)
    acc = [CycNumber.one(ell)]
    for j in _coset_reps(ell, n_q):
        s = CycNumber.zero(ell)
        for h in H:
            s = s + CycNumber.root(ell, j * h)
        acc = poly_mul(acc, [-s, CycNumber.one(ell)])
    return tuple(_integer_list(acc))


def psi_gauss_closed_form(ell: int) -> tuple[int, ...]:
    """The closed form for n_q = 2 via floors and binomials."""
    h = (ell - 1) // 2
    return tuple((-1) ** ((ell - 1 - 2 * n) // 4) * math.comb((ell - 1 + 2 * n) // 4, n) for n in range(h + 1))


def _int_poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def am_coeffs(ell: int, n_q: int) -> tuple[int, ...]:
    """a_0..a_{ell-1} with y^ell + sum a_m y^m = psi(y)^n_q (y - n_q)."""
    acc = [1]
    psi = list(psi_poly(ell, n_q))
    for _ in range(n_q):
        acc = _int_poly_mul(acc, psi)
    acc = _int_poly_mul(acc, [-n_q, 1])
    assert len(acc) == ell + 1 and acc[-1] == 1
    return tuple(acc[:-1])


@lru_cache(maxsize=None)
def block_expansion(ell: int, q_mod: int) -> dict[tuple[int, ...], int]:
    """prod_{j<ell} (1 - sum_k zeta^(j q^k) A_k) as {exponents of A: integer},
    constant term dropped; q_mod is q mod ell and n its order."""
    n = multiplicative_order(q_mod, ell)
    qk = [pow(q_mod, k, ell) for k in range(n)]
    poly: dict[tuple[int, ...], CycNumber] = {(0,) * n: CycNumber.one(ell)}
    for j in range(ell):
        factor_terms = {(0,) * n: CycNumber.one(ell)}
        for k in range(n):
            e = tuple(1 if i == k else 0 for i in range(n))
            factor_terms[e] = -CycNumber.root(ell, j * qk[k])
        new: dict[tuple[int, ...], CycNumber] = {}
        for e1, c1 in poly.items():
            for e2, c2 in factor_terms.items():
                key = tuple(x + y for x, y in zip(e1, e2))
                new[key] = new.get(key, CycNumber.zero(ell)) + c1 * c2
        poly = {k: v for k, v in new.items() if not v.is_zero()}
    out = {}
    for key, c in poly.items():
        if sum(key) == 0:
            continue
        (val,) = _integer_list([c])
        out[key] = val
    return out


# ---------------------------------------------------------------------------
# cover data


@dataclass(frozen=True)
class CoverSpec:
    """Cover of P^1 attached to the parts f_1..f_{ell-1} over F_{p^n_q}."""

    ell: int
    p: int
    parts: tuple[FieldPoly, ...]

    def __post_init__(self):
        if len(self.parts) != self.ell - 1:
            raise ValueError("one part per exponent 1..ell-1")
        ctx = self.ctx
        for f in self.parts:
            if f.ctx is not ctx or not f.is_monic():
                raise ValueError(f"parts must be monic over F_{self.p}^{self.n_q}")
        if not norm_down(self.support, self.n_q).is_squarefree():
            raise ValueError("norm of the support is not square-free")
        if self.n_q > 1:
            for k, e in enumerate(self.block_degrees()):
                if e % self.ell:
                    raise ValueError(f"degree of F_v{k} is not divisible by ell")

    @property
    def n_q(self) -> int:
        return multiplicative_order(self.p, self.ell)

    @property
    def q(self) -> int:
        return self.p

    @property
    def ctx(self) -> FieldCtx:
        return field(self.p, self.n_q)

    @property
    def support(self) -> FieldPoly:
        out = FieldPoly(self.ctx, (1,))
        for f in self.parts:
            out = out * f
        return out

    @property
    def first_block(self) -> FieldPoly:
        """F1 = f_1 f_2^2 ... f_{ell-1}^{ell-1}."""
        out = FieldPoly(self.ctx, (1,))
        for h, f in enumerate(self.parts, start=1):
            out = out * f**h
        return out

    def blocks(self) -> list[FieldPoly]:
        """F1, phi(F1), ..., phi^{n-1}(F1)."""
        F1 = self.first_block
        return [F1.frobenius(j) for j in range(self.n_q)]

    def v_vector(self, k: int) -> tuple[int, ...]:
        return tuple(pow(self.p, (k - j) % self.n_q, self.ell) for j in range(self.n_q))

    def block_degrees(self) -> list[int]:
        d = self.first_block.degree
        return [d * sum(self.v_vector(k)) for k in range(self.n_q)]

    @property
    def conductor(self) -> FieldPoly:
        return norm_down(self.support, self.n_q)

    @property
    def delta(self) -> int:
        if self.n_q > 1:
            return 0
        return int(sum(h * f.degree for h, f in enumerate(self.parts, start=1)) % self.ell != 0)

    @property
    def genus(self) -> int:
        return (self.ell - 1) * (self.conductor.degree - 2 + self.delta) // 2

    # -- characters --------------------------------------------------------------
    @classmethod
    def from_character(cls, chi: OrderLCharacter) -> "CoverSpec":
        n = omega_choice(chi.ell, chi.p).n_q
        ctx = field(chi.p, n)
        parts = [FieldPoly(ctx, (1,)) for _ in range(chi.ell - 1)]
        for P, e in zip(chi.primes, chi.exponents):
            parts[e - 1] = parts[e - 1] * canonical_factor(P, n)
        return cls(chi.ell, chi.p, tuple(parts))

    def to_character(self) -> OrderLCharacter:
        """The normalized character whose cyclic extension this cover is."""
        n = self.n_q
        pairs = []
        for h, f in enumerate(self.parts, start=1):
            for g, _ in factor(f) if f.degree > 0 else []:
                P = norm_down(g, n)
                F1 = canonical_factor(P, n)
                shift = next(i for i in range(n) if F1.frobenius(i) == g)
                pairs.append((P, h * pow(self.p, shift, self.ell)))
        return OrderLCharacter.from_pairs(self.ell, pairs).normalized()

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "p": self.p,
            "n_q": self.n_q,
            "parts": [list(f.coeffs) for f in self.parts],
            "conductor": list(self.conductor.coeffs),
            "genus": self.genus,
        }


# ---------------------------------------------------------------------------
# plane models


@dataclass(frozen=True)
class PlaneModel:
    """sum_m coeffs[m](t) y^m = 0 over F_p; coeffs[ell] is 1."""

    p: int
    coeffs: tuple[FieldPoly, ...]

    @property
    def y_degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self) -> str:
        terms = []
        for m in reversed(range(len(self.coeffs))):
            c = self.coeffs[m]
            if c.is_zero():
                continue
            ys = "" if m == 0 else ("y" if m == 1 else f"y^{m}")
            if c == FieldPoly(c.ctx, (1,)) and m:
                terms.append(ys)
            else:
                terms.append(f"({c})" + (f"*{ys}" if ys else ""))
        return " + ".join(terms) + " = 0"

    def to_json(self) -> str:
        return json.dumps({"p": self.p, "y_coeffs": [list(c.coeffs) for c in self.coeffs]})

    def pull_back(self, u: FieldPoly, v: FieldPoly, weight: int) -> "PlaneModel":
        """Substitute t = u/v, y = y v^(-weight) and clear denominators by
        v^(weight * ell); each y^m coefficient must have degree <= weight (ell - m)."""
        ell = self.y_degree
        out = []
        for m, c in enumerate(self.coeffs):
            D = weight * (ell - m)
            if c.is_zero():
                out.append(c)
                continue
            if c.degree > D:
                raise ValueError("coefficient degree exceeds its weight")
            out.append(c.homogenized(u, v) * v ** (D - c.degree))
        return PlaneModel(self.p, tuple(out))

    def evaluate_t(self, K: FieldCtx, ts: np.ndarray) -> list[np.ndarray]:
        """Each y-coefficient evaluated at the points ts of K."""
        out = []
        for c in self.coeffs:
            acc = np.zeros(len(ts), dtype=np.int64)
            for a in reversed(c.coeffs):
                acc = K.vadd(K.vmul(acc, ts), np.full(len(ts), a, dtype=np.int64))
            out.append(acc)
        return out

    def fiber_counts(self, k: int, chunk: int = 1 << 22) -> np.ndarray:
        """Number of y in F_{p^k} on the model above each t in F_{p^k}."""
        K = field(self.p, k)
        ts = np.arange(K.size, dtype=np.int64)
        ys = np.arange(K.size, dtype=np.int64)
        counts = np.zeros(K.size, dtype=np.int64)
        rows = max(1, chunk // K.size)
        for lo in range(0, K.size, rows):
            sub = ts[lo : lo + rows]
            cs = self.evaluate_t(K, sub)
            acc = np.zeros((len(sub), K.size), dtype=np.int64)
            for c in reversed(cs):
                acc = K.vadd(K.vmul(acc, ys[None, :]), c[:, None])
            counts[lo : lo + rows] = (acc == 0).sum(axis=1)
        return counts


def _to_prime_field(f: FieldPoly) -> FieldPoly:
    if not f.in_prime_field():
        raise ArithmeticError("plane model coefficient is not defined over the base field")
    return FieldPoly(field(f.ctx.p), f.coeffs)


def cover_equation(spec: CoverSpec, method: str = "auto") -> PlaneModel:
    """Plane model over F_p.  ``method`` is "kummer", "quadratic", "general" or "auto"."""
    ell, n = spec.ell, spec.n_q
    if method == "auto":
        method = "kummer" if n == 1 else ("quadratic" if n == 2 else "general")
    ctx = spec.ctx
    coeffs = [FieldPoly(ctx) for _ in range(ell)] + [FieldPoly(ctx, (1,))]
    if method == "kummer":
        if n != 1:
            raise ValueError("Kummer form needs p = 1 mod ell")
        coeffs[0] = -spec.first_block
    elif method == "quadratic":
        if n != 2:
            raise ValueError("this closed form needs n_q = 2")
        F1, F2 = spec.blocks()
        prod = F1 * F2
        a = am_coeffs(ell, 2)
        for r in range(1, (ell - 1) // 2 + 1):
            coeffs[2 * r - 1] = (prod ** ((ell + 1) // 2 - r)).scale(a[2 * r - 1] % spec.p)
        coeffs[0] = -(prod * (F1 ** (ell - 2) + F2 ** (ell - 2)))
    elif method == "general":
        blocks = spec.blocks()
        for s, b in block_expansion(ell, spec.p % ell).items():
            m = ell - sum(s)
            term = FieldPoly(ctx, (1,))
            for j in range(n):
                e = sum(sk * pow(spec.p, (k - j) % n, ell) for k, sk in enumerate(s))
                assert e % ell == 0
                term = term * blocks[j] ** (e // ell)
            coeffs[m] = coeffs[m] + term.scale(b % spec.p)
    else:
        raise ValueError(f"unknown method {method!r}")
    return PlaneModel(spec.p, tuple(_to_prime_field(c) for c in coeffs))


def _min_poly(K: FieldCtx, x: int) -> FieldPoly:
    """Minimal polynomial over F_p of x in K."""
    conj = [x]
    while True:
        y = K.frob(conj[-1], 1)
        if y == x:
            break
        conj.append(y)
    out = FieldPoly(K, (1,))
    for c in conj:
        out = out * FieldPoly(K, (K.neg(c), 1))
    return FieldPoly(field(K.p), out.coeffs)


def _is_singular_fiber(K: FieldCtx, cs: list[int]) -> bool:
    g = FieldPoly(K, cs)
    return g.gcd(g.derivative()).degree > 0


def genus_and_count(spec: CoverSpec, k: int = 1, model: PlaneModel | None = None) -> tuple[int, int]:
    """Genus and number of F_{p^k}-points of the smooth projective cover.

    Above each root of the conductor there is one point (total
    ramification).  Above an unramified t0 there are ell points or none,
    read off from the plane model when it is smooth there and from the
    Frobenius class of the place of t0 otherwise.  Infinity contributes 1
    when ramified and ell when not.
    """
    if model is None:
        model = cover_equation(spec)
    ell = spec.ell
    K = field(spec.p, k)
    ts = np.arange(K.size, dtype=np.int64)
    fibers = model.fiber_counts(k)
    coeff_vals = model.evaluate_t(K, ts)
    cvals = np.zeros(K.size, dtype=np.int64)
    for a in reversed(spec.conductor.coeffs):
        cvals = K.vadd(K.vmul(cvals, ts), np.full(K.size, a, dtype=np.int64))
    ramified = cvals == 0
    chi = None
    total = int(ramified.sum())
    for t0 in np.flatnonzero(~ramified):
        cs = [int(c[t0]) for c in coeff_vals]
        if _is_singular_fiber(K, cs):
            if chi is None:
                chi = spec.to_character()
            P = _min_poly(K, int(t0))
            trivial = chi.exponent_at(P) * (k // P.degree) % ell == 0
            total += ell if trivial else 0
        else:
            n = int(fibers[t0])
            if n not in (0, ell):
                raise ArithmeticError("smooth fiber of unexpected size")
            total += n
    total += 1 if spec.delta else ell
    return spec.genus, total


def counts_from_lpoly(poly: list[int], q: int, k: int) -> int:
    """q^k + 1 - sum of k-th powers of the reciprocal roots of poly."""
    c = list(poly) + [0] * (k + 1)
    s = [0] * (k + 1)
    for i in range(1, k + 1):
        s[i] = -i * c[i] - sum(c[j] * s[i - j] for j in range(1, i))
    return q**k + 1 - s[k]


def zeta_count(chi: OrderLCharacter, k: int = 1) -> int:
    """#C(F_{q^k}) predicted by prod_i L(chi^i, u)."""
    return counts_from_lpoly(conjugate_product(dirichlet_lpoly(chi)), chi.q, k)


# ---------------------------------------------------------------------------
# changes of variables


@dataclass(frozen=True)
class Substitution:
    u: FieldPoly
    v: FieldPoly
    y_power: int  # y -> y * v^y_power

    def describe(self) -> str:
        if self.v.degree == 0:
            return f"t -> {self.u}"
        return f"t -> ({self.u})/({self.v}), y -> y*({self.v})^{self.y_power}"

    def to_json(self) -> dict:
        return {"u": list(self.u.coeffs), "v": list(self.v.coeffs), "y_power": self.y_power}


def substitute(spec: CoverSpec, u: FieldPoly, v: FieldPoly) -> tuple[CoverSpec, Substitution] | None:
    """Pull the cover back along t -> u/v; None when the new parts fail the
    square-free screen or are not monic."""
    ctx = spec.ctx
    if u.degree < 1 or v.is_zero():
        raise ValueError("u must be non-constant and v nonzero")
    if v.degree == 0 and v != FieldPoly(v.ctx, (1,)):
        raise ValueError("constant v must be 1")
    if u.gcd(v).degree > 0:
        return None
    U, V = u.over(ctx), v.over(ctx)
    new = [f.homogenized(U, V) for f in spec.parts]
    if spec.n_q == 1:
        deg_F = spec.first_block.degree
        A = -(-deg_F // spec.ell)
        delta = A * spec.ell - deg_F
        if delta:
            new[delta - 1] = new[delta - 1] * V
        y_power = -A
    else:
        y_power = -spec.block_degrees()[0] // spec.ell
    if not all(f.is_monic() for f in new):
        return None
    support = FieldPoly(ctx, (1,))
    for f in new:
        support = support * f
    if not norm_down(support, spec.n_q).is_squarefree():
        return None
    return CoverSpec(spec.ell, spec.p, tuple(new)), Substitution(u, v, y_power)


def substitution_candidates(p: int, max_deg: int) -> Iterator[tuple[FieldPoly, FieldPoly]]:
    """Compositions h(t) of degree 2, 3, ... first, then u/v with
    deg v < deg u by increasing deg u; code order within a degree."""
    F = field(p)
    one = FieldPoly(F, (1,))
    for k in range(2, max_deg + 1):
        for code in range(p**k):
            yield FieldPoly.monic_from_code(F, k, code), one
    for k in range(1, max_deg + 1):
        for code in range(p**k):
            u = FieldPoly.monic_from_code(F, k, code)
            for dv in range(1, k):
                for vcode in range(p**dv):
                    yield u, FieldPoly.monic_from_code(F, dv, vcode)


@dataclass
class FamilyMember:
    character: OrderLCharacter
    spec: CoverSpec
    substitution: Substitution | None
    rank: int

    def to_json(self) -> dict:
        chi = self.character
        return {
            "character": chi.serialize(),
            "conductor_degree": chi.conductor_degree,
            "substitution": None if self.substitution is None else self.substitution.to_json(),
            "rank": self.rank,
        }


@dataclass
class FamilyReport:
    members: list[FamilyMember] = dc_field(default_factory=list)
    tried: int = 0
    rejected: int = 0
    shortfall: int = 0

    @property
    def acceptance_rate(self) -> float:
        return (self.tried - self.rejected) / self.tried if self.tried else 0.0


def _twist_rank(E0: ConstantCurve, chi: OrderLCharacter) -> int:
    return max(analytic_rank(constant_twist_lpoly(E0, chi.power(i))) for i in range(1, chi.ell))


def generate_vanishing_family(seed: OrderLCharacter, E0: ConstantCurve, target_count: int,
                              max_degree: int) -> FamilyReport:
    """Characters obtained from seed by changes of variables, each with the
    vanishing re-checked from its own L-polynomial."""
    if not vanishing_check(E0, seed):
        raise ValueError("the seed twist does not vanish")
    spec0 = CoverSpec.from_character(seed)
    report = FamilyReport()
    report.members.append(FamilyMember(seed.normalized(), spec0, None, _twist_rank(E0, seed)))
    seen = {seed.normalized().serialize()}
    d0 = seed.conductor_degree
    for u, v in substitution_candidates(seed.p, max(1, max_degree // d0)):
        if len(report.members) >= target_count:
            break
        if d0 * max(u.degree, v.degree) > max_degree:
            continue
        report.tried += 1
        out = substitute(spec0, u, v)
        if out is None:
            report.rejected += 1
            continue
        spec, sub = out
        if spec.conductor.degree > max_degree:
            continue
        chi = spec.to_character()
        key = chi.serialize()
        if key in seen:
            continue
        seen.add(key)
        if not vanishing_check(E0, chi):
            continue
        rank = _twist_rank(E0, chi)
        if rank > 0:
            report.members.append(FamilyMember(chi, spec, sub, rank))
    report.shortfall = max(0, target_count - len(report.members))
    return report
