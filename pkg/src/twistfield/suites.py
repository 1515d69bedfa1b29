"""Cross-module consistency suites run by ``twistfield verify``."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field

from .characters import enumerate_characters
from .constant import constant_twist_direct, constant_twist_lpoly
from .covers import CoverSpec, cover_equation, genus_and_count, substitute, substitution_candidates, zeta_count
from .elliptic import ConstantCurve, legendre, second_curve
from .lfunction import degree_truncation_check, dirichlet_lpoly, perturbed, twisted_lpoly, verify_fe


@dataclass
class SuiteReport:
    name: str
    checked: int = 0
    failures: list[str] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, passed: bool, what: str) -> None:
        self.checked += 1
        if not passed:
            self.failures.append(what)

    def summary(self) -> str:
        state = "pass" if self.ok else "FAIL"
        return f"{self.name}: {state} ({self.checked} checks, {len(self.failures)} failures)"


def fe_suite(max_deg: int = 4, fault: bool = False) -> SuiteReport:
    """Functional equations over F_5 for ell = 3: Dirichlet polynomials and
    twists of the two reference curves, with the truncation check when N <= 6.

    ``fault`` perturbs one coefficient of the first polynomial (a negative control).
    """
    rep = SuiteReport("fe")
    ell, p = 3, 5
    for d in range(1, max_deg + 1):
        for chi in enumerate_characters(ell, p, d):
            L = dirichlet_lpoly(chi)
            if fault and rep.checked == 0:
                L = perturbed(L, 1 if L.degree >= 1 else 0)
            rep.record(verify_fe(L), f"dirichlet {chi.serialize()}")
    for E in (legendre(p), second_curve(p)):
        table = E.a_table(8)
        for d in range(1, max_deg + 1):
            for chi in enumerate_characters(ell, p, d, avoid=E.bad_places()):
                L = twisted_lpoly(E, chi, table, allow_bad_infinity=True)
                rep.record(verify_fe(L), f"{E.name} {chi.serialize()}")
                if L.degree <= 6:
                    rep.record(degree_truncation_check(E, chi, L, table), f"truncation {E.name} {chi.serialize()}")
    return rep


def _random_constant_curve(rng: random.Random, p: int) -> ConstantCurve:
    while True:
        A, B = rng.randrange(p), rng.randrange(p)
        if (4 * A**3 + 27 * B**2) % p:
            return ConstantCurve(p, A, B)


def thm31_suite(count: int = 100, seed: int = 0, ell: int = 3) -> SuiteReport:
    """Product formula against the generic Euler product for random constant twists."""
    rep = SuiteReport("thm31")
    rng = random.Random(seed)
    pools = {}
    for p in (5, 7):
        for d in range(1, 5):
            chars = list(enumerate_characters(ell, p, d))
            if chars:
                pools[(p, d)] = chars
    keys = sorted(pools)
    for i in range(count):
        p, d = keys[rng.randrange(len(keys))]
        chi = pools[(p, d)][rng.randrange(len(pools[(p, d)]))]
        E0 = _random_constant_curve(rng, p)
        L = constant_twist_lpoly(E0, chi)
        direct = constant_twist_direct(E0, chi)
        same = list(direct) == list(L.coeffs) and verify_fe(L)
        rep.record(same, f"seed={seed} case={i} E0=({E0.A},{E0.B}) p={p} chi={chi.serialize()}")
    return rep


COVER_CASES = ((3, 5, 2), (3, 5, 4), (3, 7, 1), (3, 7, 2), (3, 7, 3), (3, 11, 2), (5, 11, 1), (5, 11, 2), (5, 7, 4))


def covers_suite(per_case: int = 4, seed: int = 0) -> SuiteReport:
    """Plane models for conductor degree <= 4: round trip to the character,
    point counts against the zeta function, and pull-back along substitutions."""
    rep = SuiteReport("covers")
    rng = random.Random(seed)
    for ell, p, d in COVER_CASES:
        chars = list(enumerate_characters(ell, p, d))
        if not chars:
            continue
        picked = chars[:1] + rng.sample(chars, min(per_case - 1, len(chars)))
        for chi in picked:
            tag = chi.serialize()
            spec = CoverSpec.from_character(chi)
            rep.record(spec.to_character() == chi.normalized(), f"round trip {tag}")
            model = cover_equation(spec)
            if spec.n_q > 1:
                rep.record(cover_equation(spec, "general") == model, f"general model {tag}")
            for k in (1, 2):
                if p ** k > 20000:
                    continue
                _, n = genus_and_count(spec, k, model)
                rep.record(n == zeta_count(chi, k), f"point count k={k} {tag}")
            for u, v in itertools.islice(substitution_candidates(p, 2), 0, 200, 41):
                out = substitute(spec, u, v)
                if out is None:
                    continue
                new, sub = out
                rep.record(model.pull_back(u, v, -sub.y_power) == cover_equation(new),
                           f"pull-back {sub.describe()} {tag}")
    return rep


SUITES = {"fe": fe_suite, "thm31": thm31_suite, "covers": covers_suite}


def run_suites(names: list[str], fault: bool = False) -> list[SuiteReport]:
    out = []
    for name in names:
        out.append(fe_suite(fault=fault) if name == "fe" else SUITES[name]())
    return out
