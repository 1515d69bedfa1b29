"""Vanishing twists of the supersingular curve y^2 = x^3 + 1 over F_5.

A cubic character with L(chi, u) = 1 + 5u^2 makes every twist of a
trace-0 curve vanish at u = 1/5; changes of variable t -> h(t) produce
more such characters.
"""

from twistfield.constant import constant_twist_lpoly, search_deg2_matches
from twistfield.covers import CoverSpec, cover_equation, generate_vanishing_family, genus_and_count
from twistfield.elliptic import constant_curve_with_trace
from twistfield.lfunction import analytic_rank

res = search_deg2_matches(3, 5)
print("traces a with L(chi, u) = 1 + a u + 5 u^2:", sorted(res.traces))

seed = res.witnesses[0]
spec = CoverSpec.from_character(seed)
print("seed", seed)
print("cover:", cover_equation(spec))
print("genus and points over F_5, F_25:", genus_and_count(spec, 1), genus_and_count(spec, 2))

E0 = constant_curve_with_trace(5, 0)
L = constant_twist_lpoly(E0, seed)
print("L(E0 x chi, u) =", L.integer_coeffs(), "rank", analytic_rank(L))

family = generate_vanishing_family(seed, E0, 8, 12)
for m in family.members:
    how = "seed" if m.substitution is None else m.substitution.describe()
    print(f"  deg {m.character.conductor_degree:2d}  rank {m.rank}  {how}")
print(f"acceptance rate {family.acceptance_rate:.2f}")
