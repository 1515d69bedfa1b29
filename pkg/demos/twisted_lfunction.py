"""One twisted L-polynomial in detail: coefficients, signs, rank."""

from twistfield.characters import enumerate_characters, gauss_sign
from twistfield.elliptic import second_curve
from twistfield.lfunction import (
    analytic_rank,
    degree_truncation_check,
    theorem_sign_gauss,
    twisted_lpoly,
    verify_fe,
)

E = second_curve(7)
print(E.name, "conductor", E.conductor)

chi = next(c for c in enumerate_characters(3, 7, 2, avoid=E.bad_places()) if c.delta == 0)
print(chi)

L = twisted_lpoly(E, chi)
print("degree", L.degree)
for n, c in enumerate(L.complex_coeffs()):
    print(f"  c_{n} = {c.real:+.4f} {c.imag:+.4f}i")

print("sign (exact)     ", L.sign)
print("sign (Gauss sums)", theorem_sign_gauss(E, chi))
print("omega_chi        ", gauss_sign(chi))
print("functional equation holds:", verify_fe(L))
print("c_n vanish past the degree:", degree_truncation_check(E, chi, L))
print("analytic rank:", analytic_rank(L))
