"""Evaluate the shipped zeta-functions on and off the critical strip."""

import math

from zetalab import special_functions as sf

R = sf.riemann()
for s in (2, 0.5 + 14.134725j, -1):
    print(f"zeta({s}) = {complex(sf.steuding_eval(R, s)):.15g}")

# Hurwitz zeta with its certified Euler-Maclaurin bound.
value, bound = sf.hurwitz_zeta_with_error(0.75 + 3j, math.sqrt(2) - 1)
print(f"zeta(0.75+3i, sqrt2-1) = {value:.15g}  (bound {bound:.1e})")

# A periodic Hurwitz zeta-function with a period-3 coefficient sequence.
spec = sf.PeriodicHurwitzSpec(sf.PeriodicSequence((1, -1j, 0.5)), 0.3)
print(f"periodic Hurwitz at 0.8+2i = {sf.periodic_hurwitz_zeta(spec, 0.8 + 2j):.15g}")

L4 = sf.dirichlet_l(4, 1)
print(f"L(1, chi_4) = {complex(sf.steuding_eval(L4, 1)).real:.15f}  (pi/4 = {math.pi / 4:.15f})")
