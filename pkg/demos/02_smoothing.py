"""Smoothed Dirichlet polynomials approach the function as n grows."""

from zetalab import smoothing as sm
from zetalab import special_functions as sf

R = sf.riemann()
exact = sf.steuding_eval(R, 2)
for n in (10, 100, 1000, 10_000):
    approx = sm.phi_n(R, 2, sm.SmoothingParams(n))
    print(f"n = {n:>6}: |phi_n(2) - zeta(2)| = {abs(approx - exact):.3e}")
