"""The ergodic shift on the torus and the decay of its Birkhoff character averages."""

import math

from zetalab import random_model as rm
from zetalab import special_functions as sf
from zetalab import torus_analysis as ta

shift = rm.ErgodicShift(1.1, (math.sqrt(2) - 1,), (1.3,))
R = sf.riemann()

# The random model at the k-th orbit point is the shifted series truncated at
# 10^4 terms, so it matches zeta up to the truncation tail (about 1e-5).
k, s = 7, 2.0 + 1.0j
orbit = rm.ergodic_orbit(shift, k, prime_bound=10_000, m_bound=1)
print("random model at orbit point:", rm.random_phi(R, s, orbit, cutoff=10_000))
print("shifted zeta               :", sf.steuding_eval(R, s + 1j * k * shift.h1))

idx = ta.CharacterIndex({2: 1, 3: -1}, ({0: 2},))
theta = ta.character_phase(idx, shift)
for N in (10, 1000, 100_000):
    g = ta.fourier_gN_closed(idx, shift, N)
    print(f"N = {N:>6}: |g_N| = {abs(g):.3e} <= {ta.decay_envelope(theta, N):.3e}")
