"""Compare the lattice value distribution of zeta(2 + i k h) with the random model."""

import math

from zetalab import special_functions as sf
from zetalab import stats
from zetalab.universality_search import ShiftLattice

R = sf.riemann()
model = stats.collect_model_samples(R, [], [2.0], 20_000, seed=1)
for h in (1.1, 2 * math.pi / math.log(2)):
    lattice = stats.collect_lattice_samples(R, [], ShiftLattice(h, (), 20_000), [2.0])
    slot = stats.compare(lattice, model).slots[0]
    print(f"h = {h:.4f}: KS(re) = {slot.ks_re:.3f} (critical {slot.ks_critical:.3f}), mean |.|^2 = {slot.abs2_mean[0]:.4f}")
