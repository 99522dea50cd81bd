"""Estimate how often the shifted tuple approximates two random targets on a small disc."""

import math

from zetalab import special_functions as sf
from zetalab import universality_search as us
from zetalab.geometry import CompactSetSpec

K = CompactSetSpec.disc(0.75, 0.1)
hurwitz = sf.PeriodicHurwitzSpec(sf.PeriodicSequence((1,)), math.sqrt(2) - 1)
targets = (us.TargetSpec("sampled", K, seed=1, n=50), us.TargetSpec("sampled", K, seed=2, n=50))
exp = us.ShiftExperiment(sf.riemann(), (hurwitz,), targets, 0.8, us.ShiftLattice(1.1, (1.3,), 10_000))
est = us.scan(exp)
print(f"hits {est.hits} of {est.total}, density {est.density:.4f}")
for eps, density in us.density_vs_epsilon(exp, [0.4, 0.8, 1.2, 1.6], est):
    print(f"epsilon {eps}: density {density:.4f}")
