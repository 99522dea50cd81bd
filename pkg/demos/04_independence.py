"""Search for small integer relations among the shift frequencies."""

import math

from zetalab import random_model as rm
from zetalab import torus_analysis as ta

shift = rm.ErgodicShift(1.1, (math.sqrt(2) - 1,), (1.3,))
freqs = ta.frequency_set(shift, prime_bound=7, m_bound=2)
print("frequencies:", ", ".join(freqs.labels))
# With alpha = sqrt(2) - 1 the scan finds log(alpha) + log(2 + alpha) = 0,
# since (sqrt(2) - 1)(sqrt(2) + 1) = 1, so these frequencies are not independent.
for size in (2, 3):
    found = ta.integer_relation_scan(freqs, max_coeff=20, subset_size=size)
    print(f"subsets of size {size}: {len(found)} relation(s)")
    for r in found:
        print("   ", dict(zip(r.labels, r.coefficients)))

planted = ta.FrequencySet((("log2", math.log(2)), ("log8", math.log(8))))
for r in ta.integer_relation_scan(planted, max_coeff=20, subset_size=2):
    print("planted relation:", dict(zip(r.labels, r.coefficients)))
