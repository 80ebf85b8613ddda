"""
Poisson-process crossover masks
===============================

How many crossover events a mask gets, where they land, and how much of
each parent ends up in the child.
"""
import numpy as np

from qdforge.variation import generate_mask, mask_from_gaps, num_events

rng = np.random.default_rng(0)

# The event count is floor(lambda * N), never fewer than one.
for n in (5, 10, 20, 100, 1000):
    print(f"N={n:5d}  lambda=0.1  ->  K={num_events(n, 0.1)}")

# A single event always sits on the last gene: only that gene swaps parent.
print(generate_mask(10, 0.1, rng))

# With explicit gaps we can see the rescaling: gaps (0.5, 1.5) put events
# at genes 2 and 8 of a 9-gene genotype.
print(mask_from_gaps(9, [0.5, 1.5]))

# A few random masks at the default rate on a 60-gene genotype.
for _ in range(5):
    print("".join("a" if bit else "b" for bit in generate_mask(60, 0.1, rng)))

# With an even event count the share taken from parent b hovers near 1/2,
# whatever the genotype length.
for k in (2, 4):
    for n in (10, 100, 1000):
        share = np.mean([1 - generate_mask(n, k / n, rng).mean() for _ in range(2000)])
        print(f"K={k} N={n:5d}  share from b = {share:.3f}")
