"""
Probabilistic sufficient reasons
================================

Fixing the input on a set ``S`` and drawing the rest at random reproduces
the prediction with some probability. Smallest sets reaching a threshold
are found by exhaustive search; a greedy heuristic is cheaper.
"""

from fractions import Fraction

import numpy as np

from deltasr import agreement_probability, min_sr_exhaustive, min_sr_greedy
from deltasr.tree import random_tree

rng = np.random.default_rng(3)
tree = random_tree(rng, 8, 6, allow_repeats=False)
x = tuple(int(b) for b in rng.integers(0, 2, 8))
print("input", x, "depth", tree.depth)

for delta in ("1/2", "3/4", "7/8", "1"):
    exact = min_sr_exhaustive(tree, x, delta)
    greedy = min_sr_greedy(tree, x, delta)
    print(f"delta={delta:>4}: exhaustive {exact.to_record()['set']!r:12} "
          f"greedy {greedy.to_record()['set']!r}")

# %%
# The threshold property is not monotone under adding features: for x1 or x2
# at (0, 1) the empty set reaches 3/4, but fixing x1 = 0 drops it to 1/2.
from deltasr.tree import tree_from_nested

or2 = tree_from_nested(2, (0, (1, 0, 1), 1))
before = agreement_probability(or2, (0, 1), set())
after = agreement_probability(or2, (0, 1), {0})
print(before, after, before >= Fraction(3, 4) > after)
