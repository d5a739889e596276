"""
Exact values of a decision tree on partial inputs
=================================================

A partial input leaves some coordinates undefined (written ``*``). The value
of the tree is the fraction of completions it accepts, always a dyadic
rational.
"""

from deltasr import BOT, eval_partial, eval_partial_bruteforce, parse_partial
from deltasr.tree import serialize, tree_from_nested

# (x1 and x2) or x3, written as nested (var, zero-child, one-child) tuples
tree = tree_from_nested(3, (0, (2, 0, 1), (1, (2, 0, 1), 1)))

for text in ("***", "1**", "11*", "0*1"):
    v = eval_partial(tree, parse_partial(text))
    print(f"T({text}) = {v}  ({v.pow2_form()})")

# %%
# The same numbers by counting completions one by one
print(eval_partial_bruteforce(tree, (1, BOT, BOT)))

# %%
# Trees travel as a small text format with 1-based variables
print(serialize(tree).decode())
