"""
Clause gadget, selector tree and amplifier
==========================================

A satisfying assignment of a 1-in-3 hitting-set instance maps to a partial
input on which the selector tree evaluates to exactly 7/8. Amplifying with
``K`` copies and a threshold pushes that toward 1.
"""

from fractions import Fraction

from deltasr import eval_partial
from deltasr.instances import generate_random
from deltasr.reductions import (acceptance_probability, amplify, assignment_to_partial,
                                build_l, build_lc, choose_params)
from deltasr.tree import BOT

lc = build_lc([0, 1, 2], 3)
print("good input:", eval_partial(lc, (1, BOT, 1, BOT)))
print("bad input: ", eval_partial(lc, (1, BOT, BOT, BOT)))

# %%
alpha = (1, 0, 0, 1, 0, 0)
inst = generate_random(6, 4, 3, seed=0, planted=alpha)
L, layout = build_l(inst)
p = assignment_to_partial(alpha, layout)
print("layout", layout.to_record(), "depth", L.depth)
print("L(p) =", eval_partial(L, p))

# %%
params = choose_params(inst.num_clauses, Fraction(1, 4), Fraction(1, 2))
T = amplify(L, params.copies, params.threshold)
print(params.to_record(), "nodes", len(T.reachable), "depth", T.depth)
print("T(Y) =", float(eval_partial(T, p * params.copies).to_fraction()))
print("tail =", float(acceptance_probability([Fraction(7, 8)] * params.copies,
                                              params.threshold).to_fraction()))
