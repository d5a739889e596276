"""
Exact verification reports
==========================

Each check enumerates the relevant inputs and compares rationals exactly.
The soundness check needs an instance where at most half the clauses can be
satisfied; the complete 3-uniform design on 14 variables is the smallest.
"""

from fractions import Fraction

from deltasr.harness import (run_checks, verify_fat_probability, verify_lemma_cases,
                             verify_soundness_bruteforce)
from deltasr.instances import complete_design, max_sat_fraction_bruteforce

bundle = run_checks([lambda: verify_lemma_cases(3), lambda: verify_fat_probability(4)])
print(bundle.to_table())

# %%
design = complete_design(14, 3)
print("max-sat fraction", max_sat_fraction_bruteforce(design).fraction)
rep = verify_soundness_bruteforce(design, budget=1 << 26)
print(rep.verdict, rep.observed)
print("measured gap", rep.details["measured_gap"], "vs floor", Fraction(1, 128))
