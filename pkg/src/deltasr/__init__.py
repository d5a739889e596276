"""Exact delta-sufficient reasons on decision trees and the gadgets of the
hardness-of-approximation reduction for minimum delta-sufficient reasons."""

from .dyadic import Dyadic
from .errors import (BudgetExceeded, DeltaSRError, ParameterError, ParseError,
                     PreconditionError, ShapeError, StructureError)
from .explain import (ExplanationResult, agreement_probability, is_delta_sufficient,
                      is_sufficient_reason, min_sr_exhaustive, min_sr_greedy,
                      parse_feature_set, format_feature_set, parse_rational, restriction_of)
from .instances import (HittingSetInstance, complete_design, count_satisfied, emit_instance,
                        generate_random, max_sat_fraction_bruteforce, parse_instance)
from .reductions import (AmplifierParams, LayoutL, acceptance_probability, amplify,
                         assignment_to_partial, build_conjunction_tree, build_hardness, build_l,
                         build_lc, build_t1, choose_params, fat_word_clause_map, is_fat,
                         partial_to_assignment, sr_from_partial)
from .tree import (BOT, DecisionTree, Inner, Leaf, TreeBuilder, consistent, constant_tree,
                   deserialize, eval_complete, eval_partial, eval_partial_bruteforce,
                   parse_partial, format_partial, serialize, tree_from_nested, validate)

__version__ = "0.1.0"
