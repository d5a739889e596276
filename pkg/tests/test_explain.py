import itertools
from fractions import Fraction

import numpy as np
import pytest

from deltasr.errors import BudgetExceeded, ParameterError, ShapeError
from deltasr.explain import (agreement_probability, as_threshold, format_feature_set,
                             is_delta_sufficient, is_sufficient_reason, min_sr_exhaustive,
                             min_sr_greedy, parse_feature_set, parse_rational)
from deltasr.reductions import build_conjunction_tree
from deltasr.tree import BOT, constant_tree, random_tree, tree_from_nested

from conftest import definition_agreement

AND2 = tree_from_nested(2, (0, 0, (1, 0, 1)))
OR2 = tree_from_nested(2, (0, (1, 0, 1), 1))


def test_full_set_always_sufficient():
    assert is_delta_sufficient(AND2, (1, 0), {0, 1}, 1)


def test_empty_set_of_constant_tree():
    assert is_delta_sufficient(constant_tree(3, 0), (1, 0, 1), set(), 1)


def test_half_threshold_on_conjunction():
    assert agreement_probability(AND2, (1, 1), {0}) == Fraction(1, 2)
    r = min_sr_exhaustive(AND2, (1, 1), "1/2")
    assert r.features == frozenset({0}) and r.budget_status == "complete"


def test_zero_threshold_gives_empty_set():
    r = min_sr_exhaustive(AND2, (1, 1), 0)
    assert r.features == frozenset() and r.size == 0


def test_boundary_probability_is_inclusive():
    m = 6
    conj = build_conjunction_tree(range(m))
    x = (1,) * m
    assert agreement_probability(conj, x, set()) == Fraction(1, 2 ** m)
    assert is_delta_sufficient(conj, x, set(), Fraction(1, 2 ** m))
    assert not is_delta_sufficient(conj, x, set(), Fraction(1, 2 ** m) + Fraction(1, 2 ** 40))


def test_agreement_matches_definition(rng):
    for _ in range(150):
        n = int(rng.integers(1, 8))
        t = random_tree(rng, n, 5)
        x = tuple(int(b) for b in rng.integers(0, 2, n))
        s = frozenset(int(i) for i in np.flatnonzero(rng.integers(0, 2, n)))
        assert agreement_probability(t, x, s) == definition_agreement(t, x, s)


def test_label_symmetry(rng):
    for _ in range(60):
        n = int(rng.integers(1, 7))
        t = random_tree(rng, n, 5)
        x = tuple(int(b) for b in rng.integers(0, 2, n))
        s = frozenset(int(i) for i in np.flatnonzero(rng.integers(0, 2, n)))
        assert agreement_probability(t, x, s) == agreement_probability(t.complemented(), x, s)


def test_monotone_at_threshold_one(rng):
    for _ in range(60):
        n = int(rng.integers(1, 7))
        t = random_tree(rng, n, 5)
        x = tuple(int(b) for b in rng.integers(0, 2, n))
        for r in range(n + 1):
            for s in itertools.combinations(range(n), r):
                if is_delta_sufficient(t, x, s, 1):
                    for j in range(n):
                        assert is_delta_sufficient(t, x, set(s) | {j}, 1)


def test_non_monotonicity_witness():
    # Found by exhaustive search over two-variable trees; frozen here.
    x, delta = (1, 0), Fraction(3, 4)
    assert is_delta_sufficient(OR2, x, set(), delta)
    assert not is_delta_sufficient(OR2, x, {1}, delta)


def test_sufficient_reason_matches_threshold_one(rng):
    for _ in range(100):
        n = int(rng.integers(1, 7))
        t = random_tree(rng, n, 5)
        x = tuple(int(b) for b in rng.integers(0, 2, n))
        s = frozenset(int(i) for i in np.flatnonzero(rng.integers(0, 2, n)))
        assert is_sufficient_reason(t, x, s) == is_delta_sufficient(t, x, s, 1)


def test_exhaustive_is_minimum_and_lexicographic(rng):
    for _ in range(40):
        n = int(rng.integers(1, 6))
        t = random_tree(rng, n, 4)
        x = tuple(int(b) for b in rng.integers(0, 2, n))
        delta = Fraction(int(rng.integers(0, 9)), 8)
        r = min_sr_exhaustive(t, x, delta)
        ok = [frozenset(s) for k in range(n + 1) for s in itertools.combinations(range(n), k)
              if definition_agreement(t, x, s) >= delta]
        best = min(ok, key=lambda s: (len(s), sorted(s)))
        assert r.size == len(best)
        g = min_sr_greedy(t, x, delta)
        assert g.size >= r.size and g.agreement >= delta


def test_parallel_search_is_deterministic(rng):
    t = random_tree(rng, 8, 7)
    x = (1, 0, 1, 1, 0, 0, 1, 0)
    a = min_sr_exhaustive(t, x, "7/8")
    b = min_sr_exhaustive(t, x, "7/8", jobs=4)
    assert a.to_record() == b.to_record()


def test_size_cap_and_budget():
    conj = build_conjunction_tree(range(6))
    x = (1,) * 6
    r = min_sr_exhaustive(conj, x, 1, size_cap=3)
    assert r.features is None and r.budget_status == "none_within_cap"
    with pytest.raises(BudgetExceeded):
        min_sr_exhaustive(conj, x, 1, budget=10)
    with pytest.raises(BudgetExceeded):
        min_sr_exhaustive(conj, x, 1, max_vars=4)


def test_record_shape():
    rec = min_sr_exhaustive(AND2, (1, 1), "1/2").to_record()
    assert rec == {"set": "1", "size": 1, "agreement": "1/2",
                   "method": "exhaustive", "budget_status": "complete"}


def test_parsing_helpers():
    assert parse_rational("0.875") == Fraction(7, 8)
    assert parse_rational("3/4") == Fraction(3, 4)
    with pytest.raises(ParameterError):
        parse_rational(0.5)
    with pytest.raises(ParameterError):
        as_threshold("5/4")
    assert parse_feature_set("1,3") == frozenset({0, 2})
    assert parse_feature_set("") == frozenset()
    assert format_feature_set({2, 0}) == "1,3"
    with pytest.raises(ShapeError):
        parse_feature_set("0")
    with pytest.raises(ShapeError):
        parse_feature_set("4", 3)


def test_explained_input_must_be_complete():
    with pytest.raises(ShapeError):
        agreement_probability(AND2, (1, BOT), {0})
