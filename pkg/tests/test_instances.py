import itertools
from fractions import Fraction

import pytest

from deltasr.errors import BudgetExceeded, ParameterError, ParseError, ShapeError
from deltasr.instances import (HittingSetInstance, complete_design, count_satisfied,
                               emit_instance, generate_random, max_sat_fraction_bruteforce,
                               parse_instance)


def _count_oracle(inst, alpha):
    total = 0
    for c in inst.clauses:
        ones = 0
        for v in c:
            ones += alpha[v]
        total += ones == 1
    return total


def test_round_trip(rng):
    for _ in range(100):
        n = int(rng.integers(3, 12))
        k = int(rng.integers(1, min(n, 5) + 1))
        m = int(rng.integers(1, 20))
        inst = generate_random(n, m, k, seed=int(rng.integers(1 << 30)))
        assert parse_instance(emit_instance(inst)) == inst


def test_comments_and_wrapped_clauses():
    text = "c hello\np 1inkhs 4 2 3\n1 2\n3 0 2 3 4 0\n"
    inst = parse_instance(text)
    assert inst.clauses == ((0, 1, 2), (1, 2, 3))


@pytest.mark.parametrize("text, line", [
    ("p 1inkhs 3 1 2\n1 -2 0\n", 2),
    ("p 1inkhs 3 1 2\n1 4 0\n", 2),
    ("p 1inkhs 3 1 2\n1 2 3 0\n", 2),
    ("p 1inkhs 3 1 2\n1 1 0\n", 2),
    ("1 2 0\n", 1),
    ("p sat 3 1 2\n", 1),
])
def test_parse_rejects(text, line):
    with pytest.raises(ParseError) as err:
        parse_instance(text)
    assert err.value.line == line


def test_clause_count_mismatch():
    with pytest.raises(ParseError):
        parse_instance("p 1inkhs 3 2 2\n1 2 0\n")
    with pytest.raises(ParseError):
        parse_instance("p 1inkhs 3 1 2\n1 2\n")


def test_count_satisfied_against_oracle(rng):
    for _ in range(50):
        inst = generate_random(8, 10, 3, seed=int(rng.integers(1 << 30)))
        alpha = tuple(int(b) for b in rng.integers(0, 2, 8))
        assert count_satisfied(inst, alpha) == _count_oracle(inst, alpha)
    with pytest.raises(ShapeError):
        count_satisfied(inst, (1, 0))


def test_bruteforce_max_matches_loop(rng):
    for _ in range(10):
        inst = generate_random(7, 9, 3, seed=int(rng.integers(1 << 30)))
        best = max(_count_oracle(inst, a) for a in itertools.product((0, 1), repeat=7))
        res = max_sat_fraction_bruteforce(inst, chunk_bits=4)
        assert res.satisfied == best
        assert count_satisfied(inst, res.witness) == best
        first = next(a for a in itertools.product((0, 1), repeat=7)
                     if _count_oracle(inst, a) == best)
        assert res.witness == first


def test_planted_instances_are_satisfiable(rng):
    for _ in range(20):
        alpha = tuple(int(b) for b in rng.integers(0, 2, 9))
        if sum(alpha) == 0 or 9 - sum(alpha) < 2:
            continue
        inst = generate_random(9, 12, 3, seed=int(rng.integers(1 << 30)), planted=alpha)
        assert count_satisfied(inst, alpha) == 12
        assert max_sat_fraction_bruteforce(inst).fraction == 1


def test_generation_is_deterministic():
    a = emit_instance(generate_random(10, 15, 3, seed=7))
    b = emit_instance(generate_random(10, 15, 3, seed=7))
    c = emit_instance(generate_random(10, 15, 3, seed=8))
    assert a == b and a != c


def test_bruteforce_cap():
    with pytest.raises(BudgetExceeded):
        max_sat_fraction_bruteforce(complete_design(26, 2))


def test_complete_design():
    d = complete_design(6, 3)
    assert d.num_clauses == 20
    # w ones satisfy w * C(6 - w, 2) clauses; w = 2 is best with 12.
    assert max_sat_fraction_bruteforce(d).fraction == Fraction(12, 20)


def test_invalid_instances():
    with pytest.raises(ParameterError):
        HittingSetInstance(3, 2, ((0, 0),))
    with pytest.raises(ParameterError):
        HittingSetInstance(3, 2, ())
    with pytest.raises(ParameterError):
        generate_random(3, 2, 4, seed=0)
