"""1-in-Ek hitting-set instances: k positive variables per clause, and a
clause counts as satisfied when exactly one of its variables is 1.

Text format (1-based, DIMACS-like)::

    c optional comment
    p 1inkhs <n> <m> <k>
    3 1 4 0
    ...
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, ParameterError, ParseError, ShapeError

DEFAULT_ASSIGNMENT_CAP = 24


@dataclass(frozen=True)
class HittingSetInstance:
    num_vars: int
    width: int
    clauses: tuple  # tuples of 0-based variable indices, in file order

    def __post_init__(self):
        clauses = tuple(tuple(int(v) for v in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.width < 1:
            raise ParameterError("clause width must be positive")
        if not clauses:
            raise ParameterError("an instance needs at least one clause")
        for j, c in enumerate(clauses):
            if len(c) != self.width:
                raise ParameterError(f"clause {j + 1} has {len(c)} variables, "
                                     f"expected {self.width}")
            if len(set(c)) != len(c):
                raise ParameterError(f"clause {j + 1} repeats a variable")
            if any(not 0 <= v < self.num_vars for v in c):
                raise ParameterError(f"clause {j + 1} has a variable out of range")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


def parse_instance(text: str) -> HittingSetInstance:
    header = None
    clauses = []
    pending: list = []
    pending_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = line.split()
        if toks[0] == "p":
            if header is not None:
                raise ParseError("second problem line", lineno)
            if len(toks) != 5 or toks[1] != "1inkhs":
                raise ParseError("expected 'p 1inkhs <n> <m> <k>'", lineno)
            try:
                header = tuple(int(t) for t in toks[2:])
            except ValueError:
                raise ParseError("non-integer field in problem line", lineno) from None
            continue
        if header is None:
            raise ParseError("clause before problem line", lineno)
        n, _, k = header
        for tok in toks:
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", lineno) from None
            if pending_line is None:
                pending_line = lineno
            if v == 0:
                if len(pending) != k:
                    raise ParseError(f"clause has {len(pending)} variables, expected {k}",
                                     pending_line)
                if len(set(pending)) != k:
                    raise ParseError("clause repeats a variable", pending_line)
                clauses.append(tuple(pending))
                pending, pending_line = [], None
            elif v < 0:
                raise ParseError("negated literals are not allowed", lineno)
            elif v > n:
                raise ParseError(f"variable {v} outside 1..{n}", lineno)
            else:
                pending.append(v - 1)
    if header is None:
        raise ParseError("missing problem line")
    if pending:
        raise ParseError("unterminated clause", pending_line)
    n, m, k = header
    if len(clauses) != m:
        raise ParseError(f"header declares {m} clauses, found {len(clauses)}")
    try:
        return HittingSetInstance(n, k, tuple(clauses))
    except ParameterError as exc:
        raise ParseError(str(exc)) from exc


def emit_instance(inst: HittingSetInstance) -> str:
    lines = [f"p 1inkhs {inst.num_vars} {inst.num_clauses} {inst.width}"]
    lines += [" ".join(str(v + 1) for v in c) + " 0" for c in inst.clauses]
    return "\n".join(lines) + "\n"


def _check_assignment(alpha, n):
    alpha = tuple(alpha)
    if len(alpha) != n:
        raise ShapeError(f"expected {n} values, got {len(alpha)}")
    if any(a not in (0, 1) for a in alpha):
        raise ShapeError("assignment entries must be 0 or 1")
    return alpha


def count_satisfied(inst: HittingSetInstance, alpha: Sequence[int]) -> int:
    alpha = _check_assignment(alpha, inst.num_vars)
    return sum(1 for c in inst.clauses if sum(alpha[v] for v in c) == 1)


@dataclass(frozen=True)
class MaxSatResult:
    fraction: Fraction
    satisfied: int
    witness: tuple


def max_sat_fraction_bruteforce(inst: HittingSetInstance,
                                cap: int = DEFAULT_ASSIGNMENT_CAP,
                                chunk_bits: int = 20) -> MaxSatResult:
    """Best fraction of clauses satisfiable, over all ``2**n`` assignments.

    The witness is the lexicographically smallest optimal assignment. Bit
    ``n-1-i`` of the enumeration counter holds variable ``i``, so counter
    order and lexicographic order coincide.
    """
    n = inst.num_vars
    if n > cap:
        raise BudgetExceeded(f"{n} variables exceed the cap of {cap}")
    masks = np.array([sum(1 << (n - 1 - v) for v in c) for c in inst.clauses],
                     dtype=np.int64)
    best, best_code = -1, 0
    step = 1 << min(chunk_bits, n)
    for start in range(0, 1 << n, step):
        codes = np.arange(start, min(start + step, 1 << n), dtype=np.int64)
        sat = np.zeros(len(codes), dtype=np.int32)
        for mk in masks:
            sat += np.bitwise_count(codes & mk) == 1
        i = int(np.argmax(sat))
        if sat[i] > best:
            best, best_code = int(sat[i]), int(codes[i])
    witness = tuple((best_code >> (n - 1 - v)) & 1 for v in range(n))
    return MaxSatResult(Fraction(best, inst.num_clauses), best, witness)


def generate_random(n: int, m: int, k: int, seed: int,
                    planted: Optional[Sequence[int]] = None) -> HittingSetInstance:
    """Seeded random instance (numpy PCG64 via ``default_rng(seed)``).

    With ``planted`` every clause gets exactly one variable that is 1 under the
    planted assignment, so the assignment satisfies all clauses. Variables
    inside a clause are sorted.
    """
    if not 1 <= k <= n:
        raise ParameterError(f"need 1 <= k <= n, got k={k}, n={n}")
    if m < 1:
        raise ParameterError("need at least one clause")
    rng = np.random.default_rng(seed)
    clauses = []
    if planted is None:
        for _ in range(m):
            clauses.append(tuple(sorted(int(v) for v in rng.choice(n, size=k, replace=False))))
    else:
        alpha = _check_assignment(planted, n)
        ones = [i for i, a in enumerate(alpha) if a]
        zeros = [i for i, a in enumerate(alpha) if not a]
        if not ones:
            raise ParameterError("planted assignment has no 1s")
        if len(zeros) < k - 1:
            raise ParameterError(f"planted assignment needs at least {k - 1} zeros")
        for _ in range(m):
            hit = ones[int(rng.integers(len(ones)))]
            rest = rng.choice(len(zeros), size=k - 1, replace=False)
            clauses.append(tuple(sorted([hit] + [zeros[int(r)] for r in rest])))
    return HittingSetInstance(n, k, tuple(clauses))


def complete_design(n: int, k: int) -> HittingSetInstance:
    """Every ``k``-subset of ``n`` variables, in lexicographic order."""
    from itertools import combinations
    return HittingSetInstance(n, k, tuple(combinations(range(n), k)))
