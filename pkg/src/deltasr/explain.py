"""Checking and searching for probabilistic sufficient reasons.

A set ``S`` of coordinates is a delta-sufficient reason for ``x`` under a tree
``T`` when fixing ``x`` on ``S`` and drawing the remaining coordinates
uniformly reproduces ``T(x)`` with probability at least ``delta``.
Feature sets are ``frozenset``s of 0-based coordinates; the text form
(``"1,3,4"``) is 1-based.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .dyadic import Dyadic
from .errors import BudgetExceeded, ParameterError, ShapeError
from .tree import BOT, DecisionTree, Inner, Leaf, eval_complete, eval_partial

DEFAULT_SEARCH_VARS = 22
DEFAULT_SEARCH_BUDGET = 1 << 24


def parse_rational(text) -> Fraction:
    """Exact rational from ``"p/q"``, a decimal literal, or a number.

    Decimal strings are converted without a float round trip, so ``"0.875"``
    becomes ``7/8``. Floats are refused.
    """
    if isinstance(text, float):
        raise ParameterError("pass thresholds as exact rationals, not floats")
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ParameterError(f"not a rational number: {text!r}") from None


def as_threshold(delta) -> Fraction:
    d = delta if isinstance(delta, Fraction) else parse_rational(delta)
    if not 0 <= d <= 1:
        raise ParameterError(f"threshold {d} outside [0, 1]")
    return d


def parse_feature_set(text: str, n: Optional[int] = None) -> frozenset:
    """``"1,3"`` -> ``frozenset({0, 2})``. The empty string is the empty set."""
    text = text.strip()
    if not text or text in ("{}", "-"):
        return frozenset()
    out = set()
    for tok in text.split(","):
        try:
            i = int(tok)
        except ValueError:
            raise ShapeError(f"bad coordinate {tok!r}") from None
        if i < 1 or (n is not None and i > n):
            raise ShapeError(f"coordinate {i} out of range")
        if i - 1 in out:
            raise ShapeError(f"coordinate {i} listed twice")
        out.add(i - 1)
    return frozenset(out)


def format_feature_set(s: Iterable[int]) -> str:
    return ",".join(str(i + 1) for i in sorted(s))


def _check_complete(x, n):
    x = tuple(x)
    if len(x) != n:
        raise ShapeError(f"expected {n} coordinates, got {len(x)}")
    if any(v not in (0, 1) for v in x):
        raise ShapeError("explained input must be complete")
    return x


def _check_set(s, n):
    s = frozenset(s)
    bad = [i for i in s if not 0 <= i < n]
    if bad:
        raise ShapeError(f"coordinates out of range: {sorted(bad)}")
    return s


def restriction_of(x, s) -> tuple:
    """Keep ``x`` on ``s`` and make every other coordinate undefined."""
    x = tuple(x)
    s = _check_set(s, len(x))
    return tuple(v if i in s else BOT for i, v in enumerate(x))


def agreement_probability(tree: DecisionTree, x, s) -> Dyadic:
    x = _check_complete(x, tree.num_vars)
    p = eval_partial(tree, restriction_of(x, s))
    return p if eval_complete(tree, x) == 1 else p.complement()


def is_delta_sufficient(tree: DecisionTree, x, s, delta) -> bool:
    return agreement_probability(tree, x, s) >= as_threshold(delta)


def is_sufficient_reason(tree: DecisionTree, x, s) -> bool:
    """Every leaf reachable once ``x`` is fixed on ``s`` carries ``T(x)``.

    Walks the tree with a path environment so that repeated variables prune
    inconsistent branches; nothing is counted.
    """
    x = _check_complete(x, tree.num_vars)
    s = _check_set(s, tree.num_vars)
    target = eval_complete(tree, x)
    nodes = tree.nodes
    seen = set()
    stack = [(tree.root, ())]
    while stack:
        i, env = stack.pop()
        key = (i, env) if not tree.read_once else i
        if key in seen:
            continue
        seen.add(key)
        nd = nodes[i]
        if isinstance(nd, Leaf):
            if nd.label != target:
                return False
            continue
        if nd.var in s:
            stack.append((nd.one if x[nd.var] else nd.zero, env))
            continue
        fixed = dict(env).get(nd.var)
        if fixed is not None:
            stack.append((nd.one if fixed else nd.zero, env))
            continue
        for b, child in ((0, nd.zero), (1, nd.one)):
            new_env = env if tree.read_once else tuple(sorted(env + ((nd.var, b),)))
            stack.append((child, new_env))
    return True


@dataclass(frozen=True)
class ExplanationResult:
    """Outcome of a reason search.

    ``budget_status`` is ``"complete"`` when a set was found by exhaustive
    search, ``"none_within_cap"`` when the search finished without finding a
    set of size at most the cap, and ``"heuristic"`` for greedy output.
    """

    features: Optional[frozenset]
    agreement: Optional[Dyadic]
    method: str
    budget_status: str
    checked: int = 0

    @property
    def size(self) -> Optional[int]:
        return None if self.features is None else len(self.features)

    def to_record(self) -> dict:
        return {
            "set": None if self.features is None else format_feature_set(self.features),
            "size": self.size,
            "agreement": None if self.agreement is None else str(self.agreement),
            "method": self.method,
            "budget_status": self.budget_status,
        }


def min_sr_exhaustive(tree: DecisionTree, x, delta, size_cap: Optional[int] = None,
                      max_vars: int = DEFAULT_SEARCH_VARS,
                      budget: int = DEFAULT_SEARCH_BUDGET,
                      jobs: int = 1) -> ExplanationResult:
    """Smallest delta-sufficient reason, ties broken lexicographically.

    Only coordinates the tree actually queries are candidates: adding any
    other coordinate leaves the agreement unchanged. Supersets of failing
    sets are not pruned, since for ``delta < 1`` the property is not monotone.
    """
    x = _check_complete(x, tree.num_vars)
    delta = as_threshold(delta)
    n = tree.num_vars
    cap = n if size_cap is None else size_cap
    if not 0 <= cap <= n:
        raise ParameterError(f"size cap {cap} outside 0..{n}")
    candidates = sorted(tree.used_vars)
    if len(candidates) > max_vars:
        raise BudgetExceeded(f"{len(candidates)} queried coordinates exceed the "
                             f"search cap of {max_vars}")
    checked = 0
    pool = ThreadPoolExecutor(jobs) if jobs > 1 else None
    try:
        for size in range(0, min(cap, len(candidates)) + 1):
            level = [frozenset(c) for c in itertools.combinations(candidates, size)]
            if checked + len(level) > budget:
                raise BudgetExceeded(f"more than {budget} candidate sets")
            checked += len(level)
            score = (lambda s: agreement_probability(tree, x, s))
            values = pool.map(score, level) if pool else map(score, level)
            for s, a in zip(level, values):
                if a >= delta:
                    return ExplanationResult(s, a, "exhaustive", "complete", checked)
    finally:
        if pool:
            pool.shutdown()
    return ExplanationResult(None, None, "exhaustive", "none_within_cap", checked)


def min_sr_greedy(tree: DecisionTree, x, delta) -> ExplanationResult:
    """Grow ``S`` by the coordinate that most raises the agreement.

    Ties go to the smallest coordinate. Coordinates the tree never queries
    are appended only if everything else is exhausted.
    """
    x = _check_complete(x, tree.num_vars)
    delta = as_threshold(delta)
    s: frozenset = frozenset()
    current = agreement_probability(tree, x, s)
    order = sorted(tree.used_vars) + sorted(set(range(tree.num_vars)) - tree.used_vars)
    remaining = list(order)
    while current < delta and remaining:
        best = None
        for j in remaining:
            a = agreement_probability(tree, x, s | {j})
            if best is None or a > best[0]:
                best = (a, j)
        current, j = best
        s = s | {j}
        remaining.remove(j)
    return ExplanationResult(s, current, "greedy", "heuristic")
