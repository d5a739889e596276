"""Gadget constructors for the hardness reductions.

Variable layout of the selector tree ``L`` (0-based)::

    x_0 .. x_{n-1}         formula variables
    y_0 .. y_{2l}          selector word, positions n .. n+2l
    z                      position n+2l+1

The amplified tree uses ``K`` consecutive blocks of that width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .dyadic import Dyadic, ONE, ZERO
from .errors import BudgetExceeded, ParameterError, ShapeError, StructureError
from .instances import HittingSetInstance
from .tree import BOT, DecisionTree, Inner, Leaf, TreeBuilder

DEFAULT_T1_BUDGET = 4096
DEFAULT_NODE_BUDGET = 4_000_000
FLOOR_GAP = Fraction(1, 128)
SEVEN_EIGHTHS = Fraction(7, 8)

_PRECISION = 60


# ---------------------------------------------------------------------------
# conjunction lift
# ---------------------------------------------------------------------------

def build_conjunction_tree(var_indices: Sequence[int], num_vars: Optional[int] = None
                           ) -> DecisionTree:
    """Path tree querying ``var_indices`` in order; any 0 answer gives leaf 0."""
    var_indices = list(var_indices)
    if not var_indices:
        raise ParameterError("conjunction needs at least one variable")
    if len(set(var_indices)) != len(var_indices):
        raise StructureError("duplicate variable in conjunction")
    n = max(var_indices) + 1 if num_vars is None else num_vars
    b = TreeBuilder(n)
    return b.build(_conjunction_into(b, var_indices))


def _conjunction_into(b: TreeBuilder, var_indices) -> int:
    node = b.leaf(1)
    for v in reversed(var_indices):
        node = b.node(v, b.leaf(0), node)
    return node


def canonical_block_size(n: int, epsilon) -> int:
    """``ceil((n + log2(2/eps)) ** (1/eps))``, exact whenever ``eps = 2**-j``."""
    eps = Fraction(epsilon)
    if not 0 < eps < 1:
        raise ParameterError(f"epsilon {eps} outside (0, 1)")
    ratio = 2 / eps
    if ratio.denominator == 1 and (ratio.numerator & (ratio.numerator - 1)) == 0 \
            and (1 / eps).denominator == 1:
        return (n + ratio.numerator.bit_length() - 1) ** int(1 / eps)
    with mpmath.workdps(_PRECISION):
        base = n + mpmath.log(mpmath.mpf(ratio.numerator) / ratio.denominator, 2)
        val = base ** (mpmath.mpf(eps.denominator) / eps.numerator)
        return int(mpmath.ceil(val))


@dataclass(frozen=True)
class T1Result:
    tree: DecisionTree
    base_vars: int
    block_size: int
    epsilon: Fraction
    canonical: bool

    @property
    def block(self) -> range:
        """Positions of the fresh conjunction variables."""
        return range(self.base_vars, self.base_vars + self.block_size)

    def metadata(self) -> dict:
        return {"kind": "t1", "n": self.base_vars, "m": self.block_size,
                "epsilon": str(self.epsilon), "canonical": self.canonical,
                "num_vars": self.tree.num_vars, "depth": self.tree.depth}


def build_t1(tree: DecisionTree, epsilon, m: Optional[int] = None,
             budget: int = DEFAULT_T1_BUDGET) -> T1Result:
    """``T(x) or (x_{n} and ... and x_{n+m-1})`` built by hanging the
    conjunction below every 0-leaf of ``T``.

    ``m`` defaults to the canonical block size; an explicit ``m`` is allowed
    for desk-scale experiments and is recorded as non-canonical.
    """
    eps = Fraction(epsilon)
    if not 0 < eps < 1:
        raise ParameterError(f"epsilon {eps} outside (0, 1)")
    n = tree.num_vars
    canonical_m = None
    if m is None or m == 0:
        canonical_m = canonical_block_size(n, eps)
        m = canonical_m
    if m < 1:
        raise ParameterError("block size must be positive")
    if m > budget:
        raise BudgetExceeded(f"block size {m} exceeds the budget of {budget}")
    b = TreeBuilder(n + m)
    conj = _conjunction_into(b, range(n, n + m))
    ids = {}
    for i in tree.reachable:
        nd = tree.nodes[i]
        if isinstance(nd, Leaf):
            ids[i] = b.leaf(1) if nd.label else conj
        else:
            ids[i] = b.node(nd.var, ids[nd.zero], ids[nd.one])
    if canonical_m is None:
        canonical_m = canonical_block_size(n, eps)
    return T1Result(b.build(ids[tree.root]), n, m, eps, m == canonical_m)


def sr_from_partial(y: Sequence) -> frozenset:
    """Coordinates fixed to 1 in a partial input over {1, BOT}."""
    out = set()
    for i, v in enumerate(y):
        if v == 1:
            out.add(i)
        elif v is not BOT:
            raise ShapeError(f"coordinate {i} is {v!r}; only 1 and BOT are allowed")
    return frozenset(out)


# ---------------------------------------------------------------------------
# selector words
# ---------------------------------------------------------------------------

def is_fat(word: Sequence[int]) -> bool:
    """More 1s than 0s."""
    ones = sum(word)
    return 2 * ones > len(word)


def selector_half_width(m: int) -> int:
    """Smallest ``l >= 0`` with ``m <= 4**l``."""
    if m < 1:
        raise ParameterError("need at least one clause")
    l = 0
    while (1 << (2 * l)) < m:
        l += 1
    return l


def fat_words(l: int):
    """Fat words of length ``2l+1`` in lexicographic order."""
    w = 2 * l + 1
    for code in range(1 << w):
        word = tuple((code >> (w - 1 - i)) & 1 for i in range(w))
        if is_fat(word):
            yield word


def fat_word_clause_map(l: int, m: int) -> dict:
    """The ``j``-th fat word (lexicographic, 0-based) goes to clause ``j mod m``.

    Clause indices are 0-based.
    """
    if m < 1 or m > (1 << (2 * l)):
        raise ParameterError(f"{m} clauses cannot be covered by {1 << (2 * l)} fat words")
    return {word: j % m for j, word in enumerate(fat_words(l))}


@dataclass(frozen=True)
class LayoutL:
    n: int
    l: int

    @property
    def x_positions(self) -> range:
        return range(self.n)

    @property
    def y_positions(self) -> range:
        return range(self.n, self.n + 2 * self.l + 1)

    @property
    def z_position(self) -> int:
        return self.n + 2 * self.l + 1

    @property
    def width(self) -> int:
        return self.n + 2 * self.l + 2

    def to_record(self) -> dict:
        return {"n": self.n, "l": self.l, "width": self.width,
                "x": [1, self.n], "y": [self.n + 1, self.n + 2 * self.l + 1],
                "z": self.z_position + 1}


# ---------------------------------------------------------------------------
# clause gadget and selector tree
# ---------------------------------------------------------------------------

def lc_label(clause_bits: Sequence[int], z: int) -> int:
    """Accept iff exactly one clause bit is 0, or all are 1 and ``z`` is 0."""
    zeros = len(clause_bits) - sum(clause_bits)
    return int(zeros == 1 or (zeros == 0 and z == 0))


def _lc_into(b: TreeBuilder, clause: Sequence[int], z_position: int) -> int:
    k = len(clause)
    memo = {}

    def go(i, zeros):
        # Subtrees with the same (depth, zero count) are identical, so share them.
        key = (i, min(zeros, 2))
        if key in memo:
            return memo[key]
        if i == k:
            if zeros == 1:
                res = b.node(z_position, b.leaf(1), b.leaf(1))
            elif zeros == 0:
                res = b.node(z_position, b.leaf(1), b.leaf(0))
            else:
                res = b.node(z_position, b.leaf(0), b.leaf(0))
        else:
            res = b.node(clause[i], go(i + 1, zeros + 1), go(i + 1, zeros))
        memo[key] = res
        return res

    return go(0, 0)


def build_lc(clause: Sequence[int], z_position: int,
             num_vars: Optional[int] = None) -> DecisionTree:
    """Clause gadget: queries every clause variable, then ``z``."""
    clause = list(clause)
    if len(set(clause) | {z_position}) != len(clause) + 1:
        raise StructureError("gadget positions must be distinct")
    n = max(clause + [z_position]) + 1 if num_vars is None else num_vars
    b = TreeBuilder(n)
    return b.build(_lc_into(b, clause, z_position))


def build_l(inst: HittingSetInstance) -> tuple:
    """Selector tree ``L`` for ``inst`` and its :class:`LayoutL`.

    The tree reads ``y_0..y_{2l}``; thin words lead to leaf 1 and every fat
    word runs the gadget of the clause it is mapped to.
    """
    m = inst.num_clauses
    layout = LayoutL(inst.num_vars, selector_half_width(m))
    cmap = fat_word_clause_map(layout.l, m)
    b = TreeBuilder(layout.width)
    gadgets = {}
    ys = list(layout.y_positions)

    def select(i, word):
        if i == len(ys):
            if not is_fat(word):
                return b.leaf(1)
            c = cmap[word]
            if c not in gadgets:
                gadgets[c] = _lc_into(b, inst.clauses[c], layout.z_position)
            return gadgets[c]
        return b.node(ys[i], select(i + 1, word + (0,)), select(i + 1, word + (1,)))

    return b.build(select(0, ())), layout


def assignment_to_partial(alpha: Sequence[int], layout: LayoutL) -> tuple:
    """``alpha_i = 0`` fixes ``x_i`` to 1, ``alpha_i = 1`` leaves it undefined;
    the selector block and ``z`` stay undefined."""
    alpha = tuple(alpha)
    if len(alpha) != layout.n:
        raise ShapeError(f"expected {layout.n} values, got {len(alpha)}")
    xs = []
    for a in alpha:
        if a not in (0, 1):
            raise ShapeError("assignment entries must be 0 or 1")
        xs.append(1 if a == 0 else BOT)
    return tuple(xs) + (BOT,) * (layout.width - layout.n)


def partial_to_assignment(p: Sequence, layout: LayoutL) -> tuple:
    p = tuple(p)
    if len(p) != layout.width:
        raise ShapeError(f"expected {layout.width} coordinates, got {len(p)}")
    out = []
    for i in layout.x_positions:
        if p[i] == 1:
            out.append(0)
        elif p[i] is BOT:
            out.append(1)
        else:
            raise ShapeError(f"x-coordinate {i} is {p[i]!r}; only 1 and BOT are allowed")
    return tuple(out)


# ---------------------------------------------------------------------------
# amplification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AmplifierParams:
    kappa: Optional[Fraction]
    delta_gap: Optional[Fraction]
    copies: int
    threshold: int
    source: str = "explicit"

    def __post_init__(self):
        if self.copies < 1:
            raise ParameterError("need at least one copy")
        if not 0 <= self.threshold <= self.copies:
            raise ParameterError("threshold must lie in 0..copies")
        if self.delta_gap is not None and not 0 < self.delta_gap < SEVEN_EIGHTHS:
            raise ParameterError(f"gap {self.delta_gap} outside (0, 7/8)")

    def to_record(self) -> dict:
        return {"kappa": None if self.kappa is None else str(self.kappa),
                "delta_gap": None if self.delta_gap is None else str(self.delta_gap),
                "K": self.copies, "threshold": self.threshold, "source": self.source}


def raw_copy_count(kappa, delta_gap):
    """``2 ln(2/kappa) / delta**2`` as a high-precision mpf, before rounding."""
    with mpmath.workdps(_PRECISION):
        k = mpmath.mpf(kappa) if not isinstance(kappa, Fraction) else \
            mpmath.mpf(kappa.numerator) / kappa.denominator
        d = mpmath.mpf(delta_gap) if not isinstance(delta_gap, Fraction) else \
            mpmath.mpf(delta_gap.numerator) / delta_gap.denominator
        return 2 * mpmath.log(2 / k) / d ** 2


def threshold_count(delta_gap: Fraction, copies: int) -> int:
    return math.ceil((SEVEN_EIGHTHS - Fraction(delta_gap) / 2) * copies)


def choose_params(m: Optional[int], kappa, delta_gap=None, source: str = "explicit"
                  ) -> AmplifierParams:
    """Copy count ``ceil(2 ln(2/kappa) / gap**2)`` and the accept threshold.

    The gap has no default: the constant in the asymptotic gap is not pinned
    down, so callers pass an explicit gap, :data:`FLOOR_GAP`, or one measured
    by exhaustive maximisation (see ``harness.measure_gap``). ``m`` is kept for
    the record only.
    """
    kappa = Fraction(kappa)
    if not 0 < kappa < 1:
        raise ParameterError(f"kappa {kappa} outside (0, 1)")
    if delta_gap is None:
        raise ParameterError("a gap must be supplied (explicit, floor, or measured)")
    gap = Fraction(delta_gap)
    if not 0 < gap < SEVEN_EIGHTHS:
        raise ParameterError(f"gap {gap} outside (0, 7/8)")
    with mpmath.workdps(_PRECISION):
        copies = int(mpmath.ceil(raw_copy_count(kappa, gap)))
    return AmplifierParams(kappa, gap, copies, threshold_count(gap, copies), source)


def amplify(L: DecisionTree, copies: int, threshold: int,
            max_nodes: int = DEFAULT_NODE_BUDGET) -> DecisionTree:
    """Run ``copies`` independent copies of ``L`` on consecutive variable
    blocks and accept iff at least ``threshold`` of them accept.

    Each copy ``j`` is instantiated once per running count ``c``; its leaves
    continue into the shared node for ``(j+1, c + label)``. Once the outcome
    is decided the continuation is a constant leaf.
    """
    if copies < 1 or not 0 <= threshold <= copies:
        raise ParameterError("need copies >= 1 and 0 <= threshold <= copies")
    w = L.num_vars
    b = TreeBuilder(copies * w)
    nxt = {c: b.leaf(int(c >= threshold)) for c in range(copies + 1)}
    for j in reversed(range(copies)):
        cur = {}
        for c in range(j + 1):
            if c >= threshold:
                cur[c] = b.leaf(1)
            elif c + (copies - j) < threshold:
                cur[c] = b.leaf(0)
            else:
                ids = {}
                for i in L.reachable:
                    nd = L.nodes[i]
                    if isinstance(nd, Leaf):
                        ids[i] = nxt[c + nd.label]
                    else:
                        ids[i] = b.node(nd.var + j * w, ids[nd.zero], ids[nd.one])
                cur[c] = ids[L.root]
                if len(b) > max_nodes:
                    raise BudgetExceeded(f"amplified tree exceeds {max_nodes} nodes")
        nxt = cur
    return b.build(nxt[0])


def acceptance_probability(block_values: Sequence, threshold: int) -> Dyadic:
    """Exact ``P[#successes >= threshold]`` for independent Bernoulli draws."""
    dist = [ONE]  # dist[c] = P[c successes so far]
    for q in block_values:
        q = q if isinstance(q, Dyadic) else Dyadic.from_fraction(q)
        qc = q.complement()
        new = [ZERO] * (len(dist) + 1)
        for c, pr in enumerate(dist):
            new[c] = new[c] + pr * qc
            new[c + 1] = new[c + 1] + pr * q
        dist = new
    total = ZERO
    for c in range(max(threshold, 0), len(dist)):
        total = total + dist[c]
    return total


def repeat_blocks(p: Sequence, copies: int) -> tuple:
    return tuple(p) * copies


@dataclass(frozen=True)
class HardnessBuild:
    L: DecisionTree
    layout: LayoutL
    params: AmplifierParams
    T: DecisionTree

    def metadata(self) -> dict:
        return {"kind": "hardness", "layout": self.layout.to_record(),
                "params": self.params.to_record(), "canonical": self.params.source != "override",
                "num_vars": self.T.num_vars, "depth_L": self.L.depth,
                "depth_T": self.T.depth, "nodes_T": len(self.T.reachable)}


def build_hardness(inst: HittingSetInstance, params: AmplifierParams,
                   max_nodes: int = DEFAULT_NODE_BUDGET) -> HardnessBuild:
    L, layout = build_l(inst)
    T = amplify(L, params.copies, params.threshold, max_nodes=max_nodes)
    return HardnessBuild(L, layout, params, T)
