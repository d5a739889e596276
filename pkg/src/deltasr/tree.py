"""Decision trees over Boolean variables and their exact evaluation.

Trees are stored as a node table. Children are referenced by integer id, so
identical subtrees may be shared (the amplifier relies on this) while the
semantics are always those of the unfolded tree.

Variables are 0-based inside the library. The text format and the CLI use
1-based indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

from .dyadic import Dyadic, ONE, ZERO
from .errors import BudgetExceeded, ParseError, ShapeError, StructureError

BOT = None
"""Marker for an undefined coordinate of a partial input."""

PartialInput = tuple  # entries: 0, 1 or BOT

DEFAULT_BRUTEFORCE_CAP = 24
FORMAT_VERSION = 1


class Leaf(NamedTuple):
    label: int


class Inner(NamedTuple):
    var: int
    zero: int
    one: int


@dataclass(frozen=True)
class TreeReport:
    well_formed: bool
    read_once_per_path: bool
    depth: int
    unfolded_size: int
    node_count: int


@dataclass(frozen=True, eq=False)
class DecisionTree:
    """A decision tree over ``num_vars`` variables.

    ``nodes`` holds :class:`Leaf` and :class:`Inner` entries; ``root`` is an
    index into it. Construction checks every structural invariant and raises
    :class:`StructureError` on dangling references, bad labels or cycles.
    """

    num_vars: int
    nodes: tuple
    root: int
    _order: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.num_vars < 0:
            raise StructureError("num_vars must be non-negative")
        nodes = tuple(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        size = len(nodes)
        if not 0 <= self.root < size:
            raise StructureError(f"root id {self.root} out of range")
        for i, nd in enumerate(nodes):
            if isinstance(nd, Leaf):
                if nd.label not in (0, 1):
                    raise StructureError(f"node {i}: leaf label must be 0 or 1")
            elif isinstance(nd, Inner):
                if not 0 <= nd.var < self.num_vars:
                    raise StructureError(f"node {i}: variable {nd.var} out of range")
                if not (0 <= nd.zero < size and 0 <= nd.one < size):
                    raise StructureError(f"node {i}: child id out of range")
            else:
                raise StructureError(f"node {i}: unknown node type {nd!r}")
        object.__setattr__(self, "_order", _topological_order(nodes, self.root))

    # structural analysis ---------------------------------------------------

    @property
    def reachable(self) -> tuple:
        """Reachable node ids, children before parents."""
        return self._order

    @cached_property
    def _below_masks(self) -> dict:
        masks = {}
        for i in self._order:
            nd = self.nodes[i]
            if isinstance(nd, Leaf):
                masks[i] = 0
            else:
                masks[i] = (1 << nd.var) | masks[nd.zero] | masks[nd.one]
        return masks

    @cached_property
    def read_once(self) -> bool:
        """True iff no variable is queried twice on any root-to-leaf path."""
        masks = self._below_masks
        for i in self._order:
            nd = self.nodes[i]
            if isinstance(nd, Inner) and ((masks[nd.zero] | masks[nd.one]) >> nd.var) & 1:
                return False
        return True

    @cached_property
    def depth(self) -> int:
        d = {}
        for i in self._order:
            nd = self.nodes[i]
            d[i] = 0 if isinstance(nd, Leaf) else 1 + max(d[nd.zero], d[nd.one])
        return d[self.root]

    @cached_property
    def unfolded_size(self) -> int:
        s = {}
        for i in self._order:
            nd = self.nodes[i]
            s[i] = 1 if isinstance(nd, Leaf) else 1 + s[nd.zero] + s[nd.one]
        return s[self.root]

    @cached_property
    def used_vars(self) -> frozenset:
        """Variables queried by at least one reachable node."""
        mask = self._below_masks[self.root]
        return frozenset(v for v in range(self.num_vars) if (mask >> v) & 1)

    def complemented(self) -> "DecisionTree":
        """The same tree with every leaf label flipped."""
        flipped = tuple(Leaf(1 - nd.label) if isinstance(nd, Leaf) else nd
                        for nd in self.nodes)
        return DecisionTree(self.num_vars, flipped, self.root)

    def relabeled(self, offset: int, num_vars: int) -> "DecisionTree":
        """Shift every variable index by ``offset`` into a wider variable space."""
        moved = tuple(Inner(nd.var + offset, nd.zero, nd.one) if isinstance(nd, Inner)
                      else nd for nd in self.nodes)
        return DecisionTree(num_vars, moved, self.root)

    def __call__(self, x) -> int:
        return eval_complete(self, x)


def _topological_order(nodes, root) -> tuple:
    """Post-order of the nodes reachable from ``root``; raises on a cycle."""
    state = {}  # 1 = on stack, 2 = done
    order = []
    stack = [(root, False)]
    while stack:
        i, expanded = stack.pop()
        if expanded:
            state[i] = 2
            order.append(i)
            continue
        st = state.get(i)
        if st == 2:
            continue
        if st == 1:
            raise StructureError(f"cycle through node {i}")
        state[i] = 1
        stack.append((i, True))
        nd = nodes[i]
        if isinstance(nd, Inner):
            for c in (nd.one, nd.zero):
                cs = state.get(c)
                if cs == 1:
                    raise StructureError(f"cycle through node {c}")
                if cs is None:
                    stack.append((c, False))
    return tuple(order)


class TreeBuilder:
    """Hash-consing node factory.

    Structurally identical subtrees get the same id. No BDD-style reduction
    is performed: a node whose children coincide is kept as is.
    """

    def __init__(self, num_vars: int):
        self.num_vars = num_vars
        self._nodes: list = [Leaf(0), Leaf(1)]
        self._index: dict = {Leaf(0): 0, Leaf(1): 1}

    def leaf(self, label: int) -> int:
        return int(label)

    def node(self, var: int, zero: int, one: int) -> int:
        if not 0 <= var < self.num_vars:
            raise StructureError(f"variable {var} out of range")
        key = Inner(var, zero, one)
        i = self._index.get(key)
        if i is None:
            i = len(self._nodes)
            self._nodes.append(key)
            self._index[key] = i
        return i

    def __len__(self):
        return len(self._nodes)

    def build(self, root: int) -> DecisionTree:
        return compact(DecisionTree(self.num_vars, tuple(self._nodes), root))


def compact(tree: DecisionTree) -> DecisionTree:
    """Drop unreachable nodes and renumber children-before-parents."""
    new_id = {old: new for new, old in enumerate(tree.reachable)}
    nodes = []
    for old in tree.reachable:
        nd = tree.nodes[old]
        if isinstance(nd, Inner):
            nd = Inner(nd.var, new_id[nd.zero], new_id[nd.one])
        nodes.append(nd)
    return DecisionTree(tree.num_vars, tuple(nodes), new_id[tree.root])


def constant_tree(num_vars: int, label: int) -> DecisionTree:
    return DecisionTree(num_vars, (Leaf(label),), 0)


def tree_from_nested(num_vars: int, spec) -> DecisionTree:
    """Build a tree from nested tuples ``(var, zero_subtree, one_subtree)``.

    Leaves are the integers 0 and 1. Handy for tests and demos.
    """
    b = TreeBuilder(num_vars)

    def go(s):
        if isinstance(s, int):
            return b.leaf(s)
        var, lo, hi = s
        return b.node(var, go(lo), go(hi))

    return b.build(go(spec))


# ---------------------------------------------------------------------------
# partial inputs
# ---------------------------------------------------------------------------

def parse_partial(text: str) -> PartialInput:
    """``"10*"`` -> ``(1, 0, BOT)``."""
    out = []
    for pos, ch in enumerate(text.strip()):
        if ch == "0":
            out.append(0)
        elif ch == "1":
            out.append(1)
        elif ch == "*":
            out.append(BOT)
        else:
            raise ShapeError(f"bad character {ch!r} at position {pos + 1}")
    return tuple(out)


def format_partial(y: Sequence) -> str:
    return "".join("*" if v is BOT else str(int(v)) for v in y)


def _check_partial(y, n) -> tuple:
    y = tuple(y)
    if len(y) != n:
        raise ShapeError(f"expected {n} coordinates, got {len(y)}")
    for v in y:
        if v is not BOT and v not in (0, 1):
            raise ShapeError(f"illegal coordinate value {v!r}")
    return y


def consistent(x: Sequence, y: Sequence) -> bool:
    """True iff ``x`` and ``y`` never disagree on a coordinate both define."""
    if len(x) != len(y):
        raise ShapeError(f"length mismatch: {len(x)} vs {len(y)}")
    return all(a is BOT or b is BOT or a == b for a, b in zip(x, y))


def completions(y: Sequence):
    """Iterate over every complete input consistent with ``y``."""
    free = [i for i, v in enumerate(y) if v is BOT]
    base = list(y)
    for bits in itertools.product((0, 1), repeat=len(free)):
        for i, b in zip(free, bits):
            base[i] = b
        yield tuple(base)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def eval_complete(tree: DecisionTree, x: Sequence) -> int:
    if len(x) != tree.num_vars:
        raise ShapeError(f"expected {tree.num_vars} coordinates, got {len(x)}")
    nodes = tree.nodes
    nd = nodes[tree.root]
    while isinstance(nd, Inner):
        b = x[nd.var]
        if b not in (0, 1):
            raise ShapeError(f"coordinate {nd.var} is not a bit: {b!r}")
        nd = nodes[nd.one if b else nd.zero]
    return nd.label


def eval_partial(tree: DecisionTree, y: Sequence) -> Dyadic:
    """Fraction of completions of ``y`` on which the tree outputs 1."""
    y = _check_partial(y, tree.num_vars)
    if tree.read_once:
        return _eval_read_once(tree, y)
    return _eval_with_environment(tree, y)


def _eval_read_once(tree, y) -> Dyadic:
    # Without repeats a subtree's value depends on y alone, so one value per node.
    nodes = tree.nodes
    val = {}
    for i in tree.reachable:
        nd = nodes[i]
        if isinstance(nd, Leaf):
            val[i] = ONE if nd.label else ZERO
            continue
        b = y[nd.var]
        if b is BOT:
            val[i] = val[nd.zero].average(val[nd.one])
        else:
            val[i] = val[nd.one if b else nd.zero]
    return val[tree.root]


def _eval_with_environment(tree, y) -> Dyadic:
    nodes = tree.nodes
    masks = tree._below_masks
    below = {i: tuple(v for v in range(tree.num_vars) if (m >> v) & 1)
             for i, m in masks.items()}
    env = list(y)
    memo = {}

    def go(i):
        nd = nodes[i]
        if isinstance(nd, Leaf):
            return ONE if nd.label else ZERO
        key = (i, tuple(env[v] for v in below[i]))
        hit = memo.get(key)
        if hit is not None:
            return hit
        b = env[nd.var]
        if b is BOT:
            env[nd.var] = 0
            lo = go(nd.zero)
            env[nd.var] = 1
            hi = go(nd.one)
            env[nd.var] = BOT
            res = lo.average(hi)
        else:
            res = go(nd.one if b else nd.zero)
        memo[key] = res
        return res

    return go(tree.root)


def eval_partial_bruteforce(tree: DecisionTree, y: Sequence,
                            cap: int = DEFAULT_BRUTEFORCE_CAP) -> Dyadic:
    """Count satisfying completions directly; refuses more than ``2**cap``."""
    y = _check_partial(y, tree.num_vars)
    free = sum(1 for v in y if v is BOT)
    if free > cap:
        raise BudgetExceeded(f"{free} undefined coordinates exceed the cap of {cap}")
    hits = sum(eval_complete(tree, x) for x in completions(y))
    return Dyadic(hits, free)


def validate(tree: DecisionTree) -> TreeReport:
    """Structural summary. Cycles are rejected when the tree is constructed."""
    return TreeReport(
        well_formed=True,
        read_once_per_path=tree.read_once,
        depth=tree.depth,
        unfolded_size=tree.unfolded_size,
        node_count=len(tree.reachable),
    )


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def serialize(tree: DecisionTree) -> bytes:
    """Encode the node table verbatim; variable indices become 1-based."""
    lines = [f"dtree {FORMAT_VERSION}", f"vars {tree.num_vars}",
             f"nodes {len(tree.nodes)}", f"root {tree.root}"]
    for i, nd in enumerate(tree.nodes):
        if isinstance(nd, Leaf):
            lines.append(f"{i} leaf {nd.label}")
        else:
            lines.append(f"{i} node {nd.var + 1} {nd.zero} {nd.one}")
    return ("\n".join(lines) + "\n").encode("ascii")


def _int(tok, lineno, what):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected integer {what}, got {tok!r}", lineno) from None


def deserialize(data) -> DecisionTree:
    if isinstance(data, bytes):
        try:
            data = data.decode("ascii")
        except UnicodeDecodeError as exc:
            raise ParseError(f"non-ASCII byte at offset {exc.start}") from None
    header = {}
    entries: dict = {}
    expected_keys = ("dtree", "vars", "nodes", "root")
    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(header) < len(expected_keys):
            key = expected_keys[len(header)]
            if toks[0] != key or len(toks) != 2:
                raise ParseError(f"expected '{key} <int>'", lineno)
            header[key] = _int(toks[1], lineno, key)
            if key == "dtree" and header[key] != FORMAT_VERSION:
                raise ParseError(f"unsupported version {header[key]}", lineno)
            continue
        nid = _int(toks[0], lineno, "node id")
        if nid in entries:
            raise ParseError(f"duplicate node id {nid}", lineno)
        if not 0 <= nid < header["nodes"]:
            raise ParseError(f"node id {nid} out of range", lineno)
        if len(toks) == 3 and toks[1] == "leaf":
            label = _int(toks[2], lineno, "label")
            if label not in (0, 1):
                raise ParseError(f"leaf label must be 0 or 1, got {label}", lineno)
            entries[nid] = (Leaf(label), lineno)
        elif len(toks) == 5 and toks[1] == "node":
            var, lo, hi = (_int(t, lineno, w) for t, w in
                           zip(toks[2:], ("variable", "zero child", "one child")))
            if not 1 <= var <= header["vars"]:
                raise ParseError(f"variable {var} outside 1..{header['vars']}", lineno)
            entries[nid] = (Inner(var - 1, lo, hi), lineno)
        else:
            raise ParseError(f"cannot parse node entry {line!r}", lineno)
    if len(header) < len(expected_keys):
        raise ParseError(f"missing header field '{expected_keys[len(header)]}'")
    missing = [i for i in range(header["nodes"]) if i not in entries]
    if missing:
        raise ParseError(f"node ids missing from table: {missing[:5]}")
    for nd, lineno in entries.values():
        if isinstance(nd, Inner) and not (0 <= nd.zero < header["nodes"]
                                          and 0 <= nd.one < header["nodes"]):
            raise ParseError("child id out of range", lineno)
    nodes = tuple(entries[i][0] for i in range(header["nodes"]))
    try:
        return DecisionTree(header["vars"], nodes, header["root"])
    except StructureError as exc:
        raise ParseError(str(exc)) from exc


def same_structure(a: DecisionTree, b: DecisionTree) -> bool:
    return (a.num_vars, a.nodes, a.root) == (b.num_vars, b.nodes, b.root)


def random_tree(rng, num_vars: int, max_depth: int, allow_repeats: bool = True,
                leaf_prob: float = 0.25) -> DecisionTree:
    """Seeded random tree; ``rng`` is a ``numpy.random.Generator``."""
    b = TreeBuilder(num_vars)

    def go(depth, used):
        if depth == max_depth or (depth > 0 and rng.random() < leaf_prob):
            return b.leaf(int(rng.integers(2)))
        pool = range(num_vars) if allow_repeats else [v for v in range(num_vars)
                                                      if v not in used]
        pool = list(pool)
        if not pool:
            return b.leaf(int(rng.integers(2)))
        v = pool[int(rng.integers(len(pool)))]
        return b.node(v, go(depth + 1, used | {v}), go(depth + 1, used | {v}))

    return b.build(go(0, frozenset()))


def random_partial(rng, num_vars: int, bot_prob: float = 0.5) -> PartialInput:
    return tuple(BOT if rng.random() < bot_prob else int(rng.integers(2))
                 for _ in range(num_vars))


def coerce_input(x, n: Optional[int] = None) -> tuple:
    """Accept a string over {0,1,*} or a sequence; validate length if given."""
    y = parse_partial(x) if isinstance(x, str) else tuple(x)
    if n is not None:
        y = _check_partial(y, n)
    return y
