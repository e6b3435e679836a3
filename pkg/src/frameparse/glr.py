"""Generalized-LR parsing over a graph-structured stack into a packed forest.

The graph-structured stack merges the parallel LR stacks that conflicts
spawn: one node per (state, input position), edges labelled with forest
nodes.  Ambiguity is packed in the forest by (category, span); each
packed node holds the alternative daughter sequences found for it, and
unpacking enumerates exactly the grammar's derivations of the input.

The grammar excludes empty rules after normalization, so every stack
edge spans at least one token and reductions never loop within a
position; a newly added edge only ever re-triggers reductions of the
node that received it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .grammar import END_MARKER, Rule
from .lrtable import LRTable


class ParseError(ValueError):
    """Input token outside the grammar's terminal set."""


@dataclass(frozen=True)
class TreeNode:
    """One node of an unpacked derivation tree.

    Leaves carry the PoS tag and an empty child tuple; internal nodes
    carry the grammar rule that built them.  Spans are half-open token
    intervals.
    """

    rule: Optional[Rule]
    start: int
    end: int
    children: tuple["TreeNode", ...] = ()
    tag: Optional[str] = None

    @property
    def is_leaf(self) -> bool:
        return self.rule is None

    @property
    def label(self) -> str:
        return self.tag if self.rule is None else self.rule.mother.label

    def head_leaf(self) -> "TreeNode":
        """The lexical head reached by following head daughters."""
        node = self
        while node.rule is not None:
            node = node.children[node.rule.head_index]
        return node

    def leftmost_leaf(self) -> "TreeNode":
        node = self
        while node.children:
            node = node.children[0]
        return node

    def leaves(self) -> Iterator["TreeNode"]:
        if self.rule is None:
            yield self
        else:
            for child in self.children:
                yield from child.leaves()

    def iter_nodes(self) -> Iterator["TreeNode"]:
        yield self
        for child in self.children:
            yield from child.iter_nodes()


class ForestNode:
    """Packed node for one (category, span); ambiguity lives in
    ``alternatives``, each a (rule, daughter forest nodes) pair."""

    __slots__ = ("symbol", "start", "end", "leaf", "alternatives", "_alt_keys")

    def __init__(self, symbol: str, start: int, end: int, leaf: bool = False):
        self.symbol = symbol
        self.start = start
        self.end = end
        self.leaf = leaf
        self.alternatives: list[tuple[Rule, tuple["ForestNode", ...]]] = []
        self._alt_keys: set = set()

    def key(self) -> tuple[str, int, int]:
        return (self.symbol, self.start, self.end)

    def add_alternative(self, rule: Rule, children: tuple["ForestNode", ...]) -> bool:
        alt_key = (rule.rule_id, tuple(c.key() for c in children))
        if alt_key in self._alt_keys:
            return False
        self._alt_keys.add(alt_key)
        self.alternatives.append((rule, children))
        return True

    def __repr__(self):
        return "ForestNode(%s, %d, %d, alts=%d)" % (
            self.symbol, self.start, self.end, len(self.alternatives))


@dataclass
class Forest:
    """Packed parse forest; empty (``root is None``) iff the input is out
    of coverage."""

    tokens: tuple[str, ...]
    root: Optional[ForestNode]
    nodes: dict[tuple[str, int, int], ForestNode] = field(default_factory=dict)

    @property
    def is_empty(self) -> bool:
        return self.root is None

    def derivation_count(self) -> int:
        if self.root is None:
            return 0
        memo: dict[tuple, int] = {}

        def count(node: ForestNode) -> int:
            if node.leaf:
                return 1
            key = node.key()
            if key not in memo:
                memo[key] = 0  # grammar is cycle-free; guards malformed input
                total = 0
                for _, children in node.alternatives:
                    product = 1
                    for child in children:
                        product *= count(child)
                    total += product
                memo[key] = total
            return memo[key]

        return count(self.root)

    def all_trees(self) -> list[TreeNode]:
        """Unpack every derivation, in a deterministic order."""
        if self.root is None:
            return []
        memo: dict[tuple, tuple[TreeNode, ...]] = {}

        def unpack(node: ForestNode) -> tuple[TreeNode, ...]:
            key = node.key()
            cached = memo.get(key)
            if cached is not None:
                return cached
            if node.leaf:
                trees: tuple[TreeNode, ...] = (
                    TreeNode(None, node.start, node.end, (), node.symbol),)
            else:
                ordered = sorted(
                    node.alternatives,
                    key=lambda alt: (alt[0].rule_id,
                                     tuple(c.key() for c in alt[1])))
                built = []
                for rule, children in ordered:
                    for combo in itertools.product(*(unpack(c) for c in children)):
                        built.append(TreeNode(rule, node.start, node.end, combo))
                trees = tuple(built)
            memo[key] = trees
            return trees

        return list(unpack(self.root))


class _GssNode:
    __slots__ = ("state", "pos", "edges")

    def __init__(self, state: int, pos: int):
        self.state = state
        self.pos = pos
        # Edges run backwards in the input: (forest label, earlier node).
        self.edges: list[tuple[ForestNode, "_GssNode"]] = []

    def has_edge(self, label: ForestNode, target: "_GssNode") -> bool:
        return any(fn is label and node is target for fn, node in self.edges)


def _paths(node: _GssNode, length: int,
           via: Optional[tuple[ForestNode, _GssNode]]):
    """All backward paths of exactly ``length`` edges from ``node``.

    When ``via`` is given the first step is pinned to that edge, which
    restricts a re-run reduction to paths through a newly added edge.
    Yields (daughter forest nodes left-to-right, path base node).
    """
    results: list[tuple[tuple[ForestNode, ...], _GssNode]] = []

    def walk(current: _GssNode, depth: int, acc: list[ForestNode]) -> None:
        if depth == length:
            results.append((tuple(reversed(acc)), current))
            return
        for label, target in current.edges:
            acc.append(label)
            walk(target, depth + 1, acc)
            acc.pop()

    if via is None:
        walk(node, 0, [])
    else:
        label, target = via
        walk(target, 1, [label])
    return results


def glr_parse(tokens: Sequence[str], table: LRTable) -> Forest:
    """Parse a PoS-tag sequence into a packed forest.

    Unknown terminals raise :class:`ParseError` with the offending
    position; an in-vocabulary sentence outside the grammar's coverage
    yields an empty forest.
    """
    grammar = table.grammar
    for i, tok in enumerate(tokens):
        if tok not in grammar.terminals:
            raise ParseError(f"unknown terminal {tok!r} at index {i}")

    nodes: dict[tuple[str, int, int], ForestNode] = {}

    def forest_node(symbol: str, start: int, end: int, leaf: bool = False) -> ForestNode:
        key = (symbol, start, end)
        node = nodes.get(key)
        if node is None:
            node = ForestNode(symbol, start, end, leaf=leaf)
            nodes[key] = node
        return node

    n = len(tokens)
    frontier: dict[int, _GssNode] = {
        table.start_state: _GssNode(table.start_state, 0)}
    accepted = False

    for i in range(n + 1):
        lookahead = tokens[i] if i < n else END_MARKER
        work: list[tuple[_GssNode, int, Optional[tuple]]] = []
        for state in sorted(frontier):
            node = frontier[state]
            for action in table.actions.get((state, lookahead), ()):
                if action[0] == "reduce":
                    work.append((node, action[1], None))
                elif action[0] == "accept":
                    accepted = True
        cursor = 0
        while cursor < len(work):
            node, rule_id, via = work[cursor]
            cursor += 1
            rule = grammar.rules[rule_id]
            for children, base in _paths(node, len(rule.daughters), via):
                lhs = rule.mother.label
                packed = forest_node(lhs, base.pos, i)
                packed.add_alternative(rule, children)
                target_state = table.gotos[(base.state, lhs)]
                existing = frontier.get(target_state)
                if existing is None:
                    fresh = _GssNode(target_state, i)
                    frontier[target_state] = fresh
                    fresh.edges.append((packed, base))
                    for action in table.actions.get((target_state, lookahead), ()):
                        if action[0] == "reduce":
                            work.append((fresh, action[1], None))
                        elif action[0] == "accept":
                            accepted = True
                elif not existing.has_edge(packed, base):
                    edge = (packed, base)
                    existing.edges.append(edge)
                    for action in table.actions.get((existing.state, lookahead), ()):
                        if action[0] == "reduce":
                            work.append((existing, action[1], edge))
        if i == n:
            break
        leaf = forest_node(lookahead, i, i + 1, leaf=True)
        next_frontier: dict[int, _GssNode] = {}
        for state in sorted(frontier):
            node = frontier[state]
            target = table.shift_target(state, lookahead)
            if target is None:
                continue
            shifted = next_frontier.get(target)
            if shifted is None:
                shifted = _GssNode(target, i + 1)
                next_frontier[target] = shifted
            shifted.edges.append((leaf, node))
        frontier = next_frontier
        if not frontier:
            return Forest(tuple(tokens), None)

    root = nodes.get((grammar.start_symbol, 0, n)) if accepted else None
    return Forest(tuple(tokens), root, nodes if root is not None else {})
