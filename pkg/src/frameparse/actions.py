"""Probabilistic model over LR parse actions.

Actions are conditioned on (state, lookahead) and normalized within that
class; training accumulates counts along the unique action trace of each
gold tree and probabilities are add-1-smoothed relative frequencies, so
an untrained model is uniform within every class.  Scores are kept in
log space throughout.

The action trace of a derivation is a deterministic function of its tree
given the table (shifts in leaf order, each reduce as soon as its
daughters are complete), which is also how gold treebank trees are
turned into training events.  Replaying a trace against the same table
reconstructs the tree.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .grammar import END_MARKER
from .glr import Forest, TreeNode
from .lrtable import LRTable, action_sort_key, parse_action, render_action


class UnderivableTreeError(ValueError):
    """A gold tree that the grammar/table cannot derive."""


def tree_actions(tree: TreeNode, table: LRTable) -> tuple[tuple[int, str, tuple], ...]:
    """The (state, lookahead, action) trace that builds ``tree``."""
    ops: list[tuple] = []

    def linearize(node: TreeNode) -> None:
        if node.is_leaf:
            ops.append(("shift", node.tag))
            return
        for child in node.children:
            linearize(child)
        ops.append(("reduce", node.rule))

    linearize(tree)
    tags = [leaf.tag for leaf in tree.leaves()]
    states = [table.start_state]
    trace: list[tuple[int, str, tuple]] = []
    consumed = 0
    for op in ops:
        state = states[-1]
        if op[0] == "shift":
            lookahead = op[1]
            target = table.shift_target(state, lookahead)
            if target is None:
                raise UnderivableTreeError(
                    f"no shift on {lookahead!r} from state {state}")
            trace.append((state, lookahead, ("shift", target)))
            states.append(target)
            consumed += 1
        else:
            rule = op[1]
            lookahead = tags[consumed] if consumed < len(tags) else END_MARKER
            action = ("reduce", rule.rule_id)
            if action not in table.actions.get((state, lookahead), ()):
                raise UnderivableTreeError(
                    f"no reduce by rule {rule.rule_id} "
                    f"({rule.mother.label} -> {' '.join(rule.daughter_labels())}) "
                    f"in state {state} on {lookahead!r}")
            trace.append((state, lookahead, action))
            del states[len(states) - len(rule.daughters):]
            goto = table.gotos.get((states[-1], rule.mother.label))
            if goto is None:
                raise UnderivableTreeError(
                    f"no goto on {rule.mother.label!r} from state {states[-1]}")
            states.append(goto)
    state = states[-1]
    if ("accept",) not in table.actions.get((state, END_MARKER), ()):
        raise UnderivableTreeError(f"state {state} does not accept at end of input")
    trace.append((state, END_MARKER, ("accept",)))
    return tuple(trace)


def replay_actions(trace: Sequence[tuple[int, str, tuple]],
                   table: LRTable) -> TreeNode:
    """Rebuild the tree a trace describes; inverse of :func:`tree_actions`."""
    stack: list[TreeNode] = []
    position = 0
    for _state, _lookahead, action in trace:
        if action[0] == "shift":
            stack.append(TreeNode(None, position, position + 1, (), _lookahead))
            position += 1
        elif action[0] == "reduce":
            rule = table.grammar.rules[action[1]]
            arity = len(rule.daughters)
            children = tuple(stack[len(stack) - arity:])
            del stack[len(stack) - arity:]
            stack.append(TreeNode(rule, children[0].start, children[-1].end, children))
    if len(stack) != 1:
        raise UnderivableTreeError("trace does not reduce to a single tree")
    return stack[0]


def trace_sort_key(trace: Sequence[tuple[int, str, tuple]]) -> tuple:
    """Deterministic tie-break for equal scores: lexicographic over the
    trace under the fixed action order (shift < reduce, lower rule id
    first)."""
    return tuple(action_sort_key(action) for _, _, action in trace)


@dataclass(frozen=True)
class Derivation:
    """A single parse tree plus the action trace that built it."""

    tree: TreeNode
    actions: tuple[tuple[int, str, tuple], ...]


class ActionModel:
    """Trained action distributions bound to the table they condition on.

    Immutable in use: training happens through the constructor or
    :meth:`from_traces`, after which instances are safely shared across
    concurrent parses.
    """

    def __init__(self, table: LRTable,
                 counts: dict[tuple[int, str], Counter] | None = None):
        self.table = table
        self.counts: dict[tuple[int, str], Counter] = {}
        if counts:
            for key, counter in counts.items():
                if key not in table.actions:
                    raise ValueError(
                        f"model/table mismatch: no actions for state {key[0]} "
                        f"on {key[1]!r}")
                available = set(table.actions[key])
                kept = Counter()
                for action, count in counter.items():
                    if action not in available:
                        raise ValueError(
                            f"model/table mismatch: action {render_action(action)} "
                            f"unavailable in state {key[0]} on {key[1]!r}")
                    if count:
                        kept[action] = count
                if kept:
                    self.counts[key] = kept
        # Floor used for (state, lookahead) pairs outside the table, so
        # scoring foreign traces degrades instead of failing.
        total_available = sum(len(v) for v in table.actions.values())
        self._floor = 1.0 / (1 + total_available)

    @classmethod
    def from_traces(cls, traces: Iterable[Sequence[tuple[int, str, tuple]]],
                    table: LRTable) -> "ActionModel":
        counts: dict[tuple[int, str], Counter] = {}
        for trace in traces:
            for state, lookahead, action in trace:
                counts.setdefault((state, lookahead), Counter())[action] += 1
        return cls(table, counts)

    def prob(self, state: int, lookahead: str, action: tuple) -> float:
        available = self.table.actions.get((state, lookahead))
        if not available:
            return self._floor
        class_counts = self.counts.get((state, lookahead))
        total = sum(class_counts.values()) if class_counts else 0
        count = class_counts.get(action, 0) if class_counts else 0
        return (count + 1) / (total + len(available))

    def logprob(self, state: int, lookahead: str, action: tuple) -> float:
        return math.log(self.prob(state, lookahead, action))

    def trace_logprob(self, trace: Sequence[tuple[int, str, tuple]]) -> float:
        return sum(self.logprob(*step) for step in trace)

    def distribution(self, state: int, lookahead: str) -> dict[tuple, float]:
        available = self.table.actions.get((state, lookahead), ())
        return {action: self.prob(state, lookahead, action) for action in available}

    def classes(self) -> list[tuple[int, str]]:
        return sorted(self.table.actions)


def train_actions(trees: Iterable[TreeNode], table: LRTable) -> ActionModel:
    """Train from gold derivation trees; underivable trees raise
    :class:`UnderivableTreeError` naming the sentence index."""
    traces = []
    for index, tree in enumerate(trees):
        try:
            traces.append(tree_actions(tree, table))
        except UnderivableTreeError as exc:
            raise UnderivableTreeError(f"sentence {index}: {exc}") from exc
    return ActionModel.from_traces(traces, table)


def derivation_logprob(derivation: Derivation, model: ActionModel) -> float:
    """Sum of log action probabilities along the derivation's trace."""
    return model.trace_logprob(derivation.actions)


def unpack_n_best(forest: Forest, model: ActionModel,
                  n: int) -> list[tuple[Derivation, float]]:
    """The ``min(n, total)`` most probable derivations, descending, with
    ties broken by :func:`trace_sort_key`."""
    grammar = model.table.grammar
    scored = []
    for tree in forest.all_trees():
        if tree.rule is not None and (
                tree.rule.rule_id >= len(grammar.rules)
                or grammar.rules[tree.rule.rule_id] is not tree.rule):
            raise ValueError("model/table mismatch: forest built from a "
                             "different grammar")
        trace = tree_actions(tree, model.table)
        scored.append((Derivation(tree, trace), model.trace_logprob(trace)))
    scored.sort(key=lambda pair: (-pair[1], trace_sort_key(pair[0].actions)))
    return scored[:n] if n is not None else scored


def save_model(model: ActionModel, path) -> None:
    """Persist as ``state<TAB>lookahead<TAB>action<TAB>count<TAB>prob``.

    Every action available in the table is written, including unseen
    ones, so the file alone determines the distributions.
    """
    lines = []
    for state, lookahead in model.classes():
        for action in model.table.actions[(state, lookahead)]:
            count = model.counts.get((state, lookahead), {}).get(action, 0)
            prob = model.prob(state, lookahead, action)
            lines.append("%d\t%s\t%s\t%d\t%.10f" % (
                state, lookahead, render_action(action), count, prob))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path, table: LRTable) -> ActionModel:
    """Load a persisted model and bind it to ``table``.

    Stored probabilities are recomputed from the counts and must agree
    within 1e-6; states, lookaheads and actions must exist in the table.
    """
    counts: dict[tuple[int, str], Counter] = {}
    stored: list[tuple[int, str, tuple, float]] = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 5:
            raise ValueError(f"line {lineno}: expected 5 tab-separated fields")
        state = int(fields[0])
        lookahead = fields[1]
        action = parse_action(fields[2])
        count = int(fields[3])
        if count < 0:
            raise ValueError(f"line {lineno}: negative count")
        if state >= table.n_states:
            raise ValueError(
                f"line {lineno}: model/table mismatch: state {state} out of range")
        if count:
            counts.setdefault((state, lookahead), Counter())[action] += count
        stored.append((state, lookahead, action, float(fields[4])))
    model = ActionModel(table, counts)
    for state, lookahead, action, prob in stored:
        recomputed = model.prob(state, lookahead, action)
        if abs(recomputed - prob) > 1e-6:
            raise ValueError(
                f"stored probability {prob} for state {state} on {lookahead!r} "
                f"disagrees with recomputed {recomputed:.10f}")
    return model
