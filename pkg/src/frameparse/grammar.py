"""Phrase-structure grammars with head marking, an argument/adjunct
distinction, VSUBCAT features on verbal rules, and grammatical-relation
emission templates.

The backbone is context-free.  Rules whose mother label equals the head
daughter's label are adjunct rules (Chomsky-adjunction to a maximal
projection); every other rule is an argument rule.  A verbal argument
rule (lexical verb head) carries a VSUBCAT feature naming the complement
frame it consumes.

Grammars are immutable after loading and safe to share across concurrent
parser instances; loading itself is single-threaded.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .frames import DEFAULT_FRAME_INVENTORY
from .grs import RELATION_SLOTS

LEXICAL = "lexical"
X1 = "X1"
XP = "XP"

ARGUMENT = "argument"
ADJUNCT = "adjunct"

ONE = "one"
OPTIONAL = "optional"
STAR = "star"
PLUS = "plus"

# Symbols starting with "@" are reserved: Kleene expansion mints helper
# non-terminals under this prefix and evaluation excludes their brackets.
HELPER_PREFIX = "@"
END_MARKER = "@$"

_SYMBOL_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_']*$")
_TEMPLATE_RE = re.compile(r"^([a-z_0-9]+)\s*\(\s*(.*?)\s*\)$")


class GrammarError(ValueError):
    """Malformed grammar text or an inconsistent grammar."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def bar_level_of(label: str, terminals: Iterable[str]) -> str:
    if label in terminals:
        return LEXICAL
    if label.endswith("1"):
        return X1
    return XP


@dataclass(frozen=True)
class Category:
    label: str
    bar_level: str
    features: tuple[tuple[str, str], ...] = ()

    def feature(self, name: str) -> Optional[str]:
        for key, value in self.features:
            if key == name:
                return value
        return None


@dataclass(frozen=True)
class DaughterSpec:
    category: Category
    repetition: str = ONE


@dataclass(frozen=True)
class SlotRef:
    """One template slot: a daughter index (1-based), the node's own head
    word (``self``), the matrix subject (``control``), a quoted literal,
    or unspecified."""

    kind: str  # "daughter" | "self" | "control" | "literal" | "none"
    value: object = None

    def render(self) -> str:
        if self.kind == "daughter":
            return str(self.value)
        if self.kind == "literal":
            return '"%s"' % self.value
        if self.kind == "none":
            return "_"
        return self.kind


SLOT_NONE = SlotRef("none")
SLOT_SELF = SlotRef("self")
SLOT_CONTROL = SlotRef("control")


@dataclass(frozen=True)
class GRTemplate:
    relation: str
    type_slot: SlotRef = SLOT_NONE
    head_slot: SlotRef = SLOT_SELF
    dependent_slot: SlotRef = SLOT_NONE
    initial_slot: SlotRef = SLOT_NONE

    def daughter_refs(self) -> list[int]:
        return [s.value for s in (self.type_slot, self.head_slot,
                                  self.dependent_slot, self.initial_slot)
                if s.kind == "daughter"]

    def render(self) -> str:
        return "gr: %s(%s, %s, %s, %s)" % (
            self.relation, self.type_slot.render(), self.head_slot.render(),
            self.dependent_slot.render(), self.initial_slot.render())


@dataclass(frozen=True)
class Rule:
    mother: Category
    daughters: tuple[DaughterSpec, ...]
    head_index: int  # 0-based
    gr_templates: tuple[GRTemplate, ...] = ()
    rule_id: int = -1
    line: Optional[int] = field(default=None, compare=False)

    @property
    def kind(self) -> str:
        head = self.daughters[self.head_index].category
        return ADJUNCT if self.mother.label == head.label else ARGUMENT

    @property
    def head_daughter(self) -> Category:
        return self.daughters[self.head_index].category

    def daughter_labels(self) -> tuple[str, ...]:
        return tuple(d.category.label for d in self.daughters)

    def has_repetition(self) -> bool:
        return any(d.repetition != ONE for d in self.daughters)

    def render(self) -> str:
        parts = []
        for i, d in enumerate(self.daughters):
            token = d.category.label
            if d.repetition == OPTIONAL:
                token += "?"
            elif d.repetition == STAR:
                token += "*"
            elif d.repetition == PLUS:
                token += "+"
            if i == self.head_index:
                token += "(head)"
            parts.append(token)
        text = "%s -> %s" % (self.mother.label, " ".join(parts))
        if self.mother.features:
            feats = ", ".join("%s=%s" % kv for kv in self.mother.features)
            text += " : " + feats
        for tpl in self.gr_templates:
            text += " | " + tpl.render()
        return text


@dataclass(frozen=True)
class Grammar:
    rules: tuple[Rule, ...]
    start_symbol: str
    terminals: frozenset[str]
    verb_tags: frozenset[str] = frozenset()

    @cached_property
    def nonterminals(self) -> frozenset[str]:
        return frozenset(r.mother.label for r in self.rules)

    @cached_property
    def shape_index(self) -> dict[tuple[str, tuple[str, ...]], Rule]:
        return {(r.mother.label, r.daughter_labels()): r for r in self.rules}

    @cached_property
    def rules_by_lhs(self) -> dict[str, tuple[Rule, ...]]:
        grouped: dict[str, list[Rule]] = {}
        for r in self.rules:
            grouped.setdefault(r.mother.label, []).append(r)
        return {k: tuple(v) for k, v in grouped.items()}

    def has_repetition(self) -> bool:
        return any(r.has_repetition() for r in self.rules)

    def rule_by_shape(self, mother: str, daughters: Sequence[str]) -> Optional[Rule]:
        return self.shape_index.get((mother, tuple(daughters)))

    def verb_frame_gaps(self) -> list[Rule]:
        """Verbal argument rules carrying no VSUBCAT feature.

        An empty list is the expected state of a lexicalised grammar;
        rules listed here contribute no frame instances at parse time.
        """
        gaps = []
        for rule in self.rules:
            if rule.kind != ARGUMENT:
                continue
            head = rule.head_daughter
            if head.bar_level == LEXICAL and head.label in self.verb_tags \
                    and rule.mother.feature("VSUBCAT") is None:
                gaps.append(rule)
        return gaps


def vsubcat_of(rule: Rule) -> Optional[str]:
    """The complement frame a verbal argument rule assigns to its verb.

    Absent for adjunct rules, for rules whose head is phrasal, and for
    rules carrying no VSUBCAT feature.
    """
    if rule.kind != ARGUMENT:
        return None
    if rule.head_daughter.bar_level != LEXICAL:
        return None
    return rule.mother.feature("VSUBCAT")


def _check_symbol(name: str, line: Optional[int]) -> str:
    if not _SYMBOL_RE.match(name):
        raise GrammarError(f"invalid symbol {name!r}", line)
    return name


def _parse_slot(text: str, line: int, n_daughters: int,
                allow_control: bool) -> SlotRef:
    text = text.strip()
    if text == "_":
        return SLOT_NONE
    if text == "self":
        return SLOT_SELF
    if text == "control":
        if not allow_control:
            raise GrammarError("'control' is only valid in the dependent slot", line)
        return SLOT_CONTROL
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        return SlotRef("literal", text[1:-1])
    if text.isdigit():
        index = int(text)
        if not 1 <= index <= n_daughters:
            raise GrammarError(f"template daughter index {index} out of range", line)
        return SlotRef("daughter", index)
    raise GrammarError(f"cannot parse template slot {text!r}", line)


def _parse_template(section: str, line: int, n_daughters: int) -> GRTemplate:
    body = section[len("gr:"):].strip()
    m = _TEMPLATE_RE.match(body)
    if not m:
        raise GrammarError(f"cannot parse GR template {body!r}", line)
    relation, argtext = m.group(1), m.group(2)
    if relation not in RELATION_SLOTS:
        raise GrammarError(f"unknown GR relation {relation!r}", line)
    args = [a for a in (p.strip() for p in argtext.split(",")) if a != ""]
    if len(args) not in (3, 4):
        raise GrammarError(
            f"GR template takes type, head, dependent[, initial]: {body!r}", line)
    type_slot = _parse_slot(args[0], line, n_daughters, False)
    head_slot = _parse_slot(args[1], line, n_daughters, False)
    dep_slot = _parse_slot(args[2], line, n_daughters, True)
    init_slot = _parse_slot(args[3], line, n_daughters, False) if len(args) == 4 \
        else SLOT_NONE
    if head_slot.kind not in ("daughter", "self"):
        raise GrammarError("template head slot must be a daughter index or 'self'", line)
    if dep_slot.kind not in ("daughter", "control"):
        raise GrammarError(
            "template dependent slot must be a daughter index or 'control'", line)
    return GRTemplate(relation, type_slot, head_slot, dep_slot, init_slot)


_DAUGHTER_RE = re.compile(r"^(?P<name>[^()*+?\s]+)(?P<rep>[*+?])?(?P<head>\(head\))?$")


def _parse_rule_line(line_text: str, line: int):
    sections = [s.strip() for s in line_text.split("|")]
    main = sections[0]
    if "->" not in main:
        raise GrammarError(f"expected 'Mother -> daughters': {main!r}", line)
    lhs_text, rhs_text = main.split("->", 1)
    mother = _check_symbol(lhs_text.strip(), line)
    if ":" in rhs_text:
        daughters_text, feat_text = rhs_text.split(":", 1)
    else:
        daughters_text, feat_text = rhs_text, ""
    tokens = daughters_text.split()
    if not tokens:
        raise GrammarError("rule has no daughters (empty rules are not allowed)", line)
    daughters = []
    head_index = None
    for i, token in enumerate(tokens):
        m = _DAUGHTER_RE.match(token)
        if not m:
            raise GrammarError(f"cannot parse daughter {token!r}", line)
        name = _check_symbol(m.group("name"), line)
        rep = {None: ONE, "?": OPTIONAL, "*": STAR, "+": PLUS}[m.group("rep")]
        if m.group("head"):
            if head_index is not None:
                raise GrammarError("more than one daughter marked (head)", line)
            if rep != ONE:
                raise GrammarError("the head daughter cannot carry a repetition marker",
                                   line)
            head_index = i
        daughters.append((name, rep))
    if head_index is None:
        if len(daughters) == 1:
            head_index = 0
        else:
            raise GrammarError("no daughter marked (head)", line)
    features = []
    if feat_text.strip():
        for part in feat_text.split(","):
            if "=" not in part:
                raise GrammarError(f"cannot parse feature {part.strip()!r}", line)
            key, value = (p.strip() for p in part.split("=", 1))
            if not key or not value:
                raise GrammarError(f"cannot parse feature {part.strip()!r}", line)
            features.append((key, value))
    templates = []
    for section in sections[1:]:
        if not section.startswith("gr:"):
            raise GrammarError(f"expected 'gr: ...' after '|': {section!r}", line)
        templates.append(_parse_template(section, line, len(daughters)))
    return mother, daughters, head_index, tuple(features), tuple(templates)


def parse_grammar(text: str,
                  frame_inventory: Sequence[str] = DEFAULT_FRAME_INVENTORY) -> Grammar:
    """Parse a grammar file.

    The format is line-oriented UTF-8 with ``#`` comments:

    .. code-block:: text

        terminals: det n v prep to
        verbs: v
        start: S
        S  -> NP VP(head)                       | gr: ncsubj(_, 2, 1, _)
        VP -> v(head) NP : VSUBCAT=NP           | gr: dobj(_, self, 2, _)
        NP -> det n(head)
        NP -> NP(head) PP
        NP -> pn+ pn(head)

    Kleene markers (``?``, ``*``, ``+``) are preserved; run
    :func:`normalize_kleene` before building parse tables.
    """
    terminals: Optional[list[str]] = None
    start: Optional[str] = None
    verb_tags: list[str] = []
    raw_rules = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("terminals:"):
            terminals = [_check_symbol(s, lineno) for s in line[10:].split()]
            if not terminals:
                raise GrammarError("empty terminals declaration", lineno)
        elif line.startswith("start:"):
            start = _check_symbol(line[6:].strip(), lineno)
        elif line.startswith("verbs:"):
            verb_tags = [_check_symbol(s, lineno) for s in line[6:].split()]
        elif "->" in line:
            raw_rules.append((lineno, _parse_rule_line(line, lineno)))
        else:
            raise GrammarError(f"unrecognised line: {line!r}", lineno)
    if terminals is None:
        raise GrammarError("missing 'terminals:' declaration")
    if start is None:
        raise GrammarError("missing 'start:' declaration")
    if not raw_rules:
        raise GrammarError("grammar has no rules")

    terminal_set = frozenset(terminals)
    nonterminals = frozenset(mother for _, (mother, *_rest) in raw_rules)
    rules = []
    for lineno, (mother, daughters, head_index, features, templates) in raw_rules:
        if mother in terminal_set:
            raise GrammarError(f"terminal {mother!r} on a left-hand side", lineno)
        mother_cat = Category(mother, bar_level_of(mother, terminal_set), features)
        specs = []
        for name, rep in daughters:
            if name not in terminal_set and name not in nonterminals:
                raise GrammarError(f"undeclared symbol {name!r}", lineno)
            specs.append(DaughterSpec(Category(name, bar_level_of(name, terminal_set)),
                                      rep))
        rules.append(Rule(mother_cat, tuple(specs), head_index, templates,
                          rule_id=len(rules), line=lineno))
    grammar = Grammar(tuple(rules), start, terminal_set, frozenset(verb_tags))
    _validate(grammar, frame_inventory, check_cycles=not grammar.has_repetition())
    return grammar


def load_grammar(path, frame_inventory: Sequence[str] = DEFAULT_FRAME_INVENTORY) -> Grammar:
    with open(path, encoding="utf-8") as handle:
        return parse_grammar(handle.read(), frame_inventory)


def render_grammar(grammar: Grammar) -> str:
    """Render back to grammar-file text; re-parsing yields an equal grammar."""
    lines = ["terminals: " + " ".join(sorted(grammar.terminals))]
    if grammar.verb_tags:
        lines.append("verbs: " + " ".join(sorted(grammar.verb_tags)))
    lines.append("start: " + grammar.start_symbol)
    lines.extend(rule.render() for rule in grammar.rules)
    return "\n".join(lines) + "\n"


def _validate(grammar: Grammar, frame_inventory: Optional[Sequence[str]],
              check_cycles: bool) -> None:
    inventory = None if frame_inventory is None else frozenset(frame_inventory)
    if grammar.start_symbol not in grammar.nonterminals:
        raise GrammarError(f"start symbol {grammar.start_symbol!r} has no rule")
    seen_shapes: dict[tuple, int] = {}
    for rule in grammar.rules:
        shape = (rule.mother.label,
                 tuple((d.category.label, d.repetition) for d in rule.daughters))
        if shape in seen_shapes:
            raise GrammarError(
                f"duplicate rule {rule.mother.label} -> "
                f"{' '.join(rule.daughter_labels())}", rule.line)
        seen_shapes[shape] = rule.rule_id
        if not 0 <= rule.head_index < len(rule.daughters):
            raise GrammarError("head index out of range", rule.line)
        vsubcat = rule.mother.feature("VSUBCAT")
        if vsubcat is not None and inventory is not None and vsubcat not in inventory:
            raise GrammarError(f"unknown VSUBCAT value {vsubcat!r}", rule.line)
        for tpl in rule.gr_templates:
            for index in tpl.daughter_refs():
                if not 1 <= index <= len(rule.daughters):
                    raise GrammarError(
                        f"template daughter index {index} out of range", rule.line)
    if check_cycles:
        _check_cycle_free(grammar)


def _check_cycle_free(grammar: Grammar) -> None:
    # Without empty rules, A =>+ A is only possible through unit-rule chains.
    edges: dict[str, set[str]] = {}
    for rule in grammar.rules:
        if len(rule.daughters) == 1:
            child = rule.daughters[0].category.label
            if child in grammar.nonterminals:
                edges.setdefault(rule.mother.label, set()).add(child)
    state: dict[str, int] = {}

    def visit(node: str, trail: list[str]) -> None:
        state[node] = 1
        for nxt in sorted(edges.get(node, ())):
            if state.get(nxt) == 1:
                cycle = " -> ".join(trail + [node, nxt])
                raise GrammarError(f"grammar has a derivation cycle: {cycle}")
            if nxt not in state:
                visit(nxt, trail + [node])
        state[node] = 2

    for label in sorted(edges):
        if label not in state:
            visit(label, [])


def _remap_template(tpl: GRTemplate, index_map: dict[int, int]) -> Optional[GRTemplate]:
    slots = {}
    for name, slot in (("type_slot", tpl.type_slot), ("head_slot", tpl.head_slot),
                       ("dependent_slot", tpl.dependent_slot),
                       ("initial_slot", tpl.initial_slot)):
        if slot.kind == "daughter":
            if slot.value not in index_map:
                return None  # references an omitted optional daughter
            slots[name] = SlotRef("daughter", index_map[slot.value])
        else:
            slots[name] = slot
    return GRTemplate(tpl.relation, **slots)


def normalize_kleene(grammar: Grammar) -> Grammar:
    """Expand repetition markers into plain rules.

    ``X -> a B* c`` becomes ``X -> a c`` and ``X -> a @rep_B c`` with the
    right-recursive helper ``@rep_B -> B | B @rep_B``; ``+`` keeps only
    the helper variant and ``?`` expands into a rule pair.  No empty
    rules are introduced, expansion variants that collapse to the unit
    cycle ``X -> X`` are dropped, and the string language is preserved.
    Normalising an already-normalised grammar returns it unchanged.
    """
    if not grammar.has_repetition():
        return grammar
    helper_labels: dict[str, Category] = {}
    new_rules: list[Rule] = []
    seen: dict[tuple, Rule] = {}

    def helper_for(category: Category) -> Category:
        label = f"@rep_{category.label}"
        if label not in helper_labels:
            helper_labels[label] = category
        return Category(label, XP)

    def emit(rule: Rule) -> None:
        shape = (rule.mother, rule.daughter_labels(), rule.head_index)
        prior = seen.get(shape)
        if prior is not None:
            if (prior.gr_templates, prior.mother.features) != \
                    (rule.gr_templates, rule.mother.features):
                raise GrammarError(
                    f"Kleene expansion produced conflicting duplicates of "
                    f"{rule.mother.label} -> {' '.join(rule.daughter_labels())}",
                    rule.line)
            return
        final = Rule(rule.mother, rule.daughters, rule.head_index,
                     rule.gr_templates, rule_id=len(new_rules), line=rule.line)
        seen[shape] = final
        new_rules.append(final)

    for rule in grammar.rules:
        # Each daughter contributes its expansion choices; the cross
        # product enumerates the marker-free variants of the rule.
        choices: list[list[Optional[DaughterSpec]]] = []
        for spec in rule.daughters:
            plain = DaughterSpec(spec.category, ONE)
            if spec.repetition == ONE:
                choices.append([plain])
            elif spec.repetition == OPTIONAL:
                choices.append([None, plain])
            elif spec.repetition == STAR:
                choices.append([None, DaughterSpec(helper_for(spec.category), ONE)])
            else:  # PLUS
                choices.append([DaughterSpec(helper_for(spec.category), ONE)])
        variants: list[list[Optional[DaughterSpec]]] = [[]]
        for options in choices:
            variants = [prefix + [opt] for prefix in variants for opt in options]
        for variant in variants:
            index_map = {}
            daughters = []
            for old_index, spec in enumerate(variant, 1):
                if spec is not None:
                    daughters.append(spec)
                    index_map[old_index] = len(daughters)
            if len(daughters) == 1 and daughters[0].category.label == rule.mother.label:
                continue  # unit self-cycle adds nothing to the language
            head_index = index_map[rule.head_index + 1] - 1
            templates = tuple(t for t in
                              (_remap_template(tpl, index_map)
                               for tpl in rule.gr_templates)
                              if t is not None)
            emit(Rule(rule.mother, tuple(daughters), head_index, templates,
                      line=rule.line))
    for label in sorted(helper_labels):
        base = helper_labels[label]
        mother = Category(label, XP)
        emit(Rule(mother, (DaughterSpec(base),), 0))
        emit(Rule(mother, (DaughterSpec(base), DaughterSpec(Category(label, XP))), 0))
    normalized = Grammar(tuple(new_rules), grammar.start_symbol, grammar.terminals,
                         grammar.verb_tags)
    # VSUBCAT membership was checked when the surface grammar was parsed.
    _validate(normalized, None, check_cycles=True)
    return normalized
