"""Minimal text front end: tokenizer, dictionary PoS tagger, suffix-rule
lemmatizer.

The tagger is a wordlist lookup with two heuristics for unknown words
(capitalised forms become proper nouns, anything else a common noun);
corpora are expected to ship with wordlists that cover them.  The
lemmatizer runs an exception table first and then a small ordered suffix
rule set, iterated to a fixed point so lemmatization is idempotent.
Everything here is pure and safe to use concurrently.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

_TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:['’-][A-Za-z0-9]+)*|[^\sA-Za-z0-9]")

_DOUBLED = set("bdfgklmnprstz")


class WordlistError(ValueError):
    pass


@dataclass(frozen=True)
class Token:
    surface: str
    tag: str
    lemma: str


def tokenize(sentence: str) -> list[str]:
    """Whitespace and punctuation splitting; punctuation tokens are kept."""
    return _TOKEN_RE.findall(sentence)


@dataclass(frozen=True)
class Wordlist:
    """Surface form to PoS tags; the first listed tag is the single-best
    choice."""

    tags: Mapping[str, tuple[str, ...]]

    def lookup(self, surface: str) -> Optional[tuple[str, ...]]:
        found = self.tags.get(surface)
        if found is None:
            found = self.tags.get(surface.lower())
        return found

    def all_tags(self) -> set[str]:
        return {tag for tags in self.tags.values() for tag in tags}


def parse_wordlist(text: str) -> Wordlist:
    """Parse ``surface<TAB>tag[,tag...]`` lines."""
    table: dict[str, tuple[str, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise WordlistError(f"line {lineno}: expected surface<TAB>tags")
        surface, tag_text = fields
        tags = tuple(t.strip() for t in tag_text.split(",") if t.strip())
        if not tags:
            raise WordlistError(f"line {lineno}: no tags for {surface!r}")
        if surface in table:
            raise WordlistError(f"line {lineno}: duplicate entry {surface!r}")
        table[surface] = tags
    return Wordlist(table)


def load_wordlist(path) -> Wordlist:
    return parse_wordlist(Path(path).read_text(encoding="utf-8"))


def load_lemma_exceptions(path) -> dict[tuple[str, str], str]:
    """Read ``surface<TAB>tag<TAB>lemma`` lines, keyed on the lowercased
    surface form."""
    table: dict[tuple[str, str], str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise WordlistError(f"line {lineno}: expected surface, tag, lemma")
        table[(fields[0].lower(), fields[1])] = fields[2]
    return table


def _undouble(stem: str) -> str:
    if len(stem) >= 2 and stem[-1] == stem[-2] and stem[-1] in _DOUBLED:
        return stem[:-1]
    return stem


def _apply_suffix_rules(word: str) -> tuple[str, Optional[str]]:
    """One pass of the ordered suffix rules; returns (result, rule name)."""
    if word.endswith("ies") and len(word) >= 5:
        return word[:-3] + "y", "ies->y"
    for suffix in ("ches", "shes", "xes", "ses", "zes", "oes"):
        if word.endswith(suffix) and len(word) - 2 >= 2:
            return word[:-2], "es->"
    if word.endswith("s") and not word.endswith("ss") and len(word) - 1 >= 3:
        return word[:-1], "s->"
    if word.endswith("eed"):
        return word[:-1], "eed->ee"
    if word.endswith("ied") and len(word) >= 5:
        return word[:-3] + "y", "ied->y"
    if word.endswith("ed") and len(word) - 2 >= 3:
        return _undouble(word[:-2]), "ed->"
    if word.endswith("ing") and len(word) - 3 >= 3:
        return _undouble(word[:-3]), "ing->"
    return word, None


@dataclass(frozen=True)
class Lemmatizer:
    """Exception table first, then suffix rules for the configured noun
    and verb tags; identity elsewhere.  Lowercases everything except
    proper nouns."""

    exceptions: Mapping[tuple[str, str], str] = field(default_factory=dict)
    suffix_tags: frozenset[str] = frozenset({"v", "n"})
    proper_tags: frozenset[str] = frozenset({"pn"})

    def lemmatize(self, surface: str, tag: str) -> str:
        if not surface:
            return surface
        if tag in self.proper_tags:
            return self.exceptions.get((surface.lower(), tag), surface)
        word = surface.lower()
        if tag not in self.suffix_tags:
            return self.exceptions.get((word, tag), word)
        while True:
            exception = self.exceptions.get((word, tag))
            if exception is not None:
                return exception
            stripped, rule = _apply_suffix_rules(word)
            if rule is None or stripped == word:
                return word
            word = stripped

    def trace(self, surface: str, tag: str) -> list[str]:
        """The rule applications lemmatization would perform, for
        diagnosing the interplay of rules and exceptions."""
        steps: list[str] = []
        if tag in self.proper_tags or not surface:
            return steps
        word = surface.lower()
        if tag not in self.suffix_tags:
            return steps
        while True:
            if (word, tag) in self.exceptions:
                steps.append("exception")
                return steps
            stripped, rule = _apply_suffix_rules(word)
            if rule is None or stripped == word:
                return steps
            steps.append(rule)
            word = stripped


_DEFAULT_LEMMATIZER = Lemmatizer()


def lemmatize(surface: str, tag: str,
              lemmatizer: Optional[Lemmatizer] = None) -> str:
    return (lemmatizer or _DEFAULT_LEMMATIZER).lemmatize(surface, tag)


def tag_tokens(words: Sequence[str], wordlist: Wordlist,
               lemmatizer: Optional[Lemmatizer] = None,
               proper_tag: str = "pn", common_tag: str = "n") -> list[Token]:
    """Single-best tagging: the first listed tag, or the unknown-word
    heuristics."""
    lem = lemmatizer or _DEFAULT_LEMMATIZER
    tokens = []
    for word in words:
        listed = wordlist.lookup(word)
        if listed:
            tag = listed[0]
        elif word[:1].isupper():
            tag = proper_tag
        else:
            tag = common_tag
        tokens.append(Token(word, tag, lem.lemmatize(word, tag)))
    return tokens


def expand_tag_sequences(words: Sequence[str], wordlist: Wordlist,
                         lemmatizer: Optional[Lemmatizer] = None,
                         limit: int = 16,
                         proper_tag: str = "pn",
                         common_tag: str = "n") -> list[list[Token]]:
    """Ambiguous tagging: one sequence per combination of listed tags,
    bounded by ``limit``; combinations beyond the bound are dropped in
    enumeration order."""
    lem = lemmatizer or _DEFAULT_LEMMATIZER
    per_word: list[tuple[str, ...]] = []
    for word in words:
        listed = wordlist.lookup(word)
        if listed:
            per_word.append(listed)
        elif word[:1].isupper():
            per_word.append((proper_tag,))
        else:
            per_word.append((common_tag,))
    sequences = []
    for combo in itertools.islice(itertools.product(*per_word), limit):
        sequences.append([Token(w, t, lem.lemmatize(w, t))
                          for w, t in zip(words, combo)])
    return sequences
