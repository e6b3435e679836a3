"""End-to-end parser pipeline: tokenize, tag, parse, rank.

Bundles the immutable components (grammar, table, action model,
wordlist, lemmatizer, optional frame lexicon) behind one object so the
CLI, acquisition, and evaluation drive the same code path.  Distinct
sentences may be analyzed concurrently; a single analysis is sequential.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .actions import ActionModel, unpack_n_best
from .glr import Forest, glr_parse
from .grammar import Grammar, normalize_kleene
from .lexicon import SubcatLexicon
from .lrtable import LRTable, build_table
from .preprocess import Lemmatizer, Token, Wordlist, tag_tokens
from .rerank import RankedAnalysis, rank_analyses


@dataclass
class SentenceResult:
    """Ranked analyses for one sentence; empty iff out of coverage."""

    sentence: str
    tokens: list[Token]
    analyses: list[RankedAnalysis]

    @property
    def in_coverage(self) -> bool:
        return bool(self.analyses)


class ParserPipeline:
    def __init__(self, grammar: Grammar, table: Optional[LRTable] = None,
                 model: Optional[ActionModel] = None,
                 wordlist: Optional[Wordlist] = None,
                 lemmatizer: Optional[Lemmatizer] = None,
                 lexicon: Optional[SubcatLexicon] = None,
                 proper_tag: str = "pn", common_tag: str = "n"):
        normalized = normalize_kleene(grammar)
        if table is not None:
            if table.grammar != normalized:
                raise ValueError("table was not built from this grammar")
            # Adopt the table's grammar so rule identity is shared with
            # the forest nodes the table produces.
            self.grammar = table.grammar
            self.table = table
        else:
            self.grammar = normalized
            self.table = build_table(normalized)
        # An untrained model is uniform within every class, so a pipeline
        # without a model still ranks deterministically.
        self.model = model if model is not None else ActionModel(self.table)
        self.wordlist = wordlist if wordlist is not None else Wordlist({})
        self.lemmatizer = lemmatizer if lemmatizer is not None else Lemmatizer()
        self.lexicon = lexicon
        self.proper_tag = proper_tag
        self.common_tag = common_tag
        for tag in self.wordlist.all_tags() | {proper_tag, common_tag}:
            if tag not in self.grammar.terminals:
                raise ValueError(
                    f"wordlist tag {tag!r} is not a grammar terminal")

    def tag(self, sentence_or_words) -> list[Token]:
        if isinstance(sentence_or_words, str):
            from .preprocess import tokenize
            words = tokenize(sentence_or_words)
        else:
            words = list(sentence_or_words)
        return tag_tokens(words, self.wordlist, self.lemmatizer,
                          self.proper_tag, self.common_tag)

    def parse_tags(self, tags: Sequence[str]) -> Forest:
        return glr_parse(tags, self.table)

    def analyze(self, sentence: str, n: Optional[int] = 1,
                lexicalized: Optional[bool] = None) -> SentenceResult:
        """Tokenize, tag, parse, and rank one sentence.

        ``lexicalized`` defaults to whether a lexicon is attached; pass
        False to force baseline (structural) ranking.
        """
        tokens = self.tag(sentence)
        forest = self.parse_tags([token.tag for token in tokens])
        use_lexicon = self.lexicon is not None if lexicalized is None \
            else (lexicalized and self.lexicon is not None)
        if forest.is_empty:
            return SentenceResult(sentence, tokens, [])
        if use_lexicon:
            analyses = rank_analyses(forest, self.model, self.lexicon,
                                     self.grammar, tokens, n)
        else:
            analyses = [RankedAnalysis(derivation, logprob, 0.0)
                        for derivation, logprob
                        in unpack_n_best(forest, self.model, n)]
        return SentenceResult(sentence, tokens, analyses)
