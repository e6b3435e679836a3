"""frameparse: probabilistic GLR parsing with verb-frame reranking and
bracket/grammatical-relation evaluation.

The toolkit parses PoS-tag sequences with a generalized-LR parser over a
head-annotated phrase-structure grammar, ranks the competing analyses
with a trained LR action model, optionally reranks them with acquired
verb subcategorisation-frame frequencies, and scores output against gold
annotations with unlabelled bracketing metrics and hierarchy-aware
grammatical-relation metrics.
"""

from .frames import DEFAULT_FRAME_INVENTORY
from .grammar import (ADJUNCT, ARGUMENT, Category, DaughterSpec, Grammar,
                      GrammarError, GRTemplate, Rule, SlotRef, load_grammar,
                      normalize_kleene, parse_grammar, render_grammar,
                      vsubcat_of)
from .lrtable import LRTable, build_table
from .glr import Forest, ForestNode, ParseError, TreeNode, glr_parse
from .actions import (ActionModel, Derivation, UnderivableTreeError,
                      derivation_logprob, load_model, replay_actions,
                      save_model, train_actions, tree_actions, unpack_n_best)
from .treebank import (Tree, TreebankError, from_derivation_tree, load_treebank,
                       parse_tree, read_treebank, to_derivation_tree,
                       write_treebank)
from .lexicon import (LexiconError, SubcatEntry, SubcatLexicon,
                      collapse_classes, frame_logprob, load_class_map,
                      load_lexicon, parse_lexicon, save_lexicon)
from .preprocess import (Lemmatizer, Token, Wordlist, expand_tag_sequences,
                         lemmatize, load_lemma_exceptions, load_wordlist,
                         parse_wordlist, tag_tokens, tokenize)
from .rerank import FrameInstance, RankedAnalysis, lexicalized_score, \
    rank_analyses, verb_frames
from .acquire import ObservationStore, hypothesize_entries, observe_corpus
from .grs import (GR, GRError, RELATION_PARENTS, RELATION_SLOTS, gr_match,
                  gr_scores, parse_gr, read_gr_file, relation_histogram,
                  render_gr_file)
from .evaluation import (BracketReport, EvaluationError, GRReport, Span,
                         TTestResult, aggregate_brackets, aggregate_grs,
                         bracket_scores, extract_brackets, extract_grs,
                         labeled_spans, paired_t_test)
from .pipeline import ParserPipeline, SentenceResult
from .demofiles import DEMO_FILES, demo_path

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
