"""Per-verb subcategorisation frame lexicons.

Entries record, per verb lemma, how often each complement frame was
observed, plus the relative frequency normalised over the lemma's
entries.  Frame probabilities for scoring are add-1 smoothed over the
whole frame inventory, giving a proper distribution that reserves mass
for unseen frames; verbs absent from the lexicon fall back to the
uniform distribution so reranking stays neutral for them.

Counts are integers for acquired lexicons.  Lexicons produced by
collapsing fine-grained class probabilities carry probability mass in
the count field instead (smoothing is applied after collapsing), so
``count`` is typed as a float throughout.

Lexicons are immutable after loading and shareable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .frames import DEFAULT_FRAME_INVENTORY


class LexiconError(ValueError):
    """Malformed lexicon data."""


@dataclass(frozen=True)
class SubcatEntry:
    lemma: str
    frame: str
    count: float
    relfreq: float


class SubcatLexicon:
    def __init__(self, entries: Iterable[SubcatEntry] = (),
                 inventory: Sequence[str] = DEFAULT_FRAME_INVENTORY):
        self.inventory: tuple[str, ...] = tuple(inventory)
        self._frames = frozenset(self.inventory)
        self._index: dict[tuple[str, str], SubcatEntry] = {}
        self._totals: dict[str, float] = {}
        for entry in entries:
            self._add(entry)

    def _add(self, entry: SubcatEntry) -> None:
        if entry.frame not in self._frames:
            raise LexiconError(f"unknown frame {entry.frame!r} for {entry.lemma!r}")
        if entry.count < 0:
            raise LexiconError(f"negative count for {entry.lemma!r}/{entry.frame}")
        key = (entry.lemma, entry.frame)
        if key in self._index:
            raise LexiconError(f"duplicate entry {entry.lemma!r}/{entry.frame}")
        self._index[key] = entry
        self._totals[entry.lemma] = self._totals.get(entry.lemma, 0.0) + entry.count

    def __len__(self) -> int:
        return len(self._index)

    def __contains__(self, lemma: str) -> bool:
        return lemma in self._totals

    def entries(self) -> list[SubcatEntry]:
        return sorted(self._index.values(), key=lambda e: (e.lemma, e.frame))

    def lemmas(self) -> list[str]:
        return sorted(self._totals)

    def get(self, lemma: str, frame: str):
        return self._index.get((lemma, frame))

    def count(self, lemma: str, frame: str) -> float:
        entry = self._index.get((lemma, frame))
        return entry.count if entry else 0.0

    def total(self, lemma: str) -> float:
        return self._totals.get(lemma, 0.0)

    def frame_logprob(self, lemma: str, frame: str) -> float:
        """Add-1-smoothed log probability of ``frame`` for ``lemma``.

        Known lemma with total N and frame count c over an inventory of
        K frames: log((c + 1) / (N + K)).  Unknown lemma: log(1 / K).
        Total: never fails for an in-inventory frame.
        """
        if frame not in self._frames:
            raise LexiconError(f"frame {frame!r} not in inventory")
        k = len(self.inventory)
        if lemma not in self._totals:
            return -math.log(k)
        total = self._totals[lemma]
        count = self.count(lemma, frame)
        return math.log((count + 1.0) / (total + k))


def frame_logprob(lexicon: SubcatLexicon, lemma: str, frame: str) -> float:
    return lexicon.frame_logprob(lemma, frame)


def _format_count(count: float) -> str:
    if float(count).is_integer():
        return str(int(count))
    return repr(count)


def parse_lexicon(text: str,
                  inventory: Sequence[str] = DEFAULT_FRAME_INVENTORY) -> SubcatLexicon:
    """Parse ``lemma<TAB>FRAME<TAB>count<TAB>relfreq`` lines.

    Relative frequencies are recomputed from the counts and must agree
    with the stored values within 1e-6.
    """
    rows: list[tuple[int, str, str, float, float]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise LexiconError(
                f"line {lineno}: expected lemma, frame, count, relfreq")
        lemma, frame = fields[0], fields[1]
        try:
            count = float(fields[2])
            relfreq = float(fields[3])
        except ValueError as exc:
            raise LexiconError(f"line {lineno}: {exc}") from exc
        rows.append((lineno, lemma, frame, count, relfreq))
    totals: dict[str, float] = {}
    for _, lemma, _, count, _ in rows:
        totals[lemma] = totals.get(lemma, 0.0) + count
    entries = []
    for lineno, lemma, frame, count, relfreq in rows:
        if totals[lemma] <= 0:
            raise LexiconError(
                f"line {lineno}: lemma {lemma!r} has zero total count")
        recomputed = count / totals[lemma]
        if abs(recomputed - relfreq) > 1e-6:
            raise LexiconError(
                f"line {lineno}: stored relfreq {relfreq} disagrees with "
                f"count-derived {recomputed:.6f}")
        entries.append(SubcatEntry(lemma, frame, count, recomputed))
    return SubcatLexicon(entries, inventory)


def load_lexicon(path,
                 inventory: Sequence[str] = DEFAULT_FRAME_INVENTORY) -> SubcatLexicon:
    return parse_lexicon(Path(path).read_text(encoding="utf-8"), inventory)


def save_lexicon(lexicon: SubcatLexicon, path) -> None:
    lines = ["%s\t%s\t%s\t%.10f" % (e.lemma, e.frame, _format_count(e.count),
                                    e.relfreq)
             for e in lexicon.entries()]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""),
                          encoding="utf-8")


def collapse_classes(fine: Iterable[tuple[str, str, float]],
                     class_map: Mapping[str, str],
                     inventory: Sequence[str] = DEFAULT_FRAME_INVENTORY
                     ) -> SubcatLexicon:
    """Collapse fine-grained class probabilities onto inventory frames.

    ``fine`` holds (lemma, fine class id, probability) triples and
    ``class_map`` a many-to-one mapping from fine ids to frames; the
    collapsed probability of a frame is the sum of its classes'
    probabilities, so per-lemma mass is preserved.  The summed mass is
    stored in both the count and relfreq fields; smoothing over such a
    lexicon therefore operates on the collapsed distribution.
    """
    grouped: dict[tuple[str, str], list[float]] = {}
    order: list[tuple[str, str]] = []
    for lemma, fine_id, prob in fine:
        frame = class_map.get(fine_id)
        if frame is None:
            raise LexiconError(f"fine class {fine_id!r} has no mapping")
        if prob < 0:
            raise LexiconError(f"negative probability for {lemma!r}/{fine_id}")
        key = (lemma, frame)
        if key not in grouped:
            grouped[key] = []
            order.append(key)
        grouped[key].append(prob)
    entries = []
    for lemma, frame in sorted(order):
        mass = math.fsum(grouped[(lemma, frame)])
        entries.append(SubcatEntry(lemma, frame, mass, mass))
    return SubcatLexicon(entries, inventory)


def load_class_map(path) -> dict[str, str]:
    """Read a ``fine_id<TAB>FRAME`` mapping file."""
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise LexiconError(f"line {lineno}: expected fine_id<TAB>FRAME")
        if fields[0] in mapping:
            raise LexiconError(f"line {lineno}: duplicate fine id {fields[0]!r}")
        mapping[fields[0]] = fields[1]
    return mapping
