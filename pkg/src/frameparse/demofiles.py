"""Access to the shipped demo data files."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

DEMO_FILES = (
    "demo.grammar",
    "demo.wordlist",
    "demo.lemma_exceptions",
    "demo.lexicon",
    "train.treebank",
    "adversarial.treebank",
    "ppsuite.txt",
    "ppsuite_gold.treebank",
    "ppsuite_gold.grs",
    "acquisition.txt",
)


def demo_path(name: str) -> Path:
    """Filesystem path of a shipped demo file.

    The CLI accepts ``@demo/<name>`` in any path argument as shorthand
    for these.
    """
    if name not in DEMO_FILES:
        raise FileNotFoundError(
            f"no demo file {name!r}; available: {', '.join(DEMO_FILES)}")
    return Path(str(resources.files("frameparse").joinpath("data", name)))
