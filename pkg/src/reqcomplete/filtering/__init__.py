"""Rule-based pruning of obviously unuseful predictions.

Removes predictions that are already in the document, overly common,
vague/stop words, or not words at all.  The shipped word lists can be
overridden with user files (UTF-8, one word per line, '#' comments).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..mlm import PredictionRecord
from ..nlp import AnnotatedDocument, lemmatize

DEFAULT_COMMON_CUTOFF = 250


def read_word_file(path) -> list[str]:
    """Parse a word-list file: one entry per line, '#' starts a comment."""
    text = Path(path).read_text("utf-8") if not hasattr(path, "read_text") \
        else path.read_text("utf-8")
    words = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line.lower())
    return words


@dataclass
class WordLists:
    """Ranked common words plus vague/stop sets, all lowercase."""

    common_words: list[str]
    vague_words: set[str] = field(default_factory=set)
    stop_words: set[str] = field(default_factory=set)

    def __post_init__(self):
        self.common_words = [w.lower() for w in self.common_words]
        self.vague_words = {w.lower() for w in self.vague_words}
        self.stop_words = {w.lower() for w in self.stop_words}

    def common_top(self, cutoff: int) -> set[str]:
        return set(self.common_words[:cutoff])

    def common_band(self, lo: int, hi: int) -> list[str]:
        """Ranked slice (lo, hi], 1-based ranks; used by the baseline."""
        return self.common_words[lo:hi]

    @classmethod
    def bundled(cls) -> "WordLists":
        data = resources.files("reqcomplete.filtering").joinpath("data")
        return cls(
            common_words=read_word_file(data.joinpath("common_words.txt")),
            vague_words=set(read_word_file(data.joinpath("vague_words.txt"))),
            stop_words=set(read_word_file(data.joinpath("stop_words.txt"))),
        )

    @classmethod
    def from_paths(cls, common=None, vague=None, stop=None) -> "WordLists":
        base = cls.bundled()
        return cls(
            common_words=read_word_file(common) if common else base.common_words,
            vague_words=set(read_word_file(vague)) if vague else base.vague_words,
            stop_words=set(read_word_file(stop)) if stop else base.stop_words,
        )


def prediction_lemma(record: PredictionRecord) -> str:
    """Lemma of a prediction, using the masked slot's word class."""
    return lemmatize(record.prediction.token, record.instance.masked_pos)


def prune(records: list[PredictionRecord], doc: AnnotatedDocument,
          lists: WordLists, common_cutoff: int = DEFAULT_COMMON_CUTOFF,
          ) -> list[PredictionRecord]:
    """Drop predictions that cannot hint at missing terminology.

    A record is removed iff its prediction (a) has a lemma already in the
    document, (b) is within the top common_cutoff common words, (c) is a
    vague or stop word, or (d) is non-alphabetic.  Order is preserved.
    """
    terms = doc.term_set
    common = lists.common_top(common_cutoff)
    kept = []
    for rec in records:
        token = rec.prediction.token
        lowered = token.lower()
        if not token.isalpha():
            continue
        if prediction_lemma(rec) in terms:
            continue
        if lowered in common:
            continue
        if lowered in lists.vague_words or lowered in lists.stop_words:
            continue
        kept.append(rec)
    return kept


def dedupe_by_lemma(records: list[PredictionRecord]) -> list[PredictionRecord]:
    """One record per prediction lemma, keeping the highest-scoring one."""
    best: dict[str, PredictionRecord] = {}
    for rec in records:
        lemma = prediction_lemma(rec)
        cur = best.get(lemma)
        if cur is None or rec.prediction.score > cur.prediction.score:
            best[lemma] = rec
    chosen = set(map(id, best.values()))
    return [r for r in records if id(r) in chosen]
