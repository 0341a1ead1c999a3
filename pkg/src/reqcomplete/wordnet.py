"""Synonym lookup from WordNet database files.

Reads the ``data.{noun,verb,adj,adv}`` files of a WordNet-style database
directory; each line describes one synset and lists its member words, so
synonyms of w are the co-members of every synset containing w.  Index
files and pointer offsets are not needed for that and are ignored.
"""

from __future__ import annotations

from pathlib import Path

DATA_FILES = ("data.noun", "data.verb", "data.adj", "data.adv")


class SynonymLexicon:
    def __init__(self, synsets: list[list[str]]):
        self._by_word: dict[str, set[str]] = {}
        for members in synsets:
            for word in members:
                bucket = self._by_word.setdefault(word, set())
                bucket.update(m for m in members if m != word)

    def synonyms(self, word: str) -> set[str]:
        return set(self._by_word.get(word.lower(), ()))

    def __len__(self) -> int:
        return len(self._by_word)


def _parse_data_line(line: str) -> list[str] | None:
    """Member words of one synset line, lowercased, underscores to spaces.

    Line layout: offset lex_filenum ss_type w_cnt word lex_id [word lex_id
    ...] ...; w_cnt is two-digit hexadecimal.
    """
    if not line or line.startswith(" "):  # license header lines are indented
        return None
    fields = line.split()
    if len(fields) < 6:
        return None
    try:
        w_cnt = int(fields[3], 16)
    except ValueError:
        return None
    words = []
    pos = 4
    for _ in range(w_cnt):
        if pos + 1 >= len(fields):
            return None
        words.append(fields[pos].replace("_", " ").lower())
        pos += 2  # skip lex_id
    return words or None


def load_lexicon(root: str | Path) -> SynonymLexicon:
    """Load all data.* files under a WordNet database directory."""
    root = Path(root)
    synsets: list[list[str]] = []
    found = False
    for name in DATA_FILES:
        path = root / name
        if not path.exists():
            continue
        found = True
        for line in path.read_text("utf-8").splitlines():
            members = _parse_data_line(line)
            if members:
                synsets.append(members)
    if not found:
        raise FileNotFoundError(f"no WordNet data.* files under {root}")
    return SynonymLexicon(synsets)
