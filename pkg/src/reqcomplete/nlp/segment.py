"""Tokenization and sentence splitting.

Both are rule based and fully deterministic: tokens are split on whitespace
with punctuation peeled off into separate tokens, and sentences end at
./!/? boundaries unless the terminator belongs to a known abbreviation or
sits inside a number.
"""

from __future__ import annotations

from importlib import resources

from .types import Sentence, Token

_TERMINATORS = ".!?"
# Characters kept inside a token when surrounded by alphanumerics,
# e.g. "real-time", "don't", "3.5".
_INNER_CHARS = "-'./_"


def _load_abbreviations() -> frozenset[str]:
    text = resources.files("reqcomplete.nlp").joinpath("data/abbreviations.txt").read_text("utf-8")
    entries = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.add(line.lower().rstrip("."))
    return frozenset(entries)


_ABBREVIATIONS = _load_abbreviations()


def _is_inner(text: str, i: int) -> bool:
    """True when text[i] is punctuation that should stay inside a token."""
    c = text[i]
    if c not in _INNER_CHARS:
        return False
    if i == 0 or i + 1 >= len(text):
        return False
    prev_c, next_c = text[i - 1], text[i + 1]
    if c in ".":
        # keep periods only between digits (versions, decimals: "3.5")
        return prev_c.isdigit() and next_c.isdigit()
    return prev_c.isalnum() and next_c.isalnum()


def tokenize(text: str, offset: int = 0) -> list[Token]:
    """Split text into tokens; punctuation becomes separate tokens.

    Spans are recorded relative to the original document when offset is
    the position of text within it.
    """
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        if text[i].isalnum():
            j = i + 1
            while j < n and (text[j].isalnum() or _is_inner(text, j)):
                j += 1
        else:
            j = i + 1  # each punctuation character is its own token
        tokens.append(Token(surface=text[i:j], start=offset + i, end=offset + j))
        i = j
    return tokens


def _word_before(text: str, i: int) -> str:
    """The word run ending right before position i (dots kept, for "e.g.")."""
    j = i
    while j > 0 and (text[j - 1].isalnum() or text[j - 1] in "-'."):
        j -= 1
    return text[j:i].lstrip(".")


def split_sentences(text: str) -> list[tuple[str, int, int]]:
    """Return (sentence text, start, end) triples covering the input.

    A terminator ends a sentence unless it follows a known abbreviation,
    sits inside a number, or is part of a terminator run that has not
    finished ("..." ends once).  Newlines separated by blank lines also
    break sentences, so headings without terminators still come through.
    """
    spans: list[tuple[int, int]] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c in _TERMINATORS:
            # consume the full run of terminators/closers
            j = i + 1
            while j < n and text[j] in _TERMINATORS + ")\"'":
                j += 1
            if j < n and not text[j].isspace():
                i = j  # "e.g.", "3.5", "file.txt": not a boundary
                continue
            word = _word_before(text, i)
            if c == "." and word and word.lower().rstrip(".") in _ABBREVIATIONS:
                i = j
                continue
            spans.append((start, j))
            start = j
            i = j
            continue
        if c == "\n":
            # blank line acts as a sentence break for unterminated text
            j = i
            while j < n and text[j] in " \t\r\n":
                j += 1
            if "\n" in text[i:j] and text[start:i].strip() and (j >= n or text[i:j].count("\n") > 1):
                spans.append((start, i))
                start = j
                i = j
                continue
        i += 1
    if text[start:].strip():
        spans.append((start, n))

    out = []
    for s, e in spans:
        # trim surrounding whitespace but keep offsets exact
        while s < e and text[s].isspace():
            s += 1
        while e > s and text[e - 1].isspace():
            e -= 1
        if s < e:
            out.append((text[s:e], s, e))
    return out


def sentences_from_text(text: str) -> list[Sentence]:
    """Split and tokenize, producing Sentence objects with document spans."""
    sents = []
    for idx, (sent_text, start, end) in enumerate(split_sentences(text)):
        toks = tokenize(sent_text, offset=start)
        sents.append(Sentence(index=idx, text=sent_text, start=start, end=end, tokens=toks))
    return sents
