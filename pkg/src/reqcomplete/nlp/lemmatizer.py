"""Rule-based English lemmatizer: exception tables plus suffix rules.

The exception tables (irregular verbs, irregular plurals, comparative
adjectives) and the list of e-final verb bases live in data files so they
can be extended without code changes.  Output is always lowercase and the
rules are idempotent: lemmatizing a lemma returns it unchanged.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .types import NOUN_TAGS, VERB_TAGS

VOWELS = "aeiou"


def _read_data(name: str) -> str:
    return resources.files("reqcomplete.nlp").joinpath(f"data/{name}").read_text("utf-8")


@lru_cache(maxsize=1)
def _exceptions() -> dict[str, dict[str, str]]:
    table: dict[str, dict[str, str]] = {"noun": {}, "verb": {}, "adj": {}}
    for line in _read_data("lemma_exceptions.txt").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        cls, surface, lemma = line.split()
        table[cls][surface] = lemma
    return table


@lru_cache(maxsize=1)
def _e_verbs() -> frozenset[str]:
    words = set()
    for line in _read_data("e_verbs.txt").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


def word_class(pos: str) -> str:
    """Map a POS tag (or coarse class name) to noun/verb/adj/adv/other."""
    if pos in NOUN_TAGS or pos == "noun":
        return "noun"
    if pos in VERB_TAGS or pos == "verb":
        return "verb"
    if pos.startswith("JJ") or pos == "adj":
        return "adj"
    if pos.startswith("RB") or pos == "adv":
        return "adv"
    return "other"


def _undouble(stem: str) -> str:
    """Drop a doubled final consonant left by -ing/-ed stripping."""
    if (
        len(stem) >= 3
        and stem[-1] == stem[-2]
        and stem[-1] not in VOWELS + "lsz"  # keep "fall", "pass", "buzz"
    ):
        return stem[:-1]
    return stem


def _restore_e(stem: str) -> str:
    return stem + "e" if stem + "e" in _e_verbs() else stem


def _noun_lemma(w: str) -> str:
    if not w.endswith("s") or len(w) <= 2:
        return w
    if w.endswith(("ss", "us", "is")):
        return w
    if w.endswith("ies") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith(("xes", "ches", "shes", "sses", "zes", "oes")):
        return w[:-2]
    return w[:-1]


def _verb_lemma(w: str) -> str:
    if w.endswith("ies") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith("ied") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith("ing") and len(w) > 4:
        return _restore_e(_undouble(w[:-3]))
    if w.endswith("ed") and len(w) > 3:
        return _restore_e(_undouble(w[:-2]))
    if w.endswith(("xes", "ches", "shes", "sses", "zes", "oes")):
        return w[:-2]
    if w.endswith("s") and not w.endswith(("ss", "us", "is")) and len(w) > 2:
        return w[:-1]
    return w


def _adj_lemma(w: str) -> str:
    if w.endswith("ier") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith("iest") and len(w) > 5:
        return w[:-4] + "y"
    if w.endswith("er") and len(w) > 4:
        return _undouble(w[:-2])
    if w.endswith("est") and len(w) > 5:
        return _undouble(w[:-3])
    return w


def lemmatize(surface: str, pos: str) -> str:
    """Lowercased base form of surface given its POS tag or word class.

    Unknown words come back lowercased; non-alphabetic surfaces are
    returned as-is.
    """
    if not surface:
        return surface
    w = surface.lower()
    if not any(c.isalpha() for c in w):
        return surface
    cls = word_class(pos)
    if cls in ("other", "adv"):
        return w
    exc = _exceptions().get(cls, {})
    if w in exc:
        return exc[w]
    if cls == "noun":
        return _noun_lemma(w)
    if cls == "verb":
        return _verb_lemma(w)
    return _adj_lemma(w)


def lemma_variants(word: str) -> set[str]:
    """All plausible lemmas of a bare word when its POS is unknown."""
    w = word.lower()
    return {w, lemmatize(w, "noun"), lemmatize(w, "verb")}
