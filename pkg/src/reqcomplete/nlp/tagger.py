"""Averaged-perceptron POS tagger with bundled weights and a rule fallback.

The model ships as a gzipped JSON weights file trained on the tagged corpus
under data/ (see scripts/train_tagger.py in the repository).  Punctuation
and numbers are tagged by fixed rules before the perceptron runs, so the
learned model only ever decides word tags.
"""

from __future__ import annotations

import gzip
import json
import random
from collections import defaultdict
from importlib import resources
from pathlib import Path

from .types import TAG_SET, Token

START = ["-START2-", "-START-"]
END = ["-END-", "-END2-"]

_CLOSED_CLASS = {
    "the": "DT", "a": "DT", "an": "DT", "this": "DT", "that": "DT",
    "these": "DT", "those": "DT", "each": "DT", "every": "DT", "no": "DT",
    "any": "DT", "some": "DT", "all": "DT",
    "shall": "MD", "must": "MD", "will": "MD", "may": "MD", "can": "MD",
    "should": "MD", "would": "MD", "might": "MD", "could": "MD",
    "and": "CC", "or": "CC", "but": "CC", "nor": "CC",
    "of": "IN", "in": "IN", "on": "IN", "at": "IN", "by": "IN", "for": "IN",
    "with": "IN", "from": "IN", "into": "IN", "during": "IN", "after": "IN",
    "before": "IN", "between": "IN", "under": "IN", "over": "IN",
    "through": "IN", "within": "IN", "without": "IN", "against": "IN",
    "upon": "IN", "per": "IN", "via": "IN", "if": "IN", "unless": "IN",
    "because": "IN", "while": "IN", "until": "IN", "whether": "IN",
    "to": "TO", "not": "RB", "n't": "RB",
    "he": "PRP", "she": "PRP", "it": "PRP", "they": "PRP", "we": "PRP",
    "i": "PRP", "you": "PRP", "them": "PRP", "him": "PRP", "her": "PRP",
    "its": "PRP$", "their": "PRP$", "his": "PRP$", "our": "PRP$", "your": "PRP$",
    "who": "WP", "what": "WP", "which": "WDT", "when": "WRB", "where": "WRB",
    "why": "WRB", "how": "WRB", "there": "EX",
}

_PUNCT_MAP = {",": "COMMA", ".": "PERIOD", "!": "PERIOD", "?": "PERIOD",
              ":": "COLON", ";": "COLON", "(": "LRB", ")": "RRB",
              "[": "LRB", "]": "RRB", "{": "LRB", "}": "RRB",
              '"': "QUOTE", "'": "QUOTE", "`": "QUOTE",
              "$": "SYM", "%": "SYM", "+": "SYM", "=": "SYM", "<": "SYM",
              ">": "SYM", "#": "SYM", "&": "SYM", "*": "SYM", "@": "SYM",
              "/": "SYM", "\\": "SYM", "|": "SYM", "~": "SYM", "^": "SYM"}


def rule_tag(word: str) -> str | None:
    """Deterministic pre-tagging for tokens the model never needs to learn."""
    if not any(c.isalpha() for c in word):
        if word in _PUNCT_MAP:
            return _PUNCT_MAP[word]
        if word.replace(".", "").replace(",", "").replace("-", "").isdigit():
            return "CD"
        return "PUNCT"
    return None


def fallback_tag(word: str) -> str:
    """Suffix/shape heuristics used when no trained weights are available."""
    lower = word.lower()
    if lower in _CLOSED_CLASS:
        return _CLOSED_CLASS[lower]
    rt = rule_tag(word)
    if rt is not None:
        return rt
    if lower.endswith("ly"):
        return "RB"
    if lower.endswith("ing"):
        return "VBG"
    if lower.endswith("ed"):
        return "VBN"
    if word[:1].isupper():
        return "NNP"
    if lower.endswith(("ous", "ible", "able", "ful", "ive", "ic", "al")):
        return "JJ"
    if lower.endswith("s") and not lower.endswith(("ss", "us", "is")):
        return "NNS"
    return "NN"


def _normalize(word: str) -> str:
    if word.isdigit():
        return "!DIGITS"
    if any(c.isdigit() for c in word):
        return "!MIXED"
    return word.lower()


class PerceptronTagger:
    """Greedy left-to-right tagger over averaged-perceptron weights."""

    def __init__(self):
        self.weights: dict[str, dict[str, float]] = {}
        self.tagdict: dict[str, str] = {}
        self.classes: set[str] = set()

    # -- feature extraction ------------------------------------------------
    def _features(self, i: int, word: str, context: list[str],
                  raw: list[str], prev: str, prev2: str) -> dict[str, int]:
        idx = i + len(START)
        feats: dict[str, int] = defaultdict(int)

        def add(name, *args):
            feats[" ".join((name,) + args)] += 1

        add("bias")
        add("i suffix", word[-3:])
        add("i pref1", word[0])
        add("i-1 tag", prev)
        add("i-2 tag", prev2)
        add("i tag+i-2 tag", prev, prev2)
        add("i word", context[idx])
        add("i-1 tag+i word", prev, context[idx])
        add("i-1 word", context[idx - 1])
        add("i-1 suffix", context[idx - 1][-3:])
        add("i-2 word", context[idx - 2])
        add("i+1 word", context[idx + 1])
        add("i+1 suffix", context[idx + 1][-3:])
        add("i+2 word", context[idx + 2])
        surface = raw[i]
        if surface[:1].isupper():
            add("i title", "first" if i == 0 else "mid")
        if surface.isupper() and len(surface) > 1:
            add("i allcaps")
        return feats

    def _predict(self, features: dict[str, int]) -> str | None:
        scores: dict[str, float] = defaultdict(float)
        seen = False
        for feat, value in features.items():
            if feat not in self.weights:
                continue
            seen = True
            for tag, weight in self.weights[feat].items():
                scores[tag] += value * weight
        if not seen or not scores:
            return None
        # deterministic argmax: break ties on tag name
        return max(scores, key=lambda t: (scores[t], t))

    # -- tagging -----------------------------------------------------------
    def tag_words(self, words: list[str]) -> list[str]:
        prev, prev2 = START
        context = START + [_normalize(w) for w in words] + END
        tags = []
        for i, word in enumerate(words):
            tag = rule_tag(word)
            if tag is None:
                tag = self.tagdict.get(_normalize(word))
            if tag is None:
                feats = self._features(i, _normalize(word), context, words, prev, prev2)
                tag = self._predict(feats) or fallback_tag(word)
            tags.append(tag)
            prev2, prev = prev, tag
        return tags

    def tag_tokens(self, tokens: list[Token]) -> list[Token]:
        tags = self.tag_words([t.surface for t in tokens])
        for tok, tag in zip(tokens, tags):
            tok.pos = tag
        return tokens

    # -- training ----------------------------------------------------------
    def train(self, sentences: list[list[tuple[str, str]]],
              iterations: int = 8, seed: int = 1) -> None:
        """Train from (word, tag) sentences with weight averaging."""
        self._make_tagdict(sentences)
        self.classes.update(tag for sent in sentences for _, tag in sent)
        totals: dict[tuple[str, str], float] = defaultdict(float)
        tstamps: dict[tuple[str, str], int] = defaultdict(int)
        instances = 0
        rng = random.Random(seed)
        sentences = list(sentences)
        for _ in range(iterations):
            rng.shuffle(sentences)
            for sent in sentences:
                words = [w for w, _ in sent]
                gold = [t for _, t in sent]
                prev, prev2 = START
                context = START + [_normalize(w) for w in words] + END
                for i, word in enumerate(words):
                    tag = rule_tag(word) or self.tagdict.get(_normalize(word))
                    if tag is None:
                        feats = self._features(i, _normalize(word), context,
                                               words, prev, prev2)
                        guess = self._predict(feats) or fallback_tag(word)
                        instances += 1
                        if guess != gold[i]:
                            for feat in feats:
                                w = self.weights.setdefault(feat, {})
                                self._upd(totals, tstamps, instances, feat,
                                          gold[i], w.get(gold[i], 0.0), 1.0)
                                self._upd(totals, tstamps, instances, feat,
                                          guess, w.get(guess, 0.0), -1.0)
                        tag = gold[i]  # gold history while training
                    prev2, prev = prev, tag
        self._average(totals, tstamps, instances)

    def _upd(self, totals, tstamps, instances, feat, tag, weight, delta):
        key = (feat, tag)
        totals[key] += (instances - tstamps[key]) * weight
        tstamps[key] = instances
        self.weights[feat][tag] = weight + delta

    def _average(self, totals, tstamps, instances):
        if not instances:
            return
        for feat, tag_weights in self.weights.items():
            for tag, weight in list(tag_weights.items()):
                key = (feat, tag)
                total = totals[key] + (instances - tstamps[key]) * weight
                avg = round(total / instances, 4)
                if avg:
                    tag_weights[tag] = avg
                else:
                    del tag_weights[tag]

    def _make_tagdict(self, sentences, freq_thresh=8, ambiguity_thresh=0.99):
        counts: dict[str, dict[str, int]] = defaultdict(lambda: defaultdict(int))
        for sent in sentences:
            for word, tag in sent:
                counts[_normalize(word)][tag] += 1
        for word, tag_freqs in counts.items():
            tag, mode = max(tag_freqs.items(), key=lambda kv: (kv[1], kv[0]))
            n = sum(tag_freqs.values())
            if n >= freq_thresh and mode / n >= ambiguity_thresh:
                self.tagdict[word] = tag
        # closed-class words are unambiguous by construction
        self.tagdict.update(_CLOSED_CLASS)

    # -- persistence ---------------------------------------------------------
    def save(self, path: str | Path) -> None:
        payload = {
            "format": "perceptron-tagger/1",
            "weights": self.weights,
            "tagdict": self.tagdict,
            "classes": sorted(self.classes),
        }
        blob = json.dumps(payload, sort_keys=True).encode("utf-8")
        with open(path, "wb") as raw:
            # mtime pinned so retraining reproduces identical bytes
            with gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as fh:
                fh.write(blob)

    @classmethod
    def load(cls, path: str | Path) -> "PerceptronTagger":
        with gzip.open(path, "rt", encoding="utf-8") as fh:
            payload = json.load(fh)
        tagger = cls()
        tagger.weights = payload["weights"]
        tagger.tagdict = payload["tagdict"]
        tagger.classes = set(payload["classes"])
        return tagger


_DEFAULT: PerceptronTagger | None = None


def default_tagger() -> PerceptronTagger:
    """The bundled tagger; falls back to an empty (rule-only) model."""
    global _DEFAULT
    if _DEFAULT is None:
        weights = resources.files("reqcomplete.nlp").joinpath("data/tagger_weights.json.gz")
        tagger = PerceptronTagger()
        try:
            with resources.as_file(weights) as p:
                tagger = PerceptronTagger.load(p)
        except FileNotFoundError:
            pass
        _DEFAULT = tagger
    return _DEFAULT


def pos_tag(tokens: list[Token]) -> list[Token]:
    """Tag tokens in place with the bundled model; returns the same list."""
    if tokens:
        default_tagger().tag_tokens(tokens)
    return tokens


def assert_tags_valid(tokens: list[Token]) -> None:
    for tok in tokens:
        if tok.pos not in TAG_SET:
            raise ValueError(f"tag {tok.pos!r} for {tok.surface!r} outside tag set")
