"""Core annotation types shared by the whole pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field


# Penn Treebank word tags plus explicit punctuation tags. The tagger never
# emits anything outside this set.
WORD_TAGS = frozenset({
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD",
    "NN", "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$",
    "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH",
    "VB", "VBD", "VBG", "VBN", "VBP", "VBZ",
    "WDT", "WP", "WP$", "WRB",
})
PUNCT_TAGS = frozenset({"COMMA", "PERIOD", "COLON", "LRB", "RRB", "QUOTE", "PUNCT"})
TAG_SET = WORD_TAGS | PUNCT_TAGS

NOUN_TAGS = frozenset({"NN", "NNS", "NNP", "NNPS"})
VERB_TAGS = frozenset({"VB", "VBD", "VBG", "VBN", "VBP", "VBZ"})
MASKABLE_TAGS = NOUN_TAGS | VERB_TAGS


@dataclass
class Token:
    """One token with its character span in the source document."""

    surface: str
    start: int
    end: int
    pos: str = ""
    lemma: str = ""

    @property
    def is_word(self) -> bool:
        return any(c.isalpha() for c in self.surface)


@dataclass
class Sentence:
    """An ordered run of tokens covering one sentence of the source."""

    index: int
    text: str
    start: int
    end: int
    tokens: list[Token] = field(default_factory=list)


@dataclass
class AnnotatedDocument:
    """A fully annotated document: sentences, tokens, tags and lemmas."""

    doc_id: str
    text: str
    sentences: list[Sentence] = field(default_factory=list)

    @property
    def term_set(self) -> set[str]:
        """Deduplicated lemmas of every word token in the document."""
        return {
            tok.lemma
            for sent in self.sentences
            for tok in sent.tokens
            if tok.is_word and tok.lemma
        }

    def iter_tokens(self):
        for sent in self.sentences:
            yield from sent.tokens
