"""Deterministic NLP pipeline: tokenize, split, tag, lemmatize, annotate."""

from __future__ import annotations

from .lemmatizer import lemma_variants, lemmatize, word_class
from .segment import sentences_from_text, split_sentences, tokenize
from .tagger import PerceptronTagger, default_tagger, pos_tag
from .types import (
    MASKABLE_TAGS,
    NOUN_TAGS,
    PUNCT_TAGS,
    TAG_SET,
    VERB_TAGS,
    WORD_TAGS,
    AnnotatedDocument,
    Sentence,
    Token,
)

__all__ = [
    "AnnotatedDocument", "Sentence", "Token",
    "TAG_SET", "WORD_TAGS", "PUNCT_TAGS", "NOUN_TAGS", "VERB_TAGS", "MASKABLE_TAGS",
    "tokenize", "split_sentences", "sentences_from_text",
    "pos_tag", "default_tagger", "PerceptronTagger",
    "lemmatize", "lemma_variants", "word_class",
    "annotate", "annotate_presplit",
]


def _finish(sentence: Sentence) -> Sentence:
    pos_tag(sentence.tokens)
    for tok in sentence.tokens:
        tok.lemma = lemmatize(tok.surface, tok.pos)
    return sentence


def annotate(doc_id: str, text: str) -> AnnotatedDocument:
    """Run the full pipeline over raw text."""
    doc = AnnotatedDocument(doc_id=doc_id, text=text)
    doc.sentences = [_finish(s) for s in sentences_from_text(text)]
    return doc


def annotate_presplit(doc_id: str, sentence_texts: list[str]) -> AnnotatedDocument:
    """Annotate text already divided into sentences (no re-splitting).

    Used when assembling a document from a sentence subset, where joining
    and re-splitting could merge unterminated fragments.
    """
    text = "\n".join(sentence_texts)
    doc = AnnotatedDocument(doc_id=doc_id, text=text)
    offset = 0
    for idx, sent_text in enumerate(sentence_texts):
        start = text.index(sent_text, offset)
        end = start + len(sent_text)
        sent = Sentence(index=idx, text=sent_text, start=start, end=end,
                        tokens=tokenize(sent_text, offset=start))
        doc.sentences.append(_finish(sent))
        offset = end
    return doc
