"""Masked-variant generation: one masked sentence per noun/verb occurrence."""

from __future__ import annotations

from dataclasses import dataclass

from .nlp import MASKABLE_TAGS, NOUN_TAGS, AnnotatedDocument

DEFAULT_MASK = "[MASK]"


class MaskRenderError(ValueError):
    """The recorded span no longer contains the masked surface."""


@dataclass(frozen=True)
class MaskedInstance:
    """One maskable token occurrence within its sentence."""

    doc_id: str
    sentence_index: int
    token_index: int
    masked_surface: str
    masked_pos: str            # "noun" or "verb"
    masked_lemma: str
    sentence_text: str
    char_start: int            # span of the masked surface within sentence_text
    char_end: int

    @property
    def rendered(self) -> str:
        return self.render(DEFAULT_MASK)

    def render(self, mask_token: str = DEFAULT_MASK) -> str:
        """Sentence text with the masked word replaced by mask_token."""
        if self.sentence_text[self.char_start:self.char_end] != self.masked_surface:
            raise MaskRenderError(
                f"masked surface {self.masked_surface!r} not at recorded offset "
                f"in sentence {self.sentence_index} of {self.doc_id!r}")
        return (self.sentence_text[:self.char_start] + mask_token
                + self.sentence_text[self.char_end:])

    def unmask(self, rendered: str, mask_token: str = DEFAULT_MASK) -> str:
        """Inverse of render; used by tests to check round-tripping."""
        return (rendered[:self.char_start] + self.masked_surface
                + rendered[self.char_start + len(mask_token):])

    @property
    def key(self) -> tuple[str, int, int]:
        return (self.doc_id, self.sentence_index, self.token_index)


def generate_masked_instances(doc: AnnotatedDocument) -> list[MaskedInstance]:
    """One instance per noun/verb token, in document order.

    Modal verbs (MD) are never masked; every occurrence of a repeated
    surface gets its own instance.
    """
    instances = []
    for sent in doc.sentences:
        for tok_idx, tok in enumerate(sent.tokens):
            if tok.pos not in MASKABLE_TAGS:
                continue
            instances.append(MaskedInstance(
                doc_id=doc.doc_id,
                sentence_index=sent.index,
                token_index=tok_idx,
                masked_surface=tok.surface,
                masked_pos="noun" if tok.pos in NOUN_TAGS else "verb",
                masked_lemma=tok.lemma,
                sentence_text=sent.text,
                char_start=tok.start - sent.start,
                char_end=tok.end - sent.start,
            ))
    return instances


def render_for_model(instance: MaskedInstance, mask_token: str = DEFAULT_MASK) -> str:
    """Model-ready string; framing tokens are the provider's concern."""
    return instance.render(mask_token)
