"""Per-prediction feature computation and the feature matrix.

Thirteen features per prediction record: the masked slot's word class,
the prediction's in-context POS tag, surface-length statistics, the
provider confidence, edit distance and embedding similarity to the
masked word, decile frequency buckets, and corpus TF-IDF aggregates.
The column schema is fixed (the tag set is closed), so matrices built
from different documents are interchangeable and a trained filter can
be applied to unseen documents.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import DomainCorpus, build_tfidf
from .embeddings import EmbeddingStore
from .filtering import prediction_lemma
from .mlm import PredictionRecord
from .nlp import NOUN_TAGS, TAG_SET, VERB_TAGS, AnnotatedDocument, pos_tag, tokenize

SCHEMA_VERSION = "feature-schema/1"
N_BUCKETS = 10

RELEVANT = "relevant"
NON_RELEVANT = "non-relevant"

# Table layout: feature id -> measurement kind.
COLUMN_KINDS = {
    "f1": "nominal", "f2": "nominal", "f3": "nominal",
    "f4": "numeric", "f5": "numeric", "f6": "numeric", "f7": "numeric",
    "f8": "numeric", "f9": "numeric",
    "f10": "ordinal", "f11": "ordinal",
    "f12": "numeric", "f13": "numeric",
}


@dataclass
class FeatureVector:
    f1: str                 # masked word class: noun|verb
    f2: str                 # POS tag of the prediction in context
    f3: bool                # f2's class agrees with f1
    f4: int                 # masked word length (chars)
    f5: int                 # prediction length (chars)
    f6: float               # min(f4,f5)/max(f4,f5)
    f7: float               # provider confidence
    f8: int                 # edit distance masked word <-> prediction
    f9: float | None        # embedding cosine; None when OOV
    f10: int                # prediction-frequency decile over this document
    f11: int                # corpus-frequency decile
    f12: float              # mean TF-IDF over corpus articles
    f13: float              # max TF-IDF over corpus articles
    label: str | None = None

    def as_row(self) -> list:
        return [self.f1, self.f2, self.f3, self.f4, self.f5, self.f6, self.f7,
                self.f8, self.f9, self.f10, self.f11, self.f12, self.f13,
                self.label]


def schema_descriptor() -> dict:
    return {
        "version": SCHEMA_VERSION,
        "columns": COLUMN_KINDS,
        "f1_values": ["noun", "verb"],
        "f2_values": sorted(TAG_SET),
        "f9_undefined": "empty cell in CSV; numeric encoding adds an OOV flag column",
        "labels": [RELEVANT, NON_RELEVANT],
    }


def schema_fingerprint() -> str:
    blob = json.dumps(schema_descriptor(), sort_keys=True)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


@dataclass
class FeatureMatrix:
    rows: list[FeatureVector]
    provenance: dict
    flags: list[str] = field(default_factory=list)
    schema: dict = field(default_factory=schema_descriptor)

    @property
    def fingerprint(self) -> str:
        return schema_fingerprint()

    def to_csv(self, path: str | Path) -> None:
        path = Path(path)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"f{i}" for i in range(1, 14)] + ["label"])
            for row in self.rows:
                cells = row.as_row()
                cells[8] = "" if cells[8] is None else repr(cells[8])
                cells[13] = "" if cells[13] is None else cells[13]
                writer.writerow(cells)
        sidecar = {"schema": self.schema, "provenance": self.provenance,
                   "flags": self.flags, "fingerprint": self.fingerprint}
        path.with_suffix(path.suffix + ".schema.json").write_text(
            json.dumps(sidecar, indent=2, sort_keys=True), encoding="utf-8")


# -- individual feature operations -------------------------------------------

def levenshtein(a: str, b: str) -> int:
    """Unit-cost insert/delete/substitute distance, two-row DP."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i] + [0] * len(b)
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
        prev = cur
    return prev[-1]


def pos_features(record: PredictionRecord) -> tuple[str, str, bool]:
    """Re-tag the sentence with the prediction substituted in (F1-F3)."""
    inst = record.instance
    substituted = (inst.sentence_text[:inst.char_start]
                   + record.prediction.token
                   + inst.sentence_text[inst.char_end:])
    tokens = pos_tag(tokenize(substituted))
    f2 = ""
    for tok in tokens:
        if tok.start <= inst.char_start < tok.end:
            f2 = tok.pos
            break
    f1 = inst.masked_pos
    if f1 == "noun":
        f3 = f2 in NOUN_TAGS
    else:
        f3 = f2 in VERB_TAGS
    return f1, f2, f3


def length_features(record: PredictionRecord) -> tuple[int, int, float]:
    f4 = len(record.instance.masked_surface)
    f5 = len(record.prediction.token)
    if f4 == 0 or f5 == 0:
        return f4, f5, 0.0
    return f4, f5, min(f4, f5) / max(f4, f5)


def edit_distance(record: PredictionRecord) -> int:
    """F8 on lowercased surfaces, so capitalization is not counted."""
    return levenshtein(record.instance.masked_surface.lower(),
                       record.prediction.token.lower())


def semantic_similarity(record: PredictionRecord,
                        store: EmbeddingStore) -> float | None:
    return store.cosine(record.instance.masked_surface, record.prediction.token)


def quantile_bucket(counts: dict[str, int], lemma: str) -> int:
    """Decile by descending frequency: 0 most frequent, 9 least.

    Ties break lexicographically for determinism; lemmas missing from
    counts land in bucket 9.
    """
    if not counts:
        raise ValueError("counts must be non-empty")
    if lemma not in counts:
        return N_BUCKETS - 1
    ordered = sorted(counts, key=lambda w: (-counts[w], w))
    rank = ordered.index(lemma)
    return min(N_BUCKETS * rank // len(ordered), N_BUCKETS - 1)


def tfidf_features(corpus: DomainCorpus, lemma: str) -> tuple[float, float]:
    """Mean and max normalized TF-IDF of lemma over all articles (F12, F13)."""
    if not corpus.articles:
        return 0.0, 0.0
    if not corpus.tfidf_index:
        build_tfidf(corpus)
    values = [vec.get(lemma, 0.0) for vec in corpus.tfidf_index]
    return sum(values) / len(values), max(values)


def build_matrix(records: list[PredictionRecord], doc: AnnotatedDocument,
                 corpus: DomainCorpus, store: EmbeddingStore,
                 run_seed: int | None = None) -> FeatureMatrix:
    """One feature row per record, in record order."""
    flags = []
    if not corpus.articles:
        flags.append("empty-corpus: f12/f13 are zero, f11 defaults to 9")
    elif not corpus.tfidf_index:
        build_tfidf(corpus)
    if corpus.articles and not corpus.term_stats:
        corpus.compute_term_stats()

    # F10 counts over this document's surviving predictions
    doc_counts: dict[str, int] = {}
    for rec in records:
        lemma = prediction_lemma(rec)
        doc_counts[lemma] = doc_counts.get(lemma, 0) + 1

    rows = []
    for rec in records:
        lemma = prediction_lemma(rec)
        f1, f2, f3 = pos_features(rec)
        f4, f5, f6 = length_features(rec)
        f9 = semantic_similarity(rec, store)
        f10 = quantile_bucket(doc_counts, lemma) if doc_counts else N_BUCKETS - 1
        if corpus.term_stats:
            f11 = quantile_bucket(corpus.term_stats, lemma)
        else:
            f11 = N_BUCKETS - 1
        f12, f13 = tfidf_features(corpus, lemma)
        rows.append(FeatureVector(
            f1=f1, f2=f2, f3=f3, f4=f4, f5=f5, f6=f6,
            f7=rec.prediction.score, f8=edit_distance(rec), f9=f9,
            f10=f10, f11=f11, f12=f12, f13=f13))
    provenance = {"doc_id": doc.doc_id, "run_seed": run_seed,
                  "n_records": len(records),
                  "corpus_articles": len(corpus.articles)}
    return FeatureMatrix(rows=rows, provenance=provenance, flags=flags)


# -- numeric encoding ---------------------------------------------------------

F2_CATEGORIES = sorted(TAG_SET)


def encoded_column_names() -> list[str]:
    names = ["f1_noun"]
    names += [f"f2={tag}" for tag in F2_CATEGORIES]
    names += ["f3", "f4", "f5", "f6", "f7", "f8", "f9", "f9_oov",
              "f10", "f11", "f12", "f13"]
    return names


def encode_vector(fv: FeatureVector) -> np.ndarray:
    """Numeric encoding: one-hot nominals, OOV indicator for F9."""
    cells = [1.0 if fv.f1 == "noun" else 0.0]
    cells += [1.0 if fv.f2 == tag else 0.0 for tag in F2_CATEGORIES]
    cells += [1.0 if fv.f3 else 0.0, float(fv.f4), float(fv.f5), fv.f6, fv.f7,
              float(fv.f8),
              0.0 if fv.f9 is None else fv.f9,
              1.0 if fv.f9 is None else 0.0,
              float(fv.f10), float(fv.f11), fv.f12, fv.f13]
    return np.array(cells, dtype=np.float64)


def encode_matrix(matrix: FeatureMatrix) -> np.ndarray:
    if not matrix.rows:
        return np.zeros((0, len(encoded_column_names())))
    return np.vstack([encode_vector(fv) for fv in matrix.rows])
