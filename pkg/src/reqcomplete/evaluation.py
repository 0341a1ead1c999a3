"""Incompleteness-simulation harness.

Splits a document 50/50 into disclosed and withheld halves, runs the
prediction pipeline on the disclosed half only, scores the surviving
predictions against the withheld half's novel terminology, and compares
against three non-model baselines.  All randomness is seed-derived and
reports serialize deterministically.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import random
import statistics
from dataclasses import dataclass, field

from .corpus import DomainCorpus, build_tfidf, empty_corpus
from .embeddings import MATCH_THRESHOLD, EmbeddingStore
from .features import RELEVANT, build_matrix
from .filtering import WordLists, dedupe_by_lemma, prediction_lemma, prune
from .masking import generate_masked_instances
from .mlfilter import FilterModel, confusion_metrics, label_dataset
from .nlp import AnnotatedDocument, annotate, annotate_presplit
from .stats import vargha_delaney_a12, wilcoxon_rank_sum
from .wordnet import SynonymLexicon

import numpy as np


class SplitError(ValueError):
    pass


@dataclass(frozen=True)
class DocumentSplit:
    doc_id: str
    seed: int
    disclosed: tuple[int, ...]
    withheld: tuple[int, ...]


def split_document(doc: AnnotatedDocument, seed: int) -> DocumentSplit:
    """Seeded uniform 50/50 (+-1) partition of sentence indices."""
    n = len(doc.sentences)
    if n < 2:
        raise SplitError(f"{doc.doc_id}: need at least 2 sentences, have {n}")
    indices = list(range(n))
    random.Random(seed).shuffle(indices)
    half = (n + 1) // 2
    return DocumentSplit(
        doc_id=doc.doc_id, seed=seed,
        disclosed=tuple(sorted(indices[:half])),
        withheld=tuple(sorted(indices[half:])),
    )


def half_document(doc: AnnotatedDocument, indices: tuple[int, ...],
                  doc_id: str | None = None) -> AnnotatedDocument:
    """Annotate the selected sentences as a standalone document.

    Only the selected sentence texts are touched, so content changes in
    the other half cannot influence the result.  Sentences keep their
    original indices, which keeps recorded-prediction keys stable across
    different splits of the same document.
    """
    texts = [doc.sentences[i].text for i in indices]
    half = annotate_presplit(doc_id or doc.doc_id, texts)
    for sent, original in zip(half.sentences, indices):
        sent.index = original
    return half


def novel_terms(x_terms: set[str], y_terms: set[str],
                common_and_stop: set[str]) -> set[str]:
    """(Y - X) - C: withheld terms absent from disclosed text and C."""
    return (y_terms - x_terms) - common_and_stop


def common_and_stop_set(lists: WordLists, common_cutoff: int = 250) -> set[str]:
    return lists.common_top(common_cutoff) | lists.stop_words | lists.vague_words


@dataclass(frozen=True)
class MetricResult:
    value: float
    flagged: bool = False


def accuracy(d_terms: set[str], n_terms: set[str], store: EmbeddingStore,
             threshold: float = MATCH_THRESHOLD) -> MetricResult:
    """Share of predicted terms matching some novel term."""
    if not d_terms:
        return MetricResult(0.0, flagged=True)
    hits = sum(1 for t in d_terms
               if any(store.is_match(t, t2, threshold) for t2 in n_terms))
    return MetricResult(hits / len(d_terms))


def coverage(d_terms: set[str], n_terms: set[str], store: EmbeddingStore,
             threshold: float = MATCH_THRESHOLD) -> MetricResult:
    """Share of novel terms hinted at by some prediction (counted once)."""
    if not n_terms:
        return MetricResult(0.0, flagged=True)
    hits = sum(1 for t in n_terms
               if any(store.is_match(t, t2, threshold) for t2 in d_terms))
    return MetricResult(hits / len(n_terms))


def filter_metrics(labels: list[str], classifications: list[str]):
    """Classification accuracy/precision/recall of a filter run."""
    if len(labels) != len(classifications):
        raise ValueError("labels and classifications differ in length")
    y_true = np.array([1 if l == RELEVANT else 0 for l in labels])
    y_pred = np.array([1 if c == RELEVANT else 0 for c in classifications])
    return confusion_metrics(y_true, y_pred)


# -- baselines (Appendix-style, scored with the same metrics) ------------------

def baseline1_common_words(disclosed_terms: set[str], withheld_terms: set[str],
                           lists: WordLists,
                           band: tuple[int, int] = (250, 1000)) -> set[str]:
    """Common words in the rank band that only the withheld half uses."""
    from .nlp import lemma_variants
    hits = set()
    for word in lists.common_band(band[0], band[1]):
        variants = lemma_variants(word)
        if variants & disclosed_terms:
            continue
        if word in lists.stop_words:
            continue
        matched = variants & withheld_terms
        if matched:
            hits.add(min(matched))
    return hits


def baseline2_tfidf(corpus: DomainCorpus, disclosed_terms: set[str],
                    withheld_terms: set[str], lists: WordLists,
                    k_top: int = 1000) -> set[str]:
    """Top-k corpus TF-IDF terms that only the withheld half uses."""
    if k_top <= 0 or not corpus.articles:
        return set()
    if not corpus.tfidf_index:
        build_tfidf(corpus)
    best: dict[str, float] = {}
    for vec in corpus.tfidf_index:
        for term, value in vec.items():
            if value > best.get(term, 0.0):
                best[term] = value
    ranked = sorted(best, key=lambda t: (-best[t], t))[:k_top]
    hits = set()
    for term in ranked:
        if term in disclosed_terms or term in lists.stop_words:
            continue
        if term in withheld_terms:
            hits.add(term)
    return hits


def baseline3_synonyms(disclosed_terms: set[str], withheld_terms: set[str],
                       lexicon: SynonymLexicon, lists: WordLists) -> set[str]:
    """WordNet synonyms of disclosed terms that only the withheld half uses."""
    from .nlp import lemma_variants
    hits = set()
    for term in sorted(disclosed_terms):
        for syn in sorted(lexicon.synonyms(term)):
            variants = lemma_variants(syn)
            if variants & disclosed_terms:
                continue
            if syn in lists.stop_words:
                continue
            matched = variants & withheld_terms
            if matched:
                hits.add(min(matched))
    return hits


# -- experiment driver ---------------------------------------------------------

@dataclass
class EvalConfig:
    documents: list[tuple[str, str]]
    provider: object
    k: int = 15
    repetitions: int = 1
    seed: int = 0
    filters: dict[str, FilterModel | None] = field(default_factory=lambda: {"none": None})
    lists: WordLists | None = None
    store: EmbeddingStore | None = None
    common_cutoff: int = 250
    miner: object = None          # callable(disclosed_doc) -> DomainCorpus
    include_baselines: bool = False
    baseline_band: tuple[int, int] = (250, 1000)
    baseline_k_top: int = 1000
    lexicon: SynonymLexicon | None = None
    match_threshold: float = MATCH_THRESHOLD

    def echo(self) -> dict:
        return {
            "documents": [doc_id for doc_id, _ in self.documents],
            "k": self.k, "repetitions": self.repetitions, "seed": self.seed,
            "filters": sorted(self.filters),
            "common_cutoff": self.common_cutoff,
            "include_baselines": self.include_baselines,
            "baseline_band": list(self.baseline_band),
            "baseline_k_top": self.baseline_k_top,
            "match_threshold": self.match_threshold,
            "mining": self.miner is not None,
        }


@dataclass
class EvalReport:
    records: list[dict]
    aggregates: dict
    config: dict
    errors: list[dict] = field(default_factory=list)

    def to_json(self) -> str:
        payload = {"records": self.records, "aggregates": self.aggregates,
                   "config": self.config, "errors": self.errors}
        return json.dumps(payload, indent=2, sort_keys=True)

    def to_csv(self) -> str:
        if not self.records:
            return ""
        columns = sorted({key for rec in self.records for key in rec})
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for rec in self.records:
            writer.writerow(rec)
        return buf.getvalue()


def derive_seed(master: int, doc_id: str, repetition: int) -> int:
    blob = f"{master}␟{doc_id}␟{repetition}".encode("utf-8")
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


def run_single(config: EvalConfig, doc_id: str, text: str,
               repetition: int) -> list[dict]:
    lists = config.lists or WordLists.bundled()
    store = config.store or EmbeddingStore.empty()
    seed = derive_seed(config.seed, doc_id, repetition)

    full = annotate(doc_id, text)
    split = split_document(full, seed)
    disclosed = half_document(full, split.disclosed)
    withheld = half_document(full, split.withheld, doc_id + "#withheld")

    c_set = common_and_stop_set(lists, config.common_cutoff)
    n_set = novel_terms(disclosed.term_set, withheld.term_set, c_set)

    instances = generate_masked_instances(disclosed)
    batches = config.provider.get_predictions_batch(instances, config.k)
    records = [rec for batch in batches for rec in batch]
    pruned = prune(records, disclosed, lists, config.common_cutoff)

    corpus = config.miner(disclosed) if config.miner else empty_corpus()
    matrix = build_matrix(pruned, disclosed, corpus, store, run_seed=seed)
    labeled = label_dataset(pruned, matrix, n_set, store,
                            threshold=config.match_threshold)
    labels = [row.label for row in labeled.rows]

    d_pre = {prediction_lemma(r) for r in dedupe_by_lemma(pruned)}
    acc_pre = accuracy(d_pre, n_set, store, config.match_threshold)
    cov_pre = coverage(d_pre, n_set, store, config.match_threshold)

    base = {
        "doc_id": doc_id, "repetition": repetition, "seed": seed,
        "k": config.k, "sentences": len(full.sentences),
        "disclosed_sentences": len(split.disclosed),
        "withheld_sentences": len(split.withheld),
        "novel_terms": len(n_set), "predictions_pruned": len(pruned),
        "d_pre": len(d_pre),
        "accuracy_pre": acc_pre.value, "coverage_pre": cov_pre.value,
        "metric_flags": acc_pre.flagged or cov_pre.flagged,
    }

    out = []
    for level in sorted(config.filters):
        model = config.filters[level]
        rec = dict(base)
        rec["filter"] = level
        if model is None:
            kept = pruned
            rec["filter_accuracy"] = None
            rec["filter_precision"] = None
            rec["filter_recall"] = None
        else:
            classifications = model.classify_matrix(matrix)
            kept = [r for r, c in zip(pruned, classifications) if c == RELEVANT]
            fm = filter_metrics(labels, classifications)
            rec["filter_accuracy"] = fm.accuracy
            rec["filter_precision"] = fm.precision
            rec["filter_recall"] = fm.recall
        d_post = {prediction_lemma(r) for r in dedupe_by_lemma(kept)}
        acc_post = accuracy(d_post, n_set, store, config.match_threshold)
        cov_post = coverage(d_post, n_set, store, config.match_threshold)
        rec["d_post"] = len(d_post)
        rec["accuracy_post"] = acc_post.value
        rec["coverage_post"] = cov_post.value
        out.append(rec)

    if config.include_baselines:
        b1 = baseline1_common_words(disclosed.term_set, withheld.term_set,
                                    lists, config.baseline_band)
        baselines = {"baseline1": b1}
        baselines["baseline2"] = baseline2_tfidf(
            corpus, disclosed.term_set, withheld.term_set, lists,
            config.baseline_k_top)
        if config.lexicon is not None:
            baselines["baseline3"] = baseline3_synonyms(
                disclosed.term_set, withheld.term_set, config.lexicon, lists)
        for name, hits in sorted(baselines.items()):
            rec = dict(base)
            rec["filter"] = name
            rec["d_post"] = len(hits)
            rec["accuracy_post"] = accuracy(hits, n_set, store,
                                            config.match_threshold).value
            rec["coverage_post"] = coverage(hits, n_set, store,
                                            config.match_threshold).value
            rec["filter_accuracy"] = None
            rec["filter_precision"] = None
            rec["filter_recall"] = None
            out.append(rec)
    return out


def run_experiment(config: EvalConfig) -> EvalReport:
    records: list[dict] = []
    errors: list[dict] = []
    for doc_id, text in config.documents:
        for rep in range(config.repetitions):
            try:
                records.extend(run_single(config, doc_id, text, rep))
            except Exception as exc:  # per-document failures do not stop the run
                errors.append({"doc_id": doc_id, "repetition": rep,
                               "error": f"{type(exc).__name__}: {exc}"})
    aggregates = _aggregate(records)
    return EvalReport(records=records, aggregates=aggregates,
                      config=config.echo(), errors=errors)


def _aggregate(records: list[dict]) -> dict:
    by_level: dict[str, dict[str, list[float]]] = {}
    for rec in records:
        level = rec["filter"]
        slot = by_level.setdefault(level, {"accuracy": [], "coverage": []})
        slot["accuracy"].append(rec["accuracy_post"])
        slot["coverage"].append(rec["coverage_post"])
    out: dict = {"levels": {}, "comparisons": {}, "plot_series": {}}
    for level, data in sorted(by_level.items()):
        out["levels"][level] = {
            "runs": len(data["accuracy"]),
            "mean_accuracy": statistics.fmean(data["accuracy"]),
            "median_accuracy": statistics.median(data["accuracy"]),
            "mean_coverage": statistics.fmean(data["coverage"]),
            "median_coverage": statistics.median(data["coverage"]),
        }
        out["plot_series"][level] = {
            "accuracy": data["accuracy"], "coverage": data["coverage"],
        }
    reference = by_level.get("none")
    if reference:
        for level, data in sorted(by_level.items()):
            if level == "none" or len(data["accuracy"]) < 1:
                continue
            comp = {}
            for metric in ("accuracy", "coverage"):
                a, b = data[metric], reference[metric]
                if a and b:
                    comp[metric] = {
                        "p_value": wilcoxon_rank_sum(a, b),
                        "a12": vargha_delaney_a12(a, b),
                    }
            out["comparisons"][f"{level}_vs_none"] = comp
    return out
