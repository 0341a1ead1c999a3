"""Terminology-completion assistant for natural-language requirements.

Masks each noun/verb in a document, asks a masked-language-model provider
for candidate fillers, prunes the obviously unhelpful ones, and (optionally)
applies a trained relevance filter; an evaluation harness simulates
omissions by withholding half of a document and scoring predictions
against the withheld half's novel terms.
"""

from .corpus import (
    DomainCorpus,
    Keyphrase,
    MiningLimits,
    WikiClient,
    build_tfidf,
    extract_keyphrases,
    mine,
)
from .embeddings import EmbeddingStore
from .evaluation import EvalConfig, EvalReport, run_experiment, split_document
from .features import FeatureMatrix, FeatureVector, build_matrix
from .filtering import WordLists, dedupe_by_lemma, prune
from .masking import MaskedInstance, generate_masked_instances, render_for_model
from .mlfilter import CostMatrix, FilterModel, cross_validate, preset, train
from .mlm import (
    FixtureProvider,
    FixtureStore,
    HttpProvider,
    Prediction,
    PredictionRecord,
)
from .nlp import AnnotatedDocument, annotate

__version__ = "0.1.0"

__all__ = [
    "AnnotatedDocument", "annotate",
    "MaskedInstance", "generate_masked_instances", "render_for_model",
    "Prediction", "PredictionRecord", "HttpProvider", "FixtureProvider", "FixtureStore",
    "WordLists", "prune", "dedupe_by_lemma",
    "Keyphrase", "DomainCorpus", "MiningLimits", "WikiClient",
    "extract_keyphrases", "mine", "build_tfidf",
    "EmbeddingStore",
    "FeatureVector", "FeatureMatrix", "build_matrix",
    "CostMatrix", "FilterModel", "train", "preset", "cross_validate",
    "EvalConfig", "EvalReport", "run_experiment", "split_document",
    "__version__",
]
