"""Supervised relevance filtering of predictions.

Five classifier families over the fixed feature schema, with seeded
under-sampling, cost-sensitive training, stratified cross-validation,
random-search tuning, information-gain feature ranking, and a versioned
model container.  Estimators come from scikit-learn; everything around
them (folds, sampling, search, IG) is implemented here so behavior is
fully seeded and reproducible.
"""

from __future__ import annotations

import math
import pickle
import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sklearn.ensemble import RandomForestClassifier
from sklearn.linear_model import LogisticRegression
from sklearn.neural_network import MLPClassifier
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler
from sklearn.svm import SVC
from sklearn.tree import DecisionTreeClassifier

from .embeddings import EmbeddingStore
from .features import (
    NON_RELEVANT,
    RELEVANT,
    FeatureMatrix,
    FeatureVector,
    encode_matrix,
    encode_vector,
    schema_fingerprint,
)
from .filtering import prediction_lemma
from .mlm import PredictionRecord

ALGORITHMS = ("LR", "DT", "RF", "SVM", "NN")
MODEL_FORMAT = "filter-model/1"


class ModelError(Exception):
    pass


class SchemaMismatchError(ModelError):
    pass


class ModelLoadError(ModelError):
    pass


@dataclass(frozen=True)
class CostMatrix:
    """Misclassification costs; false negatives default to double cost."""

    cost_fn: float = 2.0
    cost_fp: float = 1.0

    def __post_init__(self):
        if self.cost_fn <= 0 or self.cost_fp <= 0:
            raise ValueError("costs must be positive")


@dataclass
class LabeledDataset:
    matrix: FeatureMatrix
    provenance: list[str] = field(default_factory=list)

    def __post_init__(self):
        unlabeled = [i for i, r in enumerate(self.matrix.rows) if r.label is None]
        if unlabeled:
            raise ValueError(f"rows without labels: {unlabeled[:5]}")

    @property
    def rows(self) -> list[FeatureVector]:
        return self.matrix.rows

    @property
    def class_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for row in self.rows:
            counts[row.label] = counts.get(row.label, 0) + 1
        return counts

    def xy(self) -> tuple[np.ndarray, np.ndarray]:
        X = encode_matrix(self.matrix)
        y = np.array([1 if r.label == RELEVANT else 0 for r in self.rows])
        return X, y


def label_dataset(records: list[PredictionRecord], matrix: FeatureMatrix,
                  novel_terms: set[str], store: EmbeddingStore,
                  threshold: float = 0.85) -> LabeledDataset:
    """Label rows relevant iff the prediction matches any novel term."""
    if len(records) != len(matrix.rows):
        raise ValueError("records and matrix rows differ in length")
    for rec, row in zip(records, matrix.rows):
        lemma = prediction_lemma(rec)
        hit = any(store.is_match(lemma, t, threshold) for t in novel_terms)
        row.label = RELEVANT if hit else NON_RELEVANT
    return LabeledDataset(matrix=matrix, provenance=[matrix.provenance.get("doc_id", "?")])


def merge_datasets(datasets: list[LabeledDataset]) -> LabeledDataset:
    """Aggregate labelled rows from several documents into one training set."""
    if not datasets:
        raise ValueError("no datasets to merge")
    rows = [r for ds in datasets for r in ds.rows]
    provenance = [p for ds in datasets for p in ds.provenance]
    merged = FeatureMatrix(rows=rows,
                           provenance={"doc_id": "+".join(provenance),
                                       "n_records": len(rows)})
    return LabeledDataset(matrix=merged, provenance=provenance)


def undersample(dataset: LabeledDataset, ratio: float = 1.0,
                seed: int = 0) -> LabeledDataset:
    """Randomly shrink the majority class to ratio x minority size."""
    counts = dataset.class_counts
    if len(counts) < 2:
        raise ValueError("under-sampling needs both classes present")
    minority = min(counts, key=counts.get)
    majority = max(counts, key=counts.get)
    keep_n = min(counts[majority], int(round(ratio * counts[minority])))
    majority_idx = [i for i, r in enumerate(dataset.rows) if r.label == majority]
    rng = random.Random(seed)
    kept = set(rng.sample(majority_idx, keep_n))
    rows = [r for i, r in enumerate(dataset.rows)
            if r.label == minority or i in kept]
    matrix = FeatureMatrix(rows=rows, provenance=dict(dataset.matrix.provenance))
    matrix.provenance["undersampled"] = {"ratio": ratio, "seed": seed}
    return LabeledDataset(matrix=matrix, provenance=list(dataset.provenance))


DEFAULT_HYPERPARAMETERS: dict[str, dict] = {
    "LR": {"C": 1.0, "max_iter": 2000},
    "DT": {"max_depth": None, "min_samples_leaf": 1},
    "RF": {"n_estimators": 100, "max_depth": None, "min_samples_leaf": 1},
    "SVM": {"C": 1.0, "kernel": "rbf", "gamma": "scale"},
    "NN": {"hidden_width": 32, "max_iter": 800, "alpha": 1e-4},
}

SEARCH_SPACES: dict[str, dict[str, list]] = {
    "LR": {"C": [0.01, 0.1, 1.0, 10.0, 100.0]},
    "DT": {"max_depth": [None, 3, 5, 10, 20], "min_samples_leaf": [1, 2, 5, 10]},
    "RF": {"n_estimators": [50, 100, 200], "max_depth": [None, 5, 10, 20],
           "min_samples_leaf": [1, 2, 5]},
    "SVM": {"C": [0.1, 1.0, 10.0], "kernel": ["rbf", "linear"],
            "gamma": ["scale", "auto"]},
    "NN": {"hidden_width": [8, 16, 32, 64], "alpha": [1e-5, 1e-4, 1e-3]},
}


def _build_estimator(algorithm: str, hp: dict, cost: CostMatrix | None, seed: int):
    weight = None
    if cost is not None:
        weight = {1: cost.cost_fn, 0: cost.cost_fp}
    # scale-sensitive estimators get feature standardization built in
    if algorithm == "LR":
        return make_pipeline(
            StandardScaler(),
            LogisticRegression(C=hp["C"], max_iter=hp["max_iter"],
                               class_weight=weight, random_state=seed))
    if algorithm == "DT":
        return DecisionTreeClassifier(max_depth=hp["max_depth"],
                                      min_samples_leaf=hp["min_samples_leaf"],
                                      class_weight=weight, random_state=seed)
    if algorithm == "RF":
        return RandomForestClassifier(n_estimators=hp["n_estimators"],
                                      max_depth=hp["max_depth"],
                                      min_samples_leaf=hp["min_samples_leaf"],
                                      class_weight=weight, random_state=seed)
    if algorithm == "SVM":
        return make_pipeline(
            StandardScaler(),
            SVC(C=hp["C"], kernel=hp["kernel"], gamma=hp["gamma"],
                class_weight=weight, random_state=seed))
    if algorithm == "NN":
        return make_pipeline(
            StandardScaler(),
            MLPClassifier(hidden_layer_sizes=(hp["hidden_width"],),
                          max_iter=hp["max_iter"], alpha=hp["alpha"],
                          random_state=seed))
    raise ModelError(f"unsupported algorithm {algorithm!r}")


def _fit(estimator, algorithm, X, y, cost):
    if algorithm == "NN" and cost is not None:
        # MLP takes no class weights; replicate relevant rows instead.
        times = max(1, int(round(cost.cost_fn / cost.cost_fp)))
        pos = np.where(y == 1)[0]
        if times > 1 and len(pos):
            X = np.vstack([X] + [X[pos]] * (times - 1))
            y = np.concatenate([y] + [y[pos]] * (times - 1))
    estimator.fit(X, y)
    return estimator


@dataclass
class FilterModel:
    algorithm: str
    estimator: object
    config: dict
    fingerprint: str = field(default_factory=schema_fingerprint)

    def classify_vector(self, fv: FeatureVector) -> str:
        pred = self.estimator.predict(encode_vector(fv).reshape(1, -1))[0]
        return RELEVANT if pred == 1 else NON_RELEVANT

    def classify_matrix(self, matrix: FeatureMatrix) -> list[str]:
        if matrix.fingerprint != self.fingerprint:
            raise SchemaMismatchError("matrix schema differs from training schema")
        if not matrix.rows:
            return []
        preds = self.estimator.predict(encode_matrix(matrix))
        return [RELEVANT if p == 1 else NON_RELEVANT for p in preds]


def train(algorithm: str, dataset: LabeledDataset,
          hyperparameters: dict | None = None,
          cost: CostMatrix | None = None, seed: int = 0) -> FilterModel:
    if algorithm not in ALGORITHMS:
        raise ModelError(f"unsupported algorithm {algorithm!r}")
    X, y = dataset.xy()
    if len(X) == 0:
        raise ModelError("empty dataset")
    hp = {**DEFAULT_HYPERPARAMETERS[algorithm], **(hyperparameters or {})}
    if len(set(y.tolist())) < 2:
        estimator = _MajorityClass().fit(X, y)
    else:
        estimator = _fit(_build_estimator(algorithm, hp, cost, seed),
                         algorithm, X, y, cost)
    config = {"algorithm": algorithm, "hyperparameters": hp, "seed": seed,
              "cost": None if cost is None else
              {"cost_fn": cost.cost_fn, "cost_fp": cost.cost_fp},
              "class_counts": dataset.class_counts,
              "sampling": dataset.matrix.provenance.get("undersampled"),
              "provenance": dataset.provenance}
    return FilterModel(algorithm=algorithm, estimator=estimator, config=config)


class _MajorityClass:
    """Degenerate single-class fallback used when only one label is present."""

    def fit(self, X, y):
        values, counts = np.unique(y, return_counts=True)
        self.value = int(values[np.argmax(counts)])
        return self

    def predict(self, X):
        return np.full(len(X), self.value)


def classify(model: FilterModel, fv: FeatureVector) -> str:
    return model.classify_vector(fv)


# -- evaluation --------------------------------------------------------------

@dataclass
class FoldMetrics:
    accuracy: float
    precision: float
    recall: float
    flags: list[str] = field(default_factory=list)


@dataclass
class CVResult:
    folds: list[FoldMetrics]
    accuracy: float
    precision: float
    recall: float


def confusion_metrics(y_true, y_pred) -> FoldMetrics:
    tp = int(np.sum((y_true == 1) & (y_pred == 1)))
    tn = int(np.sum((y_true == 0) & (y_pred == 0)))
    fp = int(np.sum((y_true == 0) & (y_pred == 1)))
    fn = int(np.sum((y_true == 1) & (y_pred == 0)))
    flags = []
    total = tp + tn + fp + fn
    accuracy = (tp + tn) / total if total else 0.0
    if tp + fp:
        precision = tp / (tp + fp)
    else:
        precision, flags = 0.0, flags + ["no-predicted-positives"]
    if tp + fn:
        recall = tp / (tp + fn)
    else:
        recall, flags = 0.0, flags + ["no-actual-positives"]
    return FoldMetrics(accuracy=accuracy, precision=precision, recall=recall,
                       flags=flags)


def stratified_folds(y: np.ndarray, folds: int, seed: int) -> list[list[int]]:
    """Disjoint, covering, class-balanced folds (round-robin after shuffle)."""
    assignments: list[list[int]] = [[] for _ in range(folds)]
    rng = random.Random(seed)
    for cls in sorted(set(y.tolist())):
        idx = [i for i, v in enumerate(y.tolist()) if v == cls]
        rng.shuffle(idx)
        for j, i in enumerate(idx):
            assignments[j % folds].append(i)
    return [sorted(f) for f in assignments]


def cross_validate(algorithm: str, dataset: LabeledDataset, folds: int = 10,
                   hyperparameters: dict | None = None,
                   cost: CostMatrix | None = None, seed: int = 0) -> CVResult:
    if folds < 2:
        raise ValueError("folds must be >= 2")
    X, y = dataset.xy()
    counts = dataset.class_counts
    if len(counts) >= 2 and folds > min(counts.values()):
        raise ValueError(f"folds={folds} exceeds minority class size "
                         f"{min(counts.values())}")
    hp = {**DEFAULT_HYPERPARAMETERS[algorithm], **(hyperparameters or {})}
    fold_idx = stratified_folds(y, folds, seed)
    per_fold = []
    for test_idx in fold_idx:
        test_mask = np.zeros(len(y), dtype=bool)
        test_mask[test_idx] = True
        X_tr, y_tr = X[~test_mask], y[~test_mask]
        X_te, y_te = X[test_mask], y[test_mask]
        if len(set(y_tr.tolist())) < 2:
            estimator = _MajorityClass().fit(X_tr, y_tr)
        else:
            estimator = _fit(_build_estimator(algorithm, hp, cost, seed),
                             algorithm, X_tr, y_tr, cost)
        per_fold.append(confusion_metrics(y_te, estimator.predict(X_te)))
    return CVResult(
        folds=per_fold,
        accuracy=sum(f.accuracy for f in per_fold) / folds,
        precision=sum(f.precision for f in per_fold) / folds,
        recall=sum(f.recall for f in per_fold) / folds,
    )


def tune(algorithm: str, dataset: LabeledDataset,
         search_space: dict[str, list] | None = None, budget: int = 10,
         seed: int = 0, folds: int = 10, cost: CostMatrix | None = None) -> dict:
    """Random search over the space; returns the best CV-accuracy config.

    Configurations are drawn from one seeded stream, so a larger budget
    evaluates a superset of a smaller one and never does worse.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    space = search_space or SEARCH_SPACES[algorithm]
    rng = random.Random(seed)
    best_hp, best_acc = None, -1.0
    for _ in range(budget):
        hp = {name: rng.choice(values) for name, values in sorted(space.items())}
        result = cross_validate(algorithm, dataset, folds=folds,
                                hyperparameters=hp, cost=cost, seed=seed)
        if result.accuracy > best_acc:
            best_hp, best_acc = hp, result.accuracy
    return best_hp


# -- information gain ---------------------------------------------------------

def _entropy(labels: list) -> float:
    n = len(labels)
    if n == 0:
        return 0.0
    h = 0.0
    for cls in set(labels):
        p = labels.count(cls) / n
        h -= p * math.log2(p)
    return h


def _discretize(values: list[float], bins: int = 10) -> list[int]:
    """Equal-frequency binning; tied values always share one bin."""
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i])
    out = [0] * n
    i = 0
    while i < n:
        j = i
        while j < n and values[order[j]] == values[order[i]]:
            j += 1
        mid_rank = (i + j - 1) / 2
        bucket = min(int(bins * mid_rank / n), bins - 1)
        for k in range(i, j):
            out[order[k]] = bucket
        i = j
    return out


def info_gain_ranking(dataset: LabeledDataset) -> list[tuple[str, float]]:
    """Features sorted by information gain about the relevance label."""
    labels = [r.label for r in dataset.rows]
    base = _entropy(labels)
    n = len(labels)
    gains = []
    for feature in [f"f{i}" for i in range(1, 14)]:
        raw = [getattr(r, feature) for r in dataset.rows]
        kind = "nominal" if feature in ("f1", "f2", "f3") else \
            "ordinal" if feature in ("f10", "f11") else "numeric"
        if kind == "numeric":
            oov = [v is None for v in raw]
            numeric = [0.0 if v is None else float(v) for v in raw]
            binned = _discretize(numeric)
            values = ["oov" if o else str(b) for o, b in zip(oov, binned)]
        else:
            values = [str(v) for v in raw]
        cond = 0.0
        for v in set(values):
            sub = [lab for val, lab in zip(values, labels) if val == v]
            cond += len(sub) / n * _entropy(sub)
        gains.append((feature, base - cond))
    gains.sort(key=lambda kv: (-kv[1], kv[0]))
    return gains


# -- presets -----------------------------------------------------------------

def preset(name: str, dataset: LabeledDataset, seed: int = 0,
           hyperparameters: dict | None = None) -> FilterModel:
    """The three filtering strengths: strict, moderate, lenient."""
    if name == "strict":
        model = train("RF", dataset, hyperparameters, seed=seed)
    elif name == "moderate":
        model = train("RF", undersample(dataset, 1.0, seed=seed),
                      hyperparameters, seed=seed)
    elif name == "lenient":
        model = train("SVM", undersample(dataset, 1.0, seed=seed),
                      hyperparameters, cost=CostMatrix(2.0, 1.0), seed=seed)
    else:
        raise ModelError(f"unknown preset {name!r}")
    model.config["preset"] = name
    return model


# -- persistence ---------------------------------------------------------------

def save(model: FilterModel, path: str | Path) -> None:
    payload = {"format": MODEL_FORMAT, "algorithm": model.algorithm,
               "estimator": model.estimator, "config": model.config,
               "fingerprint": model.fingerprint}
    with open(path, "wb") as fh:
        pickle.dump(payload, fh)


def load_model(path: str | Path) -> FilterModel:
    try:
        with open(path, "rb") as fh:
            payload = pickle.load(fh)
    except Exception as exc:
        raise ModelLoadError(f"cannot read model {path}: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != MODEL_FORMAT:
        raise ModelLoadError(f"unsupported model format in {path}")
    return FilterModel(algorithm=payload["algorithm"],
                       estimator=payload["estimator"],
                       config=payload["config"],
                       fingerprint=payload["fingerprint"])
