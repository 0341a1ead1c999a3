#!/usr/bin/env python3
"""Train and compare the three relevance-filter presets on synthetic data.

The labelled set is imbalanced on purpose (relevant terms are the rare
class, as they are in practice).  Shows under-sampling, cost-sensitive
training, cross-validation, and information-gain feature ranking.
"""

import random

from reqcomplete.features import NON_RELEVANT, RELEVANT, FeatureMatrix, FeatureVector
from reqcomplete.mlfilter import (
    LabeledDataset,
    cross_validate,
    info_gain_ranking,
    preset,
    undersample,
)


def synthetic_dataset(n=600, seed=0):
    """Imbalanced two-class set expressed through the real feature schema."""
    rng = random.Random(seed)
    rows = []
    for i in range(n):
        relevant = i % 10 == 0  # 10% relevant
        center = 4.0 if relevant else 1.2
        f12 = max(0.0, rng.gauss(center, 0.8)) / 5
        f13 = min(1.0, f12 + rng.random() * 0.1)
        rows.append(FeatureVector(
            f1="noun" if rng.random() < 0.7 else "verb",
            f2="NN", f3=True, f4=rng.randint(3, 12), f5=rng.randint(3, 12),
            f6=rng.uniform(0.3, 1.0), f7=rng.random(),
            f8=rng.randint(1, 10), f9=None,
            f10=rng.randint(0, 9), f11=rng.randint(0, 9),
            f12=f12, f13=f13,
            label=RELEVANT if relevant else NON_RELEVANT))
    matrix = FeatureMatrix(rows=rows, provenance={"doc_id": "synthetic"})
    return LabeledDataset(matrix=matrix, provenance=["synthetic"])


def main():
    dataset = synthetic_dataset()
    print(f"dataset: {dataset.class_counts}")
    sampled = undersample(dataset, ratio=1.0, seed=0)
    print(f"after 1:1 under-sampling: {sampled.class_counts}\n")

    print("10-fold cross-validation per algorithm (full set):")
    for algo in ("LR", "DT", "RF", "SVM", "NN"):
        result = cross_validate(algo, dataset, folds=10, seed=0)
        print(f"  {algo:4} accuracy {result.accuracy:.3f} "
              f"precision {result.precision:.3f} recall {result.recall:.3f}")

    print("\nthe three presets:")
    for name in ("strict", "moderate", "lenient"):
        model = preset(name, dataset, seed=0)
        kept = sum(1 for row in dataset.rows
                   if model.classify_vector(row) == RELEVANT)
        print(f"  {name:9} ({model.algorithm}) keeps {kept}/{len(dataset.rows)} "
              f"rows as relevant")

    print("\nfeature ranking by information gain:")
    for feature, gain in info_gain_ranking(dataset)[:5]:
        print(f"  {feature:4} {gain:.4f}")


if __name__ == "__main__":
    main()
