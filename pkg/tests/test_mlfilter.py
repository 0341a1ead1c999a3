"""Classifier training, sampling, CV, tuning, IG and persistence tests."""

import math
import random

import pytest

from reqcomplete.embeddings import EmbeddingStore
from reqcomplete.features import NON_RELEVANT, RELEVANT, FeatureMatrix, build_matrix
from reqcomplete.corpus import empty_corpus
from reqcomplete.masking import generate_masked_instances
from reqcomplete.mlfilter import (
    CostMatrix,
    LabeledDataset,
    ModelError,
    ModelLoadError,
    SchemaMismatchError,
    classify,
    cross_validate,
    info_gain_ranking,
    label_dataset,
    load_model,
    merge_datasets,
    preset,
    save,
    stratified_folds,
    train,
    tune,
    undersample,
)
from reqcomplete.mlm import Prediction, PredictionRecord
from reqcomplete.nlp import annotate

from synth import dataset_from_points, imbalanced_dataset, make_vector, separable_dataset


class TestLabelDataset:
    def _records_and_matrix(self):
        doc = annotate("d", "The service shall guarantee the availability "
                            "of the system.")
        inst = [i for i in generate_masked_instances(doc)
                if i.masked_surface == "availability"][0]
        records = [
            PredictionRecord(inst, Prediction("stability", 0.4), 1),
            PredictionRecord(inst, Prediction("performance", 0.3), 2),
            PredictionRecord(inst, Prediction("networks", 0.2), 3),
        ]
        matrix = build_matrix(records, doc, empty_corpus(), EmbeddingStore.empty())
        return records, matrix

    def test_lexical_match_is_relevant(self):
        records, matrix = self._records_and_matrix()
        ds = label_dataset(records, matrix, {"stability", "network"},
                           EmbeddingStore.empty())
        assert [r.label for r in ds.rows] == [RELEVANT, NON_RELEVANT, RELEVANT]

    def test_empty_novel_set_all_non_relevant(self):
        records, matrix = self._records_and_matrix()
        ds = label_dataset(records, matrix, set(), EmbeddingStore.empty())
        assert {r.label for r in ds.rows} == {NON_RELEVANT}


class TestUndersample:
    def test_90_10_ratio_one(self):
        ds = imbalanced_dataset(n=100, seed=1)  # 90/10
        out = undersample(ds, 1.0, seed=2)
        assert out.class_counts == {RELEVANT: 10, NON_RELEVANT: 10}

    def test_ratio_two(self):
        ds = imbalanced_dataset(n=100, seed=1)
        out = undersample(ds, 2.0, seed=2)
        assert out.class_counts == {RELEVANT: 10, NON_RELEVANT: 20}

    def test_seeded_determinism(self):
        ds = imbalanced_dataset(n=200, seed=1)
        a = undersample(ds, 1.0, seed=5)
        b = undersample(ds, 1.0, seed=5)
        assert [id(r) for r in a.rows] == [id(r) for r in b.rows]

    def test_minority_rows_never_removed(self):
        ds = imbalanced_dataset(n=200, seed=1)
        out = undersample(ds, 1.0, seed=5)
        before = sum(1 for r in ds.rows if r.label == RELEVANT)
        after = sum(1 for r in out.rows if r.label == RELEVANT)
        assert before == after

    def test_single_class_errors(self):
        ds = dataset_from_points([(1, 1, 0), (2, 2, 0)])
        with pytest.raises(ValueError):
            undersample(ds)


class TestTrainClassify:
    def test_lr_separable_high_training_accuracy(self):
        ds = separable_dataset(n=200, seed=3)
        model = train("LR", ds, seed=0)
        correct = sum(1 for r in ds.rows if classify(model, r) == r.label)
        assert correct / len(ds.rows) >= 0.99

    def test_constant_features_majority_predictor(self):
        points = [(5, 5, 0)] * 8 + [(5, 5, 1)] * 2
        ds = dataset_from_points(points)
        model = train("DT", ds, seed=0)
        preds = {classify(model, r) for r in ds.rows}
        assert preds == {NON_RELEVANT}

    def test_rf_seeded_determinism(self):
        ds = imbalanced_dataset(n=150, seed=2)
        m1 = train("RF", ds, seed=9)
        m2 = train("RF", ds, seed=9)
        assert [classify(m1, r) for r in ds.rows] == \
            [classify(m2, r) for r in ds.rows]

    def test_all_algorithms_train(self):
        ds = separable_dataset(n=60, seed=4)
        for algo in ("LR", "DT", "RF", "SVM", "NN"):
            model = train(algo, ds, seed=0)
            assert classify(model, ds.rows[0]) in (RELEVANT, NON_RELEVANT)

    def test_unsupported_algorithm(self):
        with pytest.raises(ModelError):
            train("XGB", separable_dataset(n=20), seed=0)

    def test_undefined_f9_is_classifiable(self):
        ds = separable_dataset(n=60, seed=4)
        model = train("LR", ds, seed=0)
        fv = make_vector(10, 10)
        fv.f9 = None
        assert classify(model, fv) in (RELEVANT, NON_RELEVANT)

    def test_schema_mismatch_rejected(self):
        ds = separable_dataset(n=40, seed=4)
        model = train("LR", ds, seed=0)
        model.fingerprint = "doctored"
        matrix = FeatureMatrix(rows=[make_vector(1, 1)], provenance={})
        with pytest.raises(SchemaMismatchError):
            model.classify_matrix(matrix)


class TestCrossValidate:
    def test_perfect_on_separable(self):
        result = cross_validate("LR", separable_dataset(n=100, seed=5), folds=5)
        assert result.precision == 1.0
        assert result.recall == 1.0

    def test_fold_partition_property(self):
        ds = separable_dataset(n=103, seed=6)
        _, y = ds.xy()
        folds = stratified_folds(y, 10, seed=0)
        flat = sorted(i for f in folds for i in f)
        assert flat == list(range(103))

    def test_random_labels_near_majority_accuracy(self):
        rng = random.Random(7)
        accs = []
        for seed in range(20):
            points = [(rng.uniform(0, 1), rng.uniform(0, 1), rng.random() < 0.3 and 1 or 0)
                      for _ in range(120)]
            n_major = max(sum(1 for p in points if p[2] == 0),
                          sum(1 for p in points if p[2] == 1))
            if n_major == 120:
                continue
            result = cross_validate("DT", dataset_from_points(points),
                                    folds=4, seed=seed,
                                    hyperparameters={"max_depth": 3})
            accs.append((result.accuracy, n_major / 120))
        mean_acc = sum(a for a, _ in accs) / len(accs)
        mean_major = sum(m for _, m in accs) / len(accs)
        assert abs(mean_acc - mean_major) < 0.15

    def test_folds_exceeding_minority_errors(self):
        ds = imbalanced_dataset(n=50, seed=8)  # 5 relevant rows
        with pytest.raises(ValueError):
            cross_validate("LR", ds, folds=10)


class TestTune:
    def test_budget_one_returns_a_config(self):
        ds = separable_dataset(n=60, seed=9)
        hp = tune("DT", ds, budget=1, seed=0, folds=3)
        assert set(hp) == {"max_depth", "min_samples_leaf"}

    def test_space_of_size_one(self):
        ds = separable_dataset(n=60, seed=9)
        hp = tune("LR", ds, search_space={"C": [0.5]}, budget=4, seed=0, folds=3)
        assert hp == {"C": 0.5}

    def test_budget_prefix_monotonicity(self):
        ds = imbalanced_dataset(n=120, seed=10, separation=1.0)

        def best_acc(budget):
            hp = tune("DT", ds, budget=budget, seed=3, folds=3)
            return cross_validate("DT", ds, folds=3, hyperparameters=hp,
                                  seed=3).accuracy

        assert best_acc(6) >= best_acc(2) - 1e-12


class TestInfoGain:
    def test_label_copy_feature_ranks_first(self):
        # f12 mirrors the label exactly; f13 is noise
        rng = random.Random(11)
        points = [(1.0 if i % 3 == 0 else 0.0, rng.uniform(0, 1), 1 if i % 3 == 0 else 0)
                  for i in range(90)]
        ds = dataset_from_points([(p[0] * 100, p[1] * 100, p[2]) for p in points])
        ranking = info_gain_ranking(ds)
        names = [name for name, _ in ranking]
        assert names.index("f12") < names.index("f13")
        top_name, top_gain = ranking[0]
        assert top_name in ("f12", "f4")  # f4 = round(f12 input), same signal
        assert top_gain == pytest.approx(_entropy_of(points), abs=1e-9)

    def test_constant_feature_zero_gain(self):
        ds = separable_dataset(n=50, seed=12)
        gains = dict(info_gain_ranking(ds))
        assert gains["f7"] == pytest.approx(0.0, abs=1e-12)

    def test_hand_computed_eight_rows(self):
        # 8 rows, f12 in two groups: group A (4 rows) all relevant,
        # group B (4 rows) 1 relevant / 3 not.
        points = [(0, 0, 1)] * 4 + [(50, 0, 1)] + [(50, 0, 0)] * 3
        ds = dataset_from_points(points)
        gains = dict(info_gain_ranking(ds))
        h_base = -(5 / 8) * math.log2(5 / 8) - (3 / 8) * math.log2(3 / 8)
        h_b = -(1 / 4) * math.log2(1 / 4) - (3 / 4) * math.log2(3 / 4)
        expected = h_base - (4 / 8) * 0.0 - (4 / 8) * h_b
        assert gains["f12"] == pytest.approx(expected, abs=1e-9)


def _entropy_of(points):
    n = len(points)
    pos = sum(1 for p in points if p[2] == 1) / n
    return -(pos * math.log2(pos) + (1 - pos) * math.log2(1 - pos))


class TestPresets:
    def test_three_presets_record_configs(self):
        ds = imbalanced_dataset(n=120, seed=13)
        strict = preset("strict", ds, seed=0)
        moderate = preset("moderate", ds, seed=0)
        lenient = preset("lenient", ds, seed=0)
        assert strict.config["preset"] == "strict"
        assert strict.algorithm == "RF"
        assert strict.config["sampling"] is None
        assert moderate.algorithm == "RF"
        assert moderate.config["sampling"] == {"ratio": 1.0, "seed": 0}
        assert lenient.algorithm == "SVM"
        assert lenient.config["cost"] == {"cost_fn": 2.0, "cost_fp": 1.0}

    def test_unknown_preset(self):
        with pytest.raises(ModelError):
            preset("brutal", imbalanced_dataset(n=40, seed=1))


class TestPersistence:
    def test_roundtrip_classifications(self, tmp_path):
        ds = imbalanced_dataset(n=150, seed=14)
        model = train("RF", ds, seed=1)
        path = tmp_path / "model.bin"
        save(model, path)
        loaded = load_model(path)
        rng = random.Random(15)
        probes = [make_vector(rng.uniform(0, 40), rng.uniform(0, 40))
                  for _ in range(100)]
        assert [classify(loaded, p) for p in probes] == \
            [classify(model, p) for p in probes]
        assert loaded.fingerprint == model.fingerprint

    def test_corrupted_file(self, tmp_path):
        path = tmp_path / "model.bin"
        path.write_bytes(b"\x00\x01garbage")
        with pytest.raises(ModelLoadError):
            load_model(path)

    def test_wrong_format(self, tmp_path):
        import pickle
        path = tmp_path / "model.bin"
        path.write_bytes(pickle.dumps({"format": "other/9"}))
        with pytest.raises(ModelLoadError):
            load_model(path)


class TestCostSensitive:
    def test_csl_recall_not_worse_on_average(self):
        # statistical property over seeds on a fixed imbalanced distribution
        deltas = []
        for seed in range(10):
            train_ds = imbalanced_dataset(n=300, seed=seed, separation=2.0)
            test_ds = imbalanced_dataset(n=300, seed=1000 + seed, separation=2.0)
            X_te, y_te = test_ds.xy()
            for algo in ("LR", "SVM"):
                plain = train(algo, train_ds, seed=seed)
                weighted = train(algo, train_ds, cost=CostMatrix(2, 1), seed=seed)
                from reqcomplete.mlfilter import confusion_metrics
                r_plain = confusion_metrics(y_te, plain.estimator.predict(X_te)).recall
                r_csl = confusion_metrics(y_te, weighted.estimator.predict(X_te)).recall
                deltas.append(r_csl - r_plain)
        assert sum(deltas) / len(deltas) >= 0.0

    def test_merge_datasets(self):
        a = imbalanced_dataset(n=50, seed=20)
        b = imbalanced_dataset(n=60, seed=21)
        merged = merge_datasets([a, b])
        assert len(merged.rows) == 110
        assert merged.provenance == ["synthetic", "synthetic"]
