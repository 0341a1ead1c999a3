"""Acceptance suite: one test per release criterion.

Each test prints a PASS line for its criterion when it succeeds (run with
-s to see them).  Criterion 11 is the optional live-provider integration
property run; it skips unless RC_PROVIDER_URL (and optionally
RC_EMBEDDINGS, RC_DOCUMENT) are set.  Criterion 13 lives in the inference
sidecar's own test suite (sidecar/tests), which is intentionally not
imported here: this entire suite runs with the fixture provider alone.
"""

import itertools
import json
import os
import random
import string
import time
from pathlib import Path

import pytest

from reqcomplete.cli import EXIT_OK, main
from reqcomplete.corpus import Keyphrase, WikiClient, build_tfidf, empty_corpus, mine
from reqcomplete.embeddings import EmbeddingStore, load as load_embeddings
from reqcomplete.evaluation import (
    accuracy,
    common_and_stop_set,
    coverage,
    derive_seed,
    half_document,
    novel_terms,
    split_document,
)
from reqcomplete.features import build_matrix, edit_distance, quantile_bucket, tfidf_features
from reqcomplete.filtering import WordLists, prune
from reqcomplete.masking import generate_masked_instances
from reqcomplete.mlfilter import CostMatrix, confusion_metrics, cross_validate, train
from reqcomplete.mlm import Prediction, PredictionRecord
from reqcomplete.nlp import annotate
from reqcomplete.stats import vargha_delaney_a12, wilcoxon_rank_sum

from fixture_tools import write_fixture
from hash_provider import HashProvider
from synth import imbalanced_dataset, separable_dataset
from test_evaluation import DOC_A, DOC_B
from test_features import reference_levenshtein
from test_stats import oracle_exact_p
from wiki_stub import DEPTH0_TITLES, DEPTH1_TITLES, wiki_stub

GOLDEN = Path(__file__).parent / "fixtures" / "golden"


def report(criterion, text):
    print(f"PASS criterion {criterion}: {text}")


def test_criterion_01_golden_worked_example(tmp_path):
    start = time.perf_counter()
    out = tmp_path / "out"
    code = main(["recommend",
                 "--input", str(GOLDEN / "disclosed.txt"),
                 "--fixture", str(GOLDEN / "predictions.json"),
                 "--k", "5", "--preset", "none", "--out", str(out)])
    assert code == EXIT_OK
    elapsed = time.perf_counter() - start

    data = json.loads((out / "recommendations.json").read_text())
    terms = {r["term"] for r in data["recommendations"]}
    golden = {line.strip() for line in
              (GOLDEN / "recommendations.txt").read_text().splitlines()
              if line.strip() and not line.startswith("#")}
    assert terms == golden, "recommendation set differs from golden file"
    assert {"service", "system"}.isdisjoint(terms)

    # matches against the withheld half's novel terms
    disclosed = annotate("d", (GOLDEN / "disclosed.txt").read_text("utf-8"))
    withheld = annotate("w", (GOLDEN / "withheld.txt").read_text("utf-8"))
    c_set = common_and_stop_set(WordLists.bundled())
    n_set = novel_terms(disclosed.term_set, withheld.term_set, c_set)
    store = EmbeddingStore.empty()
    matched = {t for t in terms if any(store.is_match(t, n) for n in n_set)}
    assert {"stability", "network", "traffic", "comply", "security"} <= matched
    assert elapsed < 1.0, f"took {elapsed:.3f}s"
    report(1, f"golden set of {len(terms)} terms, matches include the five "
              f"expected, service/system pruned, {elapsed:.3f}s")


def test_criterion_02_metric_oracle_equivalence():
    rng = random.Random(20)
    vocab = [f"w{i}" for i in range(40)]
    # synthetic embedding table over part of the vocabulary
    lines = []
    for i, w in enumerate(vocab[:25]):
        lines.append(f"{w} {rng.uniform(-1, 1):.6f} {rng.uniform(-1, 1):.6f}")
    table = "\n".join(lines)
    import tempfile
    with tempfile.NamedTemporaryFile("w", suffix=".txt", delete=False) as fh:
        fh.write(table)
        path = fh.name
    store = load_embeddings(path)

    def oracle_accuracy(d, n):
        if not d:
            return 0.0
        hits = 0
        for t in d:
            ok = False
            for t2 in n:
                if store.is_match(t, t2):
                    ok = True
            if ok:
                hits += 1
        return hits / len(d)

    def oracle_coverage(d, n):
        if not n:
            return 0.0
        hits = 0
        for t in n:
            ok = False
            for t2 in d:
                if store.is_match(t, t2):
                    ok = True
            if ok:
                hits += 1
        return hits / len(n)

    start = time.perf_counter()
    for _ in range(500):
        d = set(rng.sample(vocab, rng.randint(0, 10)))
        n = set(rng.sample(vocab, rng.randint(0, 10)))
        assert accuracy(d, n, store).value == oracle_accuracy(d, n)
        assert coverage(d, n, store).value == oracle_coverage(d, n)
    elapsed = time.perf_counter() - start
    os.unlink(path)
    assert elapsed < 5.0, f"took {elapsed:.3f}s"
    report(2, f"500 instances equal the double-loop oracle exactly, "
              f"{elapsed:.3f}s")


def test_criterion_03_levenshtein_equivalence():
    doc = annotate("d", "The service shall guarantee the availability "
                        "of the system.")
    inst = [i for i in generate_masked_instances(doc)
            if i.masked_surface == "availability"][0]
    rng = random.Random(21)
    start = time.perf_counter()
    for _ in range(1000):
        a = "".join(rng.choices(string.ascii_lowercase[:6], k=rng.randint(0, 20)))
        b = "".join(rng.choices(string.ascii_lowercase[:6], k=rng.randint(0, 20)))
        import dataclasses
        probe = dataclasses.replace(inst, masked_surface=a,
                                    char_end=inst.char_start + len(a),
                                    sentence_text=inst.sentence_text[:inst.char_start]
                                    + a + inst.sentence_text[inst.char_end:])
        rec = PredictionRecord(probe, Prediction(b, 0.5), 1)
        assert edit_distance(rec) == reference_levenshtein(a, b)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"took {elapsed:.3f}s"
    report(3, f"1000 random pairs equal the DP oracle exactly, {elapsed:.3f}s")


def test_criterion_04_quantile_bucketing():
    rng = random.Random(22)
    for _ in range(200):
        n = rng.randint(1, 80)
        distinct = rng.random() < 0.7
        if distinct:
            freqs = rng.sample(range(1, 10000), n)
        else:
            freqs = [rng.randint(1, 20) for _ in range(n)]
        counts = {f"w{i}": f for i, f in enumerate(freqs)}
        buckets = {w: quantile_bucket(counts, w) for w in counts}
        assert all(0 <= b <= 9 for b in buckets.values())
        # partition: every lemma in exactly one bucket by construction;
        # check sizes balanced when frequencies are distinct
        if distinct and n >= 10:
            sizes = [list(buckets.values()).count(b) for b in range(10)]
            assert max(sizes) - min(sizes) <= 1
        best = sorted(counts, key=lambda w: (-counts[w], w))[0]
        assert buckets[best] == 0
    report(4, "200 random frequency maps: partition, balance, top lemma "
              "in bucket 0")


def test_criterion_05_tfidf_hand_corpus():
    import math
    from reqcomplete.corpus import Article
    corpus = empty_corpus()
    corpus.articles = [Article("t0", "a b a", (), 0), Article("t1", "a c", (), 0)]
    build_tfidf(corpus)
    idf_a = math.log(3 / 3) + 1
    idf_bc = math.log(3 / 2) + 1
    n1 = math.sqrt((2 * idf_a) ** 2 + idf_bc ** 2)
    n2 = math.sqrt(idf_a ** 2 + idf_bc ** 2)
    v1a, v2a = 2 * idf_a / n1, idf_a / n2
    f12, f13 = tfidf_features(corpus, "a")
    assert abs(f12 - (v1a + v2a) / 2) < 1e-9
    assert abs(f13 - max(v1a, v2a)) < 1e-9
    f12b, f13b = tfidf_features(corpus, "b")
    assert abs(f12b - (idf_bc / n1) / 2) < 1e-9
    assert abs(f13b - idf_bc / n1) < 1e-9
    for vec in corpus.tfidf_index:
        norm = math.sqrt(sum(v * v for v in vec.values()))
        assert abs(norm - 1.0) < 1e-9
    report(5, "hand-computed F12/F13 within 1e-9; all norms within 1e-9 of 1")


def test_criterion_06_classifier_sanity():
    dataset = separable_dataset(n=400, seed=30)
    _, y = dataset.xy()
    from reqcomplete.mlfilter import stratified_folds
    folds = stratified_folds(y, 10, seed=0)
    flat = sorted(i for f in folds for i in f)
    assert flat == list(range(400)), "each instance in exactly one test fold"
    for algo in ("LR", "RF"):
        result = cross_validate(algo, dataset, folds=10, seed=0)
        assert result.accuracy >= 0.99, f"{algo} accuracy {result.accuracy}"
    report(6, "LR and RF at >=99% 10-fold CV accuracy on separable data; "
              "folds partition the dataset")


def test_criterion_07_cost_sensitive_recall():
    for algo in ("SVM", "LR"):
        plain_recalls, csl_recalls = [], []
        for seed in range(20):
            train_ds = imbalanced_dataset(n=300, seed=seed, separation=2.0)
            test_ds = imbalanced_dataset(n=300, seed=5000 + seed, separation=2.0)
            X_te, y_te = test_ds.xy()
            plain = train(algo, train_ds, seed=seed)
            weighted = train(algo, train_ds, cost=CostMatrix(2, 1), seed=seed)
            plain_recalls.append(
                confusion_metrics(y_te, plain.estimator.predict(X_te)).recall)
            csl_recalls.append(
                confusion_metrics(y_te, weighted.estimator.predict(X_te)).recall)
        mean_plain = sum(plain_recalls) / len(plain_recalls)
        mean_csl = sum(csl_recalls) / len(csl_recalls)
        assert mean_csl >= mean_plain, \
            f"{algo}: CSL recall {mean_csl} < plain {mean_plain}"
    report(7, "mean recall with CostMatrix(2,1) >= without, for SVM and LR "
              "over 20 seeds")


def test_criterion_08_statistics():
    rng = random.Random(23)
    for _ in range(100):
        n = rng.randint(1, 5)
        m = rng.randint(1, min(5, 10 - n))
        a = [rng.randint(0, 5) for _ in range(n)]
        b = [rng.randint(0, 5) for _ in range(m)]
        assert abs(wilcoxon_rank_sum(a, b) - oracle_exact_p(a, b)) < 1e-12
    assert vargha_delaney_a12([4, 4, 4], [4, 4, 4]) == 0.5
    assert vargha_delaney_a12([7, 8, 9], [1, 2, 3]) == 1.0
    report(8, "100 exact p-values match permutation enumeration; A12 "
              "identities hold")


def test_criterion_09_information_barrier(tmp_path):
    doc_id, text = "barrier", DOC_A
    seed = derive_seed(17, doc_id, 0)
    full = annotate(doc_id, text)
    split = split_document(full, seed)
    provider = HashProvider()
    lists = WordLists.bundled()
    store = EmbeddingStore.empty()

    def disclosed_artifacts(document_text, tag):
        doc = annotate(doc_id, document_text)
        sp = split_document(doc, seed)
        assert sp.disclosed == split.disclosed
        half = half_document(doc, sp.disclosed)
        instances = generate_masked_instances(half)
        records = [r for b in provider.get_predictions_batch(instances, 5)
                   for r in b]
        pruned = prune(records, half, lists)
        matrix = build_matrix(pruned, half, empty_corpus(), store, run_seed=seed)
        pred_json = json.dumps(
            [[r.instance.sentence_index, r.instance.token_index,
              r.prediction.token, r.prediction.score] for r in pruned])
        csv_path = tmp_path / f"barrier_{tag}.csv"
        matrix.to_csv(csv_path)
        return pred_json.encode(), csv_path.read_bytes()

    rng = random.Random(31)
    parts = []
    for i, sent in enumerate(full.sentences):
        if i in split.withheld:
            junk = "".join(rng.choice("qwxzvkj") for _ in range(24))
            parts.append(junk.capitalize() + " zzqv.")
        else:
            parts.append(sent.text)
    poisoned_text = " ".join(parts)

    clean = disclosed_artifacts(text, "clean")
    poisoned = disclosed_artifacts(poisoned_text, "poisoned")
    assert clean[0] == poisoned[0], "prediction set changed"
    assert clean[1] == poisoned[1], "feature matrix bytes changed"
    report(9, "poisoning the withheld half leaves predictions and feature "
              "matrix byte-identical")


def test_criterion_10_corpus_miner_stub(tmp_path):
    phrase = Keyphrase(text="rail transport", lemma_key="rail transport",
                       source_count=1)
    with wiki_stub() as stub:
        c0 = WikiClient(stub.url, cache_dir=tmp_path / "c0")
        corpus0 = mine([phrase], depth=0, client=c0)
        assert {a.title for a in corpus0.articles} == DEPTH0_TITLES

        c1 = WikiClient(stub.url, cache_dir=tmp_path / "c1")
        corpus_dir = tmp_path / "corpus"
        corpus1 = mine([phrase], depth=1, client=c1, corpus_dir=corpus_dir)
        assert {a.title for a in corpus1.articles} == DEPTH1_TITLES

        before = stub.request_count
        again = mine([phrase], depth=1, client=c1, corpus_dir=corpus_dir)
        assert stub.request_count == before, "warm rerun hit the network"
        assert {a.title for a in again.articles} == DEPTH1_TITLES
    report(10, "depth 0 = direct matches, depth 1 = + category fixture set, "
               "warm rerun issues zero requests")


@pytest.mark.skipif(not os.environ.get("RC_PROVIDER_URL"),
                    reason="paper-scale numbers need the full cleaned corpus, "
                           "real model inference and full embeddings; set "
                           "RC_PROVIDER_URL (+ RC_EMBEDDINGS, RC_DOCUMENT) "
                           "for the non-gating integration run")
def test_criterion_11_live_provider_properties(tmp_path):
    from reqcomplete.evaluation import EvalConfig, run_experiment
    from reqcomplete.mlfilter import preset, label_dataset, merge_datasets
    from reqcomplete.mlm import HttpProvider

    doc_path = os.environ.get("RC_DOCUMENT")
    assert doc_path, "RC_DOCUMENT must point to a >=60-sentence document"
    text = Path(doc_path).read_text("utf-8")
    doc_id = Path(doc_path).stem
    full = annotate(doc_id, text)
    assert len(full.sentences) >= 60, "document too small for this check"

    provider = HttpProvider(os.environ["RC_PROVIDER_URL"])
    store = (load_embeddings(os.environ["RC_EMBEDDINGS"])
             if os.environ.get("RC_EMBEDDINGS") else EmbeddingStore.empty())
    lists = WordLists.bundled()

    # train a strict filter on one split, evaluate on another
    seed = derive_seed(1, doc_id, 0)
    split = split_document(full, seed)
    disclosed = half_document(full, split.disclosed)
    withheld = half_document(full, split.withheld, doc_id + "#h2")
    c_set = common_and_stop_set(lists)
    n_set = novel_terms(disclosed.term_set, withheld.term_set, c_set)
    instances = generate_masked_instances(disclosed)
    records = [r for b in provider.get_predictions_batch(instances, 15) for r in b]
    pruned = prune(records, disclosed, lists)
    matrix = build_matrix(pruned, disclosed, empty_corpus(), store)
    dataset = merge_datasets([label_dataset(pruned, matrix, n_set, store)])
    strict = preset("strict", dataset, seed=0)

    config = EvalConfig(documents=[(doc_id, text)], provider=provider, k=15,
                        repetitions=1, seed=2, store=store, lists=lists,
                        filters={"none": None, "strict": strict},
                        include_baselines=True)
    report_obj = run_experiment(config)
    recs = {r["filter"]: r for r in report_obj.records}
    # (a) post-filter D subset of pre-filter D
    assert recs["strict"]["d_post"] <= recs["strict"]["d_pre"]
    # (b) strict-filter accuracy >= unfiltered accuracy on the same run
    assert recs["strict"]["accuracy_post"] >= recs["none"]["accuracy_post"]
    # (c) pipeline coverage >= each baseline's coverage on the same split
    for name in ("baseline1", "baseline2", "baseline3"):
        if name in recs:
            assert recs["none"]["coverage_post"] >= recs[name]["coverage_post"]
    report(11, "live-provider run satisfies the directional properties")


def test_criterion_12_evaluate_determinism(tmp_path):
    docs = [("doca", DOC_A), ("docb", DOC_B)]
    paths = []
    for doc_id, text in docs:
        p = tmp_path / f"{doc_id}.txt"
        p.write_text(text, encoding="utf-8")
        paths.append(p)
    fixture = write_fixture(tmp_path / "fixture.json", docs, 5)

    blobs = []
    for name in ("run1", "run2"):
        out = tmp_path / name
        code = main(["evaluate",
                     "--input", str(paths[0]), "--input", str(paths[1]),
                     "--fixture", str(fixture), "--k", "5",
                     "--repetitions", "3", "--seed", "41",
                     "--out", str(out)])
        assert code == EXIT_OK
        blobs.append(((out / "report.json").read_bytes(),
                      (out / "report.csv").read_bytes()))
    assert blobs[0] == blobs[1]
    report(12, "cmd_evaluate run twice with identical seeds is byte-identical")
