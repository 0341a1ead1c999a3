"""Feature computation tests, with independent oracles for F8 and buckets."""

import math
import random
import string

import pytest

from reqcomplete.corpus import Article, build_tfidf, empty_corpus
from reqcomplete.embeddings import EmbeddingStore, load
from reqcomplete.features import (
    build_matrix,
    edit_distance,
    encode_matrix,
    encoded_column_names,
    length_features,
    levenshtein,
    pos_features,
    quantile_bucket,
    schema_fingerprint,
    semantic_similarity,
    tfidf_features,
)
from reqcomplete.masking import generate_masked_instances
from reqcomplete.mlm import Prediction, PredictionRecord
from reqcomplete.nlp import annotate


def reference_levenshtein(a, b):
    """Full-matrix DP oracle, written independently of the implementation."""
    m, n = len(a), len(b)
    d = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        d[i][0] = i
    for j in range(n + 1):
        d[0][j] = j
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            d[i][j] = min(
                d[i - 1][j] + 1,
                d[i][j - 1] + 1,
                d[i - 1][j - 1] + (0 if a[i - 1] == b[j - 1] else 1),
            )
    return d[m][n]


def record_for(doc_text, surface, token, score=0.5):
    doc = annotate("d", doc_text)
    inst = [i for i in generate_masked_instances(doc)
            if i.masked_surface == surface][0]
    return PredictionRecord(instance=inst,
                            prediction=Prediction(token=token, score=score),
                            rank=1)


R1 = "The service shall guarantee the availability of the system."


class TestPosFeatures:
    def test_noun_prediction_in_noun_slot(self):
        rec = record_for(R1, "availability", "stability")
        f1, f2, f3 = pos_features(rec)
        assert (f1, f2, f3) == ("noun", "NN", True)

    def test_mismatch_detected(self):
        rec = record_for(R1, "availability", "quickly")
        f1, f2, f3 = pos_features(rec)
        assert f1 == "noun"
        assert f3 is (f2 in {"NN", "NNS", "NNP", "NNPS"})

    def test_verb_slot(self):
        rec = record_for(R1, "guarantee", "ensure")
        f1, f2, f3 = pos_features(rec)
        assert f1 == "verb"
        assert f3 is (f2 in {"VB", "VBD", "VBG", "VBN", "VBP", "VBZ"})


class TestLengthFeatures:
    def test_availability_stability(self):
        rec = record_for(R1, "availability", "stability")
        assert length_features(rec) == (12, 9, 0.75)

    def test_equal_lengths(self):
        rec = record_for(R1, "availability", "x" * 12)
        assert length_features(rec)[2] == 1.0

    def test_short_long(self):
        rec = record_for("The staff shall go home.", "go", "understand")
        assert length_features(rec) == (2, 10, 0.2)

    def test_bounds(self):
        rng = random.Random(3)
        for _ in range(50):
            token = "".join(rng.choices(string.ascii_lowercase, k=rng.randint(1, 15)))
            rec = record_for(R1, "availability", token)
            f4, f5, f6 = length_features(rec)
            assert 0 < f6 <= 1


class TestEditDistance:
    def test_kitten_sitting(self):
        assert levenshtein("kitten", "sitting") == 3

    def test_identical(self):
        rec = record_for(R1, "availability", "availability")
        assert edit_distance(rec) == 0

    def test_empty_vs_abc(self):
        assert levenshtein("", "abc") == 3

    def test_against_reference_oracle(self):
        rng = random.Random(11)
        for _ in range(300):
            a = "".join(rng.choices("abcd", k=rng.randint(0, 12)))
            b = "".join(rng.choices("abcd", k=rng.randint(0, 12)))
            assert levenshtein(a, b) == reference_levenshtein(a, b)

    def test_metric_properties(self):
        rng = random.Random(12)
        words = ["".join(rng.choices("abc", k=rng.randint(0, 6))) for _ in range(12)]
        for a in words:
            for b in words:
                d = levenshtein(a, b)
                assert d >= 0
                assert (d == 0) == (a == b)
                assert d == levenshtein(b, a)
                for c in words:
                    assert levenshtein(a, c) <= d + levenshtein(b, c)


class TestSemanticSimilarity:
    def test_identical_in_vocab(self, tmp_path):
        p = tmp_path / "v.txt"
        p.write_text("stability 1 2\navailability 2 4\n", encoding="utf-8")
        store = load(p)
        rec = record_for(R1, "availability", "availability")
        assert semantic_similarity(rec, store) == pytest.approx(1.0)

    def test_oov_is_none(self):
        rec = record_for(R1, "availability", "stability")
        assert semantic_similarity(rec, EmbeddingStore.empty()) is None

    def test_hand_vector_pair(self, tmp_path):
        p = tmp_path / "v.txt"
        p.write_text("availability 1 0\nstability 1 1\n", encoding="utf-8")
        rec = record_for(R1, "availability", "stability")
        assert semantic_similarity(rec, load(p)) == \
            pytest.approx(1 / math.sqrt(2), abs=1e-9)


class TestQuantileBucket:
    def test_ten_distinct_frequencies(self):
        counts = {f"w{i}": 100 - i for i in range(10)}
        buckets = [quantile_bucket(counts, f"w{i}") for i in range(10)]
        assert buckets == list(range(10))

    def test_single_lemma(self):
        assert quantile_bucket({"only": 5}, "only") == 0

    def test_max_frequency_is_bucket_zero(self):
        rng = random.Random(9)
        for _ in range(30):
            counts = {f"w{i}": rng.randint(1, 50) for i in range(rng.randint(1, 40))}
            top = max(counts, key=lambda w: (counts[w], w))
            # lexicographic tie-break: pick the first in sorted order among max
            best = sorted(counts, key=lambda w: (-counts[w], w))[0]
            assert quantile_bucket(counts, best) == 0
            assert quantile_bucket(counts, top) <= 1

    def test_absent_lemma_bucket_nine(self):
        assert quantile_bucket({"a": 1}, "zzz") == 9

    def test_partition_and_balance(self):
        rng = random.Random(10)
        for _ in range(50):
            n = rng.randint(1, 60)
            freqs = rng.sample(range(1, 1000), n)  # distinct
            counts = {f"w{i}": f for i, f in enumerate(freqs)}
            buckets = {}
            for w in counts:
                b = quantile_bucket(counts, w)
                assert 0 <= b <= 9
                buckets.setdefault(b, []).append(w)
            sizes = [len(v) for v in buckets.values()]
            assert sum(sizes) == n
            if n >= 10:
                assert max(sizes) - min(sizes) <= 1

    def test_empty_counts_raises(self):
        with pytest.raises(ValueError):
            quantile_bucket({}, "x")


def hand_corpus(texts):
    corpus = empty_corpus()
    corpus.articles = [Article(title=f"t{i}", text=t, category_path=(), depth=0)
                       for i, t in enumerate(texts)]
    return corpus


class TestTfidfFeatures:
    def test_absent_term(self):
        corpus = build_tfidf(hand_corpus(["a b a", "a c"]))
        assert tfidf_features(corpus, "zxqv") == (0.0, 0.0)

    def test_single_article_mean_equals_max(self):
        corpus = build_tfidf(hand_corpus(["alpha beta alpha"]))
        f12, f13 = tfidf_features(corpus, "alpha")
        assert f12 == f13 > 0

    def test_two_article_hand_values(self):
        corpus = build_tfidf(hand_corpus(["a b a", "a c"]))
        idf_a = math.log(3 / 3) + 1
        idf_b = math.log(3 / 2) + 1
        n1 = math.sqrt((2 * idf_a) ** 2 + idf_b ** 2)
        n2 = math.sqrt(idf_a ** 2 + idf_b ** 2)
        v1, v2 = 2 * idf_a / n1, idf_a / n2
        f12, f13 = tfidf_features(corpus, "a")
        assert f12 == pytest.approx((v1 + v2) / 2, abs=1e-9)
        assert f13 == pytest.approx(max(v1, v2), abs=1e-9)

    def test_empty_corpus(self):
        assert tfidf_features(empty_corpus(), "a") == (0.0, 0.0)

    def test_f12_le_f13(self):
        corpus = build_tfidf(hand_corpus(["a b a", "a c", "b c d a"]))
        for lemma in ("a", "b", "c", "d"):
            f12, f13 = tfidf_features(corpus, lemma)
            assert f12 <= f13


class TestBuildMatrix:
    def _records(self):
        doc = annotate("doc1", R1 + " The system shall keep an audit of all "
                                    "user activity.")
        instances = {i.masked_surface: i for i in generate_masked_instances(doc)}
        recs = []
        for surface, token, score in [("availability", "stability", 0.4),
                                      ("availability", "performance", 0.3),
                                      ("audit", "log", 0.2),
                                      ("audit", "logs", 0.1)]:
            recs.append(PredictionRecord(instance=instances[surface],
                                         prediction=Prediction(token, score),
                                         rank=1))
        return doc, recs

    def test_matrix_shape_and_schema(self):
        doc, recs = self._records()
        corpus = build_tfidf(hand_corpus(["stability matters", "log files"]))
        matrix = build_matrix(recs, doc, corpus, EmbeddingStore.empty())
        assert len(matrix.rows) == len(recs)
        assert matrix.provenance["doc_id"] == "doc1"
        assert matrix.fingerprint == schema_fingerprint()

    def test_empty_records(self):
        doc = annotate("doc1", R1)
        matrix = build_matrix([], doc, empty_corpus(), EmbeddingStore.empty())
        assert matrix.rows == []
        assert encode_matrix(matrix).shape == (0, len(encoded_column_names()))

    def test_duplicate_predictions_share_f10(self):
        doc, recs = self._records()
        extra = PredictionRecord(instance=recs[0].instance,
                                 prediction=Prediction("stability", 0.05), rank=2)
        matrix = build_matrix(recs + [extra], doc, empty_corpus(),
                              EmbeddingStore.empty())
        by_token = {}
        for rec, row in zip(recs + [extra], matrix.rows):
            by_token.setdefault(rec.prediction.token, []).append(row.f10)
        assert len(set(by_token["stability"])) == 1

    def test_empty_corpus_flagged(self):
        doc, recs = self._records()
        matrix = build_matrix(recs, doc, empty_corpus(), EmbeddingStore.empty())
        assert any("empty-corpus" in f for f in matrix.flags)
        assert all(row.f12 == row.f13 == 0.0 for row in matrix.rows)
        assert all(row.f11 == 9 for row in matrix.rows)

    def test_reproducible_csv_bytes(self, tmp_path):
        doc, recs = self._records()
        corpus = build_tfidf(hand_corpus(["stability matters", "log files"]))
        store = EmbeddingStore.empty()
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        build_matrix(recs, doc, corpus, store, run_seed=7).to_csv(a)
        build_matrix(recs, doc, corpus, store, run_seed=7).to_csv(b)
        assert a.read_bytes() == b.read_bytes()

    def test_encoding_dimensions_fixed(self):
        doc, recs = self._records()
        matrix = build_matrix(recs, doc, empty_corpus(), EmbeddingStore.empty())
        encoded = encode_matrix(matrix)
        assert encoded.shape == (len(recs), len(encoded_column_names()))
