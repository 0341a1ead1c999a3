#!/usr/bin/env python3
"""Key-phrase extraction, TF-IDF indexing and frequency bucketing.

Uses an in-memory corpus so it runs offline; point WikiClient at a
MediaWiki endpoint (or pass --wiki-url to the CLI's mine command) to
build real corpora.
"""

from reqcomplete.corpus import Article, build_tfidf, empty_corpus, extract_keyphrases
from reqcomplete.features import quantile_bucket, tfidf_features
from reqcomplete.nlp import annotate

DOCUMENT = ("The rail transport service shall publish electronic timetables. "
            "Rail transport operators shall inspect the railway track weekly. "
            "The signalling system shall report track faults to the depot.")

ARTICLES = {
    "Rail transport": "Rail transport moves passengers and freight on rails. "
                      "Locomotives pull rolling stock along the track.",
    "Railway track": "A railway track is the structure on which trains "
                     "travel, built from rails, fasteners and sleepers.",
    "Train": "A train is a series of connected vehicles that run along a "
             "railway track carrying cargo or passengers.",
}


def main():
    print("= Key phrases found in the document")
    doc = annotate("demo", DOCUMENT)
    for kp in extract_keyphrases(doc)[:6]:
        print(f"  {kp.text!r} (x{kp.source_count})")

    print("\n= TF-IDF over a three-article corpus")
    corpus = empty_corpus()
    corpus.articles = [Article(t, text, (), 0) for t, text in ARTICLES.items()]
    build_tfidf(corpus)
    for lemma in ("track", "train", "freight", "timetable"):
        mean_v, max_v = tfidf_features(corpus, lemma)
        print(f"  {lemma:10} mean {mean_v:.4f}  max {max_v:.4f}")

    print("\n= Frequency deciles over the corpus vocabulary")
    corpus.compute_term_stats()
    for lemma in ("rail", "track", "sleeper", "zeppelin"):
        bucket = quantile_bucket(corpus.term_stats, lemma)
        print(f"  {lemma:10} bucket {bucket} (0 = most frequent)")


if __name__ == "__main__":
    main()
