#!/usr/bin/env python3
"""Walk through the recommendation pipeline on a six-requirement example.

Three requirements are treated as the document under analysis; the other
three play the role of content the author forgot to write.  Recorded
predictions stand in for a live model so the demo runs offline.
"""

from reqcomplete.embeddings import EmbeddingStore
from reqcomplete.evaluation import common_and_stop_set, novel_terms
from reqcomplete.filtering import WordLists, dedupe_by_lemma, prediction_lemma, prune
from reqcomplete.masking import generate_masked_instances, render_for_model
from reqcomplete.mlm import FixtureProvider, FixtureStore, Prediction, PredictionRecord
from reqcomplete.nlp import annotate

DISCLOSED = ("The service shall guarantee the availability of the system. "
             "The system shall keep an audit of all user activity. "
             "The service shall restore connectivity after a failure of "
             "the system.")
WITHHELD = ("The system shall monitor network traffic for unusual activity. "
            "The service shall comply with the security policy of the "
            "operator. The system shall preserve stability under peak load.")

RECORDED = {
    "availability": [("performance", 0.31), ("efficiency", 0.22),
                     ("stability", 0.17), ("accuracy", 0.11),
                     ("reliability", 0.07)],
    "audit": [("log", 0.28), ("network", 0.19), ("history", 0.12),
              ("backup", 0.09), ("comply", 0.05)],
    "connectivity": [("service", 0.33), ("system", 0.25), ("security", 0.14),
                     ("traffic", 0.10), ("power", 0.06)],
}


def main():
    print("= Step 1: annotate the document")
    doc = annotate("demo", DISCLOSED)
    print(f"  {len(doc.sentences)} sentences, {len(doc.term_set)} distinct terms")

    print("\n= Step 2: one masked variant per noun/verb")
    instances = generate_masked_instances(doc)
    print(f"  {len(instances)} maskable slots; for example:")
    sample = next(i for i in instances if i.masked_surface == "availability")
    print(f"  {render_for_model(sample)!r}")

    store = FixtureStore()
    for inst in instances:
        pairs = RECORDED.get(inst.masked_surface, [])
        store.record(inst, 5, [PredictionRecord(inst, Prediction(t, s), r + 1)
                               for r, (t, s) in enumerate(pairs)])
    provider = FixtureProvider(store)
    records = [r for i in instances for r in provider.get_predictions(i, 5)]
    print(f"  {len(records)} recorded predictions replayed")

    print("\n= Step 3: prune the obviously unhelpful predictions")
    lists = WordLists.bundled()
    pruned = prune(records, doc, lists)
    dropped = {r.prediction.token for r in records} - \
        {r.prediction.token for r in pruned}
    print(f"  dropped (already present / common / vague): {sorted(dropped)}")

    final = dedupe_by_lemma(pruned)
    terms = sorted(prediction_lemma(r) for r in final)
    print(f"\n= Recommended terms ({len(terms)}):")
    print(f"  {', '.join(terms)}")

    print("\n= How many hint at the content the author 'forgot'?")
    withheld_doc = annotate("withheld", WITHHELD)
    n_set = novel_terms(doc.term_set, withheld_doc.term_set,
                        common_and_stop_set(lists))
    hits = sorted(t for t in terms if t in n_set)
    print(f"  novel terms in the missing half: {sorted(n_set)}")
    print(f"  recommendations that hit them:   {hits}")
    acc = len(hits) / len(terms)
    cov = len(hits) / len(n_set)
    print(f"  accuracy {acc:.2f}, coverage {cov:.2f} "
          f"(exact matching, no embeddings loaded)")


if __name__ == "__main__":
    main()
