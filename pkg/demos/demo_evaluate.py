#!/usr/bin/env python3
"""Run a small withholding experiment end to end.

A deterministic pseudo-model stands in for live inference: predictions
are a seeded function of each masked sentence, so the whole experiment
is reproducible offline.  Two toy documents, three repetitions each.
"""

import hashlib
import random

from reqcomplete.evaluation import EvalConfig, run_experiment
from reqcomplete.mlm import Prediction, PredictionRecord

DOC_A = ("The system shall log every error. The operator shall review "
         "alarms. The gateway shall route packets. The server shall store "
         "telemetry. The display shall show network traffic. The service "
         "shall report stability metrics.")
DOC_B = ("Trains shall arrive on schedule. The depot shall hold spare "
         "engines. Drivers shall follow signals. Passengers shall buy "
         "tickets. The railway shall publish timetables. Inspectors shall "
         "audit stations.")

VOCAB = ["telemetry", "encryption", "gateway", "diagnostics", "throughput",
         "latency", "failover", "watchdog", "checksum", "snapshot",
         "stability", "network", "traffic", "security", "audit",
         "schedule", "signal", "ticket", "timetable", "station"]


class PseudoModel:
    """Deterministic provider: predictions derived from the rendered text."""

    def get_predictions(self, instance, k):
        digest = hashlib.sha256(f"{instance.rendered}|{k}".encode()).digest()
        rng = random.Random(int.from_bytes(digest[:8], "big"))
        tokens = rng.sample(VOCAB, k=min(k, len(VOCAB)))
        return [PredictionRecord(instance, Prediction(t, round(0.9 * 0.8 ** i, 6)),
                                 i + 1) for i, t in enumerate(tokens)]

    def get_predictions_batch(self, instances, k):
        return [self.get_predictions(i, k) for i in instances]


def main():
    config = EvalConfig(documents=[("doc_a", DOC_A), ("doc_b", DOC_B)],
                        provider=PseudoModel(), k=5, repetitions=3, seed=7)
    report = run_experiment(config)

    print(f"{len(report.records)} runs "
          f"({len(config.documents)} docs x {config.repetitions} reps)\n")
    header = f"{'doc':6} {'rep':>3} {'|N|':>4} {'|D|':>4} {'acc':>6} {'cov':>6}"
    print(header)
    print("-" * len(header))
    for rec in report.records:
        print(f"{rec['doc_id']:6} {rec['repetition']:>3} "
              f"{rec['novel_terms']:>4} {rec['d_post']:>4} "
              f"{rec['accuracy_post']:>6.3f} {rec['coverage_post']:>6.3f}")

    agg = report.aggregates["levels"]["none"]
    print(f"\nmean accuracy {agg['mean_accuracy']:.3f}, "
          f"mean coverage {agg['mean_coverage']:.3f} over {agg['runs']} runs")
    print("\nRepeat with the same seed and the report bytes are identical:")
    again = run_experiment(config)
    print(f"  identical: {again.to_json() == report.to_json()}")


if __name__ == "__main__":
    main()
