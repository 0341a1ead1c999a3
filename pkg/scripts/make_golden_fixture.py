#!/usr/bin/env python3
"""Regenerate the recorded-predictions fixture for the golden example.

Three masked slots carry the worked example's five predictions each;
every other noun/verb slot in the disclosed text records an empty list so
the full pipeline can run against the fixture without misses.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from reqcomplete.masking import generate_masked_instances  # noqa: E402
from reqcomplete.mlm import FixtureStore, Prediction, PredictionRecord  # noqa: E402
from reqcomplete.nlp import annotate  # noqa: E402

GOLDEN = ROOT / "tests" / "fixtures" / "golden"
K = 5

RECORDED = {
    "availability": [("performance", 0.31), ("efficiency", 0.22),
                     ("stability", 0.17), ("accuracy", 0.11),
                     ("reliability", 0.07)],
    "audit": [("log", 0.28), ("network", 0.19), ("history", 0.12),
              ("backup", 0.09), ("comply", 0.05)],
    "connectivity": [("service", 0.33), ("system", 0.25), ("security", 0.14),
                     ("traffic", 0.10), ("power", 0.06)],
}


def main() -> int:
    text = (GOLDEN / "disclosed.txt").read_text("utf-8")
    doc = annotate("disclosed", text)
    store = FixtureStore()
    recorded = 0
    for inst in generate_masked_instances(doc):
        pairs = RECORDED.get(inst.masked_surface, [])
        records = [PredictionRecord(inst, Prediction(t, s), i + 1)
                   for i, (t, s) in enumerate(pairs)]
        store.record(inst, K, records)
        recorded += bool(pairs)
    assert recorded == len(RECORDED), f"only matched {recorded} slots"
    out = GOLDEN / "predictions.json"
    store.save(out)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
