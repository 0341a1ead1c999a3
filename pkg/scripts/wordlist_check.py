#!/usr/bin/env python3
"""Sanity checks for the bundled word-list data files."""

from __future__ import annotations

import sys
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "src" / "reqcomplete" / "filtering" / "data"

# Terms the shipped ranking must keep out of the top 250 (they are the kind
# of domain vocabulary the pruner must let through).
MUST_NOT_BE_TOP250 = {
    "performance", "efficiency", "stability", "accuracy", "reliability",
    "log", "network", "history", "backup", "comply", "security", "traffic",
    "power", "monitor", "policy", "operator", "preserve", "peak", "load",
}


def words(path: Path) -> list[str]:
    out = []
    for line in path.read_text("utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def main() -> int:
    common = words(DATA / "common_words.txt")
    stop = set(words(DATA / "stop_words.txt"))
    vague = set(words(DATA / "vague_words.txt"))
    ok = True
    if len(common) < 1000:
        print(f"FAIL common list too short: {len(common)}")
        ok = False
    dupes = {w for w in common if common.count(w) > 1}
    if dupes:
        print(f"FAIL duplicate common words: {sorted(dupes)[:10]}")
        ok = False
    bad = MUST_NOT_BE_TOP250 & set(common[:250])
    if bad:
        print(f"FAIL domain words inside top 250: {sorted(bad)}")
        ok = False
    print(f"common={len(common)} stop={len(stop)} vague={len(vague)} "
          f"{'ok' if ok else 'FAILED'}")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
