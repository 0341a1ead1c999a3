"""Static word-embedding store with cosine-similarity term matching.

Vectors load from the textual format "token v1 ... vD" (one word per
line).  Lookups are lowercase; out-of-vocabulary similarity is undefined
(None) rather than faked, and term matching falls back to lemma equality
so exact matches never depend on embedding coverage.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .nlp import lemma_variants

MATCH_THRESHOLD = 0.85


class EmbeddingFormatError(ValueError):
    """Raised on unparsable or dimensionally inconsistent vector files."""


class EmbeddingStore:
    def __init__(self, dimension: int, vectors: dict[str, np.ndarray]):
        self.dimension = dimension
        self._vectors = vectors
        self._norms = {w: float(np.linalg.norm(v)) for w, v in vectors.items()}

    def __len__(self) -> int:
        return len(self._vectors)

    def __contains__(self, word: str) -> bool:
        return word.lower() in self._vectors

    def vector(self, word: str) -> np.ndarray | None:
        return self._vectors.get(word.lower())

    def cosine(self, a: str, b: str) -> float | None:
        """Cosine similarity in [-1, 1], or None if either word is OOV."""
        va, vb = self.vector(a), self.vector(b)
        if va is None or vb is None:
            return None
        na, nb = self._norms[a.lower()], self._norms[b.lower()]
        if na == 0.0 or nb == 0.0:
            return None
        value = float(np.dot(va, vb) / (na * nb))
        return max(-1.0, min(1.0, value))

    def is_match(self, a: str, b: str, threshold: float = MATCH_THRESHOLD) -> bool:
        """True when the terms share a lemma or are embedding-similar."""
        if a.lower() == b.lower():
            return True
        if lemma_variants(a) & lemma_variants(b):
            return True
        sim = self.cosine(a, b)
        return sim is not None and sim >= threshold

    @classmethod
    def empty(cls, dimension: int = 50) -> "EmbeddingStore":
        return cls(dimension, {})


def load(path: str | Path) -> EmbeddingStore:
    """Parse a textual vector file; malformed lines fail with their number."""
    vectors: dict[str, np.ndarray] = {}
    dimension: int | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split(" ")
            if len(parts) < 2:
                raise EmbeddingFormatError(f"{path}:{lineno}: no vector components")
            word, comps = parts[0], parts[1:]
            try:
                values = np.array([float(x) for x in comps], dtype=np.float64)
            except ValueError as exc:
                raise EmbeddingFormatError(f"{path}:{lineno}: {exc}") from exc
            if dimension is None:
                dimension = len(values)
            elif len(values) != dimension:
                raise EmbeddingFormatError(
                    f"{path}:{lineno}: expected {dimension} components, "
                    f"got {len(values)}")
            vectors[word.lower()] = values
    if dimension is None:
        raise EmbeddingFormatError(f"{path}: empty embedding file")
    return EmbeddingStore(dimension, vectors)
