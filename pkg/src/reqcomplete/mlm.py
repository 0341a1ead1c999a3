"""Masked-word prediction providers.

Two implementations of the same interface: an HTTP client speaking the
inference service's JSON protocol, and a recorded-fixture provider for
offline, reproducible runs.  Both drop subword-continuation pieces
(``##``-prefixed tokens) before ranking, so callers only ever see whole
words with descending scores.
"""

from __future__ import annotations

import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import requests

from .masking import DEFAULT_MASK, MaskedInstance

MAX_K = 50
SUBWORD_PREFIX = "##"


class ProviderError(Exception):
    """Base class for prediction-provider failures."""


class ProviderUnreachableError(ProviderError):
    pass


class MalformedResponseError(ProviderError):
    pass


class FixtureMissError(ProviderError, KeyError):
    pass


class DuplicateFixtureError(ProviderError):
    pass


@dataclass(frozen=True)
class Prediction:
    token: str
    score: float


@dataclass(frozen=True)
class PredictionRecord:
    instance: MaskedInstance
    prediction: Prediction
    rank: int


def _clean(raw: list[Prediction]) -> list[Prediction]:
    """Drop continuations, empties and mask echoes; sort by descending score."""
    kept = [p for p in raw
            if p.token and not p.token.startswith(SUBWORD_PREFIX)
            and p.token != DEFAULT_MASK]
    return sorted(kept, key=lambda p: -p.score)


def _to_records(instance: MaskedInstance, preds: list[Prediction]) -> list[PredictionRecord]:
    return [PredictionRecord(instance=instance, prediction=p, rank=i + 1)
            for i, p in enumerate(preds)]


def _validate_k(k: int) -> None:
    if not 1 <= k <= MAX_K:
        raise ValueError(f"k must be in [1, {MAX_K}], got {k}")


class HttpProvider:
    """Client for the /v1/predict JSON protocol."""

    def __init__(self, base_url: str, mask_token: str = DEFAULT_MASK,
                 timeout: float = 30.0, max_in_flight: int = 4):
        self.base_url = base_url.rstrip("/")
        self.mask_token = mask_token
        self.timeout = timeout
        self.max_in_flight = max_in_flight
        self._session = requests.Session()

    def health(self) -> dict:
        try:
            resp = self._session.get(f"{self.base_url}/v1/health", timeout=self.timeout)
        except requests.RequestException as exc:
            raise ProviderUnreachableError(str(exc)) from exc
        return self._parse_json(resp)

    def get_predictions(self, instance: MaskedInstance, k: int) -> list[PredictionRecord]:
        _validate_k(k)
        body = {"text": instance.render(self.mask_token),
                "mask_token": self.mask_token, "k": k}
        try:
            resp = self._session.post(f"{self.base_url}/v1/predict",
                                      json=body, timeout=self.timeout)
        except requests.RequestException as exc:
            raise ProviderUnreachableError(str(exc)) from exc
        payload = self._parse_json(resp)
        preds = self._parse_predictions(payload)
        return _to_records(instance, _clean(preds)[:k])

    def get_predictions_batch(self, instances: list[MaskedInstance],
                              k: int) -> list[list[PredictionRecord]]:
        """Fetch several instances with bounded concurrency, order preserved."""
        with ThreadPoolExecutor(max_workers=self.max_in_flight) as pool:
            return list(pool.map(lambda i: self.get_predictions(i, k), instances))

    @staticmethod
    def _parse_json(resp) -> dict:
        if resp.status_code >= 500:
            raise ProviderUnreachableError(f"server returned {resp.status_code}")
        try:
            payload = resp.json()
        except ValueError as exc:
            raise MalformedResponseError(f"invalid JSON: {exc}") from exc
        if resp.status_code != 200:
            raise MalformedResponseError(
                f"status {resp.status_code}: {payload.get('error', payload)}")
        return payload

    @staticmethod
    def _parse_predictions(payload: dict) -> list[Prediction]:
        try:
            preds = [Prediction(token=str(p["token"]), score=float(p["score"]))
                     for p in payload["predictions"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedResponseError(f"bad prediction payload: {exc}") from exc
        for p in preds:
            if not 0.0 <= p.score <= 1.0:
                raise MalformedResponseError(f"score out of range: {p}")
        return preds


def _fixture_key(doc_id: str, sentence_index: int, token_index: int, k: int) -> str:
    return f"{doc_id}␟{sentence_index}␟{token_index}␟{k}"


class FixtureStore:
    """On-disk prediction recordings, one JSON document per input document."""

    FORMAT = "mlm-fixture/1"

    def __init__(self):
        self._entries: dict[str, list[Prediction]] = {}
        self._lock = threading.Lock()

    def record(self, instance: MaskedInstance, k: int,
               records: list[PredictionRecord]) -> None:
        key = _fixture_key(instance.doc_id, instance.sentence_index,
                           instance.token_index, k)
        with self._lock:
            if key in self._entries:
                raise DuplicateFixtureError(key)
            self._entries[key] = [r.prediction for r in records]

    def lookup(self, instance: MaskedInstance, k: int) -> list[Prediction]:
        key = _fixture_key(instance.doc_id, instance.sentence_index,
                           instance.token_index, k)
        if key not in self._entries:
            raise FixtureMissError(key)
        return self._entries[key]

    def merge(self, other: "FixtureStore") -> "FixtureStore":
        """Absorb another store's recordings; duplicate keys are errors."""
        with self._lock:
            for key, preds in other._entries.items():
                if key in self._entries:
                    raise DuplicateFixtureError(key)
                self._entries[key] = preds
        return self

    def save(self, path: str | Path) -> None:
        entries = []
        for key in sorted(self._entries):
            doc_id, s, t, k = key.split("␟")
            entries.append({
                "doc_id": doc_id, "sentence_index": int(s),
                "token_index": int(t), "k": int(k),
                "predictions": [{"token": p.token, "score": p.score}
                                for p in self._entries[key]],
            })
        payload = {"format": self.FORMAT, "entries": entries}
        Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True),
                              encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "FixtureStore":
        store = cls()
        try:
            payload = json.loads(Path(path).read_text(encoding="utf-8"))
            if payload.get("format") != cls.FORMAT:
                raise MalformedResponseError(f"unknown fixture format in {path}")
            for e in payload["entries"]:
                key = _fixture_key(e["doc_id"], int(e["sentence_index"]),
                                   int(e["token_index"]), int(e["k"]))
                if key in store._entries:
                    raise DuplicateFixtureError(key)
                store._entries[key] = [
                    Prediction(token=str(p["token"]), score=float(p["score"]))
                    for p in e["predictions"]
                ]
        except MalformedResponseError:
            raise
        except DuplicateFixtureError:
            raise
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise MalformedResponseError(f"corrupted fixture {path}: {exc}") from exc
        return store


class FixtureProvider:
    """Replays recorded predictions; raises FixtureMissError on unknown keys."""

    def __init__(self, store: FixtureStore):
        self.store = store

    @classmethod
    def from_path(cls, path: str | Path) -> "FixtureProvider":
        """Load one fixture file, or every *.json in a directory."""
        path = Path(path)
        if path.is_dir():
            store = FixtureStore()
            for child in sorted(path.glob("*.json")):
                store.merge(FixtureStore.load(child))
            return cls(store)
        return cls(FixtureStore.load(path))

    def health(self) -> dict:
        return {"model": "fixture", "ready": True}

    def get_predictions(self, instance: MaskedInstance, k: int) -> list[PredictionRecord]:
        _validate_k(k)
        preds = self.store.lookup(instance, k)
        return _to_records(instance, _clean(preds)[:k])

    def get_predictions_batch(self, instances: list[MaskedInstance],
                              k: int) -> list[list[PredictionRecord]]:
        return [self.get_predictions(i, k) for i in instances]


def record_fixture(instance: MaskedInstance, k: int,
                   records: list[PredictionRecord], store: FixtureStore) -> None:
    store.record(instance, k, records)


def load_fixture(path: str | Path) -> FixtureStore:
    return FixtureStore.load(path)
