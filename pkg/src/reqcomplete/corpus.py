"""Domain-corpus mining from a MediaWiki instance, with TF-IDF indexing.

Key phrases extracted from the input document drive article search; a
depth parameter widens the crawl into category members (depth 0 keeps
only direct matches).  Every API response is disk-cached and a completed
corpus short-circuits entirely, so warm reruns are byte-identical and
issue no network requests.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import requests

from .nlp import NOUN_TAGS, AnnotatedDocument, annotate

DEFAULT_WIKI_URL = "https://en.wikipedia.org/w/api.php"


class MiningNetworkError(Exception):
    """All retries exhausted while talking to the wiki endpoint."""


@dataclass(frozen=True)
class Keyphrase:
    text: str
    lemma_key: str
    source_count: int


@dataclass(frozen=True)
class MiningLimits:
    max_articles: int = 50
    max_bytes: int = 5_000_000
    search_results_per_phrase: int = 1
    max_keyphrases: int = 25

    def to_dict(self) -> dict:
        return {"max_articles": self.max_articles, "max_bytes": self.max_bytes,
                "search_results_per_phrase": self.search_results_per_phrase,
                "max_keyphrases": self.max_keyphrases}


@dataclass
class Article:
    title: str
    text: str
    category_path: tuple[str, ...]
    depth: int


@dataclass
class DomainCorpus:
    articles: list[Article]
    manifest: dict
    term_stats: dict[str, int] = field(default_factory=dict)
    article_term_counts: list[dict[str, int]] = field(default_factory=list)
    tfidf_index: list[dict[str, float]] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.articles)

    def compute_term_stats(self) -> None:
        """Lemma frequencies per article and corpus-wide."""
        self.article_term_counts = []
        totals: dict[str, int] = {}
        for art in self.articles:
            counts: dict[str, int] = {}
            doc = annotate(art.title, art.text)
            for tok in doc.iter_tokens():
                if tok.is_word:
                    counts[tok.lemma] = counts.get(tok.lemma, 0) + 1
            self.article_term_counts.append(counts)
            for lemma, n in counts.items():
                totals[lemma] = totals.get(lemma, 0) + n
        self.term_stats = totals


# -- key-phrase extraction ---------------------------------------------------

def extract_keyphrases(doc: AnnotatedDocument) -> list[Keyphrase]:
    """Maximal adjective*-noun+ spans, deduplicated by lemma, by frequency.

    Maximal-span collapse keeps "network security policy" as one phrase
    rather than exploding into its suffixes.
    """
    counts: dict[str, tuple[str, int]] = {}
    for sent in doc.sentences:
        toks = sent.tokens
        i = 0
        while i < len(toks):
            j = i
            while j < len(toks) and toks[j].pos.startswith("JJ"):
                j += 1
            k = j
            while k < len(toks) and toks[k].pos in NOUN_TAGS:
                k += 1
            if k > j:  # at least one noun
                span = toks[i:k]
                text = " ".join(t.surface.lower() for t in span)
                key = " ".join(t.lemma for t in span)
                prev = counts.get(key)
                counts[key] = (text, (prev[1] if prev else 0) + 1)
                i = k
            else:
                i = j + 1 if j > i else i + 1
    phrases = [Keyphrase(text=text, lemma_key=key, source_count=n)
               for key, (text, n) in counts.items()]
    phrases.sort(key=lambda p: (-p.source_count, p.lemma_key))
    return phrases


# -- MediaWiki client --------------------------------------------------------

class WikiClient:
    """Cached MediaWiki Action API client with retry and rate limiting."""

    def __init__(self, base_url: str = DEFAULT_WIKI_URL,
                 cache_dir: str | Path | None = None,
                 max_in_flight: int = 4, rate_limit: float = 10.0,
                 retries: int = 3, backoff: float = 0.5, timeout: float = 30.0,
                 cache_ttl: float | None = None):
        self.base_url = base_url
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.max_in_flight = max_in_flight
        self.min_interval = 1.0 / rate_limit if rate_limit > 0 else 0.0
        self.retries = retries
        self.backoff = backoff
        self.timeout = timeout
        self.cache_ttl = cache_ttl  # seconds; None = never expire
        self._session = requests.Session()
        self._lock = threading.Lock()
        self._last_request = 0.0
        self.network_requests = 0

    def _cache_path(self, params: dict) -> Path | None:
        if self.cache_dir is None:
            return None
        canonical = self.base_url + "?" + json.dumps(params, sort_keys=True)
        digest = hashlib.sha256(canonical.encode("utf-8")).hexdigest()
        return self.cache_dir / f"{digest}.json"

    def _cache_fresh(self, path: Path) -> bool:
        if not path.exists():
            return False
        if self.cache_ttl is None:
            return True
        return (time.time() - path.stat().st_mtime) <= self.cache_ttl

    def _query(self, **params) -> dict:
        params = {"format": "json", "action": "query", **params}
        cache_path = self._cache_path(params)
        if cache_path is not None and self._cache_fresh(cache_path):
            return json.loads(cache_path.read_text("utf-8"))
        payload = self._fetch(params)
        if cache_path is not None:
            cache_path.parent.mkdir(parents=True, exist_ok=True)
            cache_path.write_text(json.dumps(payload, sort_keys=True), "utf-8")
        return payload

    def _fetch(self, params: dict) -> dict:
        last_error: Exception | None = None
        for attempt in range(self.retries):
            with self._lock:
                wait = self.min_interval - (time.monotonic() - self._last_request)
                if wait > 0:
                    time.sleep(wait)
                self._last_request = time.monotonic()
                self.network_requests += 1
            try:
                resp = self._session.get(self.base_url, params=params,
                                         timeout=self.timeout)
                resp.raise_for_status()
                return resp.json()
            except (requests.RequestException, ValueError) as exc:
                last_error = exc
                if attempt + 1 < self.retries:
                    time.sleep(self.backoff * (2 ** attempt))
        raise MiningNetworkError(f"query {params} failed: {last_error}")

    # API wrappers ---------------------------------------------------------
    def search(self, phrase: str, limit: int) -> list[str]:
        payload = self._query(list="search", srsearch=phrase, srlimit=limit)
        return [hit["title"] for hit in payload.get("query", {}).get("search", [])]

    def extract(self, title: str) -> str:
        payload = self._query(prop="extracts", explaintext=1, titles=title)
        pages = payload.get("query", {}).get("pages", {})
        for page in pages.values():
            return page.get("extract", "") or ""
        return ""

    def categories(self, title: str) -> list[str]:
        payload = self._query(prop="categories", titles=title)
        pages = payload.get("query", {}).get("pages", {})
        cats = []
        for page in pages.values():
            for cat in page.get("categories", []) or []:
                cats.append(cat["title"])
        return cats

    def category_members(self, category: str) -> tuple[list[str], list[str]]:
        """Returns (page titles, subcategory titles) of one category."""
        payload = self._query(list="categorymembers", cmtitle=category,
                              cmlimit=500)
        pages, subcats = [], []
        for member in payload.get("query", {}).get("categorymembers", []):
            if member.get("ns") == 14:
                subcats.append(member["title"])
            else:
                pages.append(member["title"])
        return pages, subcats


# -- mining ------------------------------------------------------------------

def _request_key(endpoint: str, keyphrases: list[Keyphrase], depth: int,
                 limits: MiningLimits) -> str:
    blob = json.dumps({
        "endpoint": endpoint,
        "phrases": sorted(p.lemma_key for p in keyphrases),
        "depth": depth,
        "limits": limits.to_dict(),
    }, sort_keys=True)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _safe_filename(title: str) -> str:
    cleaned = re.sub(r"[^A-Za-z0-9._-]+", "_", title).strip("_") or "article"
    return cleaned[:120]


def mine(keyphrases: list[Keyphrase], depth: int = 0,
         limits: MiningLimits = MiningLimits(),
         client: WikiClient | None = None,
         corpus_dir: str | Path | None = None) -> DomainCorpus:
    """Build a domain corpus for the given key phrases.

    Depth 0 keeps only direct search matches; depth d additionally walks
    category members d levels out.  A corpus directory holding a manifest
    for the same request is reused verbatim, without network traffic.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    client = client or WikiClient()
    corpus_dir = Path(corpus_dir) if corpus_dir else None
    phrases = keyphrases[:limits.max_keyphrases]
    key = _request_key(client.base_url, phrases, depth, limits)

    if corpus_dir is not None:
        cached = _load_corpus_dir(corpus_dir, expected_key=key)
        if cached is not None:
            return cached

    # depth 0: direct title/search matches only
    placed: dict[str, tuple[int, tuple[str, ...]]] = {}
    truncated = False
    for phrase in phrases:
        for title in client.search(phrase.text, limits.search_results_per_phrase):
            if title not in placed:
                if len(placed) >= limits.max_articles:
                    truncated = True
                    break
                placed[title] = (0, ())

    # deeper levels walk category members breadth-first
    if depth > 0:
        frontier: list[tuple[str, int, tuple[str, ...]]] = []
        seen_cats: set[str] = set()
        for title in sorted(placed):
            for cat in client.categories(title):
                if cat not in seen_cats:
                    seen_cats.add(cat)
                    frontier.append((cat, 1, (cat,)))
        while frontier:
            category, level, path = frontier.pop(0)
            if level > depth:
                continue
            pages, subcats = client.category_members(category)
            for page in pages:
                if page not in placed:
                    if len(placed) >= limits.max_articles:
                        truncated = True
                        break
                    placed[page] = (level, path)
            for sub in subcats:
                if sub not in seen_cats and level + 1 <= depth:
                    seen_cats.add(sub)
                    frontier.append((sub, level + 1, path + (sub,)))

    ordered = sorted(placed.items(), key=lambda kv: (kv[1][0], kv[0]))
    articles: list[Article] = []
    total_bytes = 0

    with ThreadPoolExecutor(max_workers=client.max_in_flight) as pool:
        texts = list(pool.map(lambda kv: client.extract(kv[0]), ordered))
    for (title, (level, path)), text in zip(ordered, texts):
        size = len(text.encode("utf-8"))
        if total_bytes + size > limits.max_bytes:
            truncated = True
            continue
        total_bytes += size
        articles.append(Article(title=title, text=text,
                                category_path=path, depth=level))

    manifest = {
        "format": "domain-corpus/1",
        "request_key": key,
        "endpoint": client.base_url,
        "keyphrases": [p.text for p in phrases],
        "depth": depth,
        "limits": limits.to_dict(),
        "truncated": truncated,
        "fetched_at": datetime.now(timezone.utc).isoformat(),
        "articles": [],
    }
    corpus = DomainCorpus(articles=articles, manifest=manifest)
    if corpus_dir is not None:
        _save_corpus_dir(corpus, corpus_dir)
    return corpus


def _save_corpus_dir(corpus: DomainCorpus, corpus_dir: Path) -> None:
    articles_dir = corpus_dir / "articles"
    articles_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    used: set[str] = set()
    for art in corpus.articles:
        stem = _safe_filename(art.title)
        name = stem + ".txt"
        n = 1
        while name in used:
            n += 1
            name = f"{stem}_{n}.txt"
        used.add(name)
        (articles_dir / name).write_text(art.text, encoding="utf-8")
        entries.append({"title": art.title, "file": name, "depth": art.depth,
                        "category_path": list(art.category_path),
                        "bytes": len(art.text.encode("utf-8"))})
    corpus.manifest["articles"] = entries
    (corpus_dir / "manifest.json").write_text(
        json.dumps(corpus.manifest, indent=2, sort_keys=True), encoding="utf-8")


def _load_corpus_dir(corpus_dir: Path, expected_key: str | None = None,
                     ) -> DomainCorpus | None:
    manifest_path = corpus_dir / "manifest.json"
    if not manifest_path.exists():
        return None
    manifest = json.loads(manifest_path.read_text("utf-8"))
    if expected_key is not None and manifest.get("request_key") != expected_key:
        return None
    articles = []
    for entry in manifest["articles"]:
        text = (corpus_dir / "articles" / entry["file"]).read_text("utf-8")
        articles.append(Article(title=entry["title"], text=text,
                                category_path=tuple(entry["category_path"]),
                                depth=entry["depth"]))
    return DomainCorpus(articles=articles, manifest=manifest)


def load_corpus(corpus_dir: str | Path) -> DomainCorpus:
    """Load a previously mined corpus directory unconditionally."""
    corpus = _load_corpus_dir(Path(corpus_dir))
    if corpus is None:
        raise FileNotFoundError(f"no manifest.json under {corpus_dir}")
    return corpus


# -- TF-IDF ------------------------------------------------------------------

def build_tfidf(corpus: DomainCorpus) -> DomainCorpus:
    """Populate per-article TF-IDF vectors, Euclidean-normalized.

    tf is the raw in-article count; idf = ln((1+N)/(1+df)) + 1 (smoothed),
    and each article vector is scaled to unit L2 norm.
    """
    if not corpus.article_term_counts:
        corpus.compute_term_stats()
    n_docs = len(corpus.article_term_counts)
    df: dict[str, int] = {}
    for counts in corpus.article_term_counts:
        for lemma in counts:
            df[lemma] = df.get(lemma, 0) + 1
    idf = {lemma: math.log((1 + n_docs) / (1 + d)) + 1.0
           for lemma, d in df.items()}
    index = []
    for counts in corpus.article_term_counts:
        raw = {lemma: n * idf[lemma] for lemma, n in counts.items()}
        norm = math.sqrt(sum(v * v for v in raw.values()))
        if norm > 0:
            index.append({lemma: v / norm for lemma, v in raw.items()})
        else:
            index.append({})
    corpus.tfidf_index = index
    return corpus


def empty_corpus(reason: str = "no mining requested") -> DomainCorpus:
    manifest = {"format": "domain-corpus/1", "request_key": None,
                "endpoint": None, "keyphrases": [], "depth": 0,
                "limits": None, "truncated": False, "note": reason,
                "articles": []}
    return DomainCorpus(articles=[], manifest=manifest)
