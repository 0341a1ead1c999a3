"""Command-line entry point.

Subcommands: recommend (full pipeline over one document), mine (build a
domain corpus), train (build a filter model from documents), evaluate
(withholding experiments), baseline (non-model baselines).  Every flag
can also be set through a REQCOMPLETE_<FLAG> environment variable; exit
codes are 2 config, 3 network, 4 provider, 5 internal.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import corpus as corpus_mod
from .embeddings import EmbeddingStore
from .embeddings import load as load_embeddings
from .evaluation import (
    EvalConfig,
    accuracy,
    baseline1_common_words,
    baseline2_tfidf,
    baseline3_synonyms,
    common_and_stop_set,
    coverage,
    derive_seed,
    half_document,
    novel_terms,
    run_experiment,
    split_document,
)
from .features import RELEVANT, build_matrix
from .filtering import WordLists, dedupe_by_lemma, prediction_lemma, prune
from .masking import generate_masked_instances
from .mlfilter import label_dataset, load_model, merge_datasets, preset, save
from .mlm import FixtureProvider, HttpProvider, ProviderError
from .nlp import annotate
from .wordnet import load_lexicon

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NETWORK = 3
EXIT_PROVIDER = 4
EXIT_INTERNAL = 5

ENV_PREFIX = "REQCOMPLETE_"


class ConfigError(Exception):
    pass


def _env_default(flag: str):
    return os.environ.get(ENV_PREFIX + flag.upper().replace("-", "_"))


def _add_common(parser: argparse.ArgumentParser) -> None:
    for flag, kwargs in [
        ("--input", {"action": "append", "help": "input document path (repeatable)"}),
        ("--k", {"type": int, "default": 15, "help": "predictions per mask (1-50)"}),
        ("--preset", {"default": "none",
                      "choices": ["none", "strict", "moderate", "lenient"]}),
        ("--provider-url", {"help": "prediction service base URL"}),
        ("--fixture", {"help": "recorded-predictions JSON file"}),
        ("--corpus-dir", {"help": "directory for the mined domain corpus"}),
        ("--depth", {"type": int, "default": 0, "help": "category crawl depth"}),
        ("--embeddings", {"help": "word-vector text file"}),
        ("--model", {"help": "trained filter model file"}),
        ("--seed", {"type": int, "default": 0}),
        ("--out", {"help": "output directory (or file for train)"}),
        ("--common-words", {"help": "override ranked common-words file"}),
        ("--stop-words", {"help": "override stop-words file"}),
        ("--vague-words", {"help": "override vague-words file"}),
        ("--wiki-url", {"help": "MediaWiki API base URL"}),
        ("--cache-dir", {"help": "HTTP response cache directory"}),
        ("--wordnet", {"help": "WordNet database directory (baseline 3)"}),
        ("--repetitions", {"type": int, "default": 1}),
        ("--mine-corpus", {"action": "store_true",
                           "help": "mine a corpus from each document"}),
    ]:
        env = _env_default(flag.lstrip("-"))
        if env is not None:
            if kwargs.get("type") is int:
                kwargs["default"] = int(env)
            elif kwargs.get("action") == "append":
                kwargs["default"] = env.split(os.pathsep)
            elif kwargs.get("action") == "store_true":
                kwargs["default"] = env.lower() in ("1", "true", "yes")
            else:
                kwargs["default"] = env
        parser.add_argument(flag, **kwargs)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reqcomplete",
        description="Recommend likely-missing terminology for a requirements "
                    "document via masked-word predictions.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("recommend", "run the full pipeline over a document"),
        ("mine", "build a domain corpus for a document"),
        ("train", "train a relevance filter from documents"),
        ("evaluate", "run withholding experiments"),
        ("baseline", "run the non-model baselines"),
    ]:
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        if name == "baseline":
            p.add_argument("--which", default="all",
                           choices=["1", "2", "3", "all"])
    return parser


# -- shared assembly -----------------------------------------------------------

def _validate(args) -> None:
    if not 1 <= args.k <= 50:
        raise ConfigError("--k must be in [1, 50]")
    if args.depth < 0:
        raise ConfigError("--depth must be >= 0")
    if args.repetitions < 1:
        raise ConfigError("--repetitions must be >= 1")


def _documents(args) -> list[tuple[str, str]]:
    if not args.input:
        raise ConfigError("at least one --input document is required")
    docs = []
    for path in args.input:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"input not found: {p}")
        docs.append((p.stem, p.read_text("utf-8")))
    return docs


def _provider(args):
    if args.fixture:
        if not Path(args.fixture).exists():
            raise ConfigError(f"fixture not found: {args.fixture}")
        return FixtureProvider.from_path(args.fixture)
    if args.provider_url:
        return HttpProvider(args.provider_url)
    raise ConfigError("need --fixture or --provider-url")


def _word_lists(args) -> WordLists:
    return WordLists.from_paths(common=args.common_words,
                                vague=args.vague_words,
                                stop=args.stop_words)


def _store(args) -> EmbeddingStore:
    if args.embeddings:
        if not Path(args.embeddings).exists():
            raise ConfigError(f"embeddings not found: {args.embeddings}")
        return load_embeddings(args.embeddings)
    return EmbeddingStore.empty()


def _out_dir(args) -> Path:
    if not args.out:
        raise ConfigError("--out is required")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _miner(args):
    """Returns callable(doc) -> DomainCorpus, or None when mining is off."""
    if args.corpus_dir and not args.mine_corpus and not args.wiki_url:
        fixed = corpus_mod.load_corpus(args.corpus_dir)

        def from_disk(_doc):
            return fixed
        return from_disk
    if not (args.mine_corpus or args.wiki_url):
        return None
    client = corpus_mod.WikiClient(
        base_url=args.wiki_url or corpus_mod.DEFAULT_WIKI_URL,
        cache_dir=args.cache_dir)

    def mine_for(doc):
        phrases = corpus_mod.extract_keyphrases(doc)
        corpus_dir = None
        if args.corpus_dir:
            corpus_dir = Path(args.corpus_dir) / doc.doc_id
        return corpus_mod.mine(phrases, depth=args.depth, client=client,
                               corpus_dir=corpus_dir)
    return mine_for


def _filter_model(args):
    if args.model:
        if not Path(args.model).exists():
            raise ConfigError(f"model not found: {args.model}")
        return load_model(args.model)
    return None


# -- commands -------------------------------------------------------------------

def cmd_recommend(args) -> int:
    _validate(args)
    docs = _documents(args)
    if len(docs) != 1:
        raise ConfigError("recommend takes exactly one --input document")
    provider = _provider(args)
    lists = _word_lists(args)
    store = _store(args)
    model = _filter_model(args)
    if args.preset != "none" and model is None:
        raise ConfigError(f"--preset {args.preset} needs a --model file")
    out = _out_dir(args)

    doc_id, text = docs[0]
    doc = annotate(doc_id, text)
    instances = generate_masked_instances(doc)
    batches = provider.get_predictions_batch(instances, args.k)
    records = [r for b in batches for r in b]
    pruned = prune(records, doc, lists)

    miner = _miner(args)
    corpus = miner(doc) if miner else corpus_mod.empty_corpus()

    kept = pruned
    flags = []
    if model is not None:
        matrix = build_matrix(pruned, doc, corpus, store, run_seed=args.seed)
        classifications = model.classify_matrix(matrix)
        kept = [r for r, c in zip(pruned, classifications) if c == RELEVANT]
        flags.append(f"filter={model.config.get('preset', model.algorithm)}")
    final = dedupe_by_lemma(kept)
    recommendations = sorted(
        ({"term": prediction_lemma(r),
          "prediction": r.prediction.token,
          "score": r.prediction.score,
          "sentence_index": r.instance.sentence_index,
          "masked_surface": r.instance.masked_surface,
          "masked_pos": r.instance.masked_pos}
         for r in final),
        key=lambda rec: (-rec["score"], rec["term"]))
    payload = {"doc_id": doc_id, "k": args.k, "preset": args.preset,
               "flags": flags, "n_masked": len(instances),
               "n_predictions": len(records), "n_pruned": len(pruned),
               "recommendations": recommendations}
    (out / "recommendations.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
    print(f"{len(recommendations)} recommended terms -> "
          f"{out / 'recommendations.json'}")
    return EXIT_OK


def cmd_mine(args) -> int:
    _validate(args)
    docs = _documents(args)
    out = _out_dir(args)
    client = corpus_mod.WikiClient(
        base_url=args.wiki_url or corpus_mod.DEFAULT_WIKI_URL,
        cache_dir=args.cache_dir)
    for doc_id, text in docs:
        doc = annotate(doc_id, text)
        phrases = corpus_mod.extract_keyphrases(doc)
        corpus = corpus_mod.mine(phrases, depth=args.depth, client=client,
                                 corpus_dir=out / doc_id)
        print(f"{doc_id}: {corpus.size} articles "
              f"({len(phrases)} key phrases, depth {args.depth})")
    return EXIT_OK


def _labeled_dataset_for(args, docs, provider, lists, store, miner):
    datasets = []
    c_set = common_and_stop_set(lists)
    for doc_id, text in docs:
        for rep in range(args.repetitions):
            seed = derive_seed(args.seed, doc_id, rep)
            full = annotate(doc_id, text)
            split = split_document(full, seed)
            disclosed = half_document(full, split.disclosed)
            withheld = half_document(full, split.withheld, doc_id + "#h2")
            n_set = novel_terms(disclosed.term_set, withheld.term_set, c_set)
            instances = generate_masked_instances(disclosed)
            batches = provider.get_predictions_batch(instances, args.k)
            records = [r for b in batches for r in b]
            pruned = prune(records, disclosed, lists)
            corpus = miner(disclosed) if miner else corpus_mod.empty_corpus()
            matrix = build_matrix(pruned, disclosed, corpus, store, run_seed=seed)
            datasets.append(label_dataset(pruned, matrix, n_set, store))
    return merge_datasets(datasets)


def cmd_train(args) -> int:
    _validate(args)
    docs = _documents(args)
    if args.preset == "none":
        raise ConfigError("train needs --preset strict|moderate|lenient")
    if not args.out:
        raise ConfigError("--out model file is required")
    provider = _provider(args)
    lists = _word_lists(args)
    store = _store(args)
    dataset = _labeled_dataset_for(args, docs, provider, lists, store,
                                   _miner(args))
    model = preset(args.preset, dataset, seed=args.seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save(model, out)
    counts = dataset.class_counts
    print(f"trained {args.preset} ({model.algorithm}) on {len(dataset.rows)} "
          f"rows {counts} -> {out}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    _validate(args)
    docs = _documents(args)
    provider = _provider(args)
    lists = _word_lists(args)
    store = _store(args)
    out = _out_dir(args)
    filters = {"none": None}
    model = _filter_model(args)
    if model is not None:
        filters[model.config.get("preset", model.algorithm)] = model
    lexicon = load_lexicon(args.wordnet) if args.wordnet else None
    config = EvalConfig(documents=docs, provider=provider, k=args.k,
                        repetitions=args.repetitions, seed=args.seed,
                        filters=filters, lists=lists, store=store,
                        miner=_miner(args),
                        include_baselines=bool(args.wordnet) or False,
                        lexicon=lexicon)
    report = run_experiment(config)
    (out / "report.json").write_text(report.to_json(), encoding="utf-8")
    (out / "report.csv").write_text(report.to_csv(), encoding="utf-8")
    levels = report.aggregates["levels"]
    for level in sorted(levels):
        agg = levels[level]
        print(f"{level}: accuracy={agg['mean_accuracy']:.4f} "
              f"coverage={agg['mean_coverage']:.4f} over {agg['runs']} runs")
    if report.errors:
        print(f"{len(report.errors)} document runs failed; see report.json")
    return EXIT_OK


def cmd_baseline(args) -> int:
    _validate(args)
    docs = _documents(args)
    lists = _word_lists(args)
    store = _store(args)
    out = _out_dir(args)
    which = getattr(args, "which", "all")
    lexicon = None
    if which in ("3", "all") and args.wordnet:
        lexicon = load_lexicon(args.wordnet)
    miner = _miner(args)
    c_set = common_and_stop_set(lists)
    results = {}
    for doc_id, text in docs:
        seed = derive_seed(args.seed, doc_id, 0)
        full = annotate(doc_id, text)
        split = split_document(full, seed)
        disclosed = half_document(full, split.disclosed)
        withheld = half_document(full, split.withheld, doc_id + "#h2")
        n_set = novel_terms(disclosed.term_set, withheld.term_set, c_set)
        entry = {"seed": seed, "novel_terms": len(n_set), "baselines": {}}
        runs = {}
        if which in ("1", "all"):
            runs["baseline1"] = baseline1_common_words(
                disclosed.term_set, withheld.term_set, lists)
        if which in ("2", "all"):
            corpus = miner(disclosed) if miner else corpus_mod.empty_corpus()
            runs["baseline2"] = baseline2_tfidf(
                corpus, disclosed.term_set, withheld.term_set, lists)
        if which in ("3", "all") and lexicon is not None:
            runs["baseline3"] = baseline3_synonyms(
                disclosed.term_set, withheld.term_set, lexicon, lists)
        for name, hits in sorted(runs.items()):
            entry["baselines"][name] = {
                "hits": sorted(hits),
                "accuracy": accuracy(hits, n_set, store).value,
                "coverage": coverage(hits, n_set, store).value,
            }
        results[doc_id] = entry
    (out / "baselines.json").write_text(
        json.dumps(results, indent=2, sort_keys=True), encoding="utf-8")
    print(f"baseline hit-sets for {len(docs)} documents -> "
          f"{out / 'baselines.json'}")
    return EXIT_OK


COMMANDS = {"recommend": cmd_recommend, "mine": cmd_mine, "train": cmd_train,
            "evaluate": cmd_evaluate, "baseline": cmd_baseline}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except corpus_mod.MiningNetworkError as exc:
        print(f"network error: {exc}", file=sys.stderr)
        return EXIT_NETWORK
    except ProviderError as exc:
        print(f"provider error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
