"""End-to-end analysis runs shared by the command-line entry points."""

from __future__ import annotations

import hashlib
import logging
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .config import RunConfig
from .constructs import (
    ConstructLexicon,
    ConstructSelection,
    coverage,
    filter_constructs,
    load_default_lexicon,
    load_lexicon,
    score_constructs,
)
from .corpus import (
    Area,
    DocumentSet,
    Facet,
    exclude_ids,
    filter_by_keywords,
    load_corpus,
    partition_by_facet,
    partition_by_period,
    read_exclude_list,
)
from .demo import bundled_corpus_path
from .errors import IoError
from .report import RunResults, canonical_json, compare, heatmap
from .sbs import SbsScore
from .semnet import SemanticNetwork, WindowConfig, build_network, prune_edges
from .textprep import PrepConfig, default_stopwords, load_stopwords, preprocess_corpus
from .topics import TopicPartition, detect_communities, label_clusters, load_labels, partition_to_dict

log = logging.getLogger(__name__)


def _corpus_path(cfg: RunConfig):
    return cfg.path("corpus", "path") or bundled_corpus_path()


def corpus_digest(path) -> str:
    """sha256 of the corpus file bytes; ``path`` may be a package resource."""
    try:
        data = path.read_bytes() if hasattr(path, "read_bytes") else Path(path).read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    return "sha256:" + hashlib.sha256(data).hexdigest()


def ingest(cfg: RunConfig) -> tuple[DocumentSet, str]:
    path = _corpus_path(cfg)
    fmt = cfg["corpus"]["format"] or None
    if fmt is None and not cfg["corpus"]["path"]:
        fmt = "jsonl"
    docs = load_corpus(path, fmt, cfg["corpus"]["time_field"] or None)
    digest = corpus_digest(path)
    exclude = cfg.path("corpus", "exclude_list")
    if exclude is not None:
        docs = exclude_ids(docs, read_exclude_list(exclude))
    if cfg["corpus"]["filter"]:
        docs = filter_by_keywords(
            docs,
            {
                Area.OPERATIONS: cfg["corpus"]["operations_keywords"],
                Area.SUPPLY_CHAIN: cfg["corpus"]["supply_chain_keywords"],
            },
        )
    return docs, digest


def lexicon_for(cfg: RunConfig) -> ConstructLexicon:
    path = cfg.path("constructs", "lexicon")
    min_len = cfg["prep"]["min_token_len"]
    return load_default_lexicon(min_len) if path is None else load_lexicon(path, min_len)


def prep_config(cfg: RunConfig, lexicon: ConstructLexicon | None = None, extra_phrases=()) -> PrepConfig:
    stop_path = cfg.path("prep", "stopwords")
    stopwords = default_stopwords() if stop_path is None else load_stopwords(stop_path)
    phrases = set(cfg["prep"]["multiword_terms"]) | set(extra_phrases)
    if lexicon is not None:
        phrases |= lexicon.phrases()
    return PrepConfig(frozenset(stopwords), frozenset(phrases), cfg["prep"]["min_token_len"])


def network_for(seqs, cfg: RunConfig) -> SemanticNetwork:
    net = build_network(seqs, WindowConfig(cfg["network"]["window"]))
    if cfg["network"]["min_weight"] > 0:
        net = prune_edges(net, cfg["network"]["min_weight"])
    return net


@dataclass
class Analysis:
    results: RunResults
    selection: ConstructSelection
    ranking: list[SbsScore]
    period_scores: dict[str, list[SbsScore]] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)


def _construct_scores(seqs, cfg: RunConfig, lexicon: ConstructLexicon, kept) -> tuple[SemanticNetwork, list[SbsScore]]:
    net = network_for(seqs, cfg)
    scores = score_constructs(
        net,
        lexicon,
        kept,
        aggregate=cfg["constructs"]["aggregate"],
        on_overlap=cfg["constructs"]["on_overlap"],
        distance=cfg["network"]["distance"],
        threads=cfg.threads,
    )
    return net, scores


def analyze(cfg: RunConfig, progress=lambda msg: None) -> Analysis:
    """ingest -> preprocess -> network -> coverage filter -> composite SBS -> topics -> report data."""
    caught: list[warnings.WarningMessage]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        progress("loading corpus")
        docs, digest = ingest(cfg)
        lexicon = lexicon_for(cfg)
        prep = prep_config(cfg, lexicon)
        progress(f"preprocessing {len(docs)} documents")
        seqs = preprocess_corpus(docs, prep)
        by_id = {s.doc_id: s for s in seqs}

        covs = coverage(seqs, lexicon)
        selection = filter_constructs(covs, cfg["constructs"]["threshold"])
        kept = [n for n in lexicon.names if n in selection.kept]

        progress("scoring constructs on the full corpus")
        net, scores = _construct_scores(seqs, cfg, lexicon, kept)

        results = RunResults(config=cfg.echo(), corpus_digest=digest, seed=cfg["topics"]["seed"])
        results.scores = scores

        parts = partition_by_facet(docs, Facet.AREA)
        ops = parts.get(next((k for k in parts if k.value == Area.OPERATIONS), None))
        scm = parts.get(next((k for k in parts if k.value == Area.SUPPLY_CHAIN), None))
        if ops and scm:
            progress("comparing operations and supply-chain postings")
            _, ops_scores = _construct_scores([by_id[d.id] for d in ops], cfg, lexicon, kept)
            _, scm_scores = _construct_scores([by_id[d.id] for d in scm], cfg, lexicon, kept)
            results.comparison = compare(ops_scores, scm_scores)
            results.comparison_labels = ("sbs_operations", "sbs_supply_chain")

        facet_name = cfg["run"]["facet"]
        if facet_name:
            facet = Facet.parse(facet_name)
            tables = {}
            for key, part in partition_by_facet(docs, facet).items():
                progress(f"scoring slice {key}")
                slice_net, tables[key] = _construct_scores([by_id[d.id] for d in part], cfg, lexicon, kept)
                slice_topics = topics_for(slice_net, cfg)
                results.attachments[f"topics_{facet.value}_{key.value.value}.json"] = canonical_json(
                    partition_to_dict(slice_topics)
                )
            results.heatmaps[facet.value] = heatmap(tables)

        period_scores = {}
        if cfg["corpus"]["time_field"]:
            for period, part in partition_by_period(docs).items():
                label = period if period is not None else "unknown"
                progress(f"scoring period {label}")
                _, period_scores[label] = _construct_scores([by_id[d.id] for d in part], cfg, lexicon, kept)

        progress("detecting topics")
        partition = topics_for(net, cfg)
        results.network = net
        results.partition = partition
        results.extra = {
            "constructs": {
                "kept": sorted(selection.kept),
                "dropped": sorted(selection.dropped),
                "coverage": {c.construct: round(c.doc_fraction, 12) for c in covs},
            },
            "documents": len(docs),
        }
    messages = sorted({str(w.message) for w in caught})
    results.extra["warnings"] = messages
    for m in messages:
        log.warning(m)
    ranking = sorted(scores, key=lambda s: (-s.sbs, s.target))
    return Analysis(results, selection, ranking, period_scores, messages)


def topics_for(net: SemanticNetwork, cfg: RunConfig) -> TopicPartition:
    t = cfg["topics"]
    partition = detect_communities(net, t["resolution"], t["seed"], t["top_k"])
    labels_path = cfg.path("topics", "labels")
    if labels_path is not None:
        partition = label_clusters(partition, load_labels(labels_path))
    return partition
