"""Command-line entry point: ``sbskit <command> [options]``.

Settings come from a TOML config file (``--config`` or $SBSKIT_CONFIG) and
command-line flags, with flags taking precedence. Data tables go to stdout;
progress and diagnostics go to stderr.

Exit codes: 0 success, 1 configuration error, 2 file-system error, 3 bad data.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .config import CONFIG_ENV, RunConfig, describe_options, load_config
from .constructs import parse_term
from .corpus import Facet, FacetKey, facet_counts
from .errors import ConfigError, DataError, IoError, SbsKitError
from .pipeline import analyze, ingest, network_for, prep_config, topics_for
from .report import RunResults, canonical_json, compare, emit, heatmap, scores_csv
from .sbs import SbsScore, read_scores_csv, score_all
from .semnet import merge_groups
from .textprep import preprocess_corpus

log = logging.getLogger("sbskit")

EXIT_CODES = """exit codes:
  0  success
  1  configuration error (bad key, value out of range, bad flag)
  2  file-system error (missing input, unwritable output)
  3  data error (malformed corpus or lexicon, empty network, ...)"""

# flag dest -> (section, key, kind); kind "path" values resolve against the cwd
FLAG_KEYS = {
    "corpus": ("corpus", "path", "path"),
    "format": ("corpus", "format", None),
    "exclude_list": ("corpus", "exclude_list", "path"),
    "time_field": ("corpus", "time_field", None),
    "stopwords": ("prep", "stopwords", "path"),
    "window": ("network", "window", None),
    "min_weight": ("network", "min_weight", None),
    "distance": ("network", "distance", None),
    "lexicon": ("constructs", "lexicon", "path"),
    "threshold": ("constructs", "threshold", None),
    "aggregate": ("constructs", "aggregate", None),
    "on_overlap": ("constructs", "on_overlap", None),
    "resolution": ("topics", "resolution", None),
    "seed": ("topics", "seed", None),
    "top_k": ("topics", "top_k", None),
    "labels": ("topics", "labels", "path"),
    "out": ("output", "dir", "path"),
    "facet": ("run", "facet", None),
    "threads": ("run", "threads", None),
}


class _Parser(argparse.ArgumentParser):
    """Usage errors become ConfigError so they share exit code 1."""

    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def _common_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("configuration (flags override the config file)")
    g.add_argument("--config", metavar="PATH", help=f"TOML config file (default: ${CONFIG_ENV})")
    g.add_argument("--corpus", metavar="PATH", help="corpus file (JSONL or CSV)")
    g.add_argument("--format", choices=("jsonl", "csv"))
    g.add_argument("--no-filter", action="store_true", help="skip the retrieval keyword filter")
    g.add_argument("--exclude-list", metavar="PATH")
    g.add_argument("--time-field", metavar="FIELD")
    g.add_argument("--stopwords", metavar="PATH")
    g.add_argument("--window", type=int)
    g.add_argument("--min-weight", type=float)
    g.add_argument("--distance", choices=("inverse", "inverse_log"))
    g.add_argument("--lexicon", metavar="PATH")
    g.add_argument("--threshold", type=float)
    g.add_argument("--aggregate", choices=("merge", "sum"))
    g.add_argument("--on-overlap", choices=("error", "first"))
    g.add_argument("--resolution", type=float)
    g.add_argument("--seed", type=int)
    g.add_argument("--top-k", type=int)
    g.add_argument("--labels", metavar="PATH", help="JSON file mapping cluster id to label")
    g.add_argument("--out", metavar="DIR", help="output directory")
    g.add_argument("--formats", metavar="LIST", help="comma-separated subset of csv,json,svg,dot")
    g.add_argument("--facet", help="slice by region, org_size, seniority or area")
    g.add_argument("--threads", type=int, help="betweenness worker threads (0 = all cores)")
    g.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override any config key; VALUE is parsed as TOML, else taken as a string",
    )
    g.add_argument("-q", "--quiet", action="store_true", help="no progress lines on stderr")
    return p


def build_parser() -> argparse.ArgumentParser:
    epilog = describe_options() + "\n\n" + EXIT_CODES
    fmt = argparse.RawDescriptionHelpFormatter
    parser = _Parser(
        prog="sbskit",
        description="Semantic Brand Score analysis of document corpora.",
        epilog=epilog,
        formatter_class=fmt,
    )
    parser.add_argument("--version", action="version", version=f"sbskit {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    common = _common_options()

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text, epilog=epilog, formatter_class=fmt)

    p = add("ingest", "load and filter the corpus, print document counts per facet")
    p.add_argument("--json", action="store_true", help="print the summary as JSON instead of a table")

    add("analyze", "full run: construct scores, comparisons, heatmaps, topics")

    p = add("sbs", "score arbitrary terms on the word network")
    p.add_argument("terms", nargs="*", help="terms to score; 'word**' expands to every stem with that prefix")
    p.add_argument(
        "--merge",
        action="append",
        default=[],
        metavar="T1,T2,...",
        help="score a comma-separated group of terms as one merged node (repeatable)",
    )

    add("topics", "detect topics on the word network")

    p = add("report", "build comparison or heatmap reports from saved score CSVs")
    p.add_argument("--compare", nargs=2, metavar=("A.csv", "B.csv"), help="percent differences between two score tables")
    p.add_argument("--names", nargs=2, metavar=("A", "B"), default=("a", "b"), help="column labels for --compare")
    p.add_argument(
        "--slice",
        action="append",
        default=[],
        metavar="VALUE=PATH",
        help="score table for one facet value; with --facet builds a heatmap (repeatable)",
    )
    return parser


def _parse_value(text: str):
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def config_from_args(args) -> RunConfig:
    cfg = load_config(args.config)
    for dest, (section, key, kind) in FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is None:
            continue
        if kind == "path":
            value = str(Path(value).expanduser().resolve())
        cfg.set(section, key, value)
    if args.no_filter:
        cfg.set("corpus", "filter", False)
    if args.formats is not None:
        cfg.set("output", "formats", [f.strip() for f in args.formats.split(",") if f.strip()])
    for item in args.set:
        name, sep, raw = item.partition("=")
        section, dot, key = name.strip().partition(".")
        if not sep or not dot:
            raise ConfigError(f"--set expects SECTION.KEY=VALUE, got {item!r}")
        cfg.set(section, key, _parse_value(raw.strip()))
    return cfg


def _progress(quiet: bool):
    if quiet:
        return lambda msg: None
    return lambda msg: print(f"sbskit: {msg}", file=sys.stderr, flush=True)


def _out_dir(cfg: RunConfig) -> Path:
    return cfg.path("output", "dir")


def _table(header, rows) -> str:
    rows = [[str(c) for c in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines)


def _score_rows(scores):
    return [
        (i, s.target, f"{s.prevalence_z:.3f}", f"{s.diversity_z:.3f}", f"{s.connectivity_z:.3f}", f"{s.sbs:.3f}")
        for i, s in enumerate(scores, start=1)
    ]


SCORE_HEADER = ("rank", "target", "prevalence_z", "diversity_z", "connectivity_z", "sbs")


# commands


def cmd_ingest(cfg: RunConfig, args, progress) -> int:
    progress("loading corpus")
    docs, digest = ingest(cfg)
    counts = facet_counts(docs)
    summary = {"documents": len(docs), "source": docs.source_label, "facets": counts}
    if args.json:
        print(canonical_json(summary), end="")
    else:
        print(f"documents: {len(docs)}")
        rows = [(facet, value, n) for facet, values in counts.items() for value, n in values.items()]
        print(_table(("facet", "value", "count"), rows))
    results = RunResults(config=cfg.echo(), corpus_digest=digest, seed=cfg["topics"]["seed"])
    results.attachments["ingest_summary.json"] = canonical_json(summary)
    results.extra = {"command": "ingest", "documents": len(docs)}
    emit(results, _out_dir(cfg), cfg["output"]["formats"])
    return 0


def cmd_analyze(cfg: RunConfig, args, progress) -> int:
    t0 = time.perf_counter()
    result = analyze(cfg, progress)
    progress(result.selection.summary())
    res = result.results
    for label, scores in result.period_scores.items():
        res.attachments[f"sbs_scores_period_{label}.csv"] = scores_csv(scores)
    res.extra["command"] = "analyze"
    progress("writing outputs")
    emit(res, _out_dir(cfg), cfg["output"]["formats"])
    print(_table(SCORE_HEADER, _score_rows(result.ranking)))
    progress(f"done in {time.perf_counter() - t0:.1f}s, outputs in {_out_dir(cfg)}")
    return 0


def _term_group(raw_terms, min_len):
    terms = []
    for raw in raw_terms:
        raw = raw.strip()
        if not raw:
            raise ConfigError("empty term")
        try:
            terms.append(parse_term(raw, min_len))
        except DataError as exc:
            raise ConfigError(str(exc)) from exc
    return terms


def cmd_sbs(cfg: RunConfig, args, progress) -> int:
    if not args.terms and not args.merge:
        raise ConfigError("sbs: give at least one term or --merge group")
    min_len = cfg["prep"]["min_token_len"]
    # each row: (label, terms); single terms and merge groups alike
    requests = [(t, _term_group([t], min_len)) for t in args.terms]
    for group in args.merge:
        parts = [p.strip() for p in group.split(",") if p.strip()]
        requests.append(("+".join(parts), _term_group(parts, min_len)))
    phrases = {t.phrase for _, terms in requests for t in terms if t.phrase}

    progress("loading corpus")
    docs, digest = ingest(cfg)
    seqs = preprocess_corpus(docs, prep_config(cfg, None, phrases))
    net = network_for(seqs, cfg)
    vocab = set(net.nodes)
    distance, threads = cfg["network"]["distance"], cfg.threads

    progress(f"scoring {len(requests)} targets on {len(net)} nodes")
    base = None
    found: list[SbsScore] = []
    missing: list[str] = []
    rows = []
    for label, terms in requests:
        stems = set().union(*(t.resolve(vocab) for t in terms))
        if not stems:
            log.warning("%r: not in vocabulary", label)
            missing.append(label)
            rows.append((label, "", "", "", "", "not_in_vocab"))
            continue
        if len(stems) == 1 and not any(t.wildcard for t in terms) and len(terms) == 1:
            if base is None:
                base = score_all(net, distance, threads)
            s = base[next(iter(stems))]
            s = SbsScore(label, *s.as_row()[1:])
        else:
            merged = merge_groups(net, {label: stems})
            s = score_all(merged, distance, threads)[label]
        found.append(s)
        rows.append((label, f"{s.prevalence_z:.3f}", f"{s.diversity_z:.3f}", f"{s.connectivity_z:.3f}", f"{s.sbs:.3f}", "ok"))
    print(_table(("target", "prevalence_z", "diversity_z", "connectivity_z", "sbs", "status"), rows))

    results = RunResults(config=cfg.echo(), corpus_digest=digest, seed=cfg["topics"]["seed"])
    results.scores = found
    results.extra = {"command": "sbs", "not_in_vocab": missing}
    emit(results, _out_dir(cfg), cfg["output"]["formats"])
    return 0


def cmd_topics(cfg: RunConfig, args, progress) -> int:
    progress("loading corpus")
    docs, digest = ingest(cfg)
    seqs = preprocess_corpus(docs, prep_config(cfg))
    net = network_for(seqs, cfg)
    progress(f"detecting topics on {len(net)} nodes")
    partition = topics_for(net, cfg)
    rows = [
        (c.id, f"{c.relevance * 100:.1f}%", c.size, c.name, " ".join(k for k, _ in c.keywords))
        for c in partition.clusters
    ]
    print(_table(("cluster", "relevance", "size", "label", "keywords"), rows))
    results = RunResults(config=cfg.echo(), corpus_digest=digest, seed=cfg["topics"]["seed"])
    results.network = net
    results.partition = partition
    results.extra = {"command": "topics", "modularity": round(partition.modularity, 12)}
    emit(results, _out_dir(cfg), cfg["output"]["formats"])
    return 0


def _read_scores(path: str) -> list[SbsScore]:
    try:
        return read_scores_csv(path)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except (KeyError, ValueError) as exc:
        raise DataError(f"{path}: not a score table ({exc})") from exc


def cmd_report(cfg: RunConfig, args, progress) -> int:
    if not args.compare and not args.slice:
        raise ConfigError("report: give --compare A.csv B.csv and/or --slice VALUE=PATH with --facet")
    results = RunResults(config=cfg.echo(), seed=cfg["topics"]["seed"])
    results.extra = {"command": "report"}
    if args.compare:
        a, b = (_read_scores(p) for p in args.compare)
        rows = compare(a, b)
        results.comparison = rows
        results.comparison_labels = tuple(f"sbs_{n}" for n in args.names)
        print(_table(
            ("construct", f"sbs_{args.names[0]}", f"sbs_{args.names[1]}", "abs_pct_diff"),
            [(r.construct, f"{r.sbs_a:.3f}", f"{r.sbs_b:.3f}", f"{r.abs_pct_diff:.1f}") for r in rows],
        ))
    if args.slice:
        if not cfg["run"]["facet"]:
            raise ConfigError("report: --slice needs --facet")
        facet = Facet.parse(cfg["run"]["facet"])
        tables = {}
        for item in args.slice:
            value, sep, path = item.partition("=")
            if not sep:
                raise ConfigError(f"--slice expects VALUE=PATH, got {item!r}")
            tables[FacetKey(facet, facet.values.parse(value))] = _read_scores(path)
        grid = heatmap(tables)
        results.heatmaps[facet.value] = grid
        if args.compare:
            print()
        print(_table(
            ("construct",) + tuple(c.label for c in grid.cols),
            [(r,) + tuple(f"{v:.3f}" for v in row) for r, row in zip(grid.rows, grid.cells)],
        ))
    emit(results, _out_dir(cfg), cfg["output"]["formats"])
    return 0


COMMANDS = {
    "ingest": cmd_ingest,
    "analyze": cmd_analyze,
    "sbs": cmd_sbs,
    "topics": cmd_topics,
    "report": cmd_report,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="sbskit: %(levelname)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return 1
        cfg = config_from_args(args)
        return COMMANDS[args.command](cfg, args, _progress(args.quiet))
    except SbsKitError as exc:
        print(f"sbskit: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"sbskit: error: {exc}", file=sys.stderr)
        return IoError.exit_code
    except ValueError as exc:
        print(f"sbskit: error: {exc}", file=sys.stderr)
        return DataError.exit_code
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    raise SystemExit(main())
