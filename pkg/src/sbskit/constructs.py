"""Construct lexicons: loading, wildcard expansion, coverage filtering, scoring."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import (
    BadWildcard,
    EmptyConstruct,
    IoError,
    NoResolvableTerms,
    OverlappingConstructs,
    ParseError,
)
from .sbs import SbsScore, score, score_all
from .semnet import SemanticNetwork, merge_groups
from .textprep import JOINER, normalize, stem

log = logging.getLogger(__name__)

WILDCARD = "**"
MIN_WILDCARD_PREFIX = 3
DEFAULT_THRESHOLD = 0.01
AGGREGATES = ("merge", "sum")
OVERLAP_POLICIES = ("error", "first")


@dataclass(frozen=True)
class Term:
    raw: str
    key: str  # stem for words and phrases, lowercase prefix for wildcards
    wildcard: bool = False
    phrase: str | None = None  # normalized surface form of multi-word terms

    def resolve(self, vocab: Iterable[str]) -> set[str]:
        if self.wildcard:
            return expand_wildcards(self.raw, vocab)
        return {self.key} if self.key in vocab else set()


@dataclass(frozen=True)
class ConstructLexicon:
    constructs: Mapping[str, tuple[Term, ...]]
    source: str = ""
    # every phrase surface form, including ones whose stem duplicates another term
    surface_phrases: frozenset[str] = frozenset()

    @property
    def names(self) -> list[str]:
        return list(self.constructs)

    def phrases(self) -> set[str]:
        """Surface phrases that preprocessing must merge before stemming."""
        own = {t.phrase for terms in self.constructs.values() for t in terms if t.phrase}
        return own | set(self.surface_phrases)

    def restricted(self, names: Iterable[str]) -> "ConstructLexicon":
        keep = set(names)
        return ConstructLexicon(
            {k: v for k, v in self.constructs.items() if k in keep}, self.source, self.surface_phrases
        )


@dataclass(frozen=True)
class ConstructCoverage:
    construct: str
    doc_fraction: float
    matched_terms: frozenset[str]
    matching_docs: int = 0
    total_docs: int = 0


@dataclass(frozen=True)
class ConstructSelection:
    kept: frozenset[str]
    dropped: frozenset[str]
    threshold: float

    def summary(self) -> str:
        return (
            f"{len(self.kept) + len(self.dropped)} constructs -> {len(self.kept)} kept, "
            f"{len(self.dropped)} dropped (coverage >= {self.threshold:.2%})"
        )


def parse_term(raw: str, min_token_len: int = 2) -> Term:
    text = raw.strip()
    if text.endswith(WILDCARD):
        prefix = text[: -len(WILDCARD)].casefold()
        if len(prefix) < MIN_WILDCARD_PREFIX:
            raise BadWildcard(f"wildcard {raw!r} needs a prefix of at least {MIN_WILDCARD_PREFIX} characters")
        if normalize(prefix, 1) != [prefix]:
            raise BadWildcard(f"wildcard prefix {prefix!r} must be a single word")
        return Term(raw, prefix, wildcard=True)
    if "*" in text:
        raise BadWildcard(f"wildcards must end with {WILDCARD!r}: {raw!r}")
    words = normalize(text, min_token_len)
    if not words:
        raise ParseError(f"term {raw!r} has no usable words")
    if len(words) == 1:
        return Term(raw, stem(words[0]))
    return Term(raw, stem(JOINER.join(words)), phrase=" ".join(words))


def parse_lexicon(text: str, source: str = "<string>", min_token_len: int = 2) -> ConstructLexicon:
    """Parse the key-table lexicon format (one ``[[construct]]`` table each)."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"{source}: {exc}") from exc
    unknown = set(data) - {"construct", "lexicon"}
    if unknown:
        raise ParseError(f"{source}: unknown top-level keys {sorted(unknown)}")
    tables = data.get("construct", [])
    if not isinstance(tables, list):
        raise ParseError(f"{source}: 'construct' must be an array of tables")
    constructs: dict[str, tuple[Term, ...]] = {}
    phrases: set[str] = set()
    for i, table in enumerate(tables, start=1):
        name = table.get("name")
        if not isinstance(name, str) or not name.strip():
            raise ParseError(f"{source}: construct #{i} has no name")
        name = name.strip()
        if name in constructs:
            raise ParseError(f"{source}: duplicate construct {name!r}")
        extra = set(table) - {"name", "terms"}
        if extra:
            raise ParseError(f"{source}: construct {name!r} has unknown keys {sorted(extra)}")
        raw_terms = table.get("terms", [])
        if not isinstance(raw_terms, list) or not all(isinstance(t, str) for t in raw_terms):
            raise ParseError(f"{source}: construct {name!r} terms must be a list of strings")
        if not raw_terms:
            raise EmptyConstruct(f"{source}: construct {name!r} has no terms")
        terms: dict[tuple[bool, str], Term] = {}
        for raw in raw_terms:
            term = parse_term(raw, min_token_len)
            if term.phrase:
                phrases.add(term.phrase)
            terms.setdefault((term.wildcard, term.key), term)
        constructs[name] = tuple(terms.values())
    if not constructs:
        raise EmptyConstruct(f"{source}: lexicon defines no constructs")
    return ConstructLexicon(constructs, source, frozenset(phrases))


def load_lexicon(path, min_token_len: int = 2) -> ConstructLexicon:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read lexicon {path}: {exc}") from exc
    return parse_lexicon(text, str(path), min_token_len)


def default_lexicon_path():
    return resources.files("sbskit.data").joinpath("lexicons", "ipip_28.lex")


def load_default_lexicon(min_token_len: int = 2) -> ConstructLexicon:
    path = default_lexicon_path()
    return parse_lexicon(path.read_text(encoding="utf-8"), "ipip_28.lex", min_token_len)


def expand_wildcards(term: str, vocab: Iterable[str]) -> set[str]:
    """All vocabulary stems starting with the literal prefix before ``**``."""
    if not term.endswith(WILDCARD):
        raise ValueError(f"{term!r} is not a wildcard term")
    prefix = term[: -len(WILDCARD)].casefold()
    return {v for v in vocab if v.startswith(prefix)}


def resolve(lexicon: ConstructLexicon, vocab: Iterable[str]) -> dict[str, frozenset[str]]:
    vocab = vocab if isinstance(vocab, (set, frozenset)) else set(vocab)
    out = {}
    for name, terms in lexicon.constructs.items():
        stems: set[str] = set()
        for t in terms:
            stems |= t.resolve(vocab)
        out[name] = frozenset(stems)
    return out


def literal_overlaps(lexicon: ConstructLexicon) -> dict[str, list[str]]:
    """Non-wildcard stems listed by more than one construct."""
    owners: dict[str, list[str]] = {}
    for name, terms in lexicon.constructs.items():
        for t in terms:
            if not t.wildcard and name not in owners.get(t.key, []):
                owners.setdefault(t.key, []).append(name)
    return {k: v for k, v in owners.items() if len(v) > 1}


def check_overlaps(resolved: Mapping[str, frozenset[str]], policy: str = "error") -> dict[str, frozenset[str]]:
    """Enforce that resolved stem sets are disjoint.

    ``policy="error"`` raises OverlappingConstructs; ``"first"`` keeps each
    shared stem with the earliest construct and warns.
    """
    if policy not in OVERLAP_POLICIES:
        raise ValueError(f"unknown overlap policy {policy!r}")
    owner: dict[str, str] = {}
    out = {}
    for name, stems in resolved.items():
        mine = set()
        for s in sorted(stems):
            if s in owner:
                msg = f"stem {s!r} resolved by both {owner[s]!r} and {name!r}"
                if policy == "error":
                    raise OverlappingConstructs(msg)
                warnings.warn(msg + f"; kept for {owner[s]!r}", stacklevel=2)
                continue
            owner[s] = name
            mine.add(s)
        out[name] = frozenset(mine)
    return out


def coverage(seqs: Sequence, lexicon: ConstructLexicon) -> list[ConstructCoverage]:
    """Share of documents containing at least one resolved stem of each construct."""
    token_sets = [set(s.tokens if hasattr(s, "tokens") else s) for s in seqs]
    vocab = set().union(*token_sets) if token_sets else set()
    resolved = resolve(lexicon, vocab)
    total = len(token_sets)
    out = []
    for name, stems in resolved.items():
        hits = sum(1 for toks in token_sets if not stems.isdisjoint(toks)) if stems else 0
        out.append(ConstructCoverage(name, hits / total if total else 0.0, stems, hits, total))
    return out


def filter_constructs(coverages: Iterable[ConstructCoverage], threshold: float = DEFAULT_THRESHOLD) -> ConstructSelection:
    """Keep constructs whose document fraction is at least ``threshold``."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must lie in [0, 1], got {threshold}")
    kept, dropped = set(), set()
    for cov in coverages:
        (kept if cov.doc_fraction >= threshold else dropped).add(cov.construct)
    selection = ConstructSelection(frozenset(kept), frozenset(dropped), threshold)
    log.info(selection.summary())
    return selection


def composite_network(
    net: SemanticNetwork,
    lexicon: ConstructLexicon,
    kept: Iterable[str],
    on_overlap: str = "error",
) -> tuple[SemanticNetwork, dict[str, frozenset[str]]]:
    """Merge every kept construct's stems into one node named after the construct."""
    kept = set(kept)
    names = [n for n in lexicon.names if n in kept]
    resolved = resolve(lexicon.restricted(names), set(net.nodes))
    for name in names:
        if not resolved[name]:
            raise NoResolvableTerms(name)
    resolved = check_overlaps(resolved, on_overlap)
    for name in names:
        if not resolved[name]:
            raise NoResolvableTerms(name, "all of its stems belong to earlier constructs")
    return merge_groups(net, {name: resolved[name] for name in names}), resolved


def score_constructs(
    net: SemanticNetwork,
    lexicon: ConstructLexicon,
    kept: Iterable[str],
    aggregate: str = "merge",
    on_overlap: str = "error",
    distance: str = "inverse",
    threads: int | None = 1,
) -> list[SbsScore]:
    """SBS per kept construct, in lexicon order.

    ``merge`` scores one composite node per construct, with all composites
    merged before any centrality is computed. ``sum`` leaves the network
    intact and averages the member stems' scores.
    """
    if aggregate not in AGGREGATES:
        raise ValueError(f"unknown aggregate mode {aggregate!r}")
    kept = set(kept)
    names = [n for n in lexicon.names if n in kept]
    if aggregate == "merge":
        work, _ = composite_network(net, lexicon, names, on_overlap)
        return score(work, names, distance, threads)

    resolved = resolve(lexicon.restricted(names), set(net.nodes))
    for name in names:
        if not resolved[name]:
            raise NoResolvableTerms(name)
    resolved = check_overlaps(resolved, on_overlap)
    table = score_all(net, distance, threads)
    out = []
    for name in names:
        members = [table[s] for s in sorted(resolved[name])]
        if not members:
            raise NoResolvableTerms(name, "all of its stems belong to earlier constructs")
        k = len(members)
        means = [sum(getattr(m, f) for m in members) / k for f in (
            "prevalence_raw", "diversity_raw", "connectivity_raw",
            "prevalence_z", "diversity_z", "connectivity_z",
        )]
        out.append(SbsScore(name, *means, means[3] + means[4] + means[5]))
    return out
