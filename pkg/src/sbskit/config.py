"""Run configuration: TOML file plus command-line overrides."""

from __future__ import annotations

import copy
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .constructs import AGGREGATES, OVERLAP_POLICIES
from .corpus import TABLE1_KEYWORDS, Area, Facet
from .errors import ConfigError, IoError
from .report import FORMATS
from .sbs.centrality import DISTANCES

CONFIG_ENV = "SBSKIT_CONFIG"


@dataclass(frozen=True)
class Option:
    default: Any
    help: str
    check: Callable[[Any], bool] | None = None
    expect: str = ""
    # excluded from the config echo/hash: affects speed or location only
    volatile: bool = False


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def _is_num(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _str_list(v):
    return isinstance(v, list) and all(isinstance(x, str) for x in v)


def _facet_ok(v):
    if v == "":
        return True
    try:
        Facet.parse(v)
    except ValueError:
        return False
    return True


SCHEMA: dict[str, dict[str, Option]] = {
    "corpus": {
        "path": Option("", "corpus file; empty uses the bundled demo corpus", lambda v: isinstance(v, str), "a path"),
        "format": Option("", "jsonl or csv; empty infers from the file suffix", lambda v: v in ("", "jsonl", "csv"), "'', 'jsonl' or 'csv'"),
        "filter": Option(True, "keep only postings that mention a retrieval keyword", lambda v: isinstance(v, bool), "a boolean"),
        "operations_keywords": Option(list(TABLE1_KEYWORDS[Area.OPERATIONS]), "keywords marking operations postings", _str_list, "a list of strings"),
        "supply_chain_keywords": Option(list(TABLE1_KEYWORDS[Area.SUPPLY_CHAIN]), "keywords marking supply-chain postings", _str_list, "a list of strings"),
        "exclude_list": Option("", "file of document ids to drop, one per line", lambda v: isinstance(v, str), "a path"),
        "time_field": Option("", "record field holding a time-frame label; scores are standardized per frame", lambda v: isinstance(v, str), "a field name"),
    },
    "prep": {
        "stopwords": Option("", "stopword file; empty uses the bundled English list", lambda v: isinstance(v, str), "a path"),
        "multiword_terms": Option([], "extra phrases to merge into single tokens", lambda v: _str_list(v) and all(len(x.split()) >= 2 for x in v), "a list of multi-word phrases"),
        "min_token_len": Option(2, "shortest token kept", lambda v: _is_int(v) and v >= 1, "an integer >= 1"),
    },
    "network": {
        "window": Option(7, "co-occurrence window in tokens", lambda v: _is_int(v) and v >= 2, "an integer >= 2"),
        "min_weight": Option(0, "drop edges lighter than this", lambda v: _is_num(v) and v >= 0, "a number >= 0"),
        "distance": Option("inverse", "edge length: inverse (1/w) or inverse_log (1/log(1+w))", lambda v: v in DISTANCES, f"one of {DISTANCES}"),
    },
    "constructs": {
        "lexicon": Option("", "construct lexicon; empty uses the bundled ipip_28.lex", lambda v: isinstance(v, str), "a path"),
        "threshold": Option(0.01, "minimum share of documents a construct must reach", lambda v: _is_num(v) and 0 <= v <= 1, "a number in [0, 1]"),
        "aggregate": Option("merge", "merge keywords into one node, or sum (mean of member z-scores)", lambda v: v in AGGREGATES, f"one of {AGGREGATES}"),
        "on_overlap": Option("first", "stem claimed by two constructs: error, or first (earliest construct keeps it)", lambda v: v in OVERLAP_POLICIES, f"one of {OVERLAP_POLICIES}"),
    },
    "topics": {
        "resolution": Option(1.0, "Louvain resolution", lambda v: _is_num(v) and v > 0, "a number > 0"),
        "seed": Option(42, "seed for the Louvain node order", _is_int, "an integer"),
        "top_k": Option(10, "keywords listed per cluster", lambda v: _is_int(v) and v >= 1, "an integer >= 1"),
        "labels": Option("", "JSON file mapping cluster id to label", lambda v: isinstance(v, str), "a path"),
    },
    "output": {
        "dir": Option("sbskit_out", "output directory", lambda v: isinstance(v, str) and v != "", "a path", volatile=True),
        "formats": Option(list(FORMATS), "any of csv, json, svg, dot", lambda v: _str_list(v) and set(v) <= set(FORMATS), f"a subset of {FORMATS}"),
    },
    "run": {
        "facet": Option("", "slice network, scores and topics by region, org_size, seniority or area", _facet_ok, "a facet name"),
        "threads": Option(0, "worker threads for betweenness; 0 = all cores", lambda v: _is_int(v) and v >= 0, "an integer >= 0", volatile=True),
    },
}


class RunConfig:
    """Validated nested configuration; read values as ``cfg["network"]["window"]``."""

    def __init__(self, data: dict | None = None, base_dir: Path | None = None):
        self.base_dir = base_dir or Path.cwd()
        self._data = {s: {k: copy.deepcopy(o.default) for k, o in opts.items()} for s, opts in SCHEMA.items()}
        if data:
            self.update(data)

    def update(self, data: dict) -> None:
        for section, values in data.items():
            if section not in SCHEMA:
                raise ConfigError(f"unknown config section [{section}]")
            if not isinstance(values, dict):
                raise ConfigError(f"[{section}] must be a table")
            for key, value in values.items():
                self.set(section, key, value)

    def set(self, section: str, key: str, value) -> None:
        opts = SCHEMA.get(section, {})
        if key not in opts:
            raise ConfigError(f"unknown config key {section}.{key}")
        opt = opts[key]
        if isinstance(opt.default, float) and _is_int(value):
            value = float(value)
        if opt.check is not None and not opt.check(value):
            raise ConfigError(f"{section}.{key} must be {opt.expect}, got {value!r}")
        self._data[section][key] = value

    def __getitem__(self, section: str) -> dict:
        return self._data[section]

    def path(self, section: str, key: str) -> Path | None:
        """Resolve a path option relative to the config file; None when unset."""
        raw = self._data[section][key]
        if not raw:
            return None
        p = Path(raw).expanduser()
        return p if p.is_absolute() else self.base_dir / p

    @property
    def threads(self) -> int:
        return self._data["run"]["threads"] or os.cpu_count() or 1

    def echo(self) -> dict:
        """Configuration as recorded in manifests (volatile keys omitted)."""
        return {
            s: {k: copy.deepcopy(v) for k, v in vals.items() if not SCHEMA[s][k].volatile}
            for s, vals in self._data.items()
        }

    def as_dict(self) -> dict:
        return copy.deepcopy(self._data)


def load_config(path=None) -> RunConfig:
    """Read a TOML config; falls back to the path in $SBSKIT_CONFIG, then defaults."""
    if path is None:
        path = os.environ.get(CONFIG_ENV) or None
    if path is None:
        return RunConfig()
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read config {path}: {exc}") from exc
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return RunConfig(data, base_dir=path.parent.resolve())


def describe_options() -> str:
    lines = ["config keys (TOML section.key = default):"]
    for section, opts in SCHEMA.items():
        for key, opt in opts.items():
            default = repr(opt.default) if not isinstance(opt.default, bool) else str(opt.default).lower()
            lines.append(f"  {section}.{key} = {default}\n      {opt.help}")
    return "\n".join(lines)
