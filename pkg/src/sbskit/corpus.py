"""Loading, keyword filtering and facet partitioning of job-posting corpora."""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import DuplicateIdError, EmptyKeywordList, FormatError, IoError


class _Facet(str, Enum):
    @classmethod
    def parse(cls, raw):
        if raw is None:
            return cls.UNKNOWN
        key = str(raw).strip().casefold().replace(" ", "_").replace("-", "_")
        for member in cls:
            if member.value == key:
                return member
        return cls.UNKNOWN

    @property
    def label(self) -> str:
        return "".join(part.capitalize() for part in self.value.split("_"))


class Area(_Facet):
    OPERATIONS = "operations"
    SUPPLY_CHAIN = "supply_chain"
    UNKNOWN = "unknown"


class Region(_Facet):
    EUROPE = "europe"
    NORTH_AMERICA = "north_america"
    REST_OF_WORLD = "rest_of_world"
    UNKNOWN = "unknown"


class OrgSize(_Facet):
    SMALL = "small"
    MEDIUM = "medium"
    BIG = "big"
    UNKNOWN = "unknown"


class Seniority(_Facet):
    MINIMUM = "minimum"
    MEDIUM = "medium"
    HIGH = "high"
    UNKNOWN = "unknown"


class Facet(str, Enum):
    AREA = "area"
    REGION = "region"
    ORG_SIZE = "org_size"
    SENIORITY = "seniority"

    @property
    def values(self) -> type[_Facet]:
        return _FACET_TYPES[self]

    @classmethod
    def parse(cls, raw: str) -> "Facet":
        key = raw.strip().casefold().replace("-", "_")
        aliases = {"size": "org_size", "discipline": "area"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown facet {raw!r}; expected one of {[f.value for f in cls]}") from None


_FACET_TYPES = {
    Facet.AREA: Area,
    Facet.REGION: Region,
    Facet.ORG_SIZE: OrgSize,
    Facet.SENIORITY: Seniority,
}

FIELDS = ("id", "text", "area", "region", "org_size", "seniority")


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    area: Area = Area.UNKNOWN
    region: Region = Region.UNKNOWN
    org_size: OrgSize = OrgSize.UNKNOWN
    seniority: Seniority = Seniority.UNKNOWN
    # optional time-frame label used for per-period standardization
    period: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("document id must be non-empty")
        if not self.text.strip():
            raise ValueError(f"document {self.id!r} has empty text")

    def facet(self, facet: Facet) -> _Facet:
        return getattr(self, facet.value)


@dataclass(frozen=True)
class FacetKey:
    facet: Facet
    value: _Facet

    def __post_init__(self):
        if not isinstance(self.value, self.facet.values):
            raise ValueError(f"{self.value!r} is not a value of facet {self.facet.value}")

    @property
    def label(self) -> str:
        return self.value.label

    def __str__(self) -> str:
        return f"{self.facet.value}={self.value.value}"


@dataclass(frozen=True)
class DocumentSet:
    documents: tuple[Document, ...] = ()
    source_label: str = ""
    _ids: frozenset = field(default=frozenset(), init=False, repr=False, compare=False)

    def __post_init__(self):
        docs = tuple(self.documents)
        object.__setattr__(self, "documents", docs)
        seen = set()
        for doc in docs:
            if doc.id in seen:
                raise DuplicateIdError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)
        object.__setattr__(self, "_ids", frozenset(seen))

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def __getitem__(self, i):
        return self.documents[i]

    @property
    def ids(self) -> list[str]:
        return [d.id for d in self.documents]

    def subset(self, docs: Iterable[Document], label: str | None = None) -> "DocumentSet":
        return DocumentSet(tuple(docs), self.source_label if label is None else label)


def _document_from_record(rec: Mapping, line: int, period_field: str | None) -> Document:
    if not isinstance(rec, Mapping):
        raise FormatError("record is not an object", line)
    doc_id = rec.get("id")
    text = rec.get("text")
    if doc_id is None or str(doc_id).strip() == "":
        raise FormatError("missing 'id'", line)
    if not isinstance(text, str) or not text.strip():
        raise FormatError("missing or empty 'text'", line)
    period = None
    if period_field:
        raw = rec.get(period_field)
        period = None if raw in (None, "") else str(raw)
    return Document(
        id=str(doc_id),
        text=text,
        area=Area.parse(rec.get("area")),
        region=Region.parse(rec.get("region")),
        org_size=OrgSize.parse(rec.get("org_size")),
        seniority=Seniority.parse(rec.get("seniority")),
        period=period,
    )


def load_corpus(path, format: str | None = None, period_field: str | None = None) -> DocumentSet:
    """Read a JSONL or CSV corpus.

    ``format`` is ``"jsonl"`` or ``"csv"``; when omitted it is taken from the
    file suffix. Facet values that are missing or unrecognised become
    ``UNKNOWN``.
    """
    path = Path(path)
    fmt = (format or path.suffix.lstrip(".")).casefold()
    if fmt not in ("jsonl", "csv"):
        raise FormatError(f"unsupported corpus format {fmt!r}")
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            raw = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read corpus {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise FormatError(f"corpus {path} is not valid UTF-8: {exc}") from exc

    docs: list[Document] = []
    seen: set[str] = set()

    def add(doc: Document, line: int):
        if doc.id in seen:
            raise DuplicateIdError(f"line {line}: duplicate document id {doc.id!r}")
        seen.add(doc.id)
        docs.append(doc)

    if fmt == "jsonl":
        for lineno, line in enumerate(raw.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid JSON: {exc.msg}", lineno) from exc
            add(_document_from_record(rec, lineno, period_field), lineno)
    else:
        reader = csv.DictReader(raw.splitlines(keepends=True))
        if raw.strip() and (reader.fieldnames is None or not {"id", "text"} <= set(reader.fieldnames)):
            raise FormatError("CSV header must contain 'id' and 'text' columns", 1)
        try:
            for rec in reader:
                if None in rec:
                    raise FormatError("row has more fields than the header", reader.line_num)
                add(_document_from_record(rec, reader.line_num, period_field), reader.line_num)
        except csv.Error as exc:
            raise FormatError(str(exc), reader.line_num) from exc
    return DocumentSet(tuple(docs), str(path))


def save_corpus_jsonl(docs: DocumentSet, path, period_field: str = "period") -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for doc in docs:
            rec = {
                "id": doc.id,
                "text": doc.text,
                "area": doc.area.value,
                "region": doc.region.value,
                "org_size": doc.org_size.value,
                "seniority": doc.seniority.value,
            }
            if doc.period is not None:
                rec[period_field] = doc.period
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")


# Research keywords used to retrieve postings for each discipline.
TABLE1_KEYWORDS: dict[Area, tuple[str, ...]] = {
    Area.OPERATIONS: ("Maintenance", "Manufacturing", "Operations", "Production"),
    Area.SUPPLY_CHAIN: ("Distribution", "Logistics", "Supply Chain", "Transportation"),
}


def _keyword_pattern(keyword: str, case_insensitive: bool) -> re.Pattern:
    words = keyword.split()
    if not words:
        raise EmptyKeywordList(f"blank keyword {keyword!r}")
    body = r"\s+".join(re.escape(w) for w in words)
    flags = re.IGNORECASE if case_insensitive else 0
    return re.compile(rf"(?<!\w){body}(?!\w)", flags)


def filter_by_keywords(
    docs: DocumentSet,
    keywords: Sequence[str] | Mapping[Area, Sequence[str]] = TABLE1_KEYWORDS,
    case_insensitive: bool = True,
) -> DocumentSet:
    """Keep documents mentioning at least one keyword as a whole word or phrase.

    When ``keywords`` maps areas to keyword families, each retained document's
    area is set to the single family that matched, or ``UNKNOWN`` when more
    than one did. A plain keyword list leaves areas untouched.
    """
    if isinstance(keywords, Mapping):
        families = {area: [k for k in kws] for area, kws in keywords.items()}
    else:
        families = {None: list(keywords)}
    if not any(families.values()):
        raise EmptyKeywordList("no keywords given")
    patterns = {
        area: [_keyword_pattern(k, case_insensitive) for k in kws] for area, kws in families.items()
    }
    text_of = (lambda t: t.casefold()) if case_insensitive else (lambda t: t)

    kept = []
    for doc in docs:
        text = text_of(doc.text)
        hits = [area for area, pats in patterns.items() if any(p.search(text) for p in pats)]
        if not hits:
            continue
        if None in families:
            kept.append(doc)
        else:
            area = hits[0] if len(hits) == 1 else Area.UNKNOWN
            kept.append(replace(doc, area=area))
    return docs.subset(kept)


def read_exclude_list(path) -> set[str]:
    """Document ids to drop, one per line; ``#`` starts a comment."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IoError(f"cannot read exclude list {path}: {exc}") from exc
    ids = set()
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            ids.add(line)
    return ids


def exclude_ids(docs: DocumentSet, ids: Iterable[str]) -> DocumentSet:
    drop = set(ids)
    return docs.subset(d for d in docs if d.id not in drop)


def partition_by_facet(docs: DocumentSet, facet: Facet | str) -> dict[FacetKey, DocumentSet]:
    """Split ``docs`` by one facet. Keys follow enum declaration order."""
    if isinstance(facet, str) and not isinstance(facet, Facet):
        facet = Facet.parse(facet)
    buckets: dict[_Facet, list[Document]] = {}
    for doc in docs:
        buckets.setdefault(doc.facet(facet), []).append(doc)
    out = {}
    for value in facet.values:
        if value in buckets:
            out[FacetKey(facet, value)] = docs.subset(buckets[value], f"{docs.source_label}[{facet.value}={value.value}]")
    return out


def partition_by_period(docs: DocumentSet) -> dict[str | None, DocumentSet]:
    buckets: dict[str | None, list[Document]] = {}
    for doc in docs:
        buckets.setdefault(doc.period, []).append(doc)
    return {k: docs.subset(v) for k, v in sorted(buckets.items(), key=lambda kv: (kv[0] is None, kv[0] or ""))}


def facet_counts(docs: DocumentSet) -> dict[str, dict[str, int]]:
    counts: dict[str, dict[str, int]] = {}
    for facet in Facet:
        row = {}
        for key, part in partition_by_facet(docs, facet).items():
            row[key.value.value] = len(part)
        counts[facet.value] = row
    return counts
