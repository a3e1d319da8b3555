"""Text preprocessing: normalize, merge multi-word terms, drop stopwords, stem."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from ..errors import IoError
from .porter import porter_stem

__all__ = [
    "TokenSequence",
    "PrepConfig",
    "normalize",
    "merge_multiword_terms",
    "remove_stopwords",
    "stem",
    "preprocess_document",
    "preprocess_corpus",
    "load_stopwords",
    "default_stopwords",
    "porter_stem",
]

JOINER = "_"
_WORD = re.compile(r"[^\W_]+")


def _read_wordlist(lines: Iterable[str]) -> frozenset[str]:
    words = set()
    for line in lines:
        line = line.split("#", 1)[0].strip().casefold()
        if line:
            words.add(line)
    return frozenset(words)


def load_stopwords(path) -> frozenset[str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read stopword list {path}: {exc}") from exc
    return _read_wordlist(text.splitlines())


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    text = resources.files("sbskit.data").joinpath("stopwords_en.txt").read_text(encoding="utf-8")
    return _read_wordlist(text.splitlines())


@dataclass(frozen=True)
class TokenSequence:
    doc_id: str
    tokens: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class PrepConfig:
    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    multiword_terms: frozenset[str] = frozenset()
    min_token_len: int = 2

    def __post_init__(self):
        if self.min_token_len < 1:
            raise ValueError(f"min_token_len must be >= 1, got {self.min_token_len}")
        phrases = frozenset(" ".join(p.casefold().split()) for p in self.multiword_terms)
        for p in phrases:
            if len(p.split()) < 2:
                raise ValueError(f"multi-word term {p!r} needs at least two words")
        object.__setattr__(self, "multiword_terms", phrases)
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))

    def with_phrases(self, phrases: Iterable[str]) -> "PrepConfig":
        return PrepConfig(self.stopwords, self.multiword_terms | frozenset(phrases), self.min_token_len)


def normalize(text: str, min_token_len: int = 2) -> list[str]:
    """Case-fold and split on anything that is not a letter or digit."""
    return [
        tok
        for tok in _WORD.findall(text.casefold())
        if len(tok) >= min_token_len and not tok.isdigit()
    ]


@lru_cache(maxsize=64)
def _phrase_index(phrases: frozenset) -> dict[str, list[tuple[str, ...]]]:
    index: dict[str, list[tuple[str, ...]]] = {}
    for p in phrases:
        words = tuple(p.split()) if isinstance(p, str) else tuple(p)
        index.setdefault(words[0], []).append(words)
    for cands in index.values():
        cands.sort(key=lambda w: (-len(w), w))
    return index


def merge_multiword_terms(tokens: Sequence[str], phrases: Iterable[str]) -> list[str]:
    """Replace phrase word runs by one underscore-joined token.

    Scans left to right and takes the longest phrase starting at each
    position, so overlapping phrases resolve leftmost-longest.
    """
    if not isinstance(phrases, frozenset):
        phrases = frozenset(phrases)
    if not phrases:
        return list(tokens)
    index = _phrase_index(phrases)
    out = []
    i, n = 0, len(tokens)
    while i < n:
        for words in index.get(tokens[i], ()):
            end = i + len(words)
            if end <= n and tuple(tokens[i:end]) == words:
                out.append(JOINER.join(words))
                i = end
                break
        else:
            out.append(tokens[i])
            i += 1
    return out


def remove_stopwords(tokens: Sequence[str], stopwords: Iterable[str]) -> list[str]:
    stop = stopwords if isinstance(stopwords, (set, frozenset)) else set(stopwords)
    return [t for t in tokens if JOINER in t or t not in stop]


def _stem_word(word: str) -> str:
    if word.isascii() and word.isalpha():
        return porter_stem(word)
    return word


def stem(token: str) -> str:
    """Porter stem; merged tokens are stemmed word by word."""
    if JOINER in token:
        return JOINER.join(_stem_word(w) for w in token.split(JOINER))
    return _stem_word(token)


def preprocess_tokens(text: str, cfg: PrepConfig) -> list[str]:
    tokens = normalize(text, cfg.min_token_len)
    tokens = merge_multiword_terms(tokens, cfg.multiword_terms)
    tokens = remove_stopwords(tokens, cfg.stopwords)
    return [stem(t) for t in tokens]


def preprocess_document(doc, cfg: PrepConfig) -> TokenSequence:
    return TokenSequence(doc.id, tuple(preprocess_tokens(doc.text, cfg)))


def preprocess_corpus(docs, cfg: PrepConfig) -> list[TokenSequence]:
    return [preprocess_document(d, cfg) for d in docs]
