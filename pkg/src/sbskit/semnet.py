"""Undirected weighted word co-occurrence networks."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import FormatError, IoError, LabelCollision, UnknownNode

DEFAULT_WINDOW = 7


@dataclass(frozen=True)
class WindowConfig:
    window: int = DEFAULT_WINDOW

    def __post_init__(self):
        if int(self.window) != self.window or self.window < 2:
            raise ValueError(f"window must be an integer >= 2, got {self.window}")


class SemanticNetwork:
    """Word stems with corpus frequencies and symmetric co-occurrence weights.

    Instances are treated as immutable: every operation returns a new network.
    Adjacency is stored once per direction so ``adj[a][b] == adj[b][a]``.
    """

    __slots__ = ("_freq", "_adj", "_csr")

    def __init__(self, freq: Mapping[str, float], adj: Mapping[str, Mapping[str, float]]):
        self._freq = dict(freq)
        self._adj = {node: dict(adj.get(node, {})) for node in self._freq}
        self._csr = None
        for a, nbrs in adj.items():
            if a not in self._freq:
                raise UnknownNode(f"edge endpoint {a!r} has no frequency entry")
            for b, w in nbrs.items():
                if a == b:
                    raise ValueError(f"self-loop on {a!r}")
                if w <= 0:
                    raise ValueError(f"non-positive weight on {a!r}-{b!r}")
                if adj.get(b, {}).get(a) != w:
                    raise ValueError(f"asymmetric weight on {a!r}-{b!r}")

    @classmethod
    def _trusted(cls, freq: dict, adj: dict) -> "SemanticNetwork":
        """Wrap structures an operation has built correctly; skips validation."""
        net = cls.__new__(cls)
        net._freq = freq
        net._adj = adj
        net._csr = None
        return net

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str, float]], freq: Mapping[str, float] | None = None):
        """Convenience constructor; missing frequencies default to 0."""
        adj: dict[str, dict[str, float]] = {}
        nodes = dict(freq or {})
        for a, b, w in edges:
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            adj.setdefault(a, {})[b] = adj.get(a, {}).get(b, 0) + w
            adj.setdefault(b, {})[a] = adj[a][b]
            nodes.setdefault(a, 0)
            nodes.setdefault(b, 0)
        return cls(nodes, adj)

    # read access

    def __len__(self) -> int:
        return len(self._freq)

    def __contains__(self, node) -> bool:
        return node in self._freq

    @property
    def nodes(self) -> list[str]:
        return sorted(self._freq)

    def frequency(self, node: str) -> float:
        self._check(node)
        return self._freq[node]

    def neighbors(self, node: str) -> dict[str, float]:
        self._check(node)
        return dict(self._adj[node])

    def weight(self, a: str, b: str) -> float:
        return self._adj.get(a, {}).get(b, 0)

    def degree(self, node: str) -> int:
        self._check(node)
        return len(self._adj[node])

    def weighted_degree(self, node: str) -> float:
        self._check(node)
        return sum(self._adj[node].values())

    def edges(self) -> list[tuple[str, str, float]]:
        """Each undirected edge once as ``(a, b, w)`` with ``a < b``, sorted."""
        return sorted((a, b, w) for a, nbrs in self._adj.items() for b, w in nbrs.items() if a < b)

    @property
    def n_edges(self) -> int:
        return sum(len(n) for n in self._adj.values()) // 2

    @property
    def total_frequency(self) -> float:
        return sum(self._freq.values())

    @property
    def frequencies(self) -> dict[str, float]:
        return dict(self._freq)

    def _check(self, node):
        if node not in self._freq:
            raise UnknownNode(f"node {node!r} not in network")

    def csr(self):
        """``(labels, indptr, indices, weights)`` with nodes and rows sorted by label."""
        if self._csr is None:
            labels = self.nodes
            index = {lab: i for i, lab in enumerate(labels)}
            indptr = np.zeros(len(labels) + 1, dtype=np.int64)
            indices, weights = [], []
            for i, lab in enumerate(labels):
                nbrs = sorted(self._adj[lab].items(), key=lambda kv: index[kv[0]])
                indices.extend(index[b] for b, _ in nbrs)
                weights.extend(float(w) for _, w in nbrs)
                indptr[i + 1] = len(indices)
            self._csr = (
                labels,
                indptr,
                np.asarray(indices, dtype=np.int64),
                np.asarray(weights, dtype=np.float64),
            )
        return self._csr

    def __eq__(self, other) -> bool:
        if not isinstance(other, SemanticNetwork):
            return NotImplemented
        return self._freq == other._freq and self._adj == other._adj

    def __repr__(self) -> str:
        return f"SemanticNetwork(nodes={len(self)}, edges={self.n_edges})"


def build_network(seqs: Iterable, cfg: WindowConfig | int = WindowConfig()) -> SemanticNetwork:
    """Count co-occurrences of distinct tokens less than ``window`` positions apart.

    Every position pair counts once; windows never cross document boundaries.
    Accepts TokenSequence objects or bare token lists.
    """
    window = cfg.window if isinstance(cfg, WindowConfig) else WindowConfig(cfg).window
    freq: Counter = Counter()
    pairs: Counter = Counter()
    for seq in seqs:
        tokens = seq.tokens if hasattr(seq, "tokens") else seq
        freq.update(tokens)
        n = len(tokens)
        for p in range(n):
            a = tokens[p]
            for q in range(p + 1, min(p + window, n)):
                b = tokens[q]
                if a == b:
                    continue
                pairs[(a, b) if a < b else (b, a)] += 1
    adj: dict[str, dict[str, int]] = {node: {} for node in freq}
    for (a, b), w in pairs.items():
        adj[a][b] = w
        adj[b][a] = w
    return SemanticNetwork._trusted(dict(freq), adj)


def merge_nodes(net: SemanticNetwork, members: Iterable[str], label: str) -> SemanticNetwork:
    """Collapse ``members`` into one node named ``label``.

    Frequencies add up, edges to each outside node add up, edges among
    members are dropped.
    """
    return merge_groups(net, {label: members})


def merge_groups(net: SemanticNetwork, groups: Mapping[str, Iterable[str]]) -> SemanticNetwork:
    """Apply several disjoint merges at once; same result as merging one by one."""
    owner: dict[str, str] = {}
    for label, members in groups.items():
        members = set(members)
        if not members:
            raise ValueError(f"merge for {label!r} needs at least one member")
        for m in sorted(members):
            if m not in net:
                raise UnknownNode(f"node {m!r} not in network")
            if m in owner:
                raise ValueError(f"node {m!r} assigned to both {owner[m]!r} and {label!r}")
            owner[m] = label
    for label in groups:
        if label in net and owner.get(label) != label:
            raise LabelCollision(f"label {label!r} already names a node outside its merge set")

    def target(node):
        return owner.get(node, node)

    freq: dict[str, float] = {}
    for node in net.nodes:
        t = target(node)
        freq[t] = freq.get(t, 0) + net._freq[node]
    adj: dict[str, dict[str, float]] = {node: {} for node in freq}
    for node in net.nodes:
        a = target(node)
        row = adj[a]
        for b, w in net._adj[node].items():
            tb = target(b)
            if tb != a:
                row[tb] = row.get(tb, 0) + w
    return SemanticNetwork._trusted(freq, adj)


def prune_edges(net: SemanticNetwork, min_weight: float) -> SemanticNetwork:
    if min_weight < 0:
        raise ValueError("min_weight must be >= 0")
    adj = {k: {b: w for b, w in nbrs.items() if w >= min_weight} for k, nbrs in net._adj.items()}
    return SemanticNetwork._trusted(net._freq, adj)


def _fmt_number(x) -> str:
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def _parse_number(s: str):
    try:
        return int(s)
    except ValueError:
        return float(s)


def write_network(net: SemanticNetwork, edges_path, freq_path) -> None:
    """Write ``a<TAB>b<TAB>weight`` and ``stem<TAB>count`` files, sorted."""
    try:
        with open(edges_path, "w", encoding="utf-8", newline="\n") as fh:
            for a, b, w in net.edges():
                fh.write(f"{a}\t{b}\t{_fmt_number(w)}\n")
        with open(freq_path, "w", encoding="utf-8", newline="\n") as fh:
            for node in net.nodes:
                fh.write(f"{node}\t{_fmt_number(net._freq[node])}\n")
    except OSError as exc:
        raise IoError(str(exc)) from exc


def read_network(edges_path, freq_path) -> SemanticNetwork:
    def rows(path, width):
        try:
            lines = Path(path).read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise IoError(f"cannot read {path}: {exc}") from exc
        for lineno, line in enumerate(lines, start=1):
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != width:
                raise FormatError(f"expected {width} tab-separated fields", lineno)
            yield lineno, parts

    freq = {}
    for lineno, (node, count) in rows(freq_path, 2):
        try:
            freq[node] = _parse_number(count)
        except ValueError:
            raise FormatError(f"bad count {count!r}", lineno) from None
    edges = []
    for lineno, (a, b, w) in rows(edges_path, 3):
        try:
            edges.append((a, b, _parse_number(w)))
        except ValueError:
            raise FormatError(f"bad weight {w!r}", lineno) from None
    return SemanticNetwork.from_edges(edges, freq)


def vocabulary(seqs: Sequence) -> set[str]:
    vocab = set()
    for seq in seqs:
        vocab.update(seq.tokens if hasattr(seq, "tokens") else seq)
    return vocab
