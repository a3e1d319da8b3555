"""Network topic modeling: Louvain communities, keyword ranking, cluster relevance."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from typing import Mapping

from .errors import EmptyNetwork, FormatError, IoError, UnknownCluster
from .semnet import SemanticNetwork

# a pass or level that gains less modularity than this ends the search
MIN_GAIN = 1e-7


@dataclass(frozen=True)
class Cluster:
    id: int
    relevance: float
    keywords: tuple[tuple[str, float], ...] = ()
    size: int = 0
    label: str | None = None

    @property
    def name(self) -> str:
        return self.label if self.label is not None else str(self.id)


@dataclass(frozen=True)
class TopicPartition:
    assignment: Mapping[str, int]
    clusters: tuple[Cluster, ...]
    modularity: float = 0.0
    resolution: float = 1.0
    seed: int | None = None

    def members(self, cluster_id: int) -> list[str]:
        return sorted(n for n, c in self.assignment.items() if c == cluster_id)

    def cluster(self, cluster_id: int) -> Cluster:
        for c in self.clusters:
            if c.id == cluster_id:
                return c
        raise UnknownCluster(f"no cluster {cluster_id}")

    @property
    def n_clusters(self) -> int:
        return len(self.clusters)


def _index_graph(net: SemanticNetwork):
    labels = net.nodes
    index = {lab: i for i, lab in enumerate(labels)}
    adj = []
    for lab in labels:
        nbrs = net.neighbors(lab)
        adj.append({index[b]: float(w) for b, w in sorted(nbrs.items(), key=lambda kv: index[kv[0]])})
    return labels, adj


def _modularity(adj, comm, resolution) -> float:
    m2 = sum(sum(row.values()) for row in adj)
    if m2 == 0:
        return 0.0
    inner: dict[int, float] = {}
    tot: dict[int, float] = {}
    for i, row in enumerate(adj):
        ci = comm[i]
        tot[ci] = tot.get(ci, 0.0) + sum(row.values())
        for j, w in row.items():
            if comm[j] == ci:
                inner[ci] = inner.get(ci, 0.0) + w
    return sum(inner.get(c, 0.0) / m2 - resolution * (t / m2) ** 2 for c, t in tot.items())


def _move_nodes(adj, order, resolution):
    """Local moving phase. Returns the community of every node."""
    n = len(adj)
    k = [sum(row.values()) for row in adj]
    m2 = sum(k)
    comm = list(range(n))
    if m2 == 0:
        return comm
    tot = list(k)
    q = _modularity(adj, comm, resolution)
    while True:
        moved = False
        for i in order:
            ci = comm[i]
            ki = k[i]
            links: dict[int, float] = {}
            for j, w in adj[i].items():
                if j != i:
                    links[comm[j]] = links.get(comm[j], 0.0) + w
            tot[ci] -= ki
            best = ci
            best_gain = links.get(ci, 0.0) - resolution * tot[ci] * ki / m2
            for c, w in links.items():
                gain = w - resolution * tot[c] * ki / m2
                if gain > best_gain:
                    best, best_gain = c, gain
            tot[best] += ki
            if best != ci:
                comm[i] = best
                moved = True
        if not moved:
            break
        new_q = _modularity(adj, comm, resolution)
        gained = new_q - q
        q = new_q
        if gained < MIN_GAIN:
            break
    return comm


def _renumber(comm):
    mapping: dict[int, int] = {}
    for c in comm:
        mapping.setdefault(c, len(mapping))
    return [mapping[c] for c in comm], len(mapping)


def _aggregate(adj, comm, n_comm):
    agg = [dict() for _ in range(n_comm)]
    for i, row in enumerate(adj):
        ci = comm[i]
        for j, w in row.items():
            cj = comm[j]
            agg[ci][cj] = agg[ci].get(cj, 0.0) + w
    return [dict(sorted(row.items())) for row in agg]


def louvain(net: SemanticNetwork, resolution: float = 1.0, seed: int = 0) -> dict[str, int]:
    """Node -> raw community index. Deterministic for a given seed."""
    labels, adj = _index_graph(net)
    order = list(range(len(labels)))
    random.Random(seed).shuffle(order)
    node_comm = list(range(len(labels)))
    q = _modularity(adj, node_comm, resolution)
    while True:
        comm, n_comm = _renumber(_move_nodes(adj, order, resolution))
        if n_comm == len(adj):
            break
        node_comm = [comm[c] for c in node_comm]
        adj = _aggregate(adj, comm, n_comm)
        new_q = _modularity(adj, list(range(n_comm)), resolution)
        gained = new_q - q
        q = new_q
        if gained < MIN_GAIN:
            break
        order = list(range(n_comm))
    return dict(zip(labels, node_comm))


def modularity(net: SemanticNetwork, assignment: Mapping[str, int], resolution: float = 1.0) -> float:
    labels, adj = _index_graph(net)
    return _modularity(adj, [assignment[lab] for lab in labels], resolution)


def topic_relevance(net: SemanticNetwork, partition: TopicPartition | Mapping[str, int]) -> dict[int, float]:
    """Each cluster's share of the network's total weighted degree."""
    assignment = partition.assignment if isinstance(partition, TopicPartition) else partition
    strength: dict[int, float] = {c: 0.0 for c in sorted(set(assignment.values()))}
    for node in net.nodes:
        strength[assignment[node]] += net.weighted_degree(node)
    total = sum(strength.values())
    if total == 0:
        # edgeless network: no weight to share, split evenly
        return {c: 1.0 / len(strength) for c in strength}
    return {c: s / total for c, s in strength.items()}


def keyword_scores(net: SemanticNetwork, assignment: Mapping[str, int]) -> dict[str, float]:
    """Weighted degree times the internal share of incident weight."""
    scores = {}
    for node in net.nodes:
        nbrs = net.neighbors(node)
        total = sum(nbrs.values())
        if total == 0:
            scores[node] = 0.0
            continue
        internal = sum(w for b, w in nbrs.items() if assignment[b] == assignment[node])
        scores[node] = total * (internal / total)
    return scores


def rank_topic_keywords(
    net: SemanticNetwork,
    partition: TopicPartition | Mapping[str, int],
    top_k: int = 10,
) -> dict[int, list[tuple[str, float]]]:
    assignment = partition.assignment if isinstance(partition, TopicPartition) else partition
    scores = keyword_scores(net, assignment)
    out: dict[int, list[tuple[str, float]]] = {c: [] for c in sorted(set(assignment.values()))}
    for node, s in scores.items():
        out[assignment[node]].append((node, s))
    return {c: sorted(items, key=lambda kv: (-kv[1], kv[0]))[:top_k] for c, items in out.items()}


def detect_communities(
    net: SemanticNetwork,
    resolution: float = 1.0,
    seed: int = 0,
    top_k: int = 10,
) -> TopicPartition:
    """Louvain partition with clusters numbered by descending relevance.

    Ties in relevance are ordered by each cluster's smallest node label.
    Isolated nodes end up as singleton clusters.
    """
    if len(net) == 0:
        raise EmptyNetwork("cannot detect communities in an empty network")
    raw = louvain(net, resolution, seed)
    rel = topic_relevance(net, raw)
    first = {}
    for node in net.nodes:
        first.setdefault(raw[node], node)
    order = sorted(rel, key=lambda c: (-rel[c], first[c]))
    renum = {old: new for new, old in enumerate(order)}
    assignment = {node: renum[c] for node, c in raw.items()}
    return _finish(net, assignment, resolution, seed, top_k)


def _finish(net, assignment, resolution, seed, top_k, labels=None) -> TopicPartition:
    rel = topic_relevance(net, assignment)
    keywords = rank_topic_keywords(net, assignment, top_k)
    sizes: dict[int, int] = {}
    for c in assignment.values():
        sizes[c] = sizes.get(c, 0) + 1
    labels = labels or {}
    clusters = tuple(
        Cluster(c, rel[c], tuple(keywords[c]), sizes[c], labels.get(c)) for c in sorted(rel)
    )
    return TopicPartition(dict(assignment), clusters, modularity(net, assignment, resolution), resolution, seed)


def label_clusters(partition: TopicPartition, labels: Mapping[int, str]) -> TopicPartition:
    """Attach human-chosen names; unlabeled clusters keep their numeric id."""
    ids = {c.id for c in partition.clusters}
    for key in labels:
        if int(key) not in ids:
            raise UnknownCluster(f"no cluster {key}")
    labels = {int(k): str(v) for k, v in labels.items()}
    clusters = tuple(replace(c, label=labels.get(c.id, c.label)) for c in partition.clusters)
    return replace(partition, clusters=clusters)


def load_labels(path) -> dict[int, str]:
    """Cluster labels from a JSON object mapping cluster id to name."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read labels {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"labels file is not valid JSON: {exc.msg}", exc.lineno) from exc
    if not isinstance(data, dict):
        raise FormatError("labels file must hold a JSON object")
    try:
        return {int(k): str(v) for k, v in data.items()}
    except ValueError:
        raise FormatError("label keys must be cluster ids") from None


def partition_to_dict(partition: TopicPartition) -> dict:
    return {
        "modularity": round(partition.modularity, 12),
        "resolution": partition.resolution,
        "seed": partition.seed,
        "clusters": [
            {
                "id": c.id,
                "label": c.label,
                "relevance": round(c.relevance, 12),
                "size": c.size,
                "keywords": [[k, round(s, 6)] for k, s in c.keywords],
            }
            for c in partition.clusters
        ],
    }


_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(net: SemanticNetwork, partition: TopicPartition) -> str:
    """Graphviz source; colour encodes cluster, node width grows with weighted degree."""
    strengths = {n: net.weighted_degree(n) for n in net.nodes}
    top = max(strengths.values(), default=0.0) or 1.0
    lines = ["graph semantic_network {", "  node [shape=circle, style=filled, fontsize=10];"]
    for node in net.nodes:
        c = partition.assignment[node]
        width = 0.2 + 1.8 * strengths[node] / top
        cluster = partition.cluster(c)
        lines.append(
            f"  {_dot_id(node)} [fillcolor=\"{_PALETTE[c % len(_PALETTE)]}\", "
            f"width={width:.4f}, cluster={_dot_id(cluster.name)}];"
        )
    for a, b, w in net.edges():
        lines.append(f"  {_dot_id(a)} -- {_dot_id(b)} [weight={w:g}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
