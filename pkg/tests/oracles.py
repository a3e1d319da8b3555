"""Brute-force reference computations used as independent test oracles.

None of these share code with the package's fast paths.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


def betweenness_by_enumeration(nodes, edges):
    """Exact betweenness by enumerating every simple path of every pair.

    ``edges`` is a list of ``(a, b, w)`` with positive integer or Fraction
    weights; path length is the exact rational sum of 1/w.
    """
    adj = {v: {} for v in nodes}
    for a, b, w in edges:
        adj[a][b] = Fraction(1) / Fraction(w)
        adj[b][a] = Fraction(1) / Fraction(w)
    bc = {v: Fraction(0) for v in nodes}
    ordered = list(nodes)
    for x, y in itertools.combinations(ordered, 2):
        best = None
        hits = []

        def walk(v, path, length):
            nonlocal best, hits
            if best is not None and length > best:
                return
            if v == y:
                if best is None or length < best:
                    best, hits = length, [list(path)]
                else:
                    hits.append(list(path))
                return
            for u, d in adj[v].items():
                if u not in path:
                    path.append(u)
                    walk(u, path, length + d)
                    path.pop()

        walk(x, [x], Fraction(0))
        if not hits:
            continue
        total = len(hits)
        for path in hits:
            for v in path[1:-1]:
                bc[v] += Fraction(1, total)
    return {v: float(c) for v, c in bc.items()}


def diversity_by_formula(nodes, edges):
    nbrs = {v: set() for v in nodes}
    for a, b, _ in edges:
        nbrs[a].add(b)
        nbrs[b].add(a)
    n = len(nodes)
    return {
        i: sum(math.log10((n - 1) / len(nbrs[j])) for j in nodes if j != i and j in nbrs[i])
        for i in nodes
    }


def cooccurrence_by_pairs(docs, window):
    """Edge weights from explicit enumeration of all in-window position pairs."""
    weights = {}
    for tokens in docs:
        for p, q in itertools.combinations(range(len(tokens)), 2):
            if q - p >= window or tokens[p] == tokens[q]:
                continue
            key = frozenset((tokens[p], tokens[q]))
            weights[key] = weights.get(key, 0) + 1
    return weights


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def modularity_of(nodes, edges, blocks, resolution=1.0):
    """Newman modularity straight from the definition (sum over node pairs)."""
    deg = {v: 0.0 for v in nodes}
    A = {}
    for a, b, w in edges:
        deg[a] += w
        deg[b] += w
        A[(a, b)] = A.get((a, b), 0) + w
        A[(b, a)] = A.get((b, a), 0) + w
    m2 = sum(deg.values())
    if m2 == 0:
        return 0.0
    label = {v: i for i, block in enumerate(blocks) for v in block}
    q = 0.0
    for i in nodes:
        for j in nodes:
            if label[i] == label[j]:
                q += A.get((i, j), 0) - resolution * deg[i] * deg[j] / m2
    return q / m2


def best_modularity(nodes, edges, resolution=1.0):
    best = None
    for blocks in set_partitions(nodes):
        q = modularity_of(nodes, edges, blocks, resolution)
        if best is None or q > best[0] + 1e-15:
            best = (q, blocks)
    return best


def random_connected_graph(rng, n, max_weight=5, density=0.4):
    """Random spanning tree plus extra edges; integer weights in [1, max_weight]."""
    nodes = [f"n{i}" for i in range(n)]
    edges = {}
    for i in range(1, n):
        j = rng.randrange(i)
        edges[(nodes[j], nodes[i])] = rng.randint(1, max_weight)
    for i, j in itertools.combinations(range(n), 2):
        if (nodes[i], nodes[j]) not in edges and rng.random() < density:
            edges[(nodes[i], nodes[j])] = rng.randint(1, max_weight)
    return nodes, [(a, b, w) for (a, b), w in edges.items()]
