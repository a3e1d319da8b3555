"""Distinctiveness (diversity) and weighted betweenness (connectivity) over all nodes."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numba import njit

# relative tolerance under which two accumulated path lengths count as tied
TIE_RTOL = 1e-12
# sources per work unit; fixed so reduction order never depends on thread count
SOURCE_CHUNK = 64

DISTANCES = ("inverse", "inverse_log")


def edge_lengths(weights: np.ndarray, distance: str = "inverse") -> np.ndarray:
    """Turn co-occurrence weights (similarities) into path lengths."""
    if distance == "inverse":
        return 1.0 / weights
    if distance == "inverse_log":
        return 1.0 / np.log1p(weights)
    raise ValueError(f"unknown distance transform {distance!r}; expected one of {DISTANCES}")


def diversity_all(indptr: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """Sum of log10((n-1)/deg(j)) over each node's neighbours j."""
    n = len(indptr) - 1
    if n < 2 or len(indices) == 0:
        return np.zeros(n)
    degree = np.diff(indptr)
    # only nodes with degree >= 1 ever appear in ``indices``
    contrib = np.log10((n - 1) / np.maximum(degree, 1).astype(np.float64))
    rows = np.repeat(np.arange(n), degree)
    return np.bincount(rows, weights=contrib[indices], minlength=n)


@njit(cache=True, nogil=True)
def _tied(a, b, rtol):
    return abs(a - b) <= rtol * max(abs(a), abs(b))


@njit(cache=True, nogil=True)
def _before(ka, na, kb, nb):
    return ka < kb or (ka == kb and na < nb)


@njit(cache=True, nogil=True)
def _sift_up(heap, pos, key, i):
    node = heap[i]
    k = key[node]
    while i > 0:
        parent = (i - 1) >> 1
        p = heap[parent]
        if not _before(k, node, key[p], p):
            break
        heap[i] = p
        pos[p] = i
        i = parent
    heap[i] = node
    pos[node] = i


@njit(cache=True, nogil=True)
def _pop_min(heap, pos, key, size):
    """Remove and return the node with the smallest (key, node); heap holds node ids."""
    top = heap[0]
    pos[top] = -1
    size -= 1
    if size > 0:
        node = heap[size]
        k = key[node]
        i = 0
        while True:
            child = 2 * i + 1
            if child >= size:
                break
            c = heap[child]
            right = child + 1
            if right < size:
                r = heap[right]
                if _before(key[r], r, key[c], c):
                    child = right
                    c = r
            if not _before(key[c], c, k, node):
                break
            heap[i] = c
            pos[c] = i
            i = child
        heap[i] = node
        pos[node] = i
    return top, size


@njit(cache=True, nogil=True)
def _brandes_chunk(indptr, indices, lengths, sources, rtol):
    n = indptr.shape[0] - 1
    nnz = indices.shape[0]
    bc = np.zeros(n)
    dist = np.empty(n)
    sigma = np.zeros(n)
    delta = np.zeros(n)
    order = np.empty(n, dtype=np.int64)
    # DAG successors of order[k] are succ[start[k]:start[k + 1]]
    succ = np.empty(nnz, dtype=np.int64)
    start = np.empty(n + 1, dtype=np.int64)
    # indexed binary heap keyed on (dist, node); pos[v] == -1 when v is not queued
    heap = np.empty(n, dtype=np.int64)
    pos = np.full(n, -1, dtype=np.int64)
    for v in range(n):
        dist[v] = np.inf
    for si in range(sources.shape[0]):
        s = sources[si]
        dist[s] = 0.0
        heap[0] = s
        pos[s] = 0
        size = 1
        count = 0
        while size > 0:
            v, size = _pop_min(heap, pos, dist, size)
            order[count] = v
            count += 1
            d = dist[v]
            for e in range(indptr[v], indptr[v + 1]):
                w = indices[e]
                nd = d + lengths[e]
                if nd < dist[w]:
                    dist[w] = nd
                    if pos[w] < 0:
                        heap[size] = w
                        pos[w] = size
                        size += 1
                    _sift_up(heap, pos, dist, pos[w])
        # Every neighbour of a popped node was reached, so dist is final here.
        # Settle order is topological for the shortest-path DAG: push path
        # counts forward while recording each node's DAG successors.
        sigma[s] = 1.0
        m = 0
        for k in range(count):
            v = order[k]
            dv = dist[v]
            sv = sigma[v]
            start[k] = m
            for e in range(indptr[v], indptr[v + 1]):
                w = indices[e]
                if _tied(dv + lengths[e], dist[w], rtol):
                    sigma[w] += sv
                    succ[m] = w
                    m += 1
        start[count] = m
        # dependencies, pulled from successors in adjacency order
        for k in range(count - 1, -1, -1):
            v = order[k]
            acc = 0.0
            for j in range(start[k], start[k + 1]):
                w = succ[j]
                acc += (1.0 + delta[w]) / sigma[w]
            acc *= sigma[v]
            delta[v] = acc
            if v != s:
                bc[v] += acc
        for k in range(count):
            v = order[k]
            sigma[v] = 0.0
            delta[v] = 0.0
            dist[v] = np.inf
    return bc


def betweenness_all(
    indptr: np.ndarray,
    indices: np.ndarray,
    lengths: np.ndarray,
    threads: int | None = None,
) -> np.ndarray:
    """Unnormalized betweenness over unordered pairs (Brandes over Dijkstra trees).

    Sources are processed in fixed-size chunks whose partial sums are added
    in chunk order, so the result is bit-identical for any ``threads``.
    """
    n = len(indptr) - 1
    if n == 0:
        return np.zeros(0)
    indptr = np.ascontiguousarray(indptr, dtype=np.int64)
    indices = np.ascontiguousarray(indices, dtype=np.int64)
    lengths = np.ascontiguousarray(lengths, dtype=np.float64)
    chunks = [np.arange(i, min(i + SOURCE_CHUNK, n), dtype=np.int64) for i in range(0, n, SOURCE_CHUNK)]
    threads = max(1, threads or os.cpu_count() or 1)

    def run(chunk):
        return _brandes_chunk(indptr, indices, lengths, chunk, TIE_RTOL)

    if threads == 1 or len(chunks) == 1:
        partials = [run(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(run, chunks))
    total = np.zeros(n)
    for p in partials:
        total += p
    return total / 2.0


def max_diversity(degree: int, n: int) -> float:
    """Upper bound reached when every neighbour is a leaf."""
    return degree * math.log10(n - 1) if n > 1 else 0.0
