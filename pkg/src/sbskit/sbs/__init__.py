"""Semantic Brand Score: prevalence, diversity and connectivity, standardized and summed."""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, fields
from typing import Iterable, Mapping

import numpy as np

from ..errors import EmptyInput, UnknownNode
from ..semnet import SemanticNetwork
from .centrality import betweenness_all, diversity_all, edge_lengths

COLUMNS = (
    "target",
    "prevalence_raw",
    "diversity_raw",
    "connectivity_raw",
    "prevalence_z",
    "diversity_z",
    "connectivity_z",
    "sbs",
)


class DegenerateDistributionWarning(UserWarning):
    """A component has zero spread, so its z-scores are all set to 0."""


@dataclass(frozen=True)
class SbsScore:
    target: str
    prevalence_raw: float
    diversity_raw: float
    connectivity_raw: float
    prevalence_z: float
    diversity_z: float
    connectivity_z: float
    sbs: float

    def as_row(self) -> list:
        return [getattr(self, f.name) for f in fields(self)]


def prevalence(net: SemanticNetwork, target: str):
    return net.frequency(target)


def diversity_map(net: SemanticNetwork) -> dict[str, float]:
    labels, indptr, indices, _ = net.csr()
    return dict(zip(labels, diversity_all(indptr, indices).tolist()))


def diversity(net: SemanticNetwork, target: str) -> float:
    """Sum over neighbours j of log10((n-1)/deg(j))."""
    net._check(target)
    return diversity_map(net)[target]


def connectivity_map(net: SemanticNetwork, distance: str = "inverse", threads: int | None = 1) -> dict[str, float]:
    labels, indptr, indices, weights = net.csr()
    bc = betweenness_all(indptr, indices, edge_lengths(weights, distance), threads=threads)
    return dict(zip(labels, bc.tolist()))


def connectivity(net: SemanticNetwork, target: str, distance: str = "inverse") -> float:
    """Weighted betweenness; path length is the sum of 1/weight."""
    net._check(target)
    return connectivity_map(net, distance)[target]


def standardize(values: Mapping[str, float], name: str = "values") -> dict[str, float]:
    """Population z-scores. Zero spread gives all zeros and a warning."""
    if not values:
        raise EmptyInput(f"cannot standardize empty {name}")
    keys = list(values)
    arr = np.asarray([values[k] for k in keys], dtype=np.float64)
    if arr.max() == arr.min():
        warnings.warn(
            f"{name}: all {len(arr)} values equal; z-scores set to 0",
            DegenerateDistributionWarning,
            stacklevel=2,
        )
        return dict.fromkeys(keys, 0.0)
    mean = arr.mean()
    std = np.sqrt(np.mean((arr - mean) ** 2))
    return dict(zip(keys, ((arr - mean) / std).tolist()))


def score_all(
    net: SemanticNetwork,
    distance: str = "inverse",
    threads: int | None = 1,
) -> dict[str, SbsScore]:
    """SbsScore for every node, standardized over the whole node population."""
    if len(net) == 0:
        raise EmptyInput("network has no nodes")
    prev = {node: net.frequency(node) for node in net.nodes}
    div = diversity_map(net)
    con = connectivity_map(net, distance, threads)
    pz = standardize(prev, "prevalence")
    dz = standardize(div, "diversity")
    cz = standardize(con, "connectivity")
    return {
        node: SbsScore(
            node,
            prev[node],
            div[node],
            con[node],
            pz[node],
            dz[node],
            cz[node],
            pz[node] + dz[node] + cz[node],
        )
        for node in net.nodes
    }


def score(
    net: SemanticNetwork,
    targets: Iterable[str],
    distance: str = "inverse",
    threads: int | None = 1,
) -> list[SbsScore]:
    targets = list(targets)
    for t in targets:
        if t not in net:
            raise UnknownNode(f"node {t!r} not in network")
    table = score_all(net, distance, threads)
    return [table[t] for t in targets]


def rank(scores: Iterable[SbsScore]) -> list[SbsScore]:
    """Descending sbs, ties broken by label."""
    return sorted(scores, key=lambda s: (-s.sbs, s.target))


def write_scores_csv(scores: Iterable[SbsScore], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COLUMNS)
        for s in rank(scores):
            w.writerow([s.target] + [f"{v:.6f}" for v in s.as_row()[1:]])


def read_scores_csv(path) -> list[SbsScore]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        return [
            SbsScore(row["target"], *(float(row[c]) for c in COLUMNS[1:]))
            for row in reader
        ]
