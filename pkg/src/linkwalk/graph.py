"""Undirected networks with optional self-loops: parsing, matrices, statistics."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import TextIO

import numpy as np
import scipy.sparse

from .errors import ParseError, ValidationError

Edge = tuple[int, int]


def _canonical(i: int, j: int) -> Edge:
    return (i, j) if i <= j else (j, i)


@dataclass(frozen=True)
class Network:
    """Immutable undirected graph over labelled nodes; self-loops allowed.

    ``edges`` holds index pairs ``(i, j)`` with ``i <= j``; ``(i, i)`` is a
    self-loop. Instances never change after construction and are safe to
    share between threads.
    """

    node_labels: tuple[str, ...]
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        n = len(self.node_labels)
        if len(set(self.node_labels)) != n:
            raise ValidationError("node labels must be unique")
        for i, j in self.edges:
            if not (0 <= i <= j < n):
                raise ValidationError(f"edge ({i}, {j}) out of range for n={n}")

    @property
    def n(self) -> int:
        return len(self.node_labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def label_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.node_labels)}

    @cached_property
    def self_loop_count(self) -> int:
        return sum(1 for i, j in self.edges if i == j)

    def has_edge(self, i: int, j: int) -> bool:
        return _canonical(i, j) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


def parse_edge_list(
    source: str | TextIO,
    *,
    comment_prefix: str = "#",
    delimiter: str | None = None,
) -> Network:
    """Parse a two-column edge list into a :class:`Network`.

    One edge per line, two labels separated by whitespace (or ``delimiter``
    if given); lines starting with ``comment_prefix`` and blank lines are
    skipped. Node indices follow first appearance; duplicate lines and
    reversed duplicates collapse to one edge; a line ``x x`` records a
    self-loop.
    """
    text = source.read() if hasattr(source, "read") else source
    labels: dict[str, int] = {}
    edges: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or (comment_prefix and line.startswith(comment_prefix)):
            continue
        tokens = line.split(delimiter)
        if len(tokens) != 2:
            raise ParseError(f"line {lineno}: expected 2 node labels, got {len(tokens)}")
        pair = []
        for tok in tokens:
            if tok not in labels:
                labels[tok] = len(labels)
            pair.append(labels[tok])
        edges.add(_canonical(pair[0], pair[1]))
    if not edges:
        raise ParseError("no edges found in input")
    return Network(tuple(labels), frozenset(edges))


def serialize_edge_list(net: Network) -> str:
    """One line per edge, endpoints in index order, self-loops as ``x x``."""
    lines = [f"{net.node_labels[i]} {net.node_labels[j]}" for i, j in net.sorted_edges()]
    return "\n".join(lines) + "\n"


def build_adjacency(net: Network) -> np.ndarray:
    """Dense symmetric 0/1 adjacency matrix; a self-loop puts 1 on the diagonal."""
    A = np.zeros((net.n, net.n))
    if net.edges:
        e = np.asarray(net.sorted_edges())
        A[e[:, 0], e[:, 1]] = 1.0
        A[e[:, 1], e[:, 0]] = 1.0
    return A


def adjacency_mask(net: Network) -> np.ndarray:
    """Boolean edge-presence matrix (same layout as :func:`build_adjacency`)."""
    A = np.zeros((net.n, net.n), dtype=bool)
    if net.edges:
        e = np.asarray(net.sorted_edges())
        A[e[:, 0], e[:, 1]] = True
        A[e[:, 1], e[:, 0]] = True
    return A


def degree_vector(net: Network) -> np.ndarray:
    """Adjacency row sums; a self-loop contributes 1 to its node's degree."""
    if not net.edges:
        return np.zeros(net.n)
    e = np.asarray(net.sorted_edges())
    ends = np.concatenate([e[:, 0], e[e[:, 0] != e[:, 1], 1]])
    return np.bincount(ends, minlength=net.n).astype(float)


def build_laplacian(net: Network) -> np.ndarray:
    """L = D - A with D the diagonal of adjacency row sums; rows sum to zero."""
    A = build_adjacency(net)
    return np.diag(A.sum(axis=1)) - A


@dataclass(frozen=True)
class NetworkStats:
    n: int
    m: int
    mean_degree: float
    density: float
    mean_clustering: float
    assortativity: float
    self_loops: int


def compute_stats(net: Network) -> NetworkStats:
    """Summary statistics: size, mean degree 2m/n, density, clustering, assortativity.

    Clustering and assortativity are computed on the simple graph (self-loops
    dropped): nodes with fewer than two neighbours contribute zero clustering,
    and assortativity is the Pearson correlation of endpoint degrees over all
    non-loop edges (NaN when degenerate, e.g. regular graphs).
    """
    n, m = net.n, net.m
    mean_degree = 2.0 * m / n
    density = 2.0 * m / (n * (n - 1)) if n > 1 else 0.0
    simple = np.asarray(
        [e for e in net.sorted_edges() if e[0] != e[1]], dtype=np.int64
    ).reshape(-1, 2)
    if simple.size:
        deg = np.bincount(simple.ravel(), minlength=n).astype(float)
        rows = np.concatenate([simple[:, 0], simple[:, 1]])
        cols = np.concatenate([simple[:, 1], simple[:, 0]])
        A = scipy.sparse.csr_matrix((np.ones(rows.size), (rows, cols)), shape=(n, n))
        triangles = np.asarray((A @ A).multiply(A).sum(axis=1)).ravel() / 2.0
        denom = deg * (deg - 1.0)
        local = np.divide(2.0 * triangles, denom, out=np.zeros(n), where=denom > 0)
        mean_clustering = float(local.mean())
        du, dv = deg[simple[:, 0]], deg[simple[:, 1]]
        x = np.concatenate([du, dv])
        y = np.concatenate([dv, du])
        if np.ptp(x) > 0:
            assortativity = float(np.corrcoef(x, y)[0, 1])
        else:
            assortativity = float("nan")
    else:
        mean_clustering = 0.0
        assortativity = float("nan")
    return NetworkStats(
        n=n,
        m=m,
        mean_degree=mean_degree,
        density=density,
        mean_clustering=mean_clustering,
        assortativity=assortativity,
        self_loops=net.self_loop_count,
    )


def degree_ccdf(net: Network) -> list[tuple[int, float]]:
    """Distinct degrees paired with the fraction of nodes of at least that degree.

    Fractions are non-increasing and start at 1.0 for the minimum degree.
    """
    k = degree_vector(net).astype(int)
    values, counts = np.unique(k, return_counts=True)
    at_least = counts[::-1].cumsum()[::-1]
    return [(int(v), float(c) / net.n) for v, c in zip(values, at_least)]
