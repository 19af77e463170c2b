"""Epsilon-ball neighbor graphs."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import DataError

BRUTE_FORCE_MAX_N = 1000


def pair_distances(points, i, j):
    """Euclidean distances ||x_i - x_j|| computed one way everywhere, so that
    graph construction, brute-force checks and out-of-sample queries agree bitwise."""
    diff = points[i] - points[j]
    return np.sqrt(np.einsum("...k,...k->...", diff, diff))


@dataclass(frozen=True, eq=False)
class NeighborGraph:
    """Undirected radius graph.

    Edges are stored once, as parallel arrays ``i < j`` sorted
    lexicographically, with their Euclidean lengths. The adjacency index is a
    CSR layout over both directions.
    """

    n: int
    radius: float
    i: np.ndarray
    j: np.ndarray
    dist: np.ndarray
    indptr: np.ndarray = field(init=False, repr=False)
    indices: np.ndarray = field(init=False, repr=False)
    adj_dist: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        i = np.asarray(self.i, dtype=np.int64)
        j = np.asarray(self.j, dtype=np.int64)
        dist = np.asarray(self.dist, dtype=float)
        if not (i.shape == j.shape == dist.shape):
            raise ValueError("edge arrays must have equal length")
        if np.any(i >= j):
            raise ValueError("edges must satisfy i < j")
        order = np.lexsort((j, i))
        i, j, dist = i[order], j[order], dist[order]
        for name, arr in (("i", i), ("j", j), ("dist", dist)):
            object.__setattr__(self, name, arr)

        rows = np.concatenate([i, j])
        cols = np.concatenate([j, i])
        dd = np.concatenate([dist, dist])
        order = np.lexsort((cols, rows))
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=self.n), out=indptr[1:])
        object.__setattr__(self, "indptr", indptr)
        object.__setattr__(self, "indices", cols[order])
        object.__setattr__(self, "adj_dist", dd[order])

    @classmethod
    def from_edges(cls, n, edges, radius=np.inf):
        """Build a graph from ``(i, j, length)`` triples in any order/orientation."""
        arr = np.asarray(list(edges), dtype=float).reshape(-1, 3)
        a = arr[:, 0].astype(np.int64)
        b = arr[:, 1].astype(np.int64)
        return cls(n, float(radius), np.minimum(a, b), np.maximum(a, b), arr[:, 2])

    @property
    def n_edges(self) -> int:
        return int(self.i.size)

    def neighbors(self, k):
        """Indices and distances of the neighbors of node ``k``."""
        lo, hi = self.indptr[k], self.indptr[k + 1]
        return self.indices[lo:hi], self.adj_dist[lo:hi]

    def degree_counts(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def isolated(self) -> np.ndarray:
        """Nodes without neighbors (reported, not an error here)."""
        return np.flatnonzero(self.degree_counts() == 0)

    def edge_set(self):
        return set(zip(self.i.tolist(), self.j.tolist()))


def brute_force_pairs(points, radius):
    """All pairs i < j with 0 < ||x_i - x_j|| < radius, by direct O(n^2) scan."""
    n = points.shape[0]
    i, j = np.triu_indices(n, k=1)
    d = pair_distances(points, i, j)
    keep = (d > 0) & (d < radius)
    return i[keep], j[keep], d[keep]


def build_graph(cloud, radius: float, brute_force: bool | None = None) -> NeighborGraph:
    """Radius graph with an edge (i, j) iff 0 < ||x_i - x_j|| < radius.

    Duplicate points are never connected. Uses an O(n^2) scan for small
    clouds and a k-d tree otherwise; both give the same edge set.
    """
    if not radius > 0:
        raise DataError(f"radius must be positive, got {radius!r}")
    points = getattr(cloud, "points", cloud)
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    if brute_force is None:
        brute_force = n <= BRUTE_FORCE_MAX_N
    if brute_force:
        i, j, d = brute_force_pairs(points, radius)
    else:
        # pad the tree radius so pairs right at the cutoff are decided by
        # pair_distances, not by the tree's own rounding
        pairs = cKDTree(points).query_pairs(radius * (1 + 1e-9), output_type="ndarray")
        i = pairs[:, 0].astype(np.int64)
        j = pairs[:, 1].astype(np.int64)
        swap = i > j
        i[swap], j[swap] = j[swap], i[swap].copy()
        d = pair_distances(points, i, j)
        keep = (d > 0) & (d < radius)
        i, j, d = i[keep], j[keep], d[keep]
    return NeighborGraph(n, float(radius), i, j, d)
