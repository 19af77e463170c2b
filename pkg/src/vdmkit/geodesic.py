"""Single-source graph geodesics with Euclidean edge lengths."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass(frozen=True, eq=False)
class GeodesicResult:
    source: int
    distances: np.ndarray  # +inf where unreachable


def dijkstra(graph, source: int) -> GeodesicResult:
    """Shortest path lengths from ``source`` over the edges of a neighbor graph.

    Binary heap keyed on (distance, node), so ties settle by node index and
    the result is deterministic.
    """
    n = graph.n
    source = int(source)
    if not 0 <= source < n:
        raise DataError(f"source {source} out of range for {n} points")
    indptr = graph.indptr.tolist()
    indices = graph.indices.tolist()
    lengths = graph.adj_dist.tolist()
    dist = [np.inf] * n
    done = [False] * n
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        du, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            alt = du + lengths[k]
            if alt < dist[v]:
                dist[v] = alt
                heapq.heappush(heap, (alt, v))
    return GeodesicResult(source, np.array(dist))
