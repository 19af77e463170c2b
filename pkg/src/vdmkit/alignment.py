"""Alignment of neighboring tangent frames by closest orthogonal matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IllConditionedEdgeError
from .kernels import DEFAULT_KERNEL, KernelSpec

SINGULAR_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class AlignmentGraph:
    """Weighted graph with an orthogonal d x d matrix per undirected edge.

    ``rotations[e]`` is O_ij for the edge ``(i[e], j[e])`` with ``i < j``; it
    transports frame coordinates at ``j`` to frame coordinates at ``i``. The
    reverse direction is its transpose and is never stored.
    """

    n: int
    d: int
    i: np.ndarray
    j: np.ndarray
    weights: np.ndarray
    rotations: np.ndarray
    dist: np.ndarray | None = None

    @property
    def n_edges(self) -> int:
        return int(self.i.size)

    def degrees(self) -> np.ndarray:
        """deg(i) = sum_j w_ij."""
        return (np.bincount(self.i, self.weights, self.n)
                + np.bincount(self.j, self.weights, self.n))

    def rotation(self, a: int, b: int) -> np.ndarray:
        """O_ab for an existing edge, in either orientation."""
        lo, hi = min(a, b), max(a, b)
        hits = np.flatnonzero((self.i == lo) & (self.j == hi))
        if hits.size == 0:
            raise KeyError((a, b))
        R = self.rotations[hits[0]]
        return R if a < b else R.T

    def with_weights(self, weights) -> "AlignmentGraph":
        return AlignmentGraph(self.n, self.d, self.i, self.j, np.asarray(weights, float),
                              self.rotations, self.dist)


def closest_orthogonal(M, return_singular_values=False):
    """argmin_{O in O(d)} ||O - M||_HS = U V^T for M = U S V^T (batched over leading axes)."""
    U, s, Vt = np.linalg.svd(M)
    O = U @ Vt
    if return_singular_values:
        return O, s
    return O


def align_frames(frames, graph, kernel: KernelSpec = DEFAULT_KERNEL) -> AlignmentGraph:
    """Compute O_ij and w_ij = K(|x_i - x_j| / sqrt(eps)) on every edge of ``graph``.

    The graph radius plays the role of ``sqrt(eps)``. Edges whose weight is
    exactly zero are dropped. Raises :class:`IllConditionedEdgeError` when
    O_i^T O_j has a singular value below ``1e-12`` (nearly orthogonal
    tangent planes), since the closest orthogonal matrix is then not unique.
    """
    O = frames.bases
    w = kernel(graph.dist / graph.radius)
    keep = w > 0
    i, j, dist, w = graph.i[keep], graph.j[keep], graph.dist[keep], w[keep]
    M = np.einsum("epa,epb->eab", O[i], O[j])
    R, s = closest_orthogonal(M, return_singular_values=True)
    if s.size:
        smin = s[:, -1]
        bad = np.flatnonzero(smin < SINGULAR_TOL)
        if bad.size:
            raise IllConditionedEdgeError(zip(i[bad].tolist(), j[bad].tolist()), smin[bad])
    return AlignmentGraph(graph.n, frames.dim, i, j, w, R, dist)
