"""Local PCA: tangent frames and intrinsic dimension from a radius graph."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, InsufficientNeighborsError
from .kernels import DEFAULT_KERNEL, KernelSpec

RANK_RTOL = 1e-12
_CHUNK = 2048


@dataclass(frozen=True, eq=False)
class LocalPcaReport:
    """Per-point spectra of the weighted neighbor matrices B_i.

    ``singular_values`` is zero-padded to a common width; row ``i`` holds
    ``sigma_{i,1} >= ... `` followed by zeros.
    """

    singular_values: np.ndarray
    neighbor_counts: np.ndarray
    local_dims: np.ndarray
    dim: int
    gamma: float | None


@dataclass(frozen=True, eq=False)
class TangentFrames:
    """Column-orthonormal ``(n, p, d)`` bases, one per point."""

    bases: np.ndarray

    @property
    def n(self) -> int:
        return self.bases.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.bases.shape[1]

    @property
    def dim(self) -> int:
        return self.bases.shape[2]

    def regauge(self, rotations) -> "TangentFrames":
        """Frames O_i R_i for per-point orthogonal ``rotations`` of shape (n, d, d)."""
        return TangentFrames(np.einsum("npd,nde->npe", self.bases, rotations))


def default_eps_pca(n: int, d: int, boundary: bool = False, constant: float = 1.0) -> float:
    """Bandwidth rate ``c n^{-2/(d+2)}`` (closed manifolds) or ``c n^{-2/(d+1)}`` (with boundary)."""
    power = 2.0 / (d + 1) if boundary else 2.0 / (d + 2)
    return constant * float(n) ** (-power)


def default_eps(eps_pca: float, d: int) -> float:
    """Alignment bandwidth ``eps_pca^{(d+1)/(d+4)}``."""
    return eps_pca ** ((d + 1.0) / (d + 4.0))


def estimate_dimension(report_or_dims) -> int:
    """Lower median of the local dimensions (the ceil(k/2)-th order statistic)."""
    dims = getattr(report_or_dims, "local_dims", report_or_dims)
    dims = np.sort(np.asarray(dims, dtype=np.int64))
    if dims.size == 0:
        raise DataError("no local dimensions to summarise")
    return int(dims[(dims.size + 1) // 2 - 1])


def local_dimension(sigma, gamma):
    """Smallest d_i with sum_{j<=d_i} s_j^2 / sum_j s_j^2 > gamma, row-wise."""
    sigma = np.atleast_2d(sigma)
    energy = sigma ** 2
    total = energy.sum(axis=1, keepdims=True)
    frac = np.cumsum(energy, axis=1) / total
    # frac is nondecreasing and reaches 1 > gamma, so argmax finds the first crossing
    return np.argmax(frac > gamma, axis=1) + 1


def _weighted_svd(diffs, weights):
    """Left singular vectors / values of B = diffs^T diag(sqrt(weights)).

    ``diffs`` is (m, k, p): k (possibly zero-padded) shifted neighbors for
    each of m centers. Padding columns carry zero weight and do not change
    the left singular vectors of the nonzero part.
    """
    B = np.swapaxes(diffs * np.sqrt(weights)[..., None], -1, -2)
    U, s, _ = np.linalg.svd(B, full_matrices=False)
    s = np.where(s < RANK_RTOL * s[..., :1], 0.0, s)
    return U, s


def _padded_neighbors(graph, rows):
    counts = graph.degree_counts()[rows]
    width = max(int(counts.max()), 1) if counts.size else 1
    idx = np.zeros((rows.size, width), dtype=np.int64)
    dist = np.zeros((rows.size, width))
    mask = np.zeros((rows.size, width), dtype=bool)
    for r, k in enumerate(rows):
        nb, dd = graph.neighbors(k)
        idx[r, : nb.size] = nb
        dist[r, : nb.size] = dd
        mask[r, : nb.size] = True
    return idx, dist, mask, counts


def local_pca(cloud, graph, kernel: KernelSpec = DEFAULT_KERNEL, gamma: float | None = 0.9,
              fixed_dim: int | None = None):
    """Estimate a tangent frame at every point from its radius-graph neighbors.

    Each neighborhood is shifted by its center point ``x_i`` (not the
    neighborhood mean) and column ``j`` is scaled by ``sqrt(K(|x_j - x_i| / r))``
    where ``r`` is the graph radius. Only the ``p x N_i`` matrix is
    decomposed; the ``p x p`` covariance is never formed.

    Returns
    -------
    report : LocalPcaReport
    frames : TangentFrames
        First ``d`` left singular vectors, ``d`` being ``fixed_dim`` if given,
        else the lower median of the local dimensions.
    """
    points = cloud.points
    n, p = points.shape
    if fixed_dim is None and gamma is None:
        raise ValueError("need gamma when fixed_dim is not given")
    if gamma is not None and not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0, 1)")
    counts = graph.degree_counts()
    empty = np.flatnonzero(counts == 0)
    if empty.size:
        raise InsufficientNeighborsError(int(empty[0]), 0, 1)

    width = min(p, int(counts.max()))
    sigma = np.zeros((n, width))
    lefts = np.zeros((n, p, width))
    for start in range(0, n, _CHUNK):
        rows = np.arange(start, min(n, start + _CHUNK))
        idx, dist, mask, _ = _padded_neighbors(graph, rows)
        diffs = points[idx] - points[rows][:, None, :]
        w = np.where(mask, kernel(dist / graph.radius), 0.0)
        U, s = _weighted_svd(diffs, w)
        k = min(width, s.shape[1])
        sigma[rows, :k] = s[:, :k]
        lefts[rows, :, :k] = U[:, :, :k]

    if np.any(sigma[:, 0] == 0):
        bad = int(np.flatnonzero(sigma[:, 0] == 0)[0])
        raise DataError(f"point {bad}: all neighbor weights vanish")

    local_dims = local_dimension(sigma, gamma) if gamma is not None else np.full(n, fixed_dim)
    dim = int(fixed_dim) if fixed_dim is not None else estimate_dimension(local_dims)
    if dim < 1 or dim > p:
        raise DataError(f"frame dimension {dim} outside [1, {p}]")
    short = np.flatnonzero(counts < dim)
    if short.size:
        raise InsufficientNeighborsError(int(short[0]), int(counts[short[0]]), dim)

    report = LocalPcaReport(sigma, counts, np.asarray(local_dims), dim, gamma)
    return report, TangentFrames(np.ascontiguousarray(lefts[:, :, :dim]))


def frame_at(points, center, radius: float, kernel: KernelSpec, dim: int):
    """Local PCA frame at an arbitrary location ``center`` using only ``points``.

    Neighbors are the points with ``0 < |x - center| < radius``. Returns the
    ``(p, dim)`` basis and the neighbor indices.
    """
    center = np.asarray(center, dtype=float)
    diffs = points - center
    dist = np.sqrt(np.einsum("ij,ij->i", diffs, diffs))
    nb = np.flatnonzero((dist > 0) & (dist < radius))
    if nb.size < dim:
        raise InsufficientNeighborsError("query", int(nb.size), dim)
    U, s = _weighted_svd(diffs[nb][None], kernel(dist[nb] / radius)[None])
    if s[0, 0] == 0:
        raise DataError("query point: all neighbor weights vanish")
    return U[0, :, :dim], nb
