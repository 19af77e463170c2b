"""The block operators S_alpha, D_alpha and their symmetric form.

Blocks are stored once per undirected edge; matrix-vector products go
through block-sparse (BSR) matrices assembled from those blocks in sorted
(row, column) order, so every product is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse import bsr_matrix
from scipy.sparse.linalg import LinearOperator

from .errors import DataError


@dataclass(frozen=True, eq=False)
class VdmOperator:
    n: int
    d: int
    alpha: float
    i: np.ndarray
    j: np.ndarray
    rotations: np.ndarray
    weights: np.ndarray          # alpha-normalised edge weights W_alpha(i, j)
    degrees: np.ndarray          # deg_alpha
    base_degrees: np.ndarray     # deg, before alpha normalisation

    @property
    def size(self) -> int:
        return self.n * self.d

    def sym_edge_scale(self) -> np.ndarray:
        """W_alpha(i,j) / sqrt(deg_alpha(i) deg_alpha(j)), the scalar on each block of the symmetric operator."""
        return self.weights / np.sqrt(self.degrees[self.i] * self.degrees[self.j])

    def _assemble(self, scale) -> bsr_matrix:
        n, d = self.n, self.d
        blocks = scale[:, None, None] * self.rotations
        rows = np.concatenate([self.i, self.j])
        cols = np.concatenate([self.j, self.i])
        data = np.concatenate([blocks, np.transpose(blocks, (0, 2, 1))])
        order = np.lexsort((cols, rows))
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return bsr_matrix((data[order], cols[order], indptr), shape=(n * d, n * d))

    @cached_property
    def S(self) -> bsr_matrix:
        """S_alpha as a block-sparse matrix."""
        return self._assemble(self.weights)

    @cached_property
    def S_sym(self) -> bsr_matrix:
        """D_alpha^{-1/2} S_alpha D_alpha^{-1/2}."""
        return self._assemble(self.sym_edge_scale())

    def block_degrees(self) -> np.ndarray:
        """Diagonal of D_alpha, length n*d."""
        return np.repeat(self.degrees, self.d)

    def linear_operator(self) -> LinearOperator:
        A = self.S_sym
        return LinearOperator(A.shape, matvec=A.dot, rmatvec=A.dot, dtype=float)


def build(agraph, alpha: float = 1.0) -> VdmOperator:
    """Assemble S_alpha = D^{-alpha} S D^{-alpha} and deg_alpha from an alignment graph.

    ``alpha = 0`` keeps S and D unchanged. Every vertex must have positive
    degree.
    """
    if not 0.0 <= alpha <= 1.0:
        raise DataError(f"alpha must lie in [0, 1], got {alpha!r}")
    deg = agraph.degrees()
    isolated = np.flatnonzero(deg <= 0)
    if isolated.size:
        raise DataError(f"vertex {isolated[0]} is isolated (degree 0)"
                        + (f"; {isolated.size} isolated in total" if isolated.size > 1 else ""))
    if alpha == 0.0:
        w = agraph.weights.copy()
    else:
        w = agraph.weights / (deg[agraph.i] * deg[agraph.j]) ** alpha
    n = agraph.n
    deg_a = np.bincount(agraph.i, w, n) + np.bincount(agraph.j, w, n)
    return VdmOperator(n, agraph.d, float(alpha), agraph.i, agraph.j, agraph.rotations,
                       w, deg_a, deg)


def _check(op, v):
    v = np.asarray(v, dtype=float)
    if v.shape[0] != op.size:
        raise DataError(f"block vector has length {v.shape[0]}, expected {op.size}")
    return v


def apply_avg(op: VdmOperator, v) -> np.ndarray:
    """(D_alpha^{-1} S_alpha v)(i) = sum_j W_alpha(i,j) O_ij v(j) / deg_alpha(i)."""
    v = _check(op, v)
    out = op.S.dot(v)
    scale = op.block_degrees()
    return out / (scale if out.ndim == 1 else scale[:, None])


def apply_sym(op: VdmOperator, v) -> np.ndarray:
    """D_alpha^{-1/2} S_alpha D_alpha^{-1/2} v."""
    return op.S_sym.dot(_check(op, v))
