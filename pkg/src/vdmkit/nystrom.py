"""Out-of-sample extension of vector fields through the eigen-vector-fields."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .alignment import SINGULAR_TOL, closest_orthogonal
from .errors import DataError, IllConditionedEdgeError, InsufficientNeighborsError
from .kernels import DEFAULT_KERNEL, KernelSpec
from .tangent import frame_at


@dataclass(frozen=True, eq=False)
class SampledVectorField:
    """Vector field in frame coordinates: ``blocks[i] = O_i^T X(x_i)``."""

    blocks: np.ndarray  # (n, d)

    @property
    def coefficients(self) -> np.ndarray:
        """The length-nd block vector x."""
        return self.blocks.reshape(-1)

    def __add__(self, other):
        return SampledVectorField(self.blocks + other.blocks)

    def __mul__(self, c):
        return SampledVectorField(c * self.blocks)

    __rmul__ = __mul__


def project_field(frames, ambient) -> SampledVectorField:
    """Project ambient vectors ``(n, p)`` onto the estimated tangent frames."""
    ambient = np.asarray(ambient, dtype=float)
    if ambient.shape != (frames.n, frames.ambient_dim):
        raise DataError(f"field must have shape {(frames.n, frames.ambient_dim)}, got {ambient.shape}")
    return SampledVectorField(np.einsum("npd,np->nd", frames.bases, ambient))


def eigenvector_field(spectrum, l: int) -> SampledVectorField:
    """The right eigenvector w_l = D^{-1/2} v_l as a sampled field."""
    w = spectrum.right_vectors()[:, l]
    return SampledVectorField(w.reshape(spectrum.n, spectrum.d))


@dataclass(frozen=True)
class ExtensionConfig:
    """Parameters of the extension.

    ``delta`` drops eigenpairs with ``|lambda_l| <= delta`` (1/delta bounds
    the amplification). ``eps`` and ``eps_pca`` are the training bandwidths.
    """

    eps: float
    eps_pca: float
    delta: float = 0.05
    alpha: float = 1.0
    pca_kernel: KernelSpec = DEFAULT_KERNEL
    weight_kernel: KernelSpec = DEFAULT_KERNEL

    def __post_init__(self):
        if not self.delta > 0:
            raise DataError("delta must be positive")
        if not (self.eps > 0 and self.eps_pca > 0):
            raise DataError("bandwidths must be positive")


class Extender:
    """Precomputed state for extending fields to new points.

    The field is expanded as ``x = sum_l a_l w_l`` in the right eigenvectors
    of D_alpha^{-1} S_alpha, whose D_alpha-orthonormality gives
    ``a_l = w_l^T D_alpha x``. Each w_l extends to a query ``y`` by one
    application of the averaging operator divided by ``lambda_l``, with
    ``y``'s own frame aligned to the training frames.
    """

    def __init__(self, cloud, frames, agraph, spectrum, cfg: ExtensionConfig):
        self.points = cloud.points
        self.frames = frames
        self.cfg = cfg
        self.base_degrees = agraph.degrees()
        self.op_degrees = np.asarray(spectrum.degrees, dtype=float)
        lam = np.asarray(spectrum.eigenvalues, dtype=float)
        keep = np.flatnonzero(np.abs(lam) > cfg.delta)
        if keep.size == 0:
            raise DataError(f"no eigenvalue exceeds delta={cfg.delta} in magnitude")
        self.kept = keep
        self.eigenvalues = lam[keep]
        self.W = spectrum.right_vectors()[:, keep].reshape(spectrum.n, spectrum.d, keep.size)
        self.n, self.d = spectrum.n, spectrum.d

    def coefficients(self, field: SampledVectorField) -> np.ndarray:
        """a_l = w_l^T D_alpha x for the retained l."""
        x = field.blocks * self.op_degrees[:, None]
        return np.einsum("nd,ndl->l", x, self.W)

    def frame(self, y) -> np.ndarray:
        basis, _ = frame_at(self.points, y, np.sqrt(self.cfg.eps_pca), self.cfg.pca_kernel, self.d)
        return basis

    def eigenfields(self, y, frame=None):
        """Extended eigen-vector-fields at ``y``: returns (O_y, V) with V of shape (d, m).

        ``frame`` overrides the local PCA frame (use O_i when ``y = x_i``).
        Training points coinciding with ``y`` are left out of the sums.
        """
        y = np.asarray(y, dtype=float)
        O_y = self.frame(y) if frame is None else np.asarray(frame, dtype=float)
        diffs = self.points - y
        dist = np.sqrt(np.einsum("ij,ij->i", diffs, diffs))
        root = np.sqrt(self.cfg.eps)
        nb = np.flatnonzero((dist > 0) & (dist < root))
        k = self.cfg.weight_kernel(dist[nb] / root)
        nb, k = nb[k > 0], k[k > 0]
        if nb.size == 0:
            raise InsufficientNeighborsError("query", 0, 1)
        if self.cfg.alpha != 0:
            # the query's own density factor cancels in the normalised average
            k = k / self.base_degrees[nb] ** self.cfg.alpha
        M = np.einsum("pa,npb->nab", O_y, self.frames.bases[nb])
        R, s = closest_orthogonal(M, return_singular_values=True)
        bad = np.flatnonzero(s[:, -1] < SINGULAR_TOL)
        if bad.size:
            raise IllConditionedEdgeError([("query", int(nb[b])) for b in bad], s[bad, -1])
        avg = np.einsum("n,nab,nbl->al", k, R, self.W[nb]) / k.sum()
        return O_y, avg / self.eigenvalues

    def extend(self, field: SampledVectorField, y, frame=None) -> np.ndarray:
        """Ambient vector O_y sum_l a_l w~_l(y) at the query point."""
        O_y, V = self.eigenfields(y, frame)
        return O_y @ (V @ self.coefficients(field))

    def extend_points(self, field: SampledVectorField, Y) -> np.ndarray:
        """Extend to each row of ``Y``; returns an array of ambient vectors."""
        a = self.coefficients(field)
        out = np.empty((len(Y), self.points.shape[1]))
        for r, y in enumerate(np.asarray(Y, dtype=float)):
            O_y, V = self.eigenfields(y)
            out[r] = O_y @ (V @ a)
        return out


def extend_field(cloud, frames, agraph, spectrum, field, y, cfg: ExtensionConfig,
                 frame=None) -> np.ndarray:
    """Extend a sampled field to one query point; see :class:`Extender`."""
    return Extender(cloud, frames, agraph, spectrum, cfg).extend(field, y, frame)
