"""Vector diffusion mappings and distances, plus the scalar diffusion-maps baseline."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh

from .errors import DataError, EigensolverError
from .spectral import DENSE_MAX, RESIDUAL_TOL, magnitude_order, repair_degeneracy

_CHUNK_ENTRIES = 1 << 24  # bound on the per-chunk Gram array size


def _is_integer(t) -> bool:
    return float(t) == int(round(float(t)))


def _check_t_delta(t, delta):
    if not t > 0:
        raise DataError(f"diffusion time must be positive, got {t!r}")
    if delta is not None and not 0 <= delta < 1:
        raise DataError(f"delta must lie in [0, 1), got {delta!r}"
                        + (" (nothing would be retained)" if delta >= 1 else ""))


def truncation_rank(eigenvalues, power, delta) -> int:
    """Number of leading eigenvalues with |lambda_l / lambda_1|^power > delta.

    ``eigenvalues`` must already be in magnitude order. ``delta=None`` keeps
    all of them.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if lam[0] == 0:
        raise DataError("leading eigenvalue is zero")
    if delta is None:
        return lam.size
    ratio = np.abs(lam / lam[0]) ** power
    return int(np.count_nonzero(ratio > delta))


@dataclass(frozen=True, eq=False)
class VdmEmbedding:
    """Truncated vector diffusion map in compressed (upper-triangular) form.

    Row ``i`` of ``coords`` holds ``c_lr (lambda_l lambda_r)^t <v_l(i), v_r(i)>``
    for ``l <= r <= m``, with ``c_lr = sqrt(2)`` off the diagonal and 1 on it,
    so Euclidean geometry of the rows equals that of the full m x m form.
    """

    t: float
    delta: float | None
    m: int
    coords: np.ndarray
    normalized: bool
    eigenvalues: np.ndarray

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def inner(self, i, j) -> float:
        return float(self.coords[i] @ self.coords[j])

    def distance(self, i, j) -> float:
        return vdm_distance(self, i, j)

    def distances_from(self, ref) -> np.ndarray:
        diff = self.coords - self.coords[ref]
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))

    def angular_distances_from(self, ref) -> np.ndarray:
        unit = _unit_rows(self.coords)
        diff = unit - unit[ref]
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def vdm_embed(spectrum, t=100, delta: float | None = 0.2, normalized: bool = False,
              degrees=None) -> VdmEmbedding:
    """Embed every point with the truncated vector diffusion map.

    Parameters
    ----------
    spectrum : Spectrum
        Leading eigenpairs of the symmetric operator, magnitude-ordered.
    t : float
        Diffusion time. Non-integer values are accepted only when every
        retained eigenvalue is positive.
    delta : float or None
        Keep the ``m`` eigenvectors with ``(lambda_l / lambda_1)^{2t} > delta``.
        ``None`` keeps every computed pair.
    normalized : bool
        Divide row ``i`` by ``degrees[i]`` (the variant built on the right
        eigenvectors of D^{-1} S).
    degrees : array, optional
        Defaults to the operator degrees stored with the spectrum.
    """
    _check_t_delta(t, delta)
    lam = np.asarray(spectrum.eigenvalues, dtype=float)
    m = truncation_rank(lam, 2 * float(t), delta)
    if m == 0:
        raise DataError("truncation keeps no eigenvectors")
    lam = lam[:m]
    if not _is_integer(t) and np.any(lam < 0):
        raise DataError("non-integer t with a retained negative eigenvalue")
    if delta is not None and m == spectrum.m and spectrum.m < spectrum.n * spectrum.d:
        warnings.warn(f"all {m} computed eigenpairs pass the truncation threshold; "
                      "compute more to be sure the cut is in the right place", stacklevel=2)

    rows, cols = np.triu_indices(m)
    c = np.where(rows == cols, 1.0, np.sqrt(2.0))
    if _is_integer(t):
        lam_pow = lam ** int(round(float(t)))
        scale = c * lam_pow[rows] * lam_pow[cols]
    else:
        scale = c * (lam[rows] * lam[cols]) ** float(t)

    V = spectrum.blocks()[:, :, :m]
    n = V.shape[0]
    coords = np.empty((n, rows.size))
    chunk = max(1, _CHUNK_ENTRIES // (m * m))
    for start in range(0, n, chunk):
        blk = V[start:start + chunk]
        gram = np.einsum("ndl,ndr->nlr", blk, blk)
        coords[start:start + chunk] = gram[:, rows, cols] * scale

    if normalized:
        deg = np.asarray(spectrum.degrees if degrees is None else degrees, dtype=float)
        if deg.shape != (n,):
            raise DataError(f"need {n} degrees, got shape {deg.shape}")
        coords /= deg[:, None]
    return VdmEmbedding(float(t), delta, m, coords, bool(normalized), lam.copy())


def vdm_distance(emb, i, j) -> float:
    """Euclidean distance between embedded points ``i`` and ``j``."""
    diff = emb.coords[i] - emb.coords[j]
    return float(np.sqrt(diff @ diff))


def _unit_rows(X):
    norms = np.linalg.norm(X, axis=1)
    zero = np.flatnonzero(norms == 0)
    if zero.size:
        raise DataError(f"point {zero[0]} embeds at the origin; angle undefined")
    return X / norms[:, None]


def vdm_angular_distance(emb, i, j) -> float:
    """|| V(i)/|V(i)| - V(j)/|V(j)| ||, which does not depend on the degree normalisation."""
    a, b = emb.coords[i], emb.coords[j]
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise DataError(f"point {i if na == 0 else j} embeds at the origin; angle undefined")
    return float(np.linalg.norm(a / na - b / nb))


@dataclass(frozen=True, eq=False)
class DmEmbedding:
    """Diffusion map Phi_t(i) = (mu_l^t phi_l(i))_{l=2..m}.

    ``eigenvalues`` and ``phi`` hold every computed pair of A = D^{-1} W
    (after optional degeneracy repair); ``phi`` is normalised so that
    ``phi_l^T D phi_l = 1``. ``m`` counts the trivial eigenvector, so the
    embedded dimension is ``m - 1``.
    """

    t: float
    delta: float | None
    m: int
    coords: np.ndarray
    eigenvalues: np.ndarray
    phi: np.ndarray
    degrees: np.ndarray

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def distance(self, i, j) -> float:
        return dm_distance(self, i, j)

    def distances_from(self, ref) -> np.ndarray:
        diff = self.coords - self.coords[ref]
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def scalar_kernel_matrix(agraph, alpha: float = 0.0):
    """Symmetric sparse W_alpha and its degrees from the alignment-graph weights."""
    n = agraph.n
    deg = agraph.degrees()
    if np.any(deg <= 0):
        raise DataError(f"vertex {int(np.flatnonzero(deg <= 0)[0])} is isolated (degree 0)")
    w = agraph.weights if alpha == 0 else agraph.weights / (deg[agraph.i] * deg[agraph.j]) ** alpha
    W = coo_matrix((np.concatenate([w, w]),
                    (np.concatenate([agraph.i, agraph.j]), np.concatenate([agraph.j, agraph.i]))),
                   shape=(n, n)).tocsr()
    W.sort_indices()
    return W, np.asarray(W.sum(axis=1)).ravel()


def dm_embed(agraph, t=100, delta: float | None = 0.2, alpha: float = 0.0,
             n_eigs: int = 30, group_sizes=None, seed: int = 0,
             dense_max: int = DENSE_MAX) -> DmEmbedding:
    """Diffusion-maps baseline on the scalar weights of ``agraph``.

    The eigenproblem of A = D^{-1} W is solved through its symmetric
    conjugate D^{-1/2} W D^{-1/2}. Eigenvalues are magnitude-ordered and
    truncated by ``|mu_m / mu_1|^t > delta``; ``group_sizes`` optionally
    equalises eigenvalue groups before truncation. A disconnected graph is
    refused.
    """
    _check_t_delta(t, delta)
    n = agraph.n
    W, deg = scalar_kernel_matrix(agraph, alpha)
    ncomp, labels = connected_components(W, directed=False)
    if ncomp > 1:
        warnings.warn(f"weight graph has {ncomp} connected components", stacklevel=2)
        raise DataError(f"weight graph is disconnected ({ncomp} components); "
                        "per-component diffusion maps are not supported")

    s = 1.0 / np.sqrt(deg)
    M = W.multiply(s[:, None]).multiply(s[None, :]).tocsr()
    k = min(int(n_eigs), n)
    if n <= dense_max or k >= n - 1:
        mu, psi = np.linalg.eigh(M.toarray())
    else:
        v0 = np.random.default_rng(seed).standard_normal(n)
        try:
            mu, psi = eigsh(M, k=k, which="LM", v0=v0, ncv=min(n, max(2 * k + 1, k + 32)),
                            tol=0.0)
        except (ArpackNoConvergence, ArpackError) as exc:
            raise EigensolverError(f"diffusion-maps eigensolver failed: {exc}") from exc
    order = magnitude_order(mu)[:k]
    mu, psi = mu[order], psi[:, order]
    res = np.linalg.norm(M @ psi - psi * mu, axis=0)
    if res.max() >= RESIDUAL_TOL:
        raise EigensolverError(f"residual {res.max():.3e} exceeds {RESIDUAL_TOL:g}", res)
    # fix the sign of the trivial eigenvector so that phi_1 > 0
    if psi[:, 0].sum() < 0:
        psi[:, 0] = -psi[:, 0]

    if group_sizes is not None:
        mu = repair_degeneracy(mu, group_sizes)
    m = truncation_rank(mu, float(t), delta)
    if m == 0:
        raise DataError("truncation keeps no eigenvectors")
    if not _is_integer(t) and np.any(mu[:m] < 0):
        raise DataError("non-integer t with a retained negative eigenvalue")
    phi = psi * s[:, None]
    coords = phi[:, 1:m] * np.power(mu[1:m], float(t))
    return DmEmbedding(float(t), delta, m, coords, mu, phi, deg)


def dm_distance(emb, i, j) -> float:
    diff = emb.coords[i] - emb.coords[j]
    return float(np.sqrt(diff @ diff))
