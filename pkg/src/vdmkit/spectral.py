"""Partial eigendecomposition of the symmetric VDM operator and eigenvalue grouping."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh

from .errors import DataError, EigensolverError

DENSE_MAX = 3000
RESIDUAL_TOL = 1e-8
ORTHO_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Leading eigenpairs of the symmetric operator, sorted by |lambda| descending.

    ``vectors[:, l]`` is v_l as a length-nd block vector. ``degrees`` are the
    (alpha-normalised) vertex degrees of the operator, used to pass to the
    right eigenvectors w_l = D^{-1/2} v_l of D^{-1} S.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    n: int
    d: int
    degrees: np.ndarray
    residuals: np.ndarray

    @property
    def m(self) -> int:
        return self.eigenvalues.size

    def blocks(self) -> np.ndarray:
        """Eigenvectors reshaped to (n, d, m): ``blocks()[i, :, l]`` is v_l(i)."""
        return self.vectors.reshape(self.n, self.d, -1)

    def right_vectors(self) -> np.ndarray:
        """w_l = D^{-1/2} v_l as an (nd, m) array."""
        return self.vectors / np.sqrt(np.repeat(self.degrees, self.d))[:, None]

    def with_eigenvalues(self, eigenvalues) -> "Spectrum":
        return dataclasses.replace(self, eigenvalues=np.asarray(eigenvalues, dtype=float))


@dataclass(frozen=True)
class MultiplicityProfile:
    groups: list  # (representative eigenvalue, count), in descending order
    tau: float

    @property
    def sizes(self) -> list:
        return [c for _, c in self.groups]


def magnitude_order(values) -> np.ndarray:
    """Indices sorting by |value| descending; ties put positive values first, then lower index."""
    values = np.asarray(values)
    idx = np.arange(values.size)
    return np.lexsort((idx, values < 0, -np.abs(values)))


def _rayleigh_ritz(A, V):
    """Orthonormalise V and diagonalise A on its span."""
    Q, _ = np.linalg.qr(V)
    H = Q.T @ (A @ Q)
    vals, Y = np.linalg.eigh((H + H.T) / 2)
    return vals, Q @ Y


def eigensolve(op, m: int, seed: int = 0, dense_max: int = DENSE_MAX,
               maxiter: int | None = None, ncv: int | None = None) -> Spectrum:
    """Top-``m`` eigenpairs (by magnitude) of D^{-1/2} S_alpha D^{-1/2}.

    Small problems (``nd <= dense_max``) are solved densely. Larger ones use
    ARPACK's implicitly restarted Lanczos method on the matrix-free
    operator, started from a seeded random vector and followed by a
    Rayleigh-Ritz cleanup on the converged subspace. The result must meet
    residual ``< 1e-8`` and pairwise orthogonality ``< 1e-8``; otherwise
    :class:`EigensolverError` reports the attained residuals.
    """
    N = op.size
    if not 1 <= m <= N:
        raise DataError(f"m must lie in [1, {N}], got {m}")
    A = op.S_sym
    if N <= dense_max or m >= N - 1:
        dense = A.toarray()
        vals, vecs = np.linalg.eigh(dense)
    else:
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(N)
        k = min(N - 1, m)
        if ncv is None:
            ncv = min(N, max(2 * k + 1, k + 32))
        try:
            vals, vecs = eigsh(op.linear_operator(), k=k, which="LM", v0=v0, ncv=ncv,
                               tol=0.0, maxiter=maxiter)
        except ArpackNoConvergence as exc:
            res = _residuals(A, exc.eigenvalues, exc.eigenvectors)
            raise EigensolverError(
                f"eigensolver did not converge: {len(exc.eigenvalues)} of {k} pairs, "
                f"max residual {res.max() if res.size else float('nan'):.3e}", res) from exc
        except ArpackError as exc:
            raise EigensolverError(f"eigensolver failed: {exc}") from exc
        vals, vecs = _rayleigh_ritz(A, vecs)

    order = magnitude_order(vals)[:m]
    vals, vecs = vals[order], np.ascontiguousarray(vecs[:, order])
    res = _residuals(A, vals, vecs)
    if res.max() >= RESIDUAL_TOL:
        raise EigensolverError(f"residual {res.max():.3e} exceeds {RESIDUAL_TOL:g}", res)
    gram = vecs.T @ vecs
    ortho = np.abs(gram - np.eye(m)).max()
    if ortho >= ORTHO_TOL:
        raise EigensolverError(f"eigenvectors lost orthonormality ({ortho:.3e})", res)
    return Spectrum(vals, vecs, op.n, op.d, op.degrees, res)


def _residuals(A, vals, vecs):
    vals = np.asarray(vals)
    if vals.size == 0:
        return np.zeros(0)
    R = A @ vecs - vecs * vals
    return np.linalg.norm(R, axis=0)


def detect_multiplicities(spectrum, tau: float = 0.01) -> MultiplicityProfile:
    """Group nearly equal eigenvalues of the positive branch.

    Positive eigenvalues are sorted descending; ``lambda_{k+1}`` joins the
    group of ``lambda_k`` when ``(lambda_k - lambda_{k+1}) / |lambda_1| < tau``.
    Each group is represented by its largest member.
    """
    values = getattr(spectrum, "eigenvalues", spectrum)
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise DataError("empty spectrum")
    scale = max(np.abs(values).max(), 1e-15)
    pos = np.sort(values[values > 0])[::-1]
    groups = []
    for k, lam in enumerate(pos):
        if k > 0 and (pos[k - 1] - lam) / scale < tau:
            rep, count = groups[-1]
            groups[-1] = (rep, count + 1)
        else:
            groups.append((float(lam), 1))
    return MultiplicityProfile(groups, float(tau))


def repair_degeneracy(spectrum, group_sizes):
    """Set every eigenvalue in each consecutive group to the group's first value.

    ``group_sizes`` partitions a prefix of the spectrum (in its stored order);
    eigenvalues beyond the prefix are left alone. Accepts a :class:`Spectrum`
    or a plain array and returns the same kind.
    """
    sizes = [int(s) for s in group_sizes]
    if any(s < 1 for s in sizes):
        raise DataError("group sizes must be positive")
    values = np.array(getattr(spectrum, "eigenvalues", spectrum), dtype=float)
    if sum(sizes) > values.size:
        raise DataError(f"group sizes sum to {sum(sizes)} but only {values.size} eigenvalues")
    start = 0
    for s in sizes:
        values[start:start + s] = values[start]
        start += s
    if isinstance(spectrum, Spectrum):
        return spectrum.with_eigenvalues(values)
    return values
