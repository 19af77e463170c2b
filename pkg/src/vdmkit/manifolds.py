"""Synthetic samplers for the test manifolds and analytic sphere geometry."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError

KINDS = ("sphere", "torus2", "interval", "square")
SAMPLINGS = ("uniform_iid", "grid")

_DEFAULT_SAMPLING = {
    "sphere": "uniform_iid",
    "torus2": "uniform_iid",
    "interval": "grid",
    "square": "grid",
}


@dataclass(frozen=True)
class ManifoldSpec:
    kind: str
    n: int
    seed: int = 0
    dim: int | None = None
    sampling: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DataError(f"unknown manifold kind {self.kind!r}")
        if self.n < 1:
            raise DataError("n must be >= 1")
        if self.kind == "sphere":
            if self.dim is None or self.dim < 1:
                raise DataError("sphere needs dim >= 1")
        elif self.dim is not None and self.dim != _FIXED_DIM[self.kind]:
            raise DataError(f"{self.kind} has intrinsic dimension {_FIXED_DIM[self.kind]}")
        if self.sampling is None:
            object.__setattr__(self, "sampling", _DEFAULT_SAMPLING[self.kind])
        if self.sampling not in SAMPLINGS:
            raise DataError(f"unknown sampling {self.sampling!r}")

    @property
    def intrinsic_dim(self) -> int:
        return self.dim if self.kind == "sphere" else _FIXED_DIM[self.kind]

    @property
    def ambient_dim(self) -> int:
        return {"sphere": self.intrinsic_dim + 1, "torus2": 3, "interval": 1, "square": 2}[self.kind]

    @property
    def has_boundary(self) -> bool:
        return self.kind in ("interval", "square")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "n": self.n, "seed": self.seed,
                "dim": self.dim, "sampling": self.sampling}

    @classmethod
    def from_dict(cls, data: dict) -> "ManifoldSpec":
        return cls(kind=data["kind"], n=int(data["n"]), seed=int(data.get("seed", 0)),
                   dim=data.get("dim"), sampling=data.get("sampling"))


_FIXED_DIM = {"torus2": 2, "interval": 1, "square": 2}


@dataclass(frozen=True, eq=False)
class PointCloud:
    """n points in R^p, stored as an (n, p) float array."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DataError(f"point cloud must be a non-empty (n, p) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            bad = int(np.argwhere(~np.isfinite(pts))[0, 0])
            raise DataError(f"non-finite coordinate in point {bad}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.points.shape[1]

    def subset(self, index) -> "PointCloud":
        return PointCloud(self.points[np.asarray(index)])


def sample(spec: ManifoldSpec) -> PointCloud:
    """Draw the point cloud described by ``spec``.

    Identical specs give bit-identical clouds. Grid sampling of the square uses
    ``ceil(sqrt(n))`` points per axis, so the returned cloud may be larger than
    ``spec.n``.
    """
    key = (spec.kind, spec.sampling)
    if key == ("sphere", "uniform_iid"):
        rng = np.random.default_rng(spec.seed)
        g = rng.standard_normal((spec.n, spec.dim + 1))
        norms = np.linalg.norm(g, axis=1, keepdims=True)
        return PointCloud(g / norms)
    if key == ("torus2", "uniform_iid"):
        rng = np.random.default_rng(spec.seed)
        uv = rng.uniform(0.0, 2 * np.pi, size=(spec.n, 2))
        return PointCloud(torus_embedding(uv[:, 0], uv[:, 1]))
    if key == ("interval", "grid"):
        return PointCloud(np.linspace(-np.pi, np.pi, spec.n)[:, None])
    if key == ("square", "grid"):
        k = math.isqrt(spec.n - 1) + 1 if spec.n > 1 else 1
        axis = np.linspace(0.0, 2 * np.pi, k)
        xx, yy = np.meshgrid(axis, axis, indexing="ij")
        return PointCloud(np.column_stack([xx.ravel(), yy.ravel()]))
    raise DataError(f"unsupported combination kind={spec.kind!r}, sampling={spec.sampling!r}")


def torus_embedding(u, v) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    r = 2.0 + np.cos(v)
    return np.column_stack([r * np.cos(u), r * np.sin(u), np.sin(v)])


def _check_sphere(points, tol=1e-8):
    norms = np.linalg.norm(points, axis=1)
    bad = np.flatnonzero(np.abs(norms - 1.0) > tol)
    if bad.size:
        raise DataError(f"point {bad[0]} is not on the unit sphere (norm {norms[bad[0]]!r})")


def analytic_sphere_coords(cloud: PointCloud) -> np.ndarray:
    """Orthonormal bases of the exact tangent planes of a unit-sphere cloud.

    Returns an ``(n, p, p-1)`` array; column block ``[i]`` spans
    ``{v : v . x_i = 0}``. Built from the Householder reflection that maps
    ``e_1`` to ``+-x_i``, whose remaining columns are orthogonal to ``x_i``.
    """
    x = cloud.points
    _check_sphere(x)
    n, p = x.shape
    if p < 2:
        raise DataError("sphere cloud needs ambient dimension >= 2")
    sign = np.where(x[:, 0] >= 0, 1.0, -1.0)
    u = x.copy()
    u[:, 0] += sign
    unorm2 = np.einsum("ij,ij->i", u, u)
    H = np.eye(p)[None, :, :] - 2.0 * u[:, :, None] * u[:, None, :] / unorm2[:, None, None]
    return H[:, :, 1:]


def sphere_transport(x_to, x_from) -> np.ndarray:
    """Ambient rotation realising parallel transport along the great circle from ``x_from`` to ``x_to``.

    The rotation acts in span{x_from, x_to} and fixes the orthogonal
    complement; restricted to the tangent plane at ``x_from`` it is the
    Levi-Civita transport. Antipodal pairs have no unique geodesic.
    """
    a = np.asarray(x_to, dtype=float)
    b = np.asarray(x_from, dtype=float)
    c = float(a @ b)
    if c <= -1.0 + 1e-12:
        raise DataError("antipodal points: transport is not unique")
    s = a + b
    p = a.shape[0]
    return np.eye(p) - np.outer(s, s) / (1.0 + c) + 2.0 * np.outer(a, b)
