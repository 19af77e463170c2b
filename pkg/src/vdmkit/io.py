"""CSV and JSON formats for clouds, spectra, embeddings, distance tables and manifests.

Reals are written with ``%.17g``, which round-trips every float64 exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError, SchemaVersionError
from .manifolds import ManifoldSpec, PointCloud
from .spectral import Spectrum

SCHEMA_VERSION = 1
FLOAT_FMT = "%.17g"


def write_matrix(path, X, header=None):
    """Write a real matrix as CSV to a path or an open text stream."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if hasattr(path, "write"):
        _write_rows(path, X, header)
        return
    with open(path, "w", newline="") as fh:
        _write_rows(fh, X, header)


def _write_rows(fh, X, header):
    if header:
        fh.write(",".join(header) + "\n")
    np.savetxt(fh, X, fmt=FLOAT_FMT, delimiter=",")


def read_matrix(path, ncols=None, header=False, allow_inf=False) -> np.ndarray:
    """Read a comma-separated real matrix.

    Raises :class:`DataError` naming the offending line on a column-count
    mismatch, an unparsable value, or a non-finite value (``+inf`` is
    accepted when ``allow_inf``, for unreachable distances).
    """
    rows = []
    with open(path) as fh:
        lines = fh.read().splitlines()
    start = 1 if header else 0
    for lineno, line in enumerate(lines[start:], start=start + 1):
        if not line.strip():
            continue
        parts = line.split(",")
        if ncols is None:
            ncols = len(parts)
        if len(parts) != ncols:
            raise DataError(f"{path}:{lineno}: expected {ncols} columns, found {len(parts)}")
        try:
            vals = [float(p) for p in parts]
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from None
        for v in vals:
            if not math.isfinite(v) and not (allow_inf and v == math.inf):
                raise DataError(f"{path}:{lineno}: non-finite value {v}")
        rows.append(vals)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return np.array(rows, dtype=float)


def write_cloud(path, cloud, header=False):
    p = cloud.points.shape[1]
    write_matrix(path, cloud.points, [f"x{k}" for k in range(p)] if header else None)


def read_cloud(path, ambient_dim=None, header=False) -> PointCloud:
    return PointCloud(read_matrix(path, ambient_dim, header))


def _dump_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON ({exc})") from None


def _check_version(data, path):
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(f"{path}: schema_version {version!r}, expected {SCHEMA_VERSION}")


def spectrum_to_dict(spectrum, profile=None) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "n": int(spectrum.n),
        "d": int(spectrum.d),
        "eigenvalues": [float(x) for x in spectrum.eigenvalues],
        "residuals": [float(x) for x in spectrum.residuals],
    }
    if profile is not None:
        out["groups"] = [[float(rep), int(c)] for rep, c in profile.groups]
        out["tau"] = float(profile.tau)
    return out


def write_spectrum(path, spectrum, profile=None, vectors_path=None, degrees_path=None):
    """Spectrum metadata as JSON; eigenvectors (nd x m) and degrees optionally as CSV."""
    data = spectrum_to_dict(spectrum, profile)
    if vectors_path is not None:
        write_matrix(vectors_path, spectrum.vectors)
        data["vectors"] = Path(vectors_path).name
    if degrees_path is not None:
        write_matrix(degrees_path, spectrum.degrees[:, None])
        data["degrees"] = Path(degrees_path).name
    _dump_json(path, data)


def read_spectrum(path) -> Spectrum:
    """Read a spectrum written by :func:`write_spectrum`, including its vectors if stored."""
    path = Path(path)
    data = _load_json(path)
    _check_version(data, path)
    n, d = int(data["n"]), int(data["d"])
    lam = np.array(data["eigenvalues"], dtype=float)
    res = np.array(data["residuals"], dtype=float)
    if "vectors" in data:
        vecs = read_matrix(path.parent / data["vectors"], lam.size)
    else:
        vecs = np.zeros((n * d, 0))
    if "degrees" in data:
        deg = read_matrix(path.parent / data["degrees"], 1).ravel()
    else:
        deg = np.ones(n)
    return Spectrum(lam, vecs, n, d, deg, res)


def write_embedding(path, emb, sidecar=None):
    """Coordinates as CSV plus a JSON sidecar {t, delta, m, normalized, kind}."""
    write_matrix(path, emb.coords)
    sidecar = Path(sidecar) if sidecar else Path(str(path) + ".json")
    meta = {"schema_version": SCHEMA_VERSION, "t": emb.t, "delta": emb.delta, "m": int(emb.m),
            "eigenvalues": [float(x) for x in emb.eigenvalues]}
    if hasattr(emb, "normalized"):
        meta.update(kind="vdm", normalized=bool(emb.normalized))
    else:
        meta.update(kind="dm")
    _dump_json(sidecar, meta)
    return sidecar


def read_embedding(path, sidecar=None):
    """Returns (coords, metadata dict)."""
    sidecar = Path(sidecar) if sidecar else Path(str(path) + ".json")
    meta = _load_json(sidecar)
    _check_version(meta, sidecar)
    return read_matrix(path), meta


def write_table(path, columns: dict):
    """Named columns of equal length as CSV with a header row."""
    names = list(columns)
    data = np.column_stack([np.asarray(columns[k], dtype=float) for k in names])
    write_matrix(path, data, names)


def read_table(path) -> dict:
    with open(path) as fh:
        names = fh.readline().strip().split(",")
    data = read_matrix(path, len(names), header=True, allow_inf=True)
    return {k: data[:, c] for c, k in enumerate(names)}


@dataclass
class Manifest:
    """Everything needed to rerun a pipeline, plus the artifacts it produced."""

    manifold: ManifoldSpec | None
    params: dict
    artifacts: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "manifold": self.manifold.to_dict() if self.manifold else None,
            "params": self.params,
            "artifacts": self.artifacts,
        }

    @classmethod
    def from_dict(cls, data: dict, source="manifest") -> "Manifest":
        _check_version(data, source)
        spec = data.get("manifold")
        return cls(ManifoldSpec.from_dict(spec) if spec else None,
                   dict(data.get("params", {})), dict(data.get("artifacts", {})))


def write_manifest(path, manifest: Manifest):
    _dump_json(path, manifest.to_dict())


def read_manifest(path) -> Manifest:
    return Manifest.from_dict(_load_json(path), path)
