"""End-to-end VDM pipeline: frames, alignment, operator, spectrum."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from . import operator as vdm_operator
from .alignment import align_frames
from .embedding import dm_embed, vdm_embed
from .errors import DataError
from .kernels import DEFAULT_KERNEL, KernelSpec
from .neighbors import build_graph
from .spectral import detect_multiplicities, eigensolve, repair_degeneracy
from .tangent import default_eps, default_eps_pca, local_pca


@dataclass(frozen=True)
class PipelineParams:
    """Pipeline settings.

    ``eps_pca`` defaults to ``n^{-2/(d+2)}`` (``n^{-2/(d+1)}`` on manifolds
    with boundary), which needs the manifold dimension ``dim``; ``eps``
    defaults to ``eps_pca^{(d+1)/(d+4)}`` with the estimated frame
    dimension. ``repair`` is a list of group sizes, ``"auto"`` for the
    detected groups, or ``None``.
    """

    eps_pca: float | None = None
    eps: float | None = None
    alpha: float = 1.0
    gamma: float = 0.9
    frame_dim: int | None = None
    dim: int | None = None
    boundary: bool = False
    pca_kernel: KernelSpec = DEFAULT_KERNEL
    weight_kernel: KernelSpec = DEFAULT_KERNEL
    n_eigs: int = 30
    tau: float = 0.01
    seed: int = 0
    t: float = 100
    delta: float = 0.2
    normalized: bool = True
    repair: object = None

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["pca_kernel"] = self.pca_kernel.name
        out["weight_kernel"] = self.weight_kernel.name
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineParams":
        data = dict(data)
        for key in ("pca_kernel", "weight_kernel"):
            if isinstance(data.get(key), str):
                data[key] = KernelSpec.parse(data[key])
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise DataError(f"unknown pipeline parameters: {sorted(unknown)}")
        return cls(**data)


@dataclass(eq=False)
class PipelineResult:
    cloud: object
    params: PipelineParams
    eps_pca: float
    eps: float
    pca_graph: object
    report: object
    frames: object
    graph: object
    agraph: object
    op: object
    spectrum: object = None
    profile: object = None
    extras: dict = field(default_factory=dict)

    def repaired_spectrum(self, repair=None):
        """Spectrum with eigenvalue groups equalised per ``repair`` (default: params.repair)."""
        repair = self.params.repair if repair is None else repair
        if repair is None or repair == []:
            return self.spectrum
        sizes = self.profile.sizes if repair == "auto" else repair
        sizes = _fit_sizes(sizes, self.spectrum.m)
        return repair_degeneracy(self.spectrum, sizes)

    def vdm_embedding(self, t=None, delta=None, normalized=None, repair=None):
        p = self.params
        return vdm_embed(self.repaired_spectrum(repair), p.t if t is None else t,
                         p.delta if delta is None else delta,
                         p.normalized if normalized is None else normalized)

    def dm_embedding(self, t=None, delta=None, group_sizes=None, alpha=0.0):
        p = self.params
        return dm_embed(self.agraph, p.t if t is None else t, p.delta if delta is None else delta,
                        alpha=alpha, n_eigs=p.n_eigs, group_sizes=group_sizes, seed=p.seed)


def _fit_sizes(sizes, m):
    """Leading group sizes that fit inside ``m`` eigenvalues."""
    out, total = [], 0
    for s in sizes:
        if total + s > m:
            break
        out.append(int(s))
        total += s
    return out


def resolve_eps_pca(params: PipelineParams, n: int) -> float:
    if params.eps_pca is not None:
        if not params.eps_pca > 0:
            raise DataError("eps_pca must be positive")
        return float(params.eps_pca)
    d = params.dim if params.dim is not None else params.frame_dim
    if d is None:
        raise DataError("eps_pca not given and the manifold dimension is unknown")
    return default_eps_pca(n, d, params.boundary)


def run_pipeline(cloud, params: PipelineParams = PipelineParams(), spectrum: bool = True) -> PipelineResult:
    """Run local PCA, alignment, operator assembly and (optionally) the eigensolve."""
    eps_pca = resolve_eps_pca(params, cloud.n)
    pca_graph = build_graph(cloud, np.sqrt(eps_pca))
    report, frames = local_pca(cloud, pca_graph, params.pca_kernel, params.gamma, params.frame_dim)
    eps = float(params.eps) if params.eps is not None else default_eps(eps_pca, frames.dim)
    if not eps > 0:
        raise DataError("eps must be positive")
    graph = build_graph(cloud, np.sqrt(eps))
    agraph = align_frames(frames, graph, params.weight_kernel)
    op = vdm_operator.build(agraph, params.alpha)
    result = PipelineResult(cloud, params, eps_pca, eps, pca_graph, report, frames, graph, agraph, op)
    if spectrum:
        m = min(params.n_eigs, op.size)
        result.spectrum = eigensolve(op, m, seed=params.seed)
        result.profile = detect_multiplicities(result.spectrum, params.tau)
    return result
