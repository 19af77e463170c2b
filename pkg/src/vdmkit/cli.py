"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from . import io
from .errors import DataError, NumericalError
from .geodesic import dijkstra
from .kernels import KernelSpec
from .manifolds import KINDS, SAMPLINGS, ManifoldSpec, sample
from .nystrom import ExtensionConfig, Extender, eigenvector_field, project_field
from .pipeline import PipelineParams, run_pipeline

EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _kernel(text):
    try:
        return KernelSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _sizes(text):
    if text == "auto":
        return "auto"
    try:
        sizes = [int(s) for s in text.split(",") if s]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or comma-separated sizes, got {text!r}") from None
    if not sizes or any(s < 1 for s in sizes):
        raise argparse.ArgumentTypeError("group sizes must be positive integers")
    return sizes


def _add_source(p):
    g = p.add_argument_group("input")
    g.add_argument("--cloud", help="point cloud CSV (one point per row)")
    g.add_argument("--manifest", help="manifest JSON from a previous run; flags override it")
    g.add_argument("--manifold", choices=KINDS)
    g.add_argument("--n", type=int)
    g.add_argument("--dim", type=int, help="intrinsic dimension of the sampled manifold (sphere)")
    g.add_argument("--sampling", choices=SAMPLINGS)
    g.add_argument("--seed", type=int)


def _add_pipeline(p):
    g = p.add_argument_group("pipeline")
    g.add_argument("--eps-pca", type=float)
    g.add_argument("--eps", type=float)
    g.add_argument("--alpha", type=float)
    g.add_argument("--gamma", type=float)
    g.add_argument("--frame-dim", type=int, help="fix the frame dimension instead of estimating it")
    g.add_argument("--kernel", type=_kernel, help="kernel for both stages, e.g. gaussian(5)")
    g.add_argument("--n-eigs", type=int)
    g.add_argument("--tau", type=float)
    g.add_argument("--repair-degeneracy", type=_sizes, metavar="SIZES",
                   help="'auto' or comma-separated group sizes")
    g.add_argument("--threads", type=int, help="cap on BLAS/LAPACK threads (env VDMKIT_THREADS)")


def _add_embedding(p):
    g = p.add_argument_group("embedding")
    g.add_argument("--t", type=float)
    g.add_argument("--delta", type=float)
    g.add_argument("--normalized", action=argparse.BooleanOptionalAction, default=None,
                   help="divide by the degrees (default on)")


def build_parser():
    parser = _Parser(prog="vdmkit", description="Vector diffusion maps toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sample", help="sample a synthetic manifold")
    p.add_argument("--manifold", choices=KINDS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dim", type=int)
    p.add_argument("--sampling", choices=SAMPLINGS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--header", action="store_true")
    p.add_argument("--out", default="-")

    p = sub.add_parser("pipeline", help="run the full pipeline and write artifacts")
    _add_source(p)
    _add_pipeline(p)
    _add_embedding(p)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("spectrum", help="print the spectrum JSON")
    _add_source(p)
    _add_pipeline(p)
    p.add_argument("--out", default="-")

    p = sub.add_parser("distances", help="distances from a reference point")
    p.add_argument("kind", choices=["vdm", "vdm-norm", "dm", "geodesic"])
    p.add_argument("--ref", type=int, default=0)
    _add_source(p)
    _add_pipeline(p)
    _add_embedding(p)
    p.add_argument("--out", default="-")

    p = sub.add_parser("extend", help="extend a vector field to query points")
    _add_source(p)
    _add_pipeline(p)
    p.add_argument("--queries", required=True, help="query points CSV")
    p.add_argument("--field", default="eigen:0",
                   help="'eigen:L' for the L-th eigen-vector-field, or a CSV of ambient vectors")
    p.add_argument("--ext-delta", type=float, default=0.05, help="cutoff on |lambda|")
    p.add_argument("--out", default="-")

    p = sub.add_parser("compare", help="VDM, DM and geodesic distances from a reference point")
    p.add_argument("--ref", type=int, default=0)
    _add_source(p)
    _add_pipeline(p)
    _add_embedding(p)
    p.add_argument("--out", default="-")
    return parser


def _resolve(args, parser):
    """Build (cloud, manifold spec, params) from flags and an optional manifest."""
    manifest = io.read_manifest(args.manifest) if args.manifest else None
    base = dict(manifest.params) if manifest else {}
    spec = manifest.manifold if manifest else None
    cloud = None

    if args.cloud:
        if args.manifold:
            parser.error("--cloud and --manifold are mutually exclusive")
        cloud = io.read_cloud(args.cloud)
        spec = None
    elif args.manifold or spec is not None:
        if args.manifold:
            if args.n is None:
                parser.error("--manifold needs --n")
            spec = ManifoldSpec(args.manifold, args.n,
                                seed=args.seed if args.seed is not None else 0,
                                dim=args.dim, sampling=args.sampling)
        cloud = sample(spec)
    elif manifest and manifest.artifacts.get("cloud"):
        cloud = io.read_cloud(Path(args.manifest).parent / manifest.artifacts["cloud"])
    else:
        parser.error("need --cloud, --manifold or --manifest")

    flags = {
        "eps_pca": args.eps_pca, "eps": args.eps, "alpha": args.alpha, "gamma": args.gamma,
        "frame_dim": args.frame_dim, "n_eigs": args.n_eigs, "tau": args.tau, "seed": args.seed,
        "repair": args.repair_degeneracy,
        "t": getattr(args, "t", None), "delta": getattr(args, "delta", None),
        "normalized": getattr(args, "normalized", None),
    }
    if args.kernel is not None:
        flags["pca_kernel"] = flags["weight_kernel"] = args.kernel
    base.update({k: v for k, v in flags.items() if v is not None})
    if spec is not None:
        base.setdefault("dim", spec.intrinsic_dim)
        base.setdefault("boundary", spec.has_boundary)
    elif args.dim is not None:
        base["dim"] = args.dim
    params = PipelineParams.from_dict(base)
    return cloud, spec, params


def _open_out(target):
    if target == "-":
        return sys.stdout, False
    return open(target, "w", newline=""), True


def _emit_json(obj, target):
    fh, close = _open_out(target)
    try:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
    finally:
        if close:
            fh.close()


def _emit_table(columns, target):
    fh, close = _open_out(target)
    try:
        names = list(columns)
        io.write_matrix(fh, np.column_stack([columns[k] for k in names]), names)
    finally:
        if close:
            fh.close()


def _check_ref(ref, n):
    if not 0 <= ref < n:
        raise DataError(f"reference index {ref} out of range for {n} points")


def cmd_sample(args, parser):
    spec = ManifoldSpec(args.manifold, args.n, seed=args.seed, dim=args.dim, sampling=args.sampling)
    cloud = sample(spec)
    fh, close = _open_out(args.out)
    try:
        io.write_cloud(fh, cloud, header=args.header)
    finally:
        if close:
            fh.close()


def cmd_pipeline(args, parser):
    cloud, spec, params = _resolve(args, parser)
    res = run_pipeline(cloud, params)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    io.write_cloud(out / "cloud.csv", cloud)
    io.write_spectrum(out / "spectrum.json", res.spectrum, res.profile,
                      vectors_path=out / "eigenvectors.csv", degrees_path=out / "degrees.csv")
    emb = res.vdm_embedding()
    io.write_embedding(out / "embedding.csv", emb)
    resolved = params.to_dict()
    resolved.update(eps_pca=res.eps_pca, eps=res.eps, frame_dim=res.frames.dim)
    manifest = io.Manifest(spec, resolved, {
        "cloud": "cloud.csv", "spectrum": "spectrum.json", "eigenvectors": "eigenvectors.csv",
        "degrees": "degrees.csv", "embedding": "embedding.csv",
        "embedding_meta": "embedding.csv.json"})
    io.write_manifest(out / "manifest.json", manifest)
    print(json.dumps({"n": cloud.n, "frame_dim": res.frames.dim, "eps_pca": res.eps_pca,
                      "eps": res.eps, "groups": res.profile.sizes, "m": emb.m}))


def cmd_spectrum(args, parser):
    cloud, _, params = _resolve(args, parser)
    res = run_pipeline(cloud, params)
    _emit_json(io.spectrum_to_dict(res.spectrum, res.profile), args.out)


def cmd_distances(args, parser):
    cloud, _, params = _resolve(args, parser)
    _check_ref(args.ref, cloud.n)
    res = run_pipeline(cloud, params, spectrum=args.kind in ("vdm", "vdm-norm"))
    if args.kind == "geodesic":
        dist = dijkstra(res.graph, args.ref).distances
    elif args.kind == "dm":
        dist = res.dm_embedding().distances_from(args.ref)
    else:
        dist = res.vdm_embedding(normalized=args.kind == "vdm-norm").distances_from(args.ref)
    _emit_table({"index": np.arange(cloud.n), "distance": dist}, args.out)


def cmd_compare(args, parser):
    cloud, _, params = _resolve(args, parser)
    _check_ref(args.ref, cloud.n)
    res = run_pipeline(cloud, params)
    _emit_table({
        "index": np.arange(cloud.n),
        "vdm": res.vdm_embedding().distances_from(args.ref),
        "dm": res.dm_embedding().distances_from(args.ref),
        "geodesic": dijkstra(res.graph, args.ref).distances,
    }, args.out)


def cmd_extend(args, parser):
    cloud, _, params = _resolve(args, parser)
    res = run_pipeline(cloud, params)
    queries = io.read_matrix(args.queries, cloud.ambient_dim)
    if args.field.startswith("eigen:"):
        try:
            l = int(args.field.split(":", 1)[1])
        except ValueError:
            parser.error(f"bad --field {args.field!r}")
        if not 0 <= l < res.spectrum.m:
            raise DataError(f"eigenvector index {l} outside [0, {res.spectrum.m})")
        field = eigenvector_field(res.spectrum, l)
    else:
        field = project_field(res.frames, io.read_matrix(args.field, cloud.ambient_dim))
    cfg = ExtensionConfig(res.eps, res.eps_pca, args.ext_delta, params.alpha,
                          params.pca_kernel, params.weight_kernel)
    vectors = Extender(cloud, res.frames, res.agraph, res.spectrum, cfg).extend_points(field, queries)
    fh, close = _open_out(args.out)
    try:
        io.write_matrix(fh, vectors)
    finally:
        if close:
            fh.close()


COMMANDS = {
    "sample": cmd_sample,
    "pipeline": cmd_pipeline,
    "spectrum": cmd_spectrum,
    "distances": cmd_distances,
    "compare": cmd_compare,
    "extend": cmd_extend,
}


def _thread_limit(args):
    value = getattr(args, "threads", None)
    if value is None and os.environ.get("VDMKIT_THREADS"):
        try:
            value = int(os.environ["VDMKIT_THREADS"])
        except ValueError:
            return None
    return value if value and value > 0 else None


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    limit = _thread_limit(args)
    try:
        with threadpool_limits(limits=limit):
            COMMANDS[args.command](args, parser)
    except NumericalError as exc:
        print(f"vdmkit: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (DataError, OSError, ValueError, KeyError) as exc:
        print(f"vdmkit: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
