"""Acceptance suite: one PASS/FAIL line per criterion (see the terminal summary)."""

import time

import numpy as np
import pytest
from scipy.stats import ortho_group, spearmanr

import vdmkit as v
from vdmkit import operator as vdm_operator
from vdmkit.nystrom import ExtensionConfig, Extender, eigenvector_field
from helpers import dense_sym, floyd_warshall, random_alignment_graph, report


def _sphere(n, dim, seed=0, **kw):
    cloud = v.sample(v.ManifoldSpec("sphere", n, dim=dim, seed=seed))
    return v.run_pipeline(cloud, v.PipelineParams(eps_pca=0.1, alpha=1.0, **kw))


# 1 ---------------------------------------------------------------------------

def test_criterion_01_s2_multiplicities():
    t0 = time.perf_counter()
    res = _sphere(3000, 2, n_eigs=30, tau=0.02)
    elapsed = time.perf_counter() - t0
    sizes = res.profile.sizes
    ok = sizes[:3] == [6, 10, 14] and elapsed < 300
    report(1, "S^2 n=3000 leading groups [6, 10, 14] at tau=0.02", ok,
           f"groups {sizes}, eps={res.eps:.4f}, {elapsed:.1f}s")
    assert ok


def test_criterion_01_s3_multiplicities():
    t0 = time.perf_counter()
    res = _sphere(4000, 3, n_eigs=30, tau=0.02)
    elapsed = time.perf_counter() - t0
    sizes = res.profile.sizes
    fine = v.detect_multiplicities(res.spectrum, 0.005).sizes
    ok = res.frames.dim == 3 and sizes[:3] == [4, 6, 9] and elapsed < 300
    report(1, "S^3 n=4000 leading groups [4, 6, 9] at tau=0.02", ok,
           f"groups {sizes}; at tau=0.005 {fine[:4]}, {elapsed:.1f}s")
    assert ok


# 2 ---------------------------------------------------------------------------

def test_criterion_02_hs_identity():
    worst = 0.0
    for seed, (n, d) in enumerate([(12, 1), (20, 2), (30, 3), (50, 2), (40, 1), (25, 3)]):
        ag = random_alignment_graph(n, d, p_edge=0.25, seed=100 + seed)
        op = vdm_operator.build(ag, 1.0)
        sp = v.eigensolve(op, op.size)
        Ssym = dense_sym(ag, 1.0)[0]
        for t in (1, 2, 3):
            emb = v.vdm_embed(sp, t, delta=None)
            P = np.linalg.matrix_power(Ssym, 2 * t)
            hs = np.einsum("iajb->ij", P.reshape(n, d, n, d) ** 2)
            worst = max(worst, np.abs(emb.coords @ emb.coords.T - hs).max())
    ok = worst < 1e-10
    report(2, "<V_t(i),V_t(j)> = ||S~^{2t}(i,j)||_HS^2 on random graphs", ok, f"max error {worst:.2e}")
    assert ok


# 3 ---------------------------------------------------------------------------

def test_criterion_03_psd_and_range(sphere500):
    rng = np.random.default_rng(3)
    ops = [vdm_operator.build(random_alignment_graph(n, d, seed=s), a)
           for s, (n, d, a) in enumerate([(10, 1, 0.0), (30, 2, 1.0), (50, 3, 0.5), (40, 2, 0.0)])]
    ops.append(sphere500.op)
    worst_q, worst_lam = np.inf, 0.0
    for op in ops:
        A = op.S_sym
        for _ in range(100):
            x = rng.standard_normal(op.size)
            nrm = x @ x
            q = x @ (A @ x)
            worst_q = min(worst_q, (nrm + q) / nrm, (nrm - q) / nrm)
        m = min(op.size, 60)
        worst_lam = max(worst_lam, np.abs(v.eigensolve(op, m).eigenvalues).max())
    ok = worst_q >= -1e-10 and worst_lam <= 1 + 1e-9
    report(3, "v^T(I +- S~)v >= -1e-10|v|^2 and |lambda| <= 1+1e-9", ok,
           f"min normalised form {worst_q:.3e}, max |lambda| {worst_lam:.12f}")
    assert ok


# 4 ---------------------------------------------------------------------------

def test_criterion_04_gauge_invariance(sphere500):
    rng = np.random.default_rng(4)
    R = ortho_group.rvs(2, size=sphere500.cloud.n, random_state=rng)
    ag = v.align_frames(sphere500.frames.regauge(R), sphere500.graph)
    sp = v.eigensolve(vdm_operator.build(ag, 1.0), sphere500.spectrum.m)
    lam0 = sphere500.spectrum.eigenvalues
    lam_err = np.max(np.abs(sp.eigenvalues - lam0) / np.abs(lam0))
    a = v.vdm_embed(sphere500.spectrum, 10, 0.2)
    b = v.vdm_embed(sp, 10, 0.2)
    dist_err = 0.0
    for ref in range(0, 500, 25):
        da, db = a.distances_from(ref), b.distances_from(ref)
        mask = da > 0
        dist_err = max(dist_err, np.max(np.abs(da - db)[mask] / da[mask]))
    ok = lam_err < 1e-8 and dist_err < 1e-8
    report(4, "re-gauging frames leaves eigenvalues and d_VDM unchanged (S^2 n=500)", ok,
           f"eigenvalue rel. err {lam_err:.1e}, distance rel. err {dist_err:.1e}")
    assert ok


# 5 ---------------------------------------------------------------------------

def _normalisation_pair(res):
    sp = res.spectrum
    return sp, v.vdm_embed(sp, 5, 0.1), v.vdm_embed(sp, 5, 0.1, normalized=True)


def test_criterion_05_distance_relation(sphere500):
    sp, V, Vn = _normalisation_pair(sphere500)
    deg = sp.degrees
    worst = 0.0
    for ref in range(0, 500, 50):
        d2 = V.distances_from(ref) ** 2
        d2n = Vn.distances_from(ref) ** 2
        target = d2 / (deg[ref] * deg)
        mask = d2n > 0
        worst = max(worst, np.max(np.abs(d2n - target)[mask] / d2n[mask]))
    ok = worst < 1e-10
    report(5, "d^2_VDM' = d^2_VDM / (deg(i) deg(j))", ok, f"max relative deviation {worst:.2e}")
    assert ok


def test_criterion_05_inner_product_relation(sphere500):
    sp, V, Vn = _normalisation_pair(sphere500)
    deg = sp.degrees
    G, Gn = V.coords @ V.coords.T, Vn.coords @ Vn.coords.T
    err = np.abs(Gn - G / np.outer(deg, deg)).max() / np.abs(Gn).max()
    ok = err < 1e-10
    report(5, "<V'(i),V'(j)> = <V(i),V(j)> / (deg(i) deg(j))", ok, f"max relative error {err:.2e}")
    assert ok


def test_criterion_05_angular_distance(sphere500):
    _, V, Vn = _normalisation_pair(sphere500)
    err = max(np.abs(V.angular_distances_from(r) - Vn.angular_distances_from(r)).max()
              for r in range(0, 500, 25))
    ok = err < 1e-10
    report(5, "angular distances agree for V and V'", ok, f"max difference {err:.2e}")
    assert ok


# 6 ---------------------------------------------------------------------------

def test_criterion_06_small_t_rank_correlation(sphere2000):
    res = sphere2000
    emb = res.vdm_embedding(t=10, delta=0.2, repair=[6, 10, 14])
    refs = np.linspace(0, res.cloud.n - 1, 25).astype(int)
    dv, dg = [], []
    for ref in refs:
        g = v.dijkstra(res.graph, ref).distances
        mask = (g > 0) & (g < 0.5)
        dv.append(emb.distances_from(ref)[mask])
        dg.append(g[mask])
    rho = spearmanr(np.concatenate(dv), np.concatenate(dg)).statistic
    ok = rho > 0.9
    report(6, "Spearman(d_VDM t=10, geodesic < 0.5) > 0.9 on S^2 n=2000", ok,
           f"rho={rho:.4f} over {sum(map(len, dg))} pairs, m={emb.m}")
    assert ok


# 7 ---------------------------------------------------------------------------

def test_criterion_07_dimension_estimation():
    found = {}
    cases = [("sphere", dict(dim=2), 0.1, 2), ("torus2", {}, 0.3, 2), ("interval", {}, None, 1)]
    for kind, extra, eps_pca, expected in cases:
        spec = v.ManifoldSpec(kind, 2000, **extra)
        params = v.PipelineParams(eps_pca=eps_pca, dim=spec.intrinsic_dim, boundary=spec.has_boundary)
        res = v.run_pipeline(v.sample(spec), params, spectrum=False)
        found[kind] = (v.estimate_dimension(res.report), expected)
    ok = all(a == b for a, b in found.values())
    report(7, "estimated dimension 2 (sphere, torus), 1 (interval) at n=2000", ok,
           ", ".join(f"{k}={a}" for k, (a, _) in found.items()))
    assert ok


# 8 ---------------------------------------------------------------------------

def test_criterion_08_dijkstra_vs_floyd_warshall():
    rng = np.random.default_rng(8)
    mismatches = 0
    for k in range(20):
        n = int(rng.integers(20, 301))
        p = float(rng.uniform(1.0, 6.0)) / n
        edges = [(a, b, float(rng.integers(1, 100))) for a in range(n) for b in range(a + 1, n)
                 if rng.random() < p]
        g = v.NeighborGraph.from_edges(n, edges)
        D = floyd_warshall(n, g.i, g.j, g.dist)
        for s in range(n):
            if not np.array_equal(v.dijkstra(g, s).distances, D[s]):
                mismatches += 1
    ok = mismatches == 0
    report(8, "Dijkstra equals Floyd-Warshall exactly on 20 random graphs (n <= 300)", ok,
           f"{mismatches} mismatching sources")
    assert ok


# 9 ---------------------------------------------------------------------------

def test_criterion_09_in_sample_reproduction(sphere2000):
    res = sphere2000
    ext = Extender(res.cloud, res.frames, res.agraph, res.spectrum, ExtensionConfig(res.eps, res.eps_pca))
    W = res.spectrum.right_vectors().reshape(res.cloud.n, res.frames.dim, -1)[:, :, ext.kept]
    worst = 0.0
    for i in range(0, res.cloud.n, 20):
        _, Vy = ext.eigenfields(res.cloud.points[i], frame=res.frames.bases[i])
        worst = max(worst, np.abs(Vy - W[i]).max())
    ok = worst < 1e-10
    report(9, "in-sample extension reproduces the eigen-vector-fields", ok, f"max error {worst:.2e}")
    assert ok


def _ambient(res, k):
    w = res.spectrum.right_vectors()[:, k].reshape(res.cloud.n, res.frames.dim)
    return np.einsum("npd,nd->np", res.frames.bases, w)


def test_criterion_09_leave_out_extension(sphere2000):
    full = sphere2000
    n = full.cloud.n
    perm = np.random.default_rng(1).permutation(n)
    held, train = np.sort(perm[: n // 20]), np.sort(perm[n // 20:])
    tr = v.run_pipeline(full.cloud.subset(train), v.PipelineParams(eps_pca=0.1, n_eigs=30))
    field = eigenvector_field(tr.spectrum, 0)
    X = _ambient(tr, 0)
    # the top eigenspace is 6-fold; fit the training field within the full run's top eigenspace
    B = np.stack([_ambient(full, k) for k in range(6)], axis=-1)
    coef, *_ = np.linalg.lstsq(B[train].reshape(-1, 6), X.reshape(-1), rcond=None)
    truth = B[held] @ coef
    ext = Extender(tr.cloud, tr.frames, tr.agraph, tr.spectrum, ExtensionConfig(tr.eps, tr.eps_pca))
    pred = ext.extend_points(field, full.cloud.points[held])
    err = np.linalg.norm(pred - truth, axis=1) / np.linalg.norm(truth, axis=1)
    med = float(np.median(err))
    ok = med < 0.15
    report(9, "leave-out extension of v_1 on S^2 (n=2000, 5% held out): median rel. error < 0.15", ok,
           f"median {med:.4f}")
    assert ok


# 10 --------------------------------------------------------------------------

def test_criterion_10_dm_truncation_n5000():
    cloud = v.sample(v.ManifoldSpec("sphere", 5000, dim=2))
    res = v.run_pipeline(cloud, v.PipelineParams(eps_pca=0.1), spectrum=False)
    emb = v.dm_embed(res.agraph, t=100, delta=0.2)
    ok = emb.m == 4 and emb.dim == 3
    report(10, "diffusion maps on S^2 n=5000, t=100, delta=0.2: m_DM = 4", ok,
           f"m_DM={emb.m}, mu_2..4={np.round(emb.eigenvalues[1:4], 4).tolist()}")
    assert ok


def test_criterion_10_dm_group_structure_n2000(sphere2000):
    emb = v.dm_embed(sphere2000.agraph, t=100, delta=0.2, group_sizes=[1, 3])
    groups = v.detect_multiplicities(v.dm_embed(sphere2000.agraph, t=100, delta=0.2).eigenvalues, 0.02).sizes
    ok = groups[:2] == [1, 3]
    report(10, "diffusion maps on S^2 n=2000: leading groups (1, then 3)", ok,
           f"groups {groups[:4]}; m_DM after (1,3) repair = {emb.m}")
    assert ok
