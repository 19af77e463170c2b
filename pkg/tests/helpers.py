"""Shared test oracles: random alignment graphs and dense assemblies."""

import numpy as np
from scipy.stats import ortho_group

from vdmkit.alignment import AlignmentGraph

ACCEPTANCE_LINES = []


def report(criterion, label, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {label}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def random_orthogonal(d, rng, size):
    """``size`` random matrices in O(d), shape (size, d, d)."""
    if d == 1:
        return rng.choice([-1.0, 1.0], size=(size, 1, 1))
    return ortho_group.rvs(d, size=size, random_state=rng).reshape(size, d, d)


def random_alignment_graph(n, d, p_edge=0.3, seed=0, connected=True):
    """Erdos-Renyi graph with random positive weights and random O(d) blocks.

    A path 0-1-...-(n-1) is always included when ``connected``.
    """
    rng = np.random.default_rng(seed)
    edges = set()
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < p_edge:
                edges.add((a, b))
    if connected:
        edges.update((a, a + 1) for a in range(n - 1))
    edges = sorted(edges)
    i = np.array([e[0] for e in edges], dtype=np.int64)
    j = np.array([e[1] for e in edges], dtype=np.int64)
    w = rng.uniform(0.1, 1.0, size=i.size)
    R = random_orthogonal(d, rng, i.size)
    return AlignmentGraph(n, d, i, j, w, R)


def dense_S(agraph, weights=None):
    """S with blocks w_ij O_ij, assembled edge by edge."""
    n, d = agraph.n, agraph.d
    w = agraph.weights if weights is None else weights
    S = np.zeros((n * d, n * d))
    for e in range(agraph.n_edges):
        a, b = agraph.i[e], agraph.j[e]
        S[a * d:(a + 1) * d, b * d:(b + 1) * d] = w[e] * agraph.rotations[e]
        S[b * d:(b + 1) * d, a * d:(a + 1) * d] = w[e] * agraph.rotations[e].T
    return S


def dense_sym(agraph, alpha=0.0):
    """Dense D_alpha^{-1/2} S_alpha D_alpha^{-1/2} and deg_alpha, built without the library operator."""
    n, d = agraph.n, agraph.d
    deg = np.zeros(n)
    for e in range(agraph.n_edges):
        deg[agraph.i[e]] += agraph.weights[e]
        deg[agraph.j[e]] += agraph.weights[e]
    wa = np.array([agraph.weights[e] / (deg[agraph.i[e]] * deg[agraph.j[e]]) ** alpha
                   for e in range(agraph.n_edges)])
    Sa = dense_S(agraph, wa)
    deg_a = np.zeros(n)
    for e in range(agraph.n_edges):
        deg_a[agraph.i[e]] += wa[e]
        deg_a[agraph.j[e]] += wa[e]
    s = np.repeat(deg_a ** -0.5, d)
    return s[:, None] * Sa * s[None, :], Sa, deg_a


def floyd_warshall(n, i, j, w):
    D = np.full((n, n), np.inf)
    np.fill_diagonal(D, 0.0)
    for a, b, c in zip(i, j, w):
        D[a, b] = min(D[a, b], c)
        D[b, a] = min(D[b, a], c)
    for k in range(n):
        D = np.minimum(D, D[:, k, None] + D[None, k, :])
    return D
