import numpy as np
import pytest

from vdmkit import DataError, ManifoldSpec, NeighborGraph, build_graph, dijkstra, sample
from helpers import floyd_warshall


def test_path_graph():
    g = NeighborGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)])
    np.testing.assert_array_equal(dijkstra(g, 0).distances, [0, 1, 2])


def test_unreachable_is_infinite():
    g = NeighborGraph.from_edges(3, [(0, 1, 1.0)])
    assert dijkstra(g, 0).distances[2] == np.inf


def test_bad_source():
    with pytest.raises(DataError):
        dijkstra(NeighborGraph.from_edges(2, []), 5)


@pytest.mark.parametrize("seed", range(5))
def test_matches_floyd_warshall_euclidean(seed):
    cloud = sample(ManifoldSpec("sphere", 150, dim=2, seed=seed))
    g = build_graph(cloud, 0.4)
    D = floyd_warshall(g.n, g.i, g.j, g.dist)
    for s in range(0, g.n, 15):
        np.testing.assert_allclose(dijkstra(g, s).distances, D[s], rtol=1e-12, atol=0)


def test_interval_end_to_end():
    cloud = sample(ManifoldSpec("interval", 2000))
    h = 2 * np.pi / 1999
    g = build_graph(cloud, 5.5 * h)
    d = dijkstra(g, 0).distances[-1]
    assert abs(d - 2 * np.pi) < 2 * h


def test_geodesic_dominates_euclidean():
    cloud = sample(ManifoldSpec("sphere", 300, dim=2, seed=1))
    g = build_graph(cloud, 0.35)
    d = dijkstra(g, 0).distances
    eu = np.linalg.norm(cloud.points - cloud.points[0], axis=1)
    ok = np.isfinite(d)
    assert np.all(d[ok] >= eu[ok] - 1e-12)
