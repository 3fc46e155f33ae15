import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rebalance.neighbors import NeighborError, distance, kneighbors, knn, nearest_sets

from oracles import brute_knn, sq_dist


def test_distance_examples(rng):
    assert distance([1.5, -2.0], [1.5, -2.0]) == 0.0
    assert distance([0, 0], [3, 4]) == 5.0
    for _ in range(20):
        a, b = rng.normal(size=3), rng.normal(size=3)
        assert distance(a, b) == distance(b, a)
    with pytest.raises(NeighborError):
        distance([0, 0], [0, 0, 0])


def test_knn_one_dimensional():
    nl = knn(np.array([0.0, 0.1, 0.2, 5.0]), 0, 2)
    assert nl.neighbor_indices == (1, 2)
    assert nl.distances == pytest.approx((0.1, 0.2))


def test_knn_tie_goes_to_lower_index():
    pts = np.zeros((8, 2))
    pts[:, 0] = [0, 9, 9, 1, 9, 9, 9, -1]  # rows 3 and 7 both at distance 1
    assert knn(pts, 0, 1).neighbor_indices == (3,)
    assert knn(pts, 0, 2).neighbor_indices == (3, 7)


def test_knn_restriction(rng):
    pts = rng.normal(size=(40, 3))
    minority = np.arange(0, 40, 4)
    nl = knn(pts, int(minority[2]), 5, restrict_to=minority)
    assert set(nl.neighbor_indices) <= set(minority.tolist())
    assert nl.query_index not in nl.neighbor_indices


def test_knn_self_excluded_but_duplicates_kept():
    pts = np.array([[1.0], [1.0], [3.0]])
    nl = knn(pts, 0, 2)
    assert nl.neighbor_indices == (1, 2)
    assert nl.distances[0] == 0.0


def test_knn_k_too_large():
    with pytest.raises(NeighborError):
        knn(np.zeros((3, 1)), 0, 3)
    with pytest.raises(NeighborError):
        knn(np.zeros((10, 1)), 0, 3, restrict_to=[0, 1, 2])


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(2, 200), d=st.integers(1, 4),
       grid=st.booleans())
def test_kneighbors_matches_brute_force(seed, n, d, grid):
    rng = np.random.default_rng(seed)
    # integer grids force many exact ties
    pts = rng.integers(0, 4, size=(n, d)).astype(float) if grid else rng.normal(size=(n, d))
    k = int(rng.integers(1, n))
    queries = rng.choice(n, size=min(n, 15), replace=False)
    idx, dist = kneighbors(pts, queries, k)
    as_lists = pts.tolist()
    for row, q in enumerate(queries):
        expected = brute_knn(as_lists, int(q), k)
        assert idx[row].tolist() == expected
        assert np.all(np.diff(dist[row]) >= 0)


def test_kneighbors_ordering_property(rng):
    pts = rng.integers(0, 3, size=(60, 2)).astype(float)
    idx, _ = kneighbors(pts, range(60), 7)
    for q in range(60):
        chosen = idx[q].tolist()
        for n_ in chosen:
            for c in set(range(60)) - set(chosen) - {q}:
                dn, dc = sq_dist(pts[q], pts[n_]), sq_dist(pts[q], pts[c])
                assert dn < dc or (dn == dc and n_ < c)


def test_kneighbors_same_under_threads(monkeypatch, rng):
    pts = rng.integers(0, 5, size=(700, 2)).astype(float)
    monkeypatch.setenv("REBALANCE_THREADS", "1")
    a = kneighbors(pts, range(700), 6)
    monkeypatch.setenv("REBALANCE_THREADS", "4")
    b = kneighbors(pts, range(700), 6)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_bad_thread_setting(monkeypatch):
    monkeypatch.setenv("REBALANCE_THREADS", "many")
    with pytest.raises(NeighborError):
        kneighbors(np.zeros((4, 1)), [0], 1)


def test_nearest_sets_reports_all_ties():
    pts = np.array([[0.0], [1.0], [-1.0], [5.0]])
    best, tied = nearest_sets(pts)
    assert best.tolist() == [1.0, 1.0, 1.0, 16.0]
    assert tied[0].tolist() == [1, 2]
    assert tied[3].tolist() == [1]
