"""Exhaustive Euclidean nearest-neighbour search.

Ties in distance always go to the lower row index, so results do not depend
on how the work is chunked or how many threads run it. Ordering uses squared
distances; reported distances are their square roots.

The worker count comes from the ``REBALANCE_THREADS`` environment variable
(default 1).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

# upper bound on float64 cells in one distance block (~32 MB)
BLOCK_CELLS = 1 << 22


class NeighborError(ValueError):
    pass


@dataclass(frozen=True)
class NeighborList:
    query_index: int
    neighbor_indices: tuple[int, ...]
    distances: tuple[float, ...]


def distance(a: Sequence[float], b: Sequence[float]) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise NeighborError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return math.sqrt(float(np.sum((a - b) ** 2)))


def n_workers() -> int:
    raw = os.environ.get("REBALANCE_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise NeighborError(f"REBALANCE_THREADS must be an integer, got {raw!r}") from None


def squared_distances(queries: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Block of squared Euclidean distances, shape (len(queries), len(candidates)).

    Computed from explicit differences rather than the dot-product expansion
    so that d(a, b) and d(b, a) are bitwise equal and duplicates give exactly 0.
    """
    diff = queries[:, None, :] - candidates[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def map_chunks(fn: Callable[[np.ndarray], object], n: int, width: int) -> list:
    """Apply ``fn`` to consecutive index blocks of ``range(n)``, in order.

    ``width`` is the number of cells each query row costs; block boundaries
    depend only on ``n`` and ``width``, never on the worker count.
    """
    step = max(1, min(256, BLOCK_CELLS // max(1, width)))
    blocks = [np.arange(s, min(s + step, n)) for s in range(0, n, step)]
    workers = n_workers()
    if workers == 1 or len(blocks) <= 1:
        return [fn(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, blocks))


def _select(row: np.ndarray, k: int) -> np.ndarray:
    # positions of the k smallest entries; equal values keep ascending position
    if k < row.shape[0]:
        kth = np.partition(row, k - 1)[k - 1]
        pool = np.flatnonzero(row <= kth)
    else:
        pool = np.arange(row.shape[0])
    return pool[np.argsort(row[pool], kind="stable")[:k]]


def kneighbors(
    points: np.ndarray,
    queries: Sequence[int],
    k: int,
    restrict_to: Sequence[int] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """k nearest neighbours for several query rows of ``points``.

    Parameters
    ----------
    points : (n, d) array
    queries : row indices of ``points`` to search from
    k : neighbours per query
    restrict_to : optional candidate row indices; defaults to every row

    Returns
    -------
    indices : (n_queries, k) int array of row indices into ``points``
    distances : (n_queries, k) float array, ascending per row

    A query never counts itself as a neighbour, though another row with the
    same coordinates does.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    queries = np.asarray(queries, dtype=np.int64).reshape(-1)
    if restrict_to is None:
        cand = np.arange(points.shape[0])
    else:
        cand = np.unique(np.asarray(restrict_to, dtype=np.int64))
    if k < 1:
        raise NeighborError(f"k must be positive, got {k}")
    if queries.size and (queries.min() < 0 or queries.max() >= points.shape[0]):
        raise NeighborError("query index out of range")
    if cand.size and (cand.min() < 0 or cand.max() >= points.shape[0]):
        raise NeighborError("candidate index out of range")
    n_avail = cand.shape[0] - (1 if np.isin(queries, cand).any() else 0)
    if k > n_avail:
        raise NeighborError(f"k={k} exceeds the {n_avail} available candidates")

    cand_points = points[cand]
    # position of each row within cand, or -1
    where = np.full(points.shape[0], -1, dtype=np.int64)
    where[cand] = np.arange(cand.shape[0])

    def block(pos: np.ndarray):
        q = queries[pos]
        d2 = squared_distances(points[q], cand_points)
        self_pos = where[q]
        hit = self_pos >= 0
        d2[np.flatnonzero(hit), self_pos[hit]] = np.inf
        idx = np.empty((len(pos), k), dtype=np.int64)
        dist = np.empty((len(pos), k), dtype=np.float64)
        for r in range(len(pos)):
            sel = _select(d2[r], k)
            idx[r] = cand[sel]
            dist[r] = np.sqrt(d2[r, sel])
        return idx, dist

    parts = map_chunks(block, queries.shape[0], cand.shape[0] * points.shape[1])
    if not parts:
        return np.empty((0, k), dtype=np.int64), np.empty((0, k), dtype=np.float64)
    return (np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts]))


def knn(
    points: np.ndarray,
    query_index: int,
    k: int,
    restrict_to: Sequence[int] | None = None,
) -> NeighborList:
    """Single-query form of :func:`kneighbors`."""
    idx, dist = kneighbors(points, [query_index], k, restrict_to)
    return NeighborList(
        query_index=int(query_index),
        neighbor_indices=tuple(idx[0].tolist()),
        distances=tuple(dist[0].tolist()),
    )


def nearest_sets(points: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Nearest-neighbour distance of every row and all rows achieving it.

    Returns the squared nearest distance per row and, per row, the sorted
    indices of every other row at exactly that distance. Needs >= 2 rows.
    """
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if n < 2:
        raise NeighborError("need at least two rows")

    def block(pos: np.ndarray):
        d2 = squared_distances(points[pos], points)
        d2[np.arange(len(pos)), pos] = np.inf
        best = d2.min(axis=1)
        return best, [np.flatnonzero(d2[r] == best[r]) for r in range(len(pos))]

    parts = map_chunks(block, n, n * points.shape[1])
    best = np.concatenate([p[0] for p in parts])
    tied = [s for p in parts for s in p[1]]
    return best, tied
