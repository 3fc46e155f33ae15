"""Synthetic imbalanced data with tunable class overlap and small disjuncts.

Negatives come from one unit-variance isotropic Gaussian at the origin.
Positives come from one or more unit-variance Gaussian sub-clusters. The
nominal positive centre sits on the first axis at ``6 * (1 - overlap)``;
with several sub-clusters their centres are spread around it at radius 3
(on a circle in the first two axes, or along the first axis in 1-D).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import NEGATIVE, POSITIVE, Dataset

SEPARATION = 6.0
RING_RADIUS = 3.0


@dataclass(frozen=True)
class GenSpec:
    n_negative: int
    n_positive: int
    dims: int = 2
    overlap: float = 0.0
    minority_subclusters: int = 1
    seed: int = 0

    def __post_init__(self):
        for name in ("n_negative", "n_positive", "dims", "minority_subclusters"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if not 0.0 <= self.overlap <= 1.0:
            raise ValueError(f"overlap must lie in [0, 1], got {self.overlap}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


def cluster_centers(spec: GenSpec) -> np.ndarray:
    """Centres of the positive sub-clusters, shape (subclusters, dims)."""
    m = spec.minority_subclusters
    nominal = np.zeros(spec.dims)
    nominal[0] = SEPARATION * (1.0 - spec.overlap)
    centers = np.tile(nominal, (m, 1))
    if m == 1:
        return centers
    if spec.dims == 1:
        centers[:, 0] += RING_RADIUS * (np.arange(m) - (m - 1) / 2)
    else:
        angles = 2 * np.pi * np.arange(m) / m
        centers[:, 0] += RING_RADIUS * np.cos(angles)
        centers[:, 1] += RING_RADIUS * np.sin(angles)
    return centers


def subcluster_sizes(spec: GenSpec) -> list[int]:
    q, r = divmod(spec.n_positive, spec.minority_subclusters)
    return [q + (1 if i < r else 0) for i in range(spec.minority_subclusters)]


def generate(spec: GenSpec) -> Dataset:
    rng = np.random.default_rng(spec.seed)
    parts = [rng.standard_normal((spec.n_negative, spec.dims))]
    for center, size in zip(cluster_centers(spec), subcluster_sizes(spec)):
        parts.append(center + rng.standard_normal((size, spec.dims)))
    features = np.vstack(parts)
    labels = np.concatenate([
        np.full(spec.n_negative, NEGATIVE),
        np.full(spec.n_positive, POSITIVE),
    ])
    order = rng.permutation(features.shape[0])
    names = tuple(f"f{i}" for i in range(spec.dims))
    return Dataset(features[order], labels[order], names, "target")
