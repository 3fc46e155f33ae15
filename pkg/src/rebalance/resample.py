"""Data-level class balancing: random under/over-sampling, Tomek links, ENN,
SMOTE, ADASYN and the SMOTE+cleaner hybrids.

Every sampler is a pure function of ``(Dataset, SamplerConfig)``. The
majority class is whichever has more rows (the negative class on a tie);
the other is the minority class. Random draws are consumed in a fixed order
documented on each sampler, so a given seed always gives the same output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dataset import NEGATIVE, POSITIVE, ClassCounts, Dataset, class_counts
from .neighbors import kneighbors, nearest_sets

METHODS = ("rus", "ros", "tomek", "enn", "smote", "adasyn", "smote-tomek", "smote-enn")
STRATEGIES = ("majority", "auto")
DEFAULT_K = {"smote": 5, "adasyn": 5, "enn": 3}


class SamplingError(ValueError):
    pass


@dataclass(frozen=True)
class SamplerConfig:
    """Sampler settings.

    ``k_neighbors`` and ``strategy`` left as ``None`` take the per-method
    defaults: k=5 for SMOTE/ADASYN, k=3 for ENN; cleaners remove majority
    rows only, hybrids clean both classes.
    """

    seed: int = 0
    k_neighbors: int | None = None
    strategy: str | None = None

    def __post_init__(self):
        if self.seed < 0:
            raise SamplingError("seed must be non-negative")
        if self.k_neighbors is not None and self.k_neighbors < 1:
            raise SamplingError(f"k_neighbors must be >= 1, got {self.k_neighbors}")
        if self.strategy is not None and self.strategy not in STRATEGIES:
            raise SamplingError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")

    def k_for(self, method: str) -> int:
        return self.k_neighbors if self.k_neighbors is not None else DEFAULT_K[method]


@dataclass(frozen=True)
class ResampleOutcome:
    """Resampled data plus what was done to get it.

    ``removed_indices`` index the rows handed to the cleaning step (for a
    hybrid that is the SMOTE output). ``synthetic_pairs`` holds one
    ``(base, neighbor)`` row pair of the input per added row; random
    oversampling records ``(source, source)``.
    """

    data: Dataset
    before: ClassCounts
    after: ClassCounts
    method: str
    parameters: dict
    removed_indices: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    synthetic_count: int = 0
    synthetic_pairs: np.ndarray = field(
        default_factory=lambda: np.empty((0, 2), dtype=np.int64)
    )
    warnings: tuple[str, ...] = ()
    details: dict = field(default_factory=dict)

    def sidecar(self) -> dict:
        return {
            "method": self.method,
            "parameters": dict(self.parameters),
            "before": self.before.as_dict(),
            "after": self.after.as_dict(),
            "synthetic_count": int(self.synthetic_count),
            "removed_count": int(len(self.removed_indices)),
            "removed_indices": [int(i) for i in self.removed_indices],
            "warnings": list(self.warnings),
        }


def _roles(ds: Dataset) -> tuple[int, int, ClassCounts]:
    counts = class_counts(ds)
    if counts.n_negative == 0 or counts.n_positive == 0:
        raise SamplingError(
            f"both classes must be present, got {counts.n_negative} negative / "
            f"{counts.n_positive} positive"
        )
    if counts.n_negative >= counts.n_positive:
        return NEGATIVE, POSITIVE, counts
    return POSITIVE, NEGATIVE, counts


def _drop(ds: Dataset, removed: np.ndarray) -> Dataset:
    keep = np.ones(ds.n_rows, dtype=bool)
    keep[removed] = False
    return ds.take(np.flatnonzero(keep))


def _outcome(ds, new_data, before, method, params, **audit) -> ResampleOutcome:
    return ResampleOutcome(
        data=new_data,
        before=before,
        after=class_counts(new_data),
        method=method,
        parameters=params,
        **audit,
    )


def _append(ds: Dataset, rows: np.ndarray, label: int) -> Dataset:
    features = np.vstack([ds.features, rows])
    labels = np.concatenate([ds.labels, np.full(rows.shape[0], label, dtype=np.int64)])
    return ds.with_rows(features, labels)


def random_undersample(ds: Dataset, cfg: SamplerConfig = SamplerConfig()) -> ResampleOutcome:
    """Drop randomly chosen majority rows until both classes are equal.

    Draws: one ``rng.choice`` without replacement over the majority rows.
    """
    maj, mino, before = _roles(ds)
    params = {"seed": cfg.seed}
    majority = np.flatnonzero(ds.labels == maj)
    n_min = int(np.count_nonzero(ds.labels == mino))
    rng = np.random.default_rng(cfg.seed)
    kept = rng.choice(majority, size=n_min, replace=False)
    removed = np.setdiff1d(majority, kept)
    return _outcome(ds, _drop(ds, removed), before, "rus", params, removed_indices=removed)


def random_oversample(ds: Dataset, cfg: SamplerConfig = SamplerConfig()) -> ResampleOutcome:
    """Append copies of minority rows, drawn uniformly with replacement.

    Draws: one ``rng.integers`` vector of source positions.
    """
    maj, mino, before = _roles(ds)
    params = {"seed": cfg.seed}
    minority = np.flatnonzero(ds.labels == mino)
    n_new = int(np.count_nonzero(ds.labels == maj)) - minority.shape[0]
    rng = np.random.default_rng(cfg.seed)
    sources = minority[rng.integers(0, minority.shape[0], size=n_new)]
    data = _append(ds, ds.features[sources], mino)
    return _outcome(
        ds, data, before, "ros", params,
        synthetic_count=n_new,
        synthetic_pairs=np.column_stack([sources, sources]),
    )


def tomek_link_pairs(features: np.ndarray, labels: np.ndarray) -> list[tuple[int, int]]:
    """All cross-class pairs ``(i, j)``, ``i < j``, forming a Tomek link.

    A pair is a link when no other row is strictly closer to either member
    than the members are to each other, i.e. each is at its partner's
    nearest-neighbour distance. Under distance ties a row may belong to more
    than one link.
    """
    _, tied = nearest_sets(features)
    links = []
    for i, near in enumerate(tied):
        for j in near:
            j = int(j)
            if j > i and labels[i] != labels[j]:
                partner = tied[j]
                pos = np.searchsorted(partner, i)
                if pos < partner.shape[0] and partner[pos] == i:
                    links.append((i, j))
    return links


def tomek_links(ds: Dataset, cfg: SamplerConfig = SamplerConfig()) -> ResampleOutcome:
    """Remove Tomek-link members, found in one pass over the input.

    ``strategy="majority"`` (default) removes the majority member of each
    link; ``"auto"`` removes both members.
    """
    maj, _, before = _roles(ds)
    strategy = cfg.strategy or "majority"
    links = tomek_link_pairs(ds.features, ds.labels)
    removed = set()
    for i, j in links:
        for m in (i, j):
            if strategy == "auto" or ds.labels[m] == maj:
                removed.add(m)
    removed = np.array(sorted(removed), dtype=np.int64)
    return _outcome(
        ds, _drop(ds, removed), before, "tomek", {"strategy": strategy},
        removed_indices=removed,
        details={"links": links},
    )


def enn(ds: Dataset, cfg: SamplerConfig = SamplerConfig()) -> ResampleOutcome:
    """Edited nearest neighbours.

    A candidate row is removed when strictly more than half of its k nearest
    neighbours (searched over the whole input, itself excluded) belong to
    the other class. Candidates are majority rows for
    ``strategy="majority"``, every row for ``"auto"``. All decisions are
    made against the input before anything is removed.
    """
    maj, _, before = _roles(ds)
    k = cfg.k_for("enn")
    strategy = cfg.strategy or "majority"
    if k >= ds.n_rows:
        raise SamplingError(f"k_neighbors={k} must be smaller than the {ds.n_rows} rows")
    if strategy == "majority":
        candidates = np.flatnonzero(ds.labels == maj)
    else:
        candidates = np.arange(ds.n_rows)
    nbrs, _ = kneighbors(ds.features, candidates, k)
    disagree = np.count_nonzero(ds.labels[nbrs] != ds.labels[candidates][:, None], axis=1)
    removed = candidates[2 * disagree > k]
    return _outcome(
        ds, _drop(ds, removed), before, "enn", {"k_neighbors": k, "strategy": strategy},
        removed_indices=removed,
    )


def _interpolate(
    features: np.ndarray, bases: np.ndarray, nbr_rows: np.ndarray, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    # draws: neighbour column per sample, then one gap per sample
    m, k = nbr_rows.shape
    cols = rng.integers(0, k, size=m)
    partners = nbr_rows[np.arange(m), cols]
    gaps = rng.random((m, 1))
    x, z = features[bases], features[partners]
    new = x + gaps * (z - x)
    # the exact point lies on the segment; clamp away rounding spill
    new = np.clip(new, np.minimum(x, z), np.maximum(x, z))
    return new, np.column_stack([bases, partners])


def _oversampling_setup(ds: Dataset, cfg: SamplerConfig, method: str):
    maj, mino, before = _roles(ds)
    k = cfg.k_for(method)
    minority = np.flatnonzero(ds.labels == mino)
    n_new = int(np.count_nonzero(ds.labels == maj)) - minority.shape[0]
    if n_new and minority.shape[0] <= k:
        raise SamplingError(
            f"{method}: minority class has {minority.shape[0]} rows, needs more than "
            f"k_neighbors={k}"
        )
    return maj, mino, before, k, minority, n_new


def smote(ds: Dataset, cfg: SamplerConfig = SamplerConfig()) -> ResampleOutcome:
    """SMOTE up to exact balance.

    Each new row is ``x + u * (z - x)`` for a minority row ``x``, one of its
    k nearest minority neighbours ``z`` and ``u`` uniform on [0, 1). Base
    rows are taken round-robin over a seeded shuffle of the minority rows,
    so every minority row serves as a base either ``q`` or ``q + 1`` times.

    Draws: the shuffle, then neighbour choices, then gaps.
    """
    _, mino, before, k, minority, n_new = _oversampling_setup(ds, cfg, "smote")
    params = {"k_neighbors": k, "seed": cfg.seed}
    if n_new == 0:
        return _outcome(ds, ds, before, "smote", params)
    rng = np.random.default_rng(cfg.seed)
    nbrs, _ = kneighbors(ds.features, minority, k, restrict_to=minority)
    order = rng.permutation(minority.shape[0])
    slots = order[np.arange(n_new) % minority.shape[0]]
    new, pairs = _interpolate(ds.features, minority[slots], nbrs[slots], rng)
    return _outcome(
        ds, _append(ds, new, mino), before, "smote", params,
        synthetic_count=n_new, synthetic_pairs=pairs,
    )


def adasyn_allocation(ds: Dataset, k: int) -> tuple[np.ndarray, np.ndarray, bool]:
    """Per-minority-row synthetic counts for ADASYN.

    Returns ``(minority_rows, counts, fallback)``. Each minority row is
    weighted by the share of majority rows among its k nearest neighbours in
    the full data; counts are those weights normalised, times the
    majority/minority gap, rounded half up. If no minority row has a
    majority neighbour the gap is spread uniformly and ``fallback`` is True.
    """
    maj, mino, _ = _roles(ds)
    minority = np.flatnonzero(ds.labels == mino)
    gap = int(np.count_nonzero(ds.labels == maj)) - minority.shape[0]
    nbrs, _ = kneighbors(ds.features, minority, k)
    hardness = np.count_nonzero(ds.labels[nbrs] == maj, axis=1) / k
    total = hardness.sum()
    if total == 0:
        share = gap / minority.shape[0]
        counts = np.full(minority.shape[0], math.floor(share + 0.5), dtype=np.int64)
        return minority, counts, True
    counts = np.floor(hardness / total * gap + 0.5).astype(np.int64)
    return minority, counts, False


def adasyn(ds: Dataset, cfg: SamplerConfig = SamplerConfig()) -> ResampleOutcome:
    """ADASYN: SMOTE interpolation with more new rows for harder minority rows.

    The positive count after sampling is the minority count plus the rounded
    allocations, so it can miss exact balance by the accumulated rounding.

    Draws: neighbour choices, then gaps.
    """
    _, mino, before, k, minority, n_gap = _oversampling_setup(ds, cfg, "adasyn")
    params = {"k_neighbors": k, "seed": cfg.seed}
    if n_gap == 0:
        return _outcome(ds, ds, before, "adasyn", params)
    minority, counts, fallback = adasyn_allocation(ds, k)
    warnings = ()
    if fallback:
        warnings = ("adasyn: no minority row has a majority neighbour; "
                    "allocated synthetic rows uniformly",)
    rng = np.random.default_rng(cfg.seed)
    nbrs, _ = kneighbors(ds.features, minority, k, restrict_to=minority)
    slots = np.repeat(np.arange(minority.shape[0]), counts)
    new, pairs = _interpolate(ds.features, minority[slots], nbrs[slots], rng)
    return _outcome(
        ds, _append(ds, new, mino), before, "adasyn", params,
        synthetic_count=int(slots.shape[0]), synthetic_pairs=pairs,
        warnings=warnings,
        details={"allocation": counts},
    )


def _hybrid(ds, cfg, cleaner, name) -> ResampleOutcome:
    over = smote(ds, cfg)
    clean_cfg = SamplerConfig(seed=cfg.seed, strategy=cfg.strategy or "auto")
    cleaned = cleaner(over.data, clean_cfg)
    params = {**over.parameters, **{f"cleaner_{k}": v for k, v in cleaned.parameters.items()}}
    return ResampleOutcome(
        data=cleaned.data,
        before=over.before,
        after=cleaned.after,
        method=name,
        parameters=params,
        removed_indices=cleaned.removed_indices,
        synthetic_count=over.synthetic_count,
        synthetic_pairs=over.synthetic_pairs,
        warnings=over.warnings + cleaned.warnings,
        details={"intermediate": over.after, **cleaned.details},
    )


def smote_tomek(ds: Dataset, cfg: SamplerConfig = SamplerConfig()) -> ResampleOutcome:
    """SMOTE, then Tomek-link cleaning of the oversampled data.

    The cleaner removes both link members unless ``cfg.strategy`` says
    ``"majority"``.
    """
    return _hybrid(ds, cfg, tomek_links, "smote-tomek")


def smote_enn(ds: Dataset, cfg: SamplerConfig = SamplerConfig()) -> ResampleOutcome:
    """SMOTE, then ENN (k=3) over the oversampled data, both classes by default."""
    return _hybrid(ds, cfg, enn, "smote-enn")


SAMPLERS = {
    "rus": random_undersample,
    "ros": random_oversample,
    "tomek": tomek_links,
    "enn": enn,
    "smote": smote,
    "adasyn": adasyn,
    "smote-tomek": smote_tomek,
    "smote-enn": smote_enn,
}


def resample(ds: Dataset, method: str, cfg: SamplerConfig = SamplerConfig()) -> ResampleOutcome:
    try:
        sampler = SAMPLERS[method]
    except KeyError:
        raise SamplingError(f"unknown method {method!r}; choose from {', '.join(METHODS)}") from None
    return sampler(ds, cfg)
