"""Evaluation reports: the train/resample/evaluate pipeline and JSON/CSV output."""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import metrics
from .dataset import (
    ClassCounts,
    Dataset,
    DatasetError,
    SplitSpec,
    class_counts,
    imbalance_ratio,
    split_indices,
)
from .model import TrainConfig, fit, predict, predict_proba
from .resample import SamplerConfig, resample

SCHEMA_VERSION = 1


class StageError(RuntimeError):
    """A pipeline stage failed; ``stage`` names which one."""

    def __init__(self, stage: str, error: Exception):
        super().__init__(f"stage {stage!r}: {error}")
        self.stage = stage
        self.error = error


def dataset_summary(ds: Dataset) -> dict:
    return {"n_features": ds.n_features, **label_summary(ds.labels)}


def label_summary(labels) -> dict:
    labels = np.asarray(labels)
    n_pos = int(np.count_nonzero(labels == 1))
    counts = ClassCounts(n_negative=labels.shape[0] - n_pos, n_positive=n_pos)
    try:
        ir = imbalance_ratio(counts)
    except DatasetError:
        ir = None
    return {"n_rows": counts.total, "counts": counts.as_dict(), "imbalance_ratio": ir}


def roc_block(curve: metrics.RocCurve) -> dict:
    return {
        "fpr": curve.fpr.tolist(),
        "tpr": curve.tpr.tolist(),
        # the (0, 0) anchor has an infinite threshold; JSON has no infinity
        "thresholds": [None if math.isinf(t) else t for t in curve.thresholds.tolist()],
    }


def evaluation(truth, pred, scores=None) -> tuple[dict, dict | None, list[str]]:
    """Metric block, ROC block and warnings for one set of predictions."""
    cm = metrics.confusion_matrix(truth, pred)
    warnings = [f"zero denominator: {name} reported as 0" for name in metrics.degenerate_metrics(cm)]
    roc = None
    auc_value = None
    if scores is not None:
        try:
            curve = metrics.roc_curve(truth, scores)
        except metrics.MetricError as exc:
            warnings.append(f"roc: {exc}")
        else:
            auc_value = metrics.auc(curve)
            roc = roc_block(curve)
    return metrics.metric_block(cm, auc_value), roc, warnings


def evaluation_report(truth, pred, scores=None, threshold: float | None = None) -> dict:
    block, roc, warnings = evaluation(truth, pred, scores)
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "eval",
        "dataset": label_summary(truth),
        "threshold": threshold,
        "metrics": block,
        "roc": roc,
        "warnings": warnings,
    }


@dataclass(frozen=True)
class PipelineOptions:
    split: SplitSpec = SplitSpec()
    method: str | None = None
    sampler: SamplerConfig = SamplerConfig()
    train: TrainConfig = TrainConfig()
    threshold: float = 0.5
    resample_full: bool = False
    scale_features: bool = False


def _standardized(ds: Dataset, mean: np.ndarray, scale: np.ndarray) -> Dataset:
    return ds.with_rows((ds.features - mean) / scale, ds.labels)


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (ValueError, RuntimeError) as exc:
        raise StageError(name, exc) from exc


def run_pipeline(ds: Dataset, opts: PipelineOptions = PipelineOptions()):
    """Split, optionally resample, fit, and evaluate on the held-out rows.

    By default only the training partition is resampled. With
    ``resample_full`` the whole dataset is resampled first and then split.
    ``scale_features`` standardizes features with statistics from the rows
    that get resampled (the training partition, or everything).

    Returns ``(report, model)``.
    """
    warnings: list[str] = []
    outcome = None

    if opts.resample_full:
        source = ds
        if opts.scale_features:
            mean, scale = _feature_stats(source)
            source = _standardized(source, mean, scale)
        if opts.method:
            outcome = _stage("resample", resample, source, opts.method, opts.sampler)
            source = outcome.data
        train_idx, test_idx = _stage("split", split_indices, source.labels, opts.split)
        train, test = source.take(train_idx), source.take(test_idx)
    else:
        train_idx, test_idx = _stage("split", split_indices, ds.labels, opts.split)
        train, test = ds.take(train_idx), ds.take(test_idx)
        if opts.scale_features:
            mean, scale = _feature_stats(train)
            train = _standardized(train, mean, scale)
            test = _standardized(test, mean, scale)
        if opts.method:
            outcome = _stage("resample", resample, train, opts.method, opts.sampler)
            train = outcome.data

    model = _stage("fit", fit, train, opts.train)
    if not model.converged:
        warnings.append(
            f"fit: stopped at max_iterations={opts.train.max_iterations} before reaching tolerance"
        )
    scores = predict_proba(model, test.features)
    pred = predict(model, test.features, opts.threshold)
    block, roc, eval_warnings = _stage("evaluate", evaluation, test.labels, pred, scores)
    warnings.extend(eval_warnings)

    resampling = None
    if outcome is not None:
        warnings.extend(outcome.warnings)
        resampling = {
            "method": outcome.method,
            "parameters": outcome.parameters,
            "applied_to": "full" if opts.resample_full else "train",
            "before": outcome.before.as_dict(),
            "after": outcome.after.as_dict(),
            "synthetic_count": int(outcome.synthetic_count),
            "removed_count": int(len(outcome.removed_indices)),
        }

    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "pipeline",
        "dataset": dataset_summary(ds),
        "split": {
            "test_fraction": opts.split.test_fraction,
            "seed": opts.split.seed,
            "stratified": opts.split.stratified,
            "n_train": train_idx.shape[0],
            "n_test": test.n_rows,
        },
        "scale_features": opts.scale_features,
        "resampling": resampling,
        "train": {"counts": class_counts(train).as_dict(), **model.to_dict()["training_meta"]},
        "threshold": opts.threshold,
        "metrics": block,
        "roc": roc,
        "warnings": warnings,
    }
    return report, model


def _feature_stats(ds: Dataset) -> tuple[np.ndarray, np.ndarray]:
    mean = ds.features.mean(axis=0)
    scale = ds.features.std(axis=0)
    scale[scale == 0] = 1.0
    return mean, scale


def write_json(obj: dict, path: str | os.PathLike) -> None:
    text = json.dumps(obj, indent=2, allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def write_roc_csv(roc: dict, path: str | os.PathLike) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["fpr", "tpr", "threshold"])
        for f, t, th in zip(roc["fpr"], roc["tpr"], roc["thresholds"]):
            writer.writerow([repr(f), repr(t), "inf" if th is None else repr(th)])
