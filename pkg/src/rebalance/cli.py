"""Command-line interface: ``rebalance {gen,resample,eval,pipeline}``.

Exit codes: 0 on success, 1 on runtime/data errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from . import report as rpt
from .dataset import Dataset, DatasetError, SplitSpec, load_csv, load_labels, write_csv
from .model import TrainConfig
from .resample import METHODS, STRATEGIES, SamplerConfig, resample
from .synthgen import GenSpec, generate

_LOGGER = logging.getLogger(__name__)


def _add_label_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--label", default="target", help="label column name (default: target)")
    p.add_argument("--positive", default="1", help="label value of the positive class")
    p.add_argument("--negative", default="0", help="label value of the negative class")


def _add_sampler_args(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--method", choices=METHODS, required=required)
    p.add_argument("--k", type=int, default=None, help="neighbours (SMOTE/ADASYN 5, ENN 3)")
    p.add_argument("--strategy", choices=STRATEGIES, default=None,
                   help="cleaner target: majority rows only, or both classes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rebalance", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a synthetic imbalanced dataset")
    g.add_argument("--neg", type=int, required=True)
    g.add_argument("--pos", type=int, required=True)
    g.add_argument("--dims", type=int, default=2)
    g.add_argument("--overlap", type=float, default=0.0)
    g.add_argument("--subclusters", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("resample", help="balance a dataset with one sampler")
    r.add_argument("-i", "--input", required=True)
    r.add_argument("-o", "--output", required=True)
    r.add_argument("--sidecar", default=None, help="JSON audit path (default: OUTPUT.json)")
    r.add_argument("--seed", type=int, default=0)
    _add_sampler_args(r, required=True)
    _add_label_args(r)
    r.set_defaults(func=cmd_resample)

    e = sub.add_parser("eval", help="score predictions against true labels")
    e.add_argument("--truth", required=True, help="CSV holding the true labels")
    e.add_argument("--predictions", required=True,
                   help="CSV with a 0/1 prediction column and/or a score column, same row order")
    e.add_argument("--pred-column", default="pred")
    e.add_argument("--score-column", default="score")
    e.add_argument("--threshold", type=float, default=0.5,
                   help="cut-off applied to scores when no prediction column exists")
    e.add_argument("-o", "--output", required=True, help="report JSON path")
    e.add_argument("--roc", default=None, help="also write ROC points as CSV")
    _add_label_args(e)
    e.set_defaults(func=cmd_eval)

    p = sub.add_parser("pipeline", help="split, resample, fit, evaluate, report")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True, help="report JSON path")
    p.add_argument("--split", type=float, default=0.3, help="test fraction (default 0.3)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stratified", action="store_true")
    _add_sampler_args(p, required=False)
    p.add_argument("--resample-full", action="store_true",
                   help="resample the whole dataset before splitting")
    p.add_argument("--scale-features", action="store_true",
                   help="standardize features before resampling and fitting")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--l2", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--roc", default=None, help="also write ROC points as CSV")
    p.add_argument("--model-out", default=None, help="also write the fitted model as JSON")
    _add_label_args(p)
    p.set_defaults(func=cmd_pipeline)
    return parser


def _load(args, path) -> Dataset:
    return load_csv(path, args.label, args.positive, args.negative)


def _print_block(block: dict) -> None:
    for key, value in block.items():
        print(f"{key}\t{value}")


def cmd_gen(args) -> int:
    spec = GenSpec(
        n_negative=args.neg,
        n_positive=args.pos,
        dims=args.dims,
        overlap=args.overlap,
        minority_subclusters=args.subclusters,
        seed=args.seed,
    )
    ds = generate(spec)
    write_csv(ds, args.output)
    print(f"wrote {ds.n_rows} rows to {args.output}")
    return 0


def cmd_resample(args) -> int:
    ds = _load(args, args.input)
    cfg = SamplerConfig(seed=args.seed, k_neighbors=args.k, strategy=args.strategy)
    outcome = resample(ds, args.method, cfg)
    write_csv(outcome.data, args.output)
    sidecar = args.sidecar or f"{args.output}.json"
    rpt.write_json(outcome.sidecar(), sidecar)
    for w in outcome.warnings:
        _LOGGER.warning(w)
    b, a = outcome.before, outcome.after
    print(f"before\t{b.n_negative}\t{b.n_positive}")
    print(f"after\t{a.n_negative}\t{a.n_positive}")
    return 0


def _read_prediction_columns(path, pred_column, score_column):
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        fields = [f.strip() for f in reader.fieldnames or []]
        reader.fieldnames = fields
        has_pred, has_score = pred_column in fields, score_column in fields
        if not (has_pred or has_score):
            raise DatasetError(
                f"{path}: needs a {pred_column!r} or {score_column!r} column"
            )
        preds, scores = [], []
        for row_no, row in enumerate(reader, start=2):
            try:
                if has_pred:
                    preds.append(int(float(row[pred_column])))
                if has_score:
                    scores.append(float(row[score_column]))
            except (TypeError, ValueError):
                raise DatasetError(f"{path}: row {row_no}: unparseable prediction") from None
    return (np.array(preds) if has_pred else None,
            np.array(scores, dtype=np.float64) if has_score else None)


def cmd_eval(args) -> int:
    if not 0.0 < args.threshold < 1.0:
        raise DatasetError(f"threshold must lie in (0, 1), got {args.threshold}")
    truth = load_labels(args.truth, args.label, args.positive, args.negative)
    pred, scores = _read_prediction_columns(args.predictions, args.pred_column, args.score_column)
    n = truth.shape[0]
    for name, col in (("predictions", pred), ("scores", scores)):
        if col is not None and col.shape[0] != n:
            raise DatasetError(f"{col.shape[0]} {name} for {n} truth rows")
    threshold = None
    if pred is None:
        threshold = args.threshold
        pred = (scores >= threshold).astype(np.int64)
    report = rpt.evaluation_report(truth, pred, scores, threshold)
    rpt.write_json(report, args.output)
    if args.roc and report["roc"] is not None:
        rpt.write_roc_csv(report["roc"], args.roc)
    _print_block(report["metrics"])
    return 0


def cmd_pipeline(args) -> int:
    try:
        ds = _load(args, args.input)
        opts = rpt.PipelineOptions(
            split=SplitSpec(test_fraction=args.split, seed=args.seed, stratified=args.stratified),
            method=args.method,
            sampler=SamplerConfig(seed=args.seed, k_neighbors=args.k, strategy=args.strategy),
            train=TrainConfig(
                learning_rate=args.lr,
                max_iterations=args.max_iter,
                l2_penalty=args.l2,
                tolerance=args.tol,
            ),
            threshold=args.threshold,
            resample_full=args.resample_full,
            scale_features=args.scale_features,
        )
        if not 0.0 < opts.threshold < 1.0:
            raise ValueError(f"threshold must lie in (0, 1), got {opts.threshold}")
    except (ValueError, OSError) as exc:
        raise rpt.StageError("load", exc) from exc
    report, model = rpt.run_pipeline(ds, opts)
    rpt.write_json(report, args.output)
    if args.roc and report["roc"] is not None:
        rpt.write_roc_csv(report["roc"], args.roc)
    if args.model_out:
        Path(args.model_out).write_text(model.to_json() + "\n", encoding="utf-8")
    for w in report["warnings"]:
        _LOGGER.warning(w)
    _print_block(report["metrics"])
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"rebalance {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
