"""Class-imbalance toolkit: resamplers, assessment metrics, a logistic
baseline and a synthetic data generator."""

from .dataset import (
    ClassCounts,
    Dataset,
    DatasetError,
    SplitSpec,
    class_counts,
    imbalance_ratio,
    load_csv,
    split,
    write_csv,
)
from .metrics import ConfusionMatrix, RocCurve, confusion_matrix, roc_curve, auc
from .model import LogisticModel, TrainConfig, fit, predict, predict_proba
from .resample import METHODS, ResampleOutcome, SamplerConfig, resample
from .synthgen import GenSpec, generate

__version__ = "0.1.0"
