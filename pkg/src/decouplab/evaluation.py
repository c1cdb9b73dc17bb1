"""Training-size sweep producing the decoupling-success-rate and accuracy curves.

Protocol per sweep: the first n_train_pool rows form the training pool and
are shuffled once; the remaining rows are the test set, kept in original
order and cut into consecutive windows of window_l rows (leftover rows are
dropped). For each training size (a growing prefix of the shuffled pool) a
fresh one-vs-one SVM is trained, every window gets an accuracy score, and
the DSR is the fraction of windows scoring strictly above the validity
threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .datasets import MeasurementSample
from .preprocess import FeatureMatrix, feature_matrix, shuffle, split
from .svm import SvmParams, accuracy_score, predict, train_ovo


@dataclass(frozen=True)
class EvalConfig:
    n_total: int = 3800
    n_train_pool: int = 3000
    size_start: int = 50
    size_step: int = 50
    window_l: int = 50
    as_valid_threshold: float = 0.9
    seed: int = 0

    def __post_init__(self):
        if self.size_start < 1 or self.size_step < 1:
            raise ValueError("size_start and size_step must be >= 1")
        if not 0 < self.n_train_pool < self.n_total:
            raise ValueError("need 0 < n_train_pool < n_total")
        if self.window_l < 1:
            raise ValueError("window_l must be >= 1")
        if not 0.0 < self.as_valid_threshold <= 1.0:
            raise ValueError("as_valid_threshold must be in (0, 1]")

    @property
    def n_windows(self) -> int:
        return (self.n_total - self.n_train_pool) // self.window_l

    def sizes(self) -> range:
        return range(self.size_start, self.n_train_pool + 1, self.size_step)


@dataclass(frozen=True)
class Curve:
    """Evaluation output keyed by training-set size, values in [0, 1]."""

    sizes: tuple[int, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        values = tuple(float(v) for v in self.values)
        if len(sizes) != len(values):
            raise ValueError("sizes and values must align")
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ValueError("sizes must be strictly increasing")
        if any(not 0.0 <= v <= 1.0 for v in values):
            raise ValueError("curve values must lie in [0, 1]")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "values", values)

    def value_at(self, size: int) -> float:
        return self.values[self.sizes.index(size)]


DsrCurve = Curve
AccuracyCurve = Curve


def window_scores(y_true: np.ndarray, y_pred: np.ndarray, window_l: int) -> np.ndarray:
    """Accuracy score of each complete window; trailing partial window dropped."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise ValueError("prediction length mismatch")
    n_windows = len(y_true) // window_l
    return np.array([
        accuracy_score(y_true[w * window_l:(w + 1) * window_l],
                       y_pred[w * window_l:(w + 1) * window_l])
        for w in range(n_windows)
    ])


def valid_fraction(scores: np.ndarray, threshold: float) -> float:
    """Fraction of windows whose score strictly exceeds the threshold."""
    scores = np.asarray(scores)
    return float(np.sum(scores > threshold)) / len(scores)


def prepare_pool_and_test(fm: FeatureMatrix, cfg: EvalConfig
                          ) -> tuple[FeatureMatrix, FeatureMatrix]:
    """Shuffled training pool and untouched windowed test remainder."""
    if len(fm) != cfg.n_total:
        raise ValueError(f"dataset has {len(fm)} rows, config expects {cfg.n_total}")
    if cfg.n_windows < 1:
        raise ValueError("window_l exceeds the test remainder")
    pool, test = split(fm, cfg.n_train_pool)
    used = cfg.n_windows * cfg.window_l
    test = FeatureMatrix(test.x[:used], test.y[:used])
    return shuffle(pool, cfg.seed), test


def run_dsr_sweep(samples: Sequence[MeasurementSample], svm_params: SvmParams,
                  cfg: EvalConfig) -> tuple[DsrCurve, AccuracyCurve]:
    """Sweep training sizes; returns (DSR curve, mean window-accuracy curve)."""
    pool, test = prepare_pool_and_test(feature_matrix(samples), cfg)
    sizes, dsr_vals, acc_vals = [], [], []
    for size in cfg.sizes():
        model = train_ovo(pool.x[:size], pool.y[:size], svm_params)
        scores = window_scores(test.y, predict(model, test.x), cfg.window_l)
        sizes.append(size)
        dsr_vals.append(valid_fraction(scores, cfg.as_valid_threshold))
        acc_vals.append(float(scores.mean()))
    return Curve(tuple(sizes), tuple(dsr_vals)), Curve(tuple(sizes), tuple(acc_vals))


def run_kernel_comparison(samples: Sequence[MeasurementSample], cfg: EvalConfig,
                          base_params: SvmParams = SvmParams()
                          ) -> tuple[AccuracyCurve, AccuracyCurve]:
    """Same protocol under the RBF and the linear kernel; returns (rbf, linear)."""
    _, acc_rbf = run_dsr_sweep(samples, replace(base_params, kernel="rbf"), cfg)
    _, acc_lin = run_dsr_sweep(samples, replace(base_params, kernel="linear"), cfg)
    return acc_rbf, acc_lin
