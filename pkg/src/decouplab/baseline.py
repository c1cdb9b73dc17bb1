"""Fixed-threshold blind decoupling benchmark.

The classical scheme never trains: it estimates the mean cross-band
offsets of K-factor and RSRP once, shifts the mmWave labeling thresholds
into the 2.6 GHz domain, and applies the same two-gate decision table as
the labeler. Offsets are stored with the (28 GHz minus 2.6 GHz) sign
convention, so a threshold t on a 28 GHz quantity becomes t - offset when
compared against the 2.6 GHz counterpart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .datasets import N_APS, MeasurementSample
from .evaluation import EvalConfig, prepare_pool_and_test, valid_fraction, window_scores
from .labeling import Thresholds, class_from_gates
from .preprocess import feature_matrix


@dataclass(frozen=True)
class BandOffsets:
    """Dataset-mean (28 GHz - 2.6 GHz) differences, per metric."""

    k_offset: float
    p_offset: float

    def __post_init__(self):
        if not (math.isfinite(self.k_offset) and math.isfinite(self.p_offset)):
            raise ValueError("offsets must be finite")


def estimate_offsets(samples: Sequence[MeasurementSample]) -> BandOffsets:
    """Mean over samples and APs of K28-K26 and P28-P26."""
    if not samples:
        raise ValueError("cannot estimate offsets from an empty dataset")
    k = np.array([np.subtract(s.k28, s.k26) for s in samples])
    p = np.array([np.subtract(s.p28, s.p26) for s in samples])
    return BandOffsets(k_offset=float(k.mean()), p_offset=float(p.mean()))


def threshold_classify(k26, p26, th: Thresholds, off: BandOffsets) -> int:
    """Blind class decision from 2.6 GHz features with translated thresholds."""
    k26 = np.asarray(k26, dtype=float)
    p26 = np.asarray(p26, dtype=float)
    los_gate = bool(k26.max() > th.k_th - off.k_offset)
    coverage_gate = bool(p26.max() > th.p_th - off.p_offset)
    return int(class_from_gates(los_gate, coverage_gate))


def classify_features(x: np.ndarray, th: Thresholds, off: BandOffsets) -> np.ndarray:
    """Vectorized threshold_classify over (n, 10) sub-6 GHz feature rows."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[1] != 2 * N_APS:
        raise ValueError(f"expected {2 * N_APS} feature columns, got {x.shape[1]}")
    los = x[:, :N_APS].max(axis=1) > th.k_th - off.k_offset
    cov = x[:, N_APS:].max(axis=1) > th.p_th - off.p_offset
    return np.where(los, np.where(cov, 3, 2), np.where(cov, 4, 1))


@dataclass(frozen=True)
class BaselineResult:
    dsr: float
    accuracy: float
    n_windows: int
    offsets: BandOffsets


def baseline_dsr(samples: Sequence[MeasurementSample], th: Thresholds,
                 cfg: EvalConfig, offsets: Optional[BandOffsets] = None) -> BaselineResult:
    """Benchmark DSR/accuracy on the same windowed test protocol as the sweep.

    The result has no training-size dependence: the benchmark curve is a
    constant level. Offsets default to the whole-dataset estimate.
    """
    off = offsets if offsets is not None else estimate_offsets(samples)
    _, test = prepare_pool_and_test(feature_matrix(samples), cfg)
    scores = window_scores(test.y, classify_features(test.x, th, off), cfg.window_l)
    return BaselineResult(
        dsr=valid_fraction(scores, cfg.as_valid_threshold),
        accuracy=float(scores.mean()),
        n_windows=len(scores),
        offsets=off,
    )


def confusion_matrix(y_true, y_pred, classes=(1, 2, 3, 4)) -> np.ndarray:
    """Counts[i, j] = samples of classes[i] predicted as classes[j]."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise ValueError("label vectors must be equal length")
    index = {c: k for k, c in enumerate(classes)}
    out = np.zeros((len(classes), len(classes)), dtype=int)
    for t, p in zip(y_true, y_pred):
        out[index[int(t)], index[int(p)]] += 1
    return out
