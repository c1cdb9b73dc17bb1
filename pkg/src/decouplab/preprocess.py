"""Shuffling, splitting and standardization of the 10-D sub-6 GHz features."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .datasets import MeasurementSample, labels_array, sub6_features
from .rng import STREAM_SHUFFLE, stream

N_FEATURES = 10


@dataclass(frozen=True)
class FeatureMatrix:
    """Immutable (n, 10) feature rows with aligned class labels."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=int)
        if x.ndim != 2 or x.shape[1] != N_FEATURES:
            raise ValueError(f"feature matrix must be (n, {N_FEATURES}), got {x.shape}")
        if y.shape != (x.shape[0],):
            raise ValueError("labels must align with rows")
        if len(y) and not np.isin(y, (1, 2, 3, 4)).all():
            raise ValueError("labels must be in 1..4")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __len__(self):
        return self.x.shape[0]


def feature_matrix(samples: Sequence[MeasurementSample]) -> FeatureMatrix:
    return FeatureMatrix(sub6_features(samples), labels_array(samples))


def permutation(n: int, seed: int) -> np.ndarray:
    """Seeded Fisher-Yates permutation of range(n)."""
    rng = stream(seed, STREAM_SHUFFLE)
    idx = np.arange(n)
    for i in range(n - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        idx[i], idx[j] = idx[j], idx[i]
    return idx


def shuffle(fm: FeatureMatrix, seed: int) -> FeatureMatrix:
    idx = permutation(len(fm), seed)
    return FeatureMatrix(fm.x[idx], fm.y[idx])


def split(fm: FeatureMatrix, n_train: int) -> tuple[FeatureMatrix, FeatureMatrix]:
    """First n_train rows for training, remainder (original order) for test."""
    if not 0 < n_train < len(fm):
        raise ValueError(f"n_train must be in 1..{len(fm) - 1}, got {n_train}")
    return (FeatureMatrix(fm.x[:n_train], fm.y[:n_train]),
            FeatureMatrix(fm.x[n_train:], fm.y[n_train:]))


@dataclass(frozen=True)
class ScalerParams:
    """Per-column mean and population std; constant columns keep std 1."""

    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        std = np.asarray(self.std, dtype=float)
        if mean.shape != std.shape or mean.ndim != 1:
            raise ValueError("mean and std must be matching 1-D vectors")
        if not (std > 0).all():
            raise ValueError("std must be positive componentwise")
        mean.setflags(write=False)
        std.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "std", std)


def scaler_fit(x: np.ndarray) -> ScalerParams:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError("scaler_fit needs a nonempty 2-D matrix")
    mean = x.mean(axis=0)
    std = x.std(axis=0)  # population (1/n) convention
    std = np.where(std > 0.0, std, 1.0)
    return ScalerParams(mean=mean, std=std)


def scaler_apply(params: ScalerParams, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != params.mean.shape[0]:
        raise ValueError(f"expected {params.mean.shape[0]} columns, got {x.shape[-1]}")
    return (x - params.mean) / params.std


def scaler_invert(params: ScalerParams, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.shape[-1] != params.mean.shape[0]:
        raise ValueError(f"expected {params.mean.shape[0]} columns, got {z.shape[-1]}")
    return z * params.std + params.mean


def scaler_save(params: ScalerParams, path) -> None:
    with open(path, "w") as fh:
        fh.write("mean = " + " ".join(repr(v) for v in params.mean) + "\n")
        fh.write("std = " + " ".join(repr(v) for v in params.std) + "\n")


def scaler_load(path) -> ScalerParams:
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, rest = line.partition("=")
            values[key.strip()] = np.array([float(v) for v in rest.split()])
    return ScalerParams(mean=values["mean"], std=values["std"])
