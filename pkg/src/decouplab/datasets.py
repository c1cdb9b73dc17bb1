"""Measurement samples and the dataset CSV interchange format.

One sample is a dual-band measurement report for a single UE time step:
5 Rician K-factors and 5 RSRPs per band (one per access point), the UE
position, the per-AP line-of-sight flags, and an optional decoupling class.

CSV schema (fixed column order, label empty while unlabeled)::

    sample_id,track_id,x_m,y_m,k26_1,...,k26_5,p26_1,...,p26_5,
    k28_1,...,k28_5,p28_1,...,p28_5,label

Floats are written with ``repr`` so a read-back round-trips bit exactly.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

import numpy as np

N_APS = 5

BAND_SUB6 = "2.6GHz"
BAND_MMWAVE = "28GHz"

CSV_COLUMNS = (
    ["sample_id", "track_id", "x_m", "y_m"]
    + [f"k26_{i}" for i in range(1, N_APS + 1)]
    + [f"p26_{i}" for i in range(1, N_APS + 1)]
    + [f"k28_{i}" for i in range(1, N_APS + 1)]
    + [f"p28_{i}" for i in range(1, N_APS + 1)]
    + ["label"]
)
CSV_HEADER = ",".join(CSV_COLUMNS)


class DataFormatError(Exception):
    """Raised when an input file does not match the expected schema."""


def _check_vector(name: str, values: Sequence[float]) -> tuple[float, ...]:
    vec = tuple(float(v) for v in values)
    if len(vec) != N_APS:
        raise ValueError(f"{name} must have exactly {N_APS} entries, got {len(vec)}")
    if not all(math.isfinite(v) for v in vec):
        raise ValueError(f"{name} must be finite, got {vec}")
    return vec


@dataclass(frozen=True)
class MeasurementSample:
    """Per-step dual-band report across the five APs."""

    sample_id: int
    track_id: int
    position: tuple[float, float]
    k26: tuple[float, ...]
    p26: tuple[float, ...]
    k28: tuple[float, ...]
    p28: tuple[float, ...]
    los26: Optional[tuple[bool, ...]] = None
    los28: Optional[tuple[bool, ...]] = None
    label: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "position", (float(self.position[0]), float(self.position[1])))
        for name in ("k26", "p26", "k28", "p28"):
            object.__setattr__(self, name, _check_vector(name, getattr(self, name)))
        for name in ("los26", "los28"):
            flags = getattr(self, name)
            if flags is not None:
                flags = tuple(bool(f) for f in flags)
                if len(flags) != N_APS:
                    raise ValueError(f"{name} must have exactly {N_APS} entries")
                object.__setattr__(self, name, flags)
        if self.label is not None and self.label not in (1, 2, 3, 4):
            raise ValueError(f"label must be in 1..4, got {self.label}")

    def with_label(self, label: int) -> "MeasurementSample":
        return replace(self, label=int(label))


def write_samples_csv(samples: Iterable[MeasurementSample], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for s in samples:
            fields = [str(s.sample_id), str(s.track_id), repr(s.position[0]), repr(s.position[1])]
            for vec in (s.k26, s.p26, s.k28, s.p28):
                fields.extend(repr(v) for v in vec)
            fields.append("" if s.label is None else str(s.label))
            fh.write(",".join(fields) + "\n")


def read_samples_csv(path, require_labels: bool = False) -> list[MeasurementSample]:
    """Parse a dataset CSV, validating the schema column by column."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames
        if header is None:
            raise DataFormatError(f"{path}: empty file, expected header {CSV_HEADER!r}")
        for col in CSV_COLUMNS:
            if col not in header:
                raise DataFormatError(f"{path}: missing column {col!r}")
        samples = []
        for lineno, row in enumerate(reader, start=2):
            try:
                label_text = (row["label"] or "").strip()
                label = int(label_text) if label_text else None
                if label is None and require_labels:
                    raise DataFormatError(f"{path}:{lineno}: missing label")
                samples.append(
                    MeasurementSample(
                        sample_id=int(row["sample_id"]),
                        track_id=int(row["track_id"]),
                        position=(float(row["x_m"]), float(row["y_m"])),
                        k26=[float(row[f"k26_{i}"]) for i in range(1, N_APS + 1)],
                        p26=[float(row[f"p26_{i}"]) for i in range(1, N_APS + 1)],
                        k28=[float(row[f"k28_{i}"]) for i in range(1, N_APS + 1)],
                        p28=[float(row[f"p28_{i}"]) for i in range(1, N_APS + 1)],
                        label=label,
                    )
                )
            except DataFormatError:
                raise
            except (TypeError, ValueError) as exc:
                raise DataFormatError(f"{path}:{lineno}: bad row ({exc})") from exc
    return samples


def sub6_features(samples: Sequence[MeasurementSample]) -> np.ndarray:
    """The 10 classifier features per sample: 5 K-factors then 5 RSRPs at 2.6 GHz."""
    return np.array([s.k26 + s.p26 for s in samples], dtype=float).reshape(len(samples), 2 * N_APS)


def labels_array(samples: Sequence[MeasurementSample]) -> np.ndarray:
    out = np.empty(len(samples), dtype=int)
    for i, s in enumerate(samples):
        if s.label is None:
            raise ValueError(f"sample {s.sample_id} is unlabeled")
        out[i] = s.label
    return out
