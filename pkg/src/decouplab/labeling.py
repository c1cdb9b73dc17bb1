"""Decoupling classes from mmWave measurements.

Two gates on the 28 GHz report decide the class: whether any AP looks LOS
(max K-factor above k_th) and whether mmWave downlink coverage exists
(max RSRP above p_th). Both comparisons are strict.

    LOS gate  coverage gate  class  uplink      downlink
    no        no             1      2.6 GHz     2.6 GHz
    yes       no             2      28 GHz      2.6 GHz
    yes       yes            3      28 GHz      28 GHz
    no        yes            4      2.6 GHz     28 GHz
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import NamedTuple, Sequence

import numpy as np

from .datasets import BAND_MMWAVE, BAND_SUB6, MeasurementSample


class DecouplingClass(IntEnum):
    SUB6_BOTH = 1
    MMWAVE_UPLINK = 2
    MMWAVE_BOTH = 3
    MMWAVE_DOWNLINK = 4


UL_BAND = {
    DecouplingClass.SUB6_BOTH: BAND_SUB6,
    DecouplingClass.MMWAVE_UPLINK: BAND_MMWAVE,
    DecouplingClass.MMWAVE_BOTH: BAND_MMWAVE,
    DecouplingClass.MMWAVE_DOWNLINK: BAND_SUB6,
}
DL_BAND = {
    DecouplingClass.SUB6_BOTH: BAND_SUB6,
    DecouplingClass.MMWAVE_UPLINK: BAND_SUB6,
    DecouplingClass.MMWAVE_BOTH: BAND_MMWAVE,
    DecouplingClass.MMWAVE_DOWNLINK: BAND_MMWAVE,
}


@dataclass(frozen=True)
class Thresholds:
    k_th: float = 3.0
    p_th: float = -115.0

    def __post_init__(self):
        if not (np.isfinite(self.k_th) and np.isfinite(self.p_th)):
            raise ValueError("thresholds must be finite")


def class_from_gates(los_gate: bool, coverage_gate: bool) -> DecouplingClass:
    if los_gate:
        return DecouplingClass.MMWAVE_BOTH if coverage_gate else DecouplingClass.MMWAVE_UPLINK
    return DecouplingClass.MMWAVE_DOWNLINK if coverage_gate else DecouplingClass.SUB6_BOTH


def label_sample(sample: MeasurementSample, th: Thresholds = Thresholds()) -> DecouplingClass:
    return class_from_gates(max(sample.k28) > th.k_th, max(sample.p28) > th.p_th)


def label_dataset(samples: Sequence[MeasurementSample],
                  th: Thresholds = Thresholds()) -> list[MeasurementSample]:
    """Label every sample, preserving order."""
    return [s.with_label(int(label_sample(s, th))) for s in samples]


class TargetSelection(NamedTuple):
    ul_ap: int
    ul_band: str
    dl_ap: int
    dl_band: str


def select_target_aps(sample: MeasurementSample, cls: DecouplingClass) -> TargetSelection:
    """Best APs inside a decided class: uplink by K-factor, downlink by RSRP.

    Ties go to the lowest AP index (np.argmax already does).
    """
    cls = DecouplingClass(cls)
    k = {BAND_SUB6: sample.k26, BAND_MMWAVE: sample.k28}
    p = {BAND_SUB6: sample.p26, BAND_MMWAVE: sample.p28}
    ul_band, dl_band = UL_BAND[cls], DL_BAND[cls]
    return TargetSelection(
        ul_ap=int(np.argmax(k[ul_band])), ul_band=ul_band,
        dl_ap=int(np.argmax(p[dl_band])), dl_band=dl_band,
    )
