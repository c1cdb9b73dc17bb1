"""Flat key-value run configuration.

Format: one ``key = value`` per line, ``#`` starts a comment. Values with
several numbers are space separated. Track lines are

    track_1 = linear <start_x> <start_y> <dir_x> <dir_y> <speed> <interval> <n>
    track_2 = circular <start_x> <start_y> <radius> <speed> <interval> <n>

(circular tracks run counterclockwise on the circle through the start
point, centered radius meters to its left along -x). If any ``ap_k`` or
``track_k`` key appears, the full set replaces the default one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .channel import (BandParams, ClusterGeometry, PropagationParams, TrackSpec,
                      default_geometry, default_params)
from .datasets import N_APS
from .evaluation import EvalConfig
from .labeling import Thresholds
from .svm import SvmParams


@dataclass(frozen=True)
class RunConfig:
    geometry: ClusterGeometry
    params: PropagationParams
    tracks: tuple[TrackSpec, ...]
    seed: int
    n_total: int
    thresholds: Thresholds
    svm: SvmParams
    eval: EvalConfig


def _ap_ring_position(k: int, radius: float = 200.0) -> tuple[float, float]:
    return (radius * math.cos(2.0 * math.pi * k / N_APS),
            radius * math.sin(2.0 * math.pi * k / N_APS))


def _ring_arc(ring_radius: float, theta_deg: float, n: int) -> TrackSpec:
    th = math.radians(theta_deg)
    return TrackSpec(shape="circular", radius=ring_radius, n_samples=n,
                     start=(ring_radius * math.cos(th), ring_radius * math.sin(th)))


def _ap_loop(ap_index: int, offset_m: float, radius: float, n: int) -> TrackSpec:
    """Circle of `radius` around the point `offset_m` inward of an AP."""
    ap = _ap_ring_position(ap_index)
    c = (ap[0] * (1.0 - offset_m / 200.0), ap[1] * (1.0 - offset_m / 200.0))
    norm = math.hypot(*c)
    start = (c[0] * (1.0 + radius / norm), c[1] * (1.0 + radius / norm))
    return TrackSpec(shape="circular", start=start, radius=radius, n_samples=n)


def _spoke(ap_index: int, start_d: float, n: int) -> TrackSpec:
    """Radial walk toward an AP, starting start_d meters from it."""
    ap = _ap_ring_position(ap_index)
    u = (ap[0] / 200.0, ap[1] / 200.0)
    s = 200.0 - start_d
    return TrackSpec(shape="linear", start=(s * u[0], s * u[1]), direction=u, n_samples=n)


def default_tracks() -> tuple[TrackSpec, ...]:
    """3800 samples over 36 short tracks in the 400 m square.

    Dwell is concentrated in bands where the mmWave coverage decision has
    a clear RSRP margin (close to APs, a coverage-edge strip, a far strip,
    the cluster center) plus radial spokes that cross the coverage edge
    transversally. The last 800 samples (the evaluation remainder) revisit
    band/AP combinations that also occur earlier, with fresh fading.
    """
    near = [(0, 30.0), (1, 30.0), (0, 31.0), (1, 29.0), (3, 30.0), (2, 30.0)]
    edge = [(0, 21.0), (1, 21.0), (2, 21.0), (0, 21.5), (1, 21.5), (2, 21.5), (3, 21.0)]
    far = [(1, 188.0), (2, 188.0), (4, 188.0), (1, 189.0), (2, 189.0), (4, 188.5), (0, 188.0)]
    tracks = [_ap_loop(k, off, 25.0, 100) for k, off in near]
    tracks += [_ap_loop(k, off, 2.5, 100) for k, off in edge]
    tracks += [_ring_arc(15.0, th, 100) for th in (0, 60, 120, 180, 240, 300)]
    tracks += [_ap_loop(k, off, 6.0, 100) for k, off in far]
    tracks += [_spoke(1, 205.0, 200), _spoke(0, 205.0, 200)]
    # evaluation remainder: twins of earlier zones, fresh randomness
    tracks += [
        _ap_loop(1, 31.0, 25.0, 100),
        _ap_loop(1, 22.0, 2.5, 100),
        _ap_loop(2, 22.0, 2.5, 100),
        _ring_arc(15.0, 90.0, 100),
        _ap_loop(2, 189.5, 6.0, 100),
        _ap_loop(4, 189.5, 6.0, 100),
        _spoke(1, 105.0, 100),
        _spoke(0, 105.0, 100),
    ]
    return tuple(tracks)


def default_run_config() -> RunConfig:
    return RunConfig(
        geometry=default_geometry(),
        params=default_params(),
        tracks=default_tracks(),
        seed=1,
        n_total=3800,
        thresholds=Thresholds(),
        svm=SvmParams(),
        eval=EvalConfig(),
    )


def parse_config_text(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key in out:
            raise ValueError(f"config line {lineno}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


def _parse_track(key: str, value: str) -> TrackSpec:
    parts = value.split()
    shape = parts[0] if parts else ""
    try:
        if shape == "linear":
            sx, sy, dx, dy, speed, interval, n = parts[1:]
            return TrackSpec(shape="linear", start=(float(sx), float(sy)),
                             direction=(float(dx), float(dy)), speed=float(speed),
                             sample_interval=float(interval), n_samples=int(n))
        if shape == "circular":
            sx, sy, radius, speed, interval, n = parts[1:]
            return TrackSpec(shape="circular", start=(float(sx), float(sy)),
                             radius=float(radius), speed=float(speed),
                             sample_interval=float(interval), n_samples=int(n))
    except ValueError as exc:
        raise ValueError(f"{key}: {exc}") from exc
    raise ValueError(f"{key}: expected 'linear ...' or 'circular ...', got {value!r}")


_BAND_FIELDS = {
    "tx_power_dbm": "tx_power_dbm",
    "antenna_gain_db": "antenna_gain_db",
    "nlos_gain_penalty_db": "nlos_gain_penalty_db",
    "shadowing_std_db": "shadowing_std_db",
    "k_los_mean_db": "k_los_mean_db",
    "k_los_std_db": "k_los_std_db",
    "k_nlos_mean_db": "k_nlos_mean_db",
    "k_nlos_std_db": "k_nlos_std_db",
    "los_corr_distance_m": "los_correlation_distance_m",
    "shadow_corr_los_m": "shadow_corr_los_m",
    "shadow_corr_nlos_m": "shadow_corr_nlos_m",
    "carrier_ghz": "carrier_frequency_ghz",
}


def run_config_from_mapping(kv: dict[str, str], base: RunConfig | None = None) -> RunConfig:
    """Overlay parsed key-value pairs on a base configuration."""
    cfg = base if base is not None else default_run_config()
    kv = dict(kv)

    def pop_float(key, current):
        return float(kv.pop(key)) if key in kv else current

    def pop_int(key, current):
        return int(kv.pop(key)) if key in kv else current

    seed = pop_int("seed", cfg.seed)
    n_total = pop_int("n_total", cfg.n_total)

    ap_keys = [k for k in kv if k.startswith("ap_") and k[3:].isdigit()]
    ap_positions = cfg.geometry.ap_positions
    if ap_keys:
        if sorted(ap_keys) != [f"ap_{i}" for i in range(1, N_APS + 1)]:
            raise ValueError(f"expected exactly ap_1..ap_{N_APS}, got {sorted(ap_keys)}")
        ap_positions = tuple(
            tuple(float(v) for v in kv.pop(f"ap_{i}").split()) for i in range(1, N_APS + 1)
        )
    geometry = ClusterGeometry(
        ap_positions=ap_positions,
        ap_height=pop_float("ap_height_m", cfg.geometry.ap_height),
        ue_height=pop_float("ue_height_m", cfg.geometry.ue_height),
    )

    def band(prefix: str, current: BandParams) -> BandParams:
        updates = {}
        for key, field_name in _BAND_FIELDS.items():
            full = f"{prefix}_{key}"
            if full in kv:
                updates[field_name] = float(kv.pop(full))
        return replace(current, **updates) if updates else current

    params = PropagationParams(
        band26=band("band26", cfg.params.band26),
        band28=band("band28", cfg.params.band28),
        shadow_band_correlation=pop_float("shadow_band_correlation",
                                          cfg.params.shadow_band_correlation),
    )

    track_keys = sorted((k for k in kv if k.startswith("track_") and k[6:].isdigit()),
                        key=lambda k: int(k[6:]))
    tracks = cfg.tracks
    if track_keys:
        tracks = tuple(_parse_track(k, kv.pop(k)) for k in track_keys)

    thresholds = Thresholds(k_th=pop_float("k_th", cfg.thresholds.k_th),
                            p_th=pop_float("p_th", cfg.thresholds.p_th))
    svm = SvmParams(
        kernel=kv.pop("svm_kernel", cfg.svm.kernel),
        c=pop_float("svm_c", cfg.svm.c),
        gamma=pop_float("svm_gamma", cfg.svm.gamma),
        tol=pop_float("svm_tol", cfg.svm.tol),
        max_passes=pop_int("svm_max_passes", cfg.svm.max_passes),
    )
    eval_cfg = EvalConfig(
        n_total=n_total,
        n_train_pool=pop_int("n_train_pool", cfg.eval.n_train_pool),
        size_start=pop_int("size_start", cfg.eval.size_start),
        size_step=pop_int("size_step", cfg.eval.size_step),
        window_l=pop_int("window_l", cfg.eval.window_l),
        as_valid_threshold=pop_float("as_valid_threshold", cfg.eval.as_valid_threshold),
        seed=seed,
    )
    if kv:
        raise ValueError(f"unknown config keys: {sorted(kv)}")
    return RunConfig(geometry=geometry, params=params, tracks=tracks, seed=seed,
                     n_total=n_total, thresholds=thresholds, svm=svm, eval=eval_cfg)


def load_run_config(path, base: RunConfig | None = None) -> RunConfig:
    with open(path) as fh:
        return run_config_from_mapping(parse_config_text(fh.read()), base=base)


def run_config_to_text(cfg: RunConfig) -> str:
    """Serialize a configuration back to the flat key-value format."""
    lines = [
        "# decouplab run configuration",
        f"seed = {cfg.seed}",
        f"n_total = {cfg.n_total}",
        "",
        f"ap_height_m = {cfg.geometry.ap_height!r}",
        f"ue_height_m = {cfg.geometry.ue_height!r}",
    ]
    for i, (x, y) in enumerate(cfg.geometry.ap_positions, start=1):
        lines.append(f"ap_{i} = {x!r} {y!r}")
    lines.append("")
    lines.append(f"shadow_band_correlation = {cfg.params.shadow_band_correlation!r}")
    for prefix, band in (("band26", cfg.params.band26), ("band28", cfg.params.band28)):
        for key, field_name in _BAND_FIELDS.items():
            lines.append(f"{prefix}_{key} = {getattr(band, field_name)!r}")
        lines.append("")
    for i, t in enumerate(cfg.tracks, start=1):
        if t.shape == "linear":
            lines.append(f"track_{i} = linear {t.start[0]!r} {t.start[1]!r} "
                         f"{t.direction[0]!r} {t.direction[1]!r} {t.speed!r} "
                         f"{t.sample_interval!r} {t.n_samples}")
        else:
            lines.append(f"track_{i} = circular {t.start[0]!r} {t.start[1]!r} "
                         f"{t.radius!r} {t.speed!r} {t.sample_interval!r} {t.n_samples}")
    lines += [
        "",
        f"k_th = {cfg.thresholds.k_th!r}",
        f"p_th = {cfg.thresholds.p_th!r}",
        "",
        f"svm_kernel = {cfg.svm.kernel}",
        f"svm_c = {cfg.svm.c!r}",
        f"svm_gamma = {cfg.svm.gamma!r}",
        f"svm_tol = {cfg.svm.tol!r}",
        f"svm_max_passes = {cfg.svm.max_passes}",
        "",
        f"n_train_pool = {cfg.eval.n_train_pool}",
        f"size_start = {cfg.eval.size_start}",
        f"size_step = {cfg.eval.size_step}",
        f"window_l = {cfg.eval.window_l}",
        f"as_valid_threshold = {cfg.eval.as_valid_threshold!r}",
    ]
    return "\n".join(lines) + "\n"
