"""Command-line pipeline: synth, label, train, predict, eval, baseline, pca,
compare, and the full deterministic repro chain.

Exit codes: 0 success, 2 usage error, 3 data/parameter error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .baseline import baseline_dsr, classify_features, confusion_matrix, estimate_offsets
from .channel import synth_dataset
from .config import RunConfig, default_run_config, load_run_config, run_config_to_text
from .datasets import (DataFormatError, labels_array, read_samples_csv, sub6_features,
                       write_samples_csv)
from .evaluation import EvalConfig, run_dsr_sweep
from .labeling import Thresholds, label_dataset
from .pca import pca_fit, pca_project
from .preprocess import feature_matrix, scaler_apply, scaler_fit, shuffle
from .svm import SvmParams, load_model, predict, save_model, train_ovo


def _load_config(args) -> RunConfig:
    cfg = default_run_config()
    if getattr(args, "config", None):
        cfg = load_run_config(args.config, base=cfg)
    return cfg


def _override(value, fallback):
    return fallback if value is None else value


def _thresholds(args, cfg: RunConfig) -> Thresholds:
    return Thresholds(k_th=_override(args.k_th, cfg.thresholds.k_th),
                      p_th=_override(args.p_th, cfg.thresholds.p_th))


def _svm_params(args, cfg: RunConfig) -> SvmParams:
    return SvmParams(
        kernel=_override(getattr(args, "kernel", None), cfg.svm.kernel),
        c=_override(args.c, cfg.svm.c),
        gamma=_override(args.gamma, cfg.svm.gamma),
        tol=_override(args.tol, cfg.svm.tol),
        max_passes=_override(args.max_passes, cfg.svm.max_passes),
    )


def _eval_config(args, cfg: RunConfig, n_total: int) -> EvalConfig:
    return EvalConfig(
        n_total=n_total,
        n_train_pool=_override(args.n_train_pool, cfg.eval.n_train_pool),
        size_start=_override(args.size_start, cfg.eval.size_start),
        size_step=_override(args.size_step, cfg.eval.size_step),
        window_l=_override(args.window, cfg.eval.window_l),
        as_valid_threshold=_override(args.as_threshold, cfg.eval.as_valid_threshold),
        seed=_override(args.seed, cfg.seed),
    )


def _write_rows(path, header: str, rows) -> None:
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(str(v) if isinstance(v, (int, np.integer)) else repr(float(v))
                              for v in row) + "\n")


# --- subcommand handlers ----------------------------------------------------

def cmd_synth(args) -> int:
    cfg = _load_config(args)
    seed = _override(args.seed, cfg.seed)
    samples = synth_dataset(cfg.geometry, cfg.tracks, cfg.params, seed,
                            expected_n=cfg.n_total)
    write_samples_csv(samples, args.out)
    print(f"wrote {len(samples)} samples to {args.out}")
    return 0


def cmd_label(args) -> int:
    cfg = _load_config(args)
    samples = read_samples_csv(args.infile)
    labeled = label_dataset(samples, _thresholds(args, cfg))
    write_samples_csv(labeled, args.out)
    hist = np.bincount([s.label for s in labeled], minlength=5)[1:]
    print(f"labeled {len(labeled)} samples to {args.out}; class histogram {hist.tolist()}")
    return 0


def cmd_train(args) -> int:
    cfg = _load_config(args)
    samples = read_samples_csv(args.infile, require_labels=True)
    fm = feature_matrix(samples)
    n_train = _override(args.n_train, cfg.eval.n_train_pool)
    if not 0 < n_train <= len(fm):
        raise ValueError(f"--n-train must be in 1..{len(fm)}, got {n_train}")
    pool = shuffle(type(fm)(fm.x[:n_train], fm.y[:n_train]),
                   _override(args.seed, cfg.seed))
    model = train_ovo(pool.x, pool.y, _svm_params(args, cfg))
    save_model(model, args.model_out)
    print(f"trained on {n_train} samples, {len(model.binaries)} binary classifiers, "
          f"model saved to {args.model_out}")
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    samples = read_samples_csv(args.infile)
    preds = predict(model, sub6_features(samples))
    write_samples_csv([s.with_label(int(p)) for s, p in zip(samples, preds)], args.out)
    print(f"predicted {len(samples)} samples to {args.out}")
    return 0


def cmd_eval(args) -> int:
    cfg = _load_config(args)
    samples = read_samples_csv(args.infile, require_labels=True)
    ecfg = _eval_config(args, cfg, len(samples))
    dsr, acc = run_dsr_sweep(samples, _svm_params(args, cfg), ecfg)
    _write_rows(args.out, "n_train,dsr,mean_accuracy",
                zip(dsr.sizes, dsr.values, acc.values))
    print(f"evaluated {len(dsr.sizes)} training sizes to {args.out}")
    return 0


def cmd_baseline(args) -> int:
    cfg = _load_config(args)
    samples = read_samples_csv(args.infile, require_labels=True)
    ecfg = _eval_config(args, cfg, len(samples))
    th = _thresholds(args, cfg)
    result = baseline_dsr(samples, th, ecfg)
    sizes = list(ecfg.sizes())
    _write_rows(args.out, "n_train,dsr,accuracy",
                ((s, result.dsr, result.accuracy) for s in sizes))
    y_pred = classify_features(feature_matrix(samples).x, th, result.offsets)
    print(f"offsets: k={result.offsets.k_offset:.3f} dB, p={result.offsets.p_offset:.3f} dB")
    print(f"baseline dsr={result.dsr:.4f} accuracy={result.accuracy:.4f} "
          f"over {result.n_windows} windows")
    print("confusion matrix (rows true 1..4, cols predicted):")
    for row in confusion_matrix(labels_array(samples), y_pred):
        print("  " + " ".join(f"{v:6d}" for v in row))
    return 0


def cmd_pca(args) -> int:
    samples = read_samples_csv(args.infile, require_labels=True)
    x = sub6_features(samples)
    z = scaler_apply(scaler_fit(x), x)
    coords = pca_project(pca_fit(z, n_components=3), z)
    _write_rows(args.out, "pc1,pc2,pc3,label",
                ((c[0], c[1], c[2], s.label) for c, s in zip(coords, samples)))
    print(f"projected {len(samples)} samples to {args.out}")
    return 0


def cmd_compare(args) -> int:
    cfg = _load_config(args)
    samples = read_samples_csv(args.infile, require_labels=True)
    ecfg = _eval_config(args, cfg, len(samples))
    base = _svm_params(args, cfg)
    _, acc_rbf = run_dsr_sweep(samples, replace(base, kernel="rbf"), ecfg)
    _, acc_lin = run_dsr_sweep(samples, replace(base, kernel="linear"), ecfg)
    _write_rows(args.out, "n_train,acc_rbf,acc_linear",
                zip(acc_rbf.sizes, acc_rbf.values, acc_lin.values))
    print(f"compared kernels over {len(acc_rbf.sizes)} training sizes to {args.out}")
    return 0


def cmd_repro(args) -> int:
    """Full deterministic chain; writes every curve CSV into --out-dir."""
    cfg = _load_config(args)
    seed = _override(args.seed, cfg.seed)
    cfg = replace(cfg, seed=seed, eval=replace(cfg.eval, seed=seed))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    (out / "run_config.txt").write_text(run_config_to_text(cfg))
    samples = synth_dataset(cfg.geometry, cfg.tracks, cfg.params, seed,
                            expected_n=cfg.n_total)
    write_samples_csv(samples, out / "dataset.csv")
    labeled = label_dataset(samples, cfg.thresholds)
    write_samples_csv(labeled, out / "labeled.csv")

    dsr_rbf, acc_rbf = run_dsr_sweep(labeled, replace(cfg.svm, kernel="rbf"), cfg.eval)
    _write_rows(out / "dsr_rbf.csv", "n_train,dsr,mean_accuracy",
                zip(dsr_rbf.sizes, dsr_rbf.values, acc_rbf.values))
    dsr_lin, acc_lin = run_dsr_sweep(labeled, replace(cfg.svm, kernel="linear"), cfg.eval)
    _write_rows(out / "dsr_linear.csv", "n_train,dsr,mean_accuracy",
                zip(dsr_lin.sizes, dsr_lin.values, acc_lin.values))
    _write_rows(out / "compare.csv", "n_train,acc_rbf,acc_linear",
                zip(acc_rbf.sizes, acc_rbf.values, acc_lin.values))

    result = baseline_dsr(labeled, cfg.thresholds, cfg.eval)
    _write_rows(out / "baseline.csv", "n_train,dsr,accuracy",
                ((s, result.dsr, result.accuracy) for s in cfg.eval.sizes()))

    fm = feature_matrix(labeled)
    pool = shuffle(type(fm)(fm.x[:cfg.eval.n_train_pool], fm.y[:cfg.eval.n_train_pool]),
                   seed)
    model = train_ovo(pool.x, pool.y, replace(cfg.svm, kernel="rbf"))
    save_model(model, out / "model.txt")

    x = fm.x
    z = scaler_apply(scaler_fit(x), x)
    coords = pca_project(pca_fit(z, n_components=3), z)
    _write_rows(out / "pca.csv", "pc1,pc2,pc3,label",
                ((c[0], c[1], c[2], int(lab)) for c, lab in zip(coords, fm.y)))

    off = estimate_offsets(labeled)
    summary = [
        f"seed = {seed}",
        f"n_samples = {len(labeled)}",
        f"k_offset_db = {off.k_offset!r}",
        f"p_offset_db = {off.p_offset!r}",
        f"baseline_dsr = {result.dsr!r}",
        f"baseline_accuracy = {result.accuracy!r}",
        f"rbf_final_accuracy = {acc_rbf.values[-1]!r}",
        f"linear_final_accuracy = {acc_lin.values[-1]!r}",
        f"rbf_final_dsr = {dsr_rbf.values[-1]!r}",
    ]
    (out / "summary.txt").write_text("\n".join(summary) + "\n")
    print(f"repro complete in {out}")
    return 0


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="decouplab",
                                  description="Semi-blind uplink/downlink decoupling lab")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--config", help="flat key-value config file")
        return p

    p = add("synth", cmd_synth, "synthesize the dual-band dataset CSV")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)

    p = add("label", cmd_label, "label a dataset from its 28 GHz measurements")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--k-th", type=float)
    p.add_argument("--p-th", type=float)

    p = add("train", cmd_train, "train the one-vs-one SVM on a labeled CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--n-train", type=int)
    p.add_argument("--kernel", choices=("rbf", "linear"))
    p.add_argument("--c", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--max-passes", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--model-out", required=True)

    p = add("predict", cmd_predict, "predict decoupling classes with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)

    def eval_flags(p, kernel=True):
        if kernel:
            p.add_argument("--kernel", choices=("rbf", "linear"))
        p.add_argument("--c", type=float)
        p.add_argument("--gamma", type=float)
        p.add_argument("--tol", type=float)
        p.add_argument("--max-passes", type=int)
        p.add_argument("--l", dest="window", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--n-train-pool", type=int)
        p.add_argument("--size-start", type=int)
        p.add_argument("--size-step", type=int)
        p.add_argument("--as-threshold", type=float)

    p = add("eval", cmd_eval, "training-size sweep: DSR and accuracy curves")
    p.add_argument("--in", dest="infile", required=True)
    eval_flags(p)
    p.add_argument("--out", required=True)

    p = add("baseline", cmd_baseline, "fixed-threshold benchmark on the test windows")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--k-th", type=float)
    p.add_argument("--p-th", type=float)
    p.add_argument("--l", dest="window", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--n-train-pool", type=int)
    p.add_argument("--size-start", type=int)
    p.add_argument("--size-step", type=int)
    p.add_argument("--as-threshold", type=float)
    p.add_argument("--out", required=True)

    p = add("pca", cmd_pca, "3-component projection of the labeled features")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)

    p = add("compare", cmd_compare, "RBF vs linear kernel accuracy curves")
    p.add_argument("--in", dest="infile", required=True)
    eval_flags(p, kernel=False)
    p.add_argument("--out", required=True)

    p = add("repro", cmd_repro, "synth + label + eval + baseline + pca in one run")
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir", required=True)

    return top


def dispatch(argv) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.handler(args)
    except (DataFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
