"""Soft-margin kernel SVM: SMO solver, RBF/linear kernels, one-vs-one voting.

Each binary classifier solves the dual problem

    max_a  sum(a) - 1/2 * sum_ij a_i a_j y_i y_j K(x_i, x_j)
    s.t.   0 <= a_i <= C,  sum_i a_i y_i = 0

by sequential minimal optimization: repeatedly pick the most violating
index i and the partner j of maximal second-order gain, solve the
two-variable subproblem exactly, and stop when the duality-gap criterion
max(I_up) - min(I_low) drops below the KKT tolerance.

The multiclass wrapper trains one binary per unordered pair of observed
classes and predicts by majority vote (ties to the lowest class value).
A model carries the scaler fitted on its own training rows, so prediction
always consumes raw, unstandardized features.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple, Sequence

import numpy as np

from .preprocess import ScalerParams, scaler_apply, scaler_fit

KERNELS = ("rbf", "linear")

_QUAD_FLOOR = 1e-12


@dataclass(frozen=True)
class SvmParams:
    kernel: str = "rbf"
    c: float = 1.0
    gamma: float = 0.4
    tol: float = 1e-3
    max_passes: int = 100

    def __post_init__(self):
        if self.kernel not in KERNELS:
            raise ValueError(f"kernel must be one of {KERNELS}, got {self.kernel!r}")
        if self.c <= 0:
            raise ValueError("c must be positive")
        if self.kernel == "rbf" and self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_passes < 1:
            raise ValueError("max_passes must be >= 1")


def kernel_eval(params: SvmParams, x, z) -> float:
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if x.shape != z.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {z.shape}")
    if params.kernel == "linear":
        return float(x @ z)
    d = x - z
    return float(np.exp(-params.gamma * (d @ d)))


def kernel_matrix(params: SvmParams, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Gram block K[i, j] = k(a_i, b_j)."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}")
    if params.kernel == "linear":
        return a @ b.T
    sq = np.sum(a * a, axis=1)[:, None] + np.sum(b * b, axis=1)[None, :] - 2.0 * (a @ b.T)
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-params.gamma * sq)


class SmoSolution(NamedTuple):
    alpha: np.ndarray
    bias: float
    converged: bool
    iterations: int


def smo_solve(K: np.ndarray, y: np.ndarray, c: float,
              tol: float = 1e-3, max_iter: int = 0) -> SmoSolution:
    """Solve the dual on a precomputed Gram matrix, labels in {-1, +1}.

    max_iter caps the number of pair updates (0 means 100 per sample).
    The bias is averaged over free support vectors when any exist, else
    taken as the midpoint of the KKT interval.
    """
    K = np.asarray(K, dtype=float)
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    if K.shape != (n, n):
        raise ValueError("Gram matrix does not match label count")
    if max_iter <= 0:
        max_iter = 100 * n
    alpha = np.zeros(n)
    grad = -np.ones(n)  # gradient of 1/2 a'Qa - e'a at a = 0
    Kd = np.ascontiguousarray(np.diag(K))

    converged = False
    it = 0
    while it < max_iter:
        neg_yg = -y * grad
        at_lo = alpha <= 0.0
        at_hi = alpha >= c
        pos = y > 0
        up = (pos & ~at_hi) | (~pos & ~at_lo)
        low = (pos & ~at_lo) | (~pos & ~at_hi)
        if not (up.any() and low.any()):
            converged = True
            break
        up_idx = np.flatnonzero(up)
        i = up_idx[np.argmax(neg_yg[up_idx])]
        m = neg_yg[i]
        low_idx = np.flatnonzero(low)
        M = neg_yg[low_idx].min()
        if m - M <= tol:
            converged = True
            break
        cand = low_idx[neg_yg[low_idx] < m]
        quad = Kd[i] + Kd[cand] - 2.0 * K[i, cand]
        np.maximum(quad, _QUAD_FLOOR, out=quad)
        j = cand[np.argmax((m - neg_yg[cand]) ** 2 / quad)]

        old_i, old_j = alpha[i], alpha[j]
        qq = max(Kd[i] + Kd[j] - 2.0 * K[i, j], _QUAD_FLOOR)
        if y[i] != y[j]:
            delta = (-grad[i] - grad[j]) / qq
            diff = old_i - old_j
            ai, aj = old_i + delta, old_j + delta
            if diff > 0.0:
                if aj < 0.0:
                    aj, ai = 0.0, diff
                if ai > c:
                    ai, aj = c, c - diff
            else:
                if ai < 0.0:
                    ai, aj = 0.0, -diff
                if aj > c:
                    aj, ai = c, c + diff
        else:
            delta = (grad[i] - grad[j]) / qq
            total = old_i + old_j
            ai, aj = old_i - delta, old_j + delta
            if total > c:
                if ai > c:
                    ai, aj = c, total - c
                if aj > c:
                    aj, ai = c, total - c
            else:
                if aj < 0.0:
                    aj, ai = 0.0, total
                if ai < 0.0:
                    ai, aj = 0.0, total
        alpha[i], alpha[j] = ai, aj
        d_i, d_j = ai - old_i, aj - old_j
        # K is symmetric; rows are contiguous where columns are not.
        grad += (y[i] * d_i) * (y * K[i]) + (y[j] * d_j) * (y * K[j])
        it += 1

    neg_yg = -y * grad
    free = (alpha > 0.0) & (alpha < c)
    if free.any():
        bias = float(neg_yg[free].mean())
    else:
        pos = y > 0
        up = (pos & (alpha < c)) | (~pos & (alpha > 0.0))
        low = (pos & (alpha > 0.0)) | (~pos & (alpha < c))
        bounds = []
        if up.any():
            bounds.append(neg_yg[up].max())
        if low.any():
            bounds.append(neg_yg[low].min())
        bias = float(np.mean(bounds)) if bounds else 0.0
    return SmoSolution(alpha=alpha, bias=bias, converged=converged, iterations=it)


def dual_objective(K: np.ndarray, y: np.ndarray, alpha: np.ndarray) -> float:
    """Value of the (maximization-form) dual at alpha."""
    y = np.asarray(y, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    v = y * alpha
    return float(alpha.sum() - 0.5 * v @ (np.asarray(K, dtype=float) @ v))


@dataclass(frozen=True)
class BinaryModel:
    """One trained pair classifier; +1 side is class_pair[0]."""

    support_vectors: np.ndarray
    dual_coefs: np.ndarray
    bias: float
    class_pair: tuple[int, int]
    converged: bool = True

    def decision_function(self, params: SvmParams, rows: np.ndarray) -> np.ndarray:
        if len(self.dual_coefs) == 0:
            return np.full(np.atleast_2d(rows).shape[0], self.bias)
        return kernel_matrix(params, rows, self.support_vectors) @ self.dual_coefs + self.bias


def train_binary(x: np.ndarray, y: np.ndarray, params: SvmParams,
                 class_pair: tuple[int, int] = (1, -1)) -> BinaryModel:
    """Fit one soft-margin classifier on labels in {-1, +1}."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.asarray(y, dtype=float)
    if x.shape[0] != y.shape[0] or x.shape[0] < 2:
        raise ValueError("need at least two aligned samples")
    if not ((y == 1.0) | (y == -1.0)).all():
        raise ValueError("binary labels must be in {-1, +1}")
    if (y > 0).all() or (y < 0).all():
        raise ValueError("both classes must be present")
    K = kernel_matrix(params, x, x)
    sol = smo_solve(K, y, c=params.c, tol=params.tol, max_iter=params.max_passes * len(y))
    sv = sol.alpha > 0.0
    return BinaryModel(
        support_vectors=x[sv],
        dual_coefs=(sol.alpha * y)[sv],
        bias=sol.bias,
        class_pair=(int(class_pair[0]), int(class_pair[1])),
        converged=sol.converged,
    )


@dataclass(frozen=True)
class MulticlassModel:
    binaries: tuple[BinaryModel, ...]
    scaler: ScalerParams
    params: SvmParams
    classes: tuple[int, ...]


def train_ovo(x: np.ndarray, y: np.ndarray, params: SvmParams) -> MulticlassModel:
    """One-vs-one ensemble over every pair of classes present in y.

    Standardization is fitted here, on exactly the given training rows,
    and embedded in the returned model.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.asarray(y, dtype=int)
    classes = tuple(sorted(np.unique(y).tolist()))
    if len(classes) < 2:
        raise ValueError(f"need at least two classes to train, got {classes}")
    scaler = scaler_fit(x)
    xs = scaler_apply(scaler, x)
    binaries = []
    for a, b in combinations(classes, 2):
        mask = (y == a) | (y == b)
        yb = np.where(y[mask] == a, 1.0, -1.0)
        binaries.append(train_binary(xs[mask], yb, params, class_pair=(a, b)))
    return MulticlassModel(binaries=tuple(binaries), scaler=scaler,
                           params=params, classes=classes)


def predict(model: MulticlassModel, rows: np.ndarray) -> np.ndarray:
    """Vote over the pair classifiers; rows are raw (unstandardized)."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    z = scaler_apply(model.scaler, rows)
    index = {c: k for k, c in enumerate(model.classes)}
    votes = np.zeros((z.shape[0], len(model.classes)), dtype=int)
    for bm in model.binaries:
        f = bm.decision_function(model.params, z)
        win_a = f > 0.0
        votes[win_a, index[bm.class_pair[0]]] += 1
        votes[~win_a, index[bm.class_pair[1]]] += 1
    # argmax returns the first maximum; classes are sorted ascending, so
    # vote ties resolve to the lowest class value.
    return np.asarray(model.classes, dtype=int)[np.argmax(votes, axis=1)]


def accuracy_score(y_true, y_pred) -> float:
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape or y_true.size == 0:
        raise ValueError("label vectors must be nonempty and equal length")
    return float(np.mean(y_true == y_pred))


# ---------------------------------------------------------------------------
# flat text serialization

_MODEL_MAGIC = "decouplab-svm v1"


def _floats(values) -> str:
    return " ".join(repr(float(v)) for v in values)


def save_model(model: MulticlassModel, path) -> None:
    p = model.params
    with open(path, "w") as fh:
        fh.write(_MODEL_MAGIC + "\n")
        fh.write(f"kernel = {p.kernel}\n")
        fh.write(f"c = {p.c!r}\n")
        fh.write(f"gamma = {p.gamma!r}\n")
        fh.write(f"tol = {p.tol!r}\n")
        fh.write(f"max_passes = {p.max_passes}\n")
        fh.write("classes = " + " ".join(str(c) for c in model.classes) + "\n")
        fh.write("scaler_mean = " + _floats(model.scaler.mean) + "\n")
        fh.write("scaler_std = " + _floats(model.scaler.std) + "\n")
        fh.write(f"n_binaries = {len(model.binaries)}\n")
        for bm in model.binaries:
            fh.write(f"binary = {bm.class_pair[0]} {bm.class_pair[1]}\n")
            fh.write(f"bias = {bm.bias!r}\n")
            fh.write(f"converged = {int(bm.converged)}\n")
            fh.write(f"n_sv = {len(bm.dual_coefs)}\n")
            for coef, row in zip(bm.dual_coefs, bm.support_vectors):
                fh.write("sv = " + repr(float(coef)) + " " + _floats(row) + "\n")
        fh.write("end\n")


class _LineReader:
    def __init__(self, fh, path):
        self.lines = [ln.rstrip("\n") for ln in fh]
        self.pos = 0
        self.path = path

    def next(self, key: str) -> str:
        if self.pos >= len(self.lines):
            raise ValueError(f"{self.path}: truncated model file, expected {key!r}")
        line = self.lines[self.pos]
        self.pos += 1
        k, _, v = line.partition("=")
        if k.strip() != key:
            raise ValueError(f"{self.path}: expected {key!r}, found {k.strip()!r}")
        return v.strip()


def load_model(path) -> MulticlassModel:
    with open(path) as fh:
        first = fh.readline().rstrip("\n")
        if first != _MODEL_MAGIC:
            raise ValueError(f"{path}: not a model file (header {first!r})")
        r = _LineReader(fh, path)
    params = SvmParams(
        kernel=r.next("kernel"),
        c=float(r.next("c")),
        gamma=float(r.next("gamma")),
        tol=float(r.next("tol")),
        max_passes=int(r.next("max_passes")),
    )
    classes = tuple(int(v) for v in r.next("classes").split())
    scaler = ScalerParams(
        mean=np.array([float(v) for v in r.next("scaler_mean").split()]),
        std=np.array([float(v) for v in r.next("scaler_std").split()]),
    )
    binaries = []
    for _ in range(int(r.next("n_binaries"))):
        a, b = (int(v) for v in r.next("binary").split())
        bias = float(r.next("bias"))
        converged = bool(int(r.next("converged")))
        n_sv = int(r.next("n_sv"))
        coefs = np.empty(n_sv)
        rows = np.empty((n_sv, scaler.mean.shape[0]))
        for k in range(n_sv):
            vals = [float(v) for v in r.next("sv").split()]
            coefs[k] = vals[0]
            rows[k] = vals[1:]
        binaries.append(BinaryModel(support_vectors=rows, dual_coefs=coefs,
                                    bias=bias, class_pair=(a, b), converged=converged))
    return MulticlassModel(binaries=tuple(binaries), scaler=scaler,
                           params=params, classes=classes)
