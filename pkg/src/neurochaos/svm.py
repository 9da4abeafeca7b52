"""Support vector machines written from scratch.

Two solvers:

* :func:`train_linear` minimises ``lam/2 |w|^2 + mean hinge loss`` in the
  primal with stochastic sub-gradient steps of size ``1/(lam t)``
  (``lam = 1/(C m)``).  The intercept is an extra constant feature and is
  regularised along with the weights.  The returned weights are the mean of
  the iterates visited during the final epoch.
* :func:`train_rbf` solves the RBF-kernel dual with SMO, choosing the
  working pair by maximal violation and second-order gain.

Both reduce multiclass problems to one-vs-rest; prediction takes the argmax
score, ties going to the lowest class index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import ArgumentError, DataError, TrainingError

DEFAULT_C = 1.0
DEFAULT_EPOCHS = 200
KKT_TOL = 1e-3
_PRECOMPUTE_LIMIT = 4000  # largest n for which the full kernel matrix is built


@dataclass(frozen=True)
class LinearSvmModel:
    classes: tuple
    weights: np.ndarray = field(repr=False)  # (heads, d); one head when binary
    biases: np.ndarray = field(repr=False)   # (heads,)
    C: float = DEFAULT_C
    epochs: int = DEFAULT_EPOCHS
    seed: int = 0

    @property
    def n_features(self):
        return self.weights.shape[1]


@dataclass(frozen=True)
class BinaryRbf:
    """One dual problem: ``f(x) = sum_i alpha_i y_i k(x, x_i) + bias``."""

    support_vectors: np.ndarray = field(repr=False)
    dual_coef: np.ndarray = field(repr=False)  # alpha_i * y_i
    bias: float
    n_iter: int = 0
    kkt_gap: float = 0.0


@dataclass(frozen=True)
class RbfSvmModel:
    classes: tuple
    heads: tuple  # BinaryRbf per head; one head when binary
    gamma: float
    C: float = DEFAULT_C
    seed: int = 0

    @property
    def n_features(self):
        return self.heads[0].support_vectors.shape[1]


def _check_xy(features, labels):
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels)
    if x.ndim != 2:
        raise DataError(f"features must be 2-D, got shape {x.shape}")
    if y.shape != (x.shape[0],):
        raise DataError(f"{x.shape[0]} samples but {y.size} labels")
    if not np.all(np.isfinite(x)):
        r, c = np.argwhere(~np.isfinite(x))[0]
        raise DataError(f"non-finite feature at row {r}, col {c}")
    classes = tuple(int(c) for c in np.unique(y))
    if len(classes) < 2:
        raise TrainingError(f"need at least two classes to train, got {list(classes)}")
    return x, y, classes


def _targets(y, classes, ovr=False):
    """+-1 targets, one column per head."""
    if len(classes) == 2 and not ovr:
        return np.where(y == classes[1], 1.0, -1.0)[:, None]
    return np.stack([np.where(y == c, 1.0, -1.0) for c in classes], axis=1)


# ---------------------------------------------------------------- linear ---

@numba.njit(cache=True)
def _pegasos_epoch(x, targets, w, wsum, order, t, lam):
    heads, d = w.shape
    for idx in order:
        t += 1
        eta = 1.0 / (lam * t)
        shrink = 1.0 - eta * lam
        for k in range(heads):
            y = targets[idx, k]
            s = 0.0
            for j in range(d):
                s += w[k, j] * x[idx, j]
            if y * s < 1.0:
                for j in range(d):
                    w[k, j] = shrink * w[k, j] + eta * y * x[idx, j]
            else:
                for j in range(d):
                    w[k, j] = shrink * w[k, j]
            for j in range(d):
                wsum[k, j] += w[k, j]
    return t


def primal_objective(w, x_aug, targets, lam):
    """Per-head ``lam/2 |w|^2 + mean hinge`` for augmented inputs."""
    margins = targets * (x_aug @ w.T)
    hinge = np.maximum(0.0, 1.0 - margins).mean(axis=0)
    return 0.5 * lam * np.einsum("kj,kj->k", w, w) + hinge


def train_linear(features, labels, C=DEFAULT_C, epochs=DEFAULT_EPOCHS, seed=0,
                 *, return_history=False, ovr=False):
    """Train a linear SVM by stochastic sub-gradient descent on the primal.

    Each epoch visits every sample once in an order drawn from
    ``numpy.random.default_rng(seed)``.  With ``return_history=True`` the
    primal objective (summed over heads) of each epoch's averaged iterate is
    returned as well.  ``ovr=True`` trains one head per class even for
    binary problems.
    """
    if not C > 0:
        raise ArgumentError(f"C must be positive, got {C}")
    if int(epochs) < 1:
        raise ArgumentError(f"epochs must be >= 1, got {epochs}")
    x, y, classes = _check_xy(features, labels)
    m, d = x.shape
    x_aug = np.hstack([x, np.ones((m, 1))])
    targets = _targets(y, classes, ovr)
    lam = 1.0 / (C * m)
    w = np.zeros((targets.shape[1], d + 1))
    rng = np.random.default_rng(seed)
    t = 0
    history = []
    for _ in range(int(epochs)):
        order = rng.permutation(m)
        wsum = np.zeros_like(w)
        t = _pegasos_epoch(x_aug, targets, w, wsum, order, t, lam)
        if return_history:
            history.append(float(primal_objective(wsum / m, x_aug, targets, lam).sum()))
    w_avg = wsum / m
    model = LinearSvmModel(classes=classes, weights=w_avg[:, :d].copy(), biases=w_avg[:, d].copy(),
                           C=float(C), epochs=int(epochs), seed=int(seed))
    return (model, history) if return_history else model


# ------------------------------------------------------------------- rbf ---

def rbf_kernel(a, b, gamma):
    """``exp(-gamma |a_i - b_j|^2)`` for every row pair."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    sq = (a * a).sum(1)[:, None] + (b * b).sum(1)[None, :] - 2.0 * (a @ b.T)
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


def resolve_gamma(gamma, x):
    if isinstance(gamma, str):
        if gamma != "scale":
            raise ArgumentError(f"gamma must be positive or 'scale', got {gamma!r}")
        var = float(np.var(x))
        return 1.0 / (x.shape[1] * var) if var > 0 else 1.0
    gamma = float(gamma)
    if not gamma > 0:
        raise ArgumentError(f"gamma must be positive, got {gamma}")
    return gamma


@numba.njit(cache=True)
def _kernel_column(x, sqn, gamma, i, out):
    n, d = x.shape
    for t in range(n):
        s = 0.0
        for j in range(d):
            s += x[t, j] * x[i, j]
        v = sqn[t] + sqn[i] - 2.0 * s
        if v < 0.0:
            v = 0.0
        out[t] = np.exp(-gamma * v)


@numba.njit(cache=True)
def _smo(x, y, C, gamma, tol, max_iter, kmat, precomputed):
    n = y.size
    sqn = np.empty(n)
    for t in range(n):
        sqn[t] = (x[t] * x[t]).sum()
    alpha = np.zeros(n)
    grad = -np.ones(n)
    ki = np.empty(n)
    kj = np.empty(n)
    tau = 1e-12
    it = 0
    gap = np.inf
    while it < max_iter:
        # i: maximal violator in I_up
        gmax = -np.inf
        i = -1
        for t in range(n):
            if (y[t] > 0 and alpha[t] < C) or (y[t] < 0 and alpha[t] > 0):
                v = -y[t] * grad[t]
                if v > gmax:
                    gmax = v
                    i = t
        if i < 0:
            gap = 0.0
            break
        if precomputed:
            for t in range(n):
                ki[t] = kmat[i, t]
        else:
            _kernel_column(x, sqn, gamma, i, ki)
        # j: second-order choice in I_low
        gmin = np.inf
        j = -1
        best = np.inf
        for t in range(n):
            if (y[t] > 0 and alpha[t] > 0) or (y[t] < 0 and alpha[t] < C):
                v = -y[t] * grad[t]
                if v < gmin:
                    gmin = v
                bdiff = gmax - v
                if bdiff > 0:
                    a = 2.0 - 2.0 * ki[t]  # k(x,x) = 1 for rbf
                    if a <= 0:
                        a = tau
                    score = -(bdiff * bdiff) / a
                    if score < best:
                        best = score
                        j = t
        gap = gmax - gmin
        if gap < tol or j < 0:
            break
        if precomputed:
            for t in range(n):
                kj[t] = kmat[j, t]
        else:
            _kernel_column(x, sqn, gamma, j, kj)
        it += 1
        # two-variable subproblem on (i, j), clipped to the box
        a_ij = 2.0 - 2.0 * ki[j]
        if a_ij <= 0:
            a_ij = tau
        old_i = alpha[i]
        old_j = alpha[j]
        if y[i] != y[j]:
            delta = (-grad[i] - grad[j]) / a_ij
            diff = alpha[i] - alpha[j]
            alpha[i] += delta
            alpha[j] += delta
            if diff > 0:
                if alpha[j] < 0:
                    alpha[j] = 0.0
                    alpha[i] = diff
            else:
                if alpha[i] < 0:
                    alpha[i] = 0.0
                    alpha[j] = -diff
            if diff > 0:
                if alpha[i] > C:
                    alpha[i] = C
                    alpha[j] = C - diff
            else:
                if alpha[j] > C:
                    alpha[j] = C
                    alpha[i] = C + diff
        else:
            delta = (grad[i] - grad[j]) / a_ij
            total = alpha[i] + alpha[j]
            alpha[i] -= delta
            alpha[j] += delta
            if total > C:
                if alpha[i] > C:
                    alpha[i] = C
                    alpha[j] = total - C
            else:
                if alpha[j] < 0:
                    alpha[j] = 0.0
                    alpha[i] = total
            if total > C:
                if alpha[j] > C:
                    alpha[j] = C
                    alpha[i] = total - C
            else:
                if alpha[i] < 0:
                    alpha[i] = 0.0
                    alpha[j] = total
        di = alpha[i] - old_i
        dj = alpha[j] - old_j
        for t in range(n):
            grad[t] += y[t] * (y[i] * ki[t] * di + y[j] * kj[t] * dj)
    # bias: mean over free vectors, else midpoint of the feasible interval
    ub = np.inf
    lb = -np.inf
    s = 0.0
    nfree = 0
    for t in range(n):
        yg = y[t] * grad[t]
        if alpha[t] >= C:
            if y[t] < 0:
                ub = min(ub, yg)
            else:
                lb = max(lb, yg)
        elif alpha[t] <= 0:
            if y[t] > 0:
                ub = min(ub, yg)
            else:
                lb = max(lb, yg)
        else:
            nfree += 1
            s += yg
    rho = s / nfree if nfree > 0 else (ub + lb) / 2.0
    return alpha, -rho, it, gap


def _train_binary_rbf(x, target, C, gamma, tol, max_iter):
    n = x.shape[0]
    if n <= _PRECOMPUTE_LIMIT:
        kmat, pre = rbf_kernel(x, x, gamma), True
    else:
        kmat, pre = np.zeros((1, 1)), False
    alpha, bias, it, gap = _smo(x, target, float(C), float(gamma), float(tol),
                                int(max_iter), kmat, pre)
    sv = alpha > 0
    return BinaryRbf(support_vectors=x[sv].copy(), dual_coef=(alpha * target)[sv],
                     bias=float(bias), n_iter=int(it), kkt_gap=float(gap))


def train_rbf(features, labels, C=DEFAULT_C, gamma="scale", seed=0, *,
              tol=KKT_TOL, max_iter=10_000_000, ovr=False):
    """Train an RBF-kernel SVM with SMO.

    ``gamma="scale"`` resolves to ``1 / (d * Var(X))`` on the training
    features.  The solver is deterministic, so ``seed`` is only recorded.
    """
    if not (isinstance(C, (int, float)) and C > 0):
        raise ArgumentError(f"C must be positive, got {C}")
    x, y, classes = _check_xy(features, labels)
    g = resolve_gamma(gamma, x)
    targets = _targets(y, classes, ovr)
    heads = tuple(_train_binary_rbf(x, np.ascontiguousarray(targets[:, k]), C, g, tol, max_iter)
                  for k in range(targets.shape[1]))
    return RbfSvmModel(classes=classes, heads=heads, gamma=g, C=float(C), seed=int(seed))


def rbf_dual(features, labels, C=DEFAULT_C, gamma=1.0, tol=KKT_TOL):
    """Full dual solution of a binary problem (labels +-1): ``(alpha, bias, gap)``."""
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    alpha, bias, _, gap = _smo(x, y, float(C), float(gamma), float(tol), 10_000_000,
                               rbf_kernel(x, x, gamma), True)
    return alpha, bias, gap


# ------------------------------------------------------------ prediction ---

def decision_function(model, features):
    """Raw scores, shape ``(m, heads)``."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.n_features:
        raise DataError(f"model expects {model.n_features} features, got shape {x.shape}")
    if isinstance(model, LinearSvmModel):
        return x @ model.weights.T + model.biases
    out = np.empty((x.shape[0], len(model.heads)))
    for k, head in enumerate(model.heads):
        for lo in range(0, x.shape[0], 2048):
            kern = rbf_kernel(x[lo:lo + 2048], head.support_vectors, model.gamma)
            out[lo:lo + 2048, k] = kern @ head.dual_coef + head.bias
    return out


def predict(model, features):
    scores = decision_function(model, features)
    classes = np.asarray(model.classes)
    if scores.shape[1] == 1:
        return np.where(scores[:, 0] > 0, classes[1], classes[0])
    return classes[np.argmax(scores, axis=1)]


# ---------------------------------------------------------- persistence ---

def model_to_dict(model):
    if isinstance(model, LinearSvmModel):
        return {
            "kind": "linear",
            "classes": list(model.classes),
            "weights": model.weights.tolist(),
            "biases": model.biases.tolist(),
            "C": model.C, "epochs": model.epochs, "seed": model.seed,
        }
    return {
        "kind": "rbf",
        "classes": list(model.classes),
        "gamma": model.gamma, "C": model.C, "seed": model.seed,
        "heads": [{
            "support_vectors": h.support_vectors.tolist(),
            "dual_coef": h.dual_coef.tolist(),
            "bias": h.bias, "n_iter": h.n_iter, "kkt_gap": h.kkt_gap,
        } for h in model.heads],
    }


def model_from_dict(d):
    try:
        kind = d["kind"]
        if kind == "linear":
            return LinearSvmModel(
                classes=tuple(d["classes"]),
                weights=np.array(d["weights"], dtype=np.float64),
                biases=np.array(d["biases"], dtype=np.float64),
                C=d["C"], epochs=d["epochs"], seed=d["seed"])
        if kind == "rbf":
            heads = tuple(BinaryRbf(
                support_vectors=np.array(h["support_vectors"], dtype=np.float64),
                dual_coef=np.array(h["dual_coef"], dtype=np.float64),
                bias=h["bias"], n_iter=h.get("n_iter", 0), kkt_gap=h.get("kkt_gap", 0.0))
                for h in d["heads"])
            return RbfSvmModel(classes=tuple(d["classes"]), heads=heads,
                               gamma=d["gamma"], C=d["C"], seed=d["seed"])
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed model file: {exc}") from None
    raise DataError(f"unknown model kind {kind!r}")


def save_model(model, path):
    with open(path, "w") as fh:
        json.dump(model_to_dict(model), fh)


def load_model(path):
    with open(path) as fh:
        return model_from_dict(json.load(fh))
