"""Binary classifiers for the second detection stage.

All models consume features z-scored with statistics captured at training time,
train deterministically (given a seed where randomness is involved), and emit a
score oriented so that larger means more upcall-like:

  lda / qda    discriminant difference (upcall minus non-upcall); neutral at 0
  knn          fraction of upcall neighbors; neutral at 0.5
  tree         leaf upcall probability; neutral at 0.5
  bagger       fraction of trees voting upcall; neutral at 0.5
  svm_*        signed margin; neutral at 0

The SVM solves the soft-margin dual by repeated analytic optimization of the
maximal violating pair until the duality gap estimate drops below `tol`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, ConvergenceError, DataError

ALGORITHMS = ("lda", "qda", "knn", "tree", "bagger",
              "svm_linear", "svm_rbf", "svm_poly")

MODEL_FORMAT_VERSION = 1
_SV_EPS = 1e-10


@dataclass
class Dataset:
    """Feature matrix (rows = samples) with boolean labels, True = upcall."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=bool)
        if self.features.ndim != 2 or len(self.features) != len(self.labels):
            raise DataError("features must be 2-D with one label per row")
        if not np.all(np.isfinite(self.features)):
            raise DataError("features contain non-finite values")

    def require_both_classes(self) -> None:
        if self.labels.all() or not self.labels.any():
            raise DataError("training needs at least one sample of each class")


@dataclass(frozen=True)
class FeatureScaling:
    mean: np.ndarray
    std: np.ndarray

    def apply(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=np.float64) - self.mean) / self.std


def fit_scaling(features: np.ndarray) -> FeatureScaling:
    mean = features.mean(axis=0)
    std = features.std(axis=0)
    std = np.where(std < 1e-12, 1.0, std)
    return FeatureScaling(mean=mean, std=std)


# --- kernels -----------------------------------------------------------------

KERNEL_KINDS = ("linear", "rbf", "polynomial")


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    gamma: float | None = None
    degree: int | None = None
    coef0: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in KERNEL_KINDS:
            raise ConfigError(f"unknown kernel {self.kind!r}")
        if self.kind == "rbf" and (self.gamma is None or self.gamma <= 0):
            raise ConfigError("rbf kernel needs gamma > 0")
        if self.kind == "polynomial" and (self.degree is None or self.degree < 2):
            raise ConfigError("polynomial kernel needs degree >= 2")


def kernel_eval(spec: KernelSpec, a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DataError("kernel arguments must have equal dimension")
    if spec.kind == "linear":
        return float(a @ b)
    if spec.kind == "rbf":
        d = a - b
        return float(math.exp(-spec.gamma * float(d @ d)))
    return float((a @ b + spec.coef0) ** spec.degree)


def kernel_matrix(spec: KernelSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if spec.kind == "linear":
        return A @ B.T
    if spec.kind == "rbf":
        sq = (np.sum(A * A, axis=1)[:, None] + np.sum(B * B, axis=1)[None, :]
              - 2.0 * (A @ B.T))
        return np.exp(-spec.gamma * np.maximum(sq, 0.0))
    return (A @ B.T + spec.coef0) ** spec.degree


# --- gaussian discriminants ---------------------------------------------------

def _ridged_inverse(cov: np.ndarray) -> tuple[np.ndarray, float]:
    """Inverse and log-determinant after adding the standard ridge
    eps*I with eps = 1e-6 * trace / dim."""
    d = cov.shape[0]
    eps = 1e-6 * max(np.trace(cov), 1e-12) / d
    cov = cov + eps * np.eye(d)
    sign, logdet = np.linalg.slogdet(cov)
    if sign <= 0:
        raise DataError("covariance not positive definite even after ridging")
    return np.linalg.inv(cov), float(logdet)


@dataclass
class LDAParams:
    weights: np.ndarray
    bias: float


@dataclass
class QDAParams:
    mean_up: np.ndarray
    mean_non: np.ndarray
    cov_inv_up: np.ndarray
    cov_inv_non: np.ndarray
    log_det_up: float
    log_det_non: float
    log_prior_up: float
    log_prior_non: float


def _train_lda(X: np.ndarray, y: np.ndarray) -> LDAParams:
    up, non = X[y], X[~y]
    mu_up, mu_non = up.mean(axis=0), non.mean(axis=0)
    n = len(X)
    scatter = ((up - mu_up).T @ (up - mu_up)) + ((non - mu_non).T @ (non - mu_non))
    cov_inv, _ = _ridged_inverse(scatter / n)
    w = cov_inv @ (mu_up - mu_non)
    bias = (-0.5 * float(mu_up @ cov_inv @ mu_up)
            + 0.5 * float(mu_non @ cov_inv @ mu_non)
            + math.log(len(up) / n) - math.log(len(non) / n))
    return LDAParams(weights=w, bias=bias)


def _train_qda(X: np.ndarray, y: np.ndarray) -> QDAParams:
    up, non = X[y], X[~y]
    mu_up, mu_non = up.mean(axis=0), non.mean(axis=0)
    cov_up = (up - mu_up).T @ (up - mu_up) / len(up)
    cov_non = (non - mu_non).T @ (non - mu_non) / len(non)
    inv_up, logdet_up = _ridged_inverse(cov_up)
    inv_non, logdet_non = _ridged_inverse(cov_non)
    n = len(X)
    return QDAParams(mu_up, mu_non, inv_up, inv_non, logdet_up, logdet_non,
                     math.log(len(up) / n), math.log(len(non) / n))


def _qda_score(p: QDAParams, z: np.ndarray) -> float:
    du = z - p.mean_up
    dn = z - p.mean_non
    g_up = -0.5 * p.log_det_up - 0.5 * float(du @ p.cov_inv_up @ du) + p.log_prior_up
    g_non = -0.5 * p.log_det_non - 0.5 * float(dn @ p.cov_inv_non @ dn) + p.log_prior_non
    return g_up - g_non


# --- k nearest neighbors ------------------------------------------------------

@dataclass
class KNNParams:
    X: np.ndarray     # standardized training features
    y: np.ndarray
    k: int


def _knn_score(p: KNNParams, z: np.ndarray) -> float:
    d2 = np.sum((p.X - z) ** 2, axis=1)
    # stable sort: equal distances resolve to the lower training index
    nearest = np.argsort(d2, kind="stable")[:min(p.k, len(d2))]
    return float(np.mean(p.y[nearest]))


# --- decision tree ------------------------------------------------------------

@dataclass
class TreeParams:
    feature: list[int] = field(default_factory=list)     # -1 marks a leaf
    threshold: list[float] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    prob: list[float] = field(default_factory=list)      # leaf upcall probability


def _best_split(X: np.ndarray, y: np.ndarray) -> tuple[int, float] | None:
    """Lowest weighted Gini split with distinct values on both sides, or None."""
    m, d = X.shape
    order = np.argsort(X, axis=0, kind="stable")
    Xs = np.take_along_axis(X, order, axis=0)
    ys = np.take_along_axis(np.broadcast_to(y[:, None], (m, d)), order, axis=0)
    cum_pos = np.cumsum(ys, axis=0, dtype=np.float64)
    total_pos = cum_pos[-1]

    left_n = np.arange(1, m, dtype=np.float64)[:, None]
    right_n = m - left_n
    left_pos = cum_pos[:-1]
    right_pos = total_pos[None, :] - left_pos
    p_l = left_pos / left_n
    p_r = right_pos / right_n
    gini_l = 1.0 - p_l ** 2 - (1.0 - p_l) ** 2
    gini_r = 1.0 - p_r ** 2 - (1.0 - p_r) ** 2
    weighted = (left_n * gini_l + right_n * gini_r) / m
    weighted[Xs[1:] <= Xs[:-1]] = np.inf   # no value change: not a real split

    flat = int(np.argmin(weighted))
    if not np.isfinite(weighted.flat[flat]):
        return None
    k, f = divmod(flat, d)
    thr = 0.5 * (Xs[k, f] + Xs[k + 1, f])
    return f, float(thr)


def _train_tree(X: np.ndarray, y: np.ndarray, max_depth: int) -> TreeParams:
    tree = TreeParams()

    def add_leaf(rows: np.ndarray) -> int:
        idx = len(tree.feature)
        tree.feature.append(-1)
        tree.threshold.append(0.0)
        tree.left.append(-1)
        tree.right.append(-1)
        tree.prob.append(float(np.mean(y[rows])))
        return idx

    def build(rows: np.ndarray, depth: int) -> int:
        labels = y[rows]
        if len(rows) < 2 or depth >= max_depth or labels.all() or not labels.any():
            return add_leaf(rows)
        split = _best_split(X[rows], labels)
        if split is None:
            return add_leaf(rows)
        f, thr = split
        idx = len(tree.feature)
        tree.feature.append(f)
        tree.threshold.append(thr)
        tree.left.append(-1)
        tree.right.append(-1)
        tree.prob.append(float(np.mean(labels)))
        go_left = X[rows, f] <= thr
        tree.left[idx] = build(rows[go_left], depth + 1)
        tree.right[idx] = build(rows[~go_left], depth + 1)
        return idx

    build(np.arange(len(y)), 0)
    return tree


def _tree_score(p: TreeParams, z: np.ndarray) -> float:
    node = 0
    while p.feature[node] >= 0:
        node = p.left[node] if z[p.feature[node]] <= p.threshold[node] else p.right[node]
    return p.prob[node]


def tree_depth(p: TreeParams) -> int:
    depth = [0] * len(p.feature)
    out = 0
    for node in range(len(p.feature)):
        if p.feature[node] >= 0:
            depth[p.left[node]] = depth[node] + 1
            depth[p.right[node]] = depth[node] + 1
        else:
            out = max(out, depth[node])
    return out


# --- bagged trees ---------------------------------------------------------------

@dataclass
class BaggerParams:
    trees: list[TreeParams]


def _train_bagger(X: np.ndarray, y: np.ndarray, n_trees: int, max_depth: int,
                  seed: int) -> BaggerParams:
    trees = []
    for child in np.random.SeedSequence(seed).spawn(n_trees):
        rng = np.random.default_rng(child)
        rows = rng.integers(0, len(y), len(y))
        trees.append(_train_tree(X[rows], y[rows], max_depth))
    return BaggerParams(trees=trees)


def _bagger_score(p: BaggerParams, z: np.ndarray) -> float:
    votes = sum(1 for t in p.trees if _tree_score(t, z) > 0.5)
    return votes / len(p.trees)


# --- support vector machine -----------------------------------------------------

@dataclass
class SVMParams:
    kernel: KernelSpec
    bias: float
    C: float
    support_vectors: np.ndarray
    coef: np.ndarray          # alpha_i * y_i for the support vectors
    alpha: np.ndarray
    support_idx: np.ndarray   # rows of the training set the supports came from
    n_train: int


def _smo(K: np.ndarray, y: np.ndarray, C: float, tol: float,
         max_iter: int) -> tuple[np.ndarray, float]:
    """Maximal-violating-pair dual ascent.

    G_i = y_i - sum_j alpha_j y_j K_ij. Optimality holds when
    max(G over I_up) - min(G over I_low) <= tol; the bias is the midpoint.
    """
    n = len(y)
    alpha = np.zeros(n)
    G = y.astype(np.float64).copy()
    pos = y > 0

    for _ in range(max_iter):
        at_C = alpha >= C - 1e-12
        at_0 = alpha <= 1e-12
        in_up = (pos & ~at_C) | (~pos & ~at_0)
        in_low = (~pos & ~at_C) | (pos & ~at_0)
        if not in_up.any() or not in_low.any():
            break
        i = int(np.where(in_up)[0][np.argmax(G[in_up])])
        j = int(np.where(in_low)[0][np.argmin(G[in_low])])
        m_up, m_low = G[i], G[j]
        if m_up - m_low <= tol:
            break
        quad = max(K[i, i] + K[j, j] - 2.0 * K[i, j], 1e-12)
        cap_i = (C - alpha[i]) if pos[i] else alpha[i]
        cap_j = alpha[j] if pos[j] else (C - alpha[j])
        lam = min((m_up - m_low) / quad, cap_i, cap_j)
        alpha[i] += lam if pos[i] else -lam
        alpha[j] -= lam if pos[j] else -lam
        G -= lam * (K[i] - K[j])
    else:
        raise ConvergenceError(f"SVM did not converge within {max_iter} pair updates")

    m_up = float(G[in_up].max()) if in_up.any() else None
    m_low = float(G[in_low].min()) if in_low.any() else None
    if m_up is None:
        bias = m_low if m_low is not None else 0.0
    elif m_low is None:
        bias = m_up
    else:
        bias = 0.5 * (m_up + m_low)
    return alpha, float(bias)


def _train_svm(X: np.ndarray, y_bool: np.ndarray, kernel: KernelSpec, C: float,
               tol: float, max_iter: int) -> SVMParams:
    y = np.where(y_bool, 1.0, -1.0)
    K = kernel_matrix(kernel, X, X)
    alpha, bias = _smo(K, y, C, tol, max_iter)
    sv = alpha > _SV_EPS
    return SVMParams(kernel=kernel, bias=bias, C=C,
                     support_vectors=X[sv].copy(), coef=(alpha * y)[sv],
                     alpha=alpha[sv], support_idx=np.nonzero(sv)[0],
                     n_train=len(y))


def _svm_score(p: SVMParams, z: np.ndarray) -> float:
    if len(p.support_vectors) == 0:
        return p.bias
    k = kernel_matrix(p.kernel, p.support_vectors, z[None, :])[:, 0]
    return float(p.coef @ k + p.bias)


def svm_dual_objective(p: SVMParams) -> float:
    """W(alpha) = sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij
    (points with alpha = 0 contribute nothing)."""
    if len(p.support_vectors) == 0:
        return 0.0
    K = kernel_matrix(p.kernel, p.support_vectors, p.support_vectors)
    return float(p.alpha.sum() - 0.5 * p.coef @ K @ p.coef)


def svm_kkt_residuals(model: "ClassifierModel", ds: Dataset) -> np.ndarray:
    """Per-training-point violation of the soft-margin optimality conditions."""
    p: SVMParams = model.params
    Z = model.scaling.apply(ds.features)
    y = np.where(ds.labels, 1.0, -1.0)
    f = kernel_matrix(p.kernel, Z, p.support_vectors) @ p.coef + p.bias \
        if len(p.support_vectors) else np.full(len(Z), p.bias)
    margins = y * f
    alpha = np.zeros(len(Z))
    alpha[p.support_idx] = p.alpha
    res = np.empty(len(Z))
    at_0 = alpha <= _SV_EPS
    at_C = alpha >= p.C - 1e-9
    free = ~at_0 & ~at_C
    res[at_0] = np.maximum(0.0, 1.0 - margins[at_0])
    res[at_C] = np.maximum(0.0, margins[at_C] - 1.0)
    res[free] = np.abs(1.0 - margins[free])
    return res


def linear_weights(p: SVMParams) -> np.ndarray:
    """Primal weight vector for a linear-kernel model (standardized space)."""
    if p.kernel.kind != "linear":
        raise ConfigError("primal weights exist only for the linear kernel")
    return p.coef @ p.support_vectors


# --- training dispatch and prediction --------------------------------------------

_NEUTRAL = {"lda": 0.0, "qda": 0.0, "knn": 0.5, "tree": 0.5, "bagger": 0.5,
            "svm_linear": 0.0, "svm_rbf": 0.0, "svm_poly": 0.0}

_HYPER_DEFAULTS = {
    "lda": {},
    "qda": {},
    "knn": {"k": 5},
    "tree": {"max_depth": 12},
    "bagger": {"n_trees": 50, "max_depth": 12},
    "svm_linear": {"C": 1.0, "tol": 1e-3, "max_iter": 0},
    "svm_rbf": {"C": 1.0, "tol": 1e-3, "max_iter": 0, "gamma": 0.0},
    "svm_poly": {"C": 1.0, "tol": 1e-3, "max_iter": 0, "degree": 3, "coef0": 1.0},
}


@dataclass
class ClassifierModel:
    algorithm: str
    scaling: FeatureScaling
    params: object
    hyper: dict
    n_features: int
    seed: int | None = None


def resolve_hyper(algorithm: str, hyper: dict) -> dict:
    if algorithm not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")
    merged = dict(_HYPER_DEFAULTS[algorithm])
    unknown = set(hyper) - set(merged)
    if unknown:
        raise ConfigError(f"unknown hyperparameters for {algorithm}: {sorted(unknown)}")
    merged.update(hyper)
    return merged


def train(ds: Dataset, algorithm: str, seed: int | None = None,
          **hyper) -> ClassifierModel:
    hyper = resolve_hyper(algorithm, hyper)
    ds.require_both_classes()
    scaling = fit_scaling(ds.features)
    Z = scaling.apply(ds.features)
    y = ds.labels
    d = Z.shape[1]

    if algorithm == "lda":
        params = _train_lda(Z, y)
    elif algorithm == "qda":
        params = _train_qda(Z, y)
    elif algorithm == "knn":
        params = KNNParams(X=Z.copy(), y=y.copy(), k=int(hyper["k"]))
    elif algorithm == "tree":
        params = _train_tree(Z, y, int(hyper["max_depth"]))
    elif algorithm == "bagger":
        params = _train_bagger(Z, y, int(hyper["n_trees"]), int(hyper["max_depth"]),
                               seed if seed is not None else 0)
    else:
        if algorithm == "svm_linear":
            kernel = KernelSpec("linear")
        elif algorithm == "svm_rbf":
            gamma = hyper["gamma"] if hyper["gamma"] > 0 else 1.0 / d
            kernel = KernelSpec("rbf", gamma=gamma)
        else:
            kernel = KernelSpec("polynomial", degree=int(hyper["degree"]),
                                coef0=float(hyper["coef0"]))
        max_iter = int(hyper["max_iter"]) or max(100_000, 500 * len(y))
        params = _train_svm(Z, y, kernel, float(hyper["C"]),
                            float(hyper["tol"]), max_iter)

    return ClassifierModel(algorithm=algorithm, scaling=scaling, params=params,
                           hyper=hyper, n_features=d, seed=seed)


def predict_score(model: ClassifierModel, x: np.ndarray) -> tuple[bool, float]:
    """(is_upcall, score); larger score = more upcall-like."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.n_features,):
        raise DataError(f"expected {model.n_features} features, got {x.shape}")
    z = model.scaling.apply(x)
    alg = model.algorithm
    if alg == "lda":
        score = float(model.params.weights @ z + model.params.bias)
    elif alg == "qda":
        score = _qda_score(model.params, z)
    elif alg == "knn":
        score = _knn_score(model.params, z)
    elif alg == "tree":
        score = _tree_score(model.params, z)
    elif alg == "bagger":
        score = _bagger_score(model.params, z)
    else:
        score = _svm_score(model.params, z)
    return score > _NEUTRAL[alg], score


def predict_batch(model: ClassifierModel, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    pairs = [predict_score(model, x) for x in np.asarray(X, dtype=np.float64)]
    labels = np.array([p[0] for p in pairs], dtype=bool)
    scores = np.array([p[1] for p in pairs], dtype=np.float64)
    return labels, scores


# --- persistence -----------------------------------------------------------------

def _tree_to_dict(t: TreeParams) -> dict:
    return {"feature": t.feature, "threshold": t.threshold,
            "left": t.left, "right": t.right, "prob": t.prob}


def _tree_from_dict(d: dict) -> TreeParams:
    return TreeParams(feature=list(d["feature"]),
                      threshold=[float(v) for v in d["threshold"]],
                      left=list(d["left"]), right=list(d["right"]),
                      prob=[float(v) for v in d["prob"]])


def _params_to_dict(model: ClassifierModel) -> dict:
    p = model.params
    alg = model.algorithm
    if alg == "lda":
        return {"weights": p.weights.tolist(), "bias": p.bias}
    if alg == "qda":
        return {"mean_up": p.mean_up.tolist(), "mean_non": p.mean_non.tolist(),
                "cov_inv_up": p.cov_inv_up.tolist(), "cov_inv_non": p.cov_inv_non.tolist(),
                "log_det_up": p.log_det_up, "log_det_non": p.log_det_non,
                "log_prior_up": p.log_prior_up, "log_prior_non": p.log_prior_non}
    if alg == "knn":
        return {"X": p.X.tolist(), "y": p.y.tolist(), "k": p.k}
    if alg == "tree":
        return _tree_to_dict(p)
    if alg == "bagger":
        return {"trees": [_tree_to_dict(t) for t in p.trees]}
    return {"kernel": {"kind": p.kernel.kind, "gamma": p.kernel.gamma,
                       "degree": p.kernel.degree, "coef0": p.kernel.coef0},
            "bias": p.bias, "C": p.C,
            "support_vectors": p.support_vectors.tolist(),
            "coef": p.coef.tolist(), "alpha": p.alpha.tolist(),
            "support_idx": p.support_idx.tolist(), "n_train": p.n_train}


def _params_from_dict(alg: str, d: dict):
    if alg == "lda":
        return LDAParams(weights=np.array(d["weights"]), bias=float(d["bias"]))
    if alg == "qda":
        return QDAParams(np.array(d["mean_up"]), np.array(d["mean_non"]),
                         np.array(d["cov_inv_up"]), np.array(d["cov_inv_non"]),
                         float(d["log_det_up"]), float(d["log_det_non"]),
                         float(d["log_prior_up"]), float(d["log_prior_non"]))
    if alg == "knn":
        return KNNParams(X=np.array(d["X"]), y=np.array(d["y"], dtype=bool), k=int(d["k"]))
    if alg == "tree":
        return _tree_from_dict(d)
    if alg == "bagger":
        return BaggerParams(trees=[_tree_from_dict(t) for t in d["trees"]])
    kd = d["kernel"]
    kernel = KernelSpec(kd["kind"], gamma=kd["gamma"],
                        degree=kd["degree"], coef0=kd["coef0"])
    return SVMParams(kernel=kernel, bias=float(d["bias"]), C=float(d["C"]),
                     support_vectors=np.array(d["support_vectors"], dtype=np.float64
                                              ).reshape(len(d["support_vectors"]), -1),
                     coef=np.array(d["coef"]), alpha=np.array(d["alpha"]),
                     support_idx=np.array(d["support_idx"], dtype=np.int64),
                     n_train=int(d["n_train"]))


def model_to_dict(model: ClassifierModel) -> dict:
    return {"format_version": MODEL_FORMAT_VERSION,
            "algorithm": model.algorithm,
            "hyper": model.hyper,
            "seed": model.seed,
            "n_features": model.n_features,
            "scaling": {"mean": model.scaling.mean.tolist(),
                        "std": model.scaling.std.tolist()},
            "params": _params_to_dict(model)}


def model_from_dict(d: dict) -> ClassifierModel:
    if d.get("format_version") != MODEL_FORMAT_VERSION:
        raise ConfigError(f"unsupported model format version {d.get('format_version')!r}")
    alg = d["algorithm"]
    if alg not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {alg!r} in model file")
    scaling = FeatureScaling(mean=np.array(d["scaling"]["mean"]),
                             std=np.array(d["scaling"]["std"]))
    return ClassifierModel(algorithm=alg, scaling=scaling,
                           params=_params_from_dict(alg, d["params"]),
                           hyper=dict(d["hyper"]), n_features=int(d["n_features"]),
                           seed=d.get("seed"))


def save_model(model: ClassifierModel, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(model_to_dict(model), fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_model(path: str | Path) -> ClassifierModel:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no model file at {path}")
    with open(path) as fh:
        return model_from_dict(json.load(fh))
