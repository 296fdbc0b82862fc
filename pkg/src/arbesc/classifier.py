"""Logistic-regression edit classifier trained with mini-batch SGD on binary cross-entropy."""
from __future__ import annotations

import json
import logging
import warnings
from dataclasses import asdict, dataclass, field
from typing import List, Sequence

import numpy as np

from .alignment import TYPES, Edit
from .candidates import CandidateSet

log = logging.getLogger(__name__)

LOGIT_CLAMP = 30.0
MODEL_FORMAT = "arbesc-linear-model"
MODEL_VERSION = 1


class ShapeError(ValueError):
    pass


class DivergenceError(RuntimeError):
    def __init__(self, epoch, loss):
        self.epoch = epoch
        super().__init__(f"non-finite training loss {loss} at epoch {epoch}")


class ModelFormatError(ValueError):
    pass


@dataclass
class TrainingConfig:
    learning_rate: float = 0.1
    batch_size: int = 16
    epochs: int = 50
    weight_decay: float = 0.0
    momentum: float = 0.0
    dampening: float = 0.0
    shuffle: bool = True
    seed: int = 0
    tol: float = 1e-6  # early stop once the epoch loss improves by less than this

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")


@dataclass
class LabeledExample:
    features: np.ndarray
    label: int

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label}")


@dataclass
class LinearModel:
    weights: np.ndarray
    bias: float
    k: int
    type_set: tuple = TYPES
    config: TrainingConfig = field(default_factory=TrainingConfig)
    loss_history: List[float] = field(default_factory=list, compare=False)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.type_set = tuple(self.type_set)
        if self.weights.shape != (self.dim,):
            raise ShapeError(f"weights of shape {self.weights.shape} do not match layout dim {self.dim}")

    @property
    def dim(self) -> int:
        return self.k * len(self.type_set)

    def logits(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[-1] != self.dim:
            raise ShapeError(f"feature length {X.shape[-1]} != model dim {self.dim} (k={self.k})")
        return np.clip(X @ self.weights + self.bias, -LOGIT_CLAMP, LOGIT_CLAMP)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return sigmoid(self.logits(X))


def sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def score(model: LinearModel, x) -> float:
    return float(model.predict_proba(np.asarray(x, dtype=np.float64)))


def label_candidates(cands: CandidateSet, gold: Sequence[Edit]) -> List[LabeledExample]:
    """Label 1 exactly when a candidate's (a, b, replacement) appears among the gold edits."""
    gold_keys = {e.key for e in gold}
    X = cands.features()
    return [LabeledExample(x, int(c.edit.key in gold_keys)) for x, c in zip(X, cands.candidates)]


def bce_loss(w, b, X, y) -> float:
    """Mean binary cross-entropy on clamped logits."""
    z = np.clip(X @ w + b, -LOGIT_CLAMP, LOGIT_CLAMP)
    # log(1 + e^z) - y z, written stably
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


def bce_gradient(w, b, X, y):
    """Gradient of :func:`bce_loss` with respect to ``(w, b)``."""
    z = np.clip(X @ w + b, -LOGIT_CLAMP, LOGIT_CLAMP)
    r = sigmoid(z) - y
    return X.T @ r / len(y), float(np.mean(r))


def _stack(data: Sequence[LabeledExample]):
    X = np.stack([np.asarray(ex.features, dtype=np.float64) for ex in data])
    y = np.array([ex.label for ex in data], dtype=np.float64)
    return X, y


def train(data: Sequence[LabeledExample], cfg: TrainingConfig = None, k: int = None,
          type_set=TYPES) -> LinearModel:
    cfg = cfg or TrainingConfig()
    if not data:
        raise ValueError("cannot train on an empty dataset")
    X, y = _stack(data)
    if k is None:
        k, rem = divmod(X.shape[1], len(type_set))
        if rem:
            raise ShapeError(f"feature length {X.shape[1]} is not a multiple of {len(type_set)}")
    elif X.shape[1] != k * len(type_set):
        raise ShapeError(f"feature length {X.shape[1]} != {k} * {len(type_set)}")
    if y.min() == y.max():
        warnings.warn(f"training data holds only label {int(y[0])}", RuntimeWarning)

    rng = np.random.default_rng(cfg.seed)
    w = np.zeros(X.shape[1])
    b = 0.0
    buf_w = buf_b = None
    history = []
    prev = bce_loss(w, b, X, y)
    n = len(y)
    for epoch in range(cfg.epochs):
        order = rng.permutation(n) if cfg.shuffle else np.arange(n)
        for start in range(0, n, cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            gw, gb = bce_gradient(w, b, X[idx], y[idx])
            if cfg.weight_decay:
                gw = gw + cfg.weight_decay * w
                gb = gb + cfg.weight_decay * b
            if cfg.momentum:
                if buf_w is None:
                    buf_w, buf_b = gw.copy(), gb
                else:
                    buf_w = cfg.momentum * buf_w + (1 - cfg.dampening) * gw
                    buf_b = cfg.momentum * buf_b + (1 - cfg.dampening) * gb
                gw, gb = buf_w, buf_b
            w = w - cfg.learning_rate * gw
            b = b - cfg.learning_rate * gb
        loss = bce_loss(w, b, X, y)
        if not np.isfinite(loss):
            raise DivergenceError(epoch, loss)
        history.append(loss)
        log.debug("epoch %d loss %.6f", epoch, loss)
        if prev - loss < cfg.tol:
            break
        prev = loss
    return LinearModel(w, b, k, tuple(type_set), cfg, history)


def save_model(model: LinearModel) -> bytes:
    doc = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "layout": {"k": model.k, "type_set": list(model.type_set), "order": "system-major"},
        "dim": model.dim,
        "weights": [float(v) for v in model.weights],
        "bias": float(model.bias),
        "hyperparams": asdict(model.config),
    }
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def load_model(blob: bytes) -> LinearModel:
    try:
        doc = json.loads(blob.decode("utf-8") if isinstance(blob, (bytes, bytearray)) else blob)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"unreadable model file: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise ModelFormatError("not an arbesc model file")
    if doc.get("version") != MODEL_VERSION:
        raise ModelFormatError(f"unsupported model version {doc.get('version')}")
    try:
        layout = doc["layout"]
        if layout.get("order") != "system-major":
            raise ModelFormatError(f"unknown feature layout {layout.get('order')!r}")
        k, type_set = int(layout["k"]), tuple(layout["type_set"])
        weights = np.array(doc["weights"], dtype=np.float64)
        if doc["dim"] != k * len(type_set) or weights.shape != (doc["dim"],):
            raise ModelFormatError("weight vector does not match the recorded layout")
        cfg = TrainingConfig(**doc["hyperparams"])
        return LinearModel(weights, float(doc["bias"]), k, type_set, cfg)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ModelFormatError):
            raise
        raise ModelFormatError(f"malformed model file: {exc}") from exc
