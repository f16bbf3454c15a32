"""Trainable CEFR level classifier (multinomial logistic regression).

Training is deterministic: features are standardized with statistics taken
from the training set (stored on the model), weights start at zero, and a
fixed number of full-batch gradient steps runs on the cross-entropy loss
with an L2 penalty on the weights (bias unpenalized). Models persist as
JSON and classification is a single standardize + softmax pass.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .features import FEATURE_NAMES, FeatureVector, feature_array
from .levels import CLASSIFIER_LEVELS, ordinal

MODEL_FORMAT_VERSION = 1


class ClassifierError(ValueError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    l2: float = 1e-4
    epochs: int = 500


@dataclass
class CefrModel:
    """Fitted weights plus the standardization statistics they assume."""
    labels: list[str]
    weights: np.ndarray        # (k, d)
    bias: np.ndarray           # (k,)
    means: np.ndarray          # (d,)
    scales: np.ndarray         # (d,) strictly positive
    feature_names: list[str] = field(default_factory=lambda: list(FEATURE_NAMES))
    hyperparams: dict = field(default_factory=dict)

    def __post_init__(self):
        if not np.all(np.isfinite(self.weights)) or not np.all(np.isfinite(self.bias)):
            raise ClassifierError("model weights must be finite")
        if np.any(self.scales <= 0):
            raise ClassifierError("standardization scales must be > 0")

    def save(self, path: str) -> None:
        doc = {
            "format_version": MODEL_FORMAT_VERSION,
            "labels": self.labels,
            "feature_names": self.feature_names,
            "weights": self.weights.tolist(),
            "bias": self.bias.tolist(),
            "means": self.means.tolist(),
            "scales": self.scales.tolist(),
            "hyperparams": self.hyperparams,
        }
        with open(path, "w", encoding="utf-8") as f:
            json.dump(doc, f, indent=2)
            f.write("\n")

    @classmethod
    def load(cls, path: str) -> "CefrModel":
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
        if doc.get("format_version") != MODEL_FORMAT_VERSION:
            raise ClassifierError(f"unsupported model format: {doc.get('format_version')}")
        return cls(
            labels=list(doc["labels"]),
            weights=np.asarray(doc["weights"], dtype=np.float64),
            bias=np.asarray(doc["bias"], dtype=np.float64),
            means=np.asarray(doc["means"], dtype=np.float64),
            scales=np.asarray(doc["scales"], dtype=np.float64),
            feature_names=list(doc["feature_names"]),
            hyperparams=dict(doc.get("hyperparams", {})),
        )

    @classmethod
    def zero(cls, labels: tuple[str, ...] = CLASSIFIER_LEVELS,
             n_features: int = len(FEATURE_NAMES)) -> "CefrModel":
        """All-zero model: uniform probabilities for every input."""
        k = len(labels)
        return cls(labels=list(labels), weights=np.zeros((k, n_features)),
                   bias=np.zeros(k), means=np.zeros(n_features),
                   scales=np.ones(n_features))


def softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def loss_and_grad(w: np.ndarray, b: np.ndarray, x: np.ndarray, onehot: np.ndarray,
                  l2: float) -> tuple[float, np.ndarray, np.ndarray]:
    """Cross-entropy objective and its analytic gradient (test hook and
    single source of truth for what the training loop descends)."""
    n = x.shape[0]
    probs = softmax(x @ w.T + b)
    eps = 1e-300
    loss = -np.sum(onehot * np.log(probs + eps)) / n + 0.5 * l2 * float(np.sum(w * w))
    diff = probs - onehot
    gw = diff.T @ x / n + l2 * w
    gb = diff.sum(axis=0) / n
    return float(loss), gw, gb


def _as_matrix(dataset: list[tuple[FeatureVector, str]]) -> tuple[np.ndarray, list[str]]:
    rows = []
    labels = []
    for row_no, (fv, label) in enumerate(dataset):
        arr = feature_array(fv)
        bad = np.where(~np.isfinite(arr))[0]
        if bad.size:
            raise ClassifierError(
                f"non-finite feature {FEATURE_NAMES[bad[0]]!r} in row {row_no}")
        rows.append(arr)
        labels.append(label)
    return np.vstack(rows), labels


def train(dataset: list[tuple[FeatureVector, str]],
          hyperparams: TrainConfig = TrainConfig()) -> CefrModel:
    """Fit the classifier on (feature vector, level) pairs.

    Labels are ordered by CEFR ordinal; at least two distinct labels are
    required. Deterministic for fixed hyperparameters.
    """
    if not dataset:
        raise ClassifierError("empty training set")
    x, raw_labels = _as_matrix(dataset)
    labels = sorted(set(raw_labels), key=ordinal)
    if len(labels) < 2:
        raise ClassifierError(f"need at least 2 distinct labels, got {labels}")
    label_index = {lbl: i for i, lbl in enumerate(labels)}

    means = x.mean(axis=0)
    scales = x.std(axis=0)
    scales[scales == 0] = 1.0
    xs = (x - means) / scales

    onehot = np.zeros((x.shape[0], len(labels)))
    for i, lbl in enumerate(raw_labels):
        onehot[i, label_index[lbl]] = 1.0

    w, b = _kernels.gd_epochs_fast(
        np.ascontiguousarray(xs), onehot,
        hyperparams.learning_rate, hyperparams.l2, hyperparams.epochs)

    return CefrModel(
        labels=labels, weights=w, bias=b, means=means, scales=scales,
        hyperparams={"learning_rate": hyperparams.learning_rate,
                     "l2": hyperparams.l2, "epochs": hyperparams.epochs,
                     "backend": _kernels.KERNEL_BACKEND},
    )


def classify(model: CefrModel, fv: FeatureVector) -> tuple[str, dict[str, float]]:
    """Predict a level and the per-level probabilities (they sum to 1).

    Ties resolve to the lowest level because labels are stored in scale
    order and argmax takes the first maximum.
    """
    arr = feature_array(fv) if isinstance(fv, dict) else np.asarray(fv, dtype=np.float64)
    if arr.shape[0] != model.weights.shape[1]:
        raise ClassifierError(
            f"feature dimension {arr.shape[0]} does not match model "
            f"({model.weights.shape[1]})")
    xs = (arr - model.means) / model.scales
    probs = softmax(model.weights @ xs + model.bias)
    best = int(np.argmax(probs))
    return model.labels[best], {lbl: float(p) for lbl, p in zip(model.labels, probs)}


def within_distance_accuracy(pred: list[str], gold: list[str], d: int = 0) -> float:
    """Share of predictions within `d` scale steps of gold (d=0: exact)."""
    if len(pred) != len(gold):
        raise ClassifierError(f"length mismatch: {len(pred)} vs {len(gold)}")
    if not pred:
        raise ClassifierError("empty input")
    hits = sum(abs(ordinal(p) - ordinal(g)) <= d for p, g in zip(pred, gold))
    return hits / len(pred)
