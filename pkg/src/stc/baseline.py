"""Whole-document linear baseline.

One-vs-rest hinge-loss classifiers over each document's normalized tf-idf
global vector. Mono-label prediction is the argmax of the per-class
scores; multi-label prediction thresholds each score at zero, falling
back to the argmax when nothing is positive so at least one label is
always assigned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Document, MONO_LABEL, TaskMode
from .policy import ClassifierConfig, train_multiclass_ovr

__all__ = ["BaselineModel", "train_baseline", "predict_baseline"]


@dataclass
class BaselineModel:
    weights: np.ndarray  # (C, V)
    mode: TaskMode
    empty_classes: tuple[int, ...] = ()


def train_baseline(train_docs: list[Document], cfg: ClassifierConfig, mode: TaskMode = MONO_LABEL) -> BaselineModel:
    if not train_docs:
        raise ValueError("baseline training needs a non-empty training set")
    xs = [doc.global_vector for doc in train_docs]
    label_matrix = np.stack([doc.y for doc in train_docs])
    weights, empty = train_multiclass_ovr(xs, label_matrix, cfg)
    return BaselineModel(weights=np.stack(weights), mode=mode, empty_classes=tuple(empty))


def predict_baseline(model: BaselineModel, doc: Document) -> np.ndarray:
    x = doc.global_vector
    if x.dim != model.weights.shape[1]:
        raise ValueError(f"document vector dim {x.dim} does not match model dim {model.weights.shape[1]}")
    scores = model.weights[:, x.indices] @ x.values
    y_hat = np.zeros(model.weights.shape[0], dtype=np.int8)
    if model.mode == MONO_LABEL:
        y_hat[int(np.argmax(scores))] = 1
    else:
        y_hat[scores > 0.0] = 1
        if not y_hat.any():
            y_hat[int(np.argmax(scores))] = 1
    return y_hat
