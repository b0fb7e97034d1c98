"""Linear action scoring and the regularized linear classifier behind it.

The action scorer is a single weight vector over the block state-action
feature space; the greedy policy takes the argmax of the scores of the
legal actions, breaking exact ties toward the fixed action ordering. The
classifier minimizes an L2-regularized hinge loss by stochastic
subgradient descent with the 1/(lambda*t) step schedule, and is reused
one-vs-rest for the whole-document baseline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import features
from .mdp import Action, MdpState, available_actions
from .sparse import SparseVector

__all__ = [
    "LinearQ",
    "ClassifierConfig",
    "Greedy",
    "UniformRandom",
    "q_value",
    "action_scores",
    "select_action",
    "policy_callable",
    "train_linear",
    "train_multiclass_ovr",
    "hinge_objective",
    "hinge_subgradient",
    "save_model",
    "load_model",
]

MODEL_FORMAT_VERSION = 1


@dataclass
class LinearQ:
    theta: np.ndarray  # length (C + 2) * (2V + C)
    n_categories: int
    state_dim: int  # 2V + C

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=np.float64)
        expected = features.n_action_blocks(self.n_categories) * self.state_dim
        if self.theta.shape != (expected,):
            raise ValueError(f"theta has shape {self.theta.shape}, expected ({expected},)")
        if not np.all(np.isfinite(self.theta)):
            raise ValueError("theta contains non-finite entries")

    def blocks(self) -> np.ndarray:
        return self.theta.reshape(features.n_action_blocks(self.n_categories), self.state_dim)

    @staticmethod
    def zeros(n_categories: int, state_dim: int) -> "LinearQ":
        blocks = features.n_action_blocks(n_categories)
        return LinearQ(np.zeros(blocks * state_dim), n_categories, state_dim)


@dataclass(frozen=True)
class ClassifierConfig:
    lam: float = 1e-3
    epochs: int = 5
    seed: int = 0
    schedule: str = "inv-lambda-t"

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("regularization strength must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.schedule != "inv-lambda-t":
            raise ValueError(f"unknown learning-rate schedule {self.schedule!r}")


@dataclass(frozen=True)
class Greedy:
    q: LinearQ


@dataclass
class UniformRandom:
    seed: int
    _rng: np.random.Generator | None = field(default=None, repr=False, compare=False)

    def rng(self) -> np.random.Generator:
        if self._rng is None:
            self._rng = np.random.default_rng(self.seed)
        return self._rng


Policy = Greedy | UniformRandom


def q_value(q: LinearQ, state: MdpState, action: Action) -> float:
    phi = features.phi_state(state)
    if phi.dim != q.state_dim:
        raise ValueError(f"state features have dim {phi.dim}, scorer expects {q.state_dim}")
    block = features.action_block(action, q.n_categories)
    row = q.blocks()[block]
    return float(row[phi.indices] @ phi.values)


def action_scores(q: LinearQ, state: MdpState, mode: str) -> list[tuple[Action, float]]:
    """Scores of every legal action, in the fixed action order."""
    phi = features.phi_state(state)
    if phi.dim != q.state_dim:
        raise ValueError(f"state features have dim {phi.dim}, scorer expects {q.state_dim}")
    actions = available_actions(state, mode)
    blocks = np.fromiter(
        (features.action_block(a, q.n_categories) for a in actions),
        dtype=np.int64,
        count=len(actions),
    )
    scores = q.blocks()[np.ix_(blocks, phi.indices)] @ phi.values
    return list(zip(actions, scores.tolist()))


def select_action(
    policy: Policy,
    state: MdpState,
    mode: str,
    rng: np.random.Generator | None = None,
) -> Action:
    """Greedy argmax (first maximum wins on ties) or seeded uniform choice.

    A uniform-random policy draws from ``rng`` when one is supplied,
    otherwise from its own seeded stream.
    """
    if isinstance(policy, Greedy):
        scored = action_scores(policy.q, state, mode)
        best = max(range(len(scored)), key=lambda i: (scored[i][1], -i))
        return scored[best][0]
    actions = available_actions(state, mode)
    gen = rng if rng is not None else policy.rng()
    return actions[int(gen.integers(len(actions)))]


def policy_callable(policy: Policy, mode: str, rng: np.random.Generator | None = None):
    """Adapt a policy value to the bare state -> action callable episodes use."""
    return lambda state: select_action(policy, state, mode, rng)


def _check_examples(examples: Sequence[tuple[SparseVector, int]]):
    if not examples:
        raise ValueError("no training examples")
    labels = {label for _, label in examples}
    if not labels <= {-1, 1}:
        raise ValueError(f"labels must be +1/-1, got {sorted(labels)}")
    if len(labels) < 2:
        raise ValueError("training requires at least one example of each label")
    dim = examples[0][0].dim
    if any(x.dim != dim for x, _ in examples):
        raise ValueError("examples have inconsistent dimensions")
    return dim


def train_linear(examples: Sequence[tuple[SparseVector, int]], cfg: ClassifierConfig) -> np.ndarray:
    """Stochastic subgradient descent on the L2-regularized hinge loss.

    Objective: lam/2 * ||theta||^2 + mean_i max(0, 1 - y_i <theta, x_i>),
    minimized over ``cfg.epochs`` shuffled passes with step 1/(lam * t).
    Deterministic given the example order and seed. The weight vector is
    kept as scale * direction so each update touches only the example's
    support.
    """
    dim = _check_examples(examples)
    lam = cfg.lam
    v = np.zeros(dim)
    scale = 1.0
    t = 0
    rng = np.random.default_rng(cfg.seed)
    order = np.arange(len(examples))
    for _ in range(cfg.epochs):
        rng.shuffle(order)
        for i in order:
            t += 1
            x, y = examples[i]
            eta = 1.0 / (lam * t)
            margin = y * scale * float(v[x.indices] @ x.values)
            scale *= 1.0 - eta * lam  # = 1 - 1/t; zero exactly at t == 1
            if scale == 0.0:
                v[:] = 0.0
                scale = 1.0
            if margin < 1.0:
                v[x.indices] += (eta * y / scale) * x.values
            if scale < 1e-9:
                v *= scale
                scale = 1.0
    return scale * v


def train_multiclass_ovr(
    xs: Sequence[SparseVector],
    label_matrix: np.ndarray,
    cfg: ClassifierConfig,
) -> tuple[list[np.ndarray], list[int]]:
    """One binary classifier per class, class k against the rest.

    Returns (weight vectors, indices of classes that had no positive
    training example and were given an all-zero weight vector).
    """
    label_matrix = np.asarray(label_matrix)
    if label_matrix.ndim != 2 or label_matrix.shape[1] < 2:
        raise ValueError("label matrix must be (n_examples, C) with C >= 2")
    if len(xs) != label_matrix.shape[0]:
        raise ValueError("example/label count mismatch")
    dim = xs[0].dim
    weights: list[np.ndarray] = []
    empty_classes: list[int] = []
    for k in range(label_matrix.shape[1]):
        signs = np.where(label_matrix[:, k] == 1, 1, -1)
        if np.all(signs == -1):
            weights.append(np.zeros(dim))
            empty_classes.append(k)
            continue
        if np.all(signs == 1):
            # Degenerate but well-defined: everything is the class.
            weights.append(np.zeros(dim))
            empty_classes.append(k)
            continue
        per_class_cfg = ClassifierConfig(
            lam=cfg.lam, epochs=cfg.epochs, seed=cfg.seed + k, schedule=cfg.schedule
        )
        examples = [(x, int(s)) for x, s in zip(xs, signs)]
        weights.append(train_linear(examples, per_class_cfg))
    return weights, empty_classes


def hinge_objective(
    theta: np.ndarray, examples: Sequence[tuple[SparseVector, int]], lam: float
) -> float:
    total = 0.0
    for x, y in examples:
        total += max(0.0, 1.0 - y * float(theta[x.indices] @ x.values))
    return 0.5 * lam * float(theta @ theta) + total / len(examples)


def hinge_subgradient(
    theta: np.ndarray, examples: Sequence[tuple[SparseVector, int]], lam: float
) -> np.ndarray:
    """Subgradient of the full objective; the zero branch is taken at kinks."""
    g = lam * theta.copy()
    inv_m = 1.0 / len(examples)
    for x, y in examples:
        if y * float(theta[x.indices] @ x.values) < 1.0:
            g[x.indices] -= (inv_m * y) * x.values
    return g


def save_model(
    path,
    kind: str,
    mode: str,
    categories: Sequence[str],
    vocab_checksum: str,
    weights: dict[str, np.ndarray],
    metadata: dict | None = None,
) -> None:
    """Write a versioned model record with sparse weight storage."""
    record = {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": kind,
        "mode": mode,
        "categories": list(categories),
        "vocab_checksum": vocab_checksum,
        "block_mapping": {
            **{f"classify:{k}": k for k in range(len(categories))},
            "next": len(categories),
            "stop": len(categories) + 1,
        },
        "weights": {},
        "metadata": metadata or {},
    }
    for name, vec in weights.items():
        idx = np.nonzero(vec)[0]
        record["weights"][name] = {
            "dim": int(vec.shape[0]),
            "indices": idx.tolist(),
            "values": vec[idx].tolist(),
        }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(record, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_model(path, expected_checksum: str | None = None) -> dict:
    with open(path, encoding="utf-8") as fh:
        record = json.load(fh)
    if record.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {record.get('format_version')!r}")
    if expected_checksum is not None and record["vocab_checksum"] != expected_checksum:
        raise ValueError("vocabulary checksum mismatch: model was trained against a different vocabulary")
    weights = {}
    for name, w in record["weights"].items():
        vec = np.zeros(w["dim"])
        vec[np.asarray(w["indices"], dtype=np.int64)] = w["values"]
        weights[name] = vec
    record["weights"] = weights
    return record
