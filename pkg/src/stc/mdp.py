"""Deterministic episodic decision process for sentence-by-sentence reading.

A state is (document, cursor p, assigned labels, halted). From any live
state the agent may assign a not-yet-assigned category, read the next
sentence (when one remains), or stop. Stopping is the only way to halt,
so a state is terminal exactly when it is halted. The episode reward is
the F1 of the final assignment against the document's true labels, paid
on the halting transition and zero elsewhere.

In mono-label mode assigning a label restricts the remaining action set
to {stop}, so an episode carries at most one assignment and its reward is
the 0/1 accuracy of that choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .corpus import Document, MONO_LABEL, MULTI_LABEL, TaskMode

__all__ = [
    "Action",
    "MdpState",
    "EpisodeLog",
    "NEXT",
    "STOP",
    "classify",
    "initial_state",
    "available_actions",
    "transition",
    "is_terminal",
    "prf1",
    "reward",
    "run_episode",
    "max_episode_steps",
]


@dataclass(frozen=True, slots=True)
class Action:
    kind: str  # "classify" | "next" | "stop"
    category: int = -1  # category index for classify actions

    def __str__(self) -> str:
        if self.kind == "classify":
            return f"classify:{self.category}"
        return self.kind

    @staticmethod
    def parse(text: str) -> "Action":
        if text == "next":
            return NEXT
        if text == "stop":
            return STOP
        if text.startswith("classify:"):
            return classify(int(text.split(":", 1)[1]))
        raise ValueError(f"unknown action {text!r}")


NEXT = Action("next")
STOP = Action("stop")


def classify(category: int) -> Action:
    return Action("classify", category)


@dataclass(frozen=True, slots=True)
class MdpState:
    doc: Document
    p: int  # 1-based cursor; sentences 1..p are read
    assigned: tuple[int, ...]  # binary, length C
    halted: bool = False

    def __post_init__(self):
        if not 1 <= self.p <= self.doc.n_sentences:
            raise ValueError(f"cursor {self.p} outside 1..{self.doc.n_sentences}")


@dataclass(frozen=True)
class EpisodeLog:
    doc_id: str
    actions: tuple[Action, ...]
    sentences_read: int  # highest cursor visited
    n_sentences: int
    final_assigned: tuple[int, ...]
    reward: float

    def to_record(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "actions": [str(a) for a in self.actions],
            "read": self.sentences_read,
            "n": self.n_sentences,
            "yhat": list(self.final_assigned),
            "reward": self.reward,
        }


def initial_state(doc: Document) -> MdpState:
    return MdpState(doc=doc, p=1, assigned=(0,) * len(doc.y), halted=False)


def available_actions(state: MdpState, mode: TaskMode) -> list[Action]:
    """Legal actions, in the fixed order classify(0..C-1), next, stop.

    Mono-label mode: once a label is assigned only stop remains. Next is
    unavailable on the last sentence in both modes.
    """
    if state.halted:
        raise ValueError("no actions are available in a halted state")
    if mode == MONO_LABEL and any(state.assigned):
        return [STOP]
    actions = [classify(k) for k, taken in enumerate(state.assigned) if not taken]
    if state.p < state.doc.n_sentences:
        actions.append(NEXT)
    actions.append(STOP)
    return actions


def _is_legal(state: MdpState, action: Action, mode: TaskMode) -> bool:
    if state.halted:
        return False
    if mode == MONO_LABEL and any(state.assigned):
        return action.kind == "stop"
    if action.kind == "classify":
        return 0 <= action.category < len(state.assigned) and not state.assigned[action.category]
    if action.kind == "next":
        return state.p < state.doc.n_sentences
    return action.kind == "stop"


def transition(state: MdpState, action: Action, mode: TaskMode) -> MdpState:
    """Apply one action, returning a fresh state (inputs are untouched)."""
    if not _is_legal(state, action, mode):
        raise ValueError(f"action {action} is illegal in state (p={state.p}, assigned={state.assigned})")
    if action.kind == "classify":
        assigned = list(state.assigned)
        assigned[action.category] = 1
        return MdpState(state.doc, state.p, tuple(assigned), False)
    if action.kind == "next":
        return MdpState(state.doc, state.p + 1, state.assigned, False)
    return MdpState(state.doc, state.p, state.assigned, True)


def is_terminal(state: MdpState, mode: TaskMode) -> bool:
    # Stop is available in every live state, so terminal <=> halted.
    return state.halted


def prf1(y: Sequence[int], y_hat: Sequence[int]) -> tuple[float, float, float]:
    """Precision, recall, and F1 from true-positive counts.

    Zero denominators (no predictions, no gold labels, or p + r = 0) give
    zero for the affected quantity.
    """
    y = np.asarray(y)
    y_hat = np.asarray(y_hat)
    if y.shape != y_hat.shape:
        raise ValueError(f"label vectors differ in length: {y.shape} vs {y_hat.shape}")
    tp = int(np.sum((y == 1) & (y_hat == 1)))
    n_pred = int(np.sum(y_hat == 1))
    n_gold = int(np.sum(y == 1))
    p = tp / n_pred if n_pred else 0.0
    r = tp / n_gold if n_gold else 0.0
    f1 = 2.0 * p * r / (p + r) if p + r > 0.0 else 0.0
    return p, r, f1


def reward(state: MdpState, action: Action, y: Sequence[int], mode: TaskMode) -> float:
    """F1 of the assignment when the action halts the episode, else 0."""
    successor = transition(state, action, mode)
    if is_terminal(successor, mode):
        return prf1(y, successor.assigned)[2]
    return 0.0


def max_episode_steps(doc: Document, n_categories: int) -> int:
    # At most n-1 next actions, C classify actions, and one stop.
    return doc.n_sentences + n_categories + 1


def run_episode(
    doc: Document,
    policy: Callable[[MdpState], Action],
    mode: TaskMode,
) -> EpisodeLog:
    """Run ``policy`` from the initial state until the episode halts.

    The policy must return a legal action for every live state it sees;
    an illegal choice raises. Termination is guaranteed within
    n(doc) + C + 1 steps because every action strictly consumes a finite
    resource (sentences, unassigned categories, or the episode itself).
    """
    state = initial_state(doc)
    actions: list[Action] = []
    total_reward = 0.0
    max_p = state.p
    step_budget = max_episode_steps(doc, len(doc.y))
    while not is_terminal(state, mode):
        if len(actions) >= step_budget:
            raise RuntimeError(f"episode on {doc.id!r} exceeded its step budget")
        action = policy(state)
        state = transition(state, action, mode)
        if is_terminal(state, mode):
            total_reward += prf1(doc.y, state.assigned)[2]
        actions.append(action)
        max_p = max(max_p, state.p)
    return EpisodeLog(
        doc_id=doc.id,
        actions=tuple(actions),
        sentences_read=max_p,
        n_sentences=doc.n_sentences,
        final_assigned=state.assigned,
        reward=total_reward,
    )
