"""Rollout-based policy iteration for the reading agent.

Each round samples states from trajectories of the current policy, scores
every legal action in each sampled state by monte-carlo rollouts (take
the action, then follow the current policy to termination, observe the
final F1), labels the maximizing actions good and the rest bad, and fits
the linear action scorer to separate them. The greedy policy of the
fitted scorer becomes the next round's policy.

Per-state randomness is drawn from a stream derived from (seed, state
ordinal), so the sampled workload is independent of scheduling and the
first n states of a larger budget coincide with a smaller one's.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import features
from .corpus import Document, TaskMode
from .mdp import (
    Action,
    MdpState,
    available_actions,
    initial_state,
    is_terminal,
    max_episode_steps,
    prf1,
    run_episode,
    transition,
)
from .policy import (
    ClassifierConfig,
    Greedy,
    LinearQ,
    Policy,
    UniformRandom,
    policy_callable,
    select_action,
    train_linear,
)
from .sparse import SparseVector

__all__ = [
    "RolloutConfig",
    "LabeledStateAction",
    "RolloutBatch",
    "PolicyTrainResult",
    "sample_state",
    "rollout_return",
    "build_training_set",
    "mean_episode_reward",
    "policy_iteration",
]

# Minimum improvement in mean training reward for a round to count as
# progress, and how many stalled rounds to tolerate before stopping. One
# stalled round is routinely followed by a breakthrough (the policy dips
# while it shifts from label-at-sight to read-then-label behavior), so a
# single non-improving round must not end training.
EARLY_STOP_MARGIN = 1e-4
EARLY_STOP_PATIENCE = 2


@dataclass(frozen=True)
class RolloutConfig:
    n_states: int = 10000
    rollouts_per_state: int = 1
    iterations: int = 5
    seed: int = 0
    classifier: ClassifierConfig = ClassifierConfig()

    def __post_init__(self):
        if self.n_states < 1:
            raise ValueError("n_states must be >= 1")
        if self.rollouts_per_state < 1:
            raise ValueError("rollouts_per_state must be >= 1")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")


@dataclass(frozen=True)
class LabeledStateAction:
    features: SparseVector  # state-action block features
    label: int  # +1 good, -1 bad
    state_ordinal: int
    action: Action


@dataclass
class RolloutBatch:
    examples: list[LabeledStateAction]
    n_states: int
    n_skipped_states: int


@dataclass
class PolicyTrainResult:
    q: LinearQ
    telemetry: list[dict]  # one record per iteration


def sample_state(
    train_docs: list[Document],
    policy: Policy,
    mode: TaskMode,
    rng: np.random.Generator,
) -> MdpState:
    """Pick a training document uniformly, walk the policy's trajectory on
    it, and return one of the visited live states uniformly."""
    doc = train_docs[int(rng.integers(len(train_docs)))]
    state = initial_state(doc)
    visited = [state]
    budget = max_episode_steps(doc, len(doc.y))
    for _ in range(budget):
        action = select_action(policy, state, mode, rng)
        state = transition(state, action, mode)
        if is_terminal(state, mode):
            return visited[int(rng.integers(len(visited)))]
        visited.append(state)
    raise RuntimeError(f"policy failed to terminate on document {doc.id!r}")


def rollout_return(
    state: MdpState,
    first_action: Action,
    policy: Policy,
    y,
    mode: TaskMode,
    rng: np.random.Generator,
    n_rollouts: int = 1,
) -> float:
    """Estimated return of taking ``first_action`` and then following
    ``policy`` to termination: the mean final F1 over independent rollouts."""
    total = 0.0
    budget = max_episode_steps(state.doc, len(state.assigned))
    for _ in range(n_rollouts):
        current = transition(state, first_action, mode)
        steps = 0
        while not is_terminal(current, mode):
            if steps > budget:
                raise RuntimeError("rollout exceeded the episode step budget")
            action = select_action(policy, current, mode, rng)
            current = transition(current, action, mode)
            steps += 1
        total += prf1(y, current.assigned)[2]
    return total / n_rollouts


def build_training_set(
    train_docs: list[Document],
    policy: Policy,
    mode: TaskMode,
    cfg: RolloutConfig,
) -> RolloutBatch:
    """Sample states and label every legal action by its rollout return.

    Actions attaining the per-state maximum estimated return are labeled
    +1 and the rest -1 (exact comparison; returns are finite sums of
    identical F1 computations). States where every action ties contribute
    nothing.
    """
    examples: list[LabeledStateAction] = []
    n_skipped = 0
    for ordinal in range(cfg.n_states):
        rng = np.random.default_rng([cfg.seed, ordinal])
        state = sample_state(train_docs, policy, mode, rng)
        actions = available_actions(state, mode)
        returns = [
            rollout_return(state, a, policy, state.doc.y, mode, rng, cfg.rollouts_per_state)
            for a in actions
        ]
        best = max(returns)
        if all(r == best for r in returns):
            n_skipped += 1
            continue
        for action, ret in zip(actions, returns):
            examples.append(
                LabeledStateAction(
                    features=features.phi_state_action(state, action),
                    label=1 if ret == best else -1,
                    state_ordinal=ordinal,
                    action=action,
                )
            )
    return RolloutBatch(examples=examples, n_states=cfg.n_states, n_skipped_states=n_skipped)


def mean_episode_reward(docs: list[Document], policy: Policy, mode: TaskMode) -> float:
    """Mean greedy-episode reward of a policy over a document set."""
    step = policy_callable(policy, mode)
    return float(np.mean([run_episode(doc, step, mode).reward for doc in docs]))


def _derived_seed(seed: int, salt: int) -> int:
    return int(np.random.SeedSequence([seed, salt]).generate_state(1)[0])


def policy_iteration(
    train_docs: list[Document],
    mode: TaskMode,
    cfg: RolloutConfig,
) -> PolicyTrainResult:
    """Iterate rollout labeling and classifier fitting from a random policy.

    Training stops once EARLY_STOP_PATIENCE consecutive rounds fail to
    improve the best mean training-set episode reward by more than
    EARLY_STOP_MARGIN, and returns the weights of the best-scoring greedy
    policy seen. Rollouts always continue from the newest policy, even
    after a dip: the dip round's trajectories are what the next round
    learns from. The initial random policy only drives the first round of
    rollouts; it is never a returnable result.
    """
    if not train_docs:
        raise ValueError("policy_iteration needs a non-empty training set")
    n_categories = len(train_docs[0].y)
    dim = features.state_dim(train_docs[0].sentence_vectors[0].dim, n_categories)

    current: Policy = UniformRandom(cfg.seed)
    telemetry: list[dict] = []
    best_q: LinearQ | None = None
    best_reward = -np.inf
    stalled_rounds = 0
    for iteration in range(1, cfg.iterations + 1):
        round_cfg = replace(cfg, seed=_derived_seed(cfg.seed, iteration))
        batch = build_training_set(train_docs, current, mode, round_cfg)
        if not batch.examples:
            raise RuntimeError(f"iteration {iteration}: every sampled state tied; no training examples")
        classifier_cfg = replace(cfg.classifier, seed=cfg.classifier.seed + iteration)
        theta = train_linear([(e.features, e.label) for e in batch.examples], classifier_cfg)
        q = LinearQ(theta, n_categories, dim)
        candidate = Greedy(q)
        candidate_reward = mean_episode_reward(train_docs, candidate, mode)
        telemetry.append(
            {
                "iteration": iteration,
                "n_examples": len(batch.examples),
                "n_skipped_states": batch.n_skipped_states,
                "mean_episode_reward": candidate_reward,
            }
        )
        improved = candidate_reward > best_reward + EARLY_STOP_MARGIN
        # Ties go to the newest policy: it was trained on rollouts from a
        # stronger continuation, and at small training sizes the first
        # round's perfect-looking training reward is pure memorization.
        if candidate_reward >= best_reward:
            best_q = q
            best_reward = candidate_reward
        if improved:
            stalled_rounds = 0
        else:
            stalled_rounds += 1
            if stalled_rounds >= EARLY_STOP_PATIENCE:
                break
        current = candidate
    assert best_q is not None
    return PolicyTrainResult(q=best_q, telemetry=telemetry)
