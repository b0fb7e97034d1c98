import numpy as np
import pytest

from stc.corpus import Document
from stc.sparse import SparseVector


def make_doc(n_sentences, y, vocab_size=4, seed=0, doc_id="doc"):
    """Tiny vectorized document with random unit sentence vectors."""
    rng = np.random.default_rng(seed)
    vectors = []
    for _ in range(n_sentences):
        dense = rng.random(vocab_size) * (rng.random(vocab_size) > 0.3)
        if dense.sum() == 0.0:
            dense[int(rng.integers(vocab_size))] = 1.0
        dense /= np.linalg.norm(dense)
        vectors.append(SparseVector.from_dense(dense))
    global_dense = rng.random(vocab_size)
    global_dense /= np.linalg.norm(global_dense)
    return Document(
        id=doc_id,
        y=np.asarray(y, dtype=np.int8),
        sentence_vectors=vectors,
        global_vector=SparseVector.from_dense(global_dense),
    )


class ScriptedPolicy:
    """Replays a fixed action sequence."""

    def __init__(self, actions):
        self._actions = list(actions)
        self._cursor = 0

    def __call__(self, state):
        action = self._actions[self._cursor]
        self._cursor += 1
        return action


@pytest.fixture
def tiny_doc():
    return make_doc(3, [1, 0])
