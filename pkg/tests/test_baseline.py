import numpy as np
import pytest

from conftest import make_doc
from stc import corpus as corpus_mod
from stc import synthetic
from stc.baseline import BaselineModel, predict_baseline, train_baseline
from stc.corpus import MONO_LABEL, MULTI_LABEL, CategorySet
from stc.policy import ClassifierConfig
from stc.sparse import SparseVector


def _model(weight_rows, mode):
    return BaselineModel(weights=np.asarray(weight_rows, dtype=float), mode=mode)


def _doc_with_global(dense, y):
    vec = SparseVector.from_dense(np.asarray(dense, dtype=float))
    return corpus_mod.Document(id="d", y=np.asarray(y, dtype=np.int8), sentence_vectors=[vec], global_vector=vec)


class TestPredict:
    def test_mono_argmax(self):
        # Weight rows scoring (0.2, -0.1, 0.7) against x = e0.
        model = _model([[0.2, 0.0], [-0.1, 0.0], [0.7, 0.0]], MONO_LABEL)
        doc = _doc_with_global([1.0, 0.0], [0, 0, 1])
        assert predict_baseline(model, doc).tolist() == [0, 0, 1]

    def test_mono_tie_goes_to_lowest_index(self):
        model = _model([[0.5, 0.0], [0.5, 0.0]], MONO_LABEL)
        doc = _doc_with_global([1.0, 0.0], [0, 1])
        assert predict_baseline(model, doc).tolist() == [1, 0]

    def test_multi_thresholds_at_zero(self):
        model = _model([[0.2, 0.0], [0.1, 0.0], [-3.0, 0.0]], MULTI_LABEL)
        doc = _doc_with_global([1.0, 0.0], [1, 1, 0])
        assert predict_baseline(model, doc).tolist() == [1, 1, 0]

    def test_multi_all_negative_falls_back_to_argmax(self):
        model = _model([[-0.2, 0.0], [-0.1, 0.0], [-3.0, 0.0]], MULTI_LABEL)
        doc = _doc_with_global([1.0, 0.0], [0, 1, 0])
        assert predict_baseline(model, doc).tolist() == [0, 1, 0]

    def test_mono_sum_is_one_multi_at_least_one(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            weights = rng.standard_normal((4, 3))
            dense = rng.random(3)
            doc = _doc_with_global(dense, [1, 0, 0, 0])
            mono = predict_baseline(_model(weights, MONO_LABEL), doc)
            multi = predict_baseline(_model(weights, MULTI_LABEL), doc)
            assert mono.sum() == 1
            assert multi.sum() >= 1

    def test_mono_invariant_under_joint_rescaling(self):
        rng = np.random.default_rng(4)
        weights = rng.standard_normal((3, 4))
        doc = _doc_with_global(rng.random(4), [1, 0, 0])
        a = predict_baseline(_model(weights, MONO_LABEL), doc)
        b = predict_baseline(_model(weights * 7.5, MONO_LABEL), doc)
        assert a.tolist() == b.tolist()

    def test_dimension_mismatch_rejected(self):
        model = _model([[0.1, 0.2, 0.3]] * 2, MONO_LABEL)
        doc = _doc_with_global([1.0, 0.0], [1, 0])
        with pytest.raises(ValueError):
            predict_baseline(model, doc)


class TestTrain:
    def _separable_corpus(self):
        spec = synthetic.SyntheticSpec(
            n_categories=2,
            docs_per_class=25,
            sentences_per_doc=2,
            keyword_positions=(1, 2),
            noise_vocab_size=10,
            seed=6,
        )
        raw = synthetic.generate(spec)
        categories = CategorySet.from_documents(raw)
        vocab = corpus_mod.build_vocabulary(raw)
        return corpus_mod.vectorize_corpus(raw, vocab, categories, MONO_LABEL)

    def test_zero_training_errors_on_separable_corpus(self):
        docs = self._separable_corpus()
        model = train_baseline(docs, ClassifierConfig(lam=1e-3, epochs=20, seed=0), MONO_LABEL)
        errors = sum(
            1 for d in docs if predict_baseline(model, d).tolist() != d.y.tolist()
        )
        assert errors == 0

    def test_absent_class_flagged(self):
        docs = [make_doc(2, [1, 0, 0], seed=s) for s in range(4)] + [
            make_doc(2, [0, 1, 0], seed=s + 10) for s in range(4)
        ]
        model = train_baseline(docs, ClassifierConfig(epochs=2), MONO_LABEL)
        assert model.empty_classes == (2,)
        assert np.all(model.weights[2] == 0.0)

    def test_deterministic(self):
        docs = self._separable_corpus()
        cfg = ClassifierConfig(lam=1e-3, epochs=5, seed=3)
        a = train_baseline(docs, cfg, MONO_LABEL)
        b = train_baseline(docs, cfg, MONO_LABEL)
        np.testing.assert_array_equal(a.weights, b.weights)

    def test_empty_training_set_rejected(self):
        with pytest.raises(ValueError):
            train_baseline([], ClassifierConfig(), MONO_LABEL)
