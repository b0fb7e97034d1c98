import json
import math

import numpy as np
import pytest

from stc import corpus
from stc.corpus import (
    CategorySet,
    RawDocument,
    Vocabulary,
    build_vocabulary,
    convert_cardoso,
    corpus_stats,
    load_jsonl,
    make_splits,
    save_jsonl,
    vectorize_corpus,
    vectorize_sentence,
)


def _doc(doc_id, labels, sentences):
    return RawDocument(id=doc_id, labels=frozenset(labels), sentences=sentences)


def _write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")


class TestLoadJsonl:
    def test_text_field_is_split_on_periods(self, tmp_path):
        path = tmp_path / "c.jsonl"
        _write_jsonl(path, [{"id": "d1", "labels": ["earn"], "text": "Profit up. Costs down."}])
        docs, dropped = load_jsonl(path)
        assert dropped == 0
        assert len(docs) == 1 and len(docs[0].sentences) == 2

    def test_empty_labels_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        _write_jsonl(path, [{"id": "d1", "labels": [], "text": "x y z."}])
        with pytest.raises(ValueError, match="line 1"):
            load_jsonl(path)

    def test_duplicate_id_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        _write_jsonl(path, [
            {"id": "d1", "labels": ["a"], "text": "one."},
            {"id": "d1", "labels": ["b"], "text": "two."},
        ])
        with pytest.raises(ValueError, match="duplicate id"):
            load_jsonl(path)

    def test_malformed_line_names_line_number(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id": "d1", "labels": ["a"], "text": "x."}\nnot json\n', encoding="utf-8")
        with pytest.raises(ValueError, match="line 2"):
            load_jsonl(path)

    def test_empty_documents_are_counted(self, tmp_path):
        path = tmp_path / "c.jsonl"
        _write_jsonl(path, [
            {"id": "d1", "labels": ["a"], "text": "..."},
            {"id": "d2", "labels": ["a"], "text": "kept."},
        ])
        docs, dropped = load_jsonl(path)
        assert dropped == 1 and [d.id for d in docs] == ["d2"]

    def test_save_load_roundtrip(self, tmp_path):
        docs = [_doc("a", {"x"}, ["one two", "three"]), _doc("b", {"y", "x"}, ["four"])]
        path = tmp_path / "c.jsonl"
        save_jsonl(docs, path)
        loaded, dropped = load_jsonl(path)
        assert dropped == 0
        assert [(d.id, d.labels, d.sentences) for d in loaded] == [
            (d.id, d.labels, d.sentences) for d in docs
        ]


class TestConvertCardoso:
    def test_field_split(self, tmp_path):
        train = tmp_path / "train.txt"
        test = tmp_path / "test.txt"
        train.write_text("earn\tchampion products approves stock split. more text.\n", encoding="utf-8")
        test.write_text("acq\tcompany acquires rival.\n", encoding="utf-8")
        docs = convert_cardoso(train, test)
        assert len(docs) == 2
        assert docs[0].labels == frozenset(["earn"])
        assert docs[0].provenance == "train"
        assert docs[1].provenance == "test"

    def test_missing_tab_is_an_error(self, tmp_path):
        train = tmp_path / "train.txt"
        test = tmp_path / "test.txt"
        train.write_text("earn no tab here\n", encoding="utf-8")
        test.write_text("", encoding="utf-8")
        with pytest.raises(ValueError, match="line 1"):
            convert_cardoso(train, test)

    def test_empty_files_give_empty_list(self, tmp_path):
        train = tmp_path / "train.txt"
        test = tmp_path / "test.txt"
        train.write_text("", encoding="utf-8")
        test.write_text("\n\n", encoding="utf-8")
        assert convert_cardoso(train, test) == []


class TestVocabulary:
    def test_df_and_idf_from_two_docs(self):
        docs = [
            _doc("d1", {"a"}, ["prices of cocoa"]),
            _doc("d2", {"a"}, ["prices"]),
        ]
        vocab = build_vocabulary(docs)
        assert vocab.df["price"] == 2
        assert vocab.df["cocoa"] == 1
        assert vocab.idf[vocab.index["price"]] == pytest.approx(0.0, abs=1e-12)
        assert vocab.idf[vocab.index["cocoa"]] == pytest.approx(math.log(2.0), abs=1e-12)

    def test_single_doc_all_idf_zero(self):
        vocab = build_vocabulary([_doc("d1", {"a"}, ["cocoa prices cocoa"])])
        assert np.all(vocab.idf == 0.0)

    def test_df_counts_documents_not_sentences(self):
        vocab = build_vocabulary([_doc("d1", {"a"}, ["cocoa rose", "cocoa fell"])])
        assert vocab.df["cocoa"] == 1

    def test_unseen_terms_absent(self):
        vocab = build_vocabulary([_doc("d1", {"a"}, ["cocoa"])])
        assert "wheat" not in vocab

    def test_checksum_is_stable_and_sensitive(self):
        docs = [_doc("d1", {"a"}, ["cocoa prices"]), _doc("d2", {"a"}, ["wheat"])]
        a = build_vocabulary(docs).checksum()
        b = build_vocabulary(docs).checksum()
        c = build_vocabulary(docs[:1]).checksum()
        assert a == b and a != c

    def test_record_roundtrip(self):
        vocab = build_vocabulary([_doc("d1", {"a"}, ["cocoa prices"]), _doc("d2", {"a"}, ["wheat"])])
        back = Vocabulary.from_record(vocab.to_record())
        assert back.checksum() == vocab.checksum()
        np.testing.assert_allclose(back.idf, vocab.idf)


class TestVectorize:
    def test_hand_computed_tfidf(self):
        # idf(cocoa) = ln 2, idf(price) = 0 -> all weight lands on cocoa.
        docs = [_doc("d1", {"a"}, ["prices of cocoa"]), _doc("d2", {"a"}, ["prices"])]
        vocab = build_vocabulary(docs)
        vec = vectorize_sentence(["cocoa", "cocoa", "price"], vocab)
        dense = vec.to_dense()
        assert dense[vocab.index["cocoa"]] == pytest.approx(1.0, abs=1e-12)
        assert dense[vocab.index["price"]] == 0.0

    def test_empty_tokens_empty_vector(self):
        vocab = build_vocabulary([_doc("d1", {"a"}, ["cocoa"])])
        assert vectorize_sentence([], vocab).nnz == 0

    def test_single_token_unit_entry(self):
        docs = [_doc("d1", {"a"}, ["cocoa wheat"]), _doc("d2", {"a"}, ["cocoa"])]
        vocab = build_vocabulary(docs)
        vec = vectorize_sentence(["wheat"], vocab)
        assert vec.nnz == 1 and vec.values[0] == pytest.approx(1.0, abs=1e-12)

    def test_zero_idf_falls_back_to_tf(self):
        vocab = build_vocabulary([_doc("d1", {"a"}, ["cocoa prices"])])
        vec = vectorize_sentence(["cocoa"], vocab)
        assert vec.norm() == pytest.approx(1.0, abs=1e-9)

    def test_label_vectors(self):
        docs = [
            _doc("d1", {"earn"}, ["cocoa up"]),
            _doc("d2", {"acq"}, ["wheat down"]),
            _doc("d3", {"earn", "acq"}, ["cocoa wheat"]),
        ]
        categories = CategorySet.from_documents(docs)
        assert categories.names == ("acq", "earn")
        vocab = build_vocabulary(docs)
        vectorized = vectorize_corpus(docs, vocab, categories, corpus.MULTI_LABEL)
        assert vectorized[0].y.tolist() == [0, 1]
        assert vectorized[1].y.tolist() == [1, 0]
        assert vectorized[2].y.tolist() == [1, 1]

    def test_mono_mode_rejects_multilabel(self):
        docs = [_doc("d1", {"a", "b"}, ["cocoa"]), _doc("d2", {"b"}, ["wheat"])]
        categories = CategorySet.from_documents(docs)
        vocab = build_vocabulary(docs)
        with pytest.raises(ValueError, match="mono-label"):
            vectorize_corpus(docs, vocab, categories, corpus.MONO_LABEL)

    def test_unknown_label_rejected(self):
        docs = [_doc("d1", {"a"}, ["cocoa"]), _doc("d2", {"b"}, ["wheat"])]
        vocab = build_vocabulary(docs)
        categories = CategorySet(("a", "zzz"))
        with pytest.raises(KeyError, match="unknown category"):
            vectorize_corpus(docs, vocab, categories, corpus.MONO_LABEL)

    def test_global_vector_is_normalized(self):
        docs = [
            _doc("d1", {"a"}, ["cocoa rose sharply", "wheat fell"]),
            _doc("d2", {"a"}, ["prices stable"]),
        ]
        vocab = build_vocabulary(docs)
        categories = CategorySet(("a", "b"))
        for doc in vectorize_corpus(docs, vocab, categories, corpus.MONO_LABEL):
            assert doc.global_vector.norm() == pytest.approx(1.0, abs=1e-9)
            for vec in doc.sentence_vectors:
                if vec.nnz:
                    assert vec.norm() == pytest.approx(1.0, abs=1e-9)

    def test_test_set_vectorization_never_mutates_vocabulary(self):
        train = [_doc("d1", {"a"}, ["cocoa prices"]), _doc("d2", {"b"}, ["wheat"])]
        test = [_doc("d3", {"a"}, ["unseen words entirely"])]
        vocab = build_vocabulary(train)
        checksum = vocab.checksum()
        categories = CategorySet.from_documents(train)
        docs = vectorize_corpus(test, vocab, categories, corpus.MONO_LABEL)
        assert vocab.checksum() == checksum
        assert docs[0].global_vector.nnz == 0  # everything out-of-vocabulary


class TestSplits:
    DOCS = [_doc(f"d{i}", {"a" if i % 2 else "b"}, ["cocoa"]) for i in range(100)]

    def test_sizes(self):
        split = make_splits(self.DOCS, 0.3, 1, seed=5)[0]
        assert len(split.train_ids) == 30 and len(split.test_ids) == 70

    def test_ceil_arithmetic(self):
        split = make_splits(self.DOCS[:10], 0.25, 1, seed=5)[0]
        assert len(split.train_ids) == 3

    def test_deterministic(self):
        a = make_splits(self.DOCS, 0.3, 3, seed=9)
        b = make_splits(self.DOCS, 0.3, 3, seed=9)
        assert [s.train_ids for s in a] == [s.train_ids for s in b]

    def test_runs_differ(self):
        splits = make_splits(self.DOCS, 0.3, 5, seed=9)
        assert len({s.train_ids for s in splits}) > 1

    def test_partition(self):
        split = make_splits(self.DOCS, 0.42, 1, seed=1)[0]
        ids = set(split.train_ids) | set(split.test_ids)
        assert ids == {d.id for d in self.DOCS}
        assert not set(split.train_ids) & set(split.test_ids)

    def test_empty_category_recorded(self):
        docs = [_doc("d0", {"rare"}, ["cocoa"])] + [
            _doc(f"d{i}", {"common"}, ["wheat"]) for i in range(1, 40)
        ]
        splits = make_splits(docs, 0.05, 10, seed=3)
        flagged = [s for s in splits if s.empty_train_categories]
        assert any(s.empty_train_categories == ("rare",) for s in flagged)

    def test_fraction_bounds(self):
        with pytest.raises(ValueError):
            make_splits(self.DOCS, 1.0, 1, seed=0)
        with pytest.raises(ValueError):
            make_splits(self.DOCS, 0.0, 1, seed=0)


def test_corpus_stats():
    docs = [_doc("d1", {"a"}, ["one"]), _doc("d2", {"b"}, ["one", "two", "three"])]
    stats = corpus_stats(docs)
    assert stats["n_docs"] == 2
    assert stats["n_categories"] == 2
    assert stats["mean_sentences_per_doc"] == pytest.approx(2.0)
