import numpy as np
import pytest

from droplab import (EmptyClassError, MalformedLineError, SplitSpec,
                     load_corpus, tokenize)
from droplab.corpus import build_vocabulary, corpus_from_text, _parse_lines


def write(tmp_path, lines, name="corpus.tsv"):
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_tokenize_lowercases_and_splits():
    assert tokenize("Good movie!  GREAT-plot 2x") == \
        ["good", "movie", "great", "plot", "2x"]


def test_counts_from_tiny_corpus(tmp_path):
    path = write(tmp_path, ["1\tgood movie", "0\tbad movie"])
    docs = _parse_lines(path)
    vocab = build_vocabulary(docs)
    assert vocab == {"bad": 0, "good": 1, "movie": 2}
    corpus = corpus_from_text(path, vocab)
    assert corpus.counts.tolist() == [[0, 1, 1], [1, 0, 1]]
    assert corpus.labels.tolist() == [1, 0]


def test_repeated_tokens_increment_counts(tmp_path):
    path = write(tmp_path, ["1\tfun fun fun", "0\tdull"])
    docs = _parse_lines(path)
    corpus = corpus_from_text(path, build_vocabulary(docs))
    assert corpus.counts[0].max() == 3


def test_split_is_deterministic_per_seed(tmp_path):
    lines = [f"{i % 2}\tword{i} shared" for i in range(40)]
    path = write(tmp_path, lines)
    a_train, a_test = load_corpus(path, SplitSpec(seed=3))
    b_train, b_test = load_corpus(path, SplitSpec(seed=3))
    c_train, _ = load_corpus(path, SplitSpec(seed=4))
    assert np.array_equal(a_train.counts, b_train.counts)
    assert np.array_equal(a_test.labels, b_test.labels)
    assert a_train.vocabulary != c_train.vocabulary


def test_vocabulary_built_from_train_split_only(tmp_path):
    lines = [f"{i % 2}\tcommon token{i}" for i in range(10)]
    path = write(tmp_path, lines)
    train, test = load_corpus(path, SplitSpec(seed=0, train_fraction=0.5))
    train_tokens = set(train.vocabulary)
    # out-of-vocabulary test tokens are dropped, never extend the vocabulary
    assert test.vocab_size == train.vocab_size
    assert "common" in train_tokens


def test_train_size_split(tmp_path):
    lines = [f"{i % 2}\tw{i} shared" for i in range(30)]
    path = write(tmp_path, lines)
    train, test = load_corpus(path, SplitSpec(seed=1, train_fraction=None,
                                              train_size=12))
    assert len(train) == 12 and len(test) == 18


def test_malformed_line_reports_number(tmp_path):
    path = write(tmp_path, ["1\tok text", "no tab here"])
    with pytest.raises(MalformedLineError, match="line 2"):
        load_corpus(path, SplitSpec(seed=0))


def test_bad_label_reports_number(tmp_path):
    path = write(tmp_path, ["2\toops"])
    with pytest.raises(MalformedLineError, match="line 1"):
        load_corpus(path, SplitSpec(seed=0))


def test_empty_class_detected(tmp_path):
    path = write(tmp_path, ["1\ta b", "1\tc d", "1\te f"])
    with pytest.raises(EmptyClassError):
        load_corpus(path, SplitSpec(seed=0))


def test_split_spec_validation():
    with pytest.raises(ValueError):
        SplitSpec(train_fraction=0.5, train_size=10)
    with pytest.raises(ValueError):
        SplitSpec(train_fraction=None, train_size=None)
    with pytest.raises(ValueError):
        SplitSpec(train_fraction=1.5)
