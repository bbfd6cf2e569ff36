import numpy as np
import pytest

from cooctensor import InvalidInput, SparseTensor, cooc_tensor_direct, fiber_space, specific_correlation
from cooctensor.embeddings import ALSConfig
from cooctensor.io import (
    corpus_edges,
    format_cooc,
    format_fiber_embedding,
    format_incidence,
    format_pmi,
    format_tensor,
    parse_incidence,
    parse_tensor,
    read_baskets,
    tokenize,
)


def test_tokenize_casefolds():
    assert tokenize("I like You.") == ["i", "like", "you"]
    assert tokenize("I like You.", casefold=False) == ["I", "like", "You"]


def test_read_baskets_skips_comments():
    lines = ["# header", "milk bread", "", "  # indented comment", "eggs"]
    assert read_baskets(lines) == [["milk", "bread"], ["eggs"]]


def test_corpus_edges_modes():
    text = "I like math\nYou like math\nI like you."
    assert corpus_edges(text, "sentence") == [
        ["i", "like", "math"], ["you", "like", "math"], ["i", "like", "you"]
    ]
    assert corpus_edges("a b. c d", "line") == [["a", "b", "c", "d"]]
    windows = corpus_edges("a b\nc", "window", radius=1)
    assert windows == [["a", "b"], ["a", "b", "c"], ["b", "c"]]
    assert corpus_edges("a b\nc", "window", radius=1, line_breaks=True) == [["a", "b"], ["a", "b"], ["c"]]
    with pytest.raises(InvalidInput):
        corpus_edges("a", "paragraph")


def test_incidence_roundtrip(example):
    text = format_incidence(example)
    assert text.splitlines()[0] == "#incidence edges=3 nodes=4"
    assert "#node\t1\tlike" in text
    assert parse_incidence(text) == example


def test_incidence_parse_errors():
    with pytest.raises(InvalidInput):
        parse_incidence("")
    with pytest.raises(InvalidInput):
        parse_incidence("#incidence edges=2 nodes=2\n0\t0 1\n")
    with pytest.raises(InvalidInput):
        parse_incidence("#incidence edges=1 nodes=2\n0\t0 x\n")


def test_tensor_tsv():
    X = SparseTensor((2, 3), {(1, 2): 5, (0, 1): -1})
    text = format_tensor(X)
    assert text == "#dims 2 3\n0\t1\t-1\n1\t2\t5\n"
    assert parse_tensor(text) == X


def test_cooc_tsv_roundtrip(example):
    C = cooc_tensor_direct(example, 3)
    text = format_cooc(C)
    assert text.startswith("#dims 4 4 4\n#symmetric 3\n#edges 3\n")
    lines = [tuple(map(int, l.split("\t")[:3])) for l in text.splitlines() if not l.startswith("#")]
    assert lines == sorted(lines)
    assert all(list(t) == sorted(t) for t in lines)
    assert parse_tensor(text) == C


def test_pmi_tsv_precision(example):
    P = specific_correlation(cooc_tensor_direct(example, 3))
    text = format_pmi(P)
    values = [float(l.split("\t")[-1]) for l in text.splitlines() if not l.startswith("#")]
    np.testing.assert_array_equal(values, P.values)


def test_fiber_export(example):
    E = fiber_space(cooc_tensor_direct(example, 3), 2, ALSConfig(seed=3), node_labels=example.node_labels)
    text = format_fiber_embedding(E)
    lines = text.splitlines()
    headers = [l for l in lines if l.startswith("#fiber")]
    assert len(headers) == 4
    assert headers[0].startswith("#fiber node=i d=2 loss=")
    assert len(lines) == 4 * (1 + 4 + 2)
    first_y = [float(v) for v in lines[1].split("\t")[2:]]
    np.testing.assert_array_equal(first_y, E.Y[0, 0])
