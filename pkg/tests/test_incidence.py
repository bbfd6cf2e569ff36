import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cooctensor import (
    ContextMap,
    IncidenceMatrix,
    InvalidInput,
    context_map_from_labels,
    corpus_windows,
    from_edge_sets,
)
from cooctensor.incidence import window_edges
from support import EXAMPLE_INCIDENCE


def test_example_incidence(example):
    assert example.node_labels == ("i", "like", "math", "you")
    assert example.rows == ((0, 1, 2), (1, 2, 3), (0, 1, 3))
    np.testing.assert_array_equal(example.to_dense(), EXAMPLE_INCIDENCE)
    np.testing.assert_array_equal(example.to_csr().toarray(), EXAMPLE_INCIDENCE)


def test_single_node():
    inc = from_edge_sets([["a"]])
    assert inc.shape == (1, 1)
    np.testing.assert_array_equal(inc.to_dense(), [[1]])


def test_duplicate_labels_collapse():
    inc = from_edge_sets([["a", "a", "b"]])
    assert inc.shape == (1, 2)
    assert inc.rows == ((0, 1),)


@pytest.mark.parametrize("edges", [[], [["a"], []]])
def test_from_edge_sets_rejects_empty(edges):
    with pytest.raises(InvalidInput):
        from_edge_sets(edges)


def test_invalid_rows_rejected():
    with pytest.raises(InvalidInput):
        IncidenceMatrix(((1, 0),), 2)
    with pytest.raises(InvalidInput):
        IncidenceMatrix(((0, 2),), 2)
    with pytest.raises(InvalidInput):
        IncidenceMatrix(((0, 0),), 2)


def test_degrees_and_masks(example):
    np.testing.assert_array_equal(example.degrees(), [2, 3, 2, 2])
    assert example.node_edge_masks == (0b101, 0b111, 0b011, 0b110)


def test_from_dense_roundtrip(example):
    again = IncidenceMatrix.from_dense(example.to_dense(), example.node_labels)
    assert again == example
    with pytest.raises(InvalidInput):
        IncidenceMatrix.from_dense([[0, 2]])


@pytest.mark.parametrize(
    "tokens, radius, expected",
    [
        (list("abc"), 1, [["a", "b"], ["a", "b", "c"], ["b", "c"]]),
        (["a"], 2, [["a"]]),
        (list("aba"), 1, [["a", "b"], ["a", "b"], ["a", "b"]]),
    ],
)
def test_corpus_windows(tokens, radius, expected):
    inc = corpus_windows(tokens, radius)
    assert inc.to_edge_sets() == expected


def test_corpus_windows_errors():
    with pytest.raises(InvalidInput):
        corpus_windows([], 1)
    with pytest.raises(InvalidInput):
        corpus_windows(["a"], 0)


def test_context_map_from_labels():
    R = context_map_from_labels([["doc1"], ["doc1"], ["doc2"]])
    assert R.shape == (3, 2)
    assert R.rows == ((0,), (0,), (1,))

    empty = context_map_from_labels([[], [], []])
    assert empty.shape == (3, 0)
    assert empty.rows == ((), (), ())

    multi = context_map_from_labels([["A", "B"], ["B"], ["A"]])
    assert multi.shape == (3, 2)
    assert multi.rows[0] == (0, 1)


def test_context_map_helpers(example):
    assert ContextMap.from_incidence(example).rows == example.rows
    np.testing.assert_array_equal(ContextMap.per_edge(3).to_dense(), np.eye(3, dtype=int))


edge_lists = st.lists(
    st.lists(st.sampled_from("abcdefghij"), min_size=1, max_size=6), min_size=1, max_size=15
)


@given(edge_lists)
def test_edge_set_roundtrip(edges):
    inc = from_edge_sets(edges)
    assert from_edge_sets(inc.to_edge_sets()) == inc
    for row, edge in zip(inc.rows, edges):
        assert {inc.label(x) for x in row} == set(edge)


@given(st.lists(st.sampled_from("xyzw"), min_size=1, max_size=40), st.integers(1, 5))
def test_window_properties(tokens, radius):
    inc = corpus_windows(tokens, radius)
    assert inc.num_edges == len(tokens)
    assert all(len(row) <= 2 * radius + 1 for row in inc.rows)
    for t, row in enumerate(inc.rows):
        labels = {inc.label(x) for x in row}
        assert tokens[t] in labels
        assert labels == set(window_edges(tokens, radius)[t])
