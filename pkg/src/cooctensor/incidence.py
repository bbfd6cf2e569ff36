"""Incidence structures (hypergraphs) over a dense node id range.

An incidence structure is stored row-wise: edge ``i`` is a strictly ascending
tuple of node ids. The binary edge x node matrix is implied, never stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Optional, Sequence

import numpy as np
from scipy import sparse

from .errors import InvalidInput, ShapeError

__all__ = [
    "IncidenceMatrix",
    "ContextMap",
    "from_edge_sets",
    "corpus_windows",
    "window_edges",
    "context_map_from_labels",
]


def _check_rows(rows, width, what):
    for i, row in enumerate(rows):
        for a, b in zip(row, row[1:]):
            if a >= b:
                raise InvalidInput(f"{what} row {i} is not strictly ascending: {row!r}")
        if row and (row[0] < 0 or row[-1] >= width):
            raise InvalidInput(f"{what} row {i} has an id outside [0, {width}): {row!r}")


@dataclass(frozen=True)
class IncidenceMatrix:
    """Sparse binary edge x node matrix.

    Parameters
    ----------
    rows : tuple of tuple of int
        Per-edge strictly ascending node ids.
    num_nodes : int
        Width ``n`` of the matrix; node ids live in ``[0, n)``.
    node_labels : tuple, optional
        Display label for every node id.
    """

    rows: tuple
    num_nodes: int
    node_labels: Optional[tuple] = field(default=None, compare=True)

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        if self.num_nodes < 0:
            raise InvalidInput("num_nodes must be nonnegative")
        _check_rows(rows, self.num_nodes, "incidence")
        if self.node_labels is not None:
            labels = tuple(self.node_labels)
            if len(labels) != self.num_nodes:
                raise InvalidInput(
                    f"{len(labels)} node labels given for {self.num_nodes} nodes"
                )
            object.__setattr__(self, "node_labels", labels)

    @property
    def num_edges(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple:
        return (self.num_edges, self.num_nodes)

    def label(self, node: int):
        return node if self.node_labels is None else self.node_labels[node]

    def to_edge_sets(self) -> list:
        """Edges as lists of labels (or ids when unlabeled), ascending by id."""
        return [[self.label(x) for x in row] for row in self.rows]

    def edge_sizes(self) -> np.ndarray:
        return np.fromiter((len(r) for r in self.rows), dtype=np.int64, count=self.num_edges)

    def degrees(self) -> np.ndarray:
        """Number of edges containing each node."""
        deg = np.zeros(self.num_nodes, dtype=np.int64)
        for row in self.rows:
            deg[list(row)] += 1
        return deg

    def to_csr(self) -> sparse.csr_array:
        indptr = np.zeros(self.num_edges + 1, dtype=np.int64)
        np.cumsum(self.edge_sizes(), out=indptr[1:])
        indices = np.fromiter(
            (x for row in self.rows for x in row), dtype=np.int64, count=int(indptr[-1])
        )
        data = np.ones(indices.size, dtype=np.int64)
        return sparse.csr_array((data, indices, indptr), shape=self.shape)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.int64)
        for i, row in enumerate(self.rows):
            out[i, list(row)] = 1
        return out

    @cached_property
    def node_edge_masks(self) -> tuple:
        """Per node, a Python int whose bit ``i`` is set iff edge ``i`` contains the node."""
        masks = [0] * self.num_nodes
        for i, row in enumerate(self.rows):
            bit = 1 << i
            for x in row:
                masks[x] |= bit
        return tuple(masks)

    @classmethod
    def from_dense(cls, matrix, node_labels=None) -> "IncidenceMatrix":
        """Build from a dense or scipy-sparse binary matrix."""
        if sparse.issparse(matrix):
            matrix = matrix.toarray()
        matrix = np.asarray(matrix)
        if matrix.ndim != 2:
            raise ShapeError(f"expected a 2-d matrix, got shape {matrix.shape}")
        if not np.isin(matrix, (0, 1)).all():
            raise InvalidInput("incidence matrix entries must be 0 or 1")
        rows = tuple(tuple(np.flatnonzero(r).tolist()) for r in matrix)
        return cls(rows, matrix.shape[1], node_labels)


@dataclass(frozen=True)
class ContextMap:
    """Binary edge x context matrix replacing the transposed incidence in context tensors."""

    rows: tuple
    num_contexts: int
    context_labels: Optional[tuple] = None

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        _check_rows(rows, self.num_contexts, "context")
        if self.context_labels is not None:
            labels = tuple(self.context_labels)
            if len(labels) != self.num_contexts:
                raise InvalidInput(
                    f"{len(labels)} context labels given for {self.num_contexts} contexts"
                )
            object.__setattr__(self, "context_labels", labels)

    @property
    def num_edges(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple:
        return (self.num_edges, self.num_contexts)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.int64)
        for i, row in enumerate(self.rows):
            out[i, list(row)] = 1
        return out

    @classmethod
    def from_incidence(cls, incidence: IncidenceMatrix) -> "ContextMap":
        """Use the nodes of ``incidence`` as contexts."""
        return cls(incidence.rows, incidence.num_nodes, incidence.node_labels)

    @classmethod
    def per_edge(cls, num_edges: int) -> "ContextMap":
        """Every edge is its own context."""
        return cls(tuple((i,) for i in range(num_edges)), num_edges)


def _intern(groups: Iterable[Iterable[Hashable]]):
    ids: dict = {}
    rows = []
    for group in groups:
        row = set()
        for label in group:
            row.add(ids.setdefault(label, len(ids)))
        rows.append(tuple(sorted(row)))
    return rows, tuple(ids)


def from_edge_sets(edges: Iterable[Iterable[Hashable]]) -> IncidenceMatrix:
    """Build an incidence matrix from a collection of labelled edges.

    Node ids are assigned in order of first appearance, so pass ordered
    sequences (not Python sets of strings) when ids must be reproducible.
    Repeated labels inside an edge collapse to one incidence.

    Raises
    ------
    InvalidInput
        If there are no edges or some edge is empty.
    """
    edges = [list(e) for e in edges]
    if not edges:
        raise InvalidInput("edge list is empty")
    for i, e in enumerate(edges):
        if not e:
            raise InvalidInput(f"edge {i} is empty")
    rows, labels = _intern(edges)
    return IncidenceMatrix(tuple(rows), len(labels), labels)


def window_edges(tokens: Sequence[Hashable], radius: int) -> list:
    """Token windows ``tokens[t-r : t+r+1]`` clipped at the sequence ends, one per position."""
    if radius < 1:
        raise InvalidInput(f"window radius must be >= 1, got {radius}")
    return [tokens[max(0, t - radius): t + radius + 1] for t in range(len(tokens))]


def corpus_windows(tokens: Sequence[Hashable], radius: int) -> IncidenceMatrix:
    """One edge per token position holding the distinct tokens within ``radius`` of it."""
    tokens = list(tokens)
    if not tokens:
        raise InvalidInput("token sequence is empty")
    return from_edge_sets(window_edges(tokens, radius))


def context_map_from_labels(edge_labels: Iterable[Iterable[Hashable]]) -> ContextMap:
    """Encode per-edge context label sets; empty sets are allowed."""
    rows, labels = _intern(edge_labels)
    return ContextMap(tuple(rows), len(labels), labels)
