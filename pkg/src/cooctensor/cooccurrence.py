"""Order-k co-occurrence tensors of an incidence structure.

The count at a multiset index is the number of edges containing every
distinct node of the index, so ``C[a, a, b] == C[a, b, b] == C2[a, b]``.

Two construction routes are provided and must agree bit for bit:

* :func:`cooc_tensor_fsp` runs the face-splitting pipeline: take the
  ``(k-1)``-fold face-splitting power of the incidence matrix, fold it along
  mode 0 into an ``m x n x ... x n`` tensor, and contract mode 0 with the
  transposed incidence matrix.
* :func:`cooc_tensor_direct` enumerates the sorted k-multisets of each edge.

:func:`multiset_count` is the set-inclusion ground truth for both.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import prod
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np
from scipy import sparse

from .errors import CapacityError, InvalidInput, ShapeError
from .incidence import ContextMap, IncidenceMatrix
from .tensor_core import INDEX_LIMIT, SparseTensor, face_split_power

__all__ = [
    "CoocTensor",
    "DEFAULT_BUDGET",
    "tuple_visits",
    "cooc_matrix",
    "cooc_tensor_fsp",
    "cooc_tensor_direct",
    "multiset_count",
    "context_cooc_tensor",
    "lower_order_cells",
]

DEFAULT_BUDGET = 10 ** 8


class CoocTensor:
    """Symmetric count tensor stored by canonical (sorted) multiset indices.

    Indexing with any tuple, in any order and with any repeats, returns the
    value at its sorted representative.

    Attributes
    ----------
    order : int
    num_nodes : int
    num_edges : int
        Edge count of the source structure (the alternative PMI normalizer).
    indices : ndarray of shape (nnz, order)
        Sorted rows, each nondecreasing; rows are in lexicographic order.
    values : ndarray of shape (nnz,)
        Positive integer counts.
    """

    def __init__(self, order, num_nodes, num_edges, indices, values):
        indices = np.asarray(indices, dtype=np.int64).reshape(-1, order)
        values = np.asarray(values, dtype=np.int64).reshape(-1)
        if indices.shape[0] != values.shape[0]:
            raise ShapeError("indices and values differ in length")
        if indices.size and (np.any(np.diff(indices, axis=1) < 0)):
            raise InvalidInput("CoocTensor indices must be sorted within each row")
        keep = values != 0
        indices, values = indices[keep], values[keep]
        perm = np.lexsort(indices.T[::-1]) if indices.size else np.arange(0)
        self.order = int(order)
        self.num_nodes = int(num_nodes)
        self.num_edges = int(num_edges)
        self.indices = indices[perm]
        self.values = values[perm]
        self.indices.setflags(write=False)
        self.values.setflags(write=False)
        self._lookup = None

    @property
    def nnz(self) -> int:
        return int(self.values.size)

    @property
    def dims(self) -> tuple:
        return (self.num_nodes,) * self.order

    def _table(self) -> dict:
        if self._lookup is None:
            self._lookup = dict(zip(map(tuple, self.indices.tolist()), self.values.tolist()))
        return self._lookup

    def __getitem__(self, idx) -> int:
        idx = tuple(int(i) for i in idx)
        if len(idx) != self.order:
            raise IndexError(f"expected an index of length {self.order}, got {len(idx)}")
        for i in idx:
            if not 0 <= i < self.num_nodes:
                raise IndexError(f"node {i} outside [0, {self.num_nodes})")
        return self._table().get(tuple(sorted(idx)), 0)

    def entries(self) -> Iterator[tuple]:
        """Yield ``(canonical_index, count)`` pairs in lexicographic order."""
        return zip(map(tuple, self.indices.tolist()), self.values.tolist())

    def diagonal(self) -> np.ndarray:
        """Values at ``(x, x, ..., x)``, i.e. node degrees."""
        out = np.zeros(self.num_nodes, dtype=np.int64)
        mask = np.all(self.indices == self.indices[:, :1], axis=1)
        out[self.indices[mask, 0]] = self.values[mask]
        return out

    def canonical_tensor(self) -> SparseTensor:
        return SparseTensor(self.dims, dict(self.entries()))

    def to_sparse_tensor(self) -> SparseTensor:
        """Full symmetric tensor with every permutation of each stored index."""
        full = {}
        for idx, v in self.entries():
            for perm in set(itertools.permutations(idx)):
                full[perm] = v
        return SparseTensor(self.dims, full)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dims, dtype=np.int64)
        for idx, v in self.to_sparse_tensor().entries.items():
            out[idx] = v
        return out

    def __eq__(self, other):
        if not isinstance(other, CoocTensor):
            return NotImplemented
        return (
            self.order == other.order
            and self.num_nodes == other.num_nodes
            and self.num_edges == other.num_edges
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"CoocTensor(order={self.order}, num_nodes={self.num_nodes}, "
            f"num_edges={self.num_edges}, nnz={self.nnz})"
        )


def _check_order(k):
    if int(k) != k or k < 2:
        raise InvalidInput(f"order must be an integer >= 2, got {k}")


def tuple_visits(incidence: IncidenceMatrix, k: int) -> int:
    """Workload estimate ``sum over edges of |s|**k``."""
    return sum(len(row) ** k for row in incidence.rows)


def _check_budget(visits: int, budget: Optional[int], k: int):
    if budget is None:
        return
    if budget <= 0:
        raise InvalidInput(f"budget must be positive, got {budget}")
    if visits > budget:
        raise CapacityError(
            f"order-{k} construction needs {visits} tuple visits, budget is {budget}",
            estimate=visits,
        )


def _accumulate(chunks: Iterable[np.ndarray], dims: Sequence[int]):
    """Sum unit contributions at index rows; returns lexsorted unique rows and counts."""
    order = len(dims)
    total = prod(dims)
    keys, counts = [], []
    if total - 1 <= INDEX_LIMIT:
        radix = np.array([prod(dims[q + 1:]) for q in range(order)], dtype=np.int64)
        for rows in chunks:
            k, c = np.unique(rows.reshape(-1, order) @ radix, return_counts=True)
            keys.append(k)
            counts.append(c)
        if not keys:
            return np.zeros((0, order), dtype=np.int64), np.zeros(0, dtype=np.int64)
        k, inv = np.unique(np.concatenate(keys), return_inverse=True)
        c = np.bincount(inv, weights=np.concatenate(counts)).astype(np.int64)
        rows = np.empty((k.size, order), dtype=np.int64)
        rest = k
        for q in range(order - 1, -1, -1):
            rows[:, q] = rest % dims[q]
            rest = rest // dims[q]
        return rows, c
    for rows in chunks:
        u, c = np.unique(rows.reshape(-1, order), axis=0, return_counts=True)
        keys.append(u)
        counts.append(c)
    if not keys:
        return np.zeros((0, order), dtype=np.int64), np.zeros(0, dtype=np.int64)
    u, inv = np.unique(np.concatenate(keys), axis=0, return_inverse=True)
    c = np.bincount(inv.reshape(-1), weights=np.concatenate(counts)).astype(np.int64)
    return u, c


def _fsp_contract(incidence: IncidenceMatrix, left_rows, num_left: int, k: int):
    """``fold_0(I^{•(k-1)}) x_0 L^T`` where row ``s`` of ``L`` is ``left_rows[s]``.

    Returns the full (non-canonical) result as index rows and counts over dims
    ``(num_left, n, ..., n)``.
    """
    n = incidence.num_nodes
    power = face_split_power(incidence, k - 1)
    # Mode-0 folding of an m x n**(k-1) matrix into m x n x ... x n: tensor mode q
    # (q >= 1) reads (column // J_q) % n with J_q = n**(q-1).
    fold_strides = np.array([n ** (q - 1) for q in range(1, k)], dtype=np.int64)
    left_rows = [np.asarray(r, dtype=np.int64) for r in left_rows]

    def chunks():
        for edge_ids, _tuples, columns in power.blocks(max_tuples=1 << 20):
            folded = (columns[:, :, None] // fold_strides) % n
            lens = np.array([left_rows[e].size for e in edge_ids], dtype=np.int64)
            if not lens.sum():
                continue
            ys = np.concatenate([left_rows[e] for e in edge_ids])
            owner = np.repeat(np.arange(edge_ids.size), lens)
            rest = folded[owner]
            head = np.broadcast_to(ys[:, None, None], rest.shape[:2] + (1,))
            yield np.concatenate([head, rest], axis=2)

    return _accumulate(chunks(), (num_left,) + (n,) * (k - 1))


def cooc_matrix(incidence: IncidenceMatrix) -> CoocTensor:
    """Pairwise co-occurrence counts ``I^T I``."""
    A = incidence.to_csr()
    C = sparse.triu(A.T @ A, format="coo")
    rows, cols = C.row.astype(np.int64), C.col.astype(np.int64)
    return CoocTensor(2, incidence.num_nodes, incidence.num_edges, np.stack([rows, cols], axis=1), C.data)


def cooc_tensor_fsp(incidence: IncidenceMatrix, k: int, budget: Optional[int] = DEFAULT_BUDGET) -> CoocTensor:
    """Order-k co-occurrence tensor through the face-splitting pipeline.

    Raises
    ------
    CapacityError
        When ``sum |s|**k`` exceeds ``budget`` or ``n**(k-1)`` overflows int64.
    """
    _check_order(k)
    _check_budget(tuple_visits(incidence, k), budget, k)
    rows, counts = _fsp_contract(incidence, incidence.rows, incidence.num_nodes, k)
    canonical = np.all(np.diff(rows, axis=1) >= 0, axis=1)
    return CoocTensor(k, incidence.num_nodes, incidence.num_edges, rows[canonical], counts[canonical])


@lru_cache(maxsize=256)
def _multiset_pattern(size: int, k: int) -> np.ndarray:
    out = np.array(list(itertools.combinations_with_replacement(range(size), k)), dtype=np.int64)
    out = out.reshape(-1, k)
    out.setflags(write=False)
    return out


def cooc_tensor_direct(
    incidence: IncidenceMatrix, k: int, budget: Optional[int] = None, max_rows: int = 1 << 21
) -> CoocTensor:
    """Order-k co-occurrence tensor by enumerating each edge's sorted k-multisets.

    ``budget`` is optional here; when given it applies the same ``sum |s|**k``
    guard as :func:`cooc_tensor_fsp`.
    """
    _check_order(k)
    _check_budget(tuple_visits(incidence, k), budget, k)
    n = incidence.num_nodes
    by_size: dict = {}
    for row in incidence.rows:
        if row:
            by_size.setdefault(len(row), []).append(row)

    def chunks():
        for size, group in sorted(by_size.items()):
            pattern = _multiset_pattern(size, k)
            step = max(1, max_rows // pattern.shape[0])
            for start in range(0, len(group), step):
                nodes = np.array(group[start:start + step], dtype=np.int64)
                yield nodes[:, pattern]

    rows, counts = _accumulate(chunks(), (n,) * k)
    return CoocTensor(k, n, incidence.num_edges, rows, counts)


def multiset_count(incidence: IncidenceMatrix, x: Sequence[int]) -> int:
    """Number of edges containing every distinct node of ``x``."""
    x = tuple(int(i) for i in x)
    if not x:
        raise InvalidInput("multiset index must have length >= 1")
    masks = incidence.node_edge_masks
    acc = (1 << incidence.num_edges) - 1
    for i in set(x):
        if not 0 <= i < incidence.num_nodes:
            raise IndexError(f"node {i} outside [0, {incidence.num_nodes})")
        acc &= masks[i]
    return acc.bit_count()


def context_cooc_tensor(
    incidence: IncidenceMatrix, contexts: ContextMap, k: int, budget: Optional[int] = DEFAULT_BUDGET
) -> SparseTensor:
    """``fold_0(I^{•(k-1)}) x_0 R^T``: counts of node tuples per context.

    Entry ``(y, x_2, ..., x_k)`` is the number of edges tagged with context
    ``y`` that contain all of ``x_2, ..., x_k``. Not symmetric.
    """
    _check_order(k)
    if contexts.num_edges != incidence.num_edges:
        raise ShapeError(
            f"context map has {contexts.num_edges} edges, incidence has {incidence.num_edges}"
        )
    visits = sum(len(c) * len(r) ** (k - 1) for c, r in zip(contexts.rows, incidence.rows))
    _check_budget(visits, budget, k)
    if contexts.num_contexts == 0:
        raise ShapeError("context map has no contexts")
    num_contexts = contexts.num_contexts
    rows, counts = _fsp_contract(incidence, contexts.rows, num_contexts, k)
    dims = (num_contexts,) + (incidence.num_nodes,) * (k - 1)
    return SparseTensor(dims, dict(zip(map(tuple, rows.tolist()), counts.tolist())))


def lower_order_cells(k: int, n: int, q: int) -> set:
    """Canonical order-k indices over ``n`` nodes with at most ``q`` distinct values."""
    if not 1 <= q < k:
        raise InvalidInput(f"need 1 <= q < k, got q={q}, k={k}")
    return {
        idx for idx in itertools.combinations_with_replacement(range(n), k) if len(set(idx)) <= q
    }
