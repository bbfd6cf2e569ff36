"""Kronecker-family products, mode-p (un)folding and p-mode products.

Conventions
-----------
All mode indices are 0-based. ``kronecker(u, v)[i * len(v) + j] == u[i] * v[j]``,
so in a Kronecker power the first factor varies slowest. Unfolding follows the
Kolda-Bader column formula: the remaining modes are laid out with the
*earliest* mode varying fastest, ``j = sum_{q != p} i_q * J_q`` with
``J_q = prod_{m < q, m != p} dims[m]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np
from scipy import sparse

from .errors import CapacityError, InvalidInput, ModeError, ShapeError
from .incidence import IncidenceMatrix

__all__ = [
    "SparseTensor",
    "FaceSplitPower",
    "kronecker",
    "khatri_rao",
    "face_split",
    "face_split_power",
    "unfold",
    "fold",
    "mode_product",
    "INDEX_LIMIT",
]

# Largest linear index representable in int64 arrays.
INDEX_LIMIT = np.iinfo(np.int64).max


def _scalar(v):
    return v.item() if isinstance(v, np.generic) else v


@dataclass(frozen=True)
class SparseTensor:
    """Order-k tensor in coordinate form: ``entries`` maps index tuples to nonzero values."""

    dims: tuple
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ShapeError(f"dims must be a nonempty list of positive integers, got {dims}")
        object.__setattr__(self, "dims", dims)
        clean = {}
        for idx, v in self.entries.items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != len(dims) or any(not 0 <= i < d for i, d in zip(idx, dims)):
                raise ShapeError(f"index {idx} outside dims {dims}")
            v = _scalar(v)
            if not np.isfinite(v):
                raise InvalidInput(f"non-finite value at {idx}")
            if v != 0:
                clean[idx] = v
        object.__setattr__(self, "entries", clean)

    @property
    def order(self) -> int:
        return len(self.dims)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def __getitem__(self, idx):
        return self.entries.get(tuple(idx), 0)

    def to_dense(self) -> np.ndarray:
        values = list(self.entries.values())
        dtype = np.int64 if all(isinstance(v, (int, np.integer)) for v in values) else np.float64
        out = np.zeros(self.dims, dtype=dtype)
        for idx, v in self.entries.items():
            out[idx] = v
        return out

    @classmethod
    def from_dense(cls, array) -> "SparseTensor":
        array = np.asarray(array)
        nz = np.argwhere(array != 0)
        return cls(array.shape, {tuple(i): array[tuple(i)].item() for i in nz.tolist()})


def kronecker(u, v) -> np.ndarray:
    """Kronecker product of two vectors."""
    return np.outer(np.asarray(u), np.asarray(v)).ravel()


def khatri_rao(C, D) -> np.ndarray:
    """Column-wise Kronecker product: column j is ``kronecker(C[:, j], D[:, j])``."""
    C, D = np.asarray(C), np.asarray(D)
    if C.ndim != 2 or D.ndim != 2 or C.shape[1] != D.shape[1]:
        raise ShapeError(f"Khatri-Rao needs equal column counts, got {C.shape} and {D.shape}")
    return (C[:, None, :] * D[None, :, :]).reshape(C.shape[0] * D.shape[0], C.shape[1])


def face_split(C, D) -> np.ndarray:
    """Row-wise Kronecker product (transposed Khatri-Rao): row i is ``kronecker(C[i], D[i])``."""
    C, D = np.asarray(C), np.asarray(D)
    if C.ndim != 2 or D.ndim != 2 or C.shape[0] != D.shape[0]:
        raise ShapeError(f"face-splitting needs equal row counts, got {C.shape} and {D.shape}")
    return (C[:, :, None] * D[:, None, :]).reshape(C.shape[0], C.shape[1] * D.shape[1])


@lru_cache(maxsize=256)
def _product_pattern(size: int, power: int) -> np.ndarray:
    # Positions of every power-tuple over range(size), first factor slowest.
    if size == 0:
        return np.zeros((0, power), dtype=np.int64)
    grids = np.indices((size,) * power, dtype=np.int64)
    out = grids.reshape(power, -1).T.copy()
    out.setflags(write=False)
    return out


class FaceSplitPower:
    """Implicit ``I • I • ... • I`` (``power`` factors) of a binary incidence matrix.

    Row ``i`` is the ``power``-fold Kronecker power of row ``i`` of ``I``. Its
    nonzeros are exactly the ``power``-tuples over the nodes of edge ``i``; the
    ``m x n**power`` matrix is never materialized.
    """

    def __init__(self, incidence: IncidenceMatrix, power: int):
        if power < 1:
            raise InvalidInput(f"power must be >= 1, got {power}")
        width = incidence.num_nodes ** power
        if width - 1 > INDEX_LIMIT:
            raise CapacityError(
                f"column index range n**p = {incidence.num_nodes}**{power} overflows int64",
                estimate=width,
            )
        self.incidence = incidence
        self.power = power
        self.num_cols = width
        n = incidence.num_nodes
        self._weights = np.array([n ** (power - 1 - q) for q in range(power)], dtype=np.int64)

    @property
    def shape(self) -> tuple:
        return (self.incidence.num_edges, self.num_cols)

    def row_nnz(self, i: int) -> int:
        return len(self.incidence.rows[i]) ** self.power

    def column_index(self, tup: Sequence[int]) -> int:
        n = self.incidence.num_nodes
        c = 0
        for t in tup:
            c = c * n + int(t)
        return c

    def row_tuples(self, i: int) -> Iterator[tuple]:
        return itertools.product(self.incidence.rows[i], repeat=self.power)

    def row_columns(self, i: int) -> np.ndarray:
        return np.array(sorted(self.column_index(t) for t in self.row_tuples(i)), dtype=np.int64)

    def blocks(self, max_tuples: int = 1 << 22):
        """Yield ``(edge_ids, tuples, columns)`` for batches of equal-size edges.

        ``tuples`` has shape ``(E, s**p, p)`` and ``columns`` shape ``(E, s**p)``.
        """
        rows = self.incidence.rows
        by_size: dict = {}
        for i, row in enumerate(rows):
            by_size.setdefault(len(row), []).append(i)
        for size in sorted(by_size):
            pattern = _product_pattern(size, self.power)
            ids = np.asarray(by_size[size], dtype=np.int64)
            step = max(1, max_tuples // max(1, pattern.shape[0]))
            for start in range(0, ids.size, step):
                chunk = ids[start:start + step]
                nodes = np.array([rows[i] for i in chunk], dtype=np.int64).reshape(chunk.size, size)
                tuples = nodes[:, pattern]
                yield chunk, tuples, tuples @ self._weights

    def toarray(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.int64)
        for i in range(self.incidence.num_edges):
            out[i, self.row_columns(i)] = 1
        return out


def face_split_power(incidence: IncidenceMatrix, p: int) -> FaceSplitPower:
    """The ``p``-fold face-splitting power of ``incidence`` as a sparse row view."""
    return FaceSplitPower(incidence, p)


def _check_mode(dims, p):
    if not 0 <= p < len(dims):
        raise ModeError(f"mode {p} invalid for a tensor of order {len(dims)}")


def _strides(dims, p):
    strides = {}
    acc = 1
    for q, d in enumerate(dims):
        if q == p:
            continue
        strides[q] = acc
        acc *= d
    return strides, acc


def unfold(X: SparseTensor, p: int) -> sparse.coo_array:
    """Mode-p unfolding as a sparse ``dims[p] x prod(other dims)`` matrix."""
    _check_mode(X.dims, p)
    strides, ncols = _strides(X.dims, p)
    if ncols - 1 > INDEX_LIMIT:
        raise CapacityError(f"unfolding width {ncols} overflows int64", estimate=ncols)
    rows, cols, vals = [], [], []
    for idx, v in X.entries.items():
        rows.append(idx[p])
        cols.append(sum(idx[q] * s for q, s in strides.items()))
        vals.append(v)
    dtype = np.int64 if all(isinstance(v, int) for v in vals) else np.float64
    return sparse.coo_array(
        (np.array(vals, dtype=dtype), (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))),
        shape=(X.dims[p], ncols),
    )


def fold(M, p: int, dims: Sequence[int]) -> SparseTensor:
    """Inverse of :func:`unfold`; the target ``dims`` must be given explicitly."""
    dims = tuple(int(d) for d in dims)
    _check_mode(dims, p)
    strides, ncols = _strides(dims, p)
    M = sparse.coo_array(M) if sparse.issparse(M) else sparse.coo_array(np.atleast_2d(np.asarray(M)))
    if M.shape != (dims[p], ncols):
        raise ShapeError(f"matrix of shape {M.shape} cannot fold to dims {dims} along mode {p}")
    M.sum_duplicates()
    entries = {}
    for r, c, v in zip(M.row.tolist(), M.col.tolist(), M.data.tolist()):
        idx = [0] * len(dims)
        idx[p] = r
        for q, s in strides.items():
            idx[q] = (c // s) % dims[q]
        entries[tuple(idx)] = v
    return SparseTensor(dims, entries)


def mode_product(X: SparseTensor, p: int, U) -> SparseTensor:
    """``X x_p U``: the tensor whose mode-p unfolding is ``U @ unfold(X, p)``."""
    _check_mode(X.dims, p)
    U = sparse.csc_array(U) if sparse.issparse(U) else sparse.csc_array(np.atleast_2d(np.asarray(U)))
    if U.shape[1] != X.dims[p]:
        raise ShapeError(f"matrix with {U.shape[1]} columns cannot act on mode {p} of size {X.dims[p]}")
    U.sum_duplicates()
    indptr, indices, data = U.indptr, U.indices.tolist(), U.data.tolist()
    columns = [
        list(zip(indices[indptr[c]:indptr[c + 1]], data[indptr[c]:indptr[c + 1]]))
        for c in range(U.shape[1])
    ]
    out: dict = {}
    for idx, v in X.entries.items():
        for j, u in columns[idx[p]]:
            key = idx[:p] + (j,) + idx[p + 1:]
            out[key] = out.get(key, 0) + u * v
    dims = X.dims[:p] + (U.shape[0],) + X.dims[p + 1:]
    return SparseTensor(dims, out)

