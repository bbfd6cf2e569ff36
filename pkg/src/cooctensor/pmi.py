"""Pointwise mutual information and its multivariate form (specific correlation).

For a multiset index ``x = (x_1, ..., x_k)``::

    pmi(x) = log(c_x * N / prod_i c_{x_i})

with ``c_{x_i}`` the degree of node ``x_i`` (repeats multiply in), natural
log, and ``N`` the number of nodes by default or the number of edges with
``normalizer="edges"``. Entries exist only where ``c_x > 0``.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Optional

import numpy as np

from .cooccurrence import CoocTensor
from .errors import InvalidInput

__all__ = ["PmiTensor", "pairwise_pmi", "specific_correlation", "NORMALIZERS"]

NORMALIZERS = ("nodes", "edges")


class PmiTensor:
    """Symmetric real tensor over canonical multiset indices; absent entries are undefined."""

    def __init__(self, order, num_nodes, indices, values, normalizer="nodes", positive=False):
        self.order = int(order)
        self.num_nodes = int(num_nodes)
        self.indices = np.asarray(indices, dtype=np.int64).reshape(-1, self.order)
        self.values = np.asarray(values, dtype=np.float64).reshape(-1)
        self.normalizer = normalizer
        self.positive = bool(positive)
        self._lookup = dict(zip(map(tuple, self.indices.tolist()), self.values.tolist()))

    @property
    def nnz(self) -> int:
        return int(self.values.size)

    @property
    def dims(self) -> tuple:
        return (self.num_nodes,) * self.order

    def _key(self, idx):
        idx = tuple(int(i) for i in idx)
        if len(idx) != self.order or any(not 0 <= i < self.num_nodes for i in idx):
            raise IndexError(f"index {idx} invalid for order {self.order} over {self.num_nodes} nodes")
        return tuple(sorted(idx))

    def __contains__(self, idx) -> bool:
        return self._key(idx) in self._lookup

    def __getitem__(self, idx) -> float:
        key = self._key(idx)
        try:
            return self._lookup[key]
        except KeyError:
            raise KeyError(f"PMI undefined at {key}: zero co-occurrence") from None

    def get(self, idx, default=None):
        return self._lookup.get(self._key(idx), default)

    def entries(self) -> Iterator[tuple]:
        return zip(map(tuple, self.indices.tolist()), self.values.tolist())

    def to_dense(self, fill=np.nan) -> np.ndarray:
        """Dense symmetric array with ``fill`` at undefined entries (small tensors only)."""
        out = np.full(self.dims, fill, dtype=np.float64)
        for idx, v in self.entries():
            for perm in set(itertools.permutations(idx)):
                out[perm] = v
        return out

    def __repr__(self):
        return (
            f"PmiTensor(order={self.order}, num_nodes={self.num_nodes}, nnz={self.nnz}, "
            f"normalizer={self.normalizer!r}, positive={self.positive})"
        )


def _normalizer_value(C: CoocTensor, normalizer: str) -> int:
    if normalizer == "nodes":
        return C.num_nodes
    if normalizer == "edges":
        return C.num_edges
    raise InvalidInput(f"normalizer must be one of {NORMALIZERS}, got {normalizer!r}")


def _log_ratio(C: CoocTensor, marginals: np.ndarray, normalizer: str, positive: bool) -> PmiTensor:
    N = float(_normalizer_value(C, normalizer))
    counts = C.values.astype(np.float64)
    expected = np.prod(marginals.astype(np.float64)[C.indices], axis=1)
    values = np.log(counts * N / expected)
    if positive:
        values = np.maximum(values, 0.0)
    return PmiTensor(C.order, C.num_nodes, C.indices, values, normalizer, positive)


def pairwise_pmi(C: CoocTensor, normalizer: str = "nodes", positive: bool = False) -> PmiTensor:
    """PMI of every co-occurring pair, using the diagonal of ``C`` as marginals.

    ``positive=True`` clamps negative values at zero (PPMI).
    """
    if C.order != 2:
        raise InvalidInput(f"pairwise_pmi needs an order-2 tensor, got order {C.order}")
    return _log_ratio(C, C.diagonal(), normalizer, positive)


def specific_correlation(
    C: CoocTensor,
    marginals: Optional[np.ndarray] = None,
    normalizer: str = "nodes",
    positive: bool = False,
) -> PmiTensor:
    """Multivariate PMI of every stored multiset index of ``C``.

    Parameters
    ----------
    C : CoocTensor
    marginals : array of int, optional
        Node degrees. Must equal the diagonal of ``C``; taken from it when omitted.
    normalizer : {"nodes", "edges"}
    positive : bool
        Clamp negative values at zero.

    Raises
    ------
    InvalidInput
        If ``marginals`` disagrees with the tensor's diagonal.
    """
    diag = C.diagonal()
    if marginals is None:
        marginals = diag
    else:
        marginals = np.asarray(marginals)
        if marginals.shape != diag.shape or not np.array_equal(marginals, diag):
            raise InvalidInput("marginals do not match the tensor's diagonal (node degrees)")
    return _log_ratio(C, marginals, normalizer, positive)
