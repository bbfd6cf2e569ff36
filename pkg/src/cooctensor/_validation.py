"""Input validation shared by the estimator wrappers."""

import numbers

import numpy as np
from scipy import sparse
from sklearn.utils import check_array

from .errors import InvalidInput
from .incidence import IncidenceMatrix


def check_incidence(X) -> IncidenceMatrix:
    """Coerce ``X`` to an :class:`IncidenceMatrix`.

    Accepts an IncidenceMatrix, a scipy sparse matrix, or an array-like of 0/1.
    """
    if isinstance(X, IncidenceMatrix):
        return X
    X = check_array(X, accept_sparse="csr", dtype=None, ensure_min_samples=1, ensure_min_features=1)
    if sparse.issparse(X):
        X = sparse.csr_array(X)
        X.sum_duplicates()
        X.eliminate_zeros()
        if not np.all(X.data == 1):
            raise InvalidInput("incidence entries must be 0 or 1")
        rows = tuple(
            tuple(sorted(X.indices[X.indptr[i]:X.indptr[i + 1]].tolist())) for i in range(X.shape[0])
        )
        return IncidenceMatrix(rows, X.shape[1])
    return IncidenceMatrix.from_dense(X)


def check_order(order, name="order", minimum=2) -> int:
    if not isinstance(order, numbers.Integral) or order < minimum:
        raise InvalidInput(f"{name} must be an integer >= {minimum}, got {order!r}")
    return int(order)


def check_edges(X) -> list:
    """List of edges, each a list of hashable labels; rejects strings posing as edges."""
    if isinstance(X, (str, bytes)):
        raise InvalidInput("expected a collection of edges, got a single string")
    edges = []
    for i, edge in enumerate(X):
        if isinstance(edge, (str, bytes)):
            raise InvalidInput(f"edge {i} is a string; pass a list of labels")
        edges.append(list(edge))
    if not edges:
        raise InvalidInput("no edges given")
    return edges
