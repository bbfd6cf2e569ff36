"""scikit-learn style wrappers.

``HypergraphVectorizer`` is a transformer from labelled edges to a sparse
incidence matrix, so it chains with the estimators here in a ``Pipeline``::

    Pipeline([("vec", HypergraphVectorizer()), ("cooc", CooccurrenceTensor(order=3))])
"""

import numpy as np
from scipy import sparse
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_edges, check_incidence, check_order
from .cooccurrence import DEFAULT_BUDGET, cooc_matrix, cooc_tensor_direct, cooc_tensor_fsp
from .embeddings import ALSConfig, embed_lookup, embedding_sequence
from .errors import InvalidInput
from .incidence import from_edge_sets
from .pmi import NORMALIZERS, specific_correlation

__all__ = ["HypergraphVectorizer", "CooccurrenceTensor", "SpecificCorrelation", "FiberSpaceEmbedding"]


class HypergraphVectorizer(TransformerMixin, BaseEstimator):
    """Encode edges (collections of labels) as rows of a binary incidence matrix.

    Node ids follow first appearance in the training edges. Labels unseen
    during ``fit`` are dropped by ``transform``.

    Attributes
    ----------
    vocabulary_ : dict
        Label to node id.
    """

    def __init__(self, casefold=False):
        self.casefold = casefold

    def _norm(self, label):
        return label.casefold() if self.casefold and isinstance(label, str) else label

    def fit(self, X, y=None):
        edges = [[self._norm(v) for v in e] for e in check_edges(X)]
        incidence = from_edge_sets(edges)
        self.vocabulary_ = {label: j for j, label in enumerate(incidence.node_labels)}
        return self

    def transform(self, X):
        check_is_fitted(self, "vocabulary_")
        edges = check_edges(X)
        indptr, indices = [0], []
        for e in edges:
            ids = sorted({self.vocabulary_[v] for v in map(self._norm, e) if v in self.vocabulary_})
            indices.extend(ids)
            indptr.append(len(indices))
        data = np.ones(len(indices), dtype=np.int64)
        return sparse.csr_array(
            (data, np.asarray(indices, dtype=np.int64), np.asarray(indptr, dtype=np.int64)),
            shape=(len(edges), len(self.vocabulary_)),
        )

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "vocabulary_")
        return np.array(list(self.vocabulary_), dtype=object)


class CooccurrenceTensor(BaseEstimator):
    """Fit the order-``order`` co-occurrence tensor of an incidence matrix.

    ``path`` selects the face-splitting pipeline (``"fsp"``), per-edge
    multiset enumeration (``"direct"``) or both with a cross-check (``"both"``).
    """

    def __init__(self, order=2, path="direct", budget=DEFAULT_BUDGET):
        self.order = order
        self.path = path
        self.budget = budget

    def fit(self, X, y=None):
        order = check_order(self.order)
        incidence = check_incidence(X)
        if self.path == "fsp":
            tensor = cooc_tensor_fsp(incidence, order, self.budget)
        elif self.path == "direct":
            tensor = cooc_tensor_direct(incidence, order, self.budget)
        elif self.path == "both":
            tensor = cooc_tensor_fsp(incidence, order, self.budget)
            if tensor != cooc_tensor_direct(incidence, order, self.budget):
                raise AssertionError("face-splitting and direct co-occurrence tensors differ")
        else:
            raise InvalidInput(f"path must be 'fsp', 'direct' or 'both', got {self.path!r}")
        self.tensor_ = tensor
        self.degrees_ = incidence.degrees()
        self.n_features_in_ = incidence.num_nodes
        return self

    def counts(self, indices):
        """Counts at an ``(N, order)`` array of node indices."""
        check_is_fitted(self, "tensor_")
        indices = np.atleast_2d(np.asarray(indices, dtype=np.int64))
        return np.array([self.tensor_[idx] for idx in indices], dtype=np.int64)


class SpecificCorrelation(CooccurrenceTensor):
    """Fit the multivariate PMI tensor; ``positive=True`` clamps at zero."""

    def __init__(self, order=2, path="direct", budget=DEFAULT_BUDGET, normalizer="nodes", positive=False):
        super().__init__(order=order, path=path, budget=budget)
        self.normalizer = normalizer
        self.positive = positive

    def fit(self, X, y=None):
        if self.normalizer not in NORMALIZERS:
            raise InvalidInput(f"normalizer must be one of {NORMALIZERS}")
        super().fit(X)
        self.pmi_ = specific_correlation(self.tensor_, self.degrees_, self.normalizer, self.positive)
        return self

    def scores(self, indices, fill=np.nan):
        """PMI at an ``(N, order)`` array of indices, ``fill`` where undefined."""
        check_is_fitted(self, "pmi_")
        indices = np.atleast_2d(np.asarray(indices, dtype=np.int64))
        return np.array([self.pmi_.get(idx, fill) for idx in indices], dtype=np.float64)


class FiberSpaceEmbedding(BaseEstimator):
    """Low-rank factorization of every node slice of the order-3 co-occurrence tensor.

    Parameters
    ----------
    n_components : int
        Shared embedding dimension ``d``.
    max_iter, tol, ridge : ALS controls.
    random_state : int
        Seed; each slice derives its own stream from it.
    target : {"counts", "pmi"}
        Factorize raw counts or specific-correlation slices.
    include_pairwise : bool
        Also factorize the pairwise matrix, enabling order-2 lookups.
    n_jobs : int
        Threads across slices; results do not depend on it.
    """

    def __init__(self, n_components=2, max_iter=500, tol=1e-10, ridge=1e-9, random_state=0,
                 target="counts", normalizer="nodes", include_pairwise=True, n_jobs=1,
                 budget=DEFAULT_BUDGET):
        self.n_components = n_components
        self.max_iter = max_iter
        self.tol = tol
        self.ridge = ridge
        self.random_state = random_state
        self.target = target
        self.normalizer = normalizer
        self.include_pairwise = include_pairwise
        self.n_jobs = n_jobs
        self.budget = budget

    def fit(self, X, y=None):
        d = check_order(self.n_components, "n_components", minimum=1)
        if self.target not in ("counts", "pmi"):
            raise InvalidInput(f"target must be 'counts' or 'pmi', got {self.target!r}")
        incidence = check_incidence(X)
        C3 = cooc_tensor_direct(incidence, 3, self.budget)
        C2 = cooc_matrix(incidence) if self.include_pairwise else None
        if self.target == "pmi":
            C3 = specific_correlation(C3, normalizer=self.normalizer)
            if C2 is not None:
                C2 = specific_correlation(C2, normalizer=self.normalizer)
        seed = 0 if self.random_state is None else int(self.random_state)
        cfg = ALSConfig(self.max_iter, self.tol, seed, self.ridge)
        self.embedding_ = embedding_sequence(C2, C3, d, cfg, n_jobs=self.n_jobs)
        self.losses_ = self.embedding_.fibers.losses
        self.n_features_in_ = incidence.num_nodes
        return self

    def transform(self, keys):
        """Vectors for fiber keys: ``(N, 2)`` keys address order 3, ``(N, 1)`` order 2."""
        check_is_fitted(self, "embedding_")
        keys = np.atleast_2d(np.asarray(keys, dtype=np.int64))
        return np.stack([embed_lookup(self.embedding_, key) for key in keys])
