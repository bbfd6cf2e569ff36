"""Fiber-space embeddings: per-node low-rank factorizations of order-3 slices.

Each node ``i`` owns the symmetric slice ``M_i = C3[i, :, :]``, which is
factorized as ``M_i ~ Y_i @ Z_i`` with ``Y_i`` of shape ``(n, d)`` and
``Z_i`` of shape ``(d, n)``. Lookup keys are fiber addresses: the key
``(i, j)`` returns row ``j`` of ``Y_i``; the key ``(i,)`` returns row ``i``
of the order-2 factor of the pairwise matrix.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .cooccurrence import CoocTensor
from .errors import InvalidInput, RangeError, ShapeError
from .pmi import PmiTensor

__all__ = [
    "ALSConfig",
    "FactorPair",
    "FiberEmbedding",
    "EmbeddingSequence",
    "slice_matrix",
    "fiber_factorize",
    "fiber_space",
    "embedding_sequence",
    "embed_lookup",
    "sum_embeddings",
]


@dataclass(frozen=True)
class ALSConfig:
    max_iters: int = 500
    tol: float = 1e-10
    seed: int = 0
    ridge: float = 1e-9

    def __post_init__(self):
        if self.max_iters < 1:
            raise InvalidInput(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tol < 0 or self.ridge <= 0:
            raise InvalidInput("tol must be >= 0 and ridge > 0")


@dataclass
class FactorPair:
    """Result of one factorization ``M ~ Y @ Z``.

    ``history`` holds the Frobenius residual after every ALS sweep.
    """

    Y: np.ndarray
    Z: np.ndarray
    loss: float
    n_iter: int
    history: np.ndarray = field(repr=False)


@dataclass
class FiberEmbedding:
    """One factor pair per node slice, all with the same dimension ``d``."""

    d: int
    Y: np.ndarray  # (num_nodes, n, d)
    Z: np.ndarray  # (num_nodes, d, n)
    losses: np.ndarray
    n_iters: np.ndarray
    histories: list = field(repr=False, default_factory=list)
    node_labels: Optional[tuple] = None

    @property
    def num_nodes(self) -> int:
        return self.Y.shape[0]

    def pair(self, i: int) -> FactorPair:
        return FactorPair(self.Y[i], self.Z[i], float(self.losses[i]), int(self.n_iters[i]), self.histories[i])


def slice_matrix(C3: Union[CoocTensor, PmiTensor], i: int) -> np.ndarray:
    """The ``n x n`` slice ``C3[i, :, :]``.

    For a :class:`PmiTensor`, undefined entries are 0.
    """
    if C3.order != 3:
        raise ShapeError(f"slices need an order-3 tensor, got order {C3.order}")
    n = C3.num_nodes
    if not 0 <= i < n:
        raise IndexError(f"node {i} outside [0, {n})")
    dtype = np.int64 if isinstance(C3, CoocTensor) else np.float64
    out = np.zeros((n, n), dtype=dtype)
    idx = C3.indices
    hit = idx == i
    rows = np.flatnonzero(hit.any(axis=1))
    if rows.size == 0:
        return out
    sub = idx[rows]
    # Drop the first occurrence of i; the remaining two positions address the slice.
    first = hit[rows].argmax(axis=1)
    keep = np.ones_like(sub, dtype=bool)
    keep[np.arange(rows.size), first] = False
    pairs = sub[keep].reshape(-1, 2)
    vals = C3.values[rows]
    out[pairs[:, 0], pairs[:, 1]] = vals
    out[pairs[:, 1], pairs[:, 0]] = vals
    return out


def fiber_factorize(M, d: int, cfg: ALSConfig = ALSConfig(), rng=None) -> FactorPair:
    """Rank-``d`` factorization of ``M`` by ridge-regularized alternating least squares.

    ``Z`` starts uniform in ``(-0.5/sqrt(d), 0.5/sqrt(d))``; each sweep solves
    for ``Y`` with ``Z`` fixed and then for ``Z`` with ``Y`` fixed. Iteration
    stops after ``cfg.max_iters`` sweeps, when the relative decrease of the
    Frobenius residual drops below ``cfg.tol``, or when a sweep would raise
    the residual (that sweep is discarded), so ``history`` never increases.
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2:
        raise ShapeError(f"expected a matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidInput("matrix to factorize has non-finite entries")
    if d < 1:
        raise InvalidInput(f"embedding dimension must be >= 1, got {d}")
    if d > min(M.shape):
        warnings.warn(f"d={d} exceeds matrix rank bound {min(M.shape)}; factorization is overparameterized")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    bound = 0.5 / np.sqrt(d)
    Z = rng.uniform(-bound, bound, size=(d, M.shape[1]))
    eye = cfg.ridge * np.eye(d)
    history = []
    Y = None
    prev = np.inf
    for _ in range(cfg.max_iters):
        Y_new = np.linalg.solve(Z @ Z.T + eye, Z @ M.T).T
        Z_new = np.linalg.solve(Y_new.T @ Y_new + eye, Y_new.T @ M)
        loss = float(np.linalg.norm(M - Y_new @ Z_new))
        if loss > prev:
            # Rounding noise at the ridge floor; keep the better iterate.
            break
        Y, Z = Y_new, Z_new
        history.append(loss)
        if loss == 0.0 or prev - loss < cfg.tol * prev:
            break
        prev = loss
    return FactorPair(Y, Z, history[-1], len(history), np.asarray(history))


def _slice_rng(seed: int, order: int, i: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, order, i]))


def fiber_space(
    C3: Union[CoocTensor, PmiTensor],
    d: int,
    cfg: ALSConfig = ALSConfig(),
    n_jobs: int = 1,
    node_labels: Optional[Sequence] = None,
) -> FiberEmbedding:
    """Factorize every node slice of ``C3`` independently.

    Slice ``i`` is seeded from ``(cfg.seed, i)``, so results do not depend on
    ``n_jobs``.
    """
    n = C3.num_nodes

    def work(i):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return fiber_factorize(slice_matrix(C3, i), d, cfg, rng=_slice_rng(cfg.seed, 3, i))

    if d > n:
        warnings.warn(f"d={d} exceeds slice size {n}; factorization is overparameterized")
    if n_jobs == 1:
        pairs = [work(i) for i in range(n)]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs if n_jobs > 0 else None) as pool:
            pairs = list(pool.map(work, range(n)))
    Y = np.stack([p.Y for p in pairs]) if pairs else np.zeros((0, 0, d))
    Z = np.stack([p.Z for p in pairs]) if pairs else np.zeros((0, d, 0))
    return FiberEmbedding(
        d=d,
        Y=Y,
        Z=Z,
        losses=np.array([p.loss for p in pairs]),
        n_iters=np.array([p.n_iter for p in pairs], dtype=np.int64),
        histories=[p.history for p in pairs],
        node_labels=tuple(node_labels) if node_labels is not None else None,
    )


@dataclass
class EmbeddingSequence:
    """Embeddings of orders 2 and 3 sharing dimension ``d``.

    ``pairwise`` factorizes the order-2 matrix; ``fibers`` is the order-3 fiber space.
    """

    d: int
    pairwise: Optional[FactorPair] = None
    fibers: Optional[FiberEmbedding] = None

    def __post_init__(self):
        if self.pairwise is not None and self.pairwise.Y.shape[1] != self.d:
            raise ShapeError("pairwise factor dimension differs from d")
        if self.fibers is not None and self.fibers.d != self.d:
            raise ShapeError("fiber embedding dimension differs from d")

    @property
    def orders(self) -> tuple:
        return tuple(r for r, e in ((2, self.pairwise), (3, self.fibers)) if e is not None)


def embedding_sequence(
    C2: Optional[Union[CoocTensor, PmiTensor]],
    C3: Optional[Union[CoocTensor, PmiTensor]],
    d: int,
    cfg: ALSConfig = ALSConfig(),
    n_jobs: int = 1,
) -> EmbeddingSequence:
    """Factorize the pairwise matrix and the order-3 slices at a common ``d``."""
    pairwise = None
    if C2 is not None:
        if C2.order != 2:
            raise ShapeError(f"C2 must have order 2, got {C2.order}")
        dense = C2.to_dense(0.0) if isinstance(C2, PmiTensor) else C2.to_dense()
        pairwise = fiber_factorize(dense, d, cfg, rng=_slice_rng(cfg.seed, 2, 0))
    fibers = fiber_space(C3, d, cfg, n_jobs) if C3 is not None else None
    return EmbeddingSequence(d, pairwise, fibers)


def embed_lookup(E: EmbeddingSequence, key: Sequence[int]) -> np.ndarray:
    """Vector of the fiber addressed by ``key``.

    A key of length ``r - 1`` addresses order ``r``: ``(i,)`` gives row ``i``
    of the pairwise ``Y``; ``(i, j)`` gives row ``j`` of ``Y_i``.
    """
    key = tuple(int(k) for k in key)
    r = len(key) + 1
    if r == 2 and E.pairwise is not None:
        Y = E.pairwise.Y
        if not 0 <= key[0] < Y.shape[0]:
            raise IndexError(f"node {key[0]} out of range")
        return Y[key[0]]
    if r == 3 and E.fibers is not None:
        i, j = key
        n = E.fibers.num_nodes
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"fiber {key} out of range")
        return E.fibers.Y[i, j]
    raise RangeError(f"order {r} not available; sequence holds orders {E.orders}")


def sum_embeddings(E: EmbeddingSequence, assignments: Mapping[int, Sequence[int]]) -> np.ndarray:
    """Sum of :func:`embed_lookup` over ``{order: key}``, added in ascending order."""
    out = np.zeros(E.d)
    for r in sorted(assignments):
        key = tuple(assignments[r])
        if len(key) + 1 != r:
            raise RangeError(f"key {key} does not address order {r}")
        out = out + embed_lookup(E, key)
    return out
