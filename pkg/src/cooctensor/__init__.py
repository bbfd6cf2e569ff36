"""Higher-order co-occurrence tensors of hypergraphs via the face-splitting product."""

from .cooccurrence import (
    CoocTensor,
    context_cooc_tensor,
    cooc_matrix,
    cooc_tensor_direct,
    cooc_tensor_fsp,
    lower_order_cells,
    multiset_count,
)
from .embeddings import (
    ALSConfig,
    EmbeddingSequence,
    FiberEmbedding,
    embed_lookup,
    embedding_sequence,
    fiber_factorize,
    fiber_space,
    slice_matrix,
    sum_embeddings,
)
from .errors import CapacityError, InvalidInput, ModeError, RangeError, ShapeError
from .estimators import CooccurrenceTensor, FiberSpaceEmbedding, HypergraphVectorizer, SpecificCorrelation
from .incidence import ContextMap, IncidenceMatrix, context_map_from_labels, corpus_windows, from_edge_sets
from .pmi import PmiTensor, pairwise_pmi, specific_correlation
from .tensor_core import SparseTensor, face_split, face_split_power, fold, khatri_rao, kronecker, mode_product, unfold

__version__ = "0.1.0"
