import itertools
import warnings

import numpy as np
import pytest

from cooctensor import (
    ALSConfig,
    EmbeddingSequence,
    IncidenceMatrix,
    InvalidInput,
    RangeError,
    cooc_matrix,
    cooc_tensor_direct,
    embed_lookup,
    embedding_sequence,
    fiber_factorize,
    fiber_space,
    lower_order_cells,
    slice_matrix,
    specific_correlation,
    sum_embeddings,
)
from support import EXAMPLE_SLICES, random_incidence

TIGHT = ALSConfig(max_iters=500, tol=1e-10, seed=7)


def test_slice_example(example):
    C3 = cooc_tensor_direct(example, 3)
    np.testing.assert_array_equal(slice_matrix(C3, 0), EXAMPLE_SLICES[0])
    with pytest.raises(IndexError):
        slice_matrix(C3, 4)


def test_slice_properties(rng):
    for _ in range(30):
        inc = random_incidence(rng, max_nodes=8)
        C2, C3 = cooc_matrix(inc), cooc_tensor_direct(inc, 3)
        dense = C3.to_dense()
        for i in range(inc.num_nodes):
            S = slice_matrix(C3, i)
            np.testing.assert_array_equal(S, dense[i])
            np.testing.assert_array_equal(S, S.T)
            np.testing.assert_array_equal(np.diag(S), C2.to_dense()[i])
            sub = IncidenceMatrix(tuple(r for r in inc.rows if i in r), inc.num_nodes)
            np.testing.assert_array_equal(S, cooc_matrix(sub).to_dense())


def test_slice_of_isolated_node():
    inc = IncidenceMatrix(((0, 1),), 3)
    assert not slice_matrix(cooc_tensor_direct(inc, 3), 2).any()


def test_full_rank_reconstructs(rng):
    M = rng.normal(size=(5, 5))
    res = fiber_factorize(M, 5, TIGHT)
    assert res.Y.shape == (5, 5) and res.Z.shape == (5, 5)
    assert res.loss < 1e-6 * np.linalg.norm(M)
    assert res.loss == pytest.approx(np.linalg.norm(M - res.Y @ res.Z), rel=1e-12, abs=1e-15)


def test_zero_matrix():
    for d in (1, 3):
        res = fiber_factorize(np.zeros((3, 3)), d, TIGHT)
        assert res.loss == 0.0
        np.testing.assert_allclose(res.Y @ res.Z, 0.0, atol=1e-12)


def test_rank_one_recovery(rng):
    u, v = rng.normal(size=4), rng.normal(size=4)
    M = np.outer(u, v)
    assert fiber_factorize(M, 1, TIGHT).loss < 1e-6 * np.linalg.norm(M)


def test_factorize_input_checks():
    with pytest.raises(InvalidInput):
        fiber_factorize(np.array([[np.nan]]), 1)
    with pytest.raises(InvalidInput):
        fiber_factorize(np.eye(2), 0)
    with pytest.warns(UserWarning):
        fiber_factorize(np.eye(2), 3, TIGHT)


def test_loss_never_increases(rng):
    for _ in range(20):
        inc = random_incidence(rng, max_nodes=8)
        C3 = cooc_tensor_direct(inc, 3)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            E = fiber_space(C3, int(rng.integers(1, 4)), ALSConfig(max_iters=200, tol=0.0, seed=1))
        for h in E.histories:
            assert np.all(np.diff(h) <= 0)


def test_fiber_space_example(example):
    C3 = cooc_tensor_direct(example, 3)
    E = fiber_space(C3, 4, TIGHT, node_labels=example.node_labels)
    assert E.Y.shape == (4, 4, 4) and E.Z.shape == (4, 4, 4)
    assert np.all(E.losses < 1e-6)
    assert E.node_labels == example.node_labels


def test_rank_one_matches_spectral_oracle(example):
    C3 = cooc_tensor_direct(example, 3)
    E = fiber_space(C3, 1, TIGHT)
    for i in range(4):
        s = np.linalg.svd(slice_matrix(C3, i).astype(float), compute_uv=False)
        assert E.losses[i] == pytest.approx(np.sqrt(np.sum(s[1:] ** 2)), abs=1e-6)


def test_empty_structure_zero_losses():
    inc = IncidenceMatrix(((), ()), 3)
    E = fiber_space(cooc_tensor_direct(inc, 3), 2, TIGHT)
    assert np.all(E.losses == 0.0)


def test_determinism_across_threads(example, rng):
    inc = random_incidence(rng, max_nodes=10)
    C3 = cooc_tensor_direct(inc, 3)
    a = fiber_space(C3, 3, TIGHT, n_jobs=1)
    b = fiber_space(C3, 3, TIGHT, n_jobs=4)
    assert a.Y.tobytes() == b.Y.tobytes() and a.Z.tobytes() == b.Z.tobytes()


def test_pmi_target(example):
    P3 = specific_correlation(cooc_tensor_direct(example, 3))
    S = slice_matrix(P3, 0)
    assert S.dtype == np.float64
    assert S[2, 3] == 0.0  # undefined (zero count) entries become 0
    E = fiber_space(P3, 4, TIGHT)
    assert np.all(E.losses < 1e-6 * max(1.0, np.abs(S).max()))


def test_lookup_and_sum(example):
    C2, C3 = cooc_matrix(example), cooc_tensor_direct(example, 3)
    E = embedding_sequence(C2, C3, 4, TIGHT)
    assert E.orders == (2, 3)
    v2, v3 = embed_lookup(E, (1,)), embed_lookup(E, (0, 2))
    assert v2.shape == v3.shape == (4,)
    np.testing.assert_array_equal(v3, E.fibers.Y[0, 2])
    np.testing.assert_array_equal(embed_lookup(E, (0, 2)), v3)
    total = sum_embeddings(E, {3: (0, 2), 2: (1,)})
    assert total.shape == (4,)
    np.testing.assert_array_equal(total, v2 + v3)
    np.testing.assert_array_equal(sum_embeddings(E, {3: (0, 2)}), v3)
    with pytest.raises(RangeError):
        embed_lookup(E, (0, 1, 2))
    with pytest.raises(RangeError):
        sum_embeddings(E, {3: (0,)})
    with pytest.raises(IndexError):
        embed_lookup(E, (0, 9))


def test_lookup_reconstructs_slices(example):
    C3 = cooc_tensor_direct(example, 3)
    E = embedding_sequence(None, C3, 4, TIGHT)
    for i, j, l in itertools.product(range(4), repeat=3):
        assert embed_lookup(E, (i, j)) @ E.fibers.Z[i][:, l] == pytest.approx(C3[i, j, l], abs=1e-5)
    with pytest.raises(RangeError):
        embed_lookup(E, (1,))


def test_zero_embedding_sums_to_zero():
    inc = IncidenceMatrix(((),), 2)
    E = embedding_sequence(cooc_matrix(inc), cooc_tensor_direct(inc, 3), 2, TIGHT)
    assert not sum_embeddings(E, {2: (0,), 3: (1, 0)}).any()


def test_sequence_dimension_check(example):
    E = embedding_sequence(cooc_matrix(example), None, 2, TIGHT)
    with pytest.raises(Exception):
        EmbeddingSequence(3, pairwise=E.pairwise)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_no_face_contains_lower_order_cells(n):
    cells = lower_order_cells(3, n, 2)
    full = {p for c in cells for p in itertools.permutations(c)}
    for mode in range(3):
        for fixed in range(n):
            face = {idx for idx in itertools.product(range(n), repeat=3) if idx[mode] == fixed}
            assert not full <= face
            assert not cells <= face
