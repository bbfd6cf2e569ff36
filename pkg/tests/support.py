"""Shared fixtures data and generators for the test suite."""

import numpy as np
from hypothesis import strategies as st

from cooctensor import IncidenceMatrix, from_edge_sets

EXAMPLE_SENTENCES = ["I like math", "You like math", "I like you."]

# Node order x1..x4 = i, like, math, you.
EXAMPLE_INCIDENCE = np.array(
    [
        [1, 1, 1, 0],
        [0, 1, 1, 1],
        [1, 1, 0, 1],
    ]
)

EXAMPLE_COOC = np.array(
    [
        [2, 2, 1, 1],
        [2, 3, 2, 2],
        [1, 2, 2, 1],
        [1, 2, 1, 2],
    ]
)

# Frontal slices C[:, :, j] as printed in the worked example.
EXAMPLE_SLICES = {
    0: [[2, 2, 1, 1], [2, 2, 1, 1], [1, 1, 1, 0], [1, 1, 0, 1]],
    1: [[2, 2, 1, 1], [2, 3, 2, 2], [1, 2, 2, 1], [1, 2, 1, 2]],
    2: [[1, 1, 1, 0], [1, 2, 2, 1], [1, 2, 2, 1], [0, 1, 1, 1]],
    3: [[1, 1, 0, 1], [1, 2, 1, 2], [0, 1, 2, 1], [1, 2, 1, 2]],
}
# The printed slice 3 has 2 at (math, math); set counting gives 1.
PRINTED_TYPO = ((2, 2, 3), 2, 1)


def example_incidence():
    return from_edge_sets([s.lower().rstrip(".").split() for s in EXAMPLE_SENTENCES])


def random_incidence(rng, max_edges=30, max_nodes=12, max_size=6):
    n = int(rng.integers(1, max_nodes + 1))
    m = int(rng.integers(1, max_edges + 1))
    edges = []
    for _ in range(m):
        size = int(rng.integers(1, min(max_size, n) + 1))
        edges.append(sorted(rng.choice(n, size=size, replace=False).tolist()))
    return IncidenceMatrix(tuple(tuple(e) for e in edges), n)


@st.composite
def incidences(draw, max_edges=12, max_nodes=7, max_size=5):
    n = draw(st.integers(1, max_nodes))
    edge = st.sets(st.integers(0, n - 1), min_size=1, max_size=min(max_size, n))
    edges = draw(st.lists(edge, min_size=1, max_size=max_edges))
    return IncidenceMatrix(tuple(tuple(sorted(e)) for e in edges), n)


# (criterion, passed, detail) lines printed in the pytest terminal summary.
ACCEPTANCE_RESULTS = []


def record(criterion, passed, detail=""):
    line = (criterion, bool(passed), detail)
    ACCEPTANCE_RESULTS.append(line)
    print(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")
    return passed
