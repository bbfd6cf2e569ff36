"""Text formats: basket and corpus input, TSV output for incidences and tensors.

Tensor files are COO TSV: a ``#dims d_1 ... d_k`` header, optionally
``#symmetric k`` when only canonical (sorted) indices are listed, then one
``i_1<TAB>...<TAB>i_k<TAB>value`` line per nonzero, 0-based, lexicographic.
"""

from __future__ import annotations

import os
import re
import tempfile
from pathlib import Path
from typing import Iterable, List, Union

import numpy as np

from .cooccurrence import CoocTensor
from .embeddings import FiberEmbedding
from .errors import InvalidInput
from .incidence import IncidenceMatrix, window_edges
from .pmi import PmiTensor
from .tensor_core import SparseTensor

__all__ = [
    "TOKEN_RE",
    "tokenize",
    "read_baskets",
    "corpus_edges",
    "format_incidence",
    "parse_incidence",
    "format_tensor",
    "format_cooc",
    "format_pmi",
    "parse_tensor",
    "format_fiber_embedding",
    "atomic_write",
]

TOKEN_RE = re.compile(r"\w+(?:['’]\w+)*")
_SENTENCE_END = re.compile(r"[.!?]+|\n")


def tokenize(text: str, casefold: bool = True) -> List[str]:
    if casefold:
        text = text.casefold()
    return TOKEN_RE.findall(text)


def read_baskets(lines: Iterable[str]) -> List[List[str]]:
    """One edge per nonblank line; ``#`` lines are comments."""
    edges = []
    for line in lines:
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        edges.append(stripped.split())
    return edges


def corpus_edges(text: str, mode: str = "window", radius: int = 2,
                 casefold: bool = True, line_breaks: bool = False) -> List[List[str]]:
    """Edges of a plain-text corpus.

    ``mode="window"`` gives one clipped window per token; with ``line_breaks``
    windows do not cross newlines. ``mode="sentence"`` makes each sentence
    (split at ``.``, ``!``, ``?`` and newlines) an edge; ``mode="line"`` each line.
    """
    if mode == "window":
        chunks = text.splitlines() if line_breaks else [text]
        edges = []
        for chunk in chunks:
            edges.extend(window_edges(tokenize(chunk, casefold), radius))
        return edges
    if mode == "sentence":
        parts = _SENTENCE_END.split(text)
    elif mode == "line":
        parts = text.splitlines()
    else:
        raise InvalidInput(f"unknown corpus mode {mode!r}")
    return [toks for toks in (tokenize(p, casefold) for p in parts) if toks]


def format_incidence(incidence: IncidenceMatrix) -> str:
    out = [f"#incidence edges={incidence.num_edges} nodes={incidence.num_nodes}"]
    for j in range(incidence.num_nodes):
        out.append(f"#node\t{j}\t{incidence.label(j)}")
    for i, row in enumerate(incidence.rows):
        out.append(f"{i}\t{' '.join(map(str, row))}")
    return "\n".join(out) + "\n"


def parse_incidence(text: str) -> IncidenceMatrix:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#incidence"):
        raise InvalidInput("line 1: missing '#incidence edges=<m> nodes=<n>' header")
    try:
        fields = dict(f.split("=") for f in lines[0].split()[1:])
        m, n = int(fields["edges"]), int(fields["nodes"])
    except (KeyError, ValueError) as exc:
        raise InvalidInput(f"line 1: bad incidence header: {lines[0]!r}") from exc
    labels = [None] * n
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            if line.startswith("#node\t"):
                _, j, label = line.split("\t", 2)
                labels[int(j)] = label
            elif line.startswith("#"):
                continue
            else:
                i, _, nodes = line.partition("\t")
                if int(i) != len(rows):
                    raise InvalidInput(f"line {lineno}: expected edge {len(rows)}, got {i}")
                rows.append(tuple(int(x) for x in nodes.split()))
        except (ValueError, IndexError) as exc:
            raise InvalidInput(f"line {lineno}: {exc}") from exc
    if len(rows) != m:
        raise InvalidInput(f"header declares {m} edges, found {len(rows)}")
    if any(lab is None for lab in labels):
        labels = None
    return IncidenceMatrix(tuple(rows), n, tuple(labels) if labels else None)


def _coo_lines(items, value_fmt):
    return [
        "\t".join(map(str, idx)) + "\t" + value_fmt(v)
        for idx, v in sorted(items, key=lambda kv: kv[0])
    ]


def format_tensor(X: SparseTensor) -> str:
    fmt = lambda v: str(v) if isinstance(v, int) else format(v, ".17g")  # noqa: E731
    head = ["#dims " + " ".join(map(str, X.dims))]
    return "\n".join(head + _coo_lines(X.entries.items(), fmt)) + "\n"


def format_cooc(C: CoocTensor) -> str:
    head = ["#dims " + " ".join(map(str, C.dims)), f"#symmetric {C.order}", f"#edges {C.num_edges}"]
    return "\n".join(head + _coo_lines(C.entries(), str)) + "\n"


def format_pmi(P: PmiTensor) -> str:
    head = [
        "#dims " + " ".join(map(str, P.dims)),
        f"#symmetric {P.order}",
        f"#pmi normalizer={P.normalizer} positive={str(P.positive).lower()}",
    ]
    return "\n".join(head + _coo_lines(P.entries(), lambda v: format(v, ".17g"))) + "\n"


def parse_tensor(text: str) -> Union[SparseTensor, CoocTensor]:
    """Read a COO TSV tensor; ``#symmetric`` integer files come back as :class:`CoocTensor`."""
    dims = None
    symmetric = False
    num_edges = 0
    entries = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if line.startswith("#dims"):
            dims = tuple(int(d) for d in line.split()[1:])
        elif line.startswith("#symmetric"):
            symmetric = True
        elif line.startswith("#edges"):
            num_edges = int(line.split()[1])
        elif line.startswith("#"):
            continue
        else:
            parts = line.split("\t")
            try:
                idx = tuple(int(p) for p in parts[:-1])
                v = parts[-1]
                entries[idx] = int(v) if re.fullmatch(r"-?\d+", v) else float(v)
            except ValueError as exc:
                raise InvalidInput(f"line {lineno}: {exc}") from exc
    if dims is None:
        raise InvalidInput("missing '#dims' header")
    if symmetric and all(isinstance(v, int) for v in entries.values()):
        idx = np.array(list(entries), dtype=np.int64).reshape(-1, len(dims))
        return CoocTensor(len(dims), dims[0], num_edges, idx, list(entries.values()))
    return SparseTensor(dims, entries)


def format_fiber_embedding(E: FiberEmbedding) -> str:
    """Per node: a ``#fiber`` header, ``n`` lines ``Y<TAB>row<TAB>values``, ``d`` lines for ``Z``."""
    fmt = lambda row: "\t".join(format(float(v), ".17g") for v in row)  # noqa: E731
    out = []
    for i in range(E.num_nodes):
        label = E.node_labels[i] if E.node_labels is not None else i
        out.append(f"#fiber node={label} d={E.d} loss={format(float(E.losses[i]), '.17g')}")
        out.extend(f"Y\t{r}\t{fmt(row)}" for r, row in enumerate(E.Y[i]))
        out.extend(f"Z\t{r}\t{fmt(row)}" for r, row in enumerate(E.Z[i]))
    return "\n".join(out) + "\n"


def atomic_write(path: Union[str, os.PathLike], text: str) -> None:
    """Write ``text`` to ``path`` through a temp file in the same directory and a rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

