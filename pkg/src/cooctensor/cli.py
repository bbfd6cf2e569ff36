"""Command-line interface: ``cooctensor {build,cooc,pmi,embed,verify}``.

Exit codes: 0 success, 2 usage or input error, 3 capacity budget exceeded,
4 verification mismatch.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional, Sequence

from . import io
from .cooccurrence import (
    DEFAULT_BUDGET,
    CoocTensor,
    cooc_matrix,
    cooc_tensor_direct,
    cooc_tensor_fsp,
    multiset_count,
)
from .embeddings import ALSConfig, fiber_space
from .errors import CapacityError, CoocError, InvalidInput
from .incidence import IncidenceMatrix, from_edge_sets
from .pmi import NORMALIZERS, specific_correlation

EXIT_OK, EXIT_USAGE, EXIT_CAPACITY, EXIT_MISMATCH = 0, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    input: str
    kind: str = "incidence"
    edges_per: str = "window"
    radius: int = 2
    casefold: bool = True
    line_breaks: bool = False
    order: int = 2
    path: str = "direct"
    normalizer: str = "nodes"
    positive: bool = False
    dim: int = 2
    max_iters: int = 500
    tol: float = 1e-10
    seed: Optional[int] = None
    ridge: float = 1e-9
    target: str = "counts"
    jobs: int = 1
    output: str = "-"
    budget: int = DEFAULT_BUDGET
    orders: Sequence[int] = (2, 3)
    exhaustive_limit: int = 10 ** 6
    ci: bool = False

    def __post_init__(self):
        if self.radius < 1:
            raise InvalidInput(f"radius must be >= 1, got {self.radius}")
        if self.order < 2 or min(self.orders) < 2:
            raise InvalidInput("tensor order must be >= 2")
        if self.dim < 1:
            raise InvalidInput(f"embedding dimension must be >= 1, got {self.dim}")
        if self.budget <= 0:
            raise InvalidInput("budget must be positive")

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in vars(ns).items() if k in known})


class Mismatch(Exception):
    pass


def _positive_int(text):
    value = int(float(text)) if "e" in text.lower() else int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cooctensor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_kind):
        p.add_argument("input", help="input file ('-' for stdin)")
        p.add_argument("--kind", choices=("corpus", "baskets", "incidence"), default=default_kind)
        p.add_argument("--edges-per", choices=("window", "sentence", "line"), default="window",
                       help="corpus edge construction (default: sliding windows)")
        p.add_argument("-r", "--radius", type=_positive_int, default=2, help="window radius")
        p.add_argument("--no-casefold", dest="casefold", action="store_false")
        p.add_argument("--line-breaks", action="store_true", help="windows do not cross lines")
        p.add_argument("-o", "--output", default="-", help="output file ('-' for stdout)")
        p.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET,
                       help="maximum sum over edges of |s|**k tuple visits")

    def tensor_opts(p, default_order):
        p.add_argument("-k", "--order", type=int, default=default_order)
        p.add_argument("--path", choices=("fsp", "direct", "both"), default="direct")

    p = sub.add_parser("build", help="write the incidence structure of a corpus or basket file")
    common(p, "corpus")

    p = sub.add_parser("cooc", help="co-occurrence tensor of order k")
    common(p, "incidence")
    tensor_opts(p, 2)

    p = sub.add_parser("pmi", help="specific correlation (multivariate PMI) tensor")
    common(p, "incidence")
    tensor_opts(p, 2)
    p.add_argument("--normalizer", choices=NORMALIZERS, default="nodes")
    p.add_argument("--positive", action="store_true", help="clamp negative values at 0")

    p = sub.add_parser("embed", help="fiber-space embeddings of the order-3 tensor")
    common(p, "incidence")
    p.add_argument("--path", choices=("fsp", "direct", "both"), default="direct")
    p.add_argument("-d", "--dim", type=_positive_int, default=2)
    p.add_argument("--max-iters", type=_positive_int, default=500)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--ridge", type=float, default=1e-9)
    p.add_argument("--target", choices=("counts", "pmi"), default="counts")
    p.add_argument("--normalizer", choices=NORMALIZERS, default="nodes")
    p.add_argument("--positive", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--ci", action="store_true", help="require an explicit --seed")

    p = sub.add_parser("verify", help="cross-check both tensor paths against direct set counting")
    common(p, "incidence")
    p.add_argument("-k", "--order", dest="orders", type=int, nargs="+", default=[2, 3])
    p.add_argument("--exhaustive-limit", type=_positive_int, default=10 ** 6,
                   help="scan every index when n**k is at most this")
    return parser


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def load_incidence(config) -> IncidenceMatrix:
    text = _read_text(config.input)
    if config.kind == "incidence":
        return io.parse_incidence(text)
    if config.kind == "baskets":
        return from_edge_sets(io.read_baskets(text.splitlines()))
    return from_edge_sets(
        io.corpus_edges(text, config.edges_per, config.radius, config.casefold, config.line_breaks)
    )


def _emit(config, text: str):
    if config.output == "-":
        sys.stdout.write(text)
    else:
        io.atomic_write(config.output, text)


def _first_difference(a: CoocTensor, b: CoocTensor):
    left, right = dict(a.entries()), dict(b.entries())
    for idx in sorted(set(left) | set(right)):
        if left.get(idx, 0) != right.get(idx, 0):
            return idx, left.get(idx, 0), right.get(idx, 0)
    return None


def compute_cooc(incidence: IncidenceMatrix, k: int, path: str, budget: int) -> CoocTensor:
    if path == "fsp":
        return cooc_tensor_fsp(incidence, k, budget)
    if path == "direct":
        return cooc_tensor_direct(incidence, k, budget)
    fsp = cooc_tensor_fsp(incidence, k, budget)
    direct = cooc_tensor_direct(incidence, k, budget)
    diff = _first_difference(fsp, direct)
    if diff is not None:
        idx, u, v = diff
        raise Mismatch(f"fsp and direct paths differ at {idx}: {u} != {v}")
    return fsp


def cmd_build(config) -> int:
    _emit(config, io.format_incidence(load_incidence(config)))
    return EXIT_OK


def cmd_cooc(config) -> int:
    C = compute_cooc(load_incidence(config), config.order, config.path, config.budget)
    _emit(config, io.format_cooc(C))
    return EXIT_OK


def cmd_pmi(config) -> int:
    C = compute_cooc(load_incidence(config), config.order, config.path, config.budget)
    _emit(config, io.format_pmi(specific_correlation(C, normalizer=config.normalizer, positive=config.positive)))
    return EXIT_OK


def cmd_embed(config) -> int:
    incidence = load_incidence(config)
    C3 = compute_cooc(incidence, 3, config.path, config.budget)
    target = C3
    if config.target == "pmi":
        target = specific_correlation(C3, normalizer=config.normalizer, positive=config.positive)
    cfg = ALSConfig(config.max_iters, config.tol, 0 if config.seed is None else config.seed, config.ridge)
    E = fiber_space(target, config.dim, cfg, n_jobs=config.jobs, node_labels=incidence.node_labels)
    _emit(config, io.format_fiber_embedding(E))
    return EXIT_OK


def cmd_verify(config) -> int:
    incidence = load_incidence(config)
    n = incidence.num_nodes
    lines = []
    for k in config.orders:
        fsp = cooc_tensor_fsp(incidence, k, config.budget)
        direct = cooc_tensor_direct(incidence, k, config.budget)
        diff = _first_difference(fsp, direct)
        if diff is not None:
            raise Mismatch(f"k={k}: fsp and direct paths differ at {diff[0]}: {diff[1]} != {diff[2]}")
        if k == 2 and cooc_matrix(incidence) != fsp:
            raise Mismatch("k=2: tensor paths differ from I^T I")
        if n ** k <= config.exhaustive_limit:
            indices = itertools.product(range(n), repeat=k)
            scope = f"all {n ** k} indices"
        else:
            indices = (idx for idx, _ in fsp.entries())
            scope = f"{fsp.nnz} stored indices"
        checked = 0
        for idx in indices:
            want = multiset_count(incidence, idx)
            if fsp[idx] != want:
                raise Mismatch(f"k={k}: tensor value {fsp[idx]} at {idx}, set count {want}")
            checked += 1
        lines.append(f"k={k}: fsp == direct == set count over {scope} ({checked} checked)")
    _emit(config, "\n".join(lines) + "\n")
    return EXIT_OK


COMMANDS = {"build": cmd_build, "cooc": cmd_cooc, "pmi": cmd_pmi, "embed": cmd_embed, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "embed":
        if args.ci and args.seed is None:
            parser.error("--ci requires --seed")
        if args.positive and args.target != "pmi":
            parser.error("--positive only applies with --target pmi")
    try:
        config = RunConfig.from_namespace(args)
    except InvalidInput as exc:
        parser.error(str(exc))
    try:
        return COMMANDS[config.command](config)
    except CapacityError as exc:
        print(f"cooctensor: capacity exceeded: {exc} (estimate {exc.estimate})", file=sys.stderr)
        return EXIT_CAPACITY
    except Mismatch as exc:
        print(f"cooctensor: verification failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (CoocError, OSError, UnicodeDecodeError) as exc:
        print(f"cooctensor: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
