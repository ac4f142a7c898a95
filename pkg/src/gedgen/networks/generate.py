"""End-to-end generation: pad, run a network (or its reference), strip."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from ..graph import EditInput, LabeledGraph, PaddedGraph, pad, strip
from ..relu.ir import ContractViolation, ReluNetwork, evaluate_batch
from .builders import build
from .config import NetworkConfig
from .reference import REFERENCES, decimal_to_index

MODES = ("network", "reference", "both")


class GenerationMismatch(AssertionError):
    """Network and reference simulator disagree on the same input."""


@lru_cache(maxsize=32)
def network_for(family: str, cfg: NetworkConfig) -> ReluNetwork:
    return build(family, cfg)


def _ranges(family: str, cfg: NetworkConfig) -> list[tuple[int, int]]:
    n, m, d = cfg.n, cfg.m, cfg.d
    if family == "gs":
        return [(0, n)] * d + [(1, m)] * d
    if family == "gd":
        return [(0, n)] * (2 * d)
    if family == "gi":
        return [(0, n + d - 1)] * (2 * d) + [(1, m)] * d
    raise ValueError(family)


def scaled_sequence(inp: EditInput, cfg: NetworkConfig) -> list[int]:
    """Check ``inp`` against its family's input contract; GE values come back times 1/Δ."""
    if inp.d != cfg.d:
        raise ContractViolation(f"sequence has d={inp.d}, network expects d={cfg.d}")
    if inp.family == "ge":
        out = []
        for j, v in enumerate(inp.values):
            s = Fraction(v) * cfg.grid
            if s.denominator != 1:
                raise ContractViolation(f"x_{j + 1} = {v} is not a multiple of 1/{cfg.grid}")
            if not 0 <= s < cfg.grid:
                raise ContractViolation(f"x_{j + 1} = {v} lies outside [0, 1)")
            out.append(int(s))
        return out
    out = []
    for j, (v, (lo, hi)) in enumerate(zip(inp.values, _ranges(inp.family, cfg))):
        if isinstance(v, float) or int(v) != v or not lo <= v <= hi:
            raise ContractViolation(f"x_{j + 1} = {v} outside the {inp.family} range [{lo}, {hi}]")
        out.append(int(v))
    return out


def _check_graph(g: LabeledGraph, cfg: NetworkConfig) -> None:
    if g.n != cfg.n or g.m != cfg.m:
        raise ValueError(f"graph has n={g.n}, m={g.m} but the network was configured for n={cfg.n}, m={cfg.m}")


def network_prefix(g: LabeledGraph, family: str, cfg: NetworkConfig) -> tuple[PaddedGraph, list[int]]:
    pg = pad(g, cfg.padding(family), cfg.B)
    if family == "gs":
        return pg, list(pg.U)
    return pg, list(pg.U) + pg.V.ravel().tolist()


def decode_output(g: LabeledGraph, family: str, cfg: NetworkConfig, row) -> LabeledGraph:
    row = [int(v) for v in row]
    if family == "gs":
        return LabeledGraph(tuple(row), g.adjacency, g.m)
    size = cfg.output_size(family)
    V = np.asarray(row[size:], dtype=np.int64).reshape(size, size)
    return strip(PaddedGraph(tuple(row[:size]), V, size - g.n, cfg.B), g.m)


def _run_reference(g, family, cfg, pg, x):
    ref = REFERENCES[family]
    if family == "gs":
        return ref(cfg, pg.U, x)
    if family == "ge":
        x = [Fraction(v, cfg.grid) for v in x]
    U, V = ref(cfg, pg.U, pg.V, x)
    return list(U) + [v for r in V for v in r]


def _check_rows(family: str, cfg: NetworkConfig, X: np.ndarray) -> None:
    if family == "ge":
        lo, hi = np.zeros(X.shape[1], dtype=np.int64), np.full(X.shape[1], cfg.grid - 1)
    else:
        lo, hi = np.asarray(_ranges(family, cfg), dtype=np.int64).reshape(-1, 2).T
    if X.shape[1] != lo.size:
        raise ContractViolation(f"{family} sequences for d={cfg.d} have length {lo.size}, got {X.shape[1]}")
    bad = np.argwhere((X < lo) | (X > hi))
    if bad.size:
        r, c = bad[0]
        raise ContractViolation(f"row {r}: x_{c + 1} = {X[r, c]} outside [{lo[c]}, {hi[c]}]")


def network_rows(g: LabeledGraph, family: str, X, cfg: NetworkConfig) -> np.ndarray:
    """Raw network outputs for a (batch, length) int array of sequences.

    GE rows hold grid steps (decimal times 1/Δ). Rows are range-checked.
    """
    _check_graph(g, cfg)
    X = np.atleast_2d(np.asarray(X, dtype=np.int64))
    _check_rows(family, cfg, X)
    _, prefix = network_prefix(g, family, cfg)
    Z = np.empty((X.shape[0], len(prefix) + X.shape[1]), dtype=np.int64)
    Z[:, : len(prefix)] = prefix
    Z[:, len(prefix) :] = X
    return evaluate_batch(network_for(family, cfg), Z, prescaled=True)


def reference_rows(g: LabeledGraph, family: str, X, cfg: NetworkConfig) -> np.ndarray:
    """Reference-simulator counterpart of :func:`network_rows`."""
    _check_graph(g, cfg)
    X = np.atleast_2d(np.asarray(X, dtype=np.int64))
    _check_rows(family, cfg, X)
    pg, _ = network_prefix(g, family, cfg)
    return np.asarray([_run_reference(g, family, cfg, pg, [int(v) for v in x]) for x in X], dtype=np.int64)


def generate_batch(
    g: LabeledGraph, inputs: Sequence[EditInput], cfg: NetworkConfig, mode: str = "network"
) -> list[LabeledGraph]:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if not inputs:
        return []
    _check_graph(g, cfg)
    families = {inp.family for inp in inputs}
    if len(families) != 1:
        raise ValueError(f"a batch must use one family, got {sorted(families)}")
    family = families.pop()
    xs = [scaled_sequence(inp, cfg) for inp in inputs]
    pg, _ = network_prefix(g, family, cfg)

    rows_net = rows_ref = None
    if mode in ("network", "both"):
        rows_net = network_rows(g, family, xs, cfg)
    if mode in ("reference", "both"):
        rows_ref = [_run_reference(g, family, cfg, pg, x) for x in xs]
    if mode == "both":
        for i, (a, b) in enumerate(zip(rows_net, rows_ref)):
            if list(map(int, a)) != list(b):
                raise GenerationMismatch(f"input {i} ({inputs[i].values}): network {list(a)} != reference {b}")
    rows = rows_net if rows_net is not None else rows_ref
    return [decode_output(g, family, cfg, row) for row in rows]


def generate(g: LabeledGraph, inp: EditInput, cfg: NetworkConfig, mode: str = "network") -> LabeledGraph:
    return generate_batch(g, [inp], cfg, mode)[0]


def edge_only_input(inp: EditInput, cfg: NetworkConfig) -> EditInput:
    """Neutralize every GE slot that is not an edge insertion or deletion.

    Substitution indices become 0, and an insertion or deletion slot whose two
    indices convert to the same vertex gets its first index set to 0.
    """
    if inp.family != "ge":
        raise ValueError("edge-only mode applies to GE sequences")
    d = cfg.d
    x = list(inp.values)
    for j in range(d):
        x[j] = 0
    for start, parts in ((2 * d, cfg.n + d - 1), (5 * d, cfg.n)):
        for j in range(start, start + d):
            a, b = decimal_to_index(Fraction(x[j]), parts), decimal_to_index(Fraction(x[j + d]), parts)
            if a == b:
                x[j] = 0
    return EditInput("ge", x)


def edge_only_ge(g: LabeledGraph, x: EditInput, cfg: NetworkConfig, mode: str = "network") -> LabeledGraph:
    return generate(g, edge_only_input(x, cfg), cfg, mode)
