"""Vertex-labeled graphs, sentinel padding and the JSON file format."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np


class GraphFormatError(ValueError):
    """Malformed graph data or file."""


class StructureError(ValueError):
    """A padded matrix pair violates the sentinel layout (points at a network bug)."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LabeledGraph:
    """Undirected simple graph on vertices 1..n with labels in 1..m."""

    labels: tuple[int, ...]
    adjacency: np.ndarray
    m: int

    def __post_init__(self):
        labels = tuple(int(v) for v in self.labels)
        adj = _frozen(self.adjacency).reshape(len(labels), len(labels)) if labels else _frozen(
            np.zeros((0, 0))
        )
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "adjacency", adj)
        if self.m < 1:
            raise GraphFormatError(f"alphabet size m must be positive, got {self.m}")
        bad = [v for v in labels if not 1 <= v <= self.m]
        if bad:
            raise GraphFormatError(f"labels {bad} outside 1..{self.m}")
        if not np.isin(adj, (0, 1)).all():
            raise GraphFormatError("adjacency entries must be 0 or 1")
        if not (adj == adj.T).all():
            raise GraphFormatError("adjacency must be symmetric")
        if np.any(np.diag(adj)):
            raise GraphFormatError("self-loops are not allowed")

    @classmethod
    def from_edges(cls, labels: Iterable[int], edges: Iterable[tuple[int, int]], m: int) -> "LabeledGraph":
        labels = list(labels)
        n = len(labels)
        adj = np.zeros((n, n), dtype=np.int64)
        for i, k in edges:
            if not (1 <= i <= n and 1 <= k <= n) or i == k:
                raise GraphFormatError(f"bad edge ({i}, {k}) for n={n}")
            adj[i - 1, k - 1] = adj[k - 1, i - 1] = 1
        return cls(tuple(labels), adj, m)

    @property
    def n(self) -> int:
        return len(self.labels)

    def edges(self) -> list[tuple[int, int]]:
        """Sorted 1-indexed edge list with i < k."""
        i, k = np.nonzero(np.triu(self.adjacency, 1))
        return [(int(a) + 1, int(b) + 1) for a, b in zip(i, k)]

    @property
    def edge_count(self) -> int:
        return int(np.triu(self.adjacency, 1).sum())

    def key(self) -> tuple:
        return (self.m, self.labels, tuple(self.edges()))

    def __eq__(self, other) -> bool:
        return isinstance(other, LabeledGraph) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"LabeledGraph(labels={list(self.labels)}, edges={self.edges()}, m={self.m})"

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "labels": list(self.labels),
            "edges": [list(e) for e in self.edges()],
        }


@dataclass(frozen=True, eq=False)
class PaddedGraph:
    """Label column ``U`` and matrix ``V`` where sentinel ``B`` marks empty slots."""

    U: tuple[int, ...]
    V: np.ndarray
    pad_count: int
    B: int

    def __post_init__(self):
        object.__setattr__(self, "U", tuple(int(u) for u in self.U))
        object.__setattr__(self, "V", _frozen(self.V).reshape(len(self.U), len(self.U)))

    @property
    def size(self) -> int:
        return len(self.U)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PaddedGraph)
            and self.U == other.U
            and self.B == other.B
            and np.array_equal(self.V, other.V)
        )


def pad(g: LabeledGraph, pad_count: int, B: int) -> PaddedGraph:
    if pad_count < 0:
        raise ValueError(f"pad_count must be non-negative, got {pad_count}")
    if B <= max(g.m, g.n + pad_count):
        raise ValueError(
            f"sentinel B={B} must exceed max(m, n + pad_count) = {max(g.m, g.n + pad_count)} "
            "so it cannot collide with a label or an index"
        )
    size = g.n + pad_count
    V = np.full((size, size), B, dtype=np.int64)
    V[: g.n, : g.n] = g.adjacency
    return PaddedGraph(g.labels + (B,) * pad_count, V, pad_count, B)


def strip(pg: PaddedGraph, m: int) -> LabeledGraph:
    """Drop every slot whose label is ``B``; rows/columns must agree with the labels."""
    U = np.asarray(pg.U, dtype=np.int64)
    V = pg.V
    empty = U == pg.B
    row_b = (V == pg.B).all(axis=1)
    col_b = (V == pg.B).all(axis=0)
    for i in range(U.size):
        if empty[i] != row_b[i] or empty[i] != col_b[i]:
            raise StructureError(
                f"slot {i + 1}: label {'is' if empty[i] else 'is not'} B but row/column "
                f"all-B flags are {bool(row_b[i])}/{bool(col_b[i])}"
            )
    keep = np.flatnonzero(~empty)
    sub = V[np.ix_(keep, keep)]
    try:
        return LabeledGraph(tuple(U[keep]), sub, m)
    except GraphFormatError as exc:
        raise StructureError(f"stripped graph is malformed: {exc}") from exc


def edge_symmetric_difference(g: LabeledGraph, h: LabeledGraph) -> int:
    if g.n != h.n:
        raise ValueError(
            f"edge symmetric difference needs the same vertex set (n={g.n} vs n={h.n})"
        )
    return int(np.triu(g.adjacency != h.adjacency, 1).sum())


def random_graph(n: int, edge_count: int, m: int, seed: int) -> LabeledGraph:
    """Uniform simple graph with exactly ``edge_count`` edges and uniform labels."""
    pairs = n * (n - 1) // 2
    if not 0 <= edge_count <= pairs:
        raise ValueError(f"cannot place {edge_count} edges on {n} vertices (max {pairs})")
    rng = np.random.Generator(np.random.PCG64(seed))
    iu, ku = np.triu_indices(n, 1)
    chosen = rng.choice(pairs, size=edge_count, replace=False) if edge_count else []
    labels = rng.integers(1, m + 1, size=n)
    adj = np.zeros((n, n), dtype=np.int64)
    adj[iu[chosen], ku[chosen]] = 1
    adj = adj + adj.T
    return LabeledGraph(tuple(labels), adj, m)


# -- file format ------------------------------------------------------------------


def graph_to_json(g: LabeledGraph) -> str:
    return json.dumps(g.to_dict(), separators=(", ", ": ")) + "\n"


def graph_from_json(text: str) -> LabeledGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise GraphFormatError("line 1: expected a JSON object")
    missing = {"n", "m", "labels", "edges"} - set(data)
    if missing:
        raise GraphFormatError(f"line 1: missing keys {sorted(missing)}")
    n, labels = data["n"], data["labels"]
    if not isinstance(labels, list) or len(labels) != n:
        raise GraphFormatError(f"labels must be a list of length n={n}")
    edges = []
    for e in data["edges"]:
        if not (isinstance(e, list) and len(e) == 2 and e[0] < e[1]):
            raise GraphFormatError(f"edge {e!r} must be [i, j] with i < j")
        edges.append((e[0], e[1]))
    if len(set(edges)) != len(edges):
        raise GraphFormatError("duplicate edges")
    return LabeledGraph.from_edges(labels, edges, data["m"])


def read_graph(path) -> LabeledGraph:
    return graph_from_json(Path(path).read_text())


def write_graph(g: LabeledGraph, path) -> None:
    Path(path).write_text(graph_to_json(g))


def running_example_graph() -> LabeledGraph:
    """The five-vertex running example, labels over {1..5}."""
    return LabeledGraph.from_edges(
        [3, 5, 4, 2, 4],
        [(1, 2), (1, 5), (2, 3), (2, 4), (2, 5), (4, 5)],
        5,
    )


# -- edit inputs -------------------------------------------------------------------

_SEQUENCE_SLOTS = {"gs": 2, "gd": 2, "gi": 3, "ge": 7}


@dataclass(frozen=True)
class EditInput:
    """The sequence x driving one network family: ints, or grid decimals for GE."""

    family: str
    values: tuple

    def __post_init__(self):
        family = self.family.lower()
        if family not in _SEQUENCE_SLOTS:
            raise ValueError(f"unknown family {self.family!r}; expected one of {sorted(_SEQUENCE_SLOTS)}")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) % _SEQUENCE_SLOTS[family]:
            raise ValueError(
                f"{family} sequences have length {_SEQUENCE_SLOTS[family]}d, got {len(self.values)}"
            )

    @property
    def d(self) -> int:
        return len(self.values) // _SEQUENCE_SLOTS[self.family]

    def __len__(self) -> int:
        return len(self.values)
