"""Four worked examples with known intermediates, replayed through network and reference.

Each example lists expected intermediate values by symbol. A symbol is
compared in full, on a prefix, or on selected 1-based positions, because the
source tables do not always list whole vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .graph import LabeledGraph, running_example_graph, pad
from .networks.builders import build_probed
from .networks.config import NetworkConfig
from .networks.reference import REFERENCES
from .relu.ir import evaluate

B = "B"  # placeholder for the sentinel inside expected values


@dataclass(frozen=True)
class Expect:
    symbol: str  # name as printed in the worked example
    probe: str  # probe / trace key
    value: object  # list, nested list, or {position: value}
    shape: tuple | None = None  # reshape of the probe before comparison
    rows: int | None = None  # compare only the leading rows / columns
    cols: int | None = None


@dataclass(frozen=True)
class Example:
    number: int
    family: str
    cfg: NetworkConfig
    graph: LabeledGraph
    x: tuple
    expects: tuple[Expect, ...]


@dataclass(frozen=True)
class Check:
    example: int
    symbol: str
    source: str  # "network" or "reference"
    ok: bool
    expected: object
    actual: object


def _example_graph(m: int) -> LabeledGraph:
    g = running_example_graph()
    return LabeledGraph(g.labels, g.adjacency, m)


def _example3_R(b: int) -> list[list]:
    R = [[b] * 8 for _ in range(8)]
    A = running_example_graph().adjacency
    for i in range(5):
        for k in range(5):
            R[i][k] = int(A[i, k])
    for i in range(6):
        R[i][5] = R[5][i] = 0
    return R


def examples() -> list[Example]:
    cfg1 = NetworkConfig.for_graph(5, 5, 3)
    cfg4 = NetworkConfig.for_graph(5, 10, 3, grid=700)
    x4 = tuple(
        Fraction(v)
        for v in "0.45 0 0.59 0 0.4 0.15 0.11 0.05 0.88 0.55 0.44 0 0.52 0.87 0.03 0.33 0.4 0.93 0.79 0.65 0.9".split()
    )
    S3 = [[0] * 8 for _ in range(8)]
    S3[3][5] = S3[5][3] = 1
    V3 = _example3_R(B)
    V3[3][5] = V3[5][3] = 1
    return [
        Example(1, "gs", cfg1, _example_graph(5), (5, 3, 3, 5, 2, 3), (
            Expect("e", "e", [5, 3, 0]),
            Expect("F", "F", [3, 5, 0, 2, 0]),
            Expect("G", "G", [0, 0, 2, 0, 5]),
            Expect("L'", "output", [3, 5, 2, 2, 5]),
        )),
        Example(2, "gd", cfg1, _example_graph(5), (5, 3, 3, 5, 2, 3), (
            Expect("t", "t", {(2, 3): 1, (3, 2): 1, **{(i, k): 0 for i in range(1, 6) for k in range(1, 6) if {i, k} != {2, 3}}}, (5, 5)),
            Expect("t''", "t_deg", [2, 3, 0, 2, 3]),
            Expect("x'", "x_del", {1: 0}),
            Expect("e'", "kept", [1, 1, 0, 1, 1, 1, 1, 1]),
            Expect("f'", "rank", [B, "2B", 0, "3B", "4B", "5B", "6B"], rows=7),
            Expect("W", "W", [
                [0, 1, 0, 0, 1, B, B],
                [1, 0, 0, 1, 1, B, B],
                [0, 1, 0, 0, 1, B, B],
                [1, 1, 0, 1, 0, B, B],
            ], (5, 8), rows=4, cols=7),
            Expect("U'", "U_out", [3, 5, 2, 4, B]),
            Expect("V'", "V_out", [
                [0, 1, 0, 1, B],
                [1, 0, 1, 1, B],
                [0, 1, 0, 1, B],
                [1, 1, 1, 0, B],
                [B, B, B, B, B],
            ], (5, 5)),
        )),
        Example(3, "gi", cfg1, _example_graph(5), (4, 3, 7, 6, 3, 2, 1, 5, 2), (
            Expect("e'", "e_prime", [4, 3, 7]),
            Expect("f", "f", [0, 0, 1]),
            Expect("x1", "x1", [4, 3, 0]),
            Expect("f'", "f2", [0, 0, 0]),
            Expect("x2", "x2", [6, 3, 2]),
            Expect("g", "g", [B, 5, B]),
            Expect("g'", "g_rank", [1, 0, 2]),
            Expect("x3", "x3", [5, B, B]),
            Expect("U'", "U_out", [3, 5, 4, 2, 4, 5, B, B]),
            Expect("R", "R", _example3_R(B), (8, 8)),
            Expect("S'", "S", S3, (8, 8)),
            Expect("V'", "V_out", V3, (8, 8)),
        )),
        Example(4, "ge", cfg4, _example_graph(10), x4, (
            Expect("x'", "x_prime", [3, 0, 3, 1, 4, 2, 1, 1, 7, 4, 4, 0, 6, 9, 1, 2, 2, 5, 4, 4, 5]),
            Expect("x''", "x_dprime", [3, 0, 0, 1, 4, 2, 1, 0, 7, 4, 4, 0, 6, 9, 1, 2, 0, 5, 4, 4, 5]),
            # t, t' and w list the substitution, insertion and deletion index slots
            # (positions 1-3, 7-9, 16-18 of the sequence) in that order
            Expect("t", "t", [1, 0, 0, 1, 0, 0, 1, 0, 1]),
            Expect("t'", "t_prime", [0, 0, 0, 0, 0, 0, 0, 0, 1]),
            Expect("w", "w", [3, 0, 0, 1, 0, 7, 2, 0, 0]),
            Expect("X", "X", [3, 0, 0, 1, 4, 2, 1, B, 7, 4, 4, 0, 6, 9, 1, 2, 0, 0, 4, 4, 5]),
        )),
    ]


def _resolve(value, b: int):
    """Replace sentinel placeholders ("B", "2B", ...) with integers."""
    if isinstance(value, dict):
        return {k: _resolve(v, b) for k, v in value.items()}
    if isinstance(value, list):
        return [_resolve(v, b) for v in value]
    if isinstance(value, str):
        return b * (int(value[:-1]) if len(value) > 1 else 1)
    return value


def _select(actual: np.ndarray, exp: Expect, expected):
    """Cut ``actual`` down to the part that ``expected`` describes."""
    if exp.shape is not None:
        actual = actual.reshape(exp.shape)
    if isinstance(expected, dict):
        out = {}
        for pos, _ in expected.items():
            idx = tuple(p - 1 for p in pos) if isinstance(pos, tuple) else pos - 1
            out[pos] = int(actual[idx])
        return out
    if exp.rows is not None:
        actual = actual[: exp.rows]
    if exp.cols is not None:
        actual = actual[:, : exp.cols]
    return actual.tolist()


def _network_input(ex: Example) -> list:
    pg = pad(ex.graph, ex.cfg.padding(ex.family), ex.cfg.B)
    head = list(pg.U) if ex.family == "gs" else list(pg.U) + pg.V.ravel().tolist()
    return head + list(ex.x)


def _reference_trace(ex: Example) -> dict:
    pg = pad(ex.graph, ex.cfg.padding(ex.family), ex.cfg.B)
    trace: dict = {}
    ref = REFERENCES[ex.family]
    if ex.family == "gs":
        trace["output"] = ref(ex.cfg, pg.U, list(ex.x), trace)
    else:
        ref(ex.cfg, pg.U, pg.V, list(ex.x), trace)
    return {k: np.asarray(v, dtype=np.int64).ravel() for k, v in trace.items()}


def replay(ex: Example, C: int | None = None) -> list[Check]:
    """Compare every expected symbol against the network probes and the reference trace.

    ``C`` swaps in another suppression constant, to show the replay catches it.
    """
    if C is not None:
        ex = replace(ex, cfg=ex.cfg.with_suppression(C))
    net, spans = build_probed(ex.family, ex.cfg)
    out = np.asarray(evaluate(net, _network_input(ex)), dtype=np.int64)
    sources = {
        "network": {k: out[s] for k, s in spans.items()},
        "reference": _reference_trace(ex),
    }
    checks = []
    for exp in ex.expects:
        expected = _resolve(exp.value, ex.cfg.B)
        for source, values in sources.items():
            actual = _select(values[exp.probe], exp, expected)
            checks.append(Check(ex.number, exp.symbol, source, actual == expected, expected, actual))
    return checks


def replay_all(selected=None, C: int | None = None) -> list[Check]:
    return [c for ex in examples() if selected is None or ex.number in selected for c in replay(ex, C)]


def first_failure(checks: list[Check]) -> Check | None:
    return next((c for c in checks if not c.ok), None)
