"""Scalability and validity runs with versioned CSV output."""

from __future__ import annotations

import csv
import io
import os
import time
from dataclasses import asdict, dataclass, fields

import numpy as np

from .graph import LabeledGraph, edge_symmetric_difference, random_graph
from .networks.builders import build
from .networks.config import NetworkConfig
from .networks.generate import decode_output, network_prefix, edge_only_input, generate_batch, scaled_sequence
from .relu.ir import evaluate_batch
from .sampler import SamplerConfig, sample

SCHEMA_LINE = "# ged-exactgen schema v1"

# Bytes per (N^2 (d + 1)) unit of network, measured on GE builds
# (N = padded size); covers builder bookkeeping and the compiled layers.
_BYTES_PER_CELL = 1100
_BASE_BYTES = 150 * 2**20


@dataclass
class BenchRecord:
    n: int
    d: int
    family: str
    wall_time_seconds: float | str  # "MEMOUT" or "FAILED:<reason>" for skipped cells
    neuron_count: int | str
    depth: int | str
    peak_memory_estimate: int


@dataclass
class ValidityRecord:
    n: int
    E: int
    d: int
    N_n: int
    N_E: int
    N_d: int
    sample_count: int


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("GEDGEN_THREADS", "1")))
    except ValueError:
        return 1


def estimate_memory(family: str, n: int, d: int) -> int:
    size = n + (2 * d if family == "ge" else d)
    return _BASE_BYTES + _BYTES_PER_CELL * size * size * (d + 1)


def parse_grid(spec: str) -> list[tuple[int, int]]:
    """``"n=100,200;d=10,20"`` -> sorted (n, d) cells."""
    parts = {}
    for chunk in spec.replace(" ", "").split(";"):
        if not chunk:
            continue
        key, _, values = chunk.partition("=")
        if key not in ("n", "d") or not values:
            raise ValueError(f"bad grid component {chunk!r}; expected n=..;d=..")
        parts[key] = [int(v) for v in values.split(",") if v]
    if set(parts) != {"n", "d"}:
        raise ValueError(f"grid needs both n and d, got {spec!r}")
    return sorted((n, d) for n in parts["n"] for d in parts["d"])


def parse_bytes(text: str) -> int:
    text = text.strip().upper()
    scale = {"K": 2**10, "M": 2**20, "G": 2**30}
    if text and text[-1] in scale:
        return int(float(text[:-1]) * scale[text[-1]])
    return int(text)


def bench_cell(family: str, n: int, d: int, seed: int, memory_budget: int, m: int = 5) -> BenchRecord:
    """Build the network for one grid cell and generate one graph with it."""
    estimate = estimate_memory(family, n, d)
    if estimate > memory_budget:
        return BenchRecord(n, d, family, "MEMOUT", "", "", estimate)
    g = random_graph(n, min(2 * n, n * (n - 1) // 2), m, seed)
    try:
        start = time.perf_counter()
        cfg = NetworkConfig.for_graph(n, m, d)
        net = build(family, cfg)
        inp = sample(SamplerConfig.for_network(family, cfg, seed), 1)[0]
        pg, prefix = network_prefix(g, family, cfg)
        z = np.asarray(prefix + scaled_sequence(inp, cfg), dtype=np.int64)
        decode_output(g, family, cfg, evaluate_batch(net, z, prescaled=True)[0])
        wall = time.perf_counter() - start
        return BenchRecord(n, d, family, round(wall, 3), net.neuron_count, net.depth, estimate)
    except MemoryError:
        return BenchRecord(n, d, family, "MEMOUT", "", "", estimate)
    except Exception as exc:  # recorded; the run continues
        return BenchRecord(n, d, family, f"FAILED:{type(exc).__name__}", "", "", estimate)


def run_bench(cells, family: str, seed: int, memory_budget: int) -> list[BenchRecord]:
    return [bench_cell(family, n, d, seed, memory_budget) for n, d in sorted(cells)]


def validity(g: LabeledGraph, d: int, count: int, seed: int, chunk: int = 100) -> ValidityRecord:
    """Edge-only GE generation scored by vertex count, edge range and edge distance."""
    cfg = NetworkConfig.for_graph(g.n, g.m, d)
    inputs = [edge_only_input(x, cfg) for x in sample(SamplerConfig.for_network("ge", cfg, seed), count)]
    E = g.edge_count
    N_n = N_E = N_d = 0
    for start in range(0, count, chunk):
        for h in generate_batch(g, inputs[start : start + chunk], cfg):
            N_n += h.n == g.n
            N_E += E - d <= h.edge_count <= E + d
            N_d += h.n == g.n and h.labels == g.labels and edge_symmetric_difference(g, h) <= d
    return ValidityRecord(g.n, E, d, N_n, N_E, N_d, count)


def to_csv(records) -> str:
    buf = io.StringIO()
    buf.write(SCHEMA_LINE + "\n")
    if records:
        names = [f.name for f in fields(records[0])]
        writer = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
        writer.writeheader()
        for r in records:
            writer.writerow(asdict(r))
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    lines = text.splitlines()
    if not lines or lines[0] != SCHEMA_LINE:
        raise ValueError(f"missing schema line {SCHEMA_LINE!r}")
    return list(csv.DictReader(lines[1:]))
