"""Command-line front end: generate, examples, bench, validity."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .bench import parse_bytes, parse_grid, run_bench, to_csv, validity
from .ged import SIZE_GUARD, GedCertificate, certify_within
from .golden import first_failure, replay_all
from .graph import EditInput, GraphFormatError, LabeledGraph, graph_to_json, random_graph, read_graph
from .networks.config import FAMILIES, NetworkConfig
from .networks.generate import MODES, edge_only_input, generate_batch
from .relu.ir import ContractViolation
from .sampler import SamplerConfig, sample

EXACT_MAX_N = 6  # exact certification only for inputs up to this many vertices
DEFAULT_BUDGET = "4.5G"


class UncertifiedOutput(RuntimeError):
    """A generated graph could not be certified and the run was not allowed to continue."""


def _parse_x(text: str, family: str) -> EditInput:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if family == "ge":
        return EditInput(family, tuple(Fraction(p) for p in parts))
    return EditInput(family, tuple(int(p) for p in parts))


def _certificate(g: LabeledGraph, h: LabeledGraph, d: int, edge_only: bool) -> GedCertificate | None:
    if g.n <= EXACT_MAX_N and g.n + h.n <= SIZE_GUARD:
        return certify_within(g, h, d, "exact")
    if g.n == h.n:
        cert = certify_within(g, h, d, "edge_only")
        if cert.within or edge_only:
            return cert
    return None


def _cert_dict(cert: GedCertificate | None) -> dict:
    if cert is None:
        return {"method": "uncertified (bound by construction)", "within": None}
    return {
        "method": cert.method,
        "distance": cert.distance,
        "lower_bound": cert.lower_bound,
        "upper_bound": cert.upper_bound,
        "within": cert.within,
        "witness": [list(op) for op in cert.witness],
    }


def cmd_generate(args) -> int:
    g = read_graph(args.graph)
    family = args.family
    if args.edge_only and family != "ge":
        raise ValueError("--edge-only applies to --family ge")
    cfg = NetworkConfig.for_graph(g.n, g.m, args.d, grid=args.delta_grid)
    if args.x is not None:
        inputs = [_parse_x(args.x, family)]
    else:
        inputs = sample(SamplerConfig.for_network(family, cfg, args.seed), args.count)
    if args.edge_only:
        inputs = [edge_only_input(x, cfg) for x in inputs]
    outputs = generate_batch(g, inputs, cfg, args.mode)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    records = []
    for k, (x, h) in enumerate(zip(inputs, outputs)):
        cert = _certificate(g, h, args.d, args.edge_only)
        if cert is not None and not cert.within:
            raise UncertifiedOutput(f"output {k} violates the bound: {_cert_dict(cert)}")
        if cert is None and not args.allow_uncertified:
            raise UncertifiedOutput(
                f"output {k} has {h.n} vertices from an input with {g.n}; exact certification is "
                f"limited to n <= {EXACT_MAX_N}. Pass --allow-uncertified to accept the bound by construction"
            )
        name = f"graph_{k:05d}.json"
        (out / name).write_text(graph_to_json(h))
        records.append({"index": k, "file": name, "x": [str(v) for v in x.values], "certificate": _cert_dict(cert)})
    summary = {
        "input": g.to_dict(),
        "family": family,
        "d": args.d,
        "count": len(records),
        "seed": args.seed,
        "mode": args.mode,
        "edge_only": args.edge_only,
        "outputs": records,
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=1) + "\n")
    print(f"wrote {len(records)} graphs and summary.json to {out}")
    return 0


def cmd_examples(args) -> int:
    selected = [int(v) for v in args.only.split(",")] if args.only else None
    checks = replay_all(selected, args.override_c)
    for c in checks:
        status = "ok" if c.ok else "FAIL"
        print(f"example {c.example} {c.symbol:<4} {c.source:<9} {status}")
    bad = first_failure(checks)
    if bad is None:
        print(f"all {len(checks)} checks passed")
        return 0
    print(f"first mismatch: example {bad.example} symbol {bad.symbol} ({bad.source}): "
          f"expected {bad.expected}, got {bad.actual}")
    return 1


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_bench(args) -> int:
    records = run_bench(parse_grid(args.grid), args.family, args.seed, parse_bytes(args.memory_budget))
    _write(to_csv(records), args.out)
    return 0


def cmd_validity(args) -> int:
    if args.random_graph:
        n, e = (int(v) for v in args.random_graph.split(","))
        g = random_graph(n, e, 1, args.seed)
    elif args.graph:
        g = read_graph(args.graph)
    else:
        raise ValueError("pass a graph file or --random-graph N,E")
    _write(to_csv([validity(g, args.d, args.count, args.seed)]), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gedgen", description="Generate graphs within a graph edit distance bound.")
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="run a network on a graph and certify the outputs")
    gen.add_argument("graph", help="input graph JSON")
    gen.add_argument("--family", choices=FAMILIES, default="ge")
    gen.add_argument("--d", type=int, required=True)
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--mode", choices=MODES, default="network")
    gen.add_argument("--edge-only", action="store_true", help="GE with edge insertions and deletions only")
    gen.add_argument("--x", help="explicit comma-separated sequence instead of sampling")
    gen.add_argument("--delta-grid", type=int, default=None, help="GE input resolution 1/Δ")
    gen.add_argument("--allow-uncertified", action="store_true")
    gen.add_argument("--out", default="gedgen_out")
    gen.set_defaults(func=cmd_generate)

    ex = sub.add_parser("examples", help="replay the four worked examples")
    ex.add_argument("--only", help="comma-separated example numbers")
    ex.add_argument("--override-c", type=int, default=None, help="replace C (fault injection)")
    ex.set_defaults(func=cmd_examples)

    be = sub.add_parser("bench", help="build and run networks over an (n, d) grid")
    be.add_argument("--family", choices=FAMILIES, default="ge")
    be.add_argument("--grid", default="n=100,200,400;d=10,20")
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--memory-budget", default=DEFAULT_BUDGET)
    be.add_argument("--out")
    be.set_defaults(func=cmd_bench)

    va = sub.add_parser("validity", help="edge-only GE samples scored on size and distance")
    va.add_argument("graph", nargs="?")
    va.add_argument("--random-graph", help="N,E: seeded unlabeled random graph instead of a file")
    va.add_argument("--d", type=int, required=True)
    va.add_argument("--count", type=int, default=500)
    va.add_argument("--seed", type=int, default=0)
    va.add_argument("--out")
    va.set_defaults(func=cmd_validity)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, GraphFormatError, ContractViolation, UncertifiedOutput, ValueError) as exc:
        print(f"gedgen {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
