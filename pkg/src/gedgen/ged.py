"""Exact graph edit distance for small graphs, and distance certificates.

Every operation costs 1: vertex insertion/deletion, edge insertion/deletion
and label substitution. The search is a depth-first branch and bound over
partial maps from the vertices of ``g`` to vertices of ``h`` (or deletion).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .graph import LabeledGraph, edge_symmetric_difference

SIZE_GUARD = 14  # largest n(g) + n(h) the exhaustive search accepts


class GedSizeError(ValueError):
    """Graphs too large for exhaustive search."""


@dataclass(frozen=True)
class GedCertificate:
    """Result of a distance computation.

    ``distance`` is exact when known. When the search stops at ``max_cost``
    it is None, ``upper_bound`` is None and ``lower_bound`` is max_cost + 1.
    An identity-map certificate knows only an upper bound.
    """

    method: str  # "exact_search" or "identity_map"
    distance: int | None
    lower_bound: int
    upper_bound: int | None
    witness: tuple = field(default=(), compare=False)
    bound: int | None = None  # the d being certified, if any

    @property
    def exceeded(self) -> bool:
        return self.upper_bound is None

    @property
    def within(self) -> bool:
        """True when the certified bound holds (distance <= bound)."""
        if self.bound is None:
            raise ValueError("certificate was not issued against a bound")
        return self.upper_bound is not None and self.upper_bound <= self.bound


def _bits(g: LabeledGraph) -> list[int]:
    adj = g.adjacency
    return [sum(1 << k for k in range(g.n) if adj[i, k]) for i in range(g.n)]


def _edges_within(bits: list[int], members: int) -> int:
    total = 0
    rest = members
    while rest:
        low = rest & -rest
        i = low.bit_length() - 1
        total += bin(bits[i] & members).count("1")
        rest ^= low
    return total // 2


def exact_ged(g: LabeledGraph, h: LabeledGraph, max_cost: int | None = None) -> GedCertificate:
    n1, n2 = g.n, h.n
    if n1 + n2 > SIZE_GUARD:
        raise GedSizeError(f"exact search is limited to n(g) + n(h) <= {SIZE_GUARD}, got {n1} + {n2}")
    ag, ah = _bits(g), _bits(h)
    lg, lh = g.labels, h.labels
    deg_g = [bin(b).count("1") for b in ag]
    deg_h = [bin(b).count("1") for b in ah]
    order = sorted(range(n1), key=lambda i: (-deg_g[i], i))
    # edges of g between order[q] and the vertices after it
    later_mask = [0] * (n1 + 1)
    for q in range(n1 - 1, -1, -1):
        later_mask[q] = later_mask[q + 1] | (1 << order[q])
    all_h = (1 << n2) - 1

    # trivial upper bound: delete g, insert h
    trivial = n1 + g.edge_count + n2 + h.edge_count
    limit = trivial if max_cost is None else min(max_cost, trivial)
    best = [limit + 1, None]
    mapping = [-1] * n1  # -1 unassigned, -2 deleted, else vertex of h

    def lower_bound(pos: int, used: int) -> int:
        rest_g = later_mask[pos]
        rest_h = all_h & ~used
        c1 = Counter(lg[i] for i in order[pos:])
        c2 = Counter(lh[j] for j in range(n2) if rest_h >> j & 1)
        common = sum((c1 & c2).values())
        vertex = max(n1 - pos, bin(rest_h).count("1")) - common
        edge = abs(_edges_within(ag, rest_g) - _edges_within(ah, rest_h))
        return vertex + edge

    def completion(used: int) -> int:
        free = all_h & ~used
        cost = bin(free).count("1")
        for j in range(n2):
            if free >> j & 1:
                # edges to mapped vertices, plus edges inside the free set counted once
                cost += bin(ah[j] & used).count("1") + bin(ah[j] & free & ((1 << j) - 1)).count("1")
        return cost

    def dfs(pos: int, cost: int, used: int):
        if cost + lower_bound(pos, used) >= best[0]:
            return
        if pos == n1:
            total = cost + completion(used)
            if total < best[0]:
                best[0], best[1] = total, list(mapping)
            return
        i = order[pos]
        done = order[:pos]
        options = []
        for j in range(n2):
            if used >> j & 1:
                continue
            c = int(lg[i] != lh[j])
            for i2 in done:
                e1 = ag[i] >> i2 & 1
                j2 = mapping[i2]
                c += (e1 != (ah[j] >> j2 & 1)) if j2 >= 0 else e1
            options.append((c, abs(deg_g[i] - deg_h[j]), j))
        options.sort()
        deleted = 1 + sum(ag[i] >> i2 & 1 for i2 in done)
        for c, _, j in options:
            mapping[i] = j
            dfs(pos + 1, cost + c, used | (1 << j))
        mapping[i] = -2
        dfs(pos + 1, cost + deleted, used)
        mapping[i] = -1

    dfs(0, 0, 0)
    if best[1] is None:
        return GedCertificate("exact_search", None, limit + 1, None, (), max_cost)
    path = _witness(g, h, best[1])
    return GedCertificate("exact_search", best[0], best[0], best[0], tuple(path), max_cost)


def _witness(g: LabeledGraph, h: LabeledGraph, mapping: list[int]) -> list[tuple]:
    """Edit path realizing ``mapping``; vertices of g keep ids 1..n, new ones get n+1, ..."""
    n1 = g.n
    image = {i: j for i, j in enumerate(mapping) if j >= 0}
    pre = {j: i for i, j in image.items()}
    path: list[tuple] = []
    for u, v in g.edges():
        a, b = image.get(u - 1), image.get(v - 1)
        if a is None or b is None or not h.adjacency[a, b]:
            path.append(("del_edge", u, v))
    for i, j in enumerate(mapping):
        if j < 0:
            path.append(("del_vertex", i + 1))
    for i, j in image.items():
        if g.labels[i] != h.labels[j]:
            path.append(("sub", i + 1, h.labels[j]))
    new_id = {}
    for j in range(h.n):
        if j not in pre:
            new_id[j] = n1 + len(new_id) + 1
            path.append(("ins_vertex", h.labels[j]))
    ident = {j: (pre[j] + 1 if j in pre else new_id[j]) for j in range(h.n)}
    for a, b in h.edges():
        i, k = pre.get(a - 1), pre.get(b - 1)
        if i is None or k is None or not g.adjacency[i, k]:
            u, v = sorted((ident[a - 1], ident[b - 1]))
            path.append(("ins_edge", u, v))
    return path


def apply_edit_path(path, g: LabeledGraph, m: int | None = None) -> LabeledGraph:
    """Replay ``path`` on ``g``; raises ValueError on the first invalid step."""
    labels = {i + 1: lab for i, lab in enumerate(g.labels)}
    edges = {frozenset(e) for e in g.edges()}
    next_id = g.n + 1
    m = g.m if m is None else m
    for step, op in enumerate(path):
        kind = op[0]
        if kind == "del_edge":
            e = frozenset(op[1:3])
            if e not in edges:
                raise ValueError(f"step {step}: edge {op[1:3]} does not exist")
            edges.remove(e)
        elif kind == "ins_edge":
            u, v = op[1:3]
            if u == v or u not in labels or v not in labels:
                raise ValueError(f"step {step}: edge {op[1:3]} needs two existing vertices")
            e = frozenset((u, v))
            if e in edges:
                raise ValueError(f"step {step}: edge {op[1:3]} already exists")
            edges.add(e)
        elif kind == "del_vertex":
            u = op[1]
            if u not in labels:
                raise ValueError(f"step {step}: vertex {u} does not exist")
            if any(u in e for e in edges):
                raise ValueError(f"step {step}: vertex {u} still has incident edges")
            del labels[u]
        elif kind == "ins_vertex":
            if not 1 <= op[1] <= m:
                raise ValueError(f"step {step}: label {op[1]} outside 1..{m}")
            labels[next_id] = op[1]
            next_id += 1
        elif kind == "sub":
            u, lab = op[1:3]
            if u not in labels or not 1 <= lab <= m:
                raise ValueError(f"step {step}: bad substitution {op}")
            labels[u] = lab
        else:
            raise ValueError(f"step {step}: unknown operation {kind!r}")
    ids = sorted(labels)
    pos = {u: p + 1 for p, u in enumerate(ids)}
    return LabeledGraph.from_edges(
        [labels[u] for u in ids], [tuple(sorted(pos[u] for u in e)) for e in edges], m
    )


def validate_edit_path(path, g: LabeledGraph) -> bool:
    """True when every step of ``path`` is legal when replayed on ``g``."""
    try:
        apply_edit_path(path, g)
    except ValueError:
        return False
    return True


def identity_cost(g: LabeledGraph, h: LabeledGraph) -> int:
    """Cost of the edit path that keeps vertex i as vertex i (same vertex count)."""
    if g.n != h.n:
        raise ValueError(f"identity map needs equal vertex counts, got {g.n} and {h.n}")
    return sum(a != b for a, b in zip(g.labels, h.labels)) + edge_symmetric_difference(g, h)


def certify_within(g: LabeledGraph, g_prime: LabeledGraph, d: int, mode: str = "exact") -> GedCertificate:
    """Certify GED(g, g_prime) <= d.

    ``exact`` runs the bounded search. ``edge_only`` prices the identity
    vertex map, an upper bound that is tight enough whenever the edits were
    edge insertions and deletions (or substitutions) on fixed vertices.
    """
    if mode == "exact":
        return exact_ged(g, g_prime, max_cost=d)
    if mode == "edge_only":
        cost = identity_cost(g, g_prime)
        return GedCertificate("identity_map", None, abs(g.n - g_prime.n), cost, (), d)
    raise ValueError(f"mode must be 'exact' or 'edge_only', got {mode!r}")
