"""Lowering of the four edit-operation equation systems to ReLU networks.

Each ``*_stage`` function emits one equation system into a shared
:class:`NetBuilder` and returns the stage outputs as :class:`Lin` vectors;
``build_*`` wires stages to network inputs and compiles. Vertex indices
carried in the input sequence are 1-based, 0 meaning "no operation".
Matrices are flattened row-major.

Passing a dict as ``probes`` collects named intermediates, which
:func:`build_probed` exposes as extra network outputs.
"""

from __future__ import annotations

import numpy as np

from ..relu.builder import Lin, NetBuilder
from ..relu.gadgets import between, delta, heaviside, interval_indicator, land, stable_rank
from ..relu.ir import ReluNetwork
from .config import NetworkConfig


def _grid(*sizes):
    return [a.ravel() for a in np.meshgrid(*[np.arange(s) for s in sizes], indexing="ij")]


def _pick(vec: Lin, idx) -> Lin:
    return vec.take(np.asarray(idx, dtype=np.int64))


def _repeat(scalar: Lin, k: int) -> Lin:
    return scalar.take(np.zeros(k, dtype=np.int64))


def _mirror(upper: Lin, size: int, diag: Lin | None = None) -> Lin:
    """Row-major size x size matrix from its upper triangle.

    ``upper`` follows ``np.triu_indices(size, 1)`` order when ``diag`` is
    given, else ``np.triu_indices(size)`` order (diagonal included).
    """
    i, k = _grid(size, size)
    lo, hi = np.minimum(i, k), np.maximum(i, k)
    if diag is None:
        # position of (lo, hi) among the pairs lo <= hi
        pos = lo * size - lo * (lo - 1) // 2 + (hi - lo)
        return upper.take(pos)
    pos = lo * (size - 1) - lo * (lo - 1) // 2 + (hi - lo - 1)
    pos = np.where(i == k, upper.size + i, pos)
    return Lin.concat([upper, diag]).take(pos)


def _record(probes, **items):
    if probes is not None:
        probes.update(items)


def _hold(b: NetBuilder, x: Lin, layers: int) -> Lin:
    """Nonnegative ``x`` passed through ``layers`` ReLUs (identity on values)."""
    for _ in range(layers):
        x = b.relu(x)
    return x


def dedup_first(b: NetBuilder, idx: Lin, C: int) -> Lin:
    """Zero every index that repeats an earlier one: max(x_j - C sum_{k<j} delta(x_j, x_k), 0)."""
    d = idx.size
    if d < 2:  # nothing to compare against; keep the depth of the general case
        return _hold(b, idx, 3)
    jj, kk = np.tril_indices(d, -1)
    repeats = delta(b, _pick(idx, jj), _pick(idx, kk)).group_sum(jj, d)
    return b.relu(idx - C * repeats)


def dedup_pairs(b: NetBuilder, first: Lin, second: Lin, C: int, edges_only: bool) -> Lin:
    """Zero ``first[j]`` when the pair (first[j], second[j]) already occurred at k < j.

    With ``edges_only`` the test is skipped for pairs with equal members
    (vertex insertions are never duplicates of each other).
    """
    d = first.size
    if d < 2:
        return _hold(b, first, 4 if edges_only else 3)
    jj, kk = np.tril_indices(d, -1)
    terms = [delta(b, _pick(first, jj), _pick(first, kk)), delta(b, _pick(second, jj), _pick(second, kk))]
    if edges_only:
        terms.insert(0, 1 - _pick(delta(b, first, second), jj))
    repeats = land(b, *terms).group_sum(jj, d)
    return b.relu(first - C * repeats)


# -- substitution -------------------------------------------------------------------


def substitution_stage(b: NetBuilder, U: Lin, idx: Lin, lab: Lin, n: int, C: int, probes=None) -> Lin:
    d = idx.size
    e = dedup_first(b, idx, C)
    jj, ii = _grid(d, n)
    hit = delta(b, _pick(e, jj), ii + 1)  # delta(e_j, i)
    keep = b.relu(U[:n] - C * hit.group_sum(ii, n))
    new = b.relu(_pick(lab, jj) - C * (1 - hit)).group_sum(ii, n)
    _record(probes, e=e, F=keep, G=new)
    return Lin.concat([keep + new, U[n:]])


# -- deletion -------------------------------------------------------------------------


def deletion_stage(
    b: NetBuilder, U: Lin, V: Lin, xa: Lin, xb: Lin, n: int, B: int, C: int, probes=None
) -> tuple[Lin, Lin]:
    """Delete edges, then isolated vertices; drops ``d`` slots (N -> N - d).

    Only indices 1..n can be addressed. Isolation counts every 1-entry of the
    row, so edges to vertices inserted earlier in a pipeline are seen too.
    """
    N, d = U.size, xa.size
    M = N - d

    jn, ni = _grid(d, n)
    hit_a = delta(b, _pick(xa, jn), ni + 1)  # delta(x_j, i)
    hit_b = delta(b, _pick(xb, jn), ni + 1)  # delta(x_{j+d}, i)
    same = delta(b, xa, xb)  # delta(x_j, x_{j+d})

    # edge deletion on pairs i < k (mirrored below); ReLU(a AND b - delta) is
    # fused into one unit per term
    iu, ku = np.triu_indices(n, 1)
    J, P = _grid(d, iu.size)
    I, K = iu[P], ku[P]
    fwd = _pick(hit_a, J * n + I) + _pick(hit_b, J * n + K) - 1 - _pick(same, J)
    bwd = _pick(hit_a, J * n + K) + _pick(hit_b, J * n + I) - 1 - _pick(same, J)
    both = b.relu(Lin.concat([fwd, bwd]))
    half = J.size
    t_upper = (both[:half] + both[half:]).group_sum(P, iu.size)
    t_prime_upper = b.relu(_pick(V, iu * N + ku) - t_upper)
    t = _mirror(t_upper, n, Lin.zeros(n))
    T_real = _mirror(t_prime_upper, n, _pick(V, np.arange(n) * (N + 1)))

    # T' as a full N x N matrix: real block replaced, sentinel part untouched
    ri, rk = _grid(n, n)
    mapping = np.arange(N * N, dtype=np.int64) + n * n
    mapping[ri * N + rk] = np.arange(n * n)
    T = Lin.concat([T_real, V]).take(mapping)

    degree = T_real.group_sum(ri, n)
    if N > n:
        oi, ok = _grid(n, N - n)
        degree = degree + delta(b, _pick(V, oi * N + ok + n), 1).group_sum(oi, n)
    isolated = delta(b, degree, 0)

    removable = land(b, hit_a, _pick(isolated, ni)).group_sum(jn, d)
    x_del = b.relu(xa - C * (1 - removable))  # x'_j

    drop = land(b, _pick(delta(b, x_del, xb), jn), delta(b, _pick(x_del, jn), ni + 1)).group_sum(ni, n)
    kept = Lin.concat([b.relu(1 - drop), np.ones(N - n, dtype=np.int64)])  # e'_i
    rank = b.relu(B * kept.cumsum() - C * delta(b, kept, 0))  # f'_i

    # slot i of the output takes row i + s when row i + s is the (i+1)-th kept row
    oi, sh = _grid(M, d + 1)
    src = oi + sh
    chosen = between(b, _pick(rank, src), (oi + 1) * B, (oi + 1) * B + 1)  # g'^{s+1}_i
    # sums are wrapped in one more (exact, nonnegative) ReLU so later layers
    # carry one unit per entry instead of its d + 1 summands
    U_out = b.relu(b.relu(_pick(U, src) - C * (1 - chosen)).group_sum(oi, M))

    wi, ws, wk = _grid(M, d + 1, N)
    sel = _pick(chosen, wi * (d + 1) + ws)
    W = b.relu(b.relu(_pick(T, (wi + ws) * N + wk) - C * (1 - sel)).group_sum(wi * N + wk, M * N))

    # V' is symmetric: build entries i <= k only
    iu, ku = np.triu_indices(M)
    P, cs = _grid(iu.size, d + 1)
    ci, ck = iu[P], ku[P]
    sel = _pick(chosen, ck * (d + 1) + cs)
    V_upper = b.relu(b.relu(_pick(W, ci * N + ck + cs) - C * (1 - sel)).group_sum(P, iu.size))
    V_out = _mirror(V_upper, M)

    _record(
        probes,
        t=t, T_prime=T, t_deg=degree, x_del=x_del, kept=kept, rank=rank, W=W,
        U_out=U_out, V_out=V_out,
    )
    return U_out, V_out


# -- insertion ------------------------------------------------------------------------


def insertion_stage(
    b: NetBuilder, U: Lin, V: Lin, xa: Lin, xb: Lin, lab: Lin, n: int, B: int, C: int, probes=None
) -> tuple[Lin, Lin]:
    """Insert vertices (x_j = x_{j+d}) into slots n+1.. and edges elsewhere; size preserved."""
    N, d = U.size, xa.size
    top = min(N, n + d)  # every addressable slot lies below this

    same = delta(b, xa, xb)
    n_new = same.total()  # d'
    bound = _repeat(n_new, d) + n + 1

    e = dedup_pairs(b, xa, xb, C, edges_only=True)  # e'_j
    f = land(b, 1 - delta(b, e, xb), heaviside(b, e - bound))
    x1 = b.relu(e - C * f)
    f2 = land(b, 1 - same, heaviside(b, xb - bound))
    x2 = b.relu(xb - C * f2)

    g = b.relu(lab - C * (1 - same)) + b.relu(B - C * same)
    order = stable_rank(b, g)  # g'_j
    jj, ii = _grid(d, d)
    x3 = b.relu(_pick(g, ii) - C * (1 - delta(b, _pick(order, ii) + 1, jj + 1))).group_sum(jj, d)

    U_out = Lin.concat([U[:n], x3[: top - n], U[top:]])

    # rows/columns of the d' new vertices switch from B to 0
    alive = heaviside(b, _repeat(n_new, top) + n - np.arange(1, top + 1))  # H(n + d' - i)
    pi, pk = _grid(top - n, top)
    p = land(b, _pick(alive, pi + n), 1, _pick(alive, pk))
    qi, qk = _grid(n, top - n)
    q = land(b, _pick(alive, qk + n), 1, 1)
    clear = Lin.concat([b.relu(B - C * (1 - p)), b.relu(B - C * (1 - q))])
    where = np.concatenate([(pi + n) * N + pk, qi * N + qk + n])
    R = V - clear.group_sum(where, N * N)

    # edge insertion between x1_j and x2_j
    distinct = 1 - delta(b, x1, x2)
    jt, it = _grid(d, top)
    h1 = delta(b, _pick(x1, jt), it + 1)
    h2 = delta(b, _pick(x2, jt), it + 1)
    iu, ku = np.triu_indices(top, 1)
    J, P = _grid(d, iu.size)
    I, K = iu[P], ku[P]
    gate = _pick(distinct, J)
    s = land(b, gate, _pick(h1, J * top + I), _pick(h2, J * top + K)) + land(
        b, gate, _pick(h1, J * top + K), _pick(h2, J * top + I)
    )
    s_upper = b.relu(s.group_sum(P, iu.size))  # one unit per pair, value unchanged
    # a pair requested twice (either orientation) must still give a 0/1 entry
    marked = s_upper - b.relu(s_upper - 1)
    inner = b.relu(marked + b.relu(_pick(R, iu * N + ku) - C * s_upper))
    si, sk = _grid(top, top)
    block = _mirror(inner, top, _pick(R, np.arange(top) * (N + 1)))
    mapping = np.arange(N * N, dtype=np.int64) + top * top
    mapping[si * N + sk] = np.arange(top * top)
    V_out = Lin.concat([block, R]).take(mapping)
    s_sum = _mirror(s_upper, top, Lin.zeros(top))

    _record(
        probes,
        e_prime=e, f=f, x1=x1, f2=f2, x2=x2, g=g, g_rank=order, x3=x3, d_prime=n_new,
        R=R, S=s_sum, U_out=U_out, V_out=V_out,
    )
    return U_out, V_out


# -- combined pipeline ----------------------------------------------------------------------


def convert_indices(b: NetBuilder, xs: Lin, parts: int, grid: int) -> Lin:
    """Grid decimal to index: i when x lies in ((i-1)/parts, i/parts], 0 at x = 0."""
    k = xs.size
    jj, ii = _grid(k, parts)
    step = grid // parts
    inside = interval_indicator(b, _pick(xs, jj), ii * step, (ii + 1) * step, True)
    return (inside * (ii + 1)).group_sum(jj, k)


def convert_labels(b: NetBuilder, xs: Lin, m: int, grid: int) -> Lin:
    """Grid decimal to label in 1..m; the first interval [0, 1/m] is closed."""
    k = xs.size
    jj, ii = _grid(k, m)
    step = grid // m
    x = _pick(xs, jj)
    inside = between(b, x, ii * step, (ii + 1) * step)
    open_low = (ii > 0).astype(np.int64)
    inside = inside - delta(b, x, ii * step) * open_low
    return (inside * (ii + 1)).group_sum(jj, k)


def ge_preprocess(b: NetBuilder, x: Lin, cfg: NetworkConfig, probes=None) -> Lin:
    """Conversion, repeat elimination and excess removal; returns the integer sequence X."""
    n, m, d, B, C, grid = cfg.n, cfg.m, cfg.d, cfg.B, cfg.C, cfg.grid
    blk = [x[i * d : (i + 1) * d] for i in range(7)]
    conv = [
        convert_indices(b, blk[0], n, grid),
        convert_labels(b, blk[1], m, grid),
        convert_indices(b, blk[2], n + d - 1, grid),
        convert_indices(b, blk[3], n + d - 1, grid),
        convert_labels(b, blk[4], m, grid),
        convert_indices(b, blk[5], n, grid),
        convert_indices(b, blk[6], n, grid),
    ]
    x1 = Lin.concat(conv)

    sub = dedup_first(b, conv[0], C)
    ins = dedup_pairs(b, conv[2], conv[3], C, edges_only=True)
    dele = dedup_pairs(b, conv[5], conv[6], C, edges_only=False)
    x2 = Lin.concat([sub, conv[1], ins, conv[3], conv[4], dele, conv[6]])

    # count live operations in the order substitution, insertion, deletion
    counted = Lin.concat([
        b.relu(1 - delta(b, sub, 0)),
        b.relu(1 - (delta(b, ins, 0) + delta(b, conv[3], 0))),
        b.relu(1 - (delta(b, dele, 0) + delta(b, conv[6], 0))),
    ])
    over = heaviside(b, counted.cumsum() - (d + 1))  # t'_j
    w = b.relu(Lin.concat([sub, ins, dele]) - C * over)
    w_sub, w_ins, w_del = w[:d], w[d : 2 * d], w[2 * d :]
    zero = delta(b, w_ins, 0)
    w_ins = b.relu(w_ins - C * zero) + b.relu(B - C * (1 - zero))
    X = Lin.concat([w_sub, conv[1], w_ins, conv[3], conv[4], w_del, conv[6]])
    _record(probes, x_prime=x1, x_dprime=x2, t=counted, t_prime=over, w=w, X=X)
    return X


def ge_pipeline(b: NetBuilder, U: Lin, V: Lin, X: Lin, cfg: NetworkConfig, probes=None) -> tuple[Lin, Lin]:
    n, d, B, C = cfg.n, cfg.d, cfg.B, cfg.C
    blk = [X[i * d : (i + 1) * d] for i in range(7)]
    sub_probes = {} if probes is not None else None
    ins_probes = {} if probes is not None else None
    del_probes = {} if probes is not None else None
    U1 = substitution_stage(b, U, blk[0], blk[1], n, C, sub_probes)
    U2, V2 = insertion_stage(b, U1, V, blk[2], blk[3], blk[4], n, B, C, ins_probes)
    U3, V3 = deletion_stage(b, U2, V2, blk[5], blk[6], n, B, C, del_probes)
    if probes is not None:
        probes.update({f"sub.{k}": v for k, v in sub_probes.items()})
        probes.update({f"ins.{k}": v for k, v in ins_probes.items()})
        probes.update({f"del.{k}": v for k, v in del_probes.items()})
        probes.update(U1=U1, U2=U2, V2=V2)
    return U3, V3


# -- network entry points ---------------------------------------------------------------------


def _wire(family: str, cfg: NetworkConfig, probes=None) -> tuple[NetBuilder, Lin]:
    n, m, d, B, C = cfg.n, cfg.m, cfg.d, cfg.B, cfg.C
    b = NetBuilder(f"{family.upper()}[n={n},m={m},d={d}]")
    if family == "gs":
        L = b.inputs(n, 0, B)
        x = b.inputs(2 * d, 0, B)
        out = substitution_stage(b, L, x[:d], x[d:], n, C, probes)
        return b, out
    if family == "gd":
        N = n + d
        U, V, x = b.inputs(N, 0, B), b.inputs(N * N, 0, B), b.inputs(2 * d, 0, B)
        Uo, Vo = deletion_stage(b, U, V, x[:d], x[d:], n, B, C, probes)
        return b, Lin.concat([Uo, Vo])
    if family == "gi":
        N = n + d
        U, V, x = b.inputs(N, 0, B), b.inputs(N * N, 0, B), b.inputs(3 * d, 0, B)
        Uo, Vo = insertion_stage(b, U, V, x[:d], x[d : 2 * d], x[2 * d :], n, B, C, probes)
        return b, Lin.concat([Uo, Vo])
    if family == "ge":
        N = n + 2 * d
        U, V = b.inputs(N, 0, B), b.inputs(N * N, 0, B)
        x = b.inputs(7 * d, 0, cfg.grid - 1, scale=cfg.grid)
        X = ge_preprocess(b, x, cfg, probes)
        Uo, Vo = ge_pipeline(b, U, V, X, cfg, probes)
        return b, Lin.concat([Uo, Vo])
    raise ValueError(f"unknown family {family!r}")


def build(family: str, cfg: NetworkConfig) -> ReluNetwork:
    b, out = _wire(family, cfg)
    return b.compile(out)


def build_gs(cfg: NetworkConfig) -> ReluNetwork:
    return build("gs", cfg)


def build_gd(cfg: NetworkConfig) -> ReluNetwork:
    return build("gd", cfg)


def build_gi(cfg: NetworkConfig) -> ReluNetwork:
    return build("gi", cfg)


def build_ge(cfg: NetworkConfig) -> ReluNetwork:
    return build("ge", cfg)


def build_probed(family: str, cfg: NetworkConfig) -> tuple[ReluNetwork, dict[str, slice]]:
    """Network whose outputs are the regular outputs followed by every probe."""
    probes: dict[str, Lin] = {}
    b, out = _wire(family, cfg, probes)
    names = sorted(probes)
    parts = [out] + [probes[k] for k in names]
    spans, pos = {"output": slice(0, out.size)}, out.size
    for k in names:
        spans[k] = slice(pos, pos + probes[k].size)
        pos += probes[k].size
    return b.compile(Lin.concat(parts)), spans
