"""Plain-integer simulators of the edit equation systems.

These mirror the network equations term by term with Python ints and
return a trace of named intermediates, so a network can be checked against
them value by value. Indices are 1-based inside the equations; lists are
0-based, hence the frequent ``i + 1``.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .config import NetworkConfig


def relu(v: int) -> int:
    return v if v > 0 else 0


def delta(p: int, q: int) -> int:
    return int(p == q)


def H(p: int) -> int:
    return int(p >= 0)


def land(*bits: int) -> int:
    return relu(sum(bits) - (len(bits) - 1))


def dedup_first(idx: list[int], C: int) -> list[int]:
    return [relu(x - C * sum(delta(x, idx[k]) for k in range(j))) for j, x in enumerate(idx)]


def dedup_pairs(a: list[int], b: list[int], C: int, edges_only: bool) -> list[int]:
    out = []
    for j in range(len(a)):
        rep = 0
        for k in range(j):
            bits = [delta(a[j], a[k]), delta(b[j], b[k])]
            if edges_only:
                bits.insert(0, 1 - delta(a[j], b[j]))
            rep += land(*bits)
        out.append(relu(a[j] - C * rep))
    return out


def substitution(U: list[int], idx: list[int], lab: list[int], n: int, C: int, trace=None) -> list[int]:
    d = len(idx)
    e = dedup_first(idx, C)
    F = [relu(U[i] - C * sum(delta(e[j], i + 1) for j in range(d))) for i in range(n)]
    G = [sum(relu(lab[j] - C * (1 - delta(e[j], i + 1))) for j in range(d)) for i in range(n)]
    if trace is not None:
        trace.update(e=e, F=F, G=G)
    return [F[i] + G[i] for i in range(n)] + list(U[n:])


def deletion(U, V, xa, xb, n, B, C, trace=None):
    """V is a list of rows; returns (U', V') with d fewer slots."""
    N, d = len(U), len(xa)
    M = N - d
    T = [list(row) for row in V]
    t = [[0] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            acc = 0
            for j in range(d):
                same = delta(xa[j], xb[j])
                acc += relu(land(delta(xa[j], i + 1), delta(xb[j], k + 1)) - same)
                acc += relu(land(delta(xa[j], k + 1), delta(xb[j], i + 1)) - same)
            t[i][k] = acc
            T[i][k] = relu(V[i][k] - acc)
    degree = [
        sum(T[i][k] for k in range(n)) + sum(delta(V[i][k], 1) for k in range(n, N)) for i in range(n)
    ]
    x_del = []
    for j in range(d):
        ok = sum(land(delta(xa[j], i + 1), delta(degree[i], 0)) for i in range(n))
        x_del.append(relu(xa[j] - C * (1 - ok)))
    kept = [
        relu(1 - sum(land(delta(x_del[j], xb[j]), delta(x_del[j], i + 1)) for j in range(d)))
        for i in range(n)
    ] + [1] * (N - n)
    rank, run = [], 0
    for i in range(N):
        run += kept[i]
        rank.append(relu(B * run - C * delta(kept[i], 0)))

    def chosen(i, s):
        r = rank[i + s]
        return land(H(r - (i + 1) * B), H((i + 1) * B + 1 - r))

    U_out = [sum(relu(U[i + s] - C * (1 - chosen(i, s))) for s in range(d + 1)) for i in range(M)]
    W = [
        [sum(relu(T[i + s][k] - C * (1 - chosen(i, s))) for s in range(d + 1)) for k in range(N)]
        for i in range(M)
    ]
    V_out = [
        [sum(relu(W[i][k + s] - C * (1 - chosen(k, s))) for s in range(d + 1)) for k in range(M)]
        for i in range(M)
    ]
    if trace is not None:
        trace.update(
            t=t, T_prime=T, t_deg=degree, x_del=x_del, kept=kept, rank=rank, W=W,
            U_out=U_out, V_out=V_out,
        )
    return U_out, V_out


def insertion(U, V, xa, xb, lab, n, B, C, trace=None):
    N, d = len(U), len(xa)
    top = min(N, n + d)
    same = [delta(xa[j], xb[j]) for j in range(d)]
    d_new = sum(same)
    e = dedup_pairs(xa, xb, C, edges_only=True)
    f = [land(1 - delta(e[j], xb[j]), H(e[j] - n - d_new - 1)) for j in range(d)]
    x1 = [relu(e[j] - C * f[j]) for j in range(d)]
    f2 = [land(1 - same[j], H(xb[j] - n - d_new - 1)) for j in range(d)]
    x2 = [relu(xb[j] - C * f2[j]) for j in range(d)]
    g = [relu(lab[j] - C * (1 - same[j])) + relu(B - C * same[j]) for j in range(d)]
    order = [
        sum(H(g[j] - g[k]) for k in range(d)) - sum(delta(g[j], g[k]) for k in range(j, d))
        for j in range(d)
    ]
    x3 = [sum(relu(g[i] - C * (1 - delta(j + 1, order[i] + 1))) for i in range(d)) for j in range(d)]
    U_out = list(U[:n]) + x3[: top - n] + list(U[top:])

    alive = [H(n + d_new - (i + 1)) for i in range(top)]
    R = [list(row) for row in V]
    for i in range(n, top):
        for k in range(top):
            R[i][k] -= relu(B - C * (1 - land(alive[i], 1, alive[k])))
    for i in range(n):
        for k in range(n, top):
            R[i][k] -= relu(B - C * (1 - land(alive[k], 1, 1)))

    S = [[0] * top for _ in range(top)]
    for j in range(d):
        gate = 1 - delta(x1[j], x2[j])
        for i in range(top):
            for k in range(top):
                S[i][k] += land(gate, delta(x1[j], i + 1), delta(x2[j], k + 1))
                S[i][k] += land(gate, delta(x1[j], k + 1), delta(x2[j], i + 1))
    V_out = [list(row) for row in R]
    for i in range(top):
        for k in range(top):
            s = S[i][k]
            V_out[i][k] = (s - relu(s - 1)) + relu(R[i][k] - C * s)
    if trace is not None:
        trace.update(
            e_prime=e, f=f, x1=x1, f2=f2, x2=x2, g=g, g_rank=order, x3=x3, d_prime=d_new,
            R=R, S=S, U_out=U_out, V_out=V_out,
        )
    return U_out, V_out


def decimal_to_index(x: Fraction, parts: int) -> int:
    """i with x in ((i-1)/parts, i/parts]; 0 for x = 0."""
    for i in range(1, parts + 1):
        if Fraction(i - 1, parts) < x <= Fraction(i, parts):
            return i
    return 0


def decimal_to_label(x: Fraction, m: int) -> int:
    if 0 <= x <= Fraction(1, m):
        return 1
    return decimal_to_index(x, m)


def ge_preprocess(x, cfg: NetworkConfig, trace=None) -> list[int]:
    n, m, d, B, C = cfg.n, cfg.m, cfg.d, cfg.B, cfg.C
    x = [Fraction(v) for v in x]
    blk = [x[i * d : (i + 1) * d] for i in range(7)]
    conv = [
        [decimal_to_index(v, n) for v in blk[0]],
        [decimal_to_label(v, m) for v in blk[1]],
        [decimal_to_index(v, n + d - 1) for v in blk[2]],
        [decimal_to_index(v, n + d - 1) for v in blk[3]],
        [decimal_to_label(v, m) for v in blk[4]],
        [decimal_to_index(v, n) for v in blk[5]],
        [decimal_to_index(v, n) for v in blk[6]],
    ]
    sub = dedup_first(conv[0], C)
    ins = dedup_pairs(conv[2], conv[3], C, edges_only=True)
    dele = dedup_pairs(conv[5], conv[6], C, edges_only=False)
    counted = (
        [relu(1 - delta(v, 0)) for v in sub]
        + [relu(1 - (delta(a, 0) + delta(b, 0))) for a, b in zip(ins, conv[3])]
        + [relu(1 - (delta(a, 0) + delta(b, 0))) for a, b in zip(dele, conv[6])]
    )
    over = list(np.cumsum(counted) > d) if counted else []
    over = [int(v) for v in over]
    w = [relu(v - C * o) for v, o in zip(sub + ins + dele, over)]
    w_ins = [relu(v - C * delta(v, 0)) + relu(B - C * (1 - delta(v, 0))) for v in w[d : 2 * d]]
    X = w[:d] + conv[1] + w_ins + conv[3] + conv[4] + w[2 * d :] + conv[6]
    if trace is not None:
        x1 = [v for part in conv for v in part]
        x2 = sub + conv[1] + ins + conv[3] + conv[4] + dele + conv[6]
        trace.update(x_prime=x1, x_dprime=x2, t=counted, t_prime=over, w=w, X=X)
    return X


def _unpack(U, V):
    U = [int(u) for u in U]
    V = np.asarray(V, dtype=np.int64).reshape(len(U), len(U)).tolist()
    return U, V


def reference_gs(cfg: NetworkConfig, L, x, trace=None) -> list[int]:
    d = cfg.d
    return substitution([int(v) for v in L], list(x[:d]), list(x[d:]), cfg.n, cfg.C, trace)


def reference_gd(cfg: NetworkConfig, U, V, x, trace=None):
    U, V = _unpack(U, V)
    d = cfg.d
    return deletion(U, V, list(x[:d]), list(x[d:]), cfg.n, cfg.B, cfg.C, trace)


def reference_gi(cfg: NetworkConfig, U, V, x, trace=None):
    U, V = _unpack(U, V)
    d = cfg.d
    return insertion(U, V, list(x[:d]), list(x[d : 2 * d]), list(x[2 * d :]), cfg.n, cfg.B, cfg.C, trace)


def reference_ge(cfg: NetworkConfig, U, V, x, trace=None):
    U, V = _unpack(U, V)
    n, d, B, C = cfg.n, cfg.d, cfg.B, cfg.C
    X = ge_preprocess(x, cfg, trace)
    blk = [X[i * d : (i + 1) * d] for i in range(7)]
    sub, ins, dele = ({}, {}, {}) if trace is not None else (None, None, None)
    U1 = substitution(U, blk[0], blk[1], n, C, sub)
    U2, V2 = insertion(U1, V, blk[2], blk[3], blk[4], n, B, C, ins)
    U3, V3 = deletion(U2, V2, blk[5], blk[6], n, B, C, dele)
    if trace is not None:
        trace.update({f"sub.{k}": v for k, v in sub.items()})
        trace.update({f"ins.{k}": v for k, v in ins.items()})
        trace.update({f"del.{k}": v for k, v in dele.items()})
        trace.update(U1=U1, U2=U2, V2=V2)
    return U3, V3


REFERENCES = {"gs": reference_gs, "gd": reference_gd, "gi": reference_gi, "ge": reference_ge}
