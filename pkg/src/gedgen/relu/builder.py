"""Symbolic construction of ReLU networks.

Networks are described as vectors of affine forms (:class:`Lin`) over
*nodes*. A node is either a network input or the output of a ReLU unit.
Affine arithmetic is free; only :meth:`NetBuilder.relu` creates units. The
builder then lowers the node DAG to a layered network: every unit is placed
at the latest layer its consumers allow, and values needed further down are
carried by identity pass-through units.

All bookkeeping is vectorized with numpy so that networks with tens of
millions of units can be built without per-unit Python objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .ir import Layer, ReluNetwork, propagate_bounds

_I64 = np.int64


def _as_i64(a) -> np.ndarray:
    return np.asarray(a, dtype=_I64)


class Lin:
    """A vector of affine forms ``bias[r] + sum(vals * node[cols])`` in COO form."""

    __slots__ = ("size", "rows", "cols", "vals", "bias")

    def __init__(self, size: int, rows, cols, vals, bias):
        self.size = int(size)
        self.rows = _as_i64(rows)
        self.cols = _as_i64(cols)
        self.vals = _as_i64(vals)
        self.bias = _as_i64(bias)
        if self.bias.shape != (self.size,):
            self.bias = np.broadcast_to(self.bias, (self.size,)).copy()

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, values) -> "Lin":
        values = np.atleast_1d(_as_i64(values))
        empty = np.empty(0, dtype=_I64)
        return cls(values.size, empty, empty, empty, values)

    @classmethod
    def zeros(cls, size: int) -> "Lin":
        return cls.const(np.zeros(size, dtype=_I64))

    @classmethod
    def var(cls, ids) -> "Lin":
        ids = _as_i64(ids)
        k = ids.size
        return cls(k, np.arange(k, dtype=_I64), ids, np.ones(k, dtype=_I64), np.zeros(k, dtype=_I64))

    @staticmethod
    def concat(parts: Sequence["Lin | int"]) -> "Lin":
        parts = [p if isinstance(p, Lin) else Lin.const(p) for p in parts]
        offsets = np.cumsum([0] + [p.size for p in parts])
        return Lin(
            int(offsets[-1]),
            np.concatenate([p.rows + o for p, o in zip(parts, offsets)]) if parts else [],
            np.concatenate([p.cols for p in parts]) if parts else [],
            np.concatenate([p.vals for p in parts]) if parts else [],
            np.concatenate([p.bias for p in parts]) if parts else [],
        )

    # -- queries -------------------------------------------------------------
    def __len__(self) -> int:
        return self.size

    def is_const(self) -> bool:
        return self.vals.size == 0 or not np.any(self.vals)

    def __repr__(self) -> str:
        return f"Lin(size={self.size}, terms={self.vals.size})"

    # -- arithmetic ------------------------------------------------------------
    def _coerce(self, other) -> "Lin":
        if isinstance(other, Lin):
            if other.size != self.size:
                raise ValueError(f"size mismatch: {self.size} vs {other.size}")
            return other
        return Lin.const(np.broadcast_to(_as_i64(other), (self.size,)))

    def __add__(self, other) -> "Lin":
        if not isinstance(other, Lin):
            return Lin(self.size, self.rows, self.cols, self.vals, self.bias + _as_i64(other))
        other = self._coerce(other)
        return Lin(
            self.size,
            np.concatenate([self.rows, other.rows]),
            np.concatenate([self.cols, other.cols]),
            np.concatenate([self.vals, other.vals]),
            self.bias + other.bias,
        )

    __radd__ = __add__

    def __neg__(self) -> "Lin":
        return Lin(self.size, self.rows, self.cols, -self.vals, -self.bias)

    def __sub__(self, other) -> "Lin":
        return self + (-other)

    def __rsub__(self, other) -> "Lin":
        return (-self) + other

    def __mul__(self, c) -> "Lin":
        c = _as_i64(c)
        if c.ndim == 0:
            return Lin(self.size, self.rows, self.cols, self.vals * c, self.bias * c)
        c = np.broadcast_to(c, (self.size,))
        return Lin(self.size, self.rows, self.cols, self.vals * c[self.rows], self.bias * c)

    __rmul__ = __mul__

    # -- reshaping -----------------------------------------------------------------
    def take(self, idx) -> "Lin":
        """Rows ``idx`` (repeats allowed), as a new vector."""
        idx = _as_i64(idx).ravel()
        order = np.argsort(self.rows, kind="stable")
        counts = np.bincount(self.rows, minlength=self.size)
        starts = np.concatenate([[0], np.cumsum(counts)[:-1]]).astype(_I64)
        sel = counts[idx]
        total = int(sel.sum())
        new_rows = np.repeat(np.arange(idx.size, dtype=_I64), sel)
        first = np.repeat(np.cumsum(sel) - sel, sel)
        offsets = np.arange(total, dtype=_I64) - first
        src = order[np.repeat(starts[idx], sel) + offsets]
        return Lin(idx.size, new_rows, self.cols[src], self.vals[src], self.bias[idx])

    def __getitem__(self, key) -> "Lin":
        if isinstance(key, slice):
            return self.take(np.arange(self.size)[key])
        if isinstance(key, (int, np.integer)):
            return self.take([key])
        return self.take(key)

    def group_sum(self, groups, n_groups: int) -> "Lin":
        """Sum rows that share a group id; row ``r`` goes to ``groups[r]``."""
        groups = _as_i64(groups)
        bias = np.zeros(n_groups, dtype=_I64)
        np.add.at(bias, groups, self.bias)
        return Lin(n_groups, groups[self.rows], self.cols, self.vals, bias)

    def total(self) -> "Lin":
        return self.group_sum(np.zeros(self.size, dtype=_I64), 1)

    def cumsum(self) -> "Lin":
        """Prefix sums: row i is the sum of rows 0..i (quadratic in entries, for short vectors)."""
        i, k = np.tril_indices(self.size)
        return self.take(k).group_sum(i, self.size)

    def canonical(self) -> "Lin":
        """Merge duplicate (row, node) terms and drop zero weights."""
        if self.vals.size == 0:
            return self
        key_rows, key_cols = self.rows, self.cols
        order = np.lexsort((key_cols, key_rows))
        r, c, v = key_rows[order], key_cols[order], self.vals[order]
        new = np.ones(r.size, dtype=bool)
        new[1:] = (r[1:] != r[:-1]) | (c[1:] != c[:-1])
        starts = np.flatnonzero(new)
        sums = np.add.reduceat(v, starts)
        keep = sums != 0
        return Lin(self.size, r[starts][keep], c[starts][keep], sums[keep], self.bias)


@dataclass
class _Block:
    start: int
    size: int
    rows: np.ndarray  # local row of each term (int32)
    cols: np.ndarray  # source node id of each term (int32)
    vals: np.ndarray


@dataclass
class _InputBlock:
    start: int
    size: int
    lo: np.ndarray
    hi: np.ndarray
    scale: np.ndarray


class NetBuilder:
    """Accumulates ReLU units and lowers them into a :class:`ReluNetwork`."""

    def __init__(self, name: str = "net"):
        self.name = name
        self._n = 0
        self._depth = np.zeros(1024, dtype=np.int32)
        self._bias = np.zeros(1024, dtype=_I64)
        self._blocks: list[_Block] = []
        self._inputs: list[_InputBlock] = []

    @property
    def node_count(self) -> int:
        return self._n

    def _grow(self, k: int) -> int:
        start = self._n
        need = start + k
        if need > self._depth.size:
            cap = max(need, 2 * self._depth.size)
            grown = np.zeros(cap, dtype=np.int32)
            grown[:start] = self._depth[:start]
            self._depth = grown
            grown_bias = np.zeros(cap, dtype=_I64)
            grown_bias[:start] = self._bias[:start]
            self._bias = grown_bias
        self._n = need
        return start

    def inputs(self, size: int, lo=0, hi=None, scale=1) -> Lin:
        """Declare ``size`` network inputs.

        ``lo``/``hi`` bound the *scaled* integer value (input times ``scale``)
        and feed the static overflow analysis; ``hi=None`` means unbounded.
        """
        if self._blocks:
            raise RuntimeError("inputs must be declared before any unit")
        start = self._grow(size)
        hi = np.inf if hi is None else hi
        self._inputs.append(
            _InputBlock(
                start,
                size,
                np.broadcast_to(np.asarray(lo, dtype=float), (size,)).copy(),
                np.broadcast_to(np.asarray(hi, dtype=float), (size,)).copy(),
                np.broadcast_to(_as_i64(scale), (size,)).copy(),
            )
        )
        return Lin.var(np.arange(start, start + size))

    def relu(self, x: Lin) -> Lin:
        """Materialize ``ReLU(x)``; rows without terms are folded to constants."""
        x = x.canonical()
        has_terms = np.zeros(x.size, dtype=bool)
        has_terms[x.rows] = True
        live_rows = np.flatnonzero(has_terms)
        k = live_rows.size
        result_bias = np.where(has_terms, 0, np.maximum(x.bias, 0))
        if k == 0:
            return Lin.const(result_bias)
        local = np.full(x.size, -1, dtype=_I64)
        local[live_rows] = np.arange(k)
        start = self._grow(k)
        rows = local[x.rows]
        depth = np.zeros(k, dtype=np.int32)
        np.maximum.at(depth, rows, self._depth[x.cols])
        self._depth[start : start + k] = depth + 1
        self._bias[start : start + k] = x.bias[live_rows]
        self._blocks.append(_Block(start, k, rows.astype(np.int32), x.cols.astype(np.int32), x.vals))
        ids = np.arange(start, start + k, dtype=_I64)
        out = Lin.var(ids)
        return Lin(x.size, live_rows[out.rows], out.cols, out.vals, result_bias)

    # -- lowering -------------------------------------------------------------------
    def compile(self, outputs: Lin, check_bounds: bool = True) -> ReluNetwork:
        outputs = outputs.canonical()
        n = self._n
        depth = self._depth[:n]

        live = np.zeros(n, dtype=bool)
        live[outputs.cols] = True
        for blk in reversed(self._blocks):
            sel = live[blk.start + blk.rows]
            live[blk.cols[sel]] = True
        for ib in self._inputs:
            live[ib.start : ib.start + ib.size] = True

        unit_depth = depth[live]
        D = int(unit_depth.max()) if unit_depth.size else 0

        # Schedule every unit as late as its consumers allow. Units usually
        # fan out from few inputs, so carrying the inputs is cheaper than
        # carrying the units.
        late = np.full(n, D, dtype=np.int32)
        for blk in reversed(self._blocks):
            consumer = late[blk.start + blk.rows]
            alive = live[blk.start + blk.rows]
            np.minimum.at(late, blk.cols[alive], consumer[alive] - 1)
        is_input = np.zeros(n, dtype=bool)
        for ib in self._inputs:
            is_input[ib.start : ib.start + ib.size] = True
        depth = np.where(is_input, 0, late).astype(np.int32)

        need = np.where(live, depth, -1).astype(np.int32)
        np.maximum.at(need, outputs.cols, D)
        for blk in self._blocks:
            consumer = depth[blk.start + blk.rows]
            alive = live[blk.start + blk.rows]
            np.maximum.at(need, blk.cols[alive], consumer[alive] - 1)

        # sort each block's terms by consumer depth so layers can slice them
        ranges = []
        for blk in self._blocks:
            cdep = depth[blk.start + blk.rows]
            order = np.argsort(cdep, kind="stable")
            blk.rows, blk.cols, blk.vals = blk.rows[order], blk.cols[order], blk.vals[order]
            cdep = cdep[order]
            ranges.append(cdep)

        input_ids = np.concatenate(
            [np.arange(ib.start, ib.start + ib.size) for ib in self._inputs]
        ) if self._inputs else np.empty(0, dtype=_I64)
        prev_pos = np.full(n, -1, dtype=np.int64)
        prev_pos[input_ids] = np.arange(input_ids.size)
        prev_width = input_ids.size

        layers: list[Layer] = []
        node_ids = np.arange(n)
        for level in range(1, D + 1):
            computed = node_ids[live & (depth == level)]
            carried = node_ids[live & (depth < level) & (need >= level)]
            width = computed.size + carried.size
            cur_pos = np.full(n, -1, dtype=np.int64)
            cur_pos[computed] = np.arange(computed.size)
            cur_pos[carried] = computed.size + np.arange(carried.size)

            r_parts, c_parts, v_parts = [], [], []
            bias = np.zeros(width, dtype=_I64)
            bias[: computed.size] = self._bias[computed]
            for blk, cdep in zip(self._blocks, ranges):
                lo, hi = np.searchsorted(cdep, [level, level + 1])
                if hi > lo:
                    consumers = blk.start + blk.rows[lo:hi]
                    keep = live[consumers]
                    r_parts.append(cur_pos[consumers[keep]])
                    c_parts.append(prev_pos[blk.cols[lo:hi][keep]])
                    v_parts.append(blk.vals[lo:hi][keep])
            r_parts.append(cur_pos[carried])
            c_parts.append(prev_pos[carried])
            v_parts.append(np.ones(carried.size, dtype=_I64))

            rows = np.concatenate(r_parts)
            cols = np.concatenate(c_parts)
            if rows.size and (rows.min() < 0 or cols.min() < 0):
                raise AssertionError("lowering produced a dangling reference")
            weight = sp.csr_matrix(
                (np.concatenate(v_parts), (rows, cols)), shape=(width, prev_width), dtype=_I64
            )
            mask = np.zeros(width, dtype=bool)
            mask[: computed.size] = True
            layers.append(Layer(weight, bias, mask))
            prev_pos, prev_width = cur_pos, width

        out_weight = sp.csr_matrix(
            (outputs.vals, (outputs.rows, prev_pos[outputs.cols])),
            shape=(outputs.size, prev_width),
            dtype=_I64,
        )
        layers.append(Layer(out_weight, outputs.bias.copy(), np.zeros(outputs.size, dtype=bool)))

        lo = np.concatenate([ib.lo for ib in self._inputs]) if self._inputs else np.empty(0)
        hi = np.concatenate([ib.hi for ib in self._inputs]) if self._inputs else np.empty(0)
        scale = np.concatenate([ib.scale for ib in self._inputs]) if self._inputs else np.empty(0, dtype=_I64)
        net = ReluNetwork(
            layers=tuple(layers),
            input_scale=scale,
            input_lo=lo,
            input_hi=hi,
            name=self.name,
        )
        if check_bounds and np.all(np.isfinite(hi)) and np.all(np.isfinite(lo)):
            propagate_bounds(net)  # raises if the int64 working range could be exceeded
        return net


def stack(parts: Iterable[Lin]) -> Lin:
    return Lin.concat(list(parts))
