"""Piecewise-linear gadgets, exact on integer inputs.

The vectorized helpers (``delta``, ``heaviside`` ...) act elementwise on
:class:`Lin` vectors inside a :class:`NetBuilder`; the ``gadget_*`` functions
wrap them as standalone networks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .builder import Lin, NetBuilder
from .ir import ReluNetwork


def _lin(x, size: int) -> Lin:
    if isinstance(x, Lin):
        return x
    return Lin.const(np.broadcast_to(np.asarray(x, dtype=np.int64), (size,)))


def _size(*xs) -> int:
    for x in xs:
        if isinstance(x, Lin):
            return x.size
    return int(np.size(xs[0]))


def relu(b: NetBuilder, x: Lin) -> Lin:
    return b.relu(x)


def maximum(b: NetBuilder, p, q) -> Lin:
    """max(p, q) = p + ReLU(q - p)."""
    k = _size(p, q)
    p, q = _lin(p, k), _lin(q, k)
    return p + b.relu(q - p)


def delta(b: NetBuilder, p, q) -> Lin:
    """delta(p, q) = ReLU(1 - ReLU(p - q) - ReLU(q - p)); exact for integers."""
    k = _size(p, q)
    diff = _lin(p, k) - _lin(q, k)
    both = b.relu(Lin.concat([diff, -diff]))
    return b.relu(1 - both[:k] - both[k:])


def heaviside(b: NetBuilder, p) -> Lin:
    """H(p) = ReLU(p + 1) - ReLU(p); 1 for integer p >= 0, else 0."""
    k = _size(p)
    p = _lin(p, k)
    r = b.relu(Lin.concat([p + 1, p]))
    return r[:k] - r[k:]


def land(b: NetBuilder, *terms) -> Lin:
    """Logical AND of binary vectors: ReLU(sum - (count - 1))."""
    k = _size(*terms)
    total = Lin.zeros(k)
    for t in terms:
        total = total + _lin(t, k)
    return b.relu(total - (len(terms) - 1))


def at_least(b: NetBuilder, p, theta) -> Lin:
    """Threshold [p >= theta] on integers."""
    k = _size(p, theta)
    return heaviside(b, _lin(p, k) - _lin(theta, k))


def between(b: NetBuilder, p, lo, hi) -> Lin:
    """Closed-interval indicator [lo <= p <= hi] on integers."""
    k = _size(p, lo, hi)
    p = _lin(p, k)
    return land(b, heaviside(b, p - _lin(lo, k)), heaviside(b, _lin(hi, k) - p))


def stable_rank(b: NetBuilder, g: Lin) -> Lin:
    """Ascending stable rank of each entry: sum_k H(g_j - g_k) - sum_{k>=j} delta(g_j, g_k)."""
    d = g.size
    jj, kk = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    jj, kk = jj.ravel(), kk.ravel()
    below = heaviside(b, g.take(jj) - g.take(kk)).group_sum(jj, d)
    upper = jj <= kk
    ties = delta(b, g.take(jj[upper]), g.take(kk[upper])).group_sum(jj[upper], d)
    return below - ties


# -- standalone gadget networks -------------------------------------------------------


def _net(name: str, arity: int, lo, hi, body, scale=1) -> ReluNetwork:
    b = NetBuilder(name)
    x = b.inputs(arity, lo=lo, hi=hi, scale=scale)
    return b.compile(body(b, x))


_SMALL = 2**40  # declared input range of the standalone integer gadgets


def gadget_max2() -> ReluNetwork:
    return _net("max2", 2, -_SMALL, _SMALL, lambda b, x: maximum(b, x[0], x[1]))


def gadget_relu_clamp() -> ReluNetwork:
    return _net("relu", 1, -_SMALL, _SMALL, lambda b, x: b.relu(x))


def gadget_delta() -> ReluNetwork:
    return _net("delta", 2, -_SMALL, _SMALL, lambda b, x: delta(b, x[0], x[1]))


def gadget_heaviside() -> ReluNetwork:
    return _net("heaviside", 1, -_SMALL, _SMALL, lambda b, x: heaviside(b, x))


def gadget_and() -> ReluNetwork:
    return _net("and", 2, 0, 1, lambda b, x: land(b, x[0], x[1]))


def gadget_sort_rank(d: int) -> ReluNetwork:
    return _net(f"sort_rank[{d}]", d, -_SMALL, _SMALL, lambda b, x: stable_rank(b, x))


def _on_grid(value: Fraction, denominator: int, what: str) -> int:
    scaled = Fraction(value) * denominator
    if scaled.denominator != 1:
        raise ValueError(f"{what} = {value} is not a multiple of 1/{denominator}")
    return scaled.numerator


def interval_indicator(b: NetBuilder, x: Lin, lo: int, hi: int, half_open_low: bool) -> Lin:
    """[lo <= x <= hi] minus delta(x, lo) when the low end is open; x, lo, hi scaled integers."""
    inside = between(b, x, lo, hi)
    if half_open_low:
        inside = inside - delta(b, x, lo)
    return inside


def gadget_interval(lo, hi, half_open_low: bool = True, delta_grid=Fraction(1, 1)) -> ReluNetwork:
    """Indicator of a grid decimal in (lo, hi] (or [lo, hi]); input scaled by 1/delta_grid."""
    delta_grid = Fraction(delta_grid)
    if delta_grid <= 0 or delta_grid.numerator != 1:
        raise ValueError(f"grid spacing must be 1/k for a positive integer k, got {delta_grid}")
    den = delta_grid.denominator
    a = _on_grid(lo, den, "lower endpoint")
    c = _on_grid(hi, den, "upper endpoint")
    span = max(abs(a), abs(c)) + den
    return _net(
        f"interval[{lo},{hi}]",
        1,
        -span,
        span,
        lambda b, x: interval_indicator(b, x, a, c, half_open_low),
        scale=den,
    )


@dataclass(frozen=True)
class GadgetSpec:
    """A named gadget plus its defining function, for exhaustive checks."""

    kind: str
    params: dict = field(default_factory=dict)

    def build(self) -> ReluNetwork:
        return _BUILDERS[self.kind](**self.params)

    def truth(self, *args):
        return _TRUTH[self.kind](self.params, *args)


def _interval_truth(params, x):
    x = Fraction(x)
    lo, hi = Fraction(params["lo"]), Fraction(params["hi"])
    if params.get("half_open_low", True):
        return int(lo < x <= hi)
    return int(lo <= x <= hi)


def _rank_truth(params, *g):
    return tuple(
        sum(1 for k in range(len(g)) if g[k] < g[j]) + sum(1 for k in range(j) if g[k] == g[j])
        for j in range(len(g))
    )


_BUILDERS = {
    "max2": gadget_max2,
    "relu_clamp": gadget_relu_clamp,
    "delta_int": gadget_delta,
    "heaviside_int": gadget_heaviside,
    "and": gadget_and,
    "interval": lambda lo, hi, half_open_low=True, delta_grid=Fraction(1): gadget_interval(
        lo, hi, half_open_low, delta_grid
    ),
    "sort_rank": gadget_sort_rank,
}

_TRUTH = {
    "max2": lambda p, a, b: max(a, b),
    "relu_clamp": lambda p, a: max(a, 0),
    "delta_int": lambda p, a, b: int(a == b),
    "heaviside_int": lambda p, a: int(a >= 0),
    "and": lambda p, a, b: int(bool(a) and bool(b)),
    "interval": _interval_truth,
    "sort_rank": _rank_truth,
}
