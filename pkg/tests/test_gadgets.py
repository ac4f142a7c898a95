import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gedgen.relu import Lin, NetBuilder, evaluate, evaluate_batch
from gedgen.relu.gadgets import (
    GadgetSpec,
    at_least,
    between,
    gadget_and,
    gadget_delta,
    gadget_heaviside,
    gadget_interval,
    gadget_max2,
    gadget_relu_clamp,
    gadget_sort_rank,
)

SMALL = range(-12, 13)


@pytest.mark.parametrize("kind", ["max2", "delta_int"])
def test_binary_gadgets_exhaustive(kind):
    spec = GadgetSpec(kind)
    net = spec.build()
    pairs = list(itertools.product(SMALL, SMALL))
    out = evaluate_batch(net, pairs)
    assert [int(v) for v in out[:, 0]] == [spec.truth(a, b) for a, b in pairs]


@pytest.mark.parametrize("kind", ["relu_clamp", "heaviside_int"])
def test_unary_gadgets_exhaustive(kind):
    spec = GadgetSpec(kind)
    out = evaluate_batch(spec.build(), [[v] for v in SMALL])
    assert [int(v) for v in out[:, 0]] == [spec.truth(v) for v in SMALL]


def test_and_on_bits():
    net = gadget_and()
    for a, b in itertools.product((0, 1), repeat=2):
        assert evaluate(net, [a, b]) == [a & b]


@given(st.integers(-(2**40), 2**40), st.integers(-(2**40), 2**40))
def test_max_and_delta_on_large_integers(a, b):
    assert evaluate(gadget_max2(), [a, b]) == [max(a, b)]
    assert evaluate(gadget_delta(), [a, b]) == [int(a == b)]


@given(st.integers(-(2**40), 2**40))
def test_relu_and_heaviside_on_large_integers(a):
    assert evaluate(gadget_relu_clamp(), [a]) == [max(a, 0)]
    assert evaluate(gadget_heaviside(), [a]) == [int(a >= 0)]


@pytest.mark.parametrize("half_open", [True, False])
@pytest.mark.parametrize("lo,hi", [(Fraction(0), Fraction(1, 3)), (Fraction(1, 3), Fraction(2, 3)), (Fraction(1, 6), Fraction(5, 6))])
def test_interval_exhaustive_on_grid(lo, hi, half_open):
    spec = GadgetSpec("interval", {"lo": lo, "hi": hi, "half_open_low": half_open, "delta_grid": Fraction(1, 6)})
    net = spec.build()
    for k in range(-6, 13):
        x = Fraction(k, 6)
        assert evaluate(net, [x]) == [spec.truth(x)], x


def test_interval_rejects_off_grid_endpoint():
    with pytest.raises(ValueError):
        gadget_interval(Fraction(1, 4), Fraction(1, 2), delta_grid=Fraction(1, 6))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_sort_rank_exhaustive(d):
    spec = GadgetSpec("sort_rank", {"d": d})
    net = spec.build()
    rows = list(itertools.product(range(4), repeat=d))
    out = evaluate_batch(net, rows)
    for row, got in zip(rows, out):
        assert tuple(int(v) for v in got) == spec.truth(*row)
        assert sorted(got.tolist()) == list(range(d))  # a permutation


def test_threshold_and_between():
    b = NetBuilder("t")
    x = b.inputs(1, lo=-10, hi=10)
    net = b.compile(Lin.concat([at_least(b, x, 3), between(b, x, -2, 4)]))
    for v in range(-10, 11):
        assert evaluate(net, [v]) == [int(v >= 3), int(-2 <= v <= 4)]
