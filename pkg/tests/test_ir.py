import json

import numpy as np
import pytest
import scipy.sparse as sp

from gedgen.relu import (
    ContractViolation,
    Layer,
    Lin,
    NetBuilder,
    NetworkOverflow,
    ReluNetwork,
    compose,
    concat,
    dump,
    evaluate,
    evaluate_batch,
    identity_network,
)
from gedgen.relu.gadgets import delta, gadget_delta, gadget_max2


def _dense_net(w, b, relu, lo=-100, hi=100):
    w = np.asarray(w, dtype=np.int64)
    layer = Layer(sp.csr_matrix(w), np.asarray(b, dtype=np.int64), np.asarray(relu, dtype=bool))
    k = w.shape[1]
    return ReluNetwork((layer,), np.ones(k, dtype=np.int64), np.full(k, lo), np.full(k, hi))


def test_single_layer_matches_numpy():
    net = _dense_net([[1, -2], [3, 1]], [1, -5], [True, False])
    for x in [(0, 0), (3, 1), (-4, 7)]:
        z = np.array([[1, -2], [3, 1]]) @ np.array(x) + np.array([1, -5])
        assert evaluate(net, x) == [max(z[0], 0), z[1]]


def test_builder_folds_constants_and_tracks_depth():
    b = NetBuilder()
    x = b.inputs(2, lo=-5, hi=5)
    y = b.relu(Lin.concat([x[:1] - x[1:], Lin.const([-3])]))
    net = b.compile(y)
    assert net.depth == 1
    assert evaluate(net, [4, 1]) == [3, 0]


def test_late_scheduling_keeps_passthrough_small():
    b = NetBuilder()
    x = b.inputs(1, lo=0, hi=10)
    deep = x
    for _ in range(5):
        deep = b.relu(deep)
    late = b.relu(Lin.concat([x + 1, x + 2, x + 3]))  # consumed only by the output
    net = b.compile(Lin.concat([deep, late]))
    assert net.depth == 5
    assert evaluate(net, [3]) == [3, 4, 5, 6]
    # one carried input beats three carried units: widths 2,2,2,2,4 then the output
    assert [layer.width for layer in net.layers[:5]] == [2, 2, 2, 2, 4]


def test_compose_and_concat():
    m = gadget_max2()
    pair = concat([gadget_delta(), m])
    assert evaluate(pair, [2, 2, -1, 4]) == [1, 4]
    twice = compose(identity_network(2), m)
    assert evaluate(twice, [7, -3]) == [7]
    with pytest.raises(ValueError):
        compose(m, m)


def test_contract_and_overflow_guards():
    b = NetBuilder()
    x = b.inputs(1, lo=0, hi=3, scale=4)
    net = b.compile(b.relu(x))
    from fractions import Fraction

    assert evaluate(net, [Fraction(3, 4)]) == [3]
    with pytest.raises(ContractViolation):
        evaluate(net, [Fraction(1, 3)])
    b = NetBuilder()
    x = b.inputs(1, lo=0, hi=2**40)
    with pytest.raises(NetworkOverflow):
        b.compile(b.relu(x * 2**30))


def test_batch_equals_single():
    net = gadget_max2()
    rows = np.array([[1, 2], [5, -5], [0, 0]])
    assert evaluate_batch(net, rows)[:, 0].tolist() == [evaluate(net, r)[0] for r in rows.tolist()]


def test_dump_is_json():
    data = json.loads(dump(gadget_delta()))
    assert data["layers"] and all("bias" in layer for layer in data["layers"])


def test_delta_depth_is_two():
    b = NetBuilder()
    x = b.inputs(2, lo=-9, hi=9)
    assert b.compile(delta(b, x[:1], x[1:])).depth == 2
