"""Layered ReLU networks with exact int64 evaluation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.sparse as sp

# Largest magnitude any pre-activation may reach; leaves headroom below 2**63
# for the partial sums inside a sparse product.
WORKING_RANGE = 2**62


class ContractViolation(ValueError):
    """An input outside the domain a network was built for."""


class NetworkOverflow(OverflowError):
    """A value would leave the signed 64-bit working range."""


@dataclass(frozen=True)
class Layer:
    weight: sp.csr_matrix  # (out, in), int64
    bias: np.ndarray  # (out,), int64
    relu: np.ndarray  # (out,), bool; False means identity pass-through

    @property
    def width(self) -> int:
        return self.bias.size


@dataclass(frozen=True, eq=False)
class ReluNetwork:
    layers: tuple[Layer, ...]
    input_scale: np.ndarray
    input_lo: np.ndarray
    input_hi: np.ndarray
    name: str = "net"
    _bounds: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def input_arity(self) -> int:
        return int(self.input_scale.size)

    @property
    def output_arity(self) -> int:
        return self.layers[-1].width

    @property
    def depth(self) -> int:
        return sum(1 for layer in self.layers if layer.relu.any())

    @property
    def neuron_count(self) -> int:
        return sum(layer.width for layer in self.layers)

    @property
    def weight_magnitude_max(self) -> int:
        best = 0
        for layer in self.layers:
            if layer.weight.nnz:
                best = max(best, int(np.abs(layer.weight.data).max()))
            if layer.bias.size:
                best = max(best, int(np.abs(layer.bias).max()))
        return best

    def metrics(self) -> dict:
        return {
            "depth": self.depth,
            "neuron_count": self.neuron_count,
            "weight_magnitude_max": self.weight_magnitude_max,
        }


def metrics(net: ReluNetwork) -> dict:
    return net.metrics()


def propagate_bounds(net: ReluNetwork) -> list[float]:
    """Interval analysis from the declared input bounds.

    Returns the largest possible magnitude of ``sum |w| * |x|`` per layer and
    raises :class:`NetworkOverflow` when any exceeds the working range.
    """
    if "per_layer" in net._bounds:
        return net._bounds["per_layer"]
    lo = np.asarray(net.input_lo, dtype=float)
    hi = np.asarray(net.input_hi, dtype=float)
    per_layer = []
    for index, layer in enumerate(net.layers):
        w = layer.weight.astype(float)
        mag = np.maximum(np.abs(lo), np.abs(hi))
        worst = abs(w) @ mag + np.abs(layer.bias)
        peak = float(worst.max()) if worst.size else 0.0
        per_layer.append(peak)
        if not peak < WORKING_RANGE:
            raise NetworkOverflow(
                f"layer {index} of {net.name} may reach {peak:.3g}, beyond the int64 working range"
            )
        wp, wn = w.maximum(0), w.minimum(0)
        new_hi = wp @ hi + wn @ lo + layer.bias
        new_lo = wp @ lo + wn @ hi + layer.bias
        new_lo = np.where(layer.relu, np.maximum(new_lo, 0), new_lo)
        new_hi = np.where(layer.relu, np.maximum(new_hi, 0), new_hi)
        lo, hi = new_lo, new_hi
    net._bounds["per_layer"] = per_layer
    net._bounds["output"] = (lo, hi)
    return per_layer


def _scale_inputs(net: ReluNetwork, x) -> np.ndarray:
    """Exact conversion of (batch, arity) inputs to scaled int64."""
    arr = np.asarray(x, dtype=object) if not isinstance(x, np.ndarray) else x
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.shape[1] != net.input_arity:
        raise ValueError(f"{net.name} expects {net.input_arity} inputs, got {arr.shape[1]}")
    if arr.dtype.kind in "iu":
        return arr.astype(np.int64) * net.input_scale
    out = np.empty(arr.shape, dtype=np.int64)
    scale = [int(s) for s in net.input_scale]
    for r in range(arr.shape[0]):
        for c in range(arr.shape[1]):
            v = Fraction(arr[r, c]) * scale[c]
            if v.denominator != 1:
                raise ContractViolation(
                    f"input {c} = {arr[r, c]} is not a multiple of 1/{scale[c]}"
                )
            if abs(v.numerator) >= WORKING_RANGE:
                raise NetworkOverflow(f"input {c} = {arr[r, c]} exceeds the working range")
            out[r, c] = v.numerator
    return out


def _run(net: ReluNetwork, z: np.ndarray) -> np.ndarray:
    """Evaluate on scaled int64 inputs of shape (batch, arity)."""
    in_bounds = bool(
        np.all(z >= net.input_lo) and np.all(z <= net.input_hi)
    ) if z.size else True
    static_ok = False
    if in_bounds and np.all(np.isfinite(net.input_hi)) and np.all(np.isfinite(net.input_lo)):
        propagate_bounds(net)
        static_ok = True
    h = z.T.copy()  # (features, batch)
    for index, layer in enumerate(net.layers):
        if not static_ok and h.size:
            peak = abs(layer.weight.astype(float)) @ np.abs(h).max(axis=1).astype(float)
            peak = peak + np.abs(layer.bias)
            if peak.size and not float(peak.max()) < WORKING_RANGE:
                raise NetworkOverflow(f"layer {index} of {net.name} would overflow int64")
        h = layer.weight @ h
        h += layer.bias[:, None]
        if layer.relu.any():
            h[layer.relu] = np.maximum(h[layer.relu], 0)
    return h.T


def evaluate(net: ReluNetwork, x: Sequence) -> list[int]:
    """Exact evaluation of one input vector (ints or Fractions)."""
    return [int(v) for v in _run(net, _scale_inputs(net, list(x)))[0]]


def evaluate_batch(net: ReluNetwork, x, prescaled: bool = False) -> np.ndarray:
    """Evaluate a (batch, arity) array; ``prescaled`` skips the exact input conversion."""
    if prescaled:
        z = np.asarray(x, dtype=np.int64)
        if z.ndim == 1:
            z = z[None, :]
        if z.shape[1] != net.input_arity:
            raise ValueError(f"{net.name} expects {net.input_arity} inputs, got {z.shape[1]}")
    else:
        z = _scale_inputs(net, x)
    return _run(net, z)


def _identity_layer(width: int) -> Layer:
    return Layer(
        sp.identity(width, dtype=np.int64, format="csr"),
        np.zeros(width, dtype=np.int64),
        np.zeros(width, dtype=bool),
    )


def compose(first: ReluNetwork, second: ReluNetwork) -> ReluNetwork:
    """Network computing ``second(first(x))``."""
    if first.output_arity != second.input_arity:
        raise ValueError(
            f"cannot compose: {first.name} emits {first.output_arity} values, "
            f"{second.name} takes {second.input_arity}"
        )
    if np.any(second.input_scale != 1):
        raise ValueError(f"{second.name} expects scaled inputs and cannot follow another network")
    return ReluNetwork(
        layers=first.layers + second.layers,
        input_scale=first.input_scale,
        input_lo=first.input_lo,
        input_hi=first.input_hi,
        name=f"{second.name}∘{first.name}",
    )


def concat(nets: Sequence[ReluNetwork]) -> ReluNetwork:
    """Run networks side by side on concatenated inputs; outputs are concatenated."""
    if not nets:
        raise ValueError("concat needs at least one network")
    n_layers = max(len(net.layers) for net in nets)
    padded = [
        list(net.layers) + [_identity_layer(net.output_arity)] * (n_layers - len(net.layers))
        for net in nets
    ]
    layers = []
    for i in range(n_layers):
        parts = [p[i] for p in padded]
        layers.append(
            Layer(
                sp.block_diag([p.weight for p in parts], format="csr", dtype=np.int64),
                np.concatenate([p.bias for p in parts]),
                np.concatenate([p.relu for p in parts]),
            )
        )
    return ReluNetwork(
        layers=tuple(layers),
        input_scale=np.concatenate([net.input_scale for net in nets]),
        input_lo=np.concatenate([net.input_lo for net in nets]),
        input_hi=np.concatenate([net.input_hi for net in nets]),
        name="(" + ", ".join(net.name for net in nets) + ")",
    )


def identity_network(width: int, name: str = "id") -> ReluNetwork:
    return ReluNetwork(
        layers=(_identity_layer(width),),
        input_scale=np.ones(width, dtype=np.int64),
        input_lo=np.full(width, -np.inf),
        input_hi=np.full(width, np.inf),
        name=name,
    )


def dump(net: ReluNetwork) -> str:
    """JSON debugging dump; not a stable format."""
    layers = []
    for layer in net.layers:
        coo = layer.weight.tocoo()
        layers.append(
            {
                "shape": list(layer.weight.shape),
                "rows": coo.row.tolist(),
                "cols": coo.col.tolist(),
                "weights": coo.data.tolist(),
                "denominator": 1,
                "bias": layer.bias.tolist(),
                "relu": layer.relu.astype(int).tolist(),
            }
        )
    return json.dumps(
        {"name": net.name, "input_scale": net.input_scale.tolist(), "layers": layers}
    )
