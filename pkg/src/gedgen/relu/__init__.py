from .builder import Lin, NetBuilder
from .ir import (
    ContractViolation,
    Layer,
    NetworkOverflow,
    ReluNetwork,
    compose,
    concat,
    dump,
    evaluate,
    evaluate_batch,
    identity_network,
    metrics,
)

__all__ = [
    "ContractViolation",
    "Layer",
    "Lin",
    "NetBuilder",
    "NetworkOverflow",
    "ReluNetwork",
    "compose",
    "concat",
    "dump",
    "evaluate",
    "evaluate_batch",
    "identity_network",
    "metrics",
]
