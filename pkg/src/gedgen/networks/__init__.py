from .builders import build, build_gd, build_ge, build_gi, build_gs, build_probed
from .config import FAMILIES, NetworkConfig
from .generate import (
    GenerationMismatch,
    edge_only_ge,
    edge_only_input,
    generate,
    generate_batch,
    network_for,
    network_rows,
    reference_rows,
)
from .reference import REFERENCES, reference_gd, reference_ge, reference_gi, reference_gs

__all__ = [
    "FAMILIES", "NetworkConfig", "GenerationMismatch", "REFERENCES",
    "build", "build_gs", "build_gd", "build_gi", "build_ge", "build_probed",
    "generate", "generate_batch", "network_for", "network_rows", "reference_rows", "edge_only_ge", "edge_only_input",
    "reference_gs", "reference_gd", "reference_gi", "reference_ge",
]
