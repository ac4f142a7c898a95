from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

FAMILIES = ("gs", "gd", "gi", "ge")

# Sequence length per family, as a multiple of d.
SLOTS = {"gs": 2, "gd": 2, "gi": 3, "ge": 7}

# Sentinel slots appended to the input graph.
PADDING = {"gs": 0, "gd": 1, "gi": 1, "ge": 2}


@dataclass(frozen=True)
class NetworkConfig:
    """Sizes and constants shared by a network and its reference simulator.

    ``B`` marks empty slots and ``C`` suppresses terms inside ReLUs; the
    constraints ``C > B (n + 2d + 1)`` and ``B > max(m, n + 2d)`` are
    checked on construction. ``grid`` is ``1/Δ`` for GE inputs.
    """

    n: int
    m: int
    d: int
    B: int
    C: int
    grid: int = 1

    def __post_init__(self):
        if self.n < 1 or self.m < 1 or self.d < 0:
            raise ValueError(f"need n >= 1, m >= 1, d >= 0; got n={self.n} m={self.m} d={self.d}")
        if not self.B > max(self.m, self.n + 2 * self.d):
            raise ValueError(f"B={self.B} must exceed max(m, n + 2d) = {max(self.m, self.n + 2 * self.d)}")
        if not self.C > self.B * (self.n + 2 * self.d + 1):
            raise ValueError(f"C={self.C} must exceed B(n + 2d + 1) = {self.B * (self.n + 2 * self.d + 1)}")
        base = self.base_grid(self.n, self.m, self.d)
        if self.grid != 1 and self.grid % base:
            raise ValueError(f"grid 1/{self.grid} does not contain every conversion endpoint (needs a multiple of {base})")

    @staticmethod
    def base_grid(n: int, m: int, d: int) -> int:
        return lcm(n, max(n + d - 1, 1), m)

    @classmethod
    def for_graph(cls, n: int, m: int, d: int, grid: int | None = None) -> "NetworkConfig":
        B = 8 * max(m, n + 2 * d)
        C = 64 * B * (n + 2 * d)
        return cls(n, m, d, B, C, grid if grid is not None else cls.base_grid(n, m, d))

    def with_suppression(self, C: int) -> "NetworkConfig":
        """Copy with a different C and no constraint check; for fault injection only."""
        cfg = object.__new__(NetworkConfig)
        for name in ("n", "m", "d", "B", "grid"):
            object.__setattr__(cfg, name, getattr(self, name))
        object.__setattr__(cfg, "C", C)
        return cfg

    @property
    def delta(self) -> Fraction:
        return Fraction(1, self.grid)

    def slots(self, family: str) -> int:
        return SLOTS[family] * self.d

    def padding(self, family: str) -> int:
        return PADDING[family] * self.d

    def output_size(self, family: str) -> int:
        """Number of vertex slots in the network output."""
        return {"gs": self.n, "gd": self.n, "gi": self.n + self.d, "ge": self.n + self.d}[family]
