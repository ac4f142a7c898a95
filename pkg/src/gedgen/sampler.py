"""Seeded random and exhaustive edit sequences for each network family.

Random draws use numpy's PCG64 generator seeded through ``SeedSequence``;
stream ``k`` of seed ``s`` is ``SeedSequence([s, k])``, so parallel batches
stay independent and reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterator

import numpy as np

from .graph import EditInput
from .networks.config import NetworkConfig

ENUMERATION_GUARD = 10**7


class EnumerationTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class SamplerConfig:
    family: str
    n: int
    m: int
    d: int
    seed: int = 0
    grid: int | None = None  # 1/Δ; GE only, defaults to the smallest valid grid

    def __post_init__(self):
        object.__setattr__(self, "family", self.family.lower())
        if self.family not in ("gs", "gd", "gi", "ge"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "ge" and self.grid is None:
            object.__setattr__(self, "grid", NetworkConfig.base_grid(self.n, self.m, self.d))

    @classmethod
    def for_network(cls, family: str, cfg: NetworkConfig, seed: int = 0) -> "SamplerConfig":
        return cls(family, cfg.n, cfg.m, cfg.d, seed, cfg.grid if family == "ge" else None)

    def ranges(self) -> list[tuple[int, int]]:
        """Inclusive integer range per slot; GE slots range over grid steps."""
        n, m, d = self.n, self.m, self.d
        if self.family == "gs":
            return [(1, n)] * d + [(1, m)] * d
        if self.family == "gd":
            return [(1, n)] * (2 * d)
        if self.family == "gi":
            return [(1, n + d - 1)] * (2 * d) + [(1, m)] * d
        return [(0, self.grid - 1)] * (7 * d)

    def space_size(self) -> int:
        return prod(hi - lo + 1 for lo, hi in self.ranges())


def _wrap(family: str, row, grid) -> EditInput:
    if family == "ge":
        return EditInput("ge", tuple(Fraction(int(v), grid) for v in row))
    return EditInput(family, tuple(int(v) for v in row))


def sample_array(cfg: SamplerConfig, count: int, stream: int = 0) -> np.ndarray:
    """(count, length) int64 draws; GE entries are grid steps (value times 1/Δ)."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([cfg.seed, stream])))
    ranges = np.asarray(cfg.ranges(), dtype=np.int64).reshape(-1, 2)
    if count == 0 or ranges.size == 0:
        return np.zeros((count, len(ranges)), dtype=np.int64)
    return rng.integers(ranges[:, 0], ranges[:, 1] + 1, size=(count, len(ranges)))


def sample(cfg: SamplerConfig, count: int, stream: int = 0) -> list[EditInput]:
    """``count`` i.i.d. sequences, uniform over the declared ranges."""
    return [_wrap(cfg.family, row, cfg.grid) for row in sample_array(cfg, count, stream)]


def enumerate_all(cfg: SamplerConfig) -> Iterator[EditInput]:
    """Every sequence in lexicographic order; refuses spaces above the guard."""
    if cfg.d == 0:
        return iter(())
    size = cfg.space_size()
    if size > ENUMERATION_GUARD:
        raise EnumerationTooLarge(f"{cfg.family} input space has {size} sequences (guard {ENUMERATION_GUARD})")
    axes = [range(lo, hi + 1) for lo, hi in cfg.ranges()]
    return (_wrap(cfg.family, row, cfg.grid) for row in itertools.product(*axes))


def ge_class_axes(cfg: SamplerConfig) -> list[list[Fraction]]:
    """One representative decimal per conversion class, per GE slot.

    Two decimals in the same class convert to the same integer, so the
    network output depends on the class only. Index classes are {0} and
    ((i-1)/k, i/k], represented by i/k (the last one by 1 - Δ); label
    classes are [0, 1/m] (represented by 0) and ((i-1)/m, i/m].
    """
    if cfg.family != "ge":
        raise ValueError("conversion classes exist only for GE")
    n, m, d = cfg.n, cfg.m, cfg.d
    top = 1 - Fraction(1, cfg.grid)  # largest grid point below 1

    def index_axis(k):
        return sorted({Fraction(0), *(Fraction(i, k) for i in range(1, k)), top})

    labels = sorted({Fraction(0), *(Fraction(i, m) for i in range(2, m)), top}) if m > 1 else [Fraction(0)]
    k_ins = n + d - 1
    blocks = [index_axis(n), labels, index_axis(k_ins), index_axis(k_ins), labels, index_axis(n), index_axis(n)]
    return [axis for axis in blocks for _ in range(d)]


def enumerate_ge_classes(cfg: SamplerConfig) -> Iterator[EditInput]:
    """Exhaustive GE enumeration over conversion-class representatives."""
    if cfg.d == 0:
        return iter(())
    axes = ge_class_axes(cfg)
    size = prod(len(a) for a in axes)
    if size > ENUMERATION_GUARD:
        raise EnumerationTooLarge(f"GE class space has {size} sequences (guard {ENUMERATION_GUARD})")
    return (EditInput("ge", row) for row in itertools.product(*axes))
