"""Truncated tensor-product spaces."""
from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

__all__ = ["NatTrunc", "IntTrunc", "SpaceSpec"]


@dataclass(frozen=True)
class NatTrunc:
    """l2(N) truncated to e_0 .. e_(D-1)."""

    D: int
    kind = "N"

    def __post_init__(self):
        if self.D < 2:
            raise ValueError("truncation D must be at least 2")

    @property
    def dim(self) -> int:
        return self.D

    @property
    def lo(self) -> int:
        return 0

    @property
    def hi(self) -> int:
        return self.D - 1

    def labels(self) -> np.ndarray:
        return np.arange(self.D)


@dataclass(frozen=True)
class IntTrunc:
    """l2(Z) truncated to e_(-D) .. e_D."""

    D: int
    kind = "Z"

    def __post_init__(self):
        if self.D < 2:
            raise ValueError("truncation radius D must be at least 2")

    @property
    def dim(self) -> int:
        return 2 * self.D + 1

    @property
    def lo(self) -> int:
        return -self.D

    @property
    def hi(self) -> int:
        return self.D

    def labels(self) -> np.ndarray:
        return np.arange(-self.D, self.D + 1)


@dataclass(frozen=True)
class SpaceSpec:
    """Ordered factors; basis enumeration is row-major over factor indices."""

    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def kinds(self) -> tuple[str, ...]:
        return tuple(f.kind for f in self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.factors)

    @property
    def dim(self) -> int:
        return prod(self.dims)

    def __len__(self) -> int:
        return len(self.factors)

    def __add__(self, other: "SpaceSpec") -> "SpaceSpec":
        return SpaceSpec(self.factors + other.factors)

    def flat_index(self, labels) -> int:
        """Flat basis index of the vector with the given per-factor labels."""
        local = [lab - f.lo for lab, f in zip(labels, self.factors)]
        for x, f in zip(local, self.factors):
            if not 0 <= x < f.dim:
                raise IndexError(f"label out of range for {f}")
        return int(np.ravel_multi_index(local, self.dims)) if local else 0

    def labels_of(self, flat: int) -> tuple[int, ...]:
        local = np.unravel_index(flat, self.dims)
        return tuple(int(x) + f.lo for x, f in zip(local, self.factors))

    def mask(self, per_factor) -> np.ndarray:
        """Flat boolean mask from one boolean array per factor (local order)."""
        out = np.ones(1, dtype=bool)
        for m in per_factor:
            out = np.logical_and.outer(out, np.asarray(m, dtype=bool)).ravel()
        return out


def nat_space(D: int, count: int) -> SpaceSpec:
    return SpaceSpec((NatTrunc(D),) * count)
