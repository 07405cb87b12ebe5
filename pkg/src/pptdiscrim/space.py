"""Tensor-factor bookkeeping for bipartite systems."""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

from .errors import BadDimension, OneSidedSpace

ALICE = "A"
BOB = "B"


@dataclass(frozen=True)
class Factor:
    dim: int
    side: str

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise BadDimension(f"factor dimension must be a positive integer, got {self.dim!r}")
        if self.side not in (ALICE, BOB):
            raise ValueError(f"factor side must be 'A' or 'B', got {self.side!r}")


@dataclass(frozen=True)
class BipartiteSpace:
    """Ordered tensor factors, each owned by Alice ('A') or Bob ('B').

    The order of ``factors`` is the Kronecker order of every matrix or
    vector living on the space.
    """

    factors: tuple[Factor, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise BadDimension("a space needs at least one factor")

    @classmethod
    def of(cls, *factors: tuple[int, str]) -> "BipartiteSpace":
        """``BipartiteSpace.of((2, 'A'), (2, 'B'))``"""
        return cls(tuple(Factor(int(d), s) for d, s in factors))

    @classmethod
    def ab(cls, dim_a: int, dim_b: int) -> "BipartiteSpace":
        return cls.of((dim_a, ALICE), (dim_b, BOB))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.factors)

    @property
    def sides(self) -> tuple[str, ...]:
        return tuple(f.side for f in self.factors)

    @property
    def dim(self) -> int:
        return prod(self.dims)

    def indices(self, side: str) -> tuple[int, ...]:
        return tuple(i for i, f in enumerate(self.factors) if f.side == side)

    @property
    def dim_a(self) -> int:
        return prod(self.dims[i] for i in self.indices(ALICE))

    @property
    def dim_b(self) -> int:
        return prod(self.dims[i] for i in self.indices(BOB))

    def require_bipartite(self) -> None:
        if not self.indices(ALICE) or not self.indices(BOB):
            raise OneSidedSpace(f"space {self.sides} lacks a factor on one side")

    def concat(self, other: "BipartiteSpace") -> "BipartiteSpace":
        return BipartiteSpace(self.factors + other.factors)

    def power(self, m: int) -> "BipartiteSpace":
        return BipartiteSpace(self.factors * m)

    def subspace(self, keep: Iterable[int]) -> "BipartiteSpace":
        return BipartiteSpace(tuple(self.factors[i] for i in sorted(set(keep))))

    def to_json(self) -> list[dict]:
        return [{"dim": f.dim, "side": f.side} for f in self.factors]

    @classmethod
    def from_json(cls, data: Sequence[dict]) -> "BipartiteSpace":
        return cls(tuple(Factor(int(f["dim"]), str(f["side"])) for f in data))
