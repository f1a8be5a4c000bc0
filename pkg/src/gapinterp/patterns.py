"""Observation-gap geometries S1..S6 and the weights of the target functional.

A pattern describes which time indices are *missing*: a central block {0..N},
optionally a left block ending at -M1-1, optionally a right block starting at
N+M2+1. Kinds S1-S3 have (one or two) infinite missing tails and are handled
through an explicit truncation depth T.

The missing set K is always emitted in the canonical order

    central {0..N}, left {-M1-1, -M1-2, ...}, right {N+M2+1, N+M2+2, ...},

which matches the stacked coefficient-vector layout used by the Gram systems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import InvalidParameters, SupportMismatch

KINDS = ("S1", "S2", "S3", "S4", "S5", "S6")
_HAS_LEFT = {"S1": True, "S2": False, "S3": True, "S4": True, "S5": False, "S6": True}
_HAS_RIGHT = {"S1": False, "S2": True, "S3": True, "S4": False, "S5": True, "S6": True}
INFINITE_KINDS = ("S1", "S2", "S3")


@dataclass(frozen=True)
class ObservationPattern:
    kind: str
    N: int = 0
    M1: int | None = None
    M2: int | None = None
    N1: int | None = None
    N2: int | None = None
    T: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameters(f"unknown pattern kind {self.kind!r}")
        if self.N < 0:
            raise InvalidParameters("N must be >= 0")
        if self.has_left:
            if self.M1 is None or self.M1 < 1:
                raise InvalidParameters(f"{self.kind} requires M1 >= 1")
        if self.has_right:
            if self.M2 is None or self.M2 < 1:
                raise InvalidParameters(f"{self.kind} requires M2 >= 1")
        if self.is_infinite:
            if self.T is None or self.T < 1:
                raise InvalidParameters(f"{self.kind} requires a truncation depth T >= 1")
        else:
            # zero-length side blocks are allowed to express degenerate
            # reductions (e.g. S6 with N2=0 collapses to S4)
            if self.kind in ("S4", "S6") and (self.N1 is None or self.N1 < 0):
                raise InvalidParameters(f"{self.kind} requires N1 >= 0")
            if self.kind in ("S5", "S6") and (self.N2 is None or self.N2 < 0):
                raise InvalidParameters(f"{self.kind} requires N2 >= 0")

    @property
    def has_left(self) -> bool:
        return _HAS_LEFT[self.kind]

    @property
    def has_right(self) -> bool:
        return _HAS_RIGHT[self.kind]

    @property
    def is_infinite(self) -> bool:
        return self.kind in INFINITE_KINDS

    def left_depth(self) -> int:
        if not self.has_left:
            return 0
        return self.T if self.is_infinite else self.N1

    def right_depth(self) -> int:
        if not self.has_right:
            return 0
        return self.T if self.is_infinite else self.N2

    def blocks(self) -> tuple[list[int], list[int], list[int]]:
        """(central, left, right) index blocks in canonical internal order."""
        central = list(range(0, self.N + 1))
        left = [-self.M1 - 1 - i for i in range(self.left_depth())] if self.has_left else []
        right = [self.N + self.M2 + 1 + i for i in range(self.right_depth())] if self.has_right else []
        return central, left, right

    def with_truncation(self, T: int) -> "ObservationPattern":
        if not self.is_infinite:
            raise InvalidParameters(f"{self.kind} has no truncation depth")
        return ObservationPattern(kind=self.kind, N=self.N, M1=self.M1, M2=self.M2,
                                  N1=self.N1, N2=self.N2, T=T)


def missing_indices(pattern: ObservationPattern) -> list[int]:
    """The missing set K in canonical order: central, then left descending,
    then right ascending."""
    central, left, right = pattern.blocks()
    return central + left + right


def observed_indices(pattern: ObservationPattern, lo: int, hi: int) -> list[int]:
    """S intersected with [lo, hi] (inclusive), ascending.

    For the infinite kinds the truncated tail indices count as observed beyond
    depth T, consistent with solving the truncated system.
    """
    missing = set(missing_indices(pattern))
    return [t for t in range(lo, hi + 1) if t not in missing]


class FunctionalWeights:
    """Weights a(j) of the target functional, supported on the missing set.

    Either an explicit index->value map, or a geometric profile
    a(j) = C * rho^{|j|} for the infinite kinds.
    """

    def __init__(self, values: Mapping[int, complex] | None = None,
                 geometric: tuple[float, float] | None = None):
        if (values is None) == (geometric is None):
            raise InvalidParameters("provide exactly one of values or geometric")
        self._values = {int(k): complex(v) for k, v in values.items()} if values is not None else None
        if geometric is not None:
            c, rho = geometric
            if not (0 < rho < 1):
                raise InvalidParameters("geometric decay requires 0 < rho < 1")
            self._geometric = (float(c), float(rho))
        else:
            self._geometric = None

    @property
    def is_geometric(self) -> bool:
        return self._geometric is not None

    def __call__(self, j: int) -> complex:
        if self._geometric is not None:
            c, rho = self._geometric
            return complex(c * rho ** abs(j))
        return self._values.get(int(j), 0.0 + 0.0j)

    def tail_fraction(self, pattern: ObservationPattern) -> float:
        """Fraction of the l2 mass of a carried by tail indices beyond the
        truncation depth T (zero for explicit maps and finite kinds)."""
        if self._geometric is None or not pattern.is_infinite:
            return 0.0
        c, rho = self._geometric
        a_vec = weight_vector(self, pattern)
        mass = float(np.sum(np.abs(a_vec) ** 2))
        q = rho ** 2
        tail = 0.0
        if pattern.has_left:
            first = pattern.M1 + 1 + pattern.T
            tail += c ** 2 * q ** first / (1 - q)
        if pattern.has_right:
            first = pattern.N + pattern.M2 + 1 + pattern.T
            tail += c ** 2 * q ** first / (1 - q)
        return tail / (mass + tail)

    def check_support(self, pattern: ObservationPattern) -> None:
        if self._values is None:
            return
        allowed = set(missing_indices(pattern))
        outside = sorted(set(self._values) - allowed)
        if outside:
            raise SupportMismatch(f"weights at indices {outside} lie outside the missing set")


def weight_vector(weights: FunctionalWeights, pattern: ObservationPattern) -> np.ndarray:
    """Weights stacked in the canonical order of missing_indices(pattern)."""
    weights.check_support(pattern)
    return np.array([weights(j) for j in missing_indices(pattern)], dtype=complex)


def geometric_tail_bound(c: float, rho: float, first_index: int) -> float:
    """l2 mass of a geometric profile beyond first_index (one-sided)."""
    q = rho ** 2
    return c ** 2 * q ** first_index / (1 - q)


def strictly_positive_weights(weights: FunctionalWeights, pattern: ObservationPattern,
                              tol: float = 0.0) -> bool:
    vec = weight_vector(weights, pattern)
    if np.max(np.abs(vec.imag)) > 1e-14 * max(np.max(np.abs(vec)), 1.0):
        return False
    return bool(np.all(vec.real > tol))


def span(pattern: ObservationPattern) -> int:
    """Largest lag difference between two missing indices."""
    k = missing_indices(pattern)
    return max(k) - min(k) if k else 0
