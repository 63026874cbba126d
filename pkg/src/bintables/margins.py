"""Margin vectors, Gale-Ryser feasibility and the two-level margin family.

The family of interest has ``floor(n**delta)`` "heavy" rows and columns with
sum ``floor(B*C*n)`` followed by ``n`` "bulk" rows and columns with sum
``floor(C*n)``; every table is square of side ``floor(n**delta) + n``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import DomainError

# slack used when snapping floats such as 9**0.5 onto the integer they represent
_FLOOR_RTOL = 1e-12


def exact_floor(x: float) -> int:
    """Floor that treats values within rounding of an integer as that integer."""
    k = math.floor(x)
    if math.isclose(x, k + 1, rel_tol=_FLOOR_RTOL, abs_tol=_FLOOR_RTOL):
        return k + 1
    return k


@dataclass(frozen=True)
class MarginPair:
    """Row sums ``rows`` (length m) and column sums ``cols`` (length n) of a 0-1 table.

    Construction only checks shape, signs and equal totals.  Margins that
    exceed the opposite dimension are representable so that they can be
    reported as infeasible (count 0) rather than rejected; ``fits_box``
    tells them apart.
    """

    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        cols = tuple(int(c) for c in self.cols)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        if not rows or not cols:
            raise DomainError("margins need at least one row and one column")
        if min(rows) < 0 or min(cols) < 0:
            raise DomainError("margins must be non-negative")
        if sum(rows) != sum(cols):
            raise DomainError(f"row total {sum(rows)} != column total {sum(cols)}")

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.cols)

    @property
    def total(self) -> int:
        return sum(self.rows)

    def transpose(self) -> "MarginPair":
        return MarginPair(self.cols, self.rows)

    def complement(self) -> "MarginPair":
        """Margins of the bit-flipped tables."""
        if not self.fits_box():
            raise DomainError("complement needs rows <= n and cols <= m")
        return MarginPair(tuple(self.n - r for r in self.rows),
                          tuple(self.m - c for c in self.cols))

    def fits_box(self) -> bool:
        """Every row sum is at most n and every column sum at most m."""
        return max(self.rows) <= self.n and max(self.cols) <= self.m

    def is_positive(self) -> bool:
        return min(self.rows) > 0 and min(self.cols) > 0

    def is_interior(self) -> bool:
        """No row or column is forced to be all zeros or all ones."""
        return (all(0 < r < self.n for r in self.rows)
                and all(0 < c < self.m for c in self.cols))

    def to_dict(self) -> dict:
        return {"rows": list(self.rows), "cols": list(self.cols)}

    @classmethod
    def from_dict(cls, data: dict) -> "MarginPair":
        return cls(tuple(data["rows"]), tuple(data["cols"]))

    @classmethod
    def from_json(cls, path: str | Path) -> "MarginPair":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class FamilyParams:
    n: int
    delta: float
    B: float
    C: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")
        if not 0.0 < self.delta < 1.0:
            raise DomainError(f"delta must lie in (0, 1), got {self.delta}")
        if not (self.B > 0.0 and self.C > 0.0):
            raise DomainError("B and C must be positive")

    @property
    def heavy(self) -> int:
        """Number of heavy rows (and columns), floor(n**delta)."""
        return exact_floor(self.n ** self.delta)

    @property
    def heavy_sum(self) -> int:
        return exact_floor(self.B * self.C * self.n)

    @property
    def bulk_sum(self) -> int:
        return exact_floor(self.C * self.n)

    @property
    def size(self) -> int:
        return self.heavy + self.n

    def check_asymptotic(self, eps: float = 0.0) -> None:
        """Raise unless 0 < C < 3/4 and 0 < B < bmax(C)."""
        check_asymptotic_domain(self.B, self.C, eps)

    def check_heuristic(self, eps: float = 0.0) -> None:
        """Raise unless 0 < C < 1 and 0 < B < 1/C."""
        if not (eps < self.C < 1.0 - eps):
            raise DomainError(f"C={self.C} outside (0, 1)")
        if not (eps < self.B and self.B * self.C < 1.0 - eps):
            raise DomainError(f"B={self.B} outside (0, 1/C)")

    def to_dict(self) -> dict:
        return {"n": self.n, "delta": self.delta, "B": self.B, "C": self.C}

    @classmethod
    def from_dict(cls, data: dict) -> "FamilyParams":
        return cls(int(data["n"]), float(data["delta"]), float(data["B"]), float(data["C"]))


def bmax(C: float) -> float:
    """Upper end of the admissible B-range, 1 / (sqrt(C/3 - C^2/3) + C)."""
    if not 0.0 < C < 0.75:
        raise DomainError(f"bmax needs 0 < C < 3/4, got C={C}")
    return 1.0 / (math.sqrt(C / 3.0 - C * C / 3.0) + C)


def check_asymptotic_domain(B: float, C: float, eps: float = 0.0) -> None:
    if not (eps < C < 0.75 - eps):
        raise DomainError(f"C={C} outside (0, 3/4)")
    if not (eps < B < bmax(C) - eps):
        raise DomainError(f"B={B} outside (0, bmax(C)={bmax(C):.6g})")


def build_family_margins(params: FamilyParams) -> MarginPair:
    heavy, a, b, size = params.heavy, params.heavy_sum, params.bulk_sum, params.size
    if heavy < 1:
        raise DomainError("floor(n**delta) must be at least 1")
    if a < 1 or b < 1:
        raise DomainError(f"family margins must be positive, got {a} and {b}")
    if a > size or b > size:
        raise DomainError(f"margin exceeds table side {size}")
    margins = (a,) * heavy + (b,) * params.n
    return MarginPair(margins, margins)


def conjugate(values: Sequence[int], length: int) -> list[int]:
    """Conjugate partition: entry k-1 counts values >= k, for k = 1..length."""
    counts = [0] * (length + 2)
    for v in values:
        counts[min(v, length + 1)] += 1
    out = []
    running = sum(counts[length + 1:])
    for k in range(length, 0, -1):
        running += counts[k]
        out.append(running)
    return out[::-1]


def is_feasible(margins: MarginPair) -> bool:
    """Gale-Ryser test: some 0-1 matrix has these margins."""
    rows = sorted(margins.rows, reverse=True)
    conj = conjugate(margins.cols, margins.m)
    partial_r = partial_c = 0
    for k in range(margins.m):
        partial_r += rows[k]
        partial_c += conj[k]
        if partial_r > partial_c:
            return False
    return partial_r == sum(margins.cols)


def greedy_table(margins: MarginPair) -> list[list[int]] | None:
    """One 0-1 matrix with the given margins (Ryser's greedy fill), or None."""
    if not is_feasible(margins):
        return None
    residual = list(margins.cols)
    table = [[0] * margins.n for _ in range(margins.m)]
    for i in sorted(range(margins.m), key=lambda i: -margins.rows[i]):
        # largest residual column sums first; ties broken by index for determinism
        order = sorted(range(margins.n), key=lambda j: (-residual[j], j))
        for j in order[:margins.rows[i]]:
            table[i][j] = 1
            residual[j] -= 1
    if any(residual):
        return None
    return table
