"""Independence-heuristic estimate of the number of 0-1 tables.

    I(r, c) = C(mn, N)^-1 * prod_i C(n, r_i) * prod_j C(m, c_j)

obtained by treating "row sums are r" and "column sums are c" as independent
events for a uniform 0-1 matrix with N ones.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .errors import ResourceError
from .margins import MarginPair

EXACT_MAX_CELLS = 400


def log_binom(n: int, k: int) -> float:
    if k < 0 or k > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


@dataclass(frozen=True)
class HeuristicResult:
    log_estimate: float
    N: int


def log_heuristic(margins: MarginPair) -> HeuristicResult:
    m, n, N = margins.m, margins.n, margins.total
    if N == 0 or N == m * n:
        return HeuristicResult(0.0, N)
    # identical margins share one binomial; multiplicities keep large families cheap
    total = -log_binom(m * n, N)
    total += sum(k * log_binom(n, r) for r, k in Counter(margins.rows).items())
    total += sum(k * log_binom(m, c) for c, k in Counter(margins.cols).items())
    return HeuristicResult(total, N)


def heuristic_exact(margins: MarginPair) -> Fraction:
    """I(r, c) as an exact rational, for small tables."""
    m, n, N = margins.m, margins.n, margins.total
    if m * n > EXACT_MAX_CELLS:
        raise ResourceError(f"exact evaluation limited to m*n <= {EXACT_MAX_CELLS}")
    num = 1
    for r in margins.rows:
        num *= math.comb(n, r)
    for c in margins.cols:
        num *= math.comb(m, c)
    return Fraction(num, math.comb(m * n, N))
