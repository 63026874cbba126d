"""Exact counts of 0-1 matrices with prescribed margins.

Three independent algorithms live here:

* ``count_brute_force`` enumerates all ``2**(m*n)`` matrices (tiny cases only);
* ``count_dp`` sweeps columns, keeping residual row sums as a multiset;
* ``count_rowwise`` recurses over rows, memoizing on the sorted residual
  column sums.

The last two agree far beyond brute-force reach, which is what the rest of
the package leans on for finite-n ground truth.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, ResourceError
from .margins import MarginPair

BRUTE_FORCE_MAX_CELLS = 25
DEFAULT_MAX_STATES = 2_000_000

_CHUNK_BITS = 20


@dataclass(frozen=True)
class CountResult:
    count: int
    log_count: float

    @classmethod
    def from_count(cls, count: int) -> "CountResult":
        return cls(count, math.log(count) if count > 0 else -math.inf)


def _enumerate_margins(m: int, n: int):
    """Yield (row_sums, col_sums) arrays for every m x n 0-1 matrix, in chunks."""
    cells = m * n
    total = 1 << cells
    shifts = np.arange(cells, dtype=np.int64)
    step = 1 << min(cells, _CHUNK_BITS)
    for start in range(0, total, step):
        codes = np.arange(start, min(start + step, total), dtype=np.int64)
        bits = ((codes[:, None] >> shifts) & 1).astype(np.int8).reshape(-1, m, n)
        yield bits.sum(axis=2), bits.sum(axis=1)


def count_brute_force(margins: MarginPair) -> CountResult:
    """Count by checking every 0-1 matrix of the right shape."""
    m, n = margins.m, margins.n
    if m * n > BRUTE_FORCE_MAX_CELLS:
        raise ResourceError(f"brute force limited to m*n <= {BRUTE_FORCE_MAX_CELLS}, got {m * n}")
    rows = np.asarray(margins.rows)
    cols = np.asarray(margins.cols)
    count = 0
    for row_sums, col_sums in _enumerate_margins(m, n):
        hit = np.all(row_sums == rows, axis=1) & np.all(col_sums == cols, axis=1)
        count += int(hit.sum())
    return CountResult.from_count(count)


def brute_force_census(m: int, n: int) -> Counter:
    """Map every realised (rows, cols) pair of m x n 0-1 matrices to its count."""
    if m * n > BRUTE_FORCE_MAX_CELLS:
        raise ResourceError(f"brute force limited to m*n <= {BRUTE_FORCE_MAX_CELLS}, got {m * n}")
    census = Counter()
    for row_sums, col_sums in _enumerate_margins(m, n):
        keys = np.concatenate([row_sums, col_sums], axis=1)
        uniq, freq = np.unique(keys, axis=0, return_counts=True)
        for key, k in zip(uniq.tolist(), freq.tolist()):
            census[(tuple(key[:m]), tuple(key[m:]))] += k
    return census


def _canonical(residual: dict) -> tuple:
    return tuple(sorted(((v, k) for v, k in residual.items() if v > 0 and k > 0), reverse=True))


def _place_column(state: tuple, ones: int):
    """Yield (next_state, weight) for every way to put ``ones`` ones into one column."""
    classes = state
    suffix = [0] * (len(classes) + 1)
    for idx in range(len(classes) - 1, -1, -1):
        suffix[idx] = suffix[idx + 1] + classes[idx][1]

    def rec(idx, left, weight, moved):
        if left == 0:
            residual = defaultdict(int)
            for (v, k), s in zip(classes, moved):
                residual[v] += k - s
                residual[v - 1] += s
            for v, k in classes[len(moved):]:
                residual[v] += k
            yield _canonical(residual), weight
            return
        if idx == len(classes) or suffix[idx] < left:
            return
        v, k = classes[idx]
        for s in range(min(k, left), -1, -1):
            yield from rec(idx + 1, left - s, weight * math.comb(k, s), moved + [s])

    yield from rec(0, ones, 1, [])


def count_dp(margins: MarginPair, max_states: int = DEFAULT_MAX_STATES) -> CountResult:
    """Column-by-column dynamic program over residual row-sum multisets."""
    cols = sorted(margins.cols, reverse=True)
    if sum(margins.rows) != sum(cols):
        return CountResult.from_count(0)
    start = _canonical(Counter(margins.rows))
    layer = {start: 1}
    for j, c in enumerate(cols):
        remaining = len(cols) - j - 1
        nxt = defaultdict(int)
        for state, ways in layer.items():
            for new_state, weight in _place_column(state, c):
                # a residual row sum larger than the columns left can never be met
                if new_state and new_state[0][0] > remaining:
                    continue
                nxt[new_state] += ways * weight
        if len(nxt) > max_states:
            raise ResourceError(f"DP state space {len(nxt)} exceeds cap {max_states}")
        layer = nxt
        if not layer:
            return CountResult.from_count(0)
    return CountResult.from_count(layer.get((), 0))


def count_rowwise(margins: MarginPair) -> CountResult:
    """Row-insertion recursion memoized on sorted residual column sums."""
    rows = tuple(sorted(margins.rows, reverse=True))
    if sum(rows) != sum(margins.cols):
        return CountResult.from_count(0)

    @lru_cache(maxsize=None)
    def ways(i: int, residual: tuple) -> int:
        if i == len(rows):
            return 1 if not any(residual) else 0
        if sum(residual) != sum(rows[i:]):
            return 0
        values = sorted(Counter(v for v in residual if v > 0).items())
        zeros = residual.count(0)
        total = 0
        for choice, weight in _choose(values, rows[i]):
            nxt = [0] * zeros
            for (v, k), s in zip(values, choice):
                nxt += [v] * (k - s) + [v - 1] * s
            total += weight * ways(i + 1, tuple(sorted(nxt)))
        return total

    return CountResult.from_count(ways(0, tuple(sorted(margins.cols))))


def _choose(values, need):
    """All (s_1..s_t) with 0 <= s_k <= mult_k and sum s_k == need, with binomial weights."""
    if not values:
        if need == 0:
            yield (), 1
        return
    (v, k), rest = values[0], values[1:]
    capacity = sum(kk for _, kk in rest)
    for s in range(max(0, need - capacity), min(k, need) + 1):
        for tail, w in _choose(rest, need - s):
            yield (s,) + tail, w * math.comb(k, s)


def correlation_ratio_exact(margins: MarginPair, max_states: int = DEFAULT_MAX_STATES) -> float:
    """Exact count divided by the independence-heuristic estimate."""
    from .heuristic import log_heuristic

    if not margins.is_positive():
        raise DomainError("the independence estimate needs strictly positive margins")
    result = count_dp(margins, max_states=max_states)
    if result.count == 0:
        return 0.0
    return math.exp(result.log_count - log_heuristic(margins).log_estimate)
