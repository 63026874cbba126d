"""Maximum-entropy ("typical") tables on the binary transportation polytope.

The typical table maximises ``g(X) = sum f(X_ij)`` with ``f`` the Bernoulli
entropy over real matrices in ``[0, 1]`` with the prescribed margins.  It is
found through the dual: entries take the form ``logistic(a_i + b_j)`` and the
offsets are fitted by alternating exact row and column updates, each a
monotone one-dimensional root problem solved by bracketed Newton steps.

Entries that equal 0 or 1 in *every* table with the given margins are fixed
up front.  They are exactly the edges between distinct strongly connected
components of the alternating-cycle digraph built from one realisation,
which covers zero/full lines as well as tight Gale-Ryser faces.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.special import entr, expit, logit

from .errors import ConvergenceError, DomainError, InfeasibleError
from .margins import MarginPair, greedy_table

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITERATIONS = 100_000
DEFAULT_TIME_BUDGET = 60.0
DEFAULT_GAMMA = 1.0


def bernoulli_entropy(x: float) -> float:
    """f(x) = x log(1/x) + (1-x) log(1/(1-x)), with f(0) = f(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"bernoulli_entropy needs 0 <= x <= 1, got {x}")
    return float(entr(x) + entr(1.0 - x))


def entropy_of(entries) -> float:
    z = np.asarray(entries, dtype=float)
    if np.any(z < 0.0) or np.any(z > 1.0):
        raise DomainError("entries must lie in [0, 1]")
    return float(np.sum(entr(z) + entr(1.0 - z)))


@dataclass
class TypicalTable:
    entries: np.ndarray
    row_duals: np.ndarray
    col_duals: np.ndarray
    entropy_value: float
    residual: float
    iterations: int
    free: np.ndarray = field(repr=False)
    collapsed: bool = False

    @property
    def shape(self):
        return self.entries.shape

    def log_odds(self) -> np.ndarray:
        """a_i + b_j on free entries, +-inf on forced ones."""
        t = self.row_duals[:, None] + self.col_duals[None, :]
        forced = np.where(self.entries > 0.5, np.inf, -np.inf)
        return np.where(self.free, t, forced)

    def kkt_violation(self) -> float:
        """Max |log((1-z)/z) - (lam_i + mu_j)| over free entries.

        The primal multipliers ``lam, mu`` of the margin constraints are the
        negated dual offsets, because f'(z) = log((1-z)/z) = -(a_i + b_j).
        """
        if not self.free.any():
            return 0.0
        z = self.entries[self.free]
        lam_mu = -(self.row_duals[:, None] + self.col_duals[None, :])[self.free]
        return float(np.max(np.abs(np.log1p(-z) - np.log(z) - lam_mu)))

    def block_summary(self, tol: float = 1e-9) -> list[dict]:
        """Distinct entry values (merged within ``tol``) with their multiplicities."""
        values = np.sort(self.entries.ravel())
        blocks = []
        start = 0
        for k in range(1, len(values) + 1):
            if k == len(values) or values[k] - values[start] > tol:
                blocks.append({"value": float(values[start:k].mean()), "multiplicity": k - start})
                start = k
        return blocks

    def to_dict(self) -> dict:
        return {
            "row_duals": self.row_duals.tolist(),
            "col_duals": self.col_duals.tolist(),
            "blocks": self.block_summary(),
            "entropy_value": self.entropy_value,
            "residual": self.residual,
            "iterations": self.iterations,
            "collapsed": self.collapsed,
        }


def free_mask(margins: MarginPair) -> tuple[np.ndarray, np.ndarray]:
    """(realisation, mask of entries not forced to 0 or 1)."""
    table = greedy_table(margins)
    if table is None:
        raise InfeasibleError(f"no 0-1 matrix has margins {margins.to_dict()}")
    x = np.asarray(table, dtype=np.int8)
    m, n = x.shape
    ii, jj = np.nonzero(x)
    zi, zj = np.nonzero(x == 0)
    # ones point row -> column, zeros point column -> row
    src = np.concatenate([ii, m + zj])
    dst = np.concatenate([m + jj, zi])
    graph = csr_matrix((np.ones(src.size), (src, dst)), shape=(m + n, m + n))
    _, labels = connected_components(graph, directed=True, connection="strong")
    free = labels[:m, None] == labels[None, m:]
    return x, free


def _fit_offsets(target, shifts, weights, mask, x0):
    """Solve sum_j w_j mask_ij logistic(x_i + s_j) = target_i for every active row i.

    The left side is increasing in x_i and is sandwiched between
    cap_i * logistic(x_i + min s) and cap_i * logistic(x_i + max s), which
    gives a finite bracket; Newton steps that leave it fall back to bisection.
    """
    w = weights[None, :] * mask
    cap = w.sum(axis=1)
    p = target / cap
    big = np.where(mask, shifts[None, :], -np.inf).max(axis=1)
    small = np.where(mask, shifts[None, :], np.inf).min(axis=1)
    lo = logit(p) - big
    hi = logit(p) - small
    x = np.clip(x0, lo, hi)
    for _ in range(200):
        z = expit(x[:, None] + shifts[None, :])
        h = (w * z).sum(axis=1) - target
        dh = (w * z * (1.0 - z)).sum(axis=1)
        lo = np.where(h < 0, x, lo)
        hi = np.where(h > 0, x, hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = x - h / dh
        bad = ~np.isfinite(step) | (step <= lo) | (step >= hi)
        step = np.where(bad, 0.5 * (lo + hi), step)
        done = (np.abs(h) <= 1e-15 * np.maximum(cap, 1.0)) | (hi - lo <= 1e-15 * (1.0 + np.abs(x)))
        if done.all():
            break
        x = np.where(done, x, step)
    return x


def _solve_classes(r, c, rw, cw, mask, tol, max_iterations, time_budget):
    """Alternating exact updates on the class-level dual problem."""
    active_r = mask.any(axis=1)
    active_c = mask.any(axis=0)
    alpha = np.zeros(len(r))
    beta = np.zeros(len(c))
    m_r, m_c = mask[active_r], mask[:, active_c].T
    started = time.monotonic()
    residual = math.inf
    sweeps = 0
    for sweeps in range(1, max_iterations + 1):
        alpha[active_r] = _fit_offsets(r[active_r], beta, cw, m_r, alpha[active_r])
        beta[active_c] = _fit_offsets(c[active_c], alpha, rw, m_c, beta[active_c])
        z = expit(alpha[:, None] + beta[None, :]) * mask
        row_err = np.abs((z * cw[None, :]).sum(axis=1) - r).max(initial=0.0)
        col_err = np.abs((z * rw[:, None]).sum(axis=0) - c).max(initial=0.0)
        residual = max(row_err, col_err)
        if residual <= tol:
            return alpha, beta, residual, sweeps
        if time.monotonic() - started > time_budget:
            raise ConvergenceError(
                f"time budget {time_budget}s exhausted after {sweeps} sweeps, residual {residual:.3g}",
                residual, sweeps)
    raise ConvergenceError(f"no convergence in {max_iterations} sweeps, residual {residual:.3g}",
                           residual, sweeps)


def solve_typical_table(margins: MarginPair, tolerance: float = DEFAULT_TOL,
                        max_iterations: int = DEFAULT_MAX_ITERATIONS,
                        collapse: bool = True,
                        time_budget: float = DEFAULT_TIME_BUDGET) -> TypicalTable:
    """Maximum-entropy matrix for ``margins``.

    With ``collapse`` (the default) rows and columns sharing a margin value are
    merged into weighted classes, since the maximiser is constant on them;
    ``collapse=False`` solves one offset per row and column.
    """
    x0, free = free_mask(margins)
    m, n = x0.shape
    rows = np.asarray(margins.rows, dtype=float)
    cols = np.asarray(margins.cols, dtype=float)

    if collapse:
        rvals, rinv, rw = np.unique(rows, return_inverse=True, return_counts=True)
        cvals, cinv, cw = np.unique(cols, return_inverse=True, return_counts=True)
        rrep = np.array([np.flatnonzero(rinv == k)[0] for k in range(len(rvals))])
        crep = np.array([np.flatnonzero(cinv == k)[0] for k in range(len(cvals))])
    else:
        rinv, rw, rrep = np.arange(m), np.ones(m, dtype=int), np.arange(m)
        cinv, cw, crep = np.arange(n), np.ones(n, dtype=int), np.arange(n)

    mask = free[np.ix_(rrep, crep)]
    fixed = x0[np.ix_(rrep, crep)] * ~mask
    # margins left over for the free entries once forced ones are placed
    r_free = rows[rrep] - (fixed * cw[None, :]).sum(axis=1)
    c_free = cols[crep] - (fixed * rw[:, None]).sum(axis=0)

    alpha, beta, _, sweeps = _solve_classes(
        r_free, c_free, rw.astype(float), cw.astype(float), mask,
        tolerance, max_iterations, time_budget)

    row_duals, col_duals = alpha[rinv], beta[cinv]
    shift = col_duals[free.any(axis=0)].mean() if free.any() else 0.0
    row_duals = np.where(free.any(axis=1), row_duals + shift, 0.0)
    col_duals = np.where(free.any(axis=0), col_duals - shift, 0.0)

    t = row_duals[:, None] + col_duals[None, :]
    entries = np.where(free, expit(t), x0.astype(float))
    complement = np.where(free, expit(-t), 1.0 - x0)
    entropy_value = float(np.sum(entr(entries) + entr(complement)))
    residual = max(np.abs(entries.sum(axis=1) - rows).max(),
                   np.abs(entries.sum(axis=0) - cols).max())
    return TypicalTable(entries, row_duals, col_duals, entropy_value, float(residual),
                        sweeps, free, collapsed=collapse)


def entropy(table: TypicalTable) -> float:
    return entropy_of(table.entries)


def barvinok_bounds(margins: MarginPair, gamma: float = DEFAULT_GAMMA,
                    table: TypicalTable | None = None, **solver_kw) -> tuple[float, float]:
    """(lower, upper) bounds on ln |M(r, c)| from the typical-table entropy.

    ``gamma`` is the unspecified absolute constant in the lower bound; only
    the upper bound ``g(Z)`` holds unconditionally.
    """
    if gamma < 0:
        raise DomainError("gamma must be non-negative")
    if table is None:
        table = solve_typical_table(margins, **solver_kw)
    upper = table.entropy_value
    m, n = margins.m, margins.n
    lower = upper - gamma * (m + n) * math.log(m * n) if gamma > 0 else upper
    return lower, upper
