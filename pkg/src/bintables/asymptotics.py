"""Closed-form expansions for the two-level margin family.

Both ``log |M|`` and ``log I`` expand as

    c_n2 * n^2 + c_n1d * n^(1+delta) + c_n2d * n^(2 delta) + O(n^(3 delta - 1) + n log n)

and their n^2 and n^(1+delta) coefficients coincide, so the correlation ratio
is governed by the difference of the n^(2 delta) coefficients.

Every coefficient set is produced twice: once from the closed forms, once by
re-assembling the Taylor/Stirling steps with a truncated power series in
``h = n^delta / n``.  The ``*_assembled`` functions are that second route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .margins import FamilyParams, bmax, check_asymptotic_domain
from .typical import bernoulli_entropy

# strict-inequality margin for admissibility checks
ADMISSIBLE_EPS = 1e-9


@dataclass(frozen=True)
class ExpansionCoeffs:
    c_n2: float
    c_n1d: float
    c_n2d: float
    error_exponents: tuple[float, float]
    n_log_n: bool = True
    dominated_by_error: bool = False

    def evaluate(self, n: float, delta: float) -> float:
        return (self.c_n2 * n ** 2 + self.c_n1d * n ** (1 + delta)
                + self.c_n2d * n ** (2 * delta))

    def to_dict(self) -> dict:
        return {
            "n^2": self.c_n2,
            "n^(1+delta)": self.c_n1d,
            "n^(2delta)": self.c_n2d,
            "error_exponents": list(self.error_exponents),
            "n_log_n": self.n_log_n,
            "dominated_by_error": self.dominated_by_error,
        }


@dataclass(frozen=True)
class DeltaResult:
    delta: float
    lower_bound: float
    gamma_c: float


def _check(B, C):
    check_asymptotic_domain(B, C, ADMISSIBLE_EPS)


def _check_heuristic(B, C):
    if not (ADMISSIBLE_EPS < C < 1.0 - ADMISSIBLE_EPS):
        raise DomainError(f"C={C} outside (0, 1)")
    if not (ADMISSIBLE_EPS < B and B * C < 1.0 - ADMISSIBLE_EPS):
        raise DomainError(f"B={B} outside (0, 1/C)")


def _flags(delta):
    return (3 * delta - 1, 1.0), 2 * delta <= 1


def z11_star(B: float, C: float) -> float:
    """Limit of the heavy-heavy block of the typical table."""
    _check(B, C)
    return B * B * (1 - C) / (B * B - 2 * B + 1 / C)


def log_count_expansion(params: FamilyParams) -> ExpansionCoeffs:
    B, C = params.B, params.C
    _check(B, C)
    f = bernoulli_entropy
    z = z11_star(B, C)
    BC = B * C
    c_n2 = f(C)
    c_n1d = 2 * f(BC) - BC * math.log((1 - C) / C)
    c_n2d = (f(z) + z * math.log((1 - C) / C * BC ** 2 / (1 - BC) ** 2)
             - B * B * C / (2 * (1 - C)))
    exps, dominated = _flags(params.delta)
    return ExpansionCoeffs(c_n2, c_n1d, c_n2d, exps, True, dominated)


def log_heuristic_expansion(params: FamilyParams) -> ExpansionCoeffs:
    B, C = params.B, params.C
    _check_heuristic(B, C)
    BC = B * C
    c_n2 = bernoulli_entropy(C)
    c_n1d = 2 * bernoulli_entropy(BC) - BC * math.log((1 - C) / C)
    c_n2d = ((B * B * C - 4 * BC + 2 * C) / (2 * (1 - C))
             + math.log(1 - C) - 2 * math.log(1 - BC))
    exps, dominated = _flags(params.delta)
    return ExpansionCoeffs(c_n2, c_n1d, c_n2d, exps, True, dominated)


def _x_value(B, C):
    return (B * B * C - 2 * B * C + 1) / (1 - C)


def delta(B: float, C: float) -> float:
    """Limit of n^(-2 delta) log(|M| / I) for the family."""
    _check(B, C)
    x = _x_value(B, C)
    return 1 - x - math.log(1 / x)


def x_value(B: float, C: float) -> float:
    """x = (B^2 C - 2BC + 1)/(1 - C); the exponent equals 1 - x + log x."""
    _check(B, C)
    return _x_value(B, C)


def gamma_c(C: float) -> float:
    b = 1.0 / bmax(C)
    return (C - 2 * C * b + b * b) / ((1 - C) * b * b)


def delta_bounds(C: float) -> tuple[float, float]:
    """The published sandwich: min(1 - 1/C + log(1/C), 1 - g + log g) < delta <= 0."""
    g = gamma_c(C)
    return min(-1 / C + math.log(1 / C) + 1, -g + math.log(g) + 1), 0.0


def delta_infimum(C: float) -> float:
    """Exact infimum of delta(., C) over 0 < B < bmax(C).

    x(B) is a convex parabola minimised at B = 1, so the infimum of 1 - x + log x
    sits at one of the two ends: x(0) = 1/(1 - C) or x(bmax) = gamma_c.
    """
    g = gamma_c(C)
    x0 = 1 / (1 - C)
    return min(1 - x0 + math.log(x0), 1 - g + math.log(g))


def delta_result(B: float, C: float) -> DeltaResult:
    return DeltaResult(delta(B, C), delta_bounds(C)[0], gamma_c(C))


def finite_n_typical_prediction(params: FamilyParams) -> dict:
    """Limits of the three typical-table blocks and the stated bulk error bound."""
    B, C = params.B, params.C
    _check(B, C)
    return {
        "z1": z11_star(B, C),
        "z2": B * C,
        "z3": C,
        "z3_bound": B * C * params.n ** (params.delta - 1),
        "rate": params.n ** (params.delta - 1),
    }


def block_entropy(n: int, heavy: int, z1: float, z2: float, z3: float) -> float:
    """g(Z) for a block-constant family table: n^2 f(z3) + 2 n k f(z2) + k^2 f(z1)."""
    f = bernoulli_entropy
    return n * n * f(z3) + 2 * n * heavy * f(z2) + heavy * heavy * f(z1)


# --- second route: truncated power series in h = n^delta / n -------------------

class Series:
    """Coefficients (a0, a1, a2) of a0 + a1 h + a2 h^2, truncated past h^2."""

    __slots__ = ("a",)

    def __init__(self, *a):
        a = list(a) + [0.0] * (3 - len(a))
        self.a = tuple(float(v) for v in a[:3])

    def __add__(self, other):
        other = _as_series(other)
        return Series(*(p + q for p, q in zip(self.a, other.a)))

    __radd__ = __add__

    def __neg__(self):
        return Series(*(-p for p in self.a))

    def __sub__(self, other):
        return self + (-_as_series(other))

    def __mul__(self, other):
        p, q = self.a, _as_series(other).a
        return Series(p[0] * q[0], p[0] * q[1] + p[1] * q[0],
                      p[0] * q[2] + p[1] * q[1] + p[2] * q[0])

    __rmul__ = __mul__

    def log(self):
        a0, a1, a2 = self.a
        if a0 <= 0:
            raise DomainError("log of a series with non-positive constant term")
        return Series(math.log(a0), a1 / a0, a2 / a0 - a1 * a1 / (2 * a0 * a0))

    def xlogx(self):
        return self * self.log()


def _as_series(v):
    return v if isinstance(v, Series) else Series(v)


H = Series(0.0, 1.0)


def _f_taylor(a: float):
    """f(a), f'(a), f''(a)/2 for the Bernoulli entropy."""
    return bernoulli_entropy(a), math.log((1 - a) / a), 1 / (2 * (a - 1) * a)


def log_count_assembled(params: FamilyParams) -> ExpansionCoeffs:
    """Coefficients from n^2 f(z3) + 2 n^(1+delta) f(z2) + n^(2 delta) f(z1).

    The blocks are expanded as z3 = C - BC h + z* h^2 and z2 = BC - z* h,
    then each f is replaced by its second-order Taylor polynomial.
    """
    B, C = params.B, params.C
    _check(B, C)
    z = z11_star(B, C)
    BC = B * C

    def taylor(a, dev):
        f0, f1, f2 = _f_taylor(a)
        return f0 + f1 * dev + f2 * dev * dev

    bulk = taylor(C, Series(0.0, -BC, z))      # times n^2
    cross = 2 * H * taylor(BC, Series(0.0, -z))  # 2 n^(1+delta) = n^2 * 2h
    heavy = H * H * bernoulli_entropy(z)          # n^(2 delta) = n^2 h^2
    total = bulk + cross + heavy
    exps, dominated = _flags(params.delta)
    return ExpansionCoeffs(*total.a, exps, True, dominated)


def log_heuristic_assembled(params: FamilyParams) -> ExpansionCoeffs:
    """Coefficients from the Stirling main part of log I, divided by n^2.

    Uses log C(a+b, a) ~ (a+b)log(a+b) - a log a - b log b.  With the table
    side n + s, s = n h, every term is n^2 times a series in h; the log n
    pieces cancel exactly because each binomial's top equals the sum of its
    two bottoms.
    """
    B, C = params.B, params.C
    _check_heuristic(B, C)
    BC = B * C
    side = 1 + H                              # (n + s)/n
    total_ones = Series(C, BC)                # N / n^2
    empty = side * side - total_ones          # (mn - N) / n^2

    def lbinom(top, k):
        return top.xlogx() - k.xlogx() - (top - k).xlogx()

    out = -lbinom(side * side, total_ones)
    # s heavy lines of sum BC n and n bulk lines of sum C n, on both rows and columns
    out = out + 2 * H * lbinom(side, Series(BC))
    out = out + 2 * lbinom(side, Series(C))
    exps, dominated = _flags(params.delta)
    return ExpansionCoeffs(*out.a, exps, True, dominated)
