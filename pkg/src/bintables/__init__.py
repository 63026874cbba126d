"""Exact counts, entropy bounds and asymptotics for binary contingency tables."""

__version__ = "0.1.0"

from .errors import ConvergenceError, DomainError, InfeasibleError, ResourceError
from .margins import FamilyParams, MarginPair, bmax, build_family_margins, is_feasible
from .exact import CountResult, count_brute_force, count_dp, count_rowwise, correlation_ratio_exact
from .heuristic import HeuristicResult, log_heuristic
from .typical import TypicalTable, barvinok_bounds, bernoulli_entropy, entropy, solve_typical_table
from .asymptotics import (
    DeltaResult,
    ExpansionCoeffs,
    delta,
    delta_bounds,
    finite_n_typical_prediction,
    gamma_c,
    log_count_expansion,
    log_heuristic_expansion,
    z11_star,
)
