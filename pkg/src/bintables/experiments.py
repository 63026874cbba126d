"""Experiment drivers behind the command line.

Each driver returns plain records (dicts) in a deterministic order; the CLI
takes care of formatting them as CSV or JSON.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .asymptotics import (
    block_entropy,
    delta,
    delta_bounds,
    delta_infimum,
    finite_n_typical_prediction,
    gamma_c,
    log_count_expansion,
    log_heuristic_expansion,
    x_value,
)
from .errors import ConvergenceError, DomainError
from .exact import DEFAULT_MAX_STATES, count_dp
from .heuristic import log_heuristic
from .margins import FamilyParams, MarginPair, bmax, build_family_margins, is_feasible
from .typical import DEFAULT_GAMMA, DEFAULT_TIME_BUDGET, DEFAULT_TOL, barvinok_bounds, solve_typical_table

FIGURE1_C = (0.5, 0.25, 0.625, 0.125)
FLOAT_DIGITS = 15


@dataclass
class ExperimentConfig:
    command: str
    params: dict = field(default_factory=dict)
    tol: float = DEFAULT_TOL
    gamma: float = DEFAULT_GAMMA
    threads: int = 1
    out: str | None = None
    format: str = "csv"

    def to_dict(self) -> dict:
        return asdict(self)


# --- single-instance reports ------------------------------------------------

def count_report(margins: MarginPair, gamma: float = DEFAULT_GAMMA, tol: float = DEFAULT_TOL,
                 max_states: int = DEFAULT_MAX_STATES) -> dict:
    """Exact count next to the entropy bounds and the independence estimate."""
    report = {"rows": list(margins.rows), "cols": list(margins.cols)}
    if not is_feasible(margins):
        report.update(status="infeasible", count=0, log_count=-math.inf)
        return report
    result = count_dp(margins, max_states=max_states)
    lower, upper = barvinok_bounds(margins, gamma=gamma, tolerance=tol)
    report.update(status="ok", count=result.count, log_count=result.log_count,
                  gZ=upper, barvinok_lower=lower, gamma=gamma)
    if margins.is_positive():
        log_i = log_heuristic(margins).log_estimate
        report.update(log_I=log_i, log_rho=result.log_count - log_i,
                      rho=math.exp(result.log_count - log_i))
    else:
        report.update(log_I=None, log_rho=None, rho=None)
    return report


def delta_report(B: float, C: float, delta_exp: float = 0.5) -> dict:
    params = FamilyParams(1, delta_exp, B, C)
    count_c = log_count_expansion(params)
    heur_c = log_heuristic_expansion(params)
    lower, upper = delta_bounds(C)
    return {
        "B": B, "C": C,
        "delta": delta(B, C),
        "lower_bound": lower,
        "upper_bound": upper,
        "infimum": delta_infimum(C),
        "gamma_c": gamma_c(C),
        "x_value": x_value(B, C),
        "log_count_expansion": count_c.to_dict(),
        "log_heuristic_expansion": heur_c.to_dict(),
    }


# --- grids ------------------------------------------------------------------

def figure1_rows(c_values: Sequence[float] = FIGURE1_C, resolution: int = 200) -> list[dict]:
    """Delta against B on a uniform interior grid of (0, bmax(C)), plus B = 1."""
    if resolution < 1 or not c_values:
        raise DomainError("figure1 needs at least one C and a positive resolution")
    for C in c_values:
        bmax(C)
    out = []
    for C in c_values:
        top = bmax(C)
        bs = sorted({top * k / (resolution + 1) for k in range(1, resolution + 1)} | {1.0})
        out.extend({"C": C, "B": B, "delta": delta(B, C)} for B in bs)
    return out


def admissible_grid(nb: int, nc: int, c_max: float = 0.75) -> list[tuple[float, float]]:
    """nb x nc interior grid: C_i = c_max i/(nc+1), B_j = bmax(C_i) j/(nb+1)."""
    if nb < 1 or nc < 1:
        raise DomainError("grid dimensions must be positive")
    pts = []
    for i in range(1, nc + 1):
        C = c_max * i / (nc + 1)
        top = bmax(C)
        pts.extend((top * j / (nb + 1), C) for j in range(1, nb + 1))
    return pts


def sweep_point(B: float, C: float) -> dict:
    row = {"B": B, "C": C}
    try:
        d = delta(B, C)
        params = FamilyParams(1, 0.5, B, C)
        diff = log_count_expansion(params).c_n2d - log_heuristic_expansion(params).c_n2d
        lower, _ = delta_bounds(C)
    except DomainError as exc:
        row.update(status=f"domain: {exc}")
        return row
    row.update(status="ok", delta=d, lower_bound=lower, gamma_c=gamma_c(C),
               x_value=x_value(B, C), identity_residual=d - diff,
               lower_ok=lower < d, upper_ok=d <= 0.0, infimum_ok=delta_infimum(C) < d)
    return row


def sweep_rows(points: Iterable[tuple[float, float]], threads: int = 1) -> list[dict]:
    points = list(points)
    if not points:
        raise DomainError("empty grid")
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(lambda p: sweep_point(*p), points))
    return [sweep_point(B, C) for B, C in points]


def sweep_summary(rows: list[dict]) -> dict:
    ok = [r for r in rows if r["status"] == "ok"]
    return {
        "points": len(rows),
        "evaluated": len(ok),
        "max_identity_residual": max((abs(r["identity_residual"]) for r in ok), default=math.nan),
        "lower_bound_violations": sum(not r["lower_ok"] for r in ok),
        "upper_bound_violations": sum(not r["upper_ok"] for r in ok),
        "infimum_violations": sum(not r["infimum_ok"] for r in ok),
    }


# --- finite-n convergence ---------------------------------------------------

def convergence_point(B: float, C: float, delta_exp: float, n: int, tol: float = DEFAULT_TOL,
                      collapse: bool = True, time_budget: float = DEFAULT_TIME_BUDGET) -> dict:
    params = FamilyParams(n, delta_exp, B, C)
    pred = finite_n_typical_prediction(params)
    row = {"n": n, "heavy": params.heavy}
    try:
        margins = build_family_margins(params)
        table = solve_typical_table(margins, tolerance=tol, collapse=collapse,
                                    time_budget=time_budget)
    except (ConvergenceError, DomainError) as exc:
        row["status"] = f"{type(exc).__name__}: {exc}"
        return row
    k = params.heavy
    z1, z2, z3 = table.entries[0, 0], table.entries[0, k], table.entries[k, k]
    scale = n ** (1 - delta_exp)
    g = table.entropy_value
    prediction = log_count_expansion(params).evaluate(n, delta_exp)
    resid = g - prediction
    row.update(
        status="ok",
        z1=z1, z2=z2, z3=z3,
        z1_err_scaled=abs(z1 - pred["z1"]) * scale,
        z2_err_scaled=abs(z2 - pred["z2"]) * scale,
        z3_err_scaled=abs(z3 - pred["z3"]) * scale,
        z3_within_bound=abs(z3 - pred["z3"]) <= pred["z3_bound"],
        gZ=g,
        block_gZ=block_entropy(n, k, z1, z2, z3),
        expansion_prediction=prediction,
        residual=resid,
        scaled_residual=resid / max(n ** (3 * delta_exp - 1), n),
        solver_residual=table.residual,
    )
    return row


def convergence_rows(B: float, C: float, delta_exp: float, ns: Sequence[int], threads: int = 1,
                     **kw) -> list[dict]:
    FamilyParams(1, delta_exp, B, C).check_asymptotic()
    if not ns:
        raise DomainError("empty n list")
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(lambda n: convergence_point(B, C, delta_exp, n, **kw), ns))
    return [convergence_point(B, C, delta_exp, n, **kw) for n in ns]


def empirical_constants(rows: list[dict]) -> dict:
    """Sup over the run of the scaled block errors, i.e. empirical convergence constants."""
    ok = [r for r in rows if r.get("status") == "ok"]
    return {f"gamma_{b}": max(r[f"z{b}_err_scaled"] for r in ok) for b in (1, 2, 3)}


# --- output -----------------------------------------------------------------

def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, f".{FLOAT_DIGITS}g")
    if isinstance(v, (list, tuple)):
        return " ".join(format_value(x) for x in v)
    if hasattr(v, "item"):
        return format_value(v.item())
    return str(v)


def to_csv(rows: list[dict]) -> str:
    columns = []
    for r in rows:
        columns.extend(k for k in r if k not in columns)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([format_value(r.get(k)) for k in columns])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def to_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2) + "\n"


def write_output(text: str, config: ExperimentConfig) -> None:
    """Write ``text`` to config.out (plus a JSON sidecar) or to stdout."""
    if config.out is None:
        print(text, end="")
        return
    path = Path(config.out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, newline="\n")
    sidecar = path.with_name(path.name + ".meta.json")
    sidecar.write_text(to_json({"config": config.to_dict(), "version": __version__}))
