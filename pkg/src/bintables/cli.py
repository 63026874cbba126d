"""Command-line entry point: ``bintables <command> [options]``.

Exit codes: 0 success, 2 domain/config error (including infeasible margins),
3 numerical non-convergence, 4 resource cap.
"""

from __future__ import annotations

import argparse
import sys

from . import experiments as ex
from .errors import ConvergenceError, DomainError, InfeasibleError, ResourceError
from .exact import DEFAULT_MAX_STATES
from .heuristic import log_heuristic
from .margins import FamilyParams, MarginPair, build_family_margins
from .typical import DEFAULT_GAMMA, DEFAULT_TIME_BUDGET, DEFAULT_TOL, solve_typical_table

EXIT_OK, EXIT_DOMAIN, EXIT_CONVERGENCE, EXIT_RESOURCE = 0, 2, 3, 4


class UsageError(DomainError):
    pass


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _common(fmt_default: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--out", help="output path; a <out>.meta.json sidecar is written next to it")
    p.add_argument("--format", choices=("csv", "json"), default=fmt_default)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="typical-table margin tolerance")
    p.add_argument("--gamma", type=float, default=DEFAULT_GAMMA, help="constant in the entropy lower bound")
    p.add_argument("--threads", type=int, default=1)
    return p


def _margin_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rows", type=_int_list)
    p.add_argument("--cols", type=_int_list)
    p.add_argument("--margins-file")
    _family_args(p)


def _family_args(p: argparse.ArgumentParser, required: bool = False) -> None:
    p.add_argument("--n", type=int, required=required)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--B", type=float, required=required)
    p.add_argument("--C", type=float, required=required)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bintables", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    single, grid = _common("json"), _common("csv")

    p = sub.add_parser("count", parents=[single], help="exact count with bounds and heuristic")
    _margin_args(p)
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)

    p = sub.add_parser("typical", parents=[single], help="solve the maximum-entropy table")
    _margin_args(p)
    p.add_argument("--no-collapse", action="store_true", help="one dual per row/column")
    p.add_argument("--time-budget", type=float, default=DEFAULT_TIME_BUDGET)

    p = sub.add_parser("heuristic", parents=[single], help="log of the independence estimate")
    _margin_args(p)

    p = sub.add_parser("delta", parents=[single], help="correlation-ratio exponent and expansions")
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--C", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.5)

    p = sub.add_parser("figure1", parents=[grid], help="delta against B for several C")
    p.add_argument("--C-list", type=_float_list, default=list(ex.FIGURE1_C))
    p.add_argument("--resolution", type=int, default=200)

    p = sub.add_parser("convergence", parents=[grid], help="finite-n typical tables vs limits")
    _family_args(p)
    p.add_argument("--n-list", type=_int_list, default=[50, 100, 200, 400])
    p.add_argument("--no-collapse", action="store_true")
    p.add_argument("--time-budget", type=float, default=DEFAULT_TIME_BUDGET)

    p = sub.add_parser("sweep", parents=[grid], help="identity and bound checks over a (B, C) grid")
    p.add_argument("--nb", type=int, default=100, help="B points per C on (0, bmax(C))")
    p.add_argument("--nc", type=int, default=100, help="C points on (0, 3/4)")
    p.add_argument("--B-list", type=_float_list, help="explicit B values (overrides --nb)")
    p.add_argument("--C-list", type=_float_list, help="explicit C values (overrides --nc)")
    return parser


def _margins(args) -> MarginPair:
    if args.margins_file:
        return MarginPair.from_json(args.margins_file)
    if args.rows is not None or args.cols is not None:
        if args.rows is None or args.cols is None:
            raise UsageError("--rows and --cols go together")
        return MarginPair(tuple(args.rows), tuple(args.cols))
    if args.n is not None and args.B is not None and args.C is not None:
        return build_family_margins(FamilyParams(args.n, args.delta, args.B, args.C))
    raise UsageError("give --rows/--cols, --margins-file, or --n/--B/--C")


def _emit(records, args, config: ex.ExperimentConfig, summary: dict | None = None):
    if args.format == "json":
        payload = records if summary is None else {"summary": summary, "records": records}
        text = ex.to_json(payload)
    else:
        rows = records if isinstance(records, list) else [records]
        text = ex.to_csv(rows)
    ex.write_output(text, config)
    if summary is not None and args.format == "csv":
        print(ex.to_json(summary), end="", file=sys.stderr)


def _config(args) -> ex.ExperimentConfig:
    skip = {"command", "out", "format", "tol", "gamma", "threads"}
    params = {k: v for k, v in vars(args).items() if k not in skip}
    return ex.ExperimentConfig(args.command, params, args.tol, args.gamma, args.threads,
                               args.out, args.format)


def run(args) -> int:
    config = _config(args)
    cmd = args.command
    if cmd == "count":
        report = ex.count_report(_margins(args), gamma=args.gamma, tol=args.tol,
                                 max_states=args.max_states)
        _emit(report, args, config)
        if report["status"] == "infeasible":
            print("infeasible: no 0-1 matrix has these margins", file=sys.stderr)
            return EXIT_DOMAIN
    elif cmd == "typical":
        margins = _margins(args)
        table = solve_typical_table(margins, tolerance=args.tol, collapse=not args.no_collapse,
                                    time_budget=args.time_budget)
        _emit({**margins.to_dict(), **table.to_dict()}, args, config)
    elif cmd == "heuristic":
        margins = _margins(args)
        if not margins.is_positive():
            raise DomainError("the independence estimate needs strictly positive margins")
        res = log_heuristic(margins)
        _emit({**margins.to_dict(), "log_estimate": res.log_estimate, "N": res.N}, args, config)
    elif cmd == "delta":
        _emit(ex.delta_report(args.B, args.C, args.delta), args, config)
    elif cmd == "figure1":
        if not args.C_list:
            raise UsageError("empty C list")
        _emit(ex.figure1_rows(args.C_list, args.resolution), args, config)
    elif cmd == "convergence":
        if args.B is None or args.C is None:
            raise UsageError("convergence needs --B and --C")
        rows = ex.convergence_rows(args.B, args.C, args.delta, args.n_list, threads=args.threads,
                                   tol=args.tol, collapse=not args.no_collapse,
                                   time_budget=args.time_budget)
        _emit(rows, args, config, summary=ex.empirical_constants(rows))
    elif cmd == "sweep":
        if args.B_list is not None or args.C_list is not None:
            bs, cs = args.B_list or [], args.C_list or []
            points = [(B, C) for C in cs for B in bs]
        else:
            points = ex.admissible_grid(args.nb, args.nc)
        if not points:
            raise UsageError("empty grid")
        rows = ex.sweep_rows(points, threads=args.threads)
        _emit(rows, args, config, summary=ex.sweep_summary(rows))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except (DomainError, InfeasibleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
