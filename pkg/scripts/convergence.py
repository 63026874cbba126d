"""Finite-n typical tables of the margin family against their limits.

Runs one CSV per parameter set and prints the empirical constants.
"""
import argparse
import json
from pathlib import Path

from bintables import experiments as ex

RESULTS = Path(__file__).resolve().parent.parent / "results"

PARAM_SETS = [
    # (B, C, delta)
    (0.5, 0.5, 0.5),
    (1.0, 0.5, 0.5),
    (1.2, 0.3, 0.6),
    (1.8, 0.25, 0.75),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-list", default="50,100,200,400,800,1600")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    ns = [int(x) for x in args.n_list.split(",")]
    for B, C, d in PARAM_SETS:
        rows = ex.convergence_rows(B, C, d, ns, threads=args.threads)
        name = f"convergence_B{B}_C{C}_d{d}.csv"
        cfg = ex.ExperimentConfig("convergence", {"B": B, "C": C, "delta": d, "n_list": ns},
                                  threads=args.threads, out=str(RESULTS / name))
        ex.write_output(ex.to_csv(rows), cfg)
        scaled = [abs(r["scaled_residual"]) for r in rows if r["status"] == "ok"]
        summary = {k: float(v) for k, v in ex.empirical_constants(rows).items()}
        summary["max_scaled_residual"] = max(scaled)
        print(f"B={B} C={C} delta={d}: {json.dumps(summary)}")


if __name__ == "__main__":
    main()
