"""Identity residual and bound checks on the admissible (B, C) grid."""
import argparse
import sys
from pathlib import Path

from bintables.cli import main

RESULTS = Path(__file__).resolve().parent.parent / "results"

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nb", type=int, default=100)
    ap.add_argument("--nc", type=int, default=100)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default=str(RESULTS / "sweep.csv"))
    args = ap.parse_args()
    # summary JSON goes to stderr
    sys.exit(main(["sweep", "--nb", str(args.nb), "--nc", str(args.nc),
                   "--threads", str(args.threads), "--out", args.out]))
