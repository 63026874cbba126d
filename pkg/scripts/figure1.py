"""Delta(B, C) against B for the four plotted values of C, written as CSV."""
import argparse
import sys
from pathlib import Path

from bintables.cli import main

RESULTS = Path(__file__).resolve().parent.parent / "results"

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--resolution", type=int, default=400)
    ap.add_argument("--out", default=str(RESULTS / "figure1.csv"))
    args = ap.parse_args()
    sys.exit(main(["figure1", "--resolution", str(args.resolution), "--out", args.out]))
