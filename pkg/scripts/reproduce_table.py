"""Run the eight-dataset benchmark and write results/reproduction.{json,md}.

    python scripts/reproduce_table.py            # validation-selected grid, 10 seeds
    python scripts/reproduce_table.py --oracle   # select on test accuracy instead
"""

import argparse
import sys
from pathlib import Path

from curious_elm.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--oracle", action="store_true")
    ap.add_argument("--seeds", type=int)
    args = ap.parse_args()
    out = ROOT / "results" / ("reproduction_oracle.json" if args.oracle else "reproduction.json")
    out.parent.mkdir(exist_ok=True)
    argv = ["reproduce", "--manifest", str(ROOT / "data" / "manifest.json"), "--out", str(out)]
    if args.oracle:
        argv.append("--oracle")
    if args.seeds:
        argv += ["--seeds", str(args.seeds)]
    sys.exit(main(argv))
